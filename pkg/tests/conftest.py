import time

import numpy as np
import pytest

from wcindex.dictionary import FullTextDictionary
from wcindex.wildcard import WildcardIndex

SIX_SEGMENTS = [b"aa", b"aca", b"a", b"aa", b"cacc", b"ac"]
SIX_TEXT = "φaaφacaφaφaaφcaccφac$"
SMALL_TEXT = b"ab??ca?ab"

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    prev = _criteria.get(number)
    failed = rep.failed or (prev is not None and prev[1] == "FAIL")
    dur = (prev[2] if prev else 0.0) + rep.duration
    if rep.when == "call" or rep.failed:
        _criteria[number] = (title, "FAIL" if failed else "PASS", dur)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, status, dur = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  ({dur:.1f}s)")


@pytest.fixture(scope="session")
def six_dict():
    return FullTextDictionary.build(SIX_SEGMENTS, keep_text=True, sample_rate=4)


@pytest.fixture(scope="session")
def small_index():
    return WildcardIndex.build(SMALL_TEXT, sample_rate=4)


def random_dna(n, d, seed, group_size=1):
    """n random DNA bytes with d interior wildcard groups of the given size."""
    rng = np.random.default_rng(seed)
    t = np.frombuffer(b"ACGT", dtype=np.uint8)[rng.integers(0, 4, n)].copy()
    if d:
        slots = rng.choice(np.arange(2, (n - 2) // (group_size + 1)), d, replace=False)
        for s in slots:
            start = s * (group_size + 1)
            t[start:start + group_size] = ord("?")
    return t.tobytes()


class Timed:
    def __init__(self):
        self.elapsed = None

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self._t0


@pytest.fixture(scope="session")
def dna_1mb():
    return random_dna(1_000_000, 1000, seed=11)


@pytest.fixture(scope="session")
def dna_1mb_index(dna_1mb):
    with Timed() as t:
        ix = WildcardIndex.build(dna_1mb)
    ix.build_seconds = t.elapsed
    return ix
