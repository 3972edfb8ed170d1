"""little-endian, length-prefixed byte encoding shared by every component."""

import struct

import numpy as np


class FormatError(ValueError):
    """raised when serialized bytes cannot be decoded."""


class Writer:
    def __init__(self):
        self._parts = []

    def u8(self, x):
        self._parts.append(struct.pack("<B", x))

    def u32(self, x):
        self._parts.append(struct.pack("<I", x))

    def u64(self, x):
        self._parts.append(struct.pack("<Q", x))

    def i64(self, x):
        self._parts.append(struct.pack("<q", x))

    def raw(self, b):
        self._parts.append(bytes(b))

    def blob(self, b):
        self.u64(len(b))
        self._parts.append(bytes(b))

    def array(self, arr, dtype):
        arr = np.ascontiguousarray(arr, dtype=np.dtype(dtype).newbyteorder("<"))
        self.u64(arr.size)
        self._parts.append(arr.tobytes())

    def getvalue(self):
        return b"".join(self._parts)


class Reader:
    def __init__(self, data):
        self._mv = memoryview(data)
        self.pos = 0

    def _take(self, k):
        if self.pos + k > len(self._mv):
            raise FormatError("truncated payload")
        out = self._mv[self.pos:self.pos + k]
        self.pos += k
        return out

    def u8(self):
        return struct.unpack("<B", self._take(1))[0]

    def u32(self):
        return struct.unpack("<I", self._take(4))[0]

    def u64(self):
        return struct.unpack("<Q", self._take(8))[0]

    def i64(self):
        return struct.unpack("<q", self._take(8))[0]

    def raw(self, k):
        return bytes(self._take(k))

    def blob(self):
        return bytes(self._take(self.u64()))

    def array(self, dtype):
        dt = np.dtype(dtype).newbyteorder("<")
        count = self.u64()
        buf = self._take(count * dt.itemsize)
        return np.frombuffer(buf, dtype=dt).astype(np.dtype(dtype).newbyteorder("="))

    def expect_version(self, tag, version):
        got = self.u8()
        if got != version:
            raise FormatError(f"{tag}: unsupported version {got}")

    def at_end(self):
        return self.pos == len(self._mv)
