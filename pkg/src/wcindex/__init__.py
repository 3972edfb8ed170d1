"""compressed index for texts with wildcard groups."""

from .dictionary import FullTextDictionary, build_dictionary
from .wildcard import WildcardIndex, build_index

__all__ = ["FullTextDictionary", "WildcardIndex", "build_dictionary", "build_index"]
__version__ = "0.1.0"
