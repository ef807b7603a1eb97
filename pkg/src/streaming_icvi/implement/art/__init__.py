from __future__ import annotations

from streaming_icvi.implement.art.fuzzy import FuzzyArt, complement_code
from streaming_icvi.implement.art.smart import FuzzySmart

__all__ = ["FuzzyArt", "FuzzySmart", "complement_code"]
