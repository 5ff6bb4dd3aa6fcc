"""Exact classification of degenerate principal series of split simply-laced p-adic groups."""
from .analyzer import ClassificationRecord, classify, is_regular
from .exponent import Exponent, Triple, initial_exponent
from .rootdata import build_root_datum
from .weyl import weyl_table

__version__ = "0.1.0"

__all__ = ["ClassificationRecord", "Exponent", "Triple", "build_root_datum", "classify", "initial_exponent",
           "is_regular", "weyl_table", "__version__"]
