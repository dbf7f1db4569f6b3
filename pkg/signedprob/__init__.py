"""
Signed probability toolkit Python package.
"""

from signedprob.analyzer import ObservationSpaceAnalyzer
from signedprob.scalar import Scalar, format_scalar, parse_scalar
from signedprob.utils import setup_logging

__version__ = "0.1.0"
__all__ = ["ObservationSpaceAnalyzer", "Scalar", "format_scalar", "parse_scalar", "setup_logging"]
