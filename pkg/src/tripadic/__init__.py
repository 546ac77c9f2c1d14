"""Exact and p-adic arithmetic for triple products of modular forms.

Subpackages are imported lazily; ``from tripadic import qseries`` etc.
"""

__version__ = "0.1.0"

__all__ = ["arith", "characters", "polynomial", "serialize", "qseries", "siegel",
           "siegel_series", "golden", "triple", "linalg", "spectral", "measures",
           "pipeline", "cli", "errors"]
