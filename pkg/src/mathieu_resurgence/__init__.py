"""Band spectrum of the periodic cosine Schrodinger problem, its resurgent
series structure, and the numerical oracles that cross-validate every
asymptotic formula in the package.
"""

__version__ = "0.1.0"

from .series import PolyB, PolySeries, Q, TransSeries, transseries_substitute

__all__ = [
    "Q",
    "PolyB",
    "PolySeries",
    "TransSeries",
    "transseries_substitute",
    "__version__",
]
