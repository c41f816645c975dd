"""Boundary triplets, Weyl functions and Krein resolvent corrections.

Numerical toolkit for self-adjoint extension theory of operators of the
form S = A(x)I + I(x)T built from a boundary triplet for A* and a
pure-point spectral measure for T.  Scalar Herglotz model coefficients,
matrix Weyl functions with gamma-fields, normalization and real-point
regularization, operator-valued spectral integrals, the 1-D Schrodinger
and Dirac model catalogue, and a Jaynes-Cummings quantum-dot point
contact, all cross-validated against brute-force finite-dimensional
oracles.
"""

from . import herglotz
from . import triplets
from . import spectral
from . import tensor
from . import models1d
from . import jcdot
from . import oracle

__version__ = "0.1.0"

__all__ = [
    "herglotz",
    "triplets",
    "spectral",
    "tensor",
    "models1d",
    "jcdot",
    "oracle",
    "__version__",
]
