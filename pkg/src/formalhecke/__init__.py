"""Formal group laws, formal group algebras of root data, and their Demazure and Hecke operators.

Exact truncated power series with rational coefficients underlie everything:
laws (:mod:`.fgl`), root data and Weyl groups (:mod:`.rootdata`), the formal
group algebra and its localisation (:mod:`.fga`, :mod:`.localized`), the
twisted algebra with X_i and T_i (:mod:`.twisted`), exponential transport
(:mod:`.transport`) and the verification suites (:mod:`.verify`).
"""
from .errors import AlgebraError, PrecisionExhausted
from .fga import FGAConfig, FGAContext
from .fgl import LawSpec, build_law
from .rootdata import build_datum
from .twisted import TwistedAlgebra

__all__ = [
    "AlgebraError",
    "PrecisionExhausted",
    "FGAConfig",
    "FGAContext",
    "LawSpec",
    "build_law",
    "build_datum",
    "TwistedAlgebra",
]
