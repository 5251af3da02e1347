"""nordenlab: exact symbolic geometry of Norden-type metric structures
on finite-dimensional Lie algebras."""

from .scalars import Rational, Scalar, scalar_arith, scalar_eval, scalar_parse

__all__ = [
    "Rational",
    "Scalar",
    "scalar_arith",
    "scalar_eval",
    "scalar_parse",
]
