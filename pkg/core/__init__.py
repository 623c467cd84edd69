from .jets import VarKey, JetSpace, x, aux
from .polynomial import DiffPolynomial
from .rational import DiffRational, eq_rational, derive_rational, order_in

__all__ = [
    "VarKey", "JetSpace", "x", "aux",
    "DiffPolynomial", "DiffRational", "eq_rational", "derive_rational", "order_in",
]
