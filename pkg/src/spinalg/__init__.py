"""Structure constants of su(2S+1) from Wigner symbols, and real-form qudit dynamics."""
from .errors import ConsistencyError, DomainError
from .exact import HalfInt, SqrtRational
from .spinbasis import BasisLabel, BasisSet, hermitian_basis, tensor_operator
from .structconst import StructureTables, build_tables
from .wigner import six_j, three_jm, triangle_satisfied

__all__ = [
    "ConsistencyError",
    "DomainError",
    "HalfInt",
    "SqrtRational",
    "BasisLabel",
    "BasisSet",
    "hermitian_basis",
    "tensor_operator",
    "StructureTables",
    "build_tables",
    "six_j",
    "three_jm",
    "triangle_satisfied",
]

__version__ = "0.1.0"
