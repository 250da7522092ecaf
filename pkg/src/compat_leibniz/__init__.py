"""Exact computations for compatible Leibniz algebras given by structure constants."""
from . import io
from .algebra import *  # noqa: F401,F403
from .bimodules import *  # noqa: F401,F403
from .catalog import *  # noqa: F401,F403
from .cochains import *  # noqa: F401,F403
from .deformation import *  # noqa: F401,F403
from .errors import (  # noqa: F401
    CocycleError,
    DegreeTooLarge,
    DimensionMismatch,
    FormatError,
    InadmissibleParameter,
    InvalidBimodule,
    InvalidDeformation,
    InvalidExtension,
    LeibnizError,
    NoInfinitesimal,
    NotInC0Com,
    NotMaurerCartan,
    SingularMatrixError,
)
from .extensions import *  # noqa: F401,F403
from .graded import *  # noqa: F401,F403
from .linalg import ExactMatrix, determinant, inverse, kernel_basis, rank, solve  # noqa: F401

__version__ = "0.1.0"
