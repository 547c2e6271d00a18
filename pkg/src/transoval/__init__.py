"""Translation hyperovals of PG(2,q^2), q even, in the Bruck-Bose representation.

Forward construction of C-points and C-planes in PG(4,q), checks of the
axioms A1-A4, and reconstruction of the regular spread and the oval exponent.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DomainError,
    FormatError,
    GeometryError,
    InvalidExponent,
    ReconstructionFailed,
)
from .field import FieldTable, Fq2Config, config_for_q, standard_config  # noqa: E402
from .kernels import BACKEND  # noqa: E402
from .ovals import Configuration, OvalSpec, forward_construct  # noqa: E402
from .axioms import check_spread_condition, verify_axioms  # noqa: E402
from .reconstruct import reconstruct_spread  # noqa: E402

__all__ = [
    "BACKEND",
    "Configuration",
    "DomainError",
    "FieldTable",
    "FormatError",
    "Fq2Config",
    "GeometryError",
    "InvalidExponent",
    "OvalSpec",
    "ReconstructionFailed",
    "check_spread_condition",
    "config_for_q",
    "forward_construct",
    "reconstruct_spread",
    "standard_config",
    "verify_axioms",
]
