"""Bicomplex numbers and the bicomplex Laplace transform with its inverse."""

from .bicomplex import (
    E1,
    E2,
    I1,
    I2,
    J,
    ONE,
    ZERO,
    Bicomplex,
    IdempotentPair,
    add,
    approx_eq,
    from_components,
    from_idempotent,
    inverse,
    is_singular,
    mul,
    neg,
    norm,
    sub,
    to_idempotent,
)
from .errors import *  # noqa: F401,F403
from .forward import QuadratureConfig, in_region, laplace_grid, laplace_point
from .inversion import (
    BromwichConfig,
    InversionResult,
    PoleSet,
    bromwich_component,
    bromwich_invert,
    find_poles,
    invert_grid,
    residue_at,
    residue_invert,
)
from .kernels import BACKEND
from .signals import (
    CATALOG_IDS,
    CatalogEntry,
    ImageFunction,
    RationalFunction,
    SignalSpec,
    catalog_lookup,
    decay_check,
    rational_eval,
)

__version__ = "0.1.0"
