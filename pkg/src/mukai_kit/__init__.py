"""Exact lattice computations for moduli of sheaves on surfaces."""

from .cohlat import (
    CohClass,
    GammaClass,
    NSClass,
    SurfaceData,
    cup,
    deg_twisted,
    euler_form,
    expected_dim,
    from_gamma,
    mu_twisted,
    mukai_pairing,
    mukai_vector,
    to_gamma,
    todd,
    twisted_chern,
)
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CohClass",
    "GammaClass",
    "NSClass",
    "SurfaceData",
    "cup",
    "deg_twisted",
    "euler_form",
    "expected_dim",
    "from_gamma",
    "mu_twisted",
    "mukai_pairing",
    "mukai_vector",
    "to_gamma",
    "todd",
    "twisted_chern",
]
