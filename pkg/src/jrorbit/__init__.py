"""Exact local orbital integrals for unitary and symmetric-space comparisons, with
Weil representation and archimedean tooling."""

from .errors import JRError
from .padic import LocalFieldCtx, QuadExtElem, hilbert_symbol, vp
from .lattice import Lattice, dual_lattice, hnf, smith_form
from .orbit import (
    InvariantVector,
    SemiLiePair,
    UnitaryPair,
    decide_side,
    invariants,
    lift_symmetric,
    lift_unitary,
    reduce_symmetric,
    reduce_unitary,
    transfer_factor,
)
from .orbital import LaurentX, fl_verify, orb_core, orb_gl, orb_group, orb_u, special_values
from .arch import nilpotent_arch, orb_arch, orb_arch_quadrature
from .series import LogLinear, QExp, support_check, tate_fe_check

__all__ = [
    "JRError", "LocalFieldCtx", "QuadExtElem", "hilbert_symbol", "vp", "Lattice", "dual_lattice", "hnf", "smith_form",
    "InvariantVector", "SemiLiePair", "UnitaryPair", "decide_side", "invariants", "lift_symmetric", "lift_unitary",
    "reduce_symmetric", "reduce_unitary", "transfer_factor", "LaurentX", "fl_verify", "orb_core", "orb_gl", "orb_group",
    "orb_u", "special_values", "nilpotent_arch", "orb_arch", "orb_arch_quadrature", "LogLinear", "QExp", "support_check",
    "tate_fe_check",
]

__version__ = "0.1.0"
