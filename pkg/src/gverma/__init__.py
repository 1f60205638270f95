"""Generalized Verma modules in parabolic category O.

Root systems and Weyl groups, Kazhdan-Lusztig polynomials and their
parabolic alternating sums, Jantzen coefficients, and radical filtrations
of generalized Verma modules by two independent routes.
"""

from .block import BlockDescriptor, build_basic, build_block, classify_basic_systems
from .jantzen import jantzen_coefficients
from .kl import kl_from_R, kl_P, kl_Q, mu
from .parabolic import iPJ, iQJ
from .polynomial import IntPoly
from .radical import RadicalFiltration, cross_check, filtrations_from_kl, solve_block
from .root_system import CartanType, RootDatum
from .weyl_group import WeylElem, WeylGroup, weyl_group

__all__ = [
    "BlockDescriptor",
    "CartanType",
    "IntPoly",
    "RadicalFiltration",
    "RootDatum",
    "WeylElem",
    "WeylGroup",
    "build_basic",
    "build_block",
    "classify_basic_systems",
    "cross_check",
    "filtrations_from_kl",
    "iPJ",
    "iQJ",
    "jantzen_coefficients",
    "kl_P",
    "kl_Q",
    "kl_from_R",
    "mu",
    "solve_block",
    "weyl_group",
]
