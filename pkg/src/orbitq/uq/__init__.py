"""Quantum layer: U_q(g) at rank <= 2, quantized Verma modules, F(U), and A_{t,lambda,h}."""

from .algebra import HOPF_CONVENTION, Tensor, UqAlgebra, UqElement
from .fu import ClosureError, GqBasis, ad_closure, classical_limit, find_Gq
from .module import QOp, QVermaModule, ad_action, phi
from .qslice import build_q_slice, equivariance_check, second_bracket_sl2

__all__ = [
    "HOPF_CONVENTION",
    "ClosureError",
    "GqBasis",
    "QOp",
    "QVermaModule",
    "Tensor",
    "UqAlgebra",
    "UqElement",
    "ad_action",
    "ad_closure",
    "build_q_slice",
    "classical_limit",
    "equivariance_check",
    "find_Gq",
    "phi",
    "second_bracket_sl2",
]
