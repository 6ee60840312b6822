"""Exact computer algebra for the Pfaffian of the operator matrix Phi(u) over the
Weyl algebra of alternating matrices, and the skew Capelli operators Gamma_k
it generates.
"""
from .capelli import (
    GammaOperator,
    HermiteData,
    a_poly,
    gamma,
    hermite,
    hermite_relation_check,
    invariance_check,
    main_identity_check,
    symbol_identity_check,
)
from .forms import ExtElement, omega, pf_via_forms, tau, theta_minus, theta_plus, volume_coefficient
from .opmatrix import OpMatrix, build_D, build_M, build_phi, build_phi_tilde, iota, j_matrix
from .pfaffian import pf_anti, pf_commutative, pf_full, pf_restricted, pfaffian
from .scalars import Rational, ScalarMatrix, UPoly
from .textio import parse_element, parse_matrix
from .weyl import WeylElement, weyl_mul

__version__ = "0.1.0"

__all__ = [
    "GammaOperator",
    "HermiteData",
    "a_poly",
    "gamma",
    "hermite",
    "hermite_relation_check",
    "invariance_check",
    "main_identity_check",
    "symbol_identity_check",
    "ExtElement",
    "omega",
    "pf_via_forms",
    "tau",
    "theta_minus",
    "theta_plus",
    "volume_coefficient",
    "OpMatrix",
    "build_D",
    "build_M",
    "build_phi",
    "build_phi_tilde",
    "iota",
    "j_matrix",
    "pf_anti",
    "pf_commutative",
    "pf_full",
    "pf_restricted",
    "pfaffian",
    "Rational",
    "ScalarMatrix",
    "UPoly",
    "parse_element",
    "parse_matrix",
    "WeylElement",
    "weyl_mul",
]
