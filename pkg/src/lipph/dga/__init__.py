"""Minimal DGAs, homomorphisms and homotopies into finite targets, and their dilatation."""

from .algebra import Elt, MinimalDga, TargetAlgebra
from .certificates import (
    Piecewise,
    forced_c2_certificate,
    forced_two_variable_certificate,
    random_admissible,
)
from .examples import EXAMPLES, eta_L_example, eta_L_two_example, s3vs3_model
from .maps import (
    Certificate,
    DgaHom,
    DgaHomotopy,
    alpha_exponent,
    check_homomorphism,
    check_homotopy,
    dilatation,
    extend_homotopy,
    grading_automorphism,
    obstruction_cochain,
    rescale_by_weights,
    u_dilatation,
)
from .poly import Poly, UPoly, real_roots, sup_abs_on, sup_on
