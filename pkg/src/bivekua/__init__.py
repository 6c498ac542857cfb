"""Numerical toolkit for the bicomplex Vekua equation on planar domains."""

from .bicomplex import (J, K, ONE, P_MINUS, P_PLUS, Bicomplex, IdempotentPair, conj_bar,
                        conj_dagger, conj_star, exp, format_bicomplex, hat, hat_power,
                        idempotent_split, inner, inverse, is_zero_divisor, mul, norm,
                        parse_bicomplex, recompose)
from .calculus import (GridFunction, analytic_power, d, d_bar, inner_l2, integrate, lp_norm,
                       vekua_residual)
from .domain import Domain, Grid, build_grid
from .integral import (borel_pompeiu_residual, cauchy_boundary, theodorescu,
                       theodorescu_adjoint)
from .vekua import (Coefficients, VekuaSolutionSet, hodge_complement_element,
                    make_solution_set, phi_a, q_apply, s_apply, solve_s)
from .bergman import (KernelSample, OrthoBasis, b_zero_reduction_check, gram_schmidt,
                      kernel_eval, project, reproduce)
from .main_vekua import (Conductivity, anti_conjugate, b_from_f, catalog,
                         conductivity_residuals, dirichlet_solve, hilbert_transform,
                         metaharmonic_conjugate, radial_conjugation, schrodinger_residuals)
from .errors import *  # noqa: F401,F403

__version__ = "0.1.0"
