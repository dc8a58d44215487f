"""Discrete dbar solvers, Koszul-complex lifts and their certificates.

Grids on the disc and bidisc (:mod:`grid`), exterior-algebra valued forms
(:mod:`forms`), a Cauchy-transform dbar solver (:mod:`dbar`), the Koszul
lifting and descent constructions with corona solutions (:mod:`koszul`),
uniform approximation by holomorphic combinations (:mod:`approx`) and
truncated Bergman-space models (:mod:`bergman`).
"""

from .errors import CertificateError, HypothesisError
from .grid import (CutOff, GridDomain, NodeSample, build_domain, bump, cutoff_from_distance,
                   integrate, level_cutoff, refine, smooth_step, window)
from .forms import (KoszulForm, dbar_apply, erode, index_list, koszul_contract, wedge,
                    wirtinger_dbar, read_form_csv, write_form_csv)
from .holomap import HoloMap, PRESETS, constant_map, jacobian_rank_mask, preset_map
from .dbar import DbarSolution, cauchy_transform, solve_dbar_1d, solve_dbar_compact_2d, solve_dbar_form
from .koszul import (CoronaResult, DescentTrace, build_section_cutoff, build_section_global,
                     corona_solve, descent_lemma2, descent_tolerance, lift_lemma1, lift_prop1,
                     relation_defect)
from .approx import (TARGETS, Approximant, LambdaNet, approximate, assemble, build_lambda_net,
                     check_vanishing_hypotheses, per_lambda_solve, smooth_vanishing_data)
from .bergman import (BergmanBasis, DensityCurve, ToeplitzMatrix, acr_residual, commutator_norm,
                      lp_density_residual, mollifier_bump, polar_quadrature,
                      symbol_from_name, toeplitz_matrix)

__version__ = "0.1.0"
