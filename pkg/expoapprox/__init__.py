"""Root mean square approximation by exponential sums"""

# flake8: noqa
# isort:skip_file

import logging

# Console Handler for expoapprox messages
ch = logging.StreamHandler()
ch.setFormatter(logging.Formatter("[%(name)s] [%(levelname)-8s] [%(asctime)s] %(message)s"))

# Module-level logger
log = logging.getLogger(__name__)
log.propagate = False
log.addHandler(ch)


from .inner import ExpoPolyTerm, inner_product, integral_full, integral_half
from .gram import (
    Basis, GramMatrix, LinearFit, build_gram, direct_deflection_sq,
    f_min_explicit, residual_orthogonality, solve_normal_equations
)
from .signals import SampledSignal, Signal, SignFunction, moment, norm_sq
from .objective import (
    FrequencySet, build_basis, linear_fit, phi, phi_cluster, phi_map,
    phi_sign_cluster_axis, phi_sign_one_freq
)
from .optimizer import (
    ConjectureReport, OptimizeConfig, OptimizeResult, explore_conjecture,
    minimize_phi, solve_v0
)
from .version import __version__
