"""Discrete verification toolkit for weighted Sobolev and Hardy
inequalities on doubling metric measure graphs."""

from .space import (
    FiniteMetricMeasureSpace,
    SpaceProfile,
    PIParams,
    ReverseDoublingParams,
    AhlforsParams,
    build_space,
    doubling_profile,
    reverse_doubling_fit,
    ahlfors_fit,
)
from .gallery import GallerySpec, generate, load_space, save_space
from .covering import (
    kappa_decomposition,
    expand_covering,
    validate_covering,
    layer_bound,
    theoretical_Q2,
    greedy_net,
    annulus_piece_covering,
)
from .graph_ineq import (
    build_covering_graph,
    graph_profile,
    isoperimetric_constant,
    poincare_constant,
    upgrade_constant,
    neumann_check,
    layer_weight_bounds,
    theoretical_isoperimetric_bound,
    rca_kappa,
    rca_check,
)
from .riesz import ball_chain, riesz_potential, maximal_function, riesz_constants, representation_check
from .verify import (
    lip,
    cheeger_energy,
    p_star,
    patching_constant,
    mean_comparison_check,
    make_family,
    local_sobolev_check,
    annulus_piece_check,
    weighted_sobolev_check,
    hardy_check,
    ahlfors_sobolev_check,
    InequalityReport,
    write_reports_csv,
    write_reports_json,
)
from .weights import weight_density

__version__ = "0.1.0"
