"""Cumulant asymptotics and phase classification for subgraph counts in the random-connection model."""

from .asymptotics import (
    Phase,
    RegimeReport,
    classify_regime,
    concentration_bound,
    cumulant_order,
    delta_exponent,
    f_exponents,
    kolmogorov_exponent,
)
from .census import CensusRow, census, connected_graphs, endpoint_templates
from .diagrams import DiagramGraph, diagram_point, endpoint_neighborhoods, quotient_graph
from .errors import (
    AssumptionViolation,
    BadGraph6,
    BudgetExceeded,
    DimensionMismatch,
    MalformedInput,
    NotMBalanced,
    NotNormalRegime,
    NotOnBoundary,
    RCMError,
    SourceEmpty,
)
from .graph6 import encode_graph6, parse_graph6, read_graph6_file
from .graph_model import (
    BalanceReport,
    EndpointGraph,
    automorphism_count,
    balance_report,
    critical_exponent,
    endpoint_degree_max,
    is_m_balanced,
    parse_graph_spec,
)
from .hull import HullChain, SigmaSet, is_segment, leading_points, local_slopes, sigma_set, upper_hull
from .partitions import (
    SetPartition,
    cnf_upper_bound,
    count_maximal,
    enumerate_cnf,
    enumerate_nonflat,
    is_connected,
    is_nonflat,
)
from .rcm_sim import (
    EmpiricalStats,
    SimConfig,
    count_subgraphs,
    exact_moment,
    poisson_gof,
    run_experiment,
    sample_rcm,
)

__version__ = "0.1.0"
