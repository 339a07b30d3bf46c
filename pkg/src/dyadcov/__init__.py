"""OLS inference for dyadic data whose nodes carry an ordering.

Observations sit on unordered node pairs, so disturbances sharing a node
are dependent, and nodes close to each other in some order (size, time,
space) may be dependent as well. This package fits the linear model by
least squares and offers variance estimators that are robust to both
layers of dependence: classical and cluster baselines, a kernel-weighted
dyadic estimator with a data-driven bandwidth, and a moving-block
jackknife over the node order. A Monte Carlo harness measures the
rejection frequencies of all of them.
"""

from .bandwidth import BandwidthSelection, scaled_bandwidth, select_bandwidth
from .data import (
    DyadicDataset,
    NodeOrder,
    build_dataset,
    canonical_dyads,
    complete_dyads,
    expand_node_effects,
    read_dyad_csv,
    read_order_csv,
)
from .errors import (
    BandwidthTooLargeWarning,
    BlockTooLongError,
    DegenerateDofError,
    DuplicateDyadError,
    DyadDataError,
    EmptyDatasetError,
    NonpositiveVarianceError,
    RaggedRegressorsError,
    SelfLoopError,
    UnknownLabelError,
    UnknownParameterError,
)
from .estimator import DyadicRegression, estimate_variances
from .jackknife import BlockDeletion, JackknifeResult, block_deletion_sets, delete_block_fit, jk_variance
from .kernels import bartlett_weight, endpoint_distance
from .ols import RegressionFit, fit_ols
from .simulate import (
    SimConfig,
    SimResult,
    gen_ar1_nodes,
    gen_dyadic_sample,
    run_monte_carlo,
    run_replication,
    run_sweep,
    write_results_csv,
)
from .variance import (
    ALL_KINDS,
    EstimatorKind,
    TTestResult,
    VarianceEstimate,
    meat_dn,
    meat_dn_nodc,
    meat_dyadic,
    meat_oneway,
    meat_twoway,
    meat_white,
    node_scores,
    parse_estimators,
    sandwich,
    t_test,
    var_iid,
)

__version__ = "0.1.0"

__all__ = [
    "BandwidthSelection",
    "select_bandwidth",
    "scaled_bandwidth",
    "DyadicDataset",
    "NodeOrder",
    "build_dataset",
    "canonical_dyads",
    "complete_dyads",
    "expand_node_effects",
    "read_dyad_csv",
    "read_order_csv",
    "BandwidthTooLargeWarning",
    "BlockTooLongError",
    "DegenerateDofError",
    "DuplicateDyadError",
    "DyadDataError",
    "EmptyDatasetError",
    "NonpositiveVarianceError",
    "RaggedRegressorsError",
    "SelfLoopError",
    "UnknownLabelError",
    "UnknownParameterError",
    "DyadicRegression",
    "estimate_variances",
    "BlockDeletion",
    "JackknifeResult",
    "block_deletion_sets",
    "delete_block_fit",
    "jk_variance",
    "bartlett_weight",
    "endpoint_distance",
    "RegressionFit",
    "fit_ols",
    "SimConfig",
    "SimResult",
    "gen_ar1_nodes",
    "gen_dyadic_sample",
    "run_monte_carlo",
    "run_replication",
    "run_sweep",
    "write_results_csv",
    "ALL_KINDS",
    "EstimatorKind",
    "TTestResult",
    "VarianceEstimate",
    "meat_dn",
    "meat_dn_nodc",
    "meat_dyadic",
    "meat_oneway",
    "meat_twoway",
    "meat_white",
    "node_scores",
    "parse_estimators",
    "sandwich",
    "t_test",
    "var_iid",
    "__version__",
]
