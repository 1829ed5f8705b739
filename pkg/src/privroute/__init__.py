"""Differentially private release of graph edge weights and the bias it
induces in downstream shortest-path routing."""

from .analytics import (
    BetaPartition,
    BoundReport,
    bound_report,
    corollary_bias_bound,
    partition_by_beta,
    path_deviation_prob,
    phi,
    phi_c,
    phi_inv,
    q_beta_exact_nonoverlap,
    q_beta_upper,
    simulate_ensemble_bias,
)
from .experiment import (
    BiasRecord,
    CategoryTable,
    PairSampling,
    categorize_pairs,
    realized_bias,
    run_experiment,
    trend_report,
)
from .generators import (
    GraphSpec,
    apply_sparsity,
    build_graph,
    generate_grid,
    generate_scale_free,
    generate_wheel,
)
from .graph import (
    EnumerationLimits,
    Path,
    PathEnsemble,
    WeightedGraph,
    enumerate_paths,
    gap,
    path_weight,
    read_graph,
    shortest_path,
    shortest_path_tree,
    sym_diff_size,
    write_graph,
)
from .release import NoisyRelease, PrivacyParams, release, sigma_from

__all__ = [
    "BetaPartition",
    "BiasRecord",
    "BoundReport",
    "CategoryTable",
    "EnumerationLimits",
    "GraphSpec",
    "NoisyRelease",
    "PairSampling",
    "Path",
    "PathEnsemble",
    "PrivacyParams",
    "WeightedGraph",
    "apply_sparsity",
    "bound_report",
    "build_graph",
    "categorize_pairs",
    "corollary_bias_bound",
    "enumerate_paths",
    "gap",
    "generate_grid",
    "generate_scale_free",
    "generate_wheel",
    "partition_by_beta",
    "path_deviation_prob",
    "path_weight",
    "phi",
    "phi_c",
    "phi_inv",
    "q_beta_exact_nonoverlap",
    "q_beta_upper",
    "read_graph",
    "realized_bias",
    "release",
    "run_experiment",
    "shortest_path",
    "shortest_path_tree",
    "sigma_from",
    "simulate_ensemble_bias",
    "sym_diff_size",
    "trend_report",
    "write_graph",
]
