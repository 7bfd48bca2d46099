"""Simulation and verification lab for the degree-plus-beta attachment multigraph.

Generate instances of the process, compute clustering statistics at scale,
evaluate the closed-form probabilities and asymptotic constants, and verify
them against an exact enumeration oracle (small sizes) and Monte Carlo
ensembles (large sizes).
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .errors import (
    CapacityError,
    EdgeListParseError,
    ForestError,
    HorizonError,
    InstrumentationError,
    InsufficientReplicatesError,
    InvalidOutcomeError,
    MergeArityError,
    MoriError,
    ParameterError,
    UndefinedClusteringError,
)
from .forests import PossibleForest, all_possible_forests
from .model import (
    COPY_HEAD,
    COPY_TAIL,
    UNIFORM,
    BlockPartition,
    MergedMultigraph,
    ModelParams,
    Outcome,
    TreeState,
    generate,
    generate_tree,
    merge,
    multigraph_from_edges,
    resolve_target,
    sample_outcome,
    step_tree,
    track_blocks,
    tracked_block_sizes,
)
from .montecarlo import (
    BlockCorrelationReport,
    ConcentrationReport,
    EnsembleReport,
    SlopeFit,
    StatSummary,
    block_correlation_experiment,
    concentration_experiment,
    deviation_band,
    fit_triangle_slope,
    replicate_rng,
    run_ensemble,
)
from .oracle import (
    ClusteringExpectation,
    HistoryDistribution,
    enumerate_histories,
    exact_expectation,
    exact_subgraph_probability,
    history_count,
    iter_histories,
    tree_distribution,
)
from .stats import (
    GraphStats,
    adjacent_pair_count,
    clustering_coefficient,
    compute_stats,
    degenerate_pair_count,
    max_degree,
    triangle_count,
)
from .theory import (
    TheoryConstants,
    adjacent_pair_case_density,
    block_growth_expectation,
    constants,
    expected_triangles_on_triple,
    lemma1_probability,
    lemma2_leading,
    predicted_adjacent_pairs,
    predicted_clustering,
    predicted_triangles,
)
