"""curvkit: discrete edge curvatures on undirected graphs, curvature-guided
edge pruning for community detection, seeded SBM score grids, and partition
agreement metrics."""

__version__ = "0.1.0"

from .curvature import (
    CurvatureKind,
    EdgeCurvatures,
    bfc_edge,
    curvature_all,
    frc_edge,
    jost_liu_clamped_lower,
    lrc_edge,
    orc_edge,
    orc_upper_bound,
    w1_local,
)
from .graph import (
    Cover,
    Graph,
    Partition,
    build_graph,
    cheeger_constant,
    connected_components,
    diameter,
    parse_community_file,
    parse_edge_list,
    parse_gml_subset,
    remove_edges,
    spectral_gap,
    write_edge_list,
)
from .metrics import ami, ari, lpa_detect, overlapping_f1
from .preprocess import (
    GmmFit,
    PreprocessConfig,
    ThresholdMode,
    find_threshold,
    fit_gmm2,
    mixture_density,
    preprocess_lrc,
)
from .sbm import (
    GridRecord,
    SbmSpec,
    aer,
    aop,
    default_grid,
    percentile_rank,
    pps_indicator,
    run_grid,
    sample_sbm,
    splitmix64,
)

__all__ = [
    "__version__",
    "CurvatureKind",
    "EdgeCurvatures",
    "Graph",
    "Partition",
    "Cover",
    "GmmFit",
    "GridRecord",
    "PreprocessConfig",
    "SbmSpec",
    "ThresholdMode",
    "aer",
    "ami",
    "aop",
    "ari",
    "bfc_edge",
    "build_graph",
    "cheeger_constant",
    "connected_components",
    "curvature_all",
    "default_grid",
    "diameter",
    "find_threshold",
    "fit_gmm2",
    "frc_edge",
    "jost_liu_clamped_lower",
    "lpa_detect",
    "lrc_edge",
    "mixture_density",
    "orc_edge",
    "orc_upper_bound",
    "overlapping_f1",
    "parse_community_file",
    "parse_edge_list",
    "parse_gml_subset",
    "percentile_rank",
    "pps_indicator",
    "preprocess_lrc",
    "remove_edges",
    "run_grid",
    "sample_sbm",
    "spectral_gap",
    "splitmix64",
    "w1_local",
    "write_edge_list",
]
