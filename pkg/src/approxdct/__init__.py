"""Multiplierless 8-point DCT approximations and their evaluation."""

from .codec import (
    CompressionResult,
    CorpusAverage,
    ImagePlane,
    compress_image,
    corpus_average,
    forward_2d,
    inverse_2d,
    load_pgm,
    save_pgm,
    zigzag_retain,
)
from .metrics import (
    MarkovModel,
    MetricsReport,
    coding_gain,
    mse_markov,
    psnr,
    total_error_energy,
    transform_efficiency,
    uqi,
)
from .transforms import (
    CATALOG_NAMES,
    ExactDct,
    FlowGraph,
    OpCount,
    Permutation,
    SparseStage,
    TransformSpec,
    apply_flow,
    catalog,
    count_ops,
    exact_dct,
    flow_graph,
    flow_to_matrix,
    orthogonal_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "CATALOG_NAMES",
    "CompressionResult",
    "CorpusAverage",
    "ExactDct",
    "FlowGraph",
    "ImagePlane",
    "MarkovModel",
    "MetricsReport",
    "OpCount",
    "Permutation",
    "SparseStage",
    "TransformSpec",
    "apply_flow",
    "catalog",
    "coding_gain",
    "compress_image",
    "corpus_average",
    "count_ops",
    "exact_dct",
    "flow_graph",
    "flow_to_matrix",
    "forward_2d",
    "inverse_2d",
    "load_pgm",
    "mse_markov",
    "orthogonal_matrix",
    "psnr",
    "save_pgm",
    "total_error_energy",
    "transform_efficiency",
    "uqi",
    "zigzag_retain",
]
