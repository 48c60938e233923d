"""Tensor group comparison unifying discriminant analysis and
contrastive learning, with fast weight-only refits for interactive use."""

from .covariance import (
    LabeledDataset,
    ObjectivePair,
    ScatterCache,
    assemble_objective,
    compute_scatter_cache,
)
from .cp import CoreSummary, CpFactors, core_summary, cp_als
from .datasets import (
    SyntheticSpec,
    generate_synthetic,
    ingest_csv_long,
    load_tensor_file,
    save_tensor_file,
)
from .optimizer import (
    TraceRatioResult,
    TulcaModel,
    WeightConfig,
    fit,
    preset_weights,
    trace_ratio_solve,
    ulca_baseline,
    update,
)
from .tensor import (
    DenseTensor,
    Matricized,
    fold,
    matricize,
    mode_product,
    project_to_core,
    unfold,
)

__version__ = "0.1.0"

__all__ = [
    "DenseTensor",
    "Matricized",
    "matricize",
    "fold",
    "unfold",
    "mode_product",
    "project_to_core",
    "LabeledDataset",
    "ScatterCache",
    "ObjectivePair",
    "compute_scatter_cache",
    "assemble_objective",
    "WeightConfig",
    "TulcaModel",
    "TraceRatioResult",
    "trace_ratio_solve",
    "fit",
    "update",
    "preset_weights",
    "ulca_baseline",
    "CpFactors",
    "CoreSummary",
    "cp_als",
    "core_summary",
    "SyntheticSpec",
    "generate_synthetic",
    "save_tensor_file",
    "load_tensor_file",
    "ingest_csv_long",
]
