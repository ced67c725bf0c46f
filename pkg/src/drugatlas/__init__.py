"""Country-level drug-consumption analytics and atlas bundle export.

The library turns long-format consumption tables into morphine-equivalent
series, per-series cognostics, a 2-D distance-preserving layout, and local
(level, slope) trend grids, then packages everything as one deterministic
JSON bundle for the linked-views UI.
"""

from .cognostics import CognosticVector, compute_cognostics, max_annual_increase, net_change
from .config import PipelineConfig, load_config, validate_config
from .embedding import (
    DistanceMatrix,
    Embedding,
    classical_mds,
    embed_distances,
    pairwise_distances,
    smacof_refine,
    stress,
)
from .export import AtlasBundle, build_bundle, canonical_dumps, read_bundle, write_bundle
from .ingest import (
    ConsumptionRecord,
    CountryRef,
    CountryRegistry,
    CsvSchema,
    DrugKind,
    DrugRegistry,
    Series,
    build_series,
    key_id,
    normalize_country,
    parse_consumption_csv,
)
from .pipeline import run_pipeline
from .transform import (
    ConversionTable,
    DenseSeries,
    cube_root,
    densify,
    to_morphine_equivalent,
)
from .trends import TrendGrid, TrendParams, local_ridge_fit, trend_grid, tricube_weight

__version__ = "0.1.0"

__all__ = [
    "AtlasBundle",
    "CognosticVector",
    "ConsumptionRecord",
    "ConversionTable",
    "CountryRef",
    "CountryRegistry",
    "CsvSchema",
    "DenseSeries",
    "DistanceMatrix",
    "DrugKind",
    "DrugRegistry",
    "Embedding",
    "PipelineConfig",
    "Series",
    "TrendGrid",
    "TrendParams",
    "build_bundle",
    "build_series",
    "canonical_dumps",
    "classical_mds",
    "compute_cognostics",
    "cube_root",
    "densify",
    "embed_distances",
    "key_id",
    "load_config",
    "local_ridge_fit",
    "max_annual_increase",
    "net_change",
    "normalize_country",
    "pairwise_distances",
    "parse_consumption_csv",
    "read_bundle",
    "run_pipeline",
    "smacof_refine",
    "stress",
    "to_morphine_equivalent",
    "trend_grid",
    "tricube_weight",
    "validate_config",
    "write_bundle",
]
