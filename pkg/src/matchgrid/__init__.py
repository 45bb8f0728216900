"""matchgrid: learn local and global spatial patterns from match-three level
corpora and generate new levels."""

__version__ = "0.1.0"

from .board import (
    BORDER,
    SELF,
    CellState,
    Level,
    Violation,
    collapse,
    expand,
    level_to_tensor,
    mirror_complete,
    postprocess,
    validate,
)
from .codec import (
    FormatError,
    decode_level,
    encode_level,
    load_corpus,
    load_tensors,
    save_corpus,
    save_tensors,
)
from .estimator import MrfLevelGenerator
from .metrics import (
    SymmetryReport,
    cluster_score,
    diagonal_symmetry,
    horizontal_symmetry,
    report,
    select_by_quantile,
    vertical_symmetry,
)
from .mrf import Cpd, NeighborhoodSpec, SamplerConfig, load_cpd, lookup, sample, sample_many, save_cpd, train
from .synthesis import CorpusSpec, CorpusSpecError, filter_by_symmetry, preset_mirrored_mix, synthesize

__all__ = [
    "BORDER",
    "SELF",
    "CellState",
    "Level",
    "Violation",
    "collapse",
    "expand",
    "level_to_tensor",
    "mirror_complete",
    "postprocess",
    "validate",
    "FormatError",
    "decode_level",
    "encode_level",
    "load_corpus",
    "load_tensors",
    "save_corpus",
    "save_tensors",
    "MrfLevelGenerator",
    "SymmetryReport",
    "cluster_score",
    "diagonal_symmetry",
    "horizontal_symmetry",
    "report",
    "select_by_quantile",
    "vertical_symmetry",
    "Cpd",
    "NeighborhoodSpec",
    "SamplerConfig",
    "load_cpd",
    "lookup",
    "sample",
    "sample_many",
    "save_cpd",
    "train",
    "CorpusSpec",
    "CorpusSpecError",
    "filter_by_symmetry",
    "preset_mirrored_mix",
    "synthesize",
    "__version__",
]
