"""Synthetic microscopy tracking benchmark: generation, tracking and scoring."""

from ._core import (
    BoundingBox,
    Error,
    EvalReport,
    GenerationError,
    GtRecord,
    IoError,
    ParseError,
    ShapeError,
    Summary,
    ValidationError,
    compute_clearmot,
    compute_id_scores,
    default_pipeline_config,
    default_scenario_config,
    evaluate_dataset,
    generate_benchmark,
    hungarian_assign,
    iou,
    list_sequences,
    parse_mot,
    read_mot_file,
    serialize_mot,
    track_sequence,
    write_mot_file,
)

__all__ = [
    "BoundingBox",
    "Error",
    "EvalReport",
    "GenerationError",
    "GtRecord",
    "IoError",
    "ParseError",
    "ShapeError",
    "Summary",
    "ValidationError",
    "compute_clearmot",
    "compute_id_scores",
    "default_pipeline_config",
    "default_scenario_config",
    "evaluate_dataset",
    "generate_benchmark",
    "hungarian_assign",
    "iou",
    "list_sequences",
    "parse_mot",
    "read_mot_file",
    "serialize_mot",
    "track_sequence",
    "write_mot_file",
]
