"""Model files and the built-in models."""

from dglm.models.builtin import (
    boundary_model,
    cp_inclusion,
    cp_model,
    disk_pairs,
    resolve,
    sphere_model,
)
from dglm.models.parser import (
    MapSpec,
    ModelFile,
    ModelSpec,
    format_model_file,
    parse_model_file,
)

__all__ = [
    "MapSpec",
    "ModelFile",
    "ModelSpec",
    "boundary_model",
    "cp_inclusion",
    "cp_model",
    "disk_pairs",
    "format_model_file",
    "parse_model_file",
    "resolve",
    "sphere_model",
]
