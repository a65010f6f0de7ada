"""File and stdin input handling for dglm."""

import sys
from pathlib import Path

from dglm.errors import ModelParseError
from dglm.models.builtin import is_builtin, resolve
from dglm.models.parser import ModelFile, format_model_file, parse_model_file


def read_model_input(source: str | None = None) -> tuple[ModelFile, str, str]:
    """
    Read a model file from a path, stdin (``-`` or a pipe) or a builtin reference.

    Returns:
        tuple: (parsed_models, source_name, raw_content)

    Raises:
        ModelParseError: If no input is provided or the text does not parse.
    """
    if source is not None and is_builtin(source):
        models = resolve(source)
        return models, source, format_model_file(models)
    if source is not None and source != "-":
        path = Path(source)
        try:
            content = path.read_text(encoding="utf-8")
        except OSError as e:
            raise ModelParseError(f"cannot read {path}: {e.strerror}") from None
        name = str(path)
    elif source == "-" or not sys.stdin.isatty():
        content = sys.stdin.read()
        name = "stdin"
    else:
        raise ModelParseError("No input provided. Provide a model file, builtin:<name>, or pipe a model to stdin.")

    return parse_model_file(content), name, content
