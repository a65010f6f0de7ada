"""Logger factory for dglm."""

import logging


def get_logger(name: str) -> logging.Logger:
    """Return a logger below the ``dglm`` namespace."""
    if not name.startswith("dglm"):
        name = f"dglm.{name}"
    return logging.getLogger(name)


def configure_logging(verbose: bool = False) -> None:
    """Route ``dglm`` logs through rich (called by the CLI only)."""
    from rich.logging import RichHandler

    logger = logging.getLogger("dglm")
    logger.handlers.clear()
    handler = RichHandler(show_path=False, markup=False)
    handler.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False
