"""Logging setup used by the command line entry point."""

import logging
from typing import Optional

LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"


def configure_logging(verbosity: int = 0, stream: Optional[object] = None) -> None:
    """
    Configure the root logger.

    Args:
        verbosity: -1 for warnings only, 0 for info, 1 or more for debug.
        stream: Optional stream for the handler (defaults to stderr).
    """
    if verbosity < 0:
        level = logging.WARNING
    elif verbosity == 0:
        level = logging.INFO
    else:
        level = logging.DEBUG
    kwargs = {"level": level, "format": LOG_FORMAT, "force": True}
    if stream is not None:
        kwargs["stream"] = stream
    logging.basicConfig(**kwargs)
