from __future__ import annotations

import logging
import sys

LOG_FORMAT = "%(asctime)s %(levelname)-8s %(name)s %(message)s"


def configure_logging(verbosity: int = 0) -> None:
    """Route the ``flagforge`` logger tree to stderr; stdout stays JSON-only."""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG

    root = logging.getLogger("flagforge")
    root.setLevel(level)
    for handler in list(root.handlers):
        if getattr(handler, "_flagforge", False):
            root.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._flagforge = True  # type: ignore[attr-defined]
    root.addHandler(handler)
    root.propagate = False
