"""Component-level energy model for computational image sensors."""

import json
import os

from ._core import DigitalTooSlowError, ModelError, ParseError
from . import _core

__all__ = ["ModelError", "ParseError", "DigitalTooSlowError",
           "check", "run", "sweep", "verify", "emit"]


def _text(design):
    """Accept document text or a path to a .design file."""
    if isinstance(design, os.PathLike) or "{" not in design:
        with open(design, encoding="utf-8") as f:
            return f.read()
    return str(design)


def check(design):
    return json.loads(_core.check(_text(design)))


def run(design, fps):
    return json.loads(_core.run(_text(design), float(fps), "json"))


def emit(design, fps, format="table"):
    return _core.run(_text(design), float(fps), format)


def sweep(designs, fps):
    docs = []
    for d in designs:
        label = os.path.splitext(os.path.basename(str(d)))[0]
        docs.append((label, _text(d)))
    return json.loads(_core.sweep(docs, float(fps), "json"))


def verify(design):
    return list(_core.verify(_text(design)))
