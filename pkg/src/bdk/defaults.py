"""Pinned default parameters per family (versioned with the package).

``BDK_DEFAULTS`` may point at an alternative JSON file of the same shape.
"""
from __future__ import annotations

import json
import os
from importlib import resources

from . import models

_cache: dict | None = None


def defaults_table() -> dict:
    global _cache
    path = os.environ.get("BDK_DEFAULTS")
    if path:
        with open(path) as fh:
            return {k: v for k, v in json.load(fh).items() if not k.startswith("_")}
    if _cache is None:
        text = resources.files("bdk.data").joinpath("defaults.json").read_text()
        _cache = {k: v for k, v in json.loads(text).items() if not k.startswith("_")}
    return _cache


def default_model(family_id: str) -> models.ModelParams:
    """Validated ModelParams at the pinned defaults for one family."""
    fam = models.get_family(family_id)
    entry = defaults_table()[fam.id]
    return models.validate(fam, dict(entry["params"]),
                           N=entry.get("N"), q=entry.get("q"))


def all_default_models():
    return [default_model(spec.id) for spec in models.FAMILY_ORDER]
