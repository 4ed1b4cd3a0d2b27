"""Gillespie lane selection: compiled extension when importable, numpy fallback.

Set ``BDK_PURE_PYTHON=1`` to force the fallback (used by the benchmark and
the lane-equivalence test).
"""
from __future__ import annotations

import os

from . import _gillespie_pure

try:  # pragma: no cover - depends on build environment
    from . import _speedups
except ImportError:  # pragma: no cover
    _speedups = None


def active_lane() -> str:
    if _speedups is not None and not os.environ.get("BDK_PURE_PYTHON"):
        return "compiled"
    return "pure-python"


def run_paths(B, D, y0, t, n_paths, seed, lane: str | None = None):
    """Dispatch to the requested or active lane; see ``_gillespie_pure.run_paths``."""
    lane = lane or active_lane()
    if lane == "compiled":
        if _speedups is None:
            raise RuntimeError("compiled lane requested but bdk._speedups is not built")
        import numpy as np

        return _speedups.run_paths(
            np.ascontiguousarray(B, dtype=float),
            np.ascontiguousarray(D, dtype=float),
            int(y0), float(t), int(n_paths), int(seed) & (2**64 - 1),
        )
    return _gillespie_pure.run_paths(B, D, int(y0), float(t), int(n_paths), int(seed))
