"""CSV/JSON export and model-parameter-file handling.

Floats are printed with 17 significant digits so every 64-bit value
round-trips exactly through the text formats.
"""
from __future__ import annotations

import json

import numpy as np

from . import models

FLOAT_FMT = "%.17g"


def fmt(v: float) -> str:
    return FLOAT_FMT % float(v)


def load_model_file(path: str) -> models.ModelParams:
    """Parse and validate a model parameter file.

    Schema (see docs/model_schema.json):
    ``{"family": str, "q": number?, "N": integer?, "params": {name: number}}``
    """
    with open(path) as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict) or "family" not in doc or "params" not in doc:
        raise models.ConstraintViolationError(
            f"{path}: model file must be an object with 'family' and 'params'")
    extra = set(doc) - {"family", "q", "N", "params"}
    if extra:
        raise models.ConstraintViolationError(f"{path}: unknown keys {sorted(extra)}")
    fam = models.get_family(doc["family"])
    return models.validate(fam, dict(doc["params"]), N=doc.get("N"), q=doc.get("q"))


def kernel_rows_csv(results, fh):
    """Kernel entries as ``y,x,t,probability`` rows."""
    fh.write("y,x,t,probability\n")
    for res in results:
        T = res.matrix
        for y in range(T.shape[0]):
            for x in range(T.shape[1]):
                fh.write(f"{y},{x},{fmt(res.t)},{fmt(T[y, x])}\n")


def kernel_json(results, data, fh):
    """Kernel matrices with model metadata and truncation diagnostics."""
    mp_ = data.params
    doc = {
        "family": mp_.family.id,
        "params": {k: v for k, v in mp_.params.items() if k not in ("N", "q")},
        "N": mp_.N,
        "q": mp_.q,
        "eps_tail": data.eps_tail,
        "eps_spec": data.eps_spec,
        "state_tail_bound": data.space.tail_mass_bound,
        "kernels": [
            {
                "t": res.t,
                "n_max": res.n_max,
                "spectral_tail_bound": res.spectral_tail_bound,
                "clamp_min": res.clamp_min,
                "clamp_count": res.clamp_count,
                "row_sum_max_dev": res.row_sum_max_dev,
                "warnings": list(res.warnings),
                "matrix": [[float(v) for v in row] for row in res.matrix],
            }
            for res in results
        ],
    }
    json.dump(doc, fh, indent=2)
    fh.write("\n")


def distribution_csv(dist, fh):
    fh.write("x,probability\n")
    for x, p in enumerate(dist.probabilities):
        fh.write(f"{x},{fmt(p)}\n")


def read_distribution_csv(path: str) -> np.ndarray:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "x,probability":
            raise ValueError(f"{path}: expected header 'x,probability', got {header!r}")
        vals = {}
        for line in fh:
            if not line.strip():
                continue
            xs, ps = line.split(",")
            vals[int(xs)] = float(ps)
    out = np.zeros(max(vals) + 1)
    for x, p in vals.items():
        out[x] = p
    return out


def rates_rows(mp_: models.ModelParams, space, stationary):
    for x in range(space.size):
        yield {
            "x": x,
            "B": models.birth_rate(mp_, x),
            "D": models.death_rate(mp_, x),
            "eta": models.sinusoidal(mp_, x),
            "phi0_sq": models.ground_state_sq(mp_, x),
            "stationary": float(stationary[x]),
        }


def rates_csv(rows, fh):
    fh.write("x,B,D,eta,phi0_sq,stationary\n")
    for r in rows:
        fh.write(f"{r['x']},{fmt(r['B'])},{fmt(r['D'])},{fmt(r['eta'])},"
                 f"{fmt(r['phi0_sq'])},{fmt(r['stationary'])}\n")
