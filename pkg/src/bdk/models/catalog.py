"""The 18 model families: rates, spectra, weights, norms, eigenpolynomials.

Finite families first (reflecting wall at N), then the infinite ones, in the
order of their source. Parameter names follow the source's non-conventional
parametrisation; only one representative parametrisation per family is
provided.  Closed-form weights and normalisation constants are assembled in
(sign, log) space so factorial-scale factors never overflow; the final values
are positive by construction and asserted so.
"""
from __future__ import annotations

import math
from math import lgamma, log, log1p

from ..qspecial import (
    QPow,
    SeriesParams,
    basic_hypergeometric,
    hypergeometric,
    log_pochhammer,
    log_q_pochhammer,
)
from .base import FamilySpec

__all__ = ["FAMILIES", "FAMILY_ORDER", "get_family"]


def _combine(*pairs):
    """Multiply (sign, log) factor pairs."""
    sign, logmag = 1, 0.0
    for s, lm in pairs:
        sign *= s
        logmag += lm
    return sign, logmag


def _positive(sign_log, what):
    sign, logmag = sign_log
    if sign <= 0:
        raise ArithmeticError(f"{what}: non-positive closed form (sign={sign})")
    return logmag


def _log_binom(N, k):
    return lgamma(N + 1) - lgamma(k + 1) - lgamma(N - k + 1)


def _lp(a, n):
    return log_pochhammer(a, n)


def _lqp(a, q, n):
    return log_q_pochhammer(a, q, n)


def _inv(sign_log):
    s, lm = sign_log
    return s, -lm


def _num(v):
    """(sign, log) of a plain factor."""
    if v == 0.0:
        return 0, -math.inf
    return (1, log(v)) if v > 0 else (-1, log(-v))


# ---------------------------------------------------------------------------
# finite families
# ---------------------------------------------------------------------------

def _racah_derive(p):
    p["c"] = -float(p["N"])
    p["d_tilde"] = p["a"] + p["b"] + p["c"] - p["d"] - 1.0
    return p

def _racah_B(p, x):
    a, b, c, d = p["a"], p["b"], p["c"], p["d"]
    return -((x + a) * (x + b) * (x + c) * (x + d)) / ((2 * x + d) * (2 * x + 1 + d))

def _racah_D(p, x):
    a, b, c, d = p["a"], p["b"], p["c"], p["d"]
    return -((x + d - a) * (x + d - b) * (x + d - c) * x) / ((2 * x - 1 + d) * (2 * x + d))

def _racah_phi0sq(p, x):
    a, b, c, d = p["a"], p["b"], p["c"], p["d"]
    val = _combine(
        _lp(a, x), _lp(b, x), _lp(c, x), _lp(d, x),
        _inv(_lp(1 + d - a, x)), _inv(_lp(1 + d - b, x)),
        _inv(_lp(1 + d - c, x)), _inv(_lp(1.0, x)),
        _num((2 * x + d) / d),
    )
    return _positive(val, "racah phi0^2")

def _racah_dn2(p, n):
    a, b, c, d, dt, N = p["a"], p["b"], p["c"], p["d"], p["d_tilde"], p["N"]
    val = _combine(
        _lp(a, n), _lp(b, n), _lp(c, n), _lp(dt, n),
        _inv(_lp(1 + dt - a, n)), _inv(_lp(1 + dt - b, n)),
        _inv(_lp(1 + dt - c, n)), _inv(_lp(1.0, n)),
        _num((2 * n + dt) / dt),
        ((-1) ** N, 0.0),
        _lp(1 + d - a, N), _lp(1 + d - b, N), _lp(1 + d - c, N),
        _inv(_lp(dt + 1, N)), _inv(_lp(d + 1, 2 * N)),
    )
    return _positive(val, "racah d_n^2")

def _racah_poly(p, n, x):
    dt = p["d_tilde"]
    sp = SeriesParams(
        numerator=(-n, n + dt, -x, x + p["d"]),
        denominator=(p["a"], p["b"], p["c"]),
        z=1.0,
    )
    return hypergeometric(sp)

RACAH = FamilySpec(
    id="racah-ks1.2", ks="KS1.2", name="Racah", finite=True, self_dual=False,
    uses_q=False, param_names=("a", "b", "d"),
    constraints=(
        ("a >= b", lambda p: p["a"] >= p["b"]),
        ("d > 0", lambda p: p["d"] > 0),
        ("a > N + d", lambda p: p["a"] > p["N"] + p["d"]),
        ("0 < b < 1 + d", lambda p: 0 < p["b"] < 1 + p["d"]),
    ),
    constraint_text="a >= b, d > 0, a > N+d, 0 < b < 1+d (c = -N)",
    derive=_racah_derive, birth=_racah_B, death=_racah_D,
    energy=lambda p, n: n * (n + p["d_tilde"]),
    eta=lambda p, x: x * (x + p["d"]),
    log_phi0sq=_racah_phi0sq, log_dn2=_racah_dn2, poly=_racah_poly,
)


def _hahn_phi0sq(p, x):
    a, b, N = p["a"], p["b"], p["N"]
    val = _combine(
        (1, _log_binom(N, x)), _lp(a, x), _lp(b, N - x), _inv(_lp(b, N)),
    )
    return _positive(val, "hahn phi0^2")

def _hahn_dn2(p, n):
    a, b, N = p["a"], p["b"], p["N"]
    val = _combine(
        (1, _log_binom(N, n)), _lp(a, n), _num(2 * n + a + b - 1), _lp(a + b, N),
        _inv(_lp(b, n)), _inv(_lp(n + a + b - 1, N + 1)),
        _lp(b, N), _inv(_lp(a + b, N)),
    )
    return _positive(val, "hahn d_n^2")

HAHN = FamilySpec(
    id="hahn-ks1.5", ks="KS1.5", name="Hahn", finite=True, self_dual=False,
    uses_q=False, param_names=("a", "b"),
    constraints=(
        ("a > 0", lambda p: p["a"] > 0),
        ("b > 0", lambda p: p["b"] > 0),
    ),
    constraint_text="a > 0, b > 0",
    derive=lambda p: p,
    birth=lambda p, x: (x + p["a"]) * (p["N"] - x),
    death=lambda p, x: x * (p["b"] + p["N"] - x),
    energy=lambda p, n: n * (n + p["a"] + p["b"] - 1),
    eta=lambda p, x: float(x),
    log_phi0sq=_hahn_phi0sq, log_dn2=_hahn_dn2,
    poly=lambda p, n, x: hypergeometric(SeriesParams(
        numerator=(-n, n + p["a"] + p["b"] - 1, -x),
        denominator=(p["a"], -float(p["N"])), z=1.0)),
)


def _dual_hahn_phi0sq(p, x):
    a, b, N = p["a"], p["b"], p["N"]
    val = _combine(
        (1, _log_binom(N, x)), _lp(a, x), _num(2 * x + a + b - 1), _lp(a + b, N),
        _inv(_lp(b, x)), _inv(_lp(x + a + b - 1, N + 1)),
    )
    return _positive(val, "dual hahn phi0^2")

def _dual_hahn_dn2(p, n):
    a, b, N = p["a"], p["b"], p["N"]
    val = _combine(
        (1, _log_binom(N, n)), _lp(a, n), _lp(b, N - n), _inv(_lp(b, N)),
        _lp(b, N), _inv(_lp(a + b, N)),
    )
    return _positive(val, "dual hahn d_n^2")

DUAL_HAHN = FamilySpec(
    id="dual-hahn-ks1.6", ks="KS1.6", name="dual Hahn", finite=True,
    self_dual=False, uses_q=False, param_names=("a", "b"),
    constraints=(
        ("a > 0", lambda p: p["a"] > 0),
        ("b > 0", lambda p: p["b"] > 0),
        ("a + b != 1 (rate formulas degenerate)", lambda p: p["a"] + p["b"] != 1.0),
    ),
    constraint_text="a > 0, b > 0 (a+b != 1)",
    derive=lambda p: p,
    birth=lambda p, x: ((x + p["a"]) * (x + p["a"] + p["b"] - 1) * (p["N"] - x))
                       / ((2 * x - 1 + p["a"] + p["b"]) * (2 * x + p["a"] + p["b"])),
    death=lambda p, x: (x * (x + p["b"] - 1) * (x + p["a"] + p["b"] + p["N"] - 1))
                       / ((2 * x - 2 + p["a"] + p["b"]) * (2 * x - 1 + p["a"] + p["b"])),
    energy=lambda p, n: float(n),
    eta=lambda p, x: x * (x + p["a"] + p["b"] - 1),
    log_phi0sq=_dual_hahn_phi0sq, log_dn2=_dual_hahn_dn2,
    poly=lambda p, n, x: hypergeometric(SeriesParams(
        numerator=(-n, x + p["a"] + p["b"] - 1, -x),
        denominator=(p["a"], -float(p["N"])), z=1.0)),
)


KRAWTCHOUK = FamilySpec(
    id="krawtchouk-ks1.10", ks="KS1.10", name="Krawtchouk", finite=True,
    self_dual=True, uses_q=False, param_names=("p",),
    constraints=(("0 < p < 1", lambda p: 0 < p["p"] < 1),),
    constraint_text="0 < p < 1",
    derive=lambda p: p,
    birth=lambda p, x: p["p"] * (p["N"] - x),
    death=lambda p, x: (1 - p["p"]) * x,
    energy=lambda p, n: float(n),
    eta=lambda p, x: float(x),
    log_phi0sq=lambda p, x: _positive(_combine(
        (1, _log_binom(p["N"], x)), _num((p["p"] / (1 - p["p"])) ** x)), "krawtchouk phi0^2"),
    log_dn2=lambda p, n: _positive(_combine(
        (1, _log_binom(p["N"], n)),
        _num((p["p"] / (1 - p["p"])) ** n),
        _num((1 - p["p"]) ** p["N"])), "krawtchouk d_n^2"),
    poly=lambda p, n, x: hypergeometric(SeriesParams(
        numerator=(-n, -x), denominator=(-float(p["N"]),), z=1.0 / p["p"])),
)


def _qracah_derive(p):
    q, N = p["q"], p["N"]
    p["c"] = q ** (-N)
    p["d_tilde"] = p["a"] * p["b"] * p["c"] / (p["d"] * q)
    return p

def _qracah_B(p, x):
    q, a, b, c, d = p["q"], p["a"], p["b"], p["c"], p["d"]
    return -((1 - a * q**x) * (1 - b * q**x) * (1 - c * q**x) * (1 - d * q**x)) / (
        (1 - d * q ** (2 * x)) * (1 - d * q ** (2 * x + 1)))

def _qracah_D(p, x):
    q, a, b, d, dt, N = p["q"], p["a"], p["b"], p["d"], p["d_tilde"], p["N"]
    return -dt * ((1 - d * q**x / a) * (1 - d * q**x / b) * (1 - d * q ** (x + N))
                  * (1 - q**x)) / ((1 - d * q ** (2 * x - 1)) * (1 - d * q ** (2 * x)))

def _qracah_phi0sq(p, x):
    q, a, b, d, dt, N = p["q"], p["a"], p["b"], p["d"], p["d_tilde"], p["N"]
    cpoch = _combine(*[_num(1 - q ** (k - N)) for k in range(x)])  # (c;q)_x, c=q^-N
    val = _combine(
        _lqp(a, q, x), _lqp(b, q, x), cpoch, _lqp(d, q, x),
        _inv(_lqp(d * q / a, q, x)), _inv(_lqp(d * q / b, q, x)),
        _inv(_lqp(d * q ** (N + 1), q, x)), _inv(_lqp(q, q, x)),
        _num(dt ** -x), _num((1 - d * q ** (2 * x)) / (1 - d)),
    )
    return _positive(val, "q-racah phi0^2")

def _qracah_dn2(p, n):
    q, a, b, d, dt, N = p["q"], p["a"], p["b"], p["d"], p["d_tilde"], p["N"]
    cpoch = _combine(*[_num(1 - q ** (k - N)) for k in range(n)])
    val = _combine(
        _lqp(a, q, n), _lqp(b, q, n), cpoch, _lqp(dt, q, n),
        _inv(_lqp(dt * q / a, q, n)), _inv(_lqp(dt * q / b, q, n)),
        _inv(_lqp(dt * q ** (N + 1), q, n)),  # (d_tilde q / c ; q)_n with c = q^-N
        _inv(_lqp(q, q, n)),
        _num(d ** -n), _num((1 - dt * q ** (2 * n)) / (1 - dt)),
        ((-1) ** N, 0.0),
        _lqp(d * q / a, q, N), _lqp(d * q / b, q, N), _lqp(d * q ** (N + 1), q, N),
        _num(dt ** N), (1, 0.5 * N * (N + 1) * log(q)),
        _inv(_lqp(dt * q, q, N)), _inv(_lqp(d * q, q, 2 * N)),
    )
    return _positive(val, "q-racah d_n^2")

def _qracah_poly(p, n, x):
    q, dt, d = p["q"], p["d_tilde"], p["d"]
    sp = SeriesParams(
        numerator=(QPow(-n), dt * q**n, QPow(-x), d * q**x),
        denominator=(p["a"], p["b"], QPow(-p["N"])),
        z=q, q=q,
    )
    return basic_hypergeometric(sp)

Q_RACAH = FamilySpec(
    id="q-racah-ks3.2", ks="KS3.2", name="q-Racah", finite=True, self_dual=False,
    uses_q=True, param_names=("a", "b", "d"),
    constraints=(
        ("a <= b", lambda p: p["a"] <= p["b"]),
        ("0 < d < 1", lambda p: 0 < p["d"] < 1),
        ("0 < a < q^N d", lambda p: 0 < p["a"] < p["q"] ** p["N"] * p["d"]),
        ("q d < b < 1", lambda p: p["q"] * p["d"] < p["b"] < 1),
        ("d_tilde < 1/q", lambda p: p["d_tilde"] < 1 / p["q"]),
    ),
    constraint_text="a <= b, 0 < d < 1, 0 < a < q^N d, qd < b < 1, d~ < 1/q (c = q^-N)",
    derive=_qracah_derive, birth=_qracah_B, death=_qracah_D,
    energy=lambda p, n: (p["q"] ** -n - 1) * (1 - p["d_tilde"] * p["q"] ** n),
    eta=lambda p, x: (p["q"] ** -x - 1) * (1 - p["d"] * p["q"] ** x),
    log_phi0sq=_qracah_phi0sq, log_dn2=_qracah_dn2, poly=_qracah_poly,
)


def _qhahn_phi0sq(p, x):
    q, a, b, N = p["q"], p["a"], p["b"], p["N"]
    val = _combine(
        _lqp(q, q, N), _inv(_lqp(q, q, x)), _inv(_lqp(q, q, N - x)),
        _lqp(a, q, x), _lqp(b, q, N - x), _inv(_lqp(b, q, N)), _num(a ** -x),
    )
    return _positive(val, "q-hahn phi0^2")

def _qhahn_dn2(p, n):
    q, a, b, N = p["q"], p["a"], p["b"], p["N"]
    ab = a * b
    val = _combine(
        _lqp(q, q, N), _inv(_lqp(q, q, n)), _inv(_lqp(q, q, N - n)),
        _lqp(a, q, n), _lqp(ab / q, q, n),
        _inv(_lqp(ab * q**N, q, n)), _inv(_lqp(b, q, n)), _num(a ** -n),
        _num((1 - ab * q ** (2 * n - 1)) / (1 - ab / q)),
        _lqp(b, q, N), _num(a ** N), _inv(_lqp(ab, q, N)),
    )
    return _positive(val, "q-hahn d_n^2")

Q_HAHN = FamilySpec(
    id="q-hahn-ks3.6", ks="KS3.6", name="q-Hahn", finite=True, self_dual=False,
    uses_q=True, param_names=("a", "b"),
    constraints=(
        ("0 < a < 1", lambda p: 0 < p["a"] < 1),
        ("0 < b < 1", lambda p: 0 < p["b"] < 1),
        ("a b != q (normalisation degenerates)", lambda p: p["a"] * p["b"] != p["q"]),
    ),
    constraint_text="0 < a < 1, 0 < b < 1 (ab != q)",
    derive=lambda p: p,
    birth=lambda p, x: (1 - p["a"] * p["q"] ** x) * (p["q"] ** (x - p["N"]) - 1),
    death=lambda p, x: p["a"] / p["q"] * (1 - p["q"] ** x) * (p["q"] ** (x - p["N"]) - p["b"]),
    energy=lambda p, n: (p["q"] ** -n - 1) * (1 - p["a"] * p["b"] * p["q"] ** (n - 1)),
    eta=lambda p, x: p["q"] ** -x - 1,
    log_phi0sq=_qhahn_phi0sq, log_dn2=_qhahn_dn2,
    poly=lambda p, n, x: basic_hypergeometric(SeriesParams(
        numerator=(QPow(-n), p["a"] * p["b"] * p["q"] ** (n - 1), QPow(-x)),
        denominator=(p["a"], QPow(-p["N"])), z=p["q"], q=p["q"])),
)


def _dqhahn_phi0sq(p, x):
    q, a, b, N = p["q"], p["a"], p["b"], p["N"]
    ab = a * b
    val = _combine(
        _lqp(q, q, N), _inv(_lqp(q, q, x)), _inv(_lqp(q, q, N - x)),
        _lqp(a, q, x), _lqp(ab / q, q, x),
        _inv(_lqp(ab * q**N, q, x)), _inv(_lqp(b, q, x)), _num(a ** -x),
        _num((1 - ab * q ** (2 * x - 1)) / (1 - ab / q)),
    )
    return _positive(val, "dual q-hahn phi0^2")

def _dqhahn_dn2(p, n):
    q, a, b, N = p["q"], p["a"], p["b"], p["N"]
    val = _combine(
        _lqp(q, q, N), _inv(_lqp(q, q, n)), _inv(_lqp(q, q, N - n)),
        _lqp(a, q, n), _lqp(b, q, N - n), _inv(_lqp(b, q, N)), _num(a ** -n),
        _lqp(b, q, N), _num(a ** p["N"]), _inv(_lqp(a * b, q, N)),
    )
    return _positive(val, "dual q-hahn d_n^2")

DUAL_Q_HAHN = FamilySpec(
    id="dual-q-hahn-ks3.7", ks="KS3.7", name="dual q-Hahn", finite=True,
    self_dual=False, uses_q=True, param_names=("a", "b"),
    constraints=(
        ("0 < a < 1", lambda p: 0 < p["a"] < 1),
        ("0 < b < 1", lambda p: 0 < p["b"] < 1),
        ("a b != q (rate formulas degenerate)", lambda p: p["a"] * p["b"] != p["q"]),
    ),
    constraint_text="0 < a < 1, 0 < b < 1 (ab != q)",
    derive=lambda p: p,
    birth=lambda p, x: ((p["q"] ** (x - p["N"]) - 1) * (1 - p["a"] * p["q"] ** x)
                        * (1 - p["a"] * p["b"] * p["q"] ** (x - 1)))
                       / ((1 - p["a"] * p["b"] * p["q"] ** (2 * x - 1))
                          * (1 - p["a"] * p["b"] * p["q"] ** (2 * x))),
    death=lambda p, x: (p["a"] * p["q"] ** (x - p["N"] - 1) * (1 - p["q"] ** x)
                        * (1 - p["a"] * p["b"] * p["q"] ** (x + p["N"] - 1))
                        * (1 - p["b"] * p["q"] ** (x - 1)))
                       / ((1 - p["a"] * p["b"] * p["q"] ** (2 * x - 2))
                          * (1 - p["a"] * p["b"] * p["q"] ** (2 * x - 1))),
    energy=lambda p, n: p["q"] ** -n - 1,
    eta=lambda p, x: (p["q"] ** -x - 1) * (1 - p["a"] * p["b"] * p["q"] ** (x - 1)),
    log_phi0sq=_dqhahn_phi0sq, log_dn2=_dqhahn_dn2,
    poly=lambda p, n, x: basic_hypergeometric(SeriesParams(
        numerator=(QPow(-n), p["a"] * p["b"] * p["q"] ** (x - 1), QPow(-x)),
        denominator=(p["a"], QPow(-p["N"])), z=p["q"], q=p["q"])),
)


def _qqkraw_phi0sq(p, x):
    q, pp, N = p["q"], p["p"], p["N"]
    val = _combine(
        _lqp(q, q, N), _inv(_lqp(q, q, x)), _inv(_lqp(q, q, N - x)),
        _num(pp ** -x), (1, x * (x - 1 - N) * log(q)),
        _inv(_combine(*[_num(1 - q ** (k - N) / pp) for k in range(x)])),
    )
    return _positive(val, "quantum q-krawtchouk phi0^2")

def _qqkraw_dn2(p, n):
    q, pp, N = p["q"], p["p"], p["N"]
    val = _combine(
        _lqp(q, q, N), _inv(_lqp(q, q, n)), _inv(_lqp(q, q, N - n)),
        _num(pp ** -n), (1, -N * n * log(q)),
        _inv(_combine(*[_num(1 - q ** (k - n) / pp) for k in range(n)])),
        _combine(*[_num(1 - q ** (k - N) / pp) for k in range(N)]),
    )
    return _positive(val, "quantum q-krawtchouk d_n^2")

QUANTUM_Q_KRAWTCHOUK = FamilySpec(
    id="quantum-q-krawtchouk-ks3.14", ks="KS3.14", name="quantum q-Krawtchouk",
    finite=True, self_dual=False, uses_q=True, param_names=("p",),
    constraints=(("p > q^-N", lambda p: p["p"] > p["q"] ** -p["N"]),),
    constraint_text="p > q^-N",
    derive=lambda p: p,
    birth=lambda p, x: p["q"] ** x * (p["q"] ** (x - p["N"]) - 1) / p["p"],
    death=lambda p, x: (1 - p["q"] ** x) * (1 - p["q"] ** (x - p["N"] - 1) / p["p"]),
    energy=lambda p, n: 1 - p["q"] ** n,
    eta=lambda p, x: p["q"] ** -x - 1,
    log_phi0sq=_qqkraw_phi0sq, log_dn2=_qqkraw_dn2,
    poly=lambda p, n, x: basic_hypergeometric(SeriesParams(
        numerator=(QPow(-n), QPow(-x)), denominator=(QPow(-p["N"]),),
        z=p["p"] * p["q"] ** (n + 1), q=p["q"])),
)


def _qkraw_phi0sq(p, x):
    q, pp, N = p["q"], p["p"], p["N"]
    val = _combine(
        _lqp(q, q, N), _inv(_lqp(q, q, x)), _inv(_lqp(q, q, N - x)),
        _num(pp ** -x), (1, (0.5 * x * (x - 1) - x * N) * log(q)),
    )
    return _positive(val, "q-krawtchouk phi0^2")

def _qkraw_dn2(p, n):
    q, pp, N = p["q"], p["p"], p["N"]
    val = _combine(
        _lqp(q, q, N), _inv(_lqp(q, q, n)), _inv(_lqp(q, q, N - n)),
        _lqp(-pp, q, n), _inv(_lqp(-pp * q ** (N + 1), q, n)),
        _num(pp ** -n), (1, -0.5 * n * (n + 1) * log(q)),
        _num((1 + pp * q ** (2 * n)) / (1 + pp)),
        _num(pp ** N), (1, 0.5 * N * (N + 1) * log(q)), _inv(_lqp(-pp * q, q, N)),
    )
    return _positive(val, "q-krawtchouk d_n^2")

Q_KRAWTCHOUK = FamilySpec(
    id="q-krawtchouk-ks3.15", ks="KS3.15", name="q-Krawtchouk", finite=True,
    self_dual=False, uses_q=True, param_names=("p",),
    constraints=(("p > 0", lambda p: p["p"] > 0),),
    constraint_text="p > 0",
    derive=lambda p: p,
    birth=lambda p, x: p["q"] ** (x - p["N"]) - 1,
    death=lambda p, x: p["p"] * (1 - p["q"] ** x),
    energy=lambda p, n: (p["q"] ** -n - 1) * (1 + p["p"] * p["q"] ** n),
    eta=lambda p, x: p["q"] ** -x - 1,
    log_phi0sq=_qkraw_phi0sq, log_dn2=_qkraw_dn2,
    poly=lambda p, n, x: basic_hypergeometric(SeriesParams(
        numerator=(QPow(-n), QPow(-x), -p["p"] * p["q"] ** n),
        denominator=(QPow(-p["N"]), 0.0), z=p["q"], q=p["q"])),
)


AFFINE_Q_KRAWTCHOUK = FamilySpec(
    id="affine-q-krawtchouk-ks3.16", ks="KS3.16", name="affine q-Krawtchouk",
    finite=True, self_dual=False, uses_q=True, param_names=("p",),
    constraints=(("0 < p < q^-1", lambda p: 0 < p["p"] < 1 / p["q"]),),
    constraint_text="0 < p < 1/q",
    derive=lambda p: p,
    birth=lambda p, x: (p["q"] ** (x - p["N"]) - 1) * (1 - p["p"] * p["q"] ** (x + 1)),
    death=lambda p, x: p["p"] * p["q"] ** (x - p["N"]) * (1 - p["q"] ** x),
    energy=lambda p, n: p["q"] ** -n - 1,
    eta=lambda p, x: p["q"] ** -x - 1,
    log_phi0sq=lambda p, x: _positive(_combine(
        _lqp(p["q"], p["q"], p["N"]), _inv(_lqp(p["q"], p["q"], x)),
        _inv(_lqp(p["q"], p["q"], p["N"] - x)),
        _lqp(p["p"] * p["q"], p["q"], x),
        _num((p["p"] * p["q"]) ** -x)), "affine q-krawtchouk phi0^2"),
    log_dn2=lambda p, n: _positive(_combine(
        _lqp(p["q"], p["q"], p["N"]), _inv(_lqp(p["q"], p["q"], n)),
        _inv(_lqp(p["q"], p["q"], p["N"] - n)),
        _lqp(p["p"] * p["q"], p["q"], n),
        _num((p["p"] * p["q"]) ** -n),
        _num((p["p"] * p["q"]) ** p["N"])), "affine q-krawtchouk d_n^2"),
    poly=lambda p, n, x: basic_hypergeometric(SeriesParams(
        numerator=(QPow(-n), QPow(-x), 0.0),
        denominator=(p["p"] * p["q"], QPow(-p["N"])), z=p["q"], q=p["q"])),
)


# ---------------------------------------------------------------------------
# infinite families
# ---------------------------------------------------------------------------

MEIXNER = FamilySpec(
    id="meixner-ks1.9", ks="KS1.9", name="Meixner", finite=False, self_dual=True,
    uses_q=False, param_names=("beta", "c"),
    constraints=(
        ("beta > 0", lambda p: p["beta"] > 0),
        ("0 < c < 1", lambda p: 0 < p["c"] < 1),
    ),
    constraint_text="beta > 0, 0 < c < 1",
    derive=lambda p: p,
    birth=lambda p, x: p["c"] / (1 - p["c"]) * (x + p["beta"]),
    death=lambda p, x: x / (1 - p["c"]),
    energy=lambda p, n: float(n),
    eta=lambda p, x: float(x),
    log_phi0sq=lambda p, x: (lgamma(p["beta"] + x) - lgamma(p["beta"])
                             + x * log(p["c"]) - lgamma(x + 1)),
    log_dn2=lambda p, n: (lgamma(p["beta"] + n) - lgamma(p["beta"])
                          + n * log(p["c"]) - lgamma(n + 1)
                          + p["beta"] * log1p(-p["c"])),
    poly=lambda p, n, x: hypergeometric(SeriesParams(
        numerator=(-n, -x), denominator=(p["beta"],), z=1.0 - 1.0 / p["c"])),
)


CHARLIER = FamilySpec(
    id="charlier-ks1.12", ks="KS1.12", name="Charlier", finite=False,
    self_dual=True, uses_q=False, param_names=("a",),
    constraints=(("a > 0", lambda p: p["a"] > 0),),
    constraint_text="a > 0",
    derive=lambda p: p,
    birth=lambda p, x: p["a"],
    death=lambda p, x: float(x),
    energy=lambda p, n: float(n),
    eta=lambda p, x: float(x),
    log_phi0sq=lambda p, x: x * log(p["a"]) - lgamma(x + 1),
    log_dn2=lambda p, n: n * log(p["a"]) - lgamma(n + 1) - p["a"],
    poly=lambda p, n, x: hypergeometric(SeriesParams(
        numerator=(-n, -x), denominator=(), z=-1.0 / p["a"])),
)


def _lqjac_dn2(p, n):
    q, a, b = p["q"], p["a"], p["b"]
    ab = a * b
    val = _combine(
        _lqp(b * q, q, n), _lqp(ab * q, q, n),
        _num(a ** n), (1, n * n * log(q)),
        _inv(_lqp(q, q, n)), _inv(_lqp(a * q, q, n)),
        _num((1 - ab * q ** (2 * n + 1)) / (1 - ab * q)),
        _lqp(a * q, q, math.inf), _inv(_lqp(ab * q * q, q, math.inf)),
    )
    return _positive(val, "little q-jacobi d_n^2")

def _lqjac_poly(p, n, x):
    q, a, b = p["q"], p["a"], p["b"]
    series = basic_hypergeometric(SeriesParams(
        numerator=(QPow(-n), a * b * q ** (n + 1)),
        denominator=(a * q,), z=q ** (x + 1), q=q))
    sign, logmag = _combine(
        ((-1) ** n, -n * log(a)), (1, -0.5 * n * (n + 1) * log(q)),
        _lqp(a * q, q, n), _inv(_lqp(b * q, q, n)),
    )
    return sign * math.exp(logmag) * series

LITTLE_Q_JACOBI = FamilySpec(
    id="little-q-jacobi-ks3.12", ks="KS3.12", name="little q-Jacobi",
    finite=False, self_dual=False, uses_q=True, param_names=("a", "b"),
    constraints=(
        ("0 < a < q^-1", lambda p: 0 < p["a"] < 1 / p["q"]),
        ("b < q^-1", lambda p: p["b"] < 1 / p["q"]),
        ("a b != q^-1 (normalisation degenerates)", lambda p: p["a"] * p["b"] != 1 / p["q"]),
    ),
    constraint_text="0 < a < 1/q, b < 1/q",
    derive=lambda p: p,
    birth=lambda p, x: p["a"] * (p["q"] ** -x - p["b"] * p["q"]),
    death=lambda p, x: p["q"] ** -x - 1,
    energy=lambda p, n: (p["q"] ** -n - 1) * (1 - p["a"] * p["b"] * p["q"] ** (n + 1)),
    eta=lambda p, x: 1 - p["q"] ** x,
    log_phi0sq=lambda p, x: _positive(_combine(
        _lqp(p["b"] * p["q"], p["q"], x), _inv(_lqp(p["q"], p["q"], x)),
        _num((p["a"] * p["q"]) ** x)), "little q-jacobi phi0^2"),
    log_dn2=_lqjac_dn2, poly=_lqjac_poly,
)


Q_MEIXNER = FamilySpec(
    id="q-meixner-ks3.13", ks="KS3.13", name="q-Meixner", finite=False,
    self_dual=False, uses_q=True, param_names=("b", "c"),
    complete_basis=False,
    constraints=(
        ("0 < b < q^-1", lambda p: 0 < p["b"] < 1 / p["q"]),
        ("c > 0", lambda p: p["c"] > 0),
    ),
    constraint_text="0 < b < 1/q, c > 0",
    derive=lambda p: p,
    birth=lambda p, x: p["c"] * p["q"] ** x * (1 - p["b"] * p["q"] ** (x + 1)),
    death=lambda p, x: (1 - p["q"] ** x) * (1 + p["b"] * p["c"] * p["q"] ** x),
    energy=lambda p, n: 1 - p["q"] ** n,
    eta=lambda p, x: p["q"] ** -x - 1,
    log_phi0sq=lambda p, x: _positive(_combine(
        _lqp(p["b"] * p["q"], p["q"], x),
        _inv(_lqp(p["q"], p["q"], x)), _inv(_lqp(-p["b"] * p["c"] * p["q"], p["q"], x)),
        _num(p["c"] ** x), (1, 0.5 * x * (x - 1) * log(p["q"]))), "q-meixner phi0^2"),
    log_dn2=lambda p, n: _positive(_combine(
        _lqp(p["b"] * p["q"], p["q"], n),
        _inv(_lqp(p["q"], p["q"], n)), _inv(_lqp(-p["q"] / p["c"], p["q"], n)),
        _lqp(-p["b"] * p["c"] * p["q"], p["q"], math.inf),
        _inv(_lqp(-p["c"], p["q"], math.inf))), "q-meixner d_n^2"),
    poly=lambda p, n, x: basic_hypergeometric(SeriesParams(
        numerator=(QPow(-n), QPow(-x)), denominator=(p["b"] * p["q"],),
        z=-p["q"] ** (n + 1) / p["c"], q=p["q"])),
)


LITTLE_Q_LAGUERRE = FamilySpec(
    id="little-q-laguerre-ks3.20", ks="KS3.20", name="little q-Laguerre/Wall",
    finite=False, self_dual=False, uses_q=True, param_names=("a",),
    constraints=(("0 < a < q^-1", lambda p: 0 < p["a"] < 1 / p["q"]),),
    constraint_text="0 < a < 1/q",
    derive=lambda p: p,
    birth=lambda p, x: p["a"] * p["q"] ** -x,
    death=lambda p, x: p["q"] ** -x - 1,
    energy=lambda p, n: p["q"] ** -n - 1,
    eta=lambda p, x: 1 - p["q"] ** x,
    log_phi0sq=lambda p, x: _positive(_combine(
        _num((p["a"] * p["q"]) ** x), _inv(_lqp(p["q"], p["q"], x))),
        "little q-laguerre phi0^2"),
    log_dn2=lambda p, n: _positive(_combine(
        _num(p["a"] ** n), (1, n * n * log(p["q"])),
        _inv(_lqp(p["q"], p["q"], n)), _inv(_lqp(p["a"] * p["q"], p["q"], n)),
        _lqp(p["a"] * p["q"], p["q"], math.inf)), "little q-laguerre d_n^2"),
    poly=lambda p, n, x: basic_hypergeometric(SeriesParams(
        numerator=(QPow(-n), QPow(-x)), denominator=(),
        z=p["q"] ** x / p["a"], q=p["q"])),
)


AL_SALAM_CARLITZ_II = FamilySpec(
    id="al-salam-carlitz-ii-ks3.25", ks="KS3.25", name="Al-Salam-Carlitz II",
    finite=False, self_dual=False, uses_q=True, param_names=("a",),
    constraints=(("0 < a < q^-1", lambda p: 0 < p["a"] < 1 / p["q"]),),
    constraint_text="0 < a < 1/q",
    derive=lambda p: p,
    birth=lambda p, x: p["a"] * p["q"] ** (2 * x + 1),
    death=lambda p, x: (1 - p["q"] ** x) * (1 - p["a"] * p["q"] ** x),
    energy=lambda p, n: 1 - p["q"] ** n,
    eta=lambda p, x: p["q"] ** -x - 1,
    log_phi0sq=lambda p, x: _positive(_combine(
        _num(p["a"] ** x), (1, float(x * x) * log(p["q"])),
        _inv(_lqp(p["q"], p["q"], x)), _inv(_lqp(p["a"] * p["q"], p["q"], x))),
        "al-salam-carlitz II phi0^2"),
    log_dn2=lambda p, n: _positive(_combine(
        _num((p["a"] * p["q"]) ** n), _inv(_lqp(p["q"], p["q"], n)),
        _lqp(p["a"] * p["q"], p["q"], math.inf)), "al-salam-carlitz II d_n^2"),
    poly=lambda p, n, x: basic_hypergeometric(SeriesParams(
        numerator=(QPow(-n), QPow(-x)), denominator=(),
        z=p["q"] ** n / p["a"], q=p["q"])),
)


def _altqc_dn2(p, n):
    q, a = p["q"], p["a"]
    val = _combine(
        _num(a ** n), (1, 0.5 * n * (3 * n - 1) * log(q)),
        _inv(_lqp(q, q, n)),
        _lqp(-a, q, math.inf), _inv(_lqp(-a * q ** n, q, math.inf)),
        _num((1 + a * q ** (2 * n)) / (1 + a)),
        _inv(_lqp(-a * q, q, math.inf)),
    )
    return _positive(val, "alternative q-charlier d_n^2")

def _altqc_poly(p, n, x):
    q, a = p["q"], p["a"]
    series = basic_hypergeometric(SeriesParams(
        numerator=(QPow(-n), QPow(-x)), denominator=(0.0,),
        z=-q ** (1 - n) / a, q=q))
    return q ** (n * x) * series

ALTERNATIVE_Q_CHARLIER = FamilySpec(
    id="alternative-q-charlier-ks3.22", ks="KS3.22", name="alternative q-Charlier",
    finite=False, self_dual=False, uses_q=True, param_names=("a",),
    constraints=(("a > 0", lambda p: p["a"] > 0),),
    constraint_text="a > 0",
    derive=lambda p: p,
    birth=lambda p, x: p["a"],
    death=lambda p, x: p["q"] ** -x - 1,
    energy=lambda p, n: (p["q"] ** -n - 1) * (1 + p["a"] * p["q"] ** n),
    eta=lambda p, x: 1 - p["q"] ** x,
    log_phi0sq=lambda p, x: _positive(_combine(
        _num(p["a"] ** x), (1, 0.5 * x * (x + 1) * log(p["q"])),
        _inv(_lqp(p["q"], p["q"], x))), "alternative q-charlier phi0^2"),
    log_dn2=_altqc_dn2, poly=_altqc_poly,
)


Q_CHARLIER = FamilySpec(
    id="q-charlier-ks3.23", ks="KS3.23", name="q-Charlier", finite=False,
    self_dual=False, uses_q=True, param_names=("a",),
    complete_basis=False,
    constraints=(("a > 0", lambda p: p["a"] > 0),),
    constraint_text="a > 0",
    derive=lambda p: p,
    birth=lambda p, x: p["a"] * p["q"] ** x,
    death=lambda p, x: 1 - p["q"] ** x,
    energy=lambda p, n: 1 - p["q"] ** n,
    eta=lambda p, x: p["q"] ** -x - 1,
    log_phi0sq=lambda p, x: _positive(_combine(
        _num(p["a"] ** x), (1, 0.5 * x * (x - 1) * log(p["q"])),
        _inv(_lqp(p["q"], p["q"], x))), "q-charlier phi0^2"),
    log_dn2=lambda p, n: _positive(_combine(
        (1, n * log(p["q"])),
        _inv(_lqp(-p["q"] / p["a"], p["q"], n)), _inv(_lqp(p["q"], p["q"], n)),
        _inv(_lqp(-p["a"], p["q"], math.inf))), "q-charlier d_n^2"),
    poly=lambda p, n, x: basic_hypergeometric(SeriesParams(
        numerator=(QPow(-n), QPow(-x)), denominator=(0.0,),
        z=-p["q"] ** (n + 1) / p["a"], q=p["q"])),
)


FAMILY_ORDER = (
    RACAH, HAHN, DUAL_HAHN, KRAWTCHOUK, Q_RACAH, Q_HAHN, DUAL_Q_HAHN,
    QUANTUM_Q_KRAWTCHOUK, Q_KRAWTCHOUK, AFFINE_Q_KRAWTCHOUK,
    MEIXNER, CHARLIER, LITTLE_Q_JACOBI, Q_MEIXNER, LITTLE_Q_LAGUERRE,
    AL_SALAM_CARLITZ_II, ALTERNATIVE_Q_CHARLIER, Q_CHARLIER,
)

FAMILIES = {spec.id: spec for spec in FAMILY_ORDER}
_ALIASES = {spec.id.rsplit("-ks", 1)[0]: spec.id for spec in FAMILY_ORDER}


def get_family(name: str) -> FamilySpec:
    """Look up a family by its full id (``krawtchouk-ks1.10``) or short alias."""
    key = name.strip().lower()
    if key in FAMILIES:
        return FAMILIES[key]
    if key in _ALIASES:
        return FAMILIES[_ALIASES[key]]
    raise KeyError(f"unknown model family {name!r}; see `bdk list`")
