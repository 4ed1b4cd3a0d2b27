"""Pochhammer symbols and (basic) hypergeometric series.

Evaluation engine for the terminating series that define the eigenpolynomials,
plus the non-terminating sums needed for infinite products and normalisation
constants.  All public functions return Python floats; internally sums are
accumulated with compensated (Kahan) summation and, when the running condition
number shows that 64-bit arithmetic cannot deliver the requested accuracy,
the terminating sum is redone in adaptive multiprecision (mpmath).

Termination is detected *structurally*: a series terminates iff some numerator
parameter is supplied as a non-positive ``int`` (meaning the exact integer
``-m``) or as ``QPow(e)`` with ``e <= 0`` (meaning exactly ``q**e``).  Floats
are never matched against integers, so near-integer parameters computed in
floating point cannot be misclassified.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp

__all__ = [
    "QPow",
    "SeriesParams",
    "PoleError",
    "NonConvergedError",
    "pochhammer",
    "log_pochhammer",
    "q_pochhammer",
    "log_q_pochhammer",
    "hypergeometric",
    "basic_hypergeometric",
]

MAX_TERMS = 10000
REL_TOL = 1e-16
# escalate to multiprecision when cancellation eats more than ~5 digits
_CONDITION_LIMIT = 1e5


class PoleError(ZeroDivisionError):
    """A denominator Pochhammer factor vanished before the series terminated."""


class NonConvergedError(ArithmeticError):
    """A non-terminating series failed to converge within the term cap."""


@dataclass(frozen=True)
class QPow:
    """Exact symbolic power ``q**exponent`` used as a series parameter.

    ``QPow(-m)`` with ``m >= 0`` marks a terminating numerator parameter
    ``q**-m``; the corresponding q-Pochhammer factor ``1 - q**(e+k)`` is
    computed from the exponent so the vanishing factor at ``k = -e`` is an
    exact zero.
    """

    exponent: int

    def value(self, q: float) -> float:
        return q ** self.exponent


def _termination_index(p) -> int | None:
    # non-q case: int <= 0 encodes the exact parameter -m
    if isinstance(p, QPow):
        return -p.exponent if p.exponent <= 0 else None
    if isinstance(p, int) and not isinstance(p, bool):
        return -p if p <= 0 else None
    return None


@dataclass(frozen=True)
class SeriesParams:
    """Parameter block for an ``rFs`` or ``r phi s`` series.

    Numerator/denominator entries are floats, exact ints (``-m``) or
    :class:`QPow` markers.  ``q is None`` selects the ordinary hypergeometric
    series; otherwise ``0 < q < 1`` is required.
    """

    numerator: tuple
    denominator: tuple
    z: float
    q: float | None = None
    terminating: bool = field(init=False)
    n_terms: int | None = field(init=False)

    def __post_init__(self):
        if self.q is not None and not (0.0 < self.q < 1.0):
            raise ValueError(f"q={self.q} outside (0, 1)")
        ms = [m for m in map(_termination_index, self.numerator) if m is not None]
        object.__setattr__(self, "terminating", bool(ms))
        object.__setattr__(self, "n_terms", min(ms) + 1 if ms else None)


def pochhammer(a: float, n: int) -> float:
    """Shifted factorial ``(a)_n = a (a+1) ... (a+n-1)``; ``(a)_0 = 1``."""
    if n < 0:
        raise ValueError("n must be a non-negative integer")
    out = 1.0
    for k in range(n):
        out *= a + k
    return out


def log_pochhammer(a: float, n: int) -> tuple[int, float]:
    """``(a)_n`` as a ``(sign, log magnitude)`` pair; sign 0 for an exact zero."""
    if n < 0:
        raise ValueError("n must be a non-negative integer")
    sign, logmag = 1, 0.0
    for k in range(n):
        f = a + k
        if f == 0.0:
            return 0, -math.inf
        if f < 0.0:
            sign = -sign
        logmag += math.log(abs(f))
    return sign, logmag


def q_pochhammer(a: float, q: float, n) -> float:
    """q-shifted factorial ``(a;q)_n``; ``n = math.inf`` gives ``(a;q)_inf``.

    The infinite product is iterated until the relative change of the partial
    product drops below 1e-16, which 0 < q < 1 guarantees to happen.
    """
    if not (0.0 < q < 1.0):
        raise ValueError(f"q={q} outside (0, 1)")
    if n is math.inf or n == math.inf:
        out = 1.0
        aqk = a
        while True:
            out *= 1.0 - aqk
            aqk *= q
            if abs(aqk) < REL_TOL:
                return out
    if n < 0:
        raise ValueError("n must be a non-negative integer or math.inf")
    out = 1.0
    aqk = a
    for _ in range(int(n)):
        out *= 1.0 - aqk
        aqk *= q
    return out


def log_q_pochhammer(a: float, q: float, n) -> tuple[int, float]:
    """``(a;q)_n`` as a ``(sign, log magnitude)`` pair; supports ``n = math.inf``."""
    if not (0.0 < q < 1.0):
        raise ValueError(f"q={q} outside (0, 1)")
    sign, logmag = 1, 0.0
    aqk = a
    k = 0
    while True:
        if n is not math.inf and k >= n:
            return sign, logmag
        f = 1.0 - aqk
        if f == 0.0:
            return 0, -math.inf
        if f < 0.0:
            sign = -sign
        logmag += math.log(abs(f))
        aqk *= q
        k += 1
        if n is math.inf and abs(aqk) < REL_TOL:
            return sign, logmag


def _param_value(p, q):
    return p.value(q) if isinstance(p, QPow) else float(p)


def _ratio_factors_f(params: SeriesParams, k: int) -> tuple[float, float]:
    """(numerator product, denominator product) of term-ratio factors at step k."""
    num = 1.0
    for p in params.numerator:
        num *= float(p) + k
    den = 1.0
    for p in params.denominator:
        den *= float(p) + k
    den *= k + 1  # the n! factor
    return num, den

def _ratio_factors_phi(params: SeriesParams, k: int) -> tuple[float, float]:
    q = params.q
    num = 1.0
    for p in params.numerator:
        if isinstance(p, QPow):
            e = p.exponent + k
            num *= 0.0 if e == 0 else 1.0 - q**e
        else:
            num *= 1.0 - float(p) * q**k
    den = 1.0
    for p in params.denominator:
        if isinstance(p, QPow):
            e = p.exponent + k
            den *= 0.0 if e == 0 else 1.0 - q**e
        else:
            den *= 1.0 - float(p) * q**k
    den *= 1.0 - q ** (k + 1)  # the (q;q)_n factor
    # (-1)^{(1+s-r)n} q^{(1+s-r)n(n-1)/2} contributes this per-step ratio
    srp = 1 + len(params.denominator) - len(params.numerator)
    extra = (-1.0) ** srp * q ** (srp * k) if srp else 1.0
    return num * extra, den


def _sum_terms(params: SeriesParams, max_terms: int) -> float:
    """Kahan-compensated term-recurrence summation with a cancellation guard."""
    ratio_fn = _ratio_factors_f if params.q is None else _ratio_factors_phi
    limit = params.n_terms if params.terminating else max_terms

    total, comp = 1.0, 0.0  # k = 0 term is 1
    abs_sum = 1.0
    term = 1.0
    k = 0
    while True:
        if params.terminating and k + 1 >= limit:
            break
        num, den = ratio_fn(params, k)
        if den == 0.0:
            raise PoleError(
                f"denominator Pochhammer vanished at term {k + 1} before termination"
            )
        term = term * params.z * num / den
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        abs_sum += abs(term)
        k += 1
        if not params.terminating:
            if abs(term) <= REL_TOL * abs(total) and k >= 4:
                break
            if k >= limit:
                raise NonConvergedError(
                    f"series did not converge within {max_terms} terms"
                )
    if params.terminating and abs_sum > _CONDITION_LIMIT * max(abs(total), 1e-300):
        return _sum_terms_mp(params, abs_sum, total)
    return total


def _sum_terms_mp(params: SeriesParams, abs_sum: float, f64_total: float) -> float:
    """Multiprecision re-summation of a terminating series.

    Working precision is set from the observed cancellation so the returned
    float is correctly rounded for practical purposes.
    """
    cancel_digits = math.log10(abs_sum / max(abs(f64_total), 1e-300)) if f64_total else 40
    dps = int(min(200, 30 + max(cancel_digits, 0)))
    with mp.workdps(dps):
        q = None if params.q is None else mp.mpf(params.q)
        z = mp.mpf(params.z)
        total = mp.mpf(1)
        term = mp.mpf(1)
        srp = 1 + len(params.denominator) - len(params.numerator)
        for k in range(params.n_terms - 1):
            num = mp.mpf(1)
            den = mp.mpf(1)
            if q is None:
                for p in params.numerator:
                    num *= mp.mpf(p) + k
                for p in params.denominator:
                    den *= mp.mpf(p) + k
                den *= k + 1
            else:
                for p in params.numerator:
                    num *= (1 - q ** (p.exponent + k)) if isinstance(p, QPow) else (1 - mp.mpf(p) * q**k)
                for p in params.denominator:
                    den *= (1 - q ** (p.exponent + k)) if isinstance(p, QPow) else (1 - mp.mpf(p) * q**k)
                den *= 1 - q ** (k + 1)
                if srp:
                    num *= (-1) ** srp * q ** (srp * k)
            if den == 0:
                raise PoleError(
                    f"denominator Pochhammer vanished at term {k + 1} before termination"
                )
            term = term * z * num / den
            total += term
        return float(total)


def hypergeometric(params: SeriesParams, max_terms: int = MAX_TERMS) -> float:
    """Evaluate ``rFs(a1..ar; b1..bs | z)``.

    Terminating series are summed exactly (all ``m+1`` terms); otherwise terms
    are accumulated until the relative term size drops below 1e-16, and
    :class:`NonConvergedError` is raised if the cap is hit first.
    """
    if params.q is not None:
        raise ValueError("params carry q; use basic_hypergeometric")
    return _sum_terms(params, max_terms)


def basic_hypergeometric(params: SeriesParams, max_terms: int = MAX_TERMS) -> float:
    """Evaluate the basic series ``r phi s(a1..ar; b1..bs | q; z)``.

    Includes the ``(-1)^n q^(n(n-1)/2)`` factor to the power ``1+s-r`` from
    the series definition.  Same termination/convergence contract as
    :func:`hypergeometric`.
    """
    if params.q is None:
        raise ValueError("params carry no q; use hypergeometric")
    return _sum_terms(params, max_terms)
