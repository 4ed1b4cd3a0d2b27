"""Core model machinery: parameter validation, state spaces, generic operations.

A :class:`FamilySpec` bundles the closed forms of one model family (rates,
spectrum, sinusoidal coordinate, stationary weight, normalisation constants,
eigenpolynomial series); :class:`ModelParams` is a validated immutable
parameter set.  Everything downstream (spectral kernels, oracles, CLI)
consumes these two types.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "ConstraintViolationError",
    "ModelDegeneracyError",
    "NonNormalizableError",
    "FamilySpec",
    "ModelParams",
    "StateSpace",
]

# positivity of rates is brute-force checked this far out for infinite families
_POSITIVITY_CHECK_STATES = 512
_TRUNCATION_STATE_CAP = 10**6


class ConstraintViolationError(ValueError):
    """A model parameter violates its published range; message names the inequality."""


class ModelDegeneracyError(ValueError):
    """Validated ranges notwithstanding, a rate failed positivity on the lattice."""


class NonNormalizableError(ValueError):
    """The stationary weight has no summable tail (invalid infinite-family params)."""


@dataclass(frozen=True)
class StateSpace:
    """Lattice the process lives on: 0..N, or 0..x_max with a certified tail bound."""

    kind: str  # "finite" | "truncated"
    size: int
    x_max: int
    tail_mass_bound: float | None = None

    def __post_init__(self):
        if self.kind not in ("finite", "truncated"):
            raise ValueError(f"unknown state-space kind {self.kind!r}")
        if self.size != self.x_max + 1:
            raise ValueError("size must equal x_max + 1")


@dataclass(frozen=True)
class FamilySpec:
    """Closed-form data and constraints of one model family."""

    id: str
    ks: str
    name: str
    finite: bool
    self_dual: bool
    uses_q: bool
    param_names: tuple
    # (description, predicate) pairs; predicate takes the canonical param dict
    constraints: tuple
    # canonicalise/derive: dict -> dict (adds e.g. c, d_tilde)
    derive: Callable
    birth: Callable      # (p, x) -> float, interior form (boundaries handled outside)
    death: Callable
    energy: Callable     # (p, n) -> float
    eta: Callable        # (p, x) -> float
    log_phi0sq: Callable  # (p, x) -> float
    log_dn2: Callable     # (p, n) -> float
    poly: Callable        # (p, n, x) -> float, the closed-form P_n(eta(x))
    # False for the families whose eigenvectors provably do not span l^2
    # (see README: "Known analytic limitation"); all algebraic data remains valid.
    complete_basis: bool = True
    constraint_text: str = ""

    def __repr__(self):
        return f"FamilySpec({self.id})"


@dataclass(frozen=True)
class ModelParams:
    """A validated parameter set; the sole source of model data downstream."""

    family: FamilySpec
    params: dict
    N: int | None = None
    q: float | None = None
    _validated: bool = field(default=False, repr=False)

    @property
    def finite(self) -> bool:
        return self.family.finite

    def __getitem__(self, key: str) -> float:
        return self.params[key]

    def _check_x(self, x: int):
        if x < 0 or (self.finite and x > self.N):
            raise ValueError(f"state x={x} outside the state space")

    def _check_n(self, n: int):
        if n < 0 or (self.finite and n > self.N):
            raise ValueError(f"level n={n} outside the spectrum range")


def validate(family: FamilySpec, params: dict, N: int | None = None,
             q: float | None = None) -> ModelParams:
    """Validate raw parameters against the family's published ranges.

    Returns canonical :class:`ModelParams` with derived quantities filled in.
    Beyond the printed inequalities, positivity of B and D is brute-force
    checked on the lattice (all of it for finite N, a long prefix for infinite
    families) because the printed ranges are not stated to be exhaustive.
    """
    unknown = set(params) - set(family.param_names)
    if unknown:
        raise ConstraintViolationError(
            f"{family.id}: unknown parameter(s) {sorted(unknown)}; expected {list(family.param_names)}"
        )
    missing = set(family.param_names) - set(params)
    if missing:
        raise ConstraintViolationError(f"{family.id}: missing parameter(s) {sorted(missing)}")
    for k, v in params.items():
        if not math.isfinite(v):
            raise ConstraintViolationError(f"{family.id}: parameter {k}={v} is not finite")
    if family.finite:
        if N is None or int(N) != N or N < 1:
            raise ConstraintViolationError(f"{family.id}: finite family needs a positive integer N")
        N = int(N)
    elif N is not None:
        raise ConstraintViolationError(f"{family.id}: infinite family takes no N")
    if family.uses_q:
        if q is None or not (0.0 < q < 1.0):
            raise ConstraintViolationError(f"{family.id}: needs q in (0, 1), got {q}")
    elif q is not None:
        raise ConstraintViolationError(f"{family.id}: non-q family takes no q")

    p = dict(params)
    if N is not None:
        p["N"] = N
    if q is not None:
        p["q"] = q
    p = family.derive(p)

    for text, pred in family.constraints:
        if not pred(p):
            raise ConstraintViolationError(f"{family.id}: constraint violated: {text}")

    mp_ = ModelParams(family=family, params=p, N=N, q=q, _validated=True)
    x_hi = N if family.finite else _POSITIVITY_CHECK_STATES
    for x in range(x_hi):
        if not birth_rate(mp_, x) > 0.0:
            raise ModelDegeneracyError(f"{family.id}: B({x}) = {birth_rate(mp_, x)} not positive")
    for x in range(1, x_hi + 1):
        if not death_rate(mp_, x) > 0.0:
            raise ModelDegeneracyError(f"{family.id}: D({x}) = {death_rate(mp_, x)} not positive")
    return mp_


def birth_rate(mp_: ModelParams, x: int) -> float:
    """Up-jump rate B(x); exactly zero at the reflecting wall x = N."""
    x = int(x)
    mp_._check_x(x)
    if mp_.finite and x == mp_.N:
        return 0.0
    return float(mp_.family.birth(mp_.params, x))


def death_rate(mp_: ModelParams, x: int) -> float:
    """Down-jump rate D(x); exactly zero at x = 0."""
    x = int(x)
    mp_._check_x(x)
    if x == 0:
        return 0.0
    return float(mp_.family.death(mp_.params, x))


def energy(mp_: ModelParams, n: int) -> float:
    """Eigenvalue E(n); E(0) = 0 exactly."""
    n = int(n)
    mp_._check_n(n)
    if n == 0:
        return 0.0
    return float(mp_.family.energy(mp_.params, n))


def sinusoidal(mp_: ModelParams, x: int) -> float:
    """Sinusoidal coordinate eta(x); eta(0) = 0 exactly."""
    x = int(x)
    mp_._check_x(x)
    if x == 0:
        return 0.0
    return float(mp_.family.eta(mp_.params, x))


def ground_state_sq(mp_: ModelParams, x: int, method: str = "closed") -> float:
    """Unnormalised stationary weight phi0(x)^2.

    ``method="closed"`` uses the family's closed form, ``method="product"``
    the telescoping product of B(y)/D(y+1); the two agree to ~1e-10 relative
    and the agreement is part of the test suite.
    """
    x = int(x)
    mp_._check_x(x)
    if method == "closed":
        return math.exp(mp_.family.log_phi0sq(mp_.params, x))
    if method == "product":
        out = 1.0
        for y in range(x):
            out *= birth_rate(mp_, y) / death_rate(mp_, y + 1)
        return out
    raise ValueError(f"unknown method {method!r}")


def log_ground_state_sq(mp_: ModelParams, x: int) -> float:
    mp_._check_x(int(x))
    return float(mp_.family.log_phi0sq(mp_.params, int(x)))


def norm_const_sq(mp_: ModelParams, n: int) -> float:
    """Normalisation constant d_n^2 (so that (phi_n, phi_n) = 1/d_n^2)."""
    n = int(n)
    mp_._check_n(n)
    return math.exp(mp_.family.log_dn2(mp_.params, n))


def log_norm_const_sq(mp_: ModelParams, n: int) -> float:
    mp_._check_n(int(n))
    return float(mp_.family.log_dn2(mp_.params, int(n)))


def polynomial(mp_: ModelParams, n: int, x: int) -> float:
    """Closed-form eigenpolynomial value P_n(eta(x)); P_0 = 1 and P_n(0) = 1."""
    n, x = int(n), int(x)
    mp_._check_n(n)
    mp_._check_x(x)
    return float(mp_.family.poly(mp_.params, n, x))


def dual_polynomial(mp_: ModelParams, x: int, n: int) -> float:
    """Dual (Karlin-McGregor) polynomial Q_x(E(n)) by forward recurrence."""
    n, x = int(n), int(x)
    mp_._check_n(n)
    mp_._check_x(x)
    if x == 0:
        return 1.0
    En = energy(mp_, n)
    b0 = birth_rate(mp_, 0)
    prev, cur = 1.0, (b0 - En) / b0
    for y in range(1, x):
        By, Dy = birth_rate(mp_, y), death_rate(mp_, y)
        prev, cur = cur, ((By + Dy - En) * cur - Dy * prev) / By
    return cur


def dual_poly_table(mp_: ModelParams, energies, n_states: int, dtype=np.longdouble):
    """Table P[n, x] = Q_x(E(n)) for an array of energies, via the recurrence.

    Vectorised over the energy axis; the recurrence runs up the lattice using
    the *infinite-model* rates (no reflecting modification), which is exactly
    the duality identity P_n(eta(x)) = Q_x(E(n)).
    """
    E = np.asarray(energies, dtype=dtype)
    P = np.ones((E.size, n_states), dtype=dtype)
    if n_states == 1:
        return P
    B = np.array([birth_rate(mp_, x) for x in range(n_states)], dtype=dtype)
    D = np.array([death_rate(mp_, x) for x in range(n_states)], dtype=dtype)
    P[:, 1] = (B[0] - E) / B[0]
    for x in range(1, n_states - 1):
        P[:, x + 1] = ((B[x] + D[x] - E) * P[:, x] - D[x] * P[:, x - 1]) / B[x]
    return P


def truncate_state_space(mp_: ModelParams, eps_tail: float) -> StateSpace:
    """Smallest lattice prefix whose certified stationary tail mass is < eps_tail.

    The tail above x is bounded by phi0(x+1)^2 / (1 - rho) with rho an upper
    bound on the forward weight ratios B(y)/D(y+1); the bound is valid once
    the ratios are below one and non-increasing over a short lookahead, which
    every catalogued infinite family satisfies beyond its mode.
    """
    if mp_.finite:
        raise ValueError("truncate_state_space applies to infinite families only")
    if not (0.0 < eps_tail < 1.0):
        raise ValueError("eps_tail must lie in (0, 1)")
    lookahead = 4
    log_phi = 0.0           # log phi0(x)^2
    log_total = 0.0         # log sum_{y<=x} phi0(y)^2
    ratios = [birth_rate(mp_, x) / death_rate(mp_, x + 1) for x in range(1, lookahead + 2)]
    x = 0
    while True:
        r_window = [birth_rate(mp_, y) / death_rate(mp_, y + 1) for y in range(x + 1, x + lookahead + 2)]
        rho = max(r_window)
        if rho < 1.0 and all(r_window[i + 1] <= r_window[i] * (1 + 1e-12) for i in range(lookahead)):
            log_next = log_phi + math.log(birth_rate(mp_, x) / death_rate(mp_, x + 1))
            log_tail_bound = log_next - math.log1p(-rho)
            log_mass = np.logaddexp(log_total, log_tail_bound)
            tail_mass = math.exp(log_tail_bound - log_mass)
            if tail_mass < eps_tail:
                return StateSpace("truncated", x + 1, x, tail_mass)
        x += 1
        if x > _TRUNCATION_STATE_CAP:
            raise NonNormalizableError(
                "stationary weight ratios did not certify a summable tail "
                f"within {_TRUNCATION_STATE_CAP} states"
            )
        log_phi += math.log(birth_rate(mp_, x - 1) / death_rate(mp_, x))
        log_total = np.logaddexp(log_total, log_phi)
