"""Brute-force validation machinery, independent of the spectral engine.

Dense generator and Hamiltonian construction, matrix exponentials through the
symmetric eigendecomposition, eigensystem reports, exact-CTMC Gillespie
sampling, and the continuous closed-form kernel identities (Gaussian/Mehler
and Bessel/Hardy-Hille) that validate the truncated-summation approach.

For truncated-infinite models the generator box is padded beyond the
comparison window: a reflecting wall placed exactly at the window edge
distorts edge-row kernels at O(B(x_max) t), orders of magnitude above the
truncation budget, while a padded wall pushes that distortion out of the
window entirely.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import models, _gillespie
from ._tridiag import tridiag_eigh
from .models import ModelParams, StateSpace
from .spectral import Distribution

__all__ = [
    "GeneratorMatrix",
    "build_generator",
    "expm_kernel",
    "expm_window",
    "verify_eigensystem",
    "gillespie_sample",
    "closed_form_kernel_checks",
    "AdvisoryError",
]

_LD = np.longdouble
DEFAULT_PAD = 48
RNG_ALGORITHM = "splitmix64"


class AdvisoryError(ArithmeticError):
    """The requested check cannot meet its truncation budget (e.g. t too small)."""


@dataclass(frozen=True)
class GeneratorMatrix:
    """Dense birth-death generator with its symmetric Hamiltonian companion."""

    params: ModelParams
    window: int            # states the caller asked about
    size: int              # full box including padding
    pad: int
    L: np.ndarray          # float64 generator, columns sum to zero
    H_diag: np.ndarray     # longdouble
    H_off: np.ndarray      # longdouble
    phi0: np.ndarray       # longdouble ground state on the box
    eigenvalues: np.ndarray   # longdouble, ascending
    eigenvectors: np.ndarray  # longdouble, columns
    reflecting_modified: bool
    notes: tuple = ()

    @property
    def H(self) -> np.ndarray:
        """Symmetric tridiagonal Hamiltonian as a dense float64 matrix."""
        H = np.diag(self.H_diag.astype(float))
        off = self.H_off.astype(float)
        H += np.diag(off, 1) + np.diag(off, -1)
        return H


def _box_rates(params: ModelParams, size: int):
    B = np.array([models.birth_rate(params, x) for x in range(size)])
    D = np.array([models.death_rate(params, x) for x in range(size)])
    modified = not params.family.finite or size - 1 < params.N
    B[-1] = 0.0
    return B, D, modified


def build_generator(params: ModelParams, space: StateSpace,
                    pad: int | None = None) -> GeneratorMatrix:
    """Dense L and H on the given space (padded for truncated spaces).

    Construction invariants are verified before returning: zero column sums,
    the transpose relation between -L and the similarity-transformed
    Hamiltonian, and the bidiagonal factorisation H = A^T A, all to 1e-12.
    """
    if params.family.finite:
        size = params.N + 1
        pad = 0
    else:
        pad = DEFAULT_PAD if pad is None else int(pad)
        size = space.size + pad
    B, D, modified = _box_rates(params, size)

    L = np.zeros((size, size))
    for x in range(size):
        L[x, x] = -(B[x] + D[x])
        if x > 0:
            L[x, x - 1] = B[x - 1]
        if x < size - 1:
            L[x, x + 1] = D[x + 1]

    colsum = float(np.abs(L.sum(axis=0)).max())
    if colsum > 1e-12:
        raise ArithmeticError(f"generator columns do not sum to zero: {colsum}")

    # -L must equal the transpose of Htilde = B(x)(1 - shift+) + D(x)(1 - shift-)
    Ht = np.zeros_like(L)
    for x in range(size):
        Ht[x, x] = B[x] + D[x]
        if x < size - 1:
            Ht[x, x + 1] = -B[x]
        if x > 0:
            Ht[x, x - 1] = -D[x]
    if not np.array_equal(-L, Ht.T):
        raise ArithmeticError("-L != transpose(similarity-transformed H)")

    Bl = B.astype(_LD)
    Dl = D.astype(_LD)
    H_diag = Bl + Dl
    H_off = -np.sqrt(Bl[:-1] * Dl[1:])

    # factorisation check: A has sqrt(B) on the diagonal, -sqrt(D(x+1)) above
    sqrtB = np.sqrt(B)
    sqrtD = np.sqrt(D)
    A = np.diag(sqrtB) - np.diag(sqrtD[1:], 1)
    recon = A.T @ A - (np.diag(H_diag.astype(float))
                       + np.diag(H_off.astype(float), 1)
                       + np.diag(H_off.astype(float), -1))
    scale = max(1.0, float(np.abs(H_diag).max()))
    if float(np.abs(recon).max()) > 1e-12 * scale:
        raise ArithmeticError("H != A^T A beyond 1e-12")

    phi0 = np.ones(size, dtype=_LD)
    for x in range(size - 1):
        phi0[x + 1] = phi0[x] * np.sqrt(Bl[x] / Dl[x + 1])

    w, V = tridiag_eigh(H_diag.copy(), H_off.copy())
    notes = ()
    if modified:
        notes = (f"reflecting cutoff applied at x={size - 1} (pad={pad})",)
    return GeneratorMatrix(
        params=params, window=space.size, size=size, pad=pad, L=L,
        H_diag=H_diag, H_off=H_off, phi0=phi0,
        eigenvalues=w, eigenvectors=V,
        reflecting_modified=modified, notes=notes,
    )


def expm_kernel(gen: GeneratorMatrix, t: float) -> np.ndarray:
    """exp(t L) over the full box; columns are indexed by the start state.

    Computed as Phi exp(-t H) Phi^-1 from the extended-precision symmetric
    eigendecomposition of H.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    w, V = gen.eigenvalues, gen.eigenvectors
    M = (V * np.exp(-w * _LD(t))) @ V.T
    K = (gen.phi0[:, None] * M) / gen.phi0[None, :]
    return np.asarray(K, dtype=float)


def expm_window(gen: GeneratorMatrix, t: float) -> np.ndarray:
    """exp(t L) restricted to the comparison window, rows = start state."""
    return expm_kernel(gen, t)[: gen.window, : gen.window].T


def verify_eigensystem(params: ModelParams, space: StateSpace) -> dict:
    """Residual and spectrum report for the dense Hamiltonian.

    Uses numpy's float64 ``eigh`` (an algorithm independent of the
    extended-precision solver that powers the kernels) for the spectral
    match, and the recurrence eigenvector table for the residuals.
    """
    gen = build_generator(params, space)
    size = gen.size
    Hf = gen.H
    w64 = np.linalg.eigvalsh(Hf)

    if params.family.finite:
        n_check = params.N + 1
    else:
        n_check = min(10, max(2, space.size // 4))
    E = np.array([models.energy(params, n) for n in range(n_check)])

    # eigenvalue match on the lowest modes the box resolves
    rel = np.abs(np.sort(w64)[:n_check] - E) / np.maximum(1.0, np.abs(E))
    spectral_match = float(rel.max())

    # residuals of the closed-form eigenvectors phi_n = phi0 * P_n(eta)
    P = models.dual_poly_table(params, E.astype(_LD), size, dtype=_LD)
    phi_n = (gen.phi0[None, :] * P).astype(float)
    H_ld = np.diag(gen.H_diag) + np.diag(gen.H_off, 1) + np.diag(gen.H_off, -1)
    resid = 0.0
    for n in range(n_check):
        v = phi_n[n]
        r = np.asarray(H_ld @ v.astype(_LD) - _LD(E[n]) * v.astype(_LD), dtype=float)
        if not params.family.finite:
            r = r[: space.size]  # edge rows feel the reflecting modification
        resid = max(resid, float(np.abs(r).max() / np.abs(v).max()))

    sqrtB = np.sqrt(np.array([models.birth_rate(params, x) for x in range(size)]))
    sqrtD = np.sqrt(np.array([models.death_rate(params, x) for x in range(size)]))
    phi0f = gen.phi0.astype(float)
    Aphi0 = sqrtB * phi0f - np.append(sqrtD[1:] * phi0f[1:], 0.0)
    if not params.family.finite:
        Aphi0 = Aphi0[:-1]  # last entry is the reflecting wall, not the model
    a_resid = float(np.abs(Aphi0).max())

    min_eig = float(w64.min())
    checks = [
        ("eigenvalue_match", spectral_match, 1e-9, spectral_match <= 1e-9),
        ("eigenvector_residual", resid, 1e-9, resid <= 1e-9),
        ("A_phi0", a_resid, 1e-12, a_resid <= 1e-12),
        ("positive_semidefinite", min_eig, -1e-10, min_eig >= -1e-10),
    ]
    return {
        "family": params.family.id,
        "n_checked": n_check,
        "checks": [
            {"check": c, "metric": m, "threshold": thr, "pass": bool(ok)}
            for c, m, thr, ok in checks
        ],
        "pass": all(ok for *_, ok in checks),
    }


def gillespie_sample(params: ModelParams, space: StateSpace, y0: int, t: float,
                     n_paths: int, seed: int, lane: str | None = None,
                     return_states: bool = False):
    """Empirical law of X(t) from independent exact-CTMC paths.

    Deterministic given (seed, n_paths, lane); per-path splitmix64 streams
    are derived from (seed, path index).  Up-jumps at a truncated edge are
    rejected in place and reported as escape attempts.

    Returns ``(Distribution, diagnostics dict)``; the per-path final states
    are included in the diagnostics when ``return_states`` is set.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be at least 1")
    if not (0 <= y0 <= space.x_max):
        raise ValueError(f"start state {y0} outside the state space")
    if t < 0:
        raise ValueError("t must be non-negative")
    size = space.size
    B = np.array([models.birth_rate(params, x) for x in range(size)])
    D = np.array([models.death_rate(params, x) for x in range(size)])
    if params.family.finite:
        B[-1] = 0.0
    finals, attempts = _gillespie.run_paths(B, D, y0, t, n_paths, seed, lane=lane)
    counts = np.bincount(finals, minlength=size)
    emp = Distribution(counts / n_paths, time=t)
    diag = {
        "algorithm": RNG_ALGORITHM,
        "lane": lane or _gillespie.active_lane(),
        "seed": int(seed),
        "n_paths": int(n_paths),
        "escape_attempts": int(attempts),
    }
    if return_states:
        diag["final_states"] = finals
    return emp, diag


# ---------------------------------------------------------------------------
# closed-form kernel identities (continuous validation targets)
# ---------------------------------------------------------------------------

def _hermite_normalized(x: float, n_max: int) -> np.ndarray:
    """u_n(x) = H_n(x)/sqrt(2^n n!) via the stable normalised recurrence."""
    u = np.empty(n_max + 1)
    u[0] = 1.0
    if n_max >= 1:
        u[1] = x * math.sqrt(2.0)
    for n in range(1, n_max):
        u[n + 1] = (x * math.sqrt(2.0 / (n + 1)) * u[n]
                    - math.sqrt(n / (n + 1.0)) * u[n - 1])
    return u


def hermite_kernel_sum(x: float, y: float, t: float, rel_tol: float = 1e-14,
                       n_cap: int = 4000) -> float:
    """Truncated eigensum  e^{-x^2}/sqrt(pi) * sum_n u_n(x) u_n(y) e^{-2nt}."""
    if t <= 0:
        raise ValueError("t must be positive")
    n_max = int(max(64, math.ceil(-math.log(1e-18) / (2 * t)) + 8 * (abs(x) + abs(y) + 1)))
    if n_max > n_cap:
        raise AdvisoryError(f"t={t} too small for the truncation budget (need {n_max} terms)")
    ux = _hermite_normalized(x, n_max)
    uy = _hermite_normalized(y, n_max)
    damp = np.exp(-2.0 * t * np.arange(n_max + 1))
    return math.exp(-x * x) / math.sqrt(math.pi) * float(np.sum(ux * uy * damp))


def mehler_kernel(x: float, y: float, t: float) -> float:
    """Closed Gaussian form of the Hermite heat kernel."""
    s = 1.0 - math.exp(-4.0 * t)
    return math.exp(-((x - y * math.exp(-2.0 * t)) ** 2) / s) / math.sqrt(math.pi * s)


def _laguerre_normalized(beta: float, z: float, n_max: int) -> np.ndarray:
    """g_n = L_n^(beta)(z) * sqrt(n!/Gamma(n+beta+1))."""
    L = np.empty(n_max + 1)
    L[0] = 1.0
    if n_max >= 1:
        L[1] = 1.0 + beta - z
    for n in range(1, n_max):
        L[n + 1] = ((2 * n + 1 + beta - z) * L[n] - (n + beta) * L[n - 1]) / (n + 1.0)
    n = np.arange(n_max + 1)
    lognorm = 0.5 * (np.array([math.lgamma(k + 1) for k in n])
                     - np.array([math.lgamma(k + beta + 1) for k in n]))
    return L * np.exp(lognorm)


def laguerre_kernel_sum(x: float, y: float, t: float, g: float,
                        n_cap: int = 4000) -> float:
    """Truncated eigensum  2 e^{-x^2} x^{2g} sum_n g_n(x^2) g_n(y^2) e^{-4nt}."""
    if t <= 0:
        raise ValueError("t must be positive")
    if g <= 0.5:
        raise ValueError("g must exceed 1/2")
    beta = g - 0.5
    n_max = int(max(64, math.ceil(-math.log(1e-18) / (4 * t)) + 8 * (x * x + y * y + 1)))
    if n_max > n_cap:
        raise AdvisoryError(f"t={t} too small for the truncation budget (need {n_max} terms)")
    gx = _laguerre_normalized(beta, x * x, n_max)
    gy = _laguerre_normalized(beta, y * y, n_max)
    damp = np.exp(-4.0 * t * np.arange(n_max + 1))
    return 2.0 * math.exp(-x * x) * x ** (2 * g) * float(np.sum(gx * gy * damp))


def bessel_i(beta: float, z: float) -> float:
    """Modified Bessel I_beta by its ascending series."""
    total = 0.0
    k = 0
    while True:
        term = math.exp((beta + 2 * k) * math.log(z / 2.0)
                        - math.lgamma(k + 1) - math.lgamma(k + beta + 1))
        total += term
        if term < 1e-17 * total and k > 2:
            return total
        k += 1
        if k > 10000:
            raise AdvisoryError(f"Bessel series did not converge for z={z}")


def hardy_hille_kernel(x: float, y: float, t: float, g: float) -> float:
    """Closed Bessel form of the Laguerre heat kernel."""
    beta = g - 0.5
    s = 1.0 - math.exp(-4.0 * t)
    pref = 2.0 * x ** (2 * g) / s * math.exp(-(x * x + y * y * math.exp(-4.0 * t)) / s)
    arg = 2.0 * x * y * math.exp(-2.0 * t) / s
    return pref * (x * y * math.exp(-2.0 * t)) ** (-beta) * bessel_i(beta, arg)


def closed_form_kernel_checks(t: float, xs=None, ys=None, g: float = 1.0,
                              tol: float = 1e-8) -> dict:
    """Compare truncated eigensums against the closed kernels on a grid."""
    if xs is None:
        xs = np.linspace(-1.5, 1.5, 5)
    if ys is None:
        ys = xs
    herm_dev = 0.0
    for x in xs:
        for y in ys:
            herm_dev = max(herm_dev, abs(hermite_kernel_sum(x, y, t) - mehler_kernel(x, y, t)))
    lag_xs = np.linspace(0.4, 1.6, 5)
    lag_dev = 0.0
    for x in lag_xs:
        for y in lag_xs:
            lag_dev = max(lag_dev, abs(laguerre_kernel_sum(x, y, t, g)
                                       - hardy_hille_kernel(x, y, t, g)))
    return {
        "t": t,
        "checks": [
            {"check": "hermite_mehler", "metric": herm_dev, "threshold": tol,
             "pass": herm_dev <= tol},
            {"check": "laguerre_hardy_hille", "metric": lag_dev, "threshold": tol,
             "pass": lag_dev <= tol},
        ],
        "pass": herm_dev <= tol and lag_dev <= tol,
    }
