"""Symmetric tridiagonal eigendecomposition in extended precision.

numpy/LAPACK only offer float64 here; the oracle needs the eigenpairs of the
Hamiltonian at better-than-double accuracy because similarity by diag(phi0)
amplifies absolute eigenvector noise by the stationary dynamic range (up to
~1e6 at tail budgets of 1e-12).  This is the classic implicit-shift QL
iteration (EISPACK ``tql2``), dtype-generic so it runs in ``numpy.longdouble``
(80-bit on x86-64).  Matrices here are small (tens of states), so the O(n^3)
pure-numpy cost is negligible.
"""
from __future__ import annotations

import numpy as np

__all__ = ["tridiag_eigh"]


def tridiag_eigh(diag, offdiag, max_iter: int = 256):
    """Eigenvalues and orthonormal eigenvectors of a symmetric tridiagonal matrix.

    Parameters
    ----------
    diag : (n,) array
        Main diagonal.
    offdiag : (n-1,) array
        Sub/super diagonal.
    max_iter : int
        QL sweeps allowed per eigenvalue; strongly graded matrices (entries
        spanning many orders of magnitude) need more than the classic 30.

    Returns
    -------
    w : (n,) ndarray, ascending eigenvalues
    V : (n, n) ndarray, ``V[:, i]`` is the eigenvector for ``w[i]``
    """
    d = np.asarray(diag).copy()
    n = d.size
    one = d.dtype.type(1)
    zero = d.dtype.type(0)
    e = np.concatenate([np.asarray(offdiag, dtype=d.dtype), [zero]])
    if e.size != n:
        raise ValueError("offdiag must have length n-1")
    V = np.eye(n, dtype=d.dtype)
    eps = np.finfo(d.dtype).eps

    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            if it >= max_iter:
                raise np.linalg.LinAlgError("tridiagonal QL failed to converge")
            it += 1
            g = (d[l + 1] - d[l]) / (2 * e[l])
            r = np.hypot(g, one)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0 else -r))
            s = c = one
            p = zero
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = np.hypot(f, g)
                e[i + 1] = r
                if r == 0:
                    d[i + 1] -= p
                    e[m] = zero
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                col = V[:, i + 1].copy()
                V[:, i + 1] = s * V[:, i] + c * col
                V[:, i] = c * V[:, i] - s * col
            else:
                d[l] -= p
                e[l] = g
                e[m] = zero

    order = np.argsort(d, kind="stable")
    return d[order], V[:, order]
