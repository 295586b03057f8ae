"""Cyclic Jacobi eigendecomposition for small dense symmetric matrices.

Used for the Gram matrices behind the slice-unfolding spectral norm and
for null-space extraction in the zero-eigenvalue branch. Dimensions here
are tiny (n <= 5), where Jacobi converges unconditionally and does not
depend on spectral gaps.
"""

from __future__ import annotations

import numpy as np


def jacobi_eigh(S, tol=1e-12, max_sweeps=60):
    """Eigenvalues and eigenvectors of a symmetric matrix by cyclic Jacobi.

    Sweeps over the strict upper triangle, rotating away each off-diagonal
    entry, until all off-diagonal magnitudes fall below ``tol`` times the
    largest diagonal magnitude (absolute ``tol`` for near-zero matrices).

    Returns ``(w, V)`` with eigenvalues ascending and ``V[:, k]`` the
    eigenvector for ``w[k]``.
    """
    A = np.array(S, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("jacobi_eigh expects a square matrix")
    if not np.allclose(A, A.T, atol=1e-12 * max(1.0, float(np.abs(A).max(initial=0.0)))):
        raise ValueError("jacobi_eigh expects a symmetric matrix")
    n = A.shape[0]
    V = np.eye(n)
    if n == 1:
        return A.diagonal().copy(), V
    scale = max(1.0, float(np.abs(A).max()))
    thresh = tol * scale
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= thresh * 1e-4:
                    off = max(off, abs(apq))
                    continue
                off = max(off, abs(apq))
                # Rotation angle from the classic stable formulas.
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                app, aqq = A[p, p], A[q, q]
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0
                for i in range(n):
                    if i != p and i != q:
                        aip, aiq = A[i, p], A[i, q]
                        A[i, p] = aip * c - aiq * s
                        A[p, i] = A[i, p]
                        A[i, q] = aiq * c + aip * s
                        A[q, i] = A[i, q]
                for i in range(n):
                    vip, viq = V[i, p], V[i, q]
                    V[i, p] = vip * c - viq * s
                    V[i, q] = viq * c + vip * s
        if off <= thresh:
            break
    w = A.diagonal().copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def spectral_norm_sym_psd(G, tol=1e-12):
    """sqrt of the largest eigenvalue of a symmetric PSD matrix."""
    w, _ = jacobi_eigh(G, tol=tol)
    return float(np.sqrt(max(w[-1], 0.0)))
