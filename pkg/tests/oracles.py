"""Independent reference implementations used only to check the library.

These deliberately avoid the code paths under test: exact ranks come from
Gaussian elimination over the rationals, spectral facts from dense numpy
eigendecompositions of matrices assembled straight from the definitions.
"""

from fractions import Fraction

import numpy as np


def exact_rank(M) -> int:
    """Rank over Q by Gaussian elimination with exact Fraction arithmetic."""
    A = [[Fraction(int(v)) for v in row] for row in np.asarray(M.toarray() if hasattr(M, "toarray") else M, dtype=np.int64)]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    rank = 0
    pivot_row = 0
    for c in range(cols):
        pr = next((r for r in range(pivot_row, rows) if A[r][c] != 0), None)
        if pr is None:
            continue
        A[pivot_row], A[pr] = A[pr], A[pivot_row]
        pv = A[pivot_row][c]
        for r in range(pivot_row + 1, rows):
            if A[r][c] != 0:
                f = A[r][c] / pv
                A[r] = [a - f * b for a, b in zip(A[r], A[pivot_row])]
        pivot_row += 1
        rank += 1
        if pivot_row == rows:
            break
    return rank


def dense_eigh(M):
    """Sorted eigenvalues and eigenvectors of a (sparse or dense) symmetric matrix."""
    A = M.toarray() if hasattr(M, "toarray") else np.asarray(M, dtype=float)
    return np.linalg.eigh(A)


def eig_multiset(M, tol=1e-8):
    """Sorted nonzero eigenvalues of a symmetric matrix."""
    vals = dense_eigh(M)[0]
    return np.sort(vals[np.abs(vals) > tol])


def brute_dirac(K):
    """Assemble D, D1, D2 densely straight from the definition."""
    n0, n1, n2 = K.n0, K.n1, K.n2
    M = n0 + n1 + n2
    B1 = np.zeros((n0, n1))
    for c, (i, j) in enumerate(K.links):
        B1[i, c] = -1.0
        B1[j, c] = 1.0
    B2 = np.zeros((n1, n2))
    link_pos = {lk: p for p, lk in enumerate(K.links)}
    for c, (i, j, k) in enumerate(K.triangles):
        B2[link_pos[(i, j)], c] = 1.0
        B2[link_pos[(i, k)], c] = -1.0
        B2[link_pos[(j, k)], c] = 1.0
    D1 = np.zeros((M, M))
    D1[:n0, n0 : n0 + n1] = B1
    D1[n0 : n0 + n1, :n0] = B1.T
    D2 = np.zeros((M, M))
    D2[n0 : n0 + n1, n0 + n1 :] = B2
    D2[n0 + n1 :, n0 : n0 + n1] = B2.T
    return D1 + D2, D1, D2


def eigenbasis_projection(M_dense, vec, keep):
    """Project ``vec`` onto the span of eigenvectors selected by ``keep(lam)``."""
    vals, vecs = np.linalg.eigh(M_dense)
    cols = vecs[:, [i for i, v in enumerate(vals) if keep(v)]]
    return cols @ (cols.T @ vec)
