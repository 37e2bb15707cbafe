"""The Dirac operator, Hodge Laplacians, spectra, and spinor decompositions.

The Dirac operator D couples adjacent dimensions through the boundary
matrices:

    D = | 0    B1   0  |        D = D1 + D2,   D^2 = blockdiag(L0, L1, L2)
        | B1^T 0    B2 |
        | 0    B2^T 0  |

D1 carries only the B1 blocks, D2 only the B2 blocks; they annihilate each
other, which splits spinor space into im(D1) + im(D2) + ker(D).  Nonzero
eigenpairs of D_n come in chiral pairs (+lambda, -lambda) built from the
singular triplets of B_n: if B_n v = sigma u, then (u, +/-v)/sqrt(2) padded
with the zero block are unit eigenvectors of D_n with eigenvalues +/-sigma.

All operators are immutable after assembly; projections are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import svds

from .complexes import RANK_RTOL, SimplicialComplex, boundary_matrix
from .errors import DimensionMismatch, EigensolveFailure, InvalidOrder
from .spinors import TopologicalSpinor

# Larger side of B_n above which the dense SVD is replaced by a Lanczos
# (iterative) SVD with deflation.  4000 covers every experiment in the
# bundled harness presets.
DENSE_SVD_THRESHOLD = 4000


def _block_dirac(B1: sp.sparray, B2: sp.sparray, parts: str) -> sp.csr_array:
    """Assemble the symmetric block operator from selected boundary parts."""
    n0, n1 = B1.shape
    n2 = B2.shape[1]
    Z = lambda r, c: sp.csr_array((r, c))
    b1 = B1 if "1" in parts else Z(n0, n1)
    b2 = B2 if "2" in parts else Z(n1, n2)
    rows = [
        [Z(n0, n0), b1, Z(n0, n2)],
        [b1.T, Z(n1, n1), b2],
        [Z(n2, n0), b2.T, Z(n2, n2)],
    ]
    return sp.block_array(rows, format="csr")


@dataclass(frozen=True)
class DiracOperator:
    """Symmetric Dirac operator of a complex, with its parts D1 and D2."""

    K: SimplicialComplex
    B1: sp.csc_array
    B2: sp.csc_array
    full: sp.csr_array
    part1: sp.csr_array
    part2: sp.csr_array

    @property
    def dim(self) -> int:
        return self.K.spinor_dim

    def part(self, n: int) -> sp.csr_array:
        if n == 1:
            return self.part1
        if n == 2:
            return self.part2
        raise InvalidOrder(f"Dirac parts are n in {{1, 2}}, got {n}")

    def boundary(self, n: int) -> sp.csc_array:
        if n == 1:
            return self.B1
        if n == 2:
            return self.B2
        raise InvalidOrder(f"boundary matrices are n in {{1, 2}}, got {n}")

    # -- Laplacians ---------------------------------------------------------

    def laplacian(self, n: int, which: str = "full") -> sp.csr_array:
        return hodge_laplacian(self.K, n, which, _B=(self.B1, self.B2))

    @cached_property
    def super_laplacian(self) -> sp.csr_array:
        """blockdiag(L0, L1, L2); equals D^2 up to floating-point roundoff."""
        return sp.block_diag(
            [self.laplacian(0), self.laplacian(1), self.laplacian(2)],
            format="csr",
        )

    # -- spectra of the parts -------------------------------------------------

    def _svd(self, n: int):
        """Rank-truncated singular triplets (U, sigma, V) of B_n, sigma descending."""
        return _truncated_svd(self.boundary(n))

    @cached_property
    def _svd1(self):
        return self._svd(1)

    @cached_property
    def _svd2(self):
        return self._svd(2)

    def singular_triplets(self, n: int):
        if n == 1:
            return self._svd1
        if n == 2:
            return self._svd2
        raise InvalidOrder(f"n must be 1 or 2, got {n}")

    def rank(self, n: int) -> int:
        return self.singular_triplets(n)[1].size

    def nonharmonic_dim(self, n: int) -> int:
        """dim im(D_n) = 2 rank(B_n)."""
        return 2 * self.rank(n)

    def _blocks_for(self, n: int, s: TopologicalSpinor):
        """(left-block, right-block) of the spinor that D_n actually touches."""
        if n == 1:
            return s.s0, s.s1
        if n == 2:
            return s.s1, s.s2
        raise InvalidOrder(f"n must be 1 or 2, got {n}")

    def _spinor_from_blocks(self, n: int, left, right) -> TopologicalSpinor:
        K = self.K
        if n == 1:
            return TopologicalSpinor(left, right, np.zeros(K.n2))
        return TopologicalSpinor(np.zeros(K.n0), left, right)

    def _check(self, s: TopologicalSpinor) -> None:
        if len(s) != self.dim:
            raise DimensionMismatch(
                f"spinor has length {len(s)}, operator needs {self.dim}"
            )

    def apply(self, s: TopologicalSpinor, n: int | None = None) -> TopologicalSpinor:
        """D s (n=None) or D_n s."""
        self._check(s)
        op = self.full if n is None else self.part(n)
        return TopologicalSpinor.from_vector(self.K, op @ s.vector)


def assemble_dirac(K: SimplicialComplex) -> DiracOperator:
    """Build D, D1, D2 for a complex.  1-dimensional complexes get D2 = 0."""
    B1 = boundary_matrix(K, 1).astype(float)
    B2 = boundary_matrix(K, 2).astype(float)
    return DiracOperator(
        K=K,
        B1=B1,
        B2=B2,
        full=_block_dirac(B1, B2, "12"),
        part1=_block_dirac(B1, B2, "1"),
        part2=_block_dirac(B1, B2, "2"),
    )


def hodge_laplacian(
    K: SimplicialComplex, n: int, which: str = "full", _B=None
) -> sp.csr_array:
    """L_n = B_n^T B_n + B_{n+1} B_{n+1}^T, or its up/down part alone."""
    if n not in (0, 1, 2):
        raise InvalidOrder(f"Hodge Laplacians exist for n in {{0, 1, 2}}, got {n}")
    if which not in ("full", "up", "down"):
        raise InvalidOrder(f"which must be full|up|down, got {which!r}")
    if _B is None:
        _B = (boundary_matrix(K, 1).astype(float), boundary_matrix(K, 2).astype(float))
    B1, B2 = _B

    sizes = {0: K.n0, 1: K.n1, 2: K.n2}
    down = {0: None, 1: lambda: B1.T @ B1, 2: lambda: B2.T @ B2}[n]
    up = {0: lambda: B1 @ B1.T, 1: lambda: B2 @ B2.T, 2: None}[n]

    zero = sp.csr_array((sizes[n], sizes[n]))
    d = down().tocsr() if (down and which in ("full", "down")) else zero
    u = up().tocsr() if (up and which in ("full", "up")) else zero
    if which == "down":
        return d
    if which == "up":
        return u
    return (d + u).tocsr()


# -- SVD machinery ------------------------------------------------------------


def _truncated_svd(B: sp.sparray):
    """(U, sigma, V) of B keeping sigma > RANK_RTOL * sigma_max, descending."""
    m, n = B.shape
    if m == 0 or n == 0:
        return np.zeros((m, 0)), np.zeros(0), np.zeros((n, 0))
    if max(m, n) <= DENSE_SVD_THRESHOLD:
        try:
            U, s, Vt = np.linalg.svd(B.toarray(), full_matrices=False)
        except np.linalg.LinAlgError as exc:
            raise EigensolveFailure(f"dense SVD failed: {exc}") from exc
    else:
        U, s, Vt = _lanczos_svd(B.astype(float))
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((m, 0)), np.zeros(0), np.zeros((n, 0))
    r = int(np.count_nonzero(s > RANK_RTOL * s[0]))
    return U[:, :r], s[:r], Vt[:r].T


def _lanczos_svd(B: sp.sparray):
    """Iterative SVD capturing the whole nonzero spectrum.

    svds() returns at most min(shape)-1 triplets; when B has full minimal
    rank the last direction is recovered by deflation against the computed
    singular vectors.
    """
    m, n = B.shape
    k = min(m, n) - 1
    if k < 1:
        U, s, Vt = np.linalg.svd(B.toarray(), full_matrices=False)
        return U, s, Vt
    try:
        U, s, Vt = svds(B, k=k)
    except Exception as exc:  # ARPACK non-convergence
        raise EigensolveFailure(f"iterative SVD failed: {exc}") from exc
    order = np.argsort(s)[::-1]
    U, s, Vt = U[:, order], s[order], Vt[order]

    # Deflate on the short side to find the possibly-missed triplet.
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(0)))
    if n <= m:
        v = rng.standard_normal(n)
        v -= Vt.T @ (Vt @ v)
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            v /= nv
            Bv = B @ v
            extra = np.linalg.norm(Bv)
            if extra > RANK_RTOL * max(s[0], 1.0):
                U = np.column_stack([U, Bv / extra])
                s = np.append(s, extra)
                Vt = np.vstack([Vt, v])
    else:
        u = rng.standard_normal(m)
        u -= U @ (U.T @ u)
        nu = np.linalg.norm(u)
        if nu > 1e-8:
            u /= nu
            Btu = B.T @ u
            extra = np.linalg.norm(Btu)
            if extra > RANK_RTOL * max(s[0], 1.0):
                U = np.column_stack([U, u])
                s = np.append(s, extra)
                Vt = np.vstack([Vt, Btu / extra])
    order = np.argsort(s)[::-1]
    return U[:, order], s[order], Vt[order]


def _null_basis(A: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ker(A) with the package-wide rank threshold."""
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0))
    if m == 0:
        return np.eye(n)
    U, s, Vt = np.linalg.svd(A, full_matrices=True)
    r = int(np.count_nonzero(s > RANK_RTOL * s[0])) if s.size and s[0] > 0 else 0
    return Vt[r:].T


def _fix_signs(cols: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry of each column positive (first on ties)."""
    if cols.size == 0:
        return cols
    idx = np.argmax(np.abs(cols), axis=0)
    signs = np.sign(cols[idx, np.arange(cols.shape[1])])
    signs[signs == 0] = 1.0
    return cols * signs


# -- spectral basis -----------------------------------------------------------


@dataclass(frozen=True)
class SpectralBasis:
    """Eigenpairs of D_n, ascending, split into negative / harmonic / positive.

    ``vectors[:, i]`` is the unit eigenvector for ``eigenvalues[i]`` in full
    spinor coordinates.  ``harm_indices`` span ker(D_n) (empty when the basis
    was built with ``include_kernel=False``); ``nonharmonic_dim`` is
    dim im(D_n) regardless.
    """

    order: int
    K: SimplicialComplex
    eigenvalues: np.ndarray
    vectors: np.ndarray
    pos_indices: np.ndarray
    neg_indices: np.ndarray
    harm_indices: np.ndarray
    nonharmonic_dim: int

    def __post_init__(self):
        for name in ("eigenvalues", "vectors", "pos_indices", "neg_indices", "harm_indices"):
            a = getattr(self, name)
            a.flags.writeable = False

    def spinor(self, i: int) -> TopologicalSpinor:
        return TopologicalSpinor.from_vector(self.K, self.vectors[:, i])

    @property
    def nonzero_indices(self) -> np.ndarray:
        return np.concatenate([self.neg_indices, self.pos_indices])

    def classify(self, i: int) -> str:
        r, k = self.neg_indices.size, self.harm_indices.size
        if i < r:
            return "neg"
        if i < r + k:
            return "harm"
        return "pos"


def spectral_basis(
    Dop: DiracOperator, n: int, *, include_kernel: bool = True, method: str = "svd"
) -> SpectralBasis:
    """Eigendecomposition of D_n, as a basis in full spinor coordinates.

    method="svd" (default, fast): nonzero eigenpairs are exact chiral pairs
    built from the singular triplets of B_n; for each (u, sigma, v) the
    columns (u, +v)/sqrt(2) and (u, -v)/sqrt(2), padded with the zero block,
    are unit eigenvectors for +sigma and -sigma.

    method="eigh" (plain reference): dense symmetric eigendecomposition of
    the block of D_n restricted to the two simplex dimensions it couples
    (size N0+N1 for n=1, N1+N2 for n=2).  Same spectrum and subspaces,
    useful for cross-checks and as the unoptimized implementation the
    runtime benchmark times.

    With ``include_kernel`` the basis is completed to an orthonormal basis
    of the whole spinor space by a basis of ker(D_n).
    """
    if n not in (1, 2):
        raise InvalidOrder(f"spectral bases exist for n in {{1, 2}}, got {n}")
    if method == "eigh":
        return _spectral_basis_eigh(Dop, n, include_kernel)
    if method != "svd":
        raise ValueError(f"method must be 'svd' or 'eigh', got {method!r}")
    K = Dop.K
    M = Dop.dim
    U, sig, V = Dop.singular_triplets(n)
    r = sig.size

    def embed(left: np.ndarray, right: np.ndarray) -> np.ndarray:
        cols = left.shape[1]
        out = np.zeros((M, cols))
        if n == 1:
            out[: K.n0] = left
            out[K.n0 : K.n0 + K.n1] = right
        else:
            out[K.n0 : K.n0 + K.n1] = left
            out[K.n0 + K.n1 :] = right
        return out

    plus = embed(U, V) / np.sqrt(2.0)
    minus = embed(U, -V) / np.sqrt(2.0)

    # ascending: -sigma_max ... -sigma_min | zeros | +sigma_min ... +sigma_max
    neg_vals = -sig
    pos_vals = sig[::-1]
    neg_vecs = minus
    pos_vecs = plus[:, ::-1]

    if include_kernel:
        kernel = _kernel_basis(Dop, n)
    else:
        kernel = np.zeros((M, 0))
    k = kernel.shape[1]

    vals = np.concatenate([neg_vals, np.zeros(k), pos_vals])
    vecs = _fix_signs(np.hstack([neg_vecs, kernel, pos_vecs]))
    return SpectralBasis(
        order=n,
        K=K,
        eigenvalues=vals,
        vectors=vecs,
        neg_indices=np.arange(r),
        harm_indices=np.arange(r, r + k),
        pos_indices=np.arange(r + k, 2 * r + k),
        nonharmonic_dim=2 * r,
    )


def _spectral_basis_eigh(Dop: DiracOperator, n: int, include_kernel: bool) -> SpectralBasis:
    K = Dop.K
    M = Dop.dim
    B = Dop.boundary(n).toarray()
    left, right = B.shape
    R = np.zeros((left + right, left + right))
    R[:left, left:] = B
    R[left:, :left] = B.T
    try:
        vals, vecs = np.linalg.eigh(R)
    except np.linalg.LinAlgError as exc:
        raise EigensolveFailure(f"dense eigendecomposition failed: {exc}") from exc

    scale = float(np.abs(vals).max()) if vals.size else 0.0
    zero = np.abs(vals) <= (RANK_RTOL * scale if scale > 0 else 0.0)
    offset = 0 if n == 1 else K.n0

    def embed(cols: np.ndarray) -> np.ndarray:
        out = np.zeros((M, cols.shape[1]))
        out[offset : offset + left + right] = cols
        return out

    neg = vals < 0
    pos = ~(neg | zero)
    neg &= ~zero
    blocks = [(vals[neg], embed(vecs[:, neg]))]
    if include_kernel:
        ker = embed(vecs[:, zero])
        third = np.zeros((M, M - (left + right)))
        if n == 1:
            third[K.n0 + K.n1 :] = np.eye(K.n2)
        else:
            third[: K.n0] = np.eye(K.n0)
        kernel = np.hstack([ker, third])
        blocks.append((np.zeros(kernel.shape[1]), kernel))
    blocks.append((vals[pos], embed(vecs[:, pos])))

    r = int(neg.sum())
    k = blocks[1][1].shape[1] if include_kernel else 0
    allvals = np.concatenate([b[0] for b in blocks])
    allvecs = _fix_signs(np.hstack([b[1] for b in blocks]))
    return SpectralBasis(
        order=n,
        K=K,
        eigenvalues=allvals,
        vectors=allvecs,
        neg_indices=np.arange(r),
        harm_indices=np.arange(r, r + k),
        pos_indices=np.arange(r + k, r + k + int(pos.sum())),
        nonharmonic_dim=r + int(pos.sum()),
    )


def _kernel_basis(Dop: DiracOperator, n: int) -> np.ndarray:
    """Orthonormal basis of ker(D_n), localized per block."""
    K = Dop.K
    B = Dop.boundary(n).toarray()
    left_null = _null_basis(B.T)   # ker(B^T) in the left block
    right_null = _null_basis(B)    # ker(B) in the right block
    M = Dop.dim
    cols = []
    if n == 1:
        free = np.zeros((M, K.n2))
        free[K.n0 + K.n1 :] = np.eye(K.n2)
        a = np.zeros((M, left_null.shape[1]))
        a[: K.n0] = left_null
        b = np.zeros((M, right_null.shape[1]))
        b[K.n0 : K.n0 + K.n1] = right_null
        cols = [a, b, free]
    else:
        free = np.zeros((M, K.n0))
        free[: K.n0] = np.eye(K.n0)
        a = np.zeros((M, left_null.shape[1]))
        a[K.n0 : K.n0 + K.n1] = left_null
        b = np.zeros((M, right_null.shape[1]))
        b[K.n0 + K.n1 :] = right_null
        cols = [free, a, b]
    return np.hstack(cols)


def harmonic_basis(Dop: DiracOperator) -> np.ndarray:
    """Orthonormal basis of ker(D) = ker(L0) + ker(L1) + ker(L2), per block."""
    K = Dop.K
    B1 = Dop.B1.toarray()
    B2 = Dop.B2.toarray()
    nodes = _null_basis(B1.T)
    links = _null_basis(np.vstack([B1, B2.T])) if K.n1 else np.zeros((0, 0))
    tris = _null_basis(B2)
    M = Dop.dim
    out = np.zeros((M, nodes.shape[1] + links.shape[1] + tris.shape[1]))
    c = 0
    for block, offset in ((nodes, 0), (links, K.n0), (tris, K.n0 + K.n1)):
        w = block.shape[1]
        out[offset : offset + block.shape[0], c : c + w] = block
        c += w
    return out


# -- chirality and projections ------------------------------------------------


def chirality_map(phi: TopologicalSpinor, n: int) -> TopologicalSpinor:
    """Apply gamma_n: flip the right block of D_n's support, zero the rest.

    gamma_1 = diag(I, -I, 0) and gamma_2 = diag(0, I, -I); both anticommute
    with the matching D_n, so gamma_n maps the +lambda eigenspace onto the
    -lambda eigenspace.
    """
    if n == 1:
        return TopologicalSpinor(phi.s0, -phi.s1, np.zeros_like(phi.s2))
    if n == 2:
        return TopologicalSpinor(np.zeros_like(phi.s0), phi.s1, -phi.s2)
    raise InvalidOrder(f"chirality matrices are n in {{1, 2}}, got {n}")


def dirac_project(s: TopologicalSpinor, Dop: DiracOperator, n: int) -> TopologicalSpinor:
    """Project onto im(D_n): the component s_n = D_n D_n^+ s.

    Computed blockwise from the truncated SVD of B_n, so the projector is
    exactly idempotent up to roundoff.
    """
    Dop._check(s)
    U, _, V = Dop.singular_triplets(n)
    left, right = Dop._blocks_for(n, s)
    return Dop._spinor_from_blocks(n, U @ (U.T @ left), V @ (V.T @ right))


def harmonic_project(s: TopologicalSpinor, Dop: DiracOperator) -> TopologicalSpinor:
    """The component of s in ker(D): s - s_1 - s_2."""
    return s - dirac_project(s, Dop, 1) - dirac_project(s, Dop, 2)


def dirac_decompose(
    s: TopologicalSpinor, Dop: DiracOperator
) -> tuple[TopologicalSpinor, TopologicalSpinor, TopologicalSpinor]:
    """(s_1, s_2, s_harm) with s = s_1 + s_2 + s_harm."""
    s1 = dirac_project(s, Dop, 1)
    s2 = dirac_project(s, Dop, 2)
    return s1, s2, s - s1 - s2


def export_spectrum(bases, path) -> None:
    """Write eigenvalues as CSV rows (order, index, eigenvalue, class)."""
    lines = ["order,index,eigenvalue,class"]
    for basis in bases:
        for i, lam in enumerate(basis.eigenvalues):
            lines.append(f"{basis.order},{i},{lam!r},{basis.classify(i)}")
    Path(path).write_text("\n".join(lines) + "\n")
