"""Synthetic true signals and calibrated subspace noise.

True signals are unit-norm spinors living in im(D_n): single eigenmodes of
D_n, Gaussian-weighted mixtures of its nonzero eigenmodes, or real data
lifted across dimensions with s_n = c_n (sigma + D_n sigma).

Noise is an i.i.d. standard normal vector projected onto im(D_n) and scaled
so that E||eps_n||^2 = alpha_n^2.  Draws are keyed by (seed, draw_index)
through a counter-based Philox generator, so every draw is reproducible
bit-for-bit on any platform and draws can be evaluated in any order.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .complexes import SimplicialComplex
from .errors import (
    DegenerateSelection,
    DimensionMismatch,
    EmptyImage,
    EmptySpectrum,
    NoSuchEigenvalue,
    ParseError,
    ZeroAfterProjection,
    ZeroNoise,
)
from .operators import DiracOperator, SpectralBasis, dirac_project
from .spinors import TopologicalSpinor

SIGNAL_FORMAT = "diracsp/signal/1"

# Two eigenvalues closer than this (relative to the spectral radius) count
# as degenerate for eigenmode selection.
DEGENERACY_RTOL = 1e-8


def rng_stream(seed: int, *stream: int) -> np.random.Generator:
    """Philox generator for a named substream of a 64-bit seed.

    (seed, stream) -> generator is a pure function; substreams with
    different keys are statistically independent.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(x) for x in stream))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class SignalSpec:
    """Recipe for a true signal on im(D_n)."""

    mode: str  # "eigen" | "gaussian_mix" | "lifted"
    n: int = 1
    selector: object = "smallest_positive"  # eigen mode only
    lambda_bar: float = 1.0  # gaussian_mix only
    sigma_hat: float = 0.2  # gaussian_mix only
    source: object = None  # lifted only: TopologicalSpinor or path
    variance_convention: str = "linear"  # "linear": exp(-d^2/(2*sigma)); "squared": /(2*sigma^2)

    def to_dict(self) -> dict:
        d = {"mode": self.mode, "n": self.n}
        if self.mode == "eigen":
            d["selector"] = self.selector
        elif self.mode == "gaussian_mix":
            d.update(
                lambda_bar=self.lambda_bar,
                sigma_hat=self.sigma_hat,
                variance_convention=self.variance_convention,
            )
        elif self.mode == "lifted":
            d["source"] = str(self.source)
        return d


def select_eigenvalue(basis: SpectralBasis, selector) -> int:
    """Resolve a selector to an index into ``basis.eigenvalues``.

    Accepts an integer index, a target eigenvalue (float, matched to the
    nearest nonzero eigenvalue within the degeneracy tolerance), or one of
    the strings smallest_positive / largest_positive / smallest_negative /
    largest_negative (magnitude ordering within each sign class).
    """
    vals = basis.eigenvalues
    nz = basis.nonzero_indices
    if nz.size == 0:
        raise EmptySpectrum(f"D_{basis.order} has no nonzero eigenvalues")

    if isinstance(selector, (int, np.integer)) and not isinstance(selector, bool):
        i = int(selector)
        if not 0 <= i < vals.size:
            raise NoSuchEigenvalue(f"index {i} outside 0..{vals.size - 1}")
        return i

    if isinstance(selector, str):
        pos, neg = basis.pos_indices, basis.neg_indices
        table = {
            "smallest_positive": (pos, 0),
            "largest_positive": (pos, -1),
            # negatives are stored ascending, i.e. most negative first
            "smallest_negative": (neg, -1),
            "largest_negative": (neg, 0),
        }
        if selector not in table:
            raise NoSuchEigenvalue(f"unknown selector {selector!r}")
        idxs, which = table[selector]
        if idxs.size == 0:
            raise NoSuchEigenvalue(f"no eigenvalues match {selector!r}")
        return int(idxs[which])

    target = float(selector)
    scale = float(np.max(np.abs(vals[nz])))
    dists = np.abs(vals[nz] - target)
    best = int(nz[np.argmin(dists)])
    if abs(vals[best] - target) > 1e-6 * max(scale, 1.0):
        raise NoSuchEigenvalue(
            f"no eigenvalue of D_{basis.order} within tolerance of {target}"
        )
    return best


def _assert_nondegenerate(basis: SpectralBasis, i: int) -> None:
    vals = basis.eigenvalues
    scale = max(float(np.max(np.abs(vals))), 1.0)
    gaps = np.abs(np.delete(vals, i) - vals[i])
    if gaps.size and gaps.min() <= DEGENERACY_RTOL * scale:
        raise DegenerateSelection(
            f"eigenvalue {vals[i]:.12g} of D_{basis.order} is degenerate"
        )


def eigenmode_signal(basis: SpectralBasis, selector) -> TopologicalSpinor:
    """A single unit-norm eigenvector of D_n, chosen by ``selector``."""
    i = select_eigenvalue(basis, selector)
    if i in basis.harm_indices:
        raise NoSuchEigenvalue("selector picked a harmonic mode; true signals live in im(D_n)")
    _assert_nondegenerate(basis, i)
    return basis.spinor(i)


def gaussian_mix_signal(
    basis: SpectralBasis,
    lambda_bar: float,
    sigma_hat: float,
    *,
    variance_convention: str = "linear",
) -> TopologicalSpinor:
    """Mixture over all nonzero eigenmodes with Gaussian weights.

    Weights are exp(-(lambda - lambda_bar)^2 / (2 sigma_hat)) by default
    (the "linear" convention); ``variance_convention="squared"`` divides by
    2 sigma_hat^2 instead.  The result is normalized to unit Euclidean norm.
    """
    if sigma_hat <= 0:
        raise ValueError("sigma_hat must be > 0")
    if variance_convention not in ("linear", "squared"):
        raise ValueError(f"unknown variance convention {variance_convention!r}")
    nz = basis.nonzero_indices
    if nz.size == 0:
        raise EmptySpectrum(f"D_{basis.order} has no nonzero eigenvalues")
    lam = basis.eigenvalues[nz]
    denom = 2.0 * sigma_hat if variance_convention == "linear" else 2.0 * sigma_hat**2
    d2 = (lam - lambda_bar) ** 2
    # weights are scale-free; subtract the min exponent for stability
    w = np.exp(-(d2 - d2.min()) / denom)
    w /= np.linalg.norm(w)
    vec = basis.vectors[:, nz] @ w
    return TopologicalSpinor.from_vector(basis.K, vec)


def lift_signal(
    sigma: TopologicalSpinor, Dop: DiracOperator, n: int
) -> TopologicalSpinor:
    """Spread a partially-observed signal across adjacent dimensions.

    Forms sigma + D_n sigma, projects onto im(D_n), and normalizes to unit
    norm.  A purely harmonic source leaves nothing after projection and
    raises :class:`ZeroAfterProjection`.
    """
    if sigma.norm() == 0.0:
        raise ZeroAfterProjection("source spinor is zero")
    raw = sigma + Dop.apply(sigma, n)
    proj = dirac_project(raw, Dop, n)
    nrm = proj.norm()
    if nrm <= 1e-12 * sigma.norm():
        raise ZeroAfterProjection("source is harmonic for D_%d; nothing to lift" % n)
    return proj / nrm


@dataclass(frozen=True)
class NoiseModel:
    """Gaussian noise confined to im(D_n), normalized so E||eps_n||^2 = alpha_n^2."""

    alpha1: float = 0.0
    alpha2: float = 0.0
    seed: int = 0

    def alpha(self, n: int) -> float:
        return self.alpha1 if n == 1 else self.alpha2


def sample_noise(
    model: NoiseModel, Dop: DiracOperator, n: int, draw_index: int = 0
) -> TopologicalSpinor:
    """One noise draw: eps_n = alpha_n P_n x / sqrt(dim im(D_n)), x ~ N(0, I).

    Deterministic given (seed, draw_index); distinct draw indices give
    independent vectors.
    """
    dim_n = Dop.nonharmonic_dim(n)
    if dim_n == 0:
        raise EmptyImage(f"im(D_{n}) is trivial; cannot place noise there")
    rng = rng_stream(model.seed, n, draw_index)
    x = TopologicalSpinor.from_vector(Dop.K, rng.standard_normal(Dop.dim))
    eps = dirac_project(x, Dop, n)
    return eps * (model.alpha(n) / np.sqrt(dim_n))


def snr(s: TopologicalSpinor, eps: TopologicalSpinor) -> float:
    """||s||^2 / ||eps||^2; with unit-norm s this is 1/alpha^2 in expectation."""
    denom = eps.norm() ** 2
    if denom == 0.0:
        raise ZeroNoise("noise vector is zero; snr undefined")
    return s.norm() ** 2 / denom


# -- signal file format -------------------------------------------------------

_BLOCKS = ("node", "link", "triangle")


def save_signal(s: TopologicalSpinor, path) -> None:
    """Write a spinor as CSV rows (block, index, value) at full precision."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["block", "index", "value"])
        for name, arr in zip(_BLOCKS, s.blocks):
            for i, v in enumerate(arr):
                w.writerow([name, i, repr(float(v))])


def load_signal(path, K: SimplicialComplex) -> TopologicalSpinor:
    """Read a (block, index, value) CSV into a spinor over K.

    Rows may appear in any order; omitted entries are zero.  Indices outside
    the complex raise :class:`DimensionMismatch`.
    """
    sizes = {"node": K.n0, "link": K.n1, "triangle": K.n2}
    arrays = {name: np.zeros(sizes[name]) for name in _BLOCKS}
    path = Path(path)
    with open(path, newline="") as fh:
        rows = csv.reader(row for row in fh if not row.startswith("#"))
        header = next(rows, None)
        if header is None or [h.strip() for h in header[:3]] != ["block", "index", "value"]:
            raise ParseError(f"{path}: expected header 'block,index,value'")
        for lineno, row in enumerate(rows, start=2):
            if not row:
                continue
            try:
                block, idx, val = row[0].strip(), int(row[1]), float(row[2])
            except (IndexError, ValueError) as exc:
                raise ParseError(f"{path}:{lineno}: malformed row {row!r}") from exc
            if block not in sizes:
                raise ParseError(f"{path}:{lineno}: unknown block {block!r}")
            if not 0 <= idx < sizes[block]:
                raise DimensionMismatch(
                    f"{path}:{lineno}: {block} index {idx} outside complex "
                    f"with {sizes[block]} {block}s"
                )
            arrays[block][idx] = val
    return TopologicalSpinor(arrays["node"], arrays["link"], arrays["triangle"])
