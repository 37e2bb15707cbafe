"""Growing simplicial-complex generator and dataset loaders.

The generator grows a 2-dimensional complex one triangle at a time: starting
from a single filled triangle, each step picks an existing link ell with
probability proportional to

    (1 + s * n_ell) * exp(-beta * eps_ell)

where n_ell counts how many times the link has already been chosen (number
of incident triangles minus one), s in {-1, 0, 1} is the flavor and eps_ell
is a link energy drawn uniformly on [0, 1] at link creation (irrelevant at
beta = 0).  The new node is joined to both endpoints, adding 1 node, 2 links
and 1 triangle, so a complex grown to N nodes always has 2N-3 links and N-2
triangles.  Flavor -1 gives saturated links (n_ell = 1) zero weight, which
keeps every link on at most two triangles: the complex is a discrete
manifold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .complexes import SimplicialComplex, build_complex, load_complex
from .errors import InvalidFlavor, ParseError
from .signals import load_signal, rng_stream
from .spinors import TopologicalSpinor

__all__ = [
    "NgfParams",
    "ngf_generate",
    "load_complex",
    "load_flow",
]


@dataclass(frozen=True)
class NgfParams:
    """Parameters of the growing-complex model (dimension fixed at 2)."""

    target_nodes: int
    flavor: int = -1
    beta: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.flavor not in (-1, 0, 1):
            raise InvalidFlavor(f"flavor must be -1, 0 or 1, got {self.flavor}")
        if self.target_nodes < 3:
            raise ValueError("target_nodes must be >= 3 (the seed triangle)")
        if self.beta < 0:
            raise ValueError("beta must be >= 0")

    def to_dict(self) -> dict:
        return {
            "target_nodes": self.target_nodes,
            "flavor": self.flavor,
            "beta": self.beta,
            "seed": self.seed,
        }


def ngf_generate(params: NgfParams) -> SimplicialComplex:
    """Grow a complex to ``target_nodes`` nodes; deterministic per seed."""
    rng = rng_stream(params.seed)
    s, beta = params.flavor, params.beta

    links: list[tuple[int, int]] = [(0, 1), (0, 2), (1, 2)]
    triangles: list[tuple[int, int, int]] = [(0, 1, 2)]
    hits = [0, 0, 0]  # n_ell: times each link has been chosen
    energies = rng.uniform(0.0, 1.0, size=3).tolist()

    for new_node in range(3, params.target_nodes):
        w = (1.0 + s * np.asarray(hits, dtype=float)) * np.exp(
            -beta * np.asarray(energies)
        )
        total = w.sum()
        if total <= 0.0:
            # cannot happen for s in {-1,0,1}: fresh links always have weight > 0
            raise InvalidFlavor("no attachable link left; invalid flavor dynamics")
        choice = int(rng.choice(len(links), p=w / total))
        i, j = links[choice]
        hits[choice] += 1

        links.append((i, new_node))
        links.append((j, new_node))
        hits.extend([0, 0])
        energies.extend(rng.uniform(0.0, 1.0, size=2).tolist())
        triangles.append((i, j, new_node))

    return build_complex(links, triangles, params.target_nodes)


def load_flow(path, K: SimplicialComplex) -> TopologicalSpinor:
    """Load a link flow aligned to K's canonical link ordering.

    The file uses the signal CSV format; only ``link`` rows are allowed,
    since a flow lives purely on links.  A row indexing a link outside K
    raises :class:`DimensionMismatch`.
    """
    s = load_signal(path, K)
    if np.any(s.s0) or np.any(s.s2):
        raise ParseError("flow files may only contain 'link' rows")
    return TopologicalSpinor(np.zeros(K.n0), s.s1, np.zeros(K.n2))
