"""Bundled example datasets.

Two complexes ship with the package, both stored in the documented complex
file format:

* ``florentine_marriage``: the classic 15-family Renaissance marriage
  network (20 links, no triangles), a standard small benchmark graph.
* ``coastal_tessellation``: a synthetic triangulated strip of 133 nodes,
  322 links and 186 triangles with four square gaps, shaped like a coastal
  tessellation around islands.  A smooth rotational link flow for it is
  bundled alongside (``coastal_tessellation_flow.csv``).
"""

from __future__ import annotations

from importlib import resources

from .complexes import SimplicialComplex, load_complex
from .generators import load_flow
from .spinors import TopologicalSpinor

FLORENTINE_FAMILIES = (
    "Acciaiuoli", "Albizzi", "Barbadori", "Bischeri", "Castellani",
    "Ginori", "Guadagni", "Lamberteschi", "Medici", "Pazzi",
    "Peruzzi", "Ridolfi", "Salviati", "Strozzi", "Tornabuoni",
)


def _data_path(name: str):
    return resources.files("diracsp").joinpath("data").joinpath(name)


def dataset_path(name: str) -> str:
    """Filesystem path of a bundled data file (for CLI --input use)."""
    return str(_data_path(name))


def florentine_marriage() -> SimplicialComplex:
    """15 nodes, 20 links, 0 triangles; node i is FLORENTINE_FAMILIES[i]."""
    return load_complex(_data_path("florentine_marriage.json"))


def coastal_tessellation() -> SimplicialComplex:
    """133 nodes, 322 links, 186 triangles; a triangulated strip with holes."""
    return load_complex(_data_path("coastal_tessellation.json"))


def coastal_flow(K: SimplicialComplex | None = None) -> TopologicalSpinor:
    """The bundled net link flow over the coastal tessellation."""
    if K is None:
        K = coastal_tessellation()
    return load_flow(_data_path("coastal_tessellation_flow.csv"), K)
