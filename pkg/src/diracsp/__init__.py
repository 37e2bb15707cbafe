"""Dirac signal processing on simplicial complexes of dimension <= 2.

The package builds boundary/Dirac/Hodge operators for node-link-triangle
complexes, decomposes topological signals into im(D1) + im(D2) + ker(D),
and adaptively denoises signals by learning where in the Dirac spectrum
they live.
"""

__version__ = "0.1.0"

from .complexes import (
    SimplicialComplex,
    betti_numbers,
    boundary_matrix,
    build_complex,
    load_complex,
)
from .errors import DiracSPError
from .filtering import (
    FilterConfig,
    RunTrace,
    dirac_filter,
    hodge_filter,
    learn,
    rayleigh_m,
    reconstruction_error,
)
from .generators import NgfParams, load_flow, ngf_generate
from .harness import ExperimentPlan
from .operators import (
    DiracOperator,
    SpectralBasis,
    assemble_dirac,
    chirality_map,
    dirac_decompose,
    dirac_project,
    export_spectrum,
    harmonic_basis,
    harmonic_project,
    hodge_laplacian,
    spectral_basis,
)
from .signals import (
    NoiseModel,
    SignalSpec,
    eigenmode_signal,
    gaussian_mix_signal,
    lift_signal,
    load_signal,
    sample_noise,
    save_signal,
    snr,
)
from .spinors import TopologicalSpinor

__all__ = [
    "DiracSPError",
    "SimplicialComplex",
    "build_complex",
    "boundary_matrix",
    "betti_numbers",
    "load_complex",
    "TopologicalSpinor",
    "DiracOperator",
    "assemble_dirac",
    "hodge_laplacian",
    "SpectralBasis",
    "spectral_basis",
    "chirality_map",
    "dirac_project",
    "harmonic_project",
    "harmonic_basis",
    "dirac_decompose",
    "export_spectrum",
    "SignalSpec",
    "eigenmode_signal",
    "gaussian_mix_signal",
    "lift_signal",
    "NoiseModel",
    "sample_noise",
    "snr",
    "save_signal",
    "load_signal",
    "FilterConfig",
    "RunTrace",
    "hodge_filter",
    "dirac_filter",
    "rayleigh_m",
    "learn",
    "reconstruction_error",
    "NgfParams",
    "ngf_generate",
    "load_flow",
    "ExperimentPlan",
]
