"""Spectral diagnostics of integrability for Rabi-type atom-field models."""

from .eigensolve import ConvergenceError, EigenDecomposition, eigh, eigvalsh, validate
from .hilbert import FockTruncation, Model, ModelParams, build_hamiltonian, excitation_number
from .observables import atomic_reduced, histogram, uncertainty_product, uncertainty_sweep
from .spectra import (
    Crossing,
    CrossingKind,
    SpectralFlow,
    TruncationCapError,
    converge_truncation,
    find_crossings,
    sweep,
    track_lines,
)
from .symmetry import Parity, parity_label, parity_operator, sector_spectra

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "Crossing",
    "CrossingKind",
    "EigenDecomposition",
    "FockTruncation",
    "Model",
    "ModelParams",
    "Parity",
    "SpectralFlow",
    "TruncationCapError",
    "atomic_reduced",
    "build_hamiltonian",
    "converge_truncation",
    "eigh",
    "eigvalsh",
    "excitation_number",
    "find_crossings",
    "histogram",
    "parity_label",
    "parity_operator",
    "sector_spectra",
    "sweep",
    "track_lines",
    "uncertainty_product",
    "uncertainty_sweep",
    "validate",
]
