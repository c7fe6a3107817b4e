"""Atomic reduced states and the uncertainty product of the rescaled Pauli pair.

With ``st_x = sx / sqrt(2)`` and ``st_y = sy / sqrt(2)`` both squares equal
``I / 2``, so for an atomic state with Bloch components ``(sx, sy, sz)``::

    dsx = sqrt((1 - sx**2) / 2),  dsy = sqrt((1 - sy**2) / 2),  delta = dsx * dsy

All joint eigenvectors here are real, hence ``sy = 0`` exactly and
``delta = sqrt(1 - sx**2) / 2``.  Robertson's bound gives
``|sz| / 2 <= delta <= 1/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hilbert import FockTruncation, ModelParams
from .spectra import SpectralFlow, sweep

__all__ = [
    "AtomicState",
    "UncertaintyRecord",
    "Histogram",
    "atomic_reduced",
    "pauli_expectations",
    "uncertainty_product",
    "uncertainty_records",
    "uncertainty_sweep",
    "histogram",
    "DEFAULT_BINS",
]

DEFAULT_BINS = 25
NORM_TOL = 1e-10
DELTA_MAX = 0.5


@dataclass(frozen=True)
class AtomicState:
    """Reduced 2x2 density matrix in the basis ``(|g>, |e>)``.

    ``real`` records that the imaginary part vanishes identically, which is
    the case for every state built from a real joint vector.
    """

    rho: np.ndarray
    real: bool = True

    def __post_init__(self):
        rho = np.array(self.rho, dtype=float)
        if rho.shape != (2, 2):
            raise ValueError(f"atomic state must be 2x2, got {rho.shape}")
        if abs(rho[0, 1] - rho[1, 0]) > 1e-12:
            raise ValueError("atomic state must be symmetric")
        if abs(np.trace(rho) - 1.0) > 1e-12:
            raise ValueError(f"atomic state must have unit trace, got {np.trace(rho)!r}")
        if np.linalg.eigvalsh(rho).min() < -1e-12:
            raise ValueError("atomic state must be positive semidefinite")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)

    @property
    def purity_defect(self) -> float:
        """``det(rho)``: 0 for pure states, 1/4 for the maximally mixed one."""
        return float(np.linalg.det(self.rho))


@dataclass(frozen=True)
class UncertaintyRecord:
    eigen_index: int
    sx: float
    sy: float
    sz: float
    dsx: float
    dsy: float
    delta: float
    g: float = float("nan")


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    probabilities: np.ndarray

    @property
    def modal_bin(self) -> int:
        return int(np.argmax(self.counts))

    def rows(self):
        for lo, hi, c, pr in zip(self.edges[:-1], self.edges[1:], self.counts, self.probabilities):
            yield float(lo), float(hi), int(c), float(pr)


def atomic_reduced(v, trunc: FockTruncation | int | None = None) -> AtomicState:
    """Trace out the field from a joint state indexed ``2n + s``."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.shape[0] % 2:
        raise ValueError(f"expected a 1-d vector of even length, got shape {v.shape}")
    if trunc is not None and v.shape[0] != FockTruncation.coerce(trunc).dim:
        raise ValueError(f"vector length {v.shape[0]} does not match the truncation")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalized: |v| = {norm!r}")
    amplitudes = v.reshape(-1, 2)
    rho = amplitudes.T @ amplitudes
    rho[1, 0] = rho[0, 1]
    return AtomicState(rho)


def pauli_expectations(state: AtomicState):
    """``(sx, sy, sz)`` with ``sz = rho_ee - rho_gg``."""
    rho = state.rho
    sx = 2.0 * rho[0, 1]
    sz = rho[1, 1] - rho[0, 0]
    return float(sx), 0.0, float(sz)


def _record(index, sx, sy, sz, g=float("nan")) -> UncertaintyRecord:
    x = max(1.0 - sx * sx, 0.0)
    y = max(1.0 - sy * sy, 0.0)
    # one square root for the product keeps delta exactly 1/2 when sx = sy = 0
    delta = 0.5 * math.sqrt(x * y)
    return UncertaintyRecord(index, sx, sy, sz, math.sqrt(0.5 * x), math.sqrt(0.5 * y), delta, g)


def uncertainty_product(state: AtomicState, eigen_index: int = -1) -> UncertaintyRecord:
    sx, sy, sz = pauli_expectations(state)
    return _record(eigen_index, sx, sy, sz)


def uncertainty_records(flow: SpectralFlow) -> list[UncertaintyRecord]:
    """One record per stored eigenvector of ``flow`` (g outer, index inner)."""
    if flow.vectors is None:
        raise ValueError("flow has no eigenvectors")
    out = []
    for g, vectors in zip(flow.g_grid, flow.vectors):
        amplitudes = vectors.reshape(-1, 2, vectors.shape[1])
        gg = np.einsum("ni,ni->i", amplitudes[:, 0], amplitudes[:, 0])
        ee = np.einsum("ni,ni->i", amplitudes[:, 1], amplitudes[:, 1])
        ge = np.einsum("ni,ni->i", amplitudes[:, 0], amplitudes[:, 1])
        for i in range(vectors.shape[1]):
            out.append(_record(i, float(2.0 * ge[i]), 0.0, float(ee[i] - gg[i]), float(g)))
    return out


def uncertainty_sweep(p: ModelParams, g_grid: Sequence[float], levels: int = 50,
                      trunc: FockTruncation | int = 100, **kwargs) -> list[UncertaintyRecord]:
    """Records for the lowest ``levels`` eigenstates at every grid coupling."""
    return uncertainty_records(sweep(p, g_grid, levels, trunc, **kwargs))


def histogram(records, n_bins: int = DEFAULT_BINS) -> Histogram:
    """Distribution of ``delta`` over uniform bins on ``[0, 1/2]``.

    Bins are half-open except the last, which includes 1/2.  Values may
    exceed 1/2 by rounding (at most 1e-12); they are counted in the top bin.
    """
    if n_bins < 2:
        raise ValueError(f"n_bins must be >= 2, got {n_bins}")
    deltas = np.array([r.delta if isinstance(r, UncertaintyRecord) else r for r in records],
                      dtype=float)
    if deltas.size == 0:
        raise ValueError("cannot build a histogram from no records")
    if deltas.min() < -1e-12 or deltas.max() > DELTA_MAX + 1e-12:
        raise ValueError("delta values must lie in [0, 0.5]")
    deltas = np.clip(deltas, 0.0, DELTA_MAX)
    counts, edges = np.histogram(deltas, bins=n_bins, range=(0.0, DELTA_MAX))
    return Histogram(edges=edges, counts=counts, probabilities=counts / counts.sum())
