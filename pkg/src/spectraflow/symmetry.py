"""Z2 parity of the Rabi model: operator, eigenstate labels, sector spectra."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .eigensolve import eigh, eigvalsh
from .hilbert import FockTruncation, Model, ModelParams, build_hamiltonian

__all__ = [
    "Parity",
    "ParityLabel",
    "LABEL_THRESHOLD",
    "parity_diagonal",
    "parity_operator",
    "parity_label",
    "parity_labels",
    "sector_spectra",
]

LABEL_THRESHOLD = 1.0 - 1e-6
NORM_TOL = 1e-10


class Parity(enum.IntEnum):
    EVEN = 1
    ODD = -1
    NONE = 0


@dataclass(frozen=True)
class ParityLabel:
    value: Parity
    expectation: float


def parity_diagonal(trunc: FockTruncation | int) -> np.ndarray:
    """Diagonal of ``P = sz (x) (-1)^{a^dag a}``: ``(-1)^n (2s - 1)`` at ``2n + s``."""
    n_cut = FockTruncation.coerce(trunc).n_cut
    field_sign = np.where(np.arange(n_cut) % 2 == 0, 1.0, -1.0)
    return np.kron(field_sign, np.array([-1.0, 1.0]))


def parity_operator(trunc: FockTruncation | int) -> np.ndarray:
    return np.diag(parity_diagonal(trunc))


def _label(expectation: float) -> ParityLabel:
    if expectation > LABEL_THRESHOLD:
        return ParityLabel(Parity.EVEN, expectation)
    if expectation < -LABEL_THRESHOLD:
        return ParityLabel(Parity.ODD, expectation)
    return ParityLabel(Parity.NONE, expectation)


def parity_label(v, p) -> ParityLabel:
    """Label one normalized state by its parity expectation ``v^T P v``.

    ``p`` may be the full (diagonal) parity matrix or just its diagonal.
    """
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"state is not normalized: |v| = {norm!r}")
    p = np.asarray(p, dtype=float)
    expectation = float(v @ p @ v) if p.ndim == 2 else float(np.dot(p, v * v))
    return _label(expectation)


def parity_labels(vectors: np.ndarray, p_diag: np.ndarray) -> np.ndarray:
    """Vectorized labels (``+1``, ``-1`` or ``0``) for the columns of ``vectors``."""
    expectation = p_diag @ (vectors * vectors)
    out = np.zeros(expectation.shape, dtype=np.int8)
    out[expectation > LABEL_THRESHOLD] = 1
    out[expectation < -LABEL_THRESHOLD] = -1
    return out


def sector_spectra(p: ModelParams, trunc: FockTruncation | int, *, with_vectors: bool = False):
    """Diagonalize the even and odd parity blocks separately.

    Returns ``(even_values, odd_values)``; with ``with_vectors=True`` the
    two entries are :class:`EigenDecomposition` objects whose vectors live
    in the corresponding sub-basis.
    """
    if p.model is Model.JC:
        raise ValueError("sector_spectra is defined for the RABI / ASYM_RABI models")
    if p.epsilon != 0.0:
        raise ValueError(f"parity is broken for epsilon={p.epsilon}; sectors do not decouple")
    trunc = FockTruncation.coerce(trunc)
    h = build_hamiltonian(p, trunc)
    diag = parity_diagonal(trunc)
    out = []
    for sign in (1.0, -1.0):
        idx = np.flatnonzero(diag == sign)
        block = h[np.ix_(idx, idx)]
        out.append(eigh(block) if with_vectors else eigvalsh(block))
    return tuple(out)
