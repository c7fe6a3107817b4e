"""Eigenvalue flow over a coupling grid: sweep, line tracking, crossings.

A sweep diagonalizes ``H(g)`` at every grid point and keeps the lowest
``M`` eigenpairs.  :func:`track_lines` then gives every eigenvalue a
persistent line identity by matching eigenvectors between neighbouring
grid points, and :func:`find_crossings` refines every local minimum of an
adjacent-level gap with a golden-section search on fresh diagonalizations.
"""

from __future__ import annotations

import enum
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .eigensolve import ConvergenceError, eigh, eigvalsh
from .hilbert import FockTruncation, ModelParams, build_hamiltonian, coupling_operator
from .symmetry import parity_diagonal, parity_labels

__all__ = [
    "SpectralFlow",
    "Crossing",
    "CrossingKind",
    "TruncationCapError",
    "TruncationReport",
    "default_grid",
    "default_workers",
    "sweep",
    "sweep_matrices",
    "track_lines",
    "find_crossings",
    "golden_section_minimize",
    "hellmann_feynman_slopes",
    "truncation_scan",
    "converge_truncation",
]

log = logging.getLogger(__name__)

WORKERS_ENV = "SPECTRAFLOW_WORKERS"
OVERLAP_THRESHOLD = 0.5
CROSSING_RTOL = 1e-8
DEGENERACY_RTOL = 1e-8
G_RESOLUTION = 1e-9
MAX_N_CUT = 2048


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV)
    if raw:
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None
        if n < 1:
            raise ValueError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}")
        return n
    return os.cpu_count() or 1


def _map(fn, items, workers: int | None):
    items = list(items)
    workers = default_workers() if workers is None else max(1, int(workers))
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def default_grid(g_min: float = 0.0, g_max: float = 1.5, steps: int = 151) -> np.ndarray:
    return np.linspace(g_min, g_max, steps)


@dataclass
class SpectralFlow:
    """Lowest ``M`` levels of ``H(g)`` along an ascending grid.

    Per grid point ``k`` the arrays hold sorted eigenvalues
    ``energies[k, i]``, eigenvectors ``vectors[k, :, i]`` and parity labels
    ``parities[k, i]`` (``+1``, ``-1`` or ``0`` for none).  After tracking,
    ``line_ids[k, i]`` is the line identity of sorted state ``i``.
    """

    g_grid: np.ndarray
    energies: np.ndarray
    vectors: np.ndarray | None = None
    parities: np.ndarray | None = None
    params: ModelParams | None = None
    n_cut: int | None = None
    slope_bound: float | None = None
    line_ids: np.ndarray | None = None
    unresolved: np.ndarray | None = None
    discontinuous: np.ndarray | None = None

    @property
    def levels(self) -> int:
        return self.energies.shape[1]

    @property
    def tracked(self) -> bool:
        return self.line_ids is not None

    def line_energies(self) -> np.ndarray:
        """``E[k, line]``: energies reordered by line identity."""
        self._require_tracked()
        out = np.empty_like(self.energies)
        rows = np.arange(len(self.g_grid))[:, None]
        out[rows, self.line_ids] = self.energies
        return out

    def sorted_index(self) -> np.ndarray:
        """``idx[k, line]``: sorted position of each line at each grid point."""
        self._require_tracked()
        out = np.empty_like(self.line_ids)
        rows = np.arange(len(self.g_grid))[:, None]
        out[rows, self.line_ids] = np.arange(self.levels)[None, :]
        return out

    def _require_tracked(self):
        if self.line_ids is None:
            raise ValueError("flow has no line identities; call track_lines first")


class CrossingKind(str, enum.Enum):
    TRUE_CROSSING = "TRUE_CROSSING"
    AVOIDED = "AVOIDED"


@dataclass(frozen=True)
class Crossing:
    g_star: float
    energy: float
    line_a: int
    line_b: int
    min_gap: float
    kind: CrossingKind
    lower_index: int = -1
    parity_a: int = 0
    parity_b: int = 0
    bracket_ok: bool = True

    @property
    def is_true(self) -> bool:
        return self.kind is CrossingKind.TRUE_CROSSING


class TruncationCapError(RuntimeError):
    pass


# -- sweep -------------------------------------------------------------------

def sweep_matrices(h_of_g: Callable[[float], np.ndarray], g_grid: Sequence[float], levels: int,
                   *, parity_diag: np.ndarray | None = None, workers: int | None = None,
                   method: str = "lapack") -> SpectralFlow:
    """Sweep an arbitrary symmetric matrix family ``h_of_g``."""
    g_grid = np.asarray(g_grid, dtype=float)
    if g_grid.ndim != 1 or len(g_grid) < 1:
        raise ValueError("g_grid must be a non-empty 1-d sequence")
    if np.any(np.diff(g_grid) <= 0):
        raise ValueError("g_grid must be strictly ascending")

    def solve(item):
        k, g = item
        try:
            return eigh(h_of_g(float(g)), count=levels, method=method)
        except ConvergenceError as exc:
            err = ConvergenceError(f"grid index {k} (g={g!r}): {exc}", index=exc.index)
            err.grid_index = k
            raise err from exc

    decomps = _map(solve, enumerate(g_grid), workers)
    energies = np.array([d.values for d in decomps])
    vectors = np.array([d.vectors for d in decomps])
    parities = None
    if parity_diag is not None:
        parities = np.array([parity_labels(v, parity_diag) for v in vectors])
    return SpectralFlow(g_grid=g_grid, energies=energies, vectors=vectors, parities=parities)


def sweep(p: ModelParams, g_grid: Sequence[float], levels: int, trunc: FockTruncation | int,
          *, workers: int | None = None, method: str = "lapack") -> SpectralFlow:
    """Lowest ``levels`` eigenpairs and parity labels at every ``g`` in the grid.

    The ``g`` stored in ``p`` is ignored.  Only the lower half of the
    truncated spectrum is trusted, so ``levels <= n_cut`` is enforced.
    """
    trunc = FockTruncation.coerce(trunc)
    if not 1 <= levels <= trunc.n_cut:
        raise ValueError(
            f"levels={levels} not allowed for n_cut={trunc.n_cut}; need 1 <= levels <= n_cut")
    flow = sweep_matrices(lambda g: build_hamiltonian(p.with_g(g), trunc), g_grid, levels,
                          parity_diag=parity_diagonal(trunc), workers=workers, method=method)
    flow.params = p
    flow.n_cut = trunc.n_cut
    flow.slope_bound = 2.0 * math.sqrt(trunc.n_cut)
    return flow


# -- tracking ----------------------------------------------------------------

def _greedy_match(overlap: np.ndarray) -> np.ndarray:
    """``col[i]``: column matched to row ``i``, largest overlaps first."""
    m = overlap.shape[0]
    order = np.argsort(-overlap, axis=None, kind="stable")
    col = np.full(m, -1)
    row_used = np.zeros(m, bool)
    col_used = np.zeros(m, bool)
    matched = 0
    for flat in order:
        i, j = divmod(int(flat), m)
        if row_used[i] or col_used[j]:
            continue
        col[i] = j
        row_used[i] = col_used[j] = True
        matched += 1
        if matched == m:
            break
    return col


def _clusters(values: np.ndarray) -> list[np.ndarray]:
    """Runs of sorted eigenvalues closer than the degeneracy tolerance."""
    scale = max(values[-1] - values[0], float(np.max(np.abs(values))), 1e-300)
    tol = DEGENERACY_RTOL * scale
    out = []
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or values[i] - values[i - 1] > tol:
            if i - start > 1:
                out.append(np.arange(start, i))
            start = i
    return out


def track_lines(flow: SpectralFlow) -> SpectralFlow:
    """Assign persistent line identities by eigenvector overlap.

    Between neighbouring grid points the overlap matrix ``|v_i . w_j|`` is
    matched greedily.  Segments whose weakest matched overlap is below 0.5
    are flagged in ``unresolved``.  Lines leaving a degenerate point (where
    the eigenbasis is arbitrary) are continued by linear extrapolation of
    their energies from the two preceding grid points.
    """
    if flow.vectors is None:
        raise ValueError("track_lines needs the eigenvectors of the flow")
    n_g, m = flow.energies.shape
    energies = flow.energies
    ids = np.empty((n_g, m), dtype=np.int64)
    ids[0] = np.arange(m)
    unresolved = np.zeros(max(n_g - 1, 0), dtype=bool)
    discontinuous = np.zeros(max(n_g - 1, 0), dtype=bool)

    for k in range(n_g - 1):
        overlap = np.abs(flow.vectors[k].T @ flow.vectors[k + 1])
        col = _greedy_match(overlap)
        unresolved[k] = bool(overlap[np.arange(m), col].min() < OVERLAP_THRESHOLD)

        if k >= 1:
            # line -> sorted position at k - 1
            position_before = np.argsort(ids[k - 1])
            for cluster in _clusters(energies[k]):
                lines = ids[k, cluster]
                predicted = 2.0 * energies[k, cluster] - energies[k - 1, position_before[lines]]
                targets = np.sort(col[cluster])
                by_prediction = cluster[np.argsort(predicted, kind="stable")]
                col[by_prediction] = targets

        ids[k + 1, col] = ids[k]

        if flow.slope_bound is not None:
            step = flow.g_grid[k + 1] - flow.g_grid[k]
            jump = np.abs(energies[k + 1, col] - energies[k])
            discontinuous[k] = bool(jump.max() > flow.slope_bound * step)

    flagged = int(unresolved.sum())
    if flagged:
        log.info("track_lines: %d of %d segments unresolved", flagged, n_g - 1)
    return replace(flow, line_ids=ids, unresolved=unresolved, discontinuous=discontinuous)


# -- crossings ---------------------------------------------------------------

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_minimize(f: Callable[[float], float], lo: float, hi: float,
                            xtol: float = G_RESOLUTION, max_iter: int = 200):
    """Golden-section search for a minimum of a unimodal ``f`` on ``[lo, hi]``.

    Returns ``(x_best, f_best, (lo, hi))`` where ``x_best`` is the best
    point evaluated and ``(lo, hi)`` the final bracket, narrower than
    ``xtol``.
    """
    if not hi > lo:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    best_x, best_f = (x1, f1) if f1 <= f2 else (x2, f2)
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
            if f1 < best_f:
                best_x, best_f = x1, f1
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
            if f2 < best_f:
                best_x, best_f = x2, f2
    return best_x, best_f, (lo, hi)


def _gap_candidates(energies: np.ndarray):
    gaps = np.diff(energies, axis=1)
    out = []
    for lower in range(gaps.shape[1]):
        gap = gaps[:, lower]
        for j in range(1, len(gap) - 1):
            if gap[j - 1] > gap[j] <= gap[j + 1]:
                out.append((j, lower))
    return out


def find_crossings(p: ModelParams, flow: SpectralFlow, *, workers: int | None = None,
                   method: str = "lapack") -> list[Crossing]:
    """Refine every interior local minimum of an adjacent-level gap.

    Each candidate is bracketed by the grid neighbours of the minimum and
    refined to ``G_RESOLUTION`` in ``g``.  The candidate is a
    TRUE_CROSSING when the refined gap is below ``1e-8 * (E_{M-1} - E_0)``
    at the refined coupling, otherwise AVOIDED.  A refinement that runs
    into its bracket is kept with ``bracket_ok=False`` and logged.
    """
    if flow.n_cut is None:
        raise ValueError("find_crossings needs a flow produced by sweep()")
    if not flow.tracked:
        flow = track_lines(flow)
    trunc = FockTruncation(flow.n_cut)
    m = flow.levels
    grid = flow.g_grid

    def refine(candidate):
        j, lower = candidate
        cache = {}

        def spectrum(g):
            if g not in cache:
                h = build_hamiltonian(p.with_g(g), trunc)
                cache[g] = eigvalsh(h, count=m, method=method)
            return cache[g]

        def gap(g):
            e = spectrum(g)
            return e[lower + 1] - e[lower]

        lo, hi = grid[j - 1], grid[j + 1]
        g_star, min_gap, (blo, bhi) = golden_section_minimize(gap, lo, hi)
        e = spectrum(g_star)
        scale = e[-1] - e[0]
        edge_gap = min(flow.energies[j - 1, lower + 1] - flow.energies[j - 1, lower],
                       flow.energies[j + 1, lower + 1] - flow.energies[j + 1, lower])
        bracket_ok = not (blo <= lo + G_RESOLUTION or bhi >= hi - G_RESOLUTION) \
            and min_gap <= edge_gap
        if not bracket_ok:
            log.warning("crossing refinement left its bracket near g=%.6f (levels %d, %d)",
                        grid[j], lower, lower + 1)
        kind = CrossingKind.TRUE_CROSSING if min_gap < CROSSING_RTOL * scale \
            else CrossingKind.AVOIDED
        left = j - 1
        parity = flow.parities[left] if flow.parities is not None else np.zeros(m, int)
        return Crossing(
            g_star=float(g_star),
            energy=float(0.5 * (e[lower] + e[lower + 1])),
            line_a=int(flow.line_ids[left, lower]),
            line_b=int(flow.line_ids[left, lower + 1]),
            min_gap=float(max(min_gap, 0.0)),
            kind=kind,
            lower_index=lower,
            parity_a=int(parity[lower]),
            parity_b=int(parity[lower + 1]),
            bracket_ok=bracket_ok,
        )

    found = _map(refine, _gap_candidates(flow.energies), workers)
    return sorted(found, key=lambda c: (c.g_star, c.lower_index))


def hellmann_feynman_slopes(p: ModelParams, flow: SpectralFlow) -> np.ndarray:
    """``<v|dH/dg|v>`` for every stored eigenvector, shape ``(G, M)``."""
    if flow.vectors is None or flow.n_cut is None:
        raise ValueError("hellmann_feynman_slopes needs a flow produced by sweep()")
    dh = coupling_operator(p, flow.n_cut)
    return np.einsum("kdi,de,kei->ki", flow.vectors, dh, flow.vectors)


# -- truncation control ------------------------------------------------------

@dataclass(frozen=True)
class TruncationReport:
    n_cut: int
    history: list = field(default_factory=list)
    values: np.ndarray | None = None


def truncation_scan(p: ModelParams, levels: int, tol: float, g_max: float, *,
                    start: int | None = None, max_n_cut: int = MAX_N_CUT,
                    method: str = "lapack") -> TruncationReport:
    """Double ``n_cut`` until the lowest ``levels`` eigenvalues at ``g_max`` settle.

    ``history`` lists ``(n_cut, max_abs_change)`` pairs, where the change is
    measured against the previous (halved) truncation.  The smaller of the
    two truncations that agree within ``tol`` is returned.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if levels < 1:
        raise ValueError(f"levels must be >= 1, got {levels}")
    n_cut = max(2 * levels, 32) if start is None else int(start)
    if n_cut > max_n_cut:
        raise TruncationCapError(f"starting n_cut={n_cut} already exceeds the cap {max_n_cut}")
    params = p.with_g(g_max)

    def lowest(n):
        return eigvalsh(build_hamiltonian(params, n), count=levels, method=method)

    current = lowest(n_cut)
    history = []
    while True:
        bigger = 2 * n_cut
        if bigger > max_n_cut:
            raise TruncationCapError(
                f"lowest {levels} levels at g={g_max} not converged to {tol} "
                f"by n_cut={n_cut} (cap {max_n_cut}); history={history}")
        refined = lowest(bigger)
        change = float(np.max(np.abs(refined - current)))
        history.append((bigger, change))
        log.debug("n_cut %d -> %d: max change %.3e", n_cut, bigger, change)
        if change < tol:
            return TruncationReport(n_cut=n_cut, history=history, values=current)
        n_cut, current = bigger, refined


def converge_truncation(p: ModelParams, levels: int, tol: float, g_max: float, **kwargs) -> int:
    return truncation_scan(p, levels, tol, g_max, **kwargs).n_cut
