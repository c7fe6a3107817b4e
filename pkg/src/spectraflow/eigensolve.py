"""Dense real-symmetric eigendecomposition with verifiable guarantees.

Two interchangeable routes produce an :class:`EigenDecomposition`:

``"lapack"``
    ``scipy.linalg.eigh`` (the default; fast enough for full sweeps).
``"householder"``
    Householder reduction to tridiagonal form followed by implicit QL
    iteration with Wilkinson-type shifts.  Pure numpy, kept as an
    independent route for cross-checking.

Both return ascending eigenvalues and apply the same gauge: the
largest-magnitude component of every eigenvector is positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .hilbert import is_symmetric

__all__ = [
    "EigenDecomposition",
    "ValidationReport",
    "ConvergenceError",
    "NotSymmetricError",
    "MAX_DIMENSION",
    "MAX_QL_ITERATIONS",
    "eigh",
    "eigvalsh",
    "validate",
    "tridiagonalize",
    "tridiagonal_ql",
]

MAX_DIMENSION = 4096
MAX_QL_ITERATIONS = 64
METHODS = ("lapack", "householder")


class NotSymmetricError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    """The eigensolver failed; ``index`` names the eigenvalue, if known."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray
    vectors: np.ndarray

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class ValidationReport:
    residual: float
    orthonormality: float
    norm: float

    def ok(self, tol: float = 1e-10) -> bool:
        return self.residual <= tol * self.norm and self.orthonormality <= tol


def _check_input(h) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise NotSymmetricError(f"expected a square matrix, got shape {h.shape}")
    if h.shape[0] > MAX_DIMENSION:
        raise ValueError(f"dimension {h.shape[0]} exceeds MAX_DIMENSION={MAX_DIMENSION}")
    if not np.all(np.isfinite(h)):
        raise ValueError("matrix has non-finite entries")
    if not is_symmetric(h):
        raise NotSymmetricError("matrix is not symmetric to 1e-12 relative")
    return h


def _fix_gauge(vectors: np.ndarray) -> np.ndarray:
    if vectors.size == 0:
        return vectors
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def tridiagonalize(a: np.ndarray):
    """Householder reduction ``a = q @ T @ q.T``.

    Returns ``(diag, offdiag, q)`` where ``T`` is the symmetric tridiagonal
    matrix with main diagonal ``diag`` and first off-diagonal ``offdiag``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    q = np.eye(n)
    for k in range(n - 2):
        x = a[k + 1:, k]
        norm_x = np.linalg.norm(x)
        if norm_x == 0.0:
            continue
        alpha = -math.copysign(norm_x, x[0])
        v = x.copy()
        v[0] -= alpha
        norm_v = np.linalg.norm(v)
        if norm_v == 0.0:
            continue
        v /= norm_v
        block = a[k + 1:, k + 1:]
        p = block @ v
        w = p - (v @ p) * v
        block -= 2.0 * (np.outer(v, w) + np.outer(w, v))
        a[k + 1, k] = a[k, k + 1] = alpha
        a[k + 2:, k] = 0.0
        a[k, k + 2:] = 0.0
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v)
    return np.diag(a).copy(), np.diag(a, 1).copy(), q


def tridiagonal_ql(diag, offdiag, z=None, max_iter: int = MAX_QL_ITERATIONS):
    """Implicit QL iteration on a symmetric tridiagonal matrix.

    ``z`` (optional) is the transform accumulated so far; its columns are
    rotated into eigenvectors.  Returns ``(values, vectors_or_None)`` with
    values ascending.  Raises :class:`ConvergenceError` when one eigenvalue
    needs more than ``max_iter`` iterations.
    """
    d = np.array(diag, dtype=float)
    n = d.shape[0]
    e = np.zeros(n)
    e[: n - 1] = offdiag
    # rows of zt are the columns of z, so rotations touch contiguous memory
    zt = None if z is None else np.array(z, dtype=float).T.copy()

    for l in range(n):
        iterations = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) + dd == dd:
                    break
                m += 1
            if m == l:
                break
            if iterations == max_iter:
                raise ConvergenceError(
                    f"QL iteration did not converge for eigenvalue {l} "
                    f"after {max_iter} iterations", index=l)
            iterations += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            deflated = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if zt is not None:
                    upper = zt[i + 1].copy()
                    zt[i + 1] = s * zt[i] + c * upper
                    zt[i] = c * zt[i] - s * upper
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    order = np.argsort(d, kind="stable")
    values = d[order]
    if zt is None:
        return values, None
    return values, zt[order].T.copy()


def _householder(h: np.ndarray, want_vectors: bool):
    n = h.shape[0]
    if n == 1:
        return h[0].copy(), np.ones((1, 1)) if want_vectors else None
    diag, off, q = tridiagonalize(h)
    return tridiagonal_ql(diag, off, q if want_vectors else None)


def _lapack(h: np.ndarray, count: int | None, want_vectors: bool):
    subset = None if count is None or count >= h.shape[0] else (0, count - 1)
    try:
        out = scipy.linalg.eigh(h, eigvals_only=not want_vectors,
                                subset_by_index=subset, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"LAPACK eigensolver failed: {exc}") from exc
    if want_vectors:
        return out
    return out, None


def eigh(h, *, count: int | None = None, method: str = "lapack") -> EigenDecomposition:
    """Ascending eigendecomposition of a real symmetric matrix.

    ``count`` keeps only the lowest ``count`` pairs.  Eigenvectors are
    gauge-fixed (largest-magnitude component positive); inside a degenerate
    subspace any orthonormal basis may be returned.
    """
    h = _check_input(h)
    if count is not None and not 1 <= count <= h.shape[0]:
        raise ValueError(f"count must lie in [1, {h.shape[0]}], got {count}")
    if method == "lapack":
        values, vectors = _lapack(h, count, True)
    elif method == "householder":
        values, vectors = _householder(h, True)
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if count is not None:
        values, vectors = values[:count], vectors[:, :count]
    values = np.ascontiguousarray(values)
    vectors = _fix_gauge(np.ascontiguousarray(vectors))
    values.setflags(write=False)
    vectors.setflags(write=False)
    return EigenDecomposition(values, vectors)


def eigvalsh(h, *, count: int | None = None, method: str = "lapack") -> np.ndarray:
    """Ascending eigenvalues only (cheaper than :func:`eigh`)."""
    h = _check_input(h)
    if count is not None and not 1 <= count <= h.shape[0]:
        raise ValueError(f"count must lie in [1, {h.shape[0]}], got {count}")
    if method == "lapack":
        values, _ = _lapack(h, count, False)
    elif method == "householder":
        values, _ = _householder(h, False)
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    return values[:count] if count is not None else values


def validate(h, decomp: EigenDecomposition) -> ValidationReport:
    """Largest eigenpair residual and orthonormality defect of ``decomp``.

    ``residual`` is ``max_i ||h v_i - lambda_i v_i||_2`` (absolute);
    compare it against ``tol * report.norm`` where ``norm`` is the
    Frobenius norm of ``h``.
    """
    h = np.asarray(h, dtype=float)
    values = np.asarray(decomp.values)
    vectors = np.asarray(decomp.vectors)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    if vectors.ndim != 2 or vectors.shape[0] != h.shape[0] or vectors.shape[1] != values.shape[0]:
        raise ValueError(
            f"dimension mismatch: matrix {h.shape}, vectors {vectors.shape}, "
            f"values {values.shape}")
    residual = np.linalg.norm(h @ vectors - vectors * values, axis=0)
    gram = vectors.T @ vectors
    defect = np.abs(gram - np.eye(gram.shape[0]))
    return ValidationReport(
        residual=float(residual.max(initial=0.0)),
        orthonormality=float(defect.max(initial=0.0)),
        norm=float(np.linalg.norm(h)),
    )
