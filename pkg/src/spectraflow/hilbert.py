"""Truncated Fock-space operators and the atom-field model Hamiltonians.

Joint basis states are indexed ``k = 2*n + s`` with the field number ``n``
as the outer index and the atomic index ``s`` inner (``s = 0`` is the
ground state ``|g>``, ``s = 1`` the excited state ``|e>``).  In this basis
every Hamiltonian handled here is real symmetric, so everything is done with
real ``float64`` matrices.

Units: hbar = 1 and, unless overridden, omega = 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Model",
    "ModelParams",
    "FockTruncation",
    "annihilation",
    "creation",
    "qubit_operators",
    "build_hamiltonian",
    "coupling_operator",
    "excitation_number",
    "is_symmetric",
]

SYMMETRY_RTOL = 1e-12


class Model(str, enum.Enum):
    RABI = "RABI"
    JC = "JC"
    ASYM_RABI = "ASYM_RABI"

    @classmethod
    def parse(cls, value: "str | Model") -> "Model":
        if isinstance(value, Model):
            return value
        try:
            return cls(str(value).strip().upper())
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown model {value!r}; expected one of {names}") from None


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of one Hamiltonian.

    ``omega0`` defaults to ``omega`` (resonance).  ``epsilon`` is the
    strength of the parity-breaking ``epsilon * sigma_x`` term in units of
    omega.  ``RABI`` and ``ASYM_RABI`` share one builder, so ``RABI`` with
    ``epsilon = 0`` and ``ASYM_RABI`` with ``epsilon = 0`` are identical.
    """

    model: Model = Model.RABI
    omega: float = 1.0
    omega0: float | None = None
    g: float = 0.0
    epsilon: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "model", Model.parse(self.model))
        if self.omega0 is None:
            object.__setattr__(self, "omega0", self.omega)
        for name in ("omega", "omega0", "g", "epsilon"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.omega <= 0 or self.omega0 <= 0:
            raise ValueError("omega and omega0 must be positive")

    def with_g(self, g: float) -> "ModelParams":
        return ModelParams(self.model, self.omega, self.omega0, g, self.epsilon)

    @property
    def parity_symmetric(self) -> bool:
        """True when the parity operator commutes with the Hamiltonian."""
        return self.model is Model.JC or self.epsilon == 0.0


@dataclass(frozen=True)
class FockTruncation:
    """Keep the Fock states ``|0>, ..., |n_cut - 1>``."""

    n_cut: int
    dim: int = field(init=False)

    def __post_init__(self):
        if isinstance(self.n_cut, bool) or int(self.n_cut) != self.n_cut:
            raise ValueError(f"n_cut must be an integer, got {self.n_cut!r}")
        if self.n_cut < 2:
            raise ValueError(f"n_cut must be >= 2, got {self.n_cut}")
        object.__setattr__(self, "n_cut", int(self.n_cut))
        object.__setattr__(self, "dim", 2 * int(self.n_cut))

    @classmethod
    def coerce(cls, trunc: "FockTruncation | int") -> "FockTruncation":
        return trunc if isinstance(trunc, cls) else cls(trunc)


def annihilation(trunc: FockTruncation | int) -> np.ndarray:
    """Field lowering operator ``a`` with ``a[n-1, n] = sqrt(n)``."""
    n_cut = FockTruncation.coerce(trunc).n_cut
    return np.diag(np.sqrt(np.arange(1, n_cut, dtype=float)), k=1)


def creation(trunc: FockTruncation | int) -> np.ndarray:
    return annihilation(trunc).T.copy()


def qubit_operators():
    """Return ``(sx, sy_imag, sz, sp, sm)`` in the basis ``(|g>, |e>)``.

    ``sz = diag(-1, +1)`` and ``sp = |e><g|``.  The Pauli y matrix is
    complex, ``sigma_y = -i (sp - sm) = 1j * sy_imag``, so only its real
    antisymmetric factor ``sy_imag`` is returned.
    """
    sp = np.array([[0.0, 0.0], [1.0, 0.0]])
    sm = sp.T.copy()
    sx = sp + sm
    sy_imag = sm - sp
    sz = np.diag([-1.0, 1.0])
    return sx, sy_imag, sz, sp, sm


def coupling_operator(p: ModelParams, trunc: FockTruncation | int) -> np.ndarray:
    """The operator multiplying ``g`` in the Hamiltonian, i.e. ``dH/dg``."""
    a = annihilation(trunc)
    sx, _, _, sp, sm = qubit_operators()
    if p.model is Model.JC:
        return np.kron(a, sp) + np.kron(a.T, sm)
    return np.kron(a + a.T, sx)


def build_hamiltonian(p: ModelParams, trunc: FockTruncation | int) -> np.ndarray:
    """Dense Hamiltonian of the selected model.

    RABI / ASYM_RABI::

        omega a^dag a + omega0/2 sz + g (a + a^dag) sx + epsilon sx

    JC replaces the coupling by ``g (a sp + a^dag sm)`` and takes no epsilon.
    """
    trunc = FockTruncation.coerce(trunc)
    if p.model is Model.JC and p.epsilon != 0.0:
        raise ValueError("the JC model has no epsilon term; got epsilon=%r" % p.epsilon)
    n_cut = trunc.n_cut
    sx, _, sz, _, _ = qubit_operators()
    eye_f = np.eye(n_cut)
    eye_a = np.eye(2)

    number = np.diag(np.arange(n_cut, dtype=float))
    h = p.omega * np.kron(number, eye_a) + 0.5 * p.omega0 * np.kron(eye_f, sz)
    if p.g != 0.0:
        h = h + p.g * coupling_operator(p, trunc)
    if p.epsilon != 0.0:
        h = h + p.epsilon * np.kron(eye_f, sx)
    # exact symmetrization; every term above is symmetric up to rounding
    h = 0.5 * (h + h.T)
    h.setflags(write=False)
    return h


def excitation_number(trunc: FockTruncation | int) -> np.ndarray:
    """``N = a^dag a + |e><e|``, diagonal with entry ``n + s`` at ``2n + s``."""
    n_cut = FockTruncation.coerce(trunc).n_cut
    n = np.repeat(np.arange(n_cut), 2)
    s = np.tile([0, 1], n_cut)
    return np.diag((n + s).astype(float))


def is_symmetric(m: np.ndarray, rtol: float = SYMMETRY_RTOL) -> bool:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    return bool(np.max(np.abs(m - m.T), initial=0.0) <= rtol * scale)
