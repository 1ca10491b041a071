"""Truncated-Fock-space linear algebra.

Dense complex matrices on the first ``dim`` Fock states. Hamiltonians are in
angular-frequency units (rad/us, hbar = 1); everything else is dimensionless.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidDimensionError,
    PropagationError,
    TruncationError,
)

HERMITIAN_ATOL = 1e-12

# Guard band used when exponentiating displacement generators: the operator is
# built on dim + DISPLACEMENT_GUARD levels and cropped, so edge corruption of
# the unitary stays outside the returned block.
DISPLACEMENT_GUARD = 10


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Operator:
    """A dense operator on the truncated Fock basis.

    ``hermitian`` is a promise checked at construction (entrywise, absolute
    tolerance ``HERMITIAN_ATOL``); the propagation kernel only accepts
    operators carrying it.
    """

    matrix: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        m = _readonly(self.matrix)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidDimensionError(f"operator matrix must be square, got {m.shape}")
        if m.shape[0] < 2:
            raise InvalidDimensionError(f"dim must be >= 2, got {m.shape[0]}")
        if self.hermitian:
            defect = np.abs(m - m.conj().T).max()
            if defect > HERMITIAN_ATOL:
                raise ValueError(f"operator flagged Hermitian but max|M - M^dag| = {defect:.3e}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T, hermitian=self.hermitian)

    def __add__(self, other: "Operator") -> "Operator":
        _check_dims(self.dim, other.dim)
        return Operator(self.matrix + other.matrix, hermitian=self.hermitian and other.hermitian)

    def __sub__(self, other: "Operator") -> "Operator":
        _check_dims(self.dim, other.dim)
        return Operator(self.matrix - other.matrix, hermitian=self.hermitian and other.hermitian)

    def __mul__(self, c: complex) -> "Operator":
        herm = self.hermitian and float(np.imag(c)) == 0.0
        return Operator(self.matrix * c, hermitian=herm)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        _check_dims(self.dim, other.dim)
        return Operator(self.matrix @ other.matrix)


@dataclass(frozen=True)
class StateVector:
    """A complex amplitude vector in the truncated Fock basis."""

    amplitudes: np.ndarray = field()

    def __post_init__(self):
        a = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if a.ndim != 1 or a.size < 2:
            raise InvalidDimensionError(f"state vector must be 1-d with dim >= 2, got shape {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.amplitudes / n)

    def overlap(self, other: "StateVector") -> complex:
        """<self|other>."""
        _check_dims(self.dim, other.dim)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "StateVector") -> float:
        return float(abs(self.overlap(other)) ** 2)


def _check_dims(d1: int, d2: int):
    if d1 != d2:
        raise DimensionMismatchError(f"dimension mismatch: {d1} vs {d2}")


def _check_dim(dim: int):
    if not isinstance(dim, (int, np.integer)) or dim < 2:
        raise InvalidDimensionError(f"dim must be an integer >= 2, got {dim!r}")


def annihilation(dim: int) -> Operator:
    """Ladder operator a with <n-1|a|n> = sqrt(n)."""
    _check_dim(dim)
    m = np.zeros((dim, dim), dtype=complex)
    ns = np.arange(1, dim)
    m[ns - 1, ns] = np.sqrt(ns)
    return Operator(m)


def creation(dim: int) -> Operator:
    """Ladder operator a^dag."""
    return annihilation(dim).dagger()


def number(dim: int) -> Operator:
    """Photon number operator a^dag a = diag(0, 1, ..., dim-1)."""
    _check_dim(dim)
    return Operator(np.diag(np.arange(dim).astype(complex)), hermitian=True)


def identity(dim: int) -> Operator:
    _check_dim(dim)
    return Operator(np.eye(dim, dtype=complex), hermitian=True)


def parity(dim: int) -> Operator:
    """Photon number parity exp(i pi a^dag a) = diag(+1, -1, +1, ...)."""
    _check_dim(dim)
    signs = np.where(np.arange(dim) % 2 == 0, 1.0, -1.0).astype(complex)
    return Operator(np.diag(signs), hermitian=True)


def coherent_amplitudes(alpha: complex, dim: int) -> np.ndarray:
    """Un-renormalized coherent amplitudes c_n = e^{-|a|^2/2} a^n / sqrt(n!).

    Computed by the stable recurrence c_n = c_{n-1} * alpha / sqrt(n).
    """
    _check_dim(dim)
    c = np.zeros(dim, dtype=complex)
    c[0] = np.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, dim):
        c[n] = c[n - 1] * alpha / np.sqrt(n)
    return c


def coherent_truncation_ok(alpha: complex, dim: int) -> bool:
    """Rule of thumb for an adequate truncation: |a|^2 + 6|a| + 9 <= dim."""
    r = abs(alpha)
    return r * r + 6 * r + 9 <= dim


def coherent_state(
    alpha: complex, dim: int, leakage_threshold: float = 1e-8
) -> tuple[StateVector, float]:
    """Truncated coherent state |alpha>, renormalized after truncation.

    Returns (state, leakage) where leakage = 1 - sum |c_n|^2 before
    renormalization. Raises TruncationError when the leakage exceeds the
    threshold.
    """
    c = coherent_amplitudes(alpha, dim)
    leakage = float(1.0 - np.sum(np.abs(c) ** 2))
    if leakage > leakage_threshold:
        raise TruncationError(
            f"coherent state |{alpha}> leaks {leakage:.3e} > {leakage_threshold:.1e} "
            f"at dim={dim}; increase the truncation"
        )
    return StateVector(c).normalized(), leakage


def displacement(alpha: complex, dim: int, guard: int = DISPLACEMENT_GUARD) -> Operator:
    """Displacement D_alpha = exp(alpha a^dag - alpha^* a), cropped to dim.

    The exponential is evaluated on dim + guard levels so that the returned
    block is unitary up to truncation error near the edge.
    """
    _check_dim(dim)
    big = dim + guard
    a = annihilation(big).matrix
    gen = alpha * a.conj().T - np.conj(alpha) * a
    # gen is anti-Hermitian: exp(gen) = exp(-i M) with M = i*gen Hermitian.
    m = 1j * gen
    try:
        w, v = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise PropagationError(f"eigendecomposition failed for displacement({alpha})") from exc
    d = (v * np.exp(-1j * w)) @ v.conj().T
    return Operator(d[:dim, :dim])


def propagate_step(h: Operator, psi: StateVector, dt: float) -> StateVector:
    """Apply exp(-i H dt) via Hermitian eigendecomposition (exact for constant H)."""
    if not h.hermitian:
        raise ValueError("propagate_step requires a Hermitian-flagged operator")
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    _check_dims(h.dim, psi.dim)
    try:
        w, v = np.linalg.eigh(h.matrix)
    except np.linalg.LinAlgError as exc:
        scale = float(np.abs(h.matrix).max())
        raise PropagationError(
            f"eigendecomposition failed (dim={h.dim}, max|H|={scale:.3e} rad/us)"
        ) from exc
    out = v @ (np.exp(-1j * w * dt) * (v.conj().T @ psi.amplitudes))
    return StateVector(out)


def expectation(psi: StateVector, m: Operator, imag_atol: float = 1e-9):
    """<psi|M|psi>. Returns a real float for Hermitian-flagged M, complex otherwise."""
    _check_dims(psi.dim, m.dim)
    val = complex(np.vdot(psi.amplitudes, m.matrix @ psi.amplitudes))
    if m.hermitian:
        if abs(val.imag) > imag_atol:
            raise PropagationError(
                f"expectation of Hermitian operator has imaginary part {val.imag:.3e}"
            )
        return val.real
    return val
