"""Analytic two-level reference for the driven cat qubit.

Everything here ignores the oscillator: the qubit Hamiltonian is

    H2 = (1/2) [[Dz, Om e^{-i phi}], [Om e^{i phi}, -Dz]]

with Dz, Om ramped exactly like the full model. Used as an independent oracle
for the full-oscillator dynamics and for the Gauss-law (monopole) Chern
number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics
from .dynamics import Trajectory
from .errors import ConfigError, DegenerateHamiltonianError, OnManifoldDegeneracyError
from .fock import Operator, StateVector
from .model import ModelParams, RampSchedule, cd_coefficient

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)


def hamiltonian(delta_z: float, omega: float, phi: float = 0.0) -> np.ndarray:
    off = omega / 2 * np.exp(-1j * phi)
    return np.array([[delta_z / 2, off], [np.conj(off), -delta_z / 2]])


@dataclass(frozen=True)
class Eigensystem:
    e_plus: float
    e_minus: float
    mixing_angle: float
    v_plus: np.ndarray
    v_minus: np.ndarray


def eigensystem(delta_z: float, omega: float, phi: float = 0.0) -> Eigensystem:
    """E_pm = +-sqrt(Dz^2 + Om^2)/2 and the mixing-angle eigenvectors.

    The branch Theta = atan2(Om, Dz) lies in (0, pi) for Om > 0 with endpoints
    Theta = 0 (Om = 0, Dz > 0) and Theta = pi (Om = 0, Dz < 0), continuous
    across Dz sign changes. Ground state is the lower eigenvalue E_minus.
    """
    r = np.hypot(delta_z, omega)
    if r == 0.0:
        raise DegenerateHamiltonianError("delta_z = omega = 0: eigenbasis undefined")
    theta = float(np.arctan2(omega, delta_z))
    half = theta / 2
    ph = np.exp(1j * phi)
    v_plus = np.array([np.cos(half), ph * np.sin(half)])
    v_minus = np.array([-np.sin(half), ph * np.cos(half)])
    return Eigensystem(
        e_plus=r / 2, e_minus=-r / 2, mixing_angle=theta % (2 * np.pi),
        v_plus=v_plus, v_minus=v_minus,
    )


class _TwoLevelDriveSet:
    """Duck-typed stand-in for model.DriveSet on the bare qubit."""

    class _Frame:
        ket0 = StateVector(np.array([1.0, 0.0]))
        ket1 = StateVector(np.array([0.0, 1.0]))
        pauli_x = Operator(_SX, hermitian=True)
        pauli_y = Operator(_SY, hermitian=True)
        pauli_z = Operator(_SZ, hermitian=True)
        projector = Operator(np.eye(2, dtype=complex), hermitian=True)

    def __init__(self, params: ModelParams):
        self.params = params
        self.frame = self._Frame()
        self.schedule: RampSchedule = params.ramp()

    def total_matrix(self, t: float, sta: bool = False) -> np.ndarray:
        p = self.params
        th = float(self.schedule.theta(t))
        m = hamiltonian(p.delta_z_of(th), p.omega_of(th), p.phi)
        if sta:
            cd = cd_coefficient(th, float(self.schedule.theta_dot(t)), p.chi)
            m = m + cd / 2 * _SY
        return m


def reference_dynamics(
    params: ModelParams,
    initial="ket0",
    sta: bool = False,
    n_steps: int | None = None,
    n_samples: int = dynamics.DEFAULT_N_SAMPLES,
    refine_tol: float = dynamics.REFINE_TOL,
    max_refinements: int = dynamics.MAX_REFINEMENTS,
) -> Trajectory:
    """Propagate the 2x2 reduction with the same midpoint-exponential stepper.

    Emits Bloch samples directly comparable with the full-oscillator run
    (pop is identically 1 here).
    """
    if n_steps is None:
        n_steps = dynamics.default_n_steps(params)
    if n_steps < 100:
        raise ConfigError(f"n_steps must be >= 100, got {n_steps}")
    ds = _TwoLevelDriveSet(params)
    psi0, label = dynamics._initial_state(ds, initial)

    coarse = dynamics._propagate(ds, psi0, sta, n_steps, n_samples)
    converged = False
    diff = float("nan")
    for _ in range(max_refinements):
        fine = dynamics._propagate(ds, psi0, sta, 2 * coarse["n_steps"], n_samples)
        diff = max(float(np.abs(fine[k] - coarse[k]).max()) for k in ("sx", "sy", "sz"))
        coarse = fine
        if diff <= refine_tol:
            converged = True
            break

    return Trajectory(
        t=coarse["t"],
        theta=np.asarray(ds.schedule.theta(coarse["t"]), dtype=float),
        sx=coarse["sx"],
        sy=coarse["sy"],
        sz=coarse["sz"],
        pop=coarse["pop"],
        norm=coarse["norm"],
        n_steps=coarse["n_steps"],
        converged=converged,
        params=params,
        sta=sta,
        initial=label,
        refine_diff=diff,
        final_state=coarse["final_state"],
    )


def monopole_chern(
    chi: float,
    n_theta: int = 200,
    n_phi: int = 200,
    tol: float = 1e-6,
    max_doublings: int = 6,
) -> float:
    """Gauss-law Chern number: flux of R/(2 R^3) through the ramp manifold.

    The manifold is R(th, ph) = (sin th cos ph, sin th sin ph, cos th + chi)
    (omega0 = delta_z scaled to 1). Midpoint product-grid quadrature, doubled
    until the value is stable; 1 when the degeneracy R = 0 is enclosed
    (|chi| < 1), 0 when it is not.
    """
    if abs(abs(chi) - 1.0) < 1e-12:
        raise OnManifoldDegeneracyError(f"degeneracy lies on the manifold at chi={chi}")

    def flux(nt: int, np_: int) -> float:
        dth = np.pi / nt
        dph = 2 * np.pi / np_
        th = (np.arange(nt) + 0.5) * dth
        total = 0.0
        chunk = max(1, 2_000_000 // np_)
        for i0 in range(0, nt, chunk):
            t = th[i0 : i0 + chunk][:, None]
            p = ((np.arange(np_) + 0.5) * dph)[None, :]
            st, ct = np.sin(t), np.cos(t)
            sp, cp = np.sin(p), np.cos(p)
            rx, ry, rz = st * cp, st * sp, ct + chi
            # dS = (dR/dth x dR/dph) dth dph
            dthx, dthy, dthz = ct * cp, ct * sp, -st + 0 * cp
            dphx, dphy, dphz = -st * sp, st * cp, 0 * (t * p)
            nx = dthy * dphz - dthz * dphy
            ny = dthz * dphx - dthx * dphz
            nz = dthx * dphy - dthy * dphx
            r3 = (rx * rx + ry * ry + rz * rz) ** 1.5
            total += float(np.sum((rx * nx + ry * ny + rz * nz) / (2 * r3)))
        return total * dth * dph / (2 * np.pi)

    val = flux(n_theta, n_phi)
    for _ in range(max_doublings):
        n_theta *= 2
        n_phi *= 2
        new = flux(n_theta, n_phi)
        done = abs(new - val) < tol
        val = new
        if done:
            break
    return val
