"""Berry curvature, polar-angle readout and first Chern numbers.

Two routes to the same invariant:

* linear response: the lag of <sy_bar> behind the ramp gives the Berry
  curvature B_theta = -Omega0 sin(th) <sy_bar> / (2 v_theta); its integral
  over th in [0, pi] is C1 (the azimuthal integral collapses by cylindrical
  symmetry).
* accelerated (counterdiabatic) ramps: the measured polar angle
  theta_q = arccos(sz / |s|) gives C1 = (1/2) int sin(theta_q) d theta_q.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import dynamics
from .dynamics import Trajectory
from .errors import DegenerateReadoutError, InsufficientSamplingError, SingularDriveError
from .model import ModelParams

MIN_CURVATURE_POINTS = 10
MIN_BLOCH_LENGTH = 1e-6
CLOSED_FORM_QUADRATURE_ATOL = 0.01


@dataclass(frozen=True)
class CurvatureSeries:
    theta: np.ndarray
    b_theta: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.theta) < 0):
            raise ValueError("theta samples must be ascending")


@dataclass(frozen=True)
class ChernResult:
    c1: float
    method: str  # "linear_response" or "sta_polar"
    chi: float
    initial: str
    converged: bool = True
    c1_quadrature: float | None = None  # sta only: discretized integral
    warning: str | None = None
    error: str | None = None


def berry_curvature(traj: Trajectory, params: ModelParams | None = None) -> CurvatureSeries:
    """Extract B_theta from a (non-STA, phi=0) trajectory."""
    p = params if params is not None else traj.params
    if traj.sta:
        raise ValueError("linear response needs the bare ramp: run with sta=False")
    if p.phi != 0.0:
        raise ValueError("linear-response extraction assumes phi = 0")
    sched = p.ramp()
    v_theta = np.broadcast_to(np.asarray(sched.theta_dot(traj.t), dtype=float), traj.t.shape)
    sin_th = np.sin(traj.theta)
    b = np.zeros_like(sin_th)
    still = np.abs(v_theta) < 1e-300
    if np.any(still & (np.abs(sin_th) > 1e-12)):
        raise ZeroDivisionError("ramp velocity vanishes at an interior sample")
    ok = ~still
    b[ok] = -p.omega0 * sin_th[ok] * traj.sy[ok] / (2 * v_theta[ok])
    return CurvatureSeries(theta=traj.theta.copy(), b_theta=b)


def chern_linear_response(series: CurvatureSeries, traj: Trajectory | None = None) -> ChernResult:
    """C1 = int_0^pi B_theta d theta by trapezoidal quadrature."""
    if series.theta.size < MIN_CURVATURE_POINTS:
        raise InsufficientSamplingError(
            f"need >= {MIN_CURVATURE_POINTS} curvature samples, got {series.theta.size}"
        )
    c1 = float(np.trapezoid(series.b_theta, series.theta))
    chi = traj.params.chi if traj is not None else float("nan")
    return ChernResult(
        c1=c1,
        method="linear_response",
        chi=chi,
        initial=traj.initial if traj is not None else "ket0",
        converged=traj.converged if traj is not None else True,
    )


def theta_q_series(traj: Trajectory) -> np.ndarray:
    """(theta, theta_q) pairs with theta_q = arccos(sz / |s|), range [0, pi]."""
    s = traj.bloch()
    length = np.linalg.norm(s, axis=1)
    short = np.nonzero(length < MIN_BLOCH_LENGTH)[0]
    if short.size:
        raise DegenerateReadoutError(
            f"Bloch length < {MIN_BLOCH_LENGTH} at sample index {int(short[0])}"
        )
    theta_q = np.arccos(np.clip(traj.sz / length, -1.0, 1.0))
    return np.stack([traj.theta, theta_q], axis=1)


def chern_sta(series: np.ndarray, traj: Trajectory | None = None) -> ChernResult:
    """C1q from the polar-angle series.

    Closed form (1/2)[cos theta_q(0) - cos theta_q(pi)] is the exact
    antiderivative of (1/2) sin(theta_q) d theta_q; the discretized quadrature
    is reported alongside and must agree within 0.01.
    """
    series = np.asarray(series)
    if series.ndim != 2 or series.shape[1] != 2 or series.shape[0] < 2:
        raise InsufficientSamplingError("theta_q series must be an (n, 2) array with n >= 2")
    theta_q = series[:, 1]
    closed = 0.5 * (np.cos(theta_q[0]) - np.cos(theta_q[-1]))
    quad = float(np.trapezoid(0.5 * np.sin(theta_q), theta_q))
    warning = None
    if abs(closed - quad) > CLOSED_FORM_QUADRATURE_ATOL:
        warning = (
            f"closed-form C1q={closed:.4f} and quadrature {quad:.4f} disagree by "
            f"{abs(closed - quad):.4f}: non-monotone sampling of theta_q"
        )
    chi = traj.params.chi if traj is not None else float("nan")
    return ChernResult(
        c1=float(closed),
        method="sta_polar",
        chi=chi,
        initial=traj.initial if traj is not None else "ket0",
        converged=traj.converged if traj is not None else True,
        c1_quadrature=quad,
        warning=warning,
    )


def chern_from_run(
    params: ModelParams, protocol: str, initial: str = "ket0", **run_kwargs
) -> ChernResult:
    """One full simulation + post-processing for a single chi point."""
    if protocol == "linear_response":
        traj = dynamics.run(params, initial=initial, sta=False, **run_kwargs)
        return chern_linear_response(berry_curvature(traj), traj)
    if protocol == "sta":
        traj = dynamics.run(params, initial=initial, sta=True, **run_kwargs)
        return chern_sta(theta_q_series(traj), traj)
    raise ValueError(f"unknown protocol {protocol!r}")


def _sweep_point(args):
    params, protocol, initial, run_kwargs = args
    try:
        return chern_from_run(params, protocol, initial, **run_kwargs)
    except SingularDriveError as exc:
        return ChernResult(
            c1=float("nan"),
            method="sta_polar" if protocol == "sta" else protocol,
            chi=params.chi,
            initial=initial,
            converged=False,
            error=str(exc),
        )


def sweep_chi(
    params: ModelParams,
    chi_values,
    protocol: str = "sta",
    initial: str = "ket0",
    jobs: int = 1,
    **run_kwargs,
) -> list[ChernResult]:
    """Independent simulation per chi (delta_0 = chi * delta_z), in chi order.

    Singular counterdiabatic points are recorded as failed entries and the
    sweep continues.
    """
    tasks = []
    for chi in chi_values:
        p = replace(params, delta_0=float(chi) * params.delta_z)
        tasks.append((p, protocol, initial, run_kwargs))
    if not tasks:
        raise ValueError("empty chi sweep")
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_point, tasks))
    return [_sweep_point(t) for t in tasks]
