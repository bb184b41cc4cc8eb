"""Feedback-linearization task-space torque computation.

The control law maps a desired Cartesian acceleration into joint torques

    tau = Delta^+ [xddot* - Omega f* + Lambda] + N tau0

with Delta = J M^-1 B, Omega = J M^-1 Jc^T, Lambda = J M^-1 h - Jdot nu,
and N the null-space projector of Delta.  The classical variant cancels
the measured external wrench completely; the exploiting variant adds back
the component of the wrench-induced task acceleration that is parallel to
the desired velocity (the correction term), so helpful interaction is not
fought.

The task can be restricted to a subset of the six Cartesian rows with a
row mask; the wrench mapping Jc always keeps its full rows so that the
cancellation accounts for every measured axis.
"""

import functools
from dataclasses import dataclass

import numpy as np

from .dynamics import DynamicsQuantities, RobotState, TaskJacobian
from .errors import InputError, ModelError
from .wrench import Wrench

PINV_CUTOFF = 1e-8
VEL_SINGULARITY = 1e-6

ROW_NAMES = ("x", "y", "z", "rx", "ry", "rz")


def row_indices(rows) -> tuple:
    """Normalize a row spec (names or indices) to sorted unique indices."""
    if rows is None:
        return tuple(range(6))
    out = []
    for r in rows:
        if isinstance(r, str):
            if r not in ROW_NAMES:
                raise ModelError(f"unknown task row {r!r}; expected one of {ROW_NAMES}")
            out.append(ROW_NAMES.index(r))
        else:
            i = int(r)
            if not 0 <= i < 6:
                raise ModelError(f"task row index {i} out of range")
            out.append(i)
    return tuple(sorted(set(out)))


@functools.lru_cache(maxsize=64)
def _mask_for(indices: tuple) -> np.ndarray:
    mask = np.zeros(6)
    mask[list(indices)] = 1.0
    mask.setflags(write=False)
    return mask


@functools.lru_cache(maxsize=16)
def _identity(n: int) -> np.ndarray:
    eye = np.eye(n)
    eye.setflags(write=False)
    return eye


def row_mask(rows) -> np.ndarray:
    """(6,) 0/1 mask for the given rows (read-only, cached)."""
    return _mask_for(row_indices(rows))


@dataclass(frozen=True)
class Gains:
    """Positive symmetric feedback matrices on the task rows."""

    K_P: np.ndarray
    K_D: np.ndarray

    def __post_init__(self):
        for name in ("K_P", "K_D"):
            K = np.asarray(getattr(self, name), dtype=float)
            if K.shape != (6, 6):
                raise ModelError(f"{name} must be 6x6")
            if np.abs(K - K.T).max() > 1e-12:
                raise ModelError(f"{name} must be symmetric")
            if np.linalg.eigvalsh(K).min() <= 0:
                raise ModelError(f"{name} must be positive definite")
            object.__setattr__(self, name, K)

    @classmethod
    def diagonal(cls, kp, kd) -> "Gains":
        """Diagonal gains from scalars or per-row 6-vectors."""
        kp = np.broadcast_to(np.asarray(kp, dtype=float), (6,))
        kd = np.broadcast_to(np.asarray(kd, dtype=float), (6,))
        return cls(K_P=np.diag(kp), K_D=np.diag(kd))


@dataclass(frozen=True)
class TaskError:
    """Velocity tracking error and its running integral (task rows only)."""

    vel_err: np.ndarray
    int_vel_err: np.ndarray


@dataclass(frozen=True)
class ControlMatrices:
    """Compact-form operators for one state; see the module docstring."""

    Delta: np.ndarray
    Omega: np.ndarray
    Lambda: np.ndarray
    Delta_pinv: np.ndarray
    NullProj: np.ndarray


@dataclass(frozen=True)
class Decomposition:
    """Wrench-induced task acceleration split along the desired velocity.

    alpha * parallel_dir + perp_component reconstructs Omega f* exactly;
    alpha is zero (with zero parallel_dir) below the velocity-singularity
    threshold.
    """

    alpha: float
    parallel_dir: np.ndarray
    perp_component: np.ndarray


def _pinv(A: np.ndarray, cutoff: float, damping: float) -> np.ndarray:
    """SVD pseudo-inverse with relative cutoff and optional damping."""
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((A.shape[1], A.shape[0]))
    if damping > 0.0:
        inv = s / (s * s + damping * damping)
    else:
        inv = np.where(s > cutoff * s[0], 1.0 / np.where(s > 0, s, 1.0), 0.0)
    return (Vt.T * inv) @ U.T


def control_matrices(dyn: DynamicsQuantities, jac: TaskJacobian, state: RobotState,
                     task_rows=None, contact_jac: TaskJacobian | None = None,
                     pinv_cutoff: float = PINV_CUTOFF,
                     pinv_damping: float = 0.0) -> ControlMatrices:
    """Build Delta, Omega, Lambda, Delta^+ and the null-space projector.

    ``task_rows`` zeroes the inactive rows of the task Jacobian (and of
    everything derived from it); ``contact_jac`` defaults to the task
    Jacobian evaluated at the same link and always keeps its full rows.
    """
    mask = row_mask(task_rows)
    Jm = jac.J * mask[:, None]
    Jdm = jac.Jdot * mask[:, None]
    Jc = (contact_jac or jac).J
    # X = M^-1 Jm^T via an SPD solve
    X = np.linalg.solve(dyn.M, Jm.T)
    Delta = X.T @ dyn.B
    Omega = X.T @ Jc.T
    Lambda = X.T @ dyn.h - Jdm @ state.nu
    Dp = _pinv(Delta, pinv_cutoff, pinv_damping)
    NullProj = _identity(Delta.shape[1]) - Dp @ Delta
    return ControlMatrices(Delta=Delta, Omega=Omega, Lambda=Lambda,
                           Delta_pinv=Dp, NullProj=NullProj)


def desired_acceleration(xddot_d: np.ndarray, err: TaskError, gains: Gains) -> np.ndarray:
    """Classical tracking objective: xddot* = xddot_d - K_D e - K_P int(e)."""
    return xddot_d - gains.K_D @ err.vel_err - gains.K_P @ err.int_vel_err


def decompose_interaction(cm: ControlMatrices, f_ext: Wrench, xdot_d: np.ndarray,
                          vel_threshold: float = VEL_SINGULARITY) -> Decomposition:
    """Split Omega f* into components along and across the desired velocity.

    alpha = xdot_d^T Omega f* / ||xdot_d||.  At path-velocity zero
    crossings (||xdot_d|| below the threshold) alpha is 0 by convention and
    the whole acceleration lands in the perpendicular remainder.
    """
    Of = cm.Omega @ f_ext.to_array()
    nrm = float(np.linalg.norm(xdot_d))
    if nrm <= vel_threshold:
        return Decomposition(alpha=0.0, parallel_dir=np.zeros(6), perp_component=Of)
    parallel = xdot_d / nrm
    alpha = float(xdot_d @ Of) / nrm
    return Decomposition(alpha=alpha, parallel_dir=parallel,
                         perp_component=Of - alpha * parallel)


def exploiting_desired_acceleration(xddot_d: np.ndarray, err: TaskError,
                                    gains: Gains, dec: Decomposition) -> np.ndarray:
    """Tracking objective plus the correction term, active only for alpha > 0."""
    xs = desired_acceleration(xddot_d, err, gains)
    if dec.alpha > 0.0:
        xs = xs + dec.alpha * dec.parallel_dir
    return xs


def control_torques(cm: ControlMatrices, xddot_star: np.ndarray, f_ext: Wrench,
                    tau0: np.ndarray | None = None) -> np.ndarray:
    """tau = Delta^+ [xddot* - Omega f* + Lambda] + N tau0."""
    xs = np.asarray(xddot_star, dtype=float)
    if xs.shape != (6,) or not np.isfinite(xs).all():
        raise InputError("xddot_star must be a finite 6-vector")
    task = cm.Delta_pinv @ (xs - cm.Omega @ f_ext.to_array() + cm.Lambda)
    if tau0 is None:
        return task
    tau0 = np.asarray(tau0, dtype=float)
    if tau0.shape != (task.shape[0],) or not np.isfinite(tau0).all():
        raise InputError("tau0 must be a finite joint-space vector")
    return task + cm.NullProj @ tau0
