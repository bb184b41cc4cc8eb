"""Rigid-body model of a planar articulated chain.

Supplies the mass matrix M, Coriolis matrix C (Christoffel form), gravity
vector G, bias h = C nu + G, the tracked-link task Jacobian with its time
derivative, forward kinematics and forward dynamics.  Chains live in the
x-z plane of the inertial frame (z up, gravity -z); revolute joints rotate
from +x toward +z, prismatic joints slide along a fixed in-plane axis.

All operations are pure functions of their inputs; the types are
value-semantic and safe to share read-only across threads.
"""

from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import DegenerateModelError, InputError, ModelError, UnsupportedFeatureError

REVOLUTE = "revolute"
PRISMATIC = "prismatic"

_MAX_JOINTS = 16
_COND_LIMIT = 1e12


@dataclass(frozen=True)
class Joint:
    """One joint of the chain.

    ``axis`` is a 3-vector in the parent frame.  For prismatic joints it is
    the slide direction and must lie in the x-z plane; for revolute joints
    it is fixed to the plane normal and any supplied value is rejected
    unless it matches (0, -1, 0) or (0, 1, 0).
    """

    kind: str
    axis: tuple = (0.0, -1.0, 0.0)

    def __post_init__(self):
        if self.kind not in (REVOLUTE, PRISMATIC):
            raise ModelError(f"unknown joint kind: {self.kind!r}")
        a = np.asarray(self.axis, dtype=float)
        if a.shape != (3,) or not np.isfinite(a).all():
            raise ModelError("joint axis must be a finite 3-vector")
        if self.kind == PRISMATIC:
            if abs(a[1]) > 1e-12:
                raise ModelError("prismatic axis must lie in the x-z plane")
            if not np.isclose(np.hypot(a[0], a[2]), 1.0, atol=1e-9):
                raise ModelError("prismatic axis must have unit norm")
        else:
            if abs(a[0]) > 1e-12 or abs(a[2]) > 1e-12:
                raise ModelError("revolute axis must be the plane normal (0, ±1, 0)")
        object.__setattr__(self, "axis", tuple(float(v) for v in a))

    @property
    def plane_angle(self) -> float:
        """Prismatic axis direction as an angle in the parent frame."""
        if self.kind == PRISMATIC:
            return float(np.arctan2(self.axis[2], self.axis[0]))
        return 0.0


@dataclass(frozen=True)
class RobotModel:
    """Kinematic and inertial description of a fixed-base planar chain.

    ``link_com_offsets`` are measured along each link from its joint;
    ``link_inertias`` are about the COM and the axis of motion (the plane
    normal).  ``base_angle`` is the world direction of the chain's zero
    configuration (e.g. -pi/2 for a chain that hangs straight down).
    ``base_dof`` is 0 for the fixed base; 6 is reserved for a floating base
    and rejected by every operation.
    """

    n_joints: int
    joint_kinds: tuple
    link_lengths: tuple
    link_masses: tuple
    link_com_offsets: tuple
    link_inertias: tuple
    gravity_g: float = 9.81
    base_dof: int = 0
    base_angle: float = 0.0
    tracked_link: int = -1
    name: str = ""

    def __post_init__(self):
        n = self.n_joints
        if n < 1 or n > _MAX_JOINTS:
            raise ModelError(f"n_joints must be in [1, {_MAX_JOINTS}], got {n}")
        joints = tuple(j if isinstance(j, Joint) else Joint(**j) for j in self.joint_kinds)
        object.__setattr__(self, "joint_kinds", joints)
        for attr in ("link_lengths", "link_masses", "link_com_offsets", "link_inertias"):
            vals = tuple(float(v) for v in getattr(self, attr))
            if len(vals) != n:
                raise ModelError(f"{attr} must have length {n}")
            if not all(np.isfinite(vals)):
                raise ModelError(f"{attr} must be finite")
            object.__setattr__(self, attr, vals)
        if len(joints) != n:
            raise ModelError(f"joint_kinds must have length {n}")
        if any(m <= 0 for m in self.link_masses):
            raise ModelError("all link masses must be > 0")
        if any(L <= 0 for L in self.link_lengths):
            raise ModelError("all link lengths must be > 0")
        if any(i < 0 for i in self.link_inertias):
            raise ModelError("all link inertias must be >= 0")
        if self.gravity_g < 0 or not np.isfinite(self.gravity_g):
            raise ModelError("gravity_g must be a finite non-negative norm")
        if self.base_dof not in (0, 6):
            raise ModelError("base_dof must be 0 or 6")
        tracked = self.tracked_link if self.tracked_link >= 0 else n + self.tracked_link
        if not 0 <= tracked < n:
            raise ModelError(f"tracked_link {self.tracked_link} out of range")
        object.__setattr__(self, "tracked_link", tracked)
        # flat argument tuple shared by both kernel backends
        full_pack = (
            np.array([0 if j.kind == REVOLUTE else 1 for j in joints], dtype=np.int32),
            np.array([j.plane_angle for j in joints]),
            np.asarray(self.link_lengths, dtype=float),
            np.asarray(self.link_com_offsets, dtype=float),
            np.asarray(self.link_masses, dtype=float),
            np.asarray(self.link_inertias, dtype=float),
            float(self.base_angle),
            float(self.gravity_g),
            int(tracked),
        )
        object.__setattr__(self, "_pack", full_pack)

    @property
    def dof(self) -> int:
        return self.n_joints + self.base_dof

    def pack(self):
        """Flat kernel argument tuple; see :mod:`trajadv._ref`."""
        if self.base_dof != 0:
            raise UnsupportedFeatureError(
                "floating base (base_dof=6) is reserved but not implemented")
        return self._pack


@dataclass(frozen=True)
class RobotState:
    """Joint positions and velocities at one instant."""

    q: np.ndarray
    nu: np.ndarray

    def __post_init__(self):
        q = np.atleast_1d(np.asarray(self.q, dtype=float))
        nu = np.atleast_1d(np.asarray(self.nu, dtype=float))
        if q.ndim != 1 or nu.ndim != 1 or q.shape != nu.shape:
            raise ModelError("q and nu must be 1-D arrays of equal length")
        if not (np.isfinite(q).all() and np.isfinite(nu).all()):
            raise InputError("state entries must be finite")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "nu", nu)


@dataclass(frozen=True)
class DynamicsQuantities:
    """M, C, G, bias h = C nu + G and the actuation selector B."""

    M: np.ndarray
    C: np.ndarray
    G: np.ndarray
    h: np.ndarray
    B: np.ndarray


@dataclass(frozen=True)
class TaskJacobian:
    """6 x n tracked-link Jacobian and its total time derivative.

    Rows are ordered [linear x, y, z; angular x, y, z] in the inertial
    frame; the out-of-plane rows of a planar chain are identically zero.
    """

    J: np.ndarray
    Jdot: np.ndarray


def _check(model: RobotModel, state: RobotState) -> None:
    if state.q.shape[0] != model.dof:
        raise ModelError(
            f"state has {state.q.shape[0]} coordinates, model expects {model.dof}")


def compute_dynamics(model: RobotModel, state: RobotState) -> DynamicsQuantities:
    """Evaluate M, C, G, h at the given state.

    C is built from the Christoffel symbols of M, so dM/dt - 2C is
    skew-symmetric along any trajectory.
    """
    _check(model, state)
    M, C, G, _, _, _ = backend.eval_dynamics(*model.pack(), state.q, state.nu)
    return DynamicsQuantities(M=M, C=C, G=G, h=C @ state.nu + G,
                              B=np.eye(model.n_joints))


def task_jacobian(model: RobotModel, state: RobotState) -> TaskJacobian:
    """Tracked-link task Jacobian: xdot = J nu, plus its time derivative."""
    _check(model, state)
    _, _, _, _, J, Jd = backend.eval_dynamics(*model.pack(), state.q, state.nu)
    return TaskJacobian(J=J, Jdot=Jd)


def forward_kinematics(model: RobotModel, state: RobotState):
    """Pose of the tracked-link tip: (position 3-vector, rotation 3x3)."""
    _check(model, state)
    _, _, _, pose, _, _ = backend.eval_dynamics(*model.pack(), state.q, state.nu)
    ry = pose[4]
    c, s = np.cos(ry), np.sin(ry)
    rot = np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    return pose[:3].copy(), rot


def task_pose(model: RobotModel, state: RobotState) -> np.ndarray:
    """Tracked-link pose as the 6-vector [px, py, pz, rx, ry, rz]."""
    _check(model, state)
    _, _, _, pose, _, _ = backend.eval_dynamics(*model.pack(), state.q, state.nu)
    return pose


def forward_dynamics(model: RobotModel, state: RobotState, tau, f_ext=None) -> np.ndarray:
    """Generalized acceleration nudot solving M nudot = B tau + J^T f - h.

    The solve is a symmetric positive-definite factorization, no explicit
    inverse.  ``f_ext`` is a wrench at the tracked link (anything with
    ``to_array()`` or a plain 6-vector).
    """
    _check(model, state)
    tau = np.asarray(tau, dtype=float)
    if tau.shape != (model.n_joints,):
        raise ModelError(f"tau must have shape ({model.n_joints},)")
    if not np.isfinite(tau).all():
        raise InputError("tau must be finite")
    if f_ext is None:
        f6 = np.zeros(6)
    elif hasattr(f_ext, "to_array"):
        f6 = f_ext.to_array()
    else:
        f6 = np.asarray(f_ext, dtype=float)
    if f6.shape != (6,) or not np.isfinite(f6).all():
        raise InputError("external wrench must be a finite 6-vector")
    M, _, _, _, _, _ = backend.eval_dynamics(*model.pack(), state.q, state.nu)
    if np.linalg.cond(M) > _COND_LIMIT:
        raise DegenerateModelError(
            f"mass matrix condition number exceeds {_COND_LIMIT:g}")
    return backend.accel(*model.pack(), state.q, state.nu, tau, f6)


def total_energy(model: RobotModel, state: RobotState) -> float:
    """Kinetic plus gravitational potential energy."""
    _check(model, state)
    M, _, _, _, _, _ = backend.eval_dynamics(*model.pack(), state.q, state.nu)
    ke = 0.5 * state.nu @ M @ state.nu
    pe = backend.potential_energy(*model.pack(), state.q)
    return float(ke + pe)


# --- shipped models ---------------------------------------------------------

def slider(mass: float = 2.0) -> RobotModel:
    """1-DOF prismatic cart sliding along world x (analytic ground truth)."""
    return RobotModel(
        n_joints=1,
        joint_kinds=(Joint(PRISMATIC, (1.0, 0.0, 0.0)),),
        link_lengths=(0.1,),
        link_masses=(mass,),
        link_com_offsets=(0.05,),
        link_inertias=(0.001,),
        name="slider",
    )


def planar_two_link() -> RobotModel:
    """Planar 2R pendulum hanging straight down at q = 0."""
    return RobotModel(
        n_joints=2,
        joint_kinds=(Joint(REVOLUTE), Joint(REVOLUTE)),
        link_lengths=(0.3, 0.3),
        link_masses=(1.0, 1.0),
        link_com_offsets=(0.15, 0.15),
        link_inertias=(0.0075, 0.0075),
        base_angle=-np.pi / 2,
        name="planar2",
    )


def planar_three_link() -> RobotModel:
    """Planar 3R leg hanging from the base; the foot is the task frame."""
    return RobotModel(
        n_joints=3,
        joint_kinds=(Joint(REVOLUTE), Joint(REVOLUTE), Joint(REVOLUTE)),
        link_lengths=(0.25, 0.22, 0.08),
        link_masses=(2.0, 1.2, 0.4),
        link_com_offsets=(0.125, 0.11, 0.04),
        link_inertias=(0.0104, 0.0048, 0.000213),
        base_angle=-np.pi / 2,
        name="planar3",
    )


SHIPPED_MODELS = {
    "slider": slider,
    "planar2": planar_two_link,
    "planar3": planar_three_link,
}
