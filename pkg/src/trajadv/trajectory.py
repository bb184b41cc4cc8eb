"""Parametric reference paths with analytic first and second partials.

A path is purely spatial in its free parameter; all timing lives in the
advancement module.  The shipped kinds are a single-axis sinusoid, a
constant pose, and a composite (sum of sinusoid terms sharing one anchor
pose).  An optional minimum-jerk blend scales the deviation from the
anchor over a startup window so the path starts from rest.
"""

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelError

SINUSOID_1D = "sinusoid-1d"
CONSTANT_POSE = "constant-pose"
COMPOSITE = "composite"

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class MinJerkRamp:
    """Quintic blend s(u) = 10u^3 - 15u^4 + 6u^5 over ``duration``.

    Scales the path deviation so value, slope and curvature all vanish at
    the start of the window and blend to 1 with C2 continuity.
    """

    duration: float

    def __post_init__(self):
        if not (self.duration > 0 and np.isfinite(self.duration)):
            raise ModelError("ramp duration must be positive and finite")

    def blend(self, psi: float):
        """Returns (r, r', r'') at path parameter ``psi``."""
        if psi >= self.duration:
            return 1.0, 0.0, 0.0
        u = psi / self.duration
        r = u**3 * (10.0 - 15.0 * u + 6.0 * u * u)
        rp = (30.0 * u**2 - 60.0 * u**3 + 30.0 * u**4) / self.duration
        rpp = (60.0 * u - 180.0 * u**2 + 120.0 * u**3) / self.duration**2
        return r, rp, rpp


@dataclass(frozen=True)
class SinusoidTerm:
    """One sinusoidal component: amplitude * sin(2 pi f psi + phase) along axis."""

    axis: np.ndarray
    amplitude: float
    frequency: float
    phase: float = 0.0

    def __post_init__(self):
        axis = np.asarray(self.axis, dtype=float)
        if axis.shape != (6,) or not np.isfinite(axis).all():
            raise ModelError("axis must be a finite 6-vector")
        nrm = np.linalg.norm(axis)
        if not np.isclose(nrm, 1.0, atol=1e-9):
            raise ModelError("axis must have unit norm")
        if self.amplitude < 0:
            raise ModelError("amplitude must be >= 0")
        if not self.frequency > 0:
            raise ModelError("frequency must be > 0")
        object.__setattr__(self, "axis", axis)


@dataclass(frozen=True)
class ReferenceTrajectory:
    """Parametric path x_d(psi) anchored at ``base_pose``.

    For ``sinusoid-1d`` the axis must additionally have exactly one nonzero
    component.  ``base_pose=None`` means "anchor at the initial task pose",
    resolved by the simulation before the first sample.
    """

    kind: str = SINUSOID_1D
    base_pose: np.ndarray | None = None
    axis: np.ndarray | None = None
    amplitude: float = 0.05
    frequency: float = 0.1
    phase: float = 0.0
    ramp: MinJerkRamp | None = None
    terms: tuple = ()

    def __post_init__(self):
        if self.kind not in (SINUSOID_1D, CONSTANT_POSE, COMPOSITE):
            raise ModelError(f"unknown trajectory kind: {self.kind!r}")
        if self.base_pose is not None:
            bp = np.asarray(self.base_pose, dtype=float)
            if bp.shape != (6,) or not np.isfinite(bp).all():
                raise ModelError("base_pose must be a finite 6-vector")
            object.__setattr__(self, "base_pose", bp)
        if self.kind == SINUSOID_1D:
            axis = np.zeros(6)
            axis[0] = 1.0
            if self.axis is not None:
                axis = np.asarray(self.axis, dtype=float)
            if np.count_nonzero(axis) != 1:
                raise ModelError("sinusoid-1d axis must have exactly one nonzero component")
            term = SinusoidTerm(axis=axis, amplitude=self.amplitude,
                                frequency=self.frequency, phase=self.phase)
            object.__setattr__(self, "axis", term.axis)
            object.__setattr__(self, "terms", (term,))
        elif self.kind == COMPOSITE:
            if not self.terms:
                raise ModelError("composite trajectory needs at least one term")
            object.__setattr__(self, "terms", tuple(self.terms))

    def anchored(self, base_pose) -> "ReferenceTrajectory":
        """Copy of this trajectory with the anchor pose filled in."""
        return dataclasses.replace(self, base_pose=np.asarray(base_pose, dtype=float))


@dataclass(frozen=True)
class TrajectorySample:
    """Path value and its first/second partials in the free parameter."""

    x_d: np.ndarray
    dpsi_x_d: np.ndarray
    d2psi_x_d: np.ndarray


def sample(traj: ReferenceTrajectory, psi: float) -> TrajectorySample:
    """Evaluate x_d(psi) and both partials, fully analytic.

    Requires psi >= 0 and a resolved anchor pose.
    """
    if not (psi >= 0.0):
        raise ValueError(f"psi must be >= 0, got {psi}")
    if traj.base_pose is None:
        raise ModelError("trajectory anchor pose is unresolved; call anchored()")
    x = traj.base_pose.copy()
    d1 = np.zeros(6)
    d2 = np.zeros(6)
    if traj.kind == CONSTANT_POSE:
        return TrajectorySample(x, d1, d2)
    if traj.ramp is not None:
        r, rp, rpp = traj.ramp.blend(psi)
    else:
        r, rp, rpp = 1.0, 0.0, 0.0
    for term in traj.terms:
        w = TWO_PI * term.frequency
        arg = w * psi + term.phase
        s = math.sin(arg)
        c = math.cos(arg)
        A = term.amplitude
        x += term.axis * (A * r * s)
        d1 += term.axis * (A * (rp * s + r * w * c))
        d2 += term.axis * (A * (rpp * s + 2.0 * rp * w * c - r * w * w * s))
    return TrajectorySample(x, d1, d2)


def reference_kinematics(s: TrajectorySample, psidot: float, psiddot: float):
    """Chain rule: xdot_d = d1 psidot, xddot_d = d2 psidot^2 + d1 psiddot."""
    xdot_d = s.dpsi_x_d * psidot
    xddot_d = s.d2psi_x_d * (psidot * psidot) + s.dpsi_x_d * psiddot
    return xdot_d, xddot_d
