"""External wrenches: representation, classification, pulse profiles.

Wrenches are expressed in a frame with the origin of the tracked-link
frame and the orientation of the inertial frame.  A wrench is *assistive*
when its projection onto the desired direction of motion is positive
(above a small tolerance) and *agnostic* otherwise.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, ModelError

CLASSIFY_TOL = 1e-9

TWO_PI = 2.0 * math.pi


class WrenchClass(enum.Enum):
    ASSISTIVE = "assistive"
    AGNOSTIC = "agnostic"


@dataclass(frozen=True)
class Wrench:
    """Force (N) and torque (N m) 3-vectors."""

    force: np.ndarray
    torque: np.ndarray

    def __post_init__(self):
        f = np.atleast_1d(np.asarray(self.force, dtype=float))
        t = np.atleast_1d(np.asarray(self.torque, dtype=float))
        if f.shape != (3,) or t.shape != (3,):
            raise ModelError("force and torque must be 3-vectors")
        if not (np.isfinite(f).all() and np.isfinite(t).all()):
            raise InputError("wrench entries must be finite")
        object.__setattr__(self, "force", f)
        object.__setattr__(self, "torque", t)
        object.__setattr__(self, "_arr", np.concatenate([f, t]))

    @classmethod
    def zero(cls) -> "Wrench":
        return cls(np.zeros(3), np.zeros(3))

    @classmethod
    def from_array(cls, arr) -> "Wrench":
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (6,):
            raise ModelError("wrench array must have 6 entries")
        return cls(arr[:3], arr[3:])

    def to_array(self) -> np.ndarray:
        """Flat [force, torque] 6-vector; treat as read-only."""
        return self._arr

    def scaled(self, factor: float) -> "Wrench":
        return Wrench(self.force * factor, self.torque * factor)


@dataclass(frozen=True)
class WrenchEvent:
    """A timed pulse peaking at ``peak``.

    The smooth profile is a raised cosine, C1 at both ends and equal to the
    peak at the window midpoint; ``noise_std`` adds per-axis Gaussian
    measurement noise (force units) while the event is active.
    """

    start: float
    duration: float
    peak: Wrench
    profile: str = "smooth"
    noise_std: float = 0.0

    def __post_init__(self):
        if not self.duration > 0:
            raise ModelError("event duration must be > 0")
        if self.start < 0:
            raise ModelError("event start must be >= 0")
        if self.profile not in ("smooth", "step"):
            raise ModelError(f"unknown wrench profile: {self.profile!r}")
        if self.noise_std < 0:
            raise ModelError("noise_std must be >= 0")


def classify(w: Wrench, desired_direction, tol: float = CLASSIFY_TOL) -> WrenchClass:
    """Assistive iff the wrench projects positively onto the direction.

    ``desired_direction`` must be a unit 6-vector; the tolerance keeps
    noise-scale projections agnostic.
    """
    d = np.asarray(desired_direction, dtype=float)
    if d.shape != (6,) or not np.isfinite(d).all():
        raise ModelError("desired_direction must be a finite 6-vector")
    nrm = np.linalg.norm(d)
    if nrm < 1e-12:
        raise ValueError("desired_direction must be nonzero")
    if not np.isclose(nrm, 1.0, atol=1e-6):
        raise ValueError("desired_direction must have unit norm")
    proj = float(w.to_array() @ d)
    return WrenchClass.ASSISTIVE if proj > tol else WrenchClass.AGNOSTIC


def evaluate_event(event: WrenchEvent, t: float, rng=None) -> Wrench:
    """Wrench contributed by ``event`` at time ``t``.

    Zero outside [start, start + duration]; inside, the peak scaled by the
    profile, plus optional noise drawn from ``rng``.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if not event.start <= t <= event.start + event.duration:
        return Wrench.zero()
    if event.profile == "smooth":
        scale = 0.5 * (1.0 - math.cos(TWO_PI * (t - event.start) / event.duration))
    else:
        scale = 1.0
    arr = event.peak.to_array() * scale
    if event.noise_std > 0.0 and rng is not None:
        arr = arr + rng.normal(0.0, event.noise_std, size=6)
    return Wrench.from_array(arr)


_ZERO = Wrench(np.zeros(3), np.zeros(3))


def evaluate_events(events, t: float, rng=None) -> Wrench:
    """Sum of all active events at time ``t``."""
    total = None
    for e in events:
        if e.start <= t <= e.start + e.duration:
            w = evaluate_event(e, t, rng)
            total = w.to_array() if total is None else total + w.to_array()
    if total is None:
        return _ZERO
    return Wrench.from_array(total)


# Test wrench set used by the bundled sweep preset: six peak vectors in
# newtons, three with a positive x component (assistive for motion along
# +x) and three without.
TABLE1 = (
    ("a", Wrench(np.array([10.0, 0.0, 0.0]), np.zeros(3))),
    ("b", Wrench(np.array([5.0, 10.0, 0.0]), np.zeros(3))),
    ("c", Wrench(np.array([5.0, 0.0, 10.0]), np.zeros(3))),
    ("d", Wrench(np.array([-10.0, 0.0, 0.0]), np.zeros(3))),
    ("e", Wrench(np.array([0.0, -10.0, 0.0]), np.zeros(3))),
    ("f", Wrench(np.array([0.0, 0.0, 10.0]), np.zeros(3))),
)
