"""Evolution of the path free parameter under interaction.

The update rule raises the parameter rate whenever the measured task
velocity outruns the path,

    psidot = min(upper, max(1, xdot . dpsi_x_d / (||dpsi_x_d||^2 + eps)))

so progress along the reference speeds up exactly when motion agrees with
it.  The floor of 1 keeps the reference at least as fast as the nominal
time parametrization; the ceiling bounds advancement for safe interaction.
The regularization eps keeps the ratio finite at the path's velocity zero
crossings and pins the rate to the floor against measurement-scale noise.

The parameter acceleration needed by the reference feedforward would close
an algebraic loop through the commanded torques, so it is realized as a
one-step-delayed numeric derivative passed through a first-order low-pass.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .controller import Gains, TaskError
from .errors import ModelError

LAW_PROPOSITION = "proposition1"
LAW_APPENDIX = "appendix"
LAW_FROZEN = "frozen"

LAWS = (LAW_PROPOSITION, LAW_APPENDIX, LAW_FROZEN)


@dataclass(frozen=True)
class AdvancementConfig:
    """Parameters of the update law.

    ``law=frozen`` pins the rate to 1 (the classical time-parametrized
    baseline); ``appendix`` selects the interaction-projected variant.
    """

    psidot_upper: float = 10.0
    epsilon_reg: float = 1e-8
    lowpass_cutoff_hz: float = 10.0
    law: str = LAW_PROPOSITION

    def __post_init__(self):
        if not self.psidot_upper >= 1.0:
            raise ModelError("psidot_upper must be >= 1")
        if self.epsilon_reg < 0.0:
            raise ModelError("epsilon_reg must be >= 0")
        if not self.lowpass_cutoff_hz > 0.0:
            raise ModelError("lowpass_cutoff_hz must be > 0")
        if self.law not in LAWS:
            raise ModelError(f"unknown advancement law: {self.law!r}")


@dataclass(frozen=True)
class AdvancementState:
    """Free parameter, its clamped rate, and the filtered acceleration."""

    psi: float = 0.0
    psidot: float = 1.0
    psiddot: float = 0.0
    prev_psidot: float = 1.0
    filter_state: float = 0.0


def _clamp(ratio: float, cfg: AdvancementConfig) -> float:
    if not math.isfinite(ratio):
        ratio = 0.0
    return min(cfg.psidot_upper, max(1.0, ratio))


def psidot_update(xdot, dpsi_x_d, cfg: AdvancementConfig) -> float:
    """Parameter rate from the measured task velocity and the path partial."""
    if cfg.law == LAW_FROZEN:
        return 1.0
    xdot = np.asarray(xdot, dtype=float)
    d = np.asarray(dpsi_x_d, dtype=float)
    den = float(d @ d) + cfg.epsilon_reg
    if den == 0.0:
        return 1.0
    return _clamp(float(xdot @ d) / den, cfg)


def psidot_update_appendix(xdot, dpsi_x_d, omega_f, cfg: AdvancementConfig) -> float:
    """Variant projecting both sides onto the wrench-induced acceleration.

    ``omega_f`` is Omega f*, the task acceleration caused by the external
    wrench.  When the projection of the path partial onto it is below the
    regularization threshold the ratio is treated as zero (rate 1).
    """
    if cfg.law == LAW_FROZEN:
        return 1.0
    xdot = np.asarray(xdot, dtype=float)
    d = np.asarray(dpsi_x_d, dtype=float)
    of = np.asarray(omega_f, dtype=float)
    den = float(d @ of)
    if abs(den) < cfg.epsilon_reg:
        return 1.0
    den += math.copysign(cfg.epsilon_reg, den)
    return _clamp(float(xdot @ of) / den, cfg)


def advance(state: AdvancementState, psidot_new: float, dt: float,
            cfg: AdvancementConfig) -> AdvancementState:
    """Integrate the parameter one step and refresh the filtered derivative.

    The parameter advances by the trapezoid of the previous and new rates.
    The raw derivative entering the low-pass uses the previous step's pair
    of rates, i.e. it lags by one step, which is what breaks the algebraic
    loop between the reference acceleration and the commanded torques.
    """
    if not dt > 0.0:
        raise ValueError(f"dt must be > 0, got {dt}")
    psi = state.psi + 0.5 * dt * (state.psidot + psidot_new)
    raw = (state.psidot - state.prev_psidot) / dt
    gain = dt / (dt + 1.0 / (2.0 * math.pi * cfg.lowpass_cutoff_hz))
    filt = state.filter_state + gain * (raw - state.filter_state)
    return replace(state, psi=psi, psidot=psidot_new, psiddot=filt,
                   prev_psidot=state.psidot, filter_state=filt)


def lyapunov_value(err: TaskError, gains: Gains) -> float:
    """Energy-like tracking functional used for numeric stability monitoring.

    V = 1/2 ||vel_err||^2 + 1/2 int_err^T K_P int_err; non-negative, zero
    only at perfect velocity tracking with an empty error integral.
    """
    v = err.vel_err
    i = err.int_vel_err
    return float(0.5 * v @ v + 0.5 * i @ (gains.K_P @ i))
