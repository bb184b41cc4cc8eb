"""Deterministic fixed-step closed-loop simulator.

Each step evaluates the active wrench events, the dynamics quantities and
the selected controller variant, integrates the rigid-body state (RK4 by
default, torque and wrench held over the step), then updates the free
parameter from the velocity measured after the step -- the one-step delay
that breaks the algebraic loop.  The path partial for that update is taken
at the predicted parameter value ``psi + dt * psidot`` so the measurement
and the partial refer to the same instant.

Runs are bit-reproducible under a fixed seed: the only randomness is the
optional wrench measurement noise, drawn from a counter-based generator.
"""

from dataclasses import dataclass, replace

import numpy as np

from . import advancement as adv
from . import backend
from . import controller as ctrl
from . import trajectory as trj
from . import wrench as wr
from .advancement import AdvancementConfig, AdvancementState
from .controller import Gains, TaskError
from .dynamics import DynamicsQuantities, RobotModel, RobotState, TaskJacobian
from .errors import ModelError, SimulationError

RK4 = "rk4"
SEMI_IMPLICIT_EULER = "semi-implicit-euler"

VARIANT_CLASSICAL = "classical"
VARIANT_EXPLOITING = "exploiting"

# Slider-scale factor mapping the bundled test-wrench table (tens of
# newtons, sized for a full-size legged robot) onto the shipped desk-scale
# models: 0.006 puts the strongest assistive pulse at a peak parameter rate
# of ~4.4 on the slider, well inside the ceiling of 10, while the 10x clamp
# scenario saturates it.
TABLE1_SCALE = 0.006
TABLE1_START = 8.0
TABLE1_DURATION = 0.75


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete description of one closed-loop experiment."""

    model: RobotModel
    trajectory: trj.ReferenceTrajectory
    gains: Gains
    advancement: AdvancementConfig
    q0: np.ndarray
    nu0: np.ndarray | None = None
    controller_variant: str = VARIANT_EXPLOITING
    task_rows: tuple = (0,)
    wrench_events: tuple = ()
    duration: float = 10.0
    dt: float = 1e-3
    seed: int = 0
    integrator: str = RK4
    posture_damping: float = 0.0
    pinv_cutoff: float = ctrl.PINV_CUTOFF
    pinv_damping: float = 0.0
    name: str = ""

    def __post_init__(self):
        if self.controller_variant not in (VARIANT_CLASSICAL, VARIANT_EXPLOITING):
            raise ModelError(f"unknown controller variant: {self.controller_variant!r}")
        if self.integrator not in (RK4, SEMI_IMPLICIT_EULER):
            raise ModelError(f"unknown integrator: {self.integrator!r}")
        if not self.duration > 0:
            raise ModelError("duration must be > 0")
        if not 0 < self.dt <= self.duration:
            raise ModelError("dt must satisfy 0 < dt <= duration")
        if self.posture_damping < 0:
            raise ModelError("posture_damping must be >= 0")
        q0 = np.atleast_1d(np.asarray(self.q0, dtype=float))
        if q0.shape != (self.model.dof,):
            raise ModelError(f"q0 must have length {self.model.dof}")
        nu0 = (np.zeros(self.model.dof) if self.nu0 is None
               else np.atleast_1d(np.asarray(self.nu0, dtype=float)))
        if nu0.shape != (self.model.dof,):
            raise ModelError(f"nu0 must have length {self.model.dof}")
        object.__setattr__(self, "q0", q0)
        object.__setattr__(self, "nu0", nu0)
        object.__setattr__(self, "task_rows", ctrl.row_indices(self.task_rows))
        object.__setattr__(self, "wrench_events", tuple(self.wrench_events))


@dataclass(frozen=True)
class LogRecord:
    """Telemetry for one step."""

    t: float
    psi: float
    psidot: float
    psiddot: float
    x: np.ndarray
    x_d: np.ndarray
    xdot: np.ndarray
    xdot_d: np.ndarray
    tracking_err: np.ndarray
    tau: np.ndarray
    f_ext: wr.Wrench
    alpha: float
    V: float
    wrench_class: wr.WrenchClass | None


@dataclass(frozen=True)
class SweepRow:
    """Aggregate of one sweep run."""

    label: str
    wrench_class: wr.WrenchClass
    delta_psi: float
    peak_psidot: float
    rms_tracking_err: float
    peak_alpha: float


def _signed_direction(axis: np.ndarray, xdot_d: np.ndarray) -> np.ndarray:
    """Instantaneous desired direction of motion along the path axis."""
    s = float(xdot_d @ axis)
    return axis if s >= 0 else -axis


def run(config: ScenarioConfig) -> list[LogRecord]:
    """Execute one scenario and return the per-step telemetry."""
    model = config.model
    pack = model.pack()
    n = model.n_joints
    mask = ctrl.row_mask(config.task_rows)
    gains = config.gains
    acfg = config.advancement
    stepper = backend.rk4_step if config.integrator == RK4 else backend.sie_step
    rng = np.random.Generator(np.random.Philox(config.seed))
    needs_rng = any(e.noise_std > 0 for e in config.wrench_events)

    q = config.q0.copy()
    nu = config.nu0.copy()
    M, C, G, pose, J, Jd = backend.eval_dynamics(*pack, q, nu)
    traj = config.trajectory
    if traj.base_pose is None:
        traj = traj.anchored(pose)
    axis = traj.terms[0].axis if traj.terms else None

    state_adv = AdvancementState()
    int_err = np.zeros(6)
    B = np.eye(n)
    records: list[LogRecord] = []
    steps = int(round(config.duration / config.dt))
    dt = config.dt

    for k in range(steps + 1):
        t = k * dt
        try:
            w = wr.evaluate_events(config.wrench_events, t, rng if needs_rng else None)
            f6 = w.to_array()
            samp = trj.sample(traj, state_adv.psi)
            xdot_d, xddot_d = trj.reference_kinematics(
                samp, state_adv.psidot, state_adv.psiddot)
            xdot = J @ nu
            err = TaskError(vel_err=mask * (xdot - xdot_d), int_vel_err=int_err)
            dyn = DynamicsQuantities(M=M, C=C, G=G, h=C @ nu + G, B=B)
            jac = TaskJacobian(J=J, Jdot=Jd)
            cm = ctrl.control_matrices(
                dyn, jac, RobotState(q, nu), task_rows=config.task_rows,
                pinv_cutoff=config.pinv_cutoff, pinv_damping=config.pinv_damping)
            dec = ctrl.decompose_interaction(cm, w, xdot_d)
            if config.controller_variant == VARIANT_EXPLOITING:
                xs = ctrl.exploiting_desired_acceleration(xddot_d, err, gains, dec)
            else:
                xs = ctrl.desired_acceleration(xddot_d, err, gains)
            tau0 = -config.posture_damping * nu if config.posture_damping > 0 else None
            tau = ctrl.control_torques(cm, xs, w, tau0)
            V = adv.lyapunov_value(err, gains)
            wclass = None
            if axis is not None and float(f6 @ f6) > 0.0:
                wclass = wr.classify(w, _signed_direction(axis, xdot_d))
            records.append(LogRecord(
                t=t, psi=state_adv.psi, psidot=state_adv.psidot,
                psiddot=state_adv.psiddot, x=pose, x_d=samp.x_d, xdot=xdot,
                xdot_d=xdot_d, tracking_err=pose - samp.x_d, tau=tau, f_ext=w,
                alpha=dec.alpha, V=V, wrench_class=wclass))
            if k == steps:
                break
            int_err = int_err + err.vel_err * dt
            q, nu = stepper(*pack, q, nu, tau, f6, dt)
            if not (np.isfinite(q).all() and np.isfinite(nu).all()):
                raise SimulationError(k, "state became non-finite")
            M, C, G, pose, J, Jd = backend.eval_dynamics(*pack, q, nu)
            xdot_new = J @ nu
            psi_hat = state_adv.psi + dt * state_adv.psidot
            samp_hat = trj.sample(traj, psi_hat)
            if acfg.law == adv.LAW_APPENDIX:
                pd_new = adv.psidot_update_appendix(
                    xdot_new, samp_hat.dpsi_x_d, cm.Omega @ f6, acfg)
            else:
                pd_new = adv.psidot_update(xdot_new, samp_hat.dpsi_x_d, acfg)
            state_adv = adv.advance(state_adv, pd_new, dt, acfg)
        except SimulationError:
            raise
        except Exception as exc:
            raise SimulationError(k, str(exc)) from exc
    return records


def summarize(records: list[LogRecord], duration: float, label: str = "",
              wclass: wr.WrenchClass | None = None) -> SweepRow:
    """Aggregate one run: advancement, peak rate, RMS position error, peak alpha."""
    delta_psi = records[-1].psi - duration
    peak_psidot = max(r.psidot for r in records)
    peak_alpha = max(r.alpha for r in records)
    sq = np.array([float(r.tracking_err[:3] @ r.tracking_err[:3]) for r in records])
    rms = float(np.sqrt(sq.mean()))
    return SweepRow(label=label,
                    wrench_class=wclass if wclass is not None else wr.WrenchClass.AGNOSTIC,
                    delta_psi=delta_psi, peak_psidot=peak_psidot,
                    rms_tracking_err=rms, peak_alpha=peak_alpha)


def table1_events(scale: float = TABLE1_SCALE, start: float = TABLE1_START,
                  duration: float = TABLE1_DURATION,
                  noise_std: float = 0.0) -> list[tuple]:
    """The bundled sweep preset: one smooth pulse per test-wrench row."""
    out = []
    for label, peak in wr.TABLE1:
        event = wr.WrenchEvent(start=start, duration=duration,
                               peak=peak.scaled(scale), profile="smooth",
                               noise_std=noise_std)
        out.append((label, (event,)))
    return out


def sweep(base: ScenarioConfig, labelled_events) -> tuple[list[SweepRow], list[list[LogRecord]]]:
    """One run per event preset against the base scenario.

    Returns the summary rows plus the full logs, in preset order.
    """
    direction = np.zeros(6)
    direction[0] = 1.0
    if base.trajectory.terms:
        direction = base.trajectory.terms[0].axis
    rows: list[SweepRow] = []
    logs: list[list[LogRecord]] = []
    for label, events in labelled_events:
        cfg = replace(base, wrench_events=tuple(events), name=label)
        records = run(cfg)
        peaks = np.sum([e.peak.to_array() for e in events], axis=0)
        wclass = wr.classify(wr.Wrench.from_array(peaks), direction)
        rows.append(summarize(records, cfg.duration, label=label, wclass=wclass))
        logs.append(records)
    return rows, logs


# --- CSV output --------------------------------------------------------------

_VEC_SUFFIX = ("x", "y", "z", "rx", "ry", "rz")


def _fmt(v: float) -> str:
    return format(float(v), ".9g")


def csv_header(n_joints: int) -> list[str]:
    cols = ["t", "psi", "psidot", "psiddot"]
    for base in ("x", "x_d", "xdot", "xdot_d", "tracking_err"):
        cols += [f"{base}_{s}" for s in _VEC_SUFFIX]
    cols += [f"tau_{i}" for i in range(n_joints)]
    cols += [f"f_ext_{s}" for s in _VEC_SUFFIX]
    cols += ["alpha", "V", "wrench_class"]
    return cols


def record_row(r: LogRecord) -> list[str]:
    row = [_fmt(r.t), _fmt(r.psi), _fmt(r.psidot), _fmt(r.psiddot)]
    for vec in (r.x, r.x_d, r.xdot, r.xdot_d, r.tracking_err):
        row += [_fmt(v) for v in vec]
    row += [_fmt(v) for v in r.tau]
    row += [_fmt(v) for v in r.f_ext.to_array()]
    row += [_fmt(r.alpha), _fmt(r.V),
            r.wrench_class.value if r.wrench_class is not None else "none"]
    return row


def write_csv(records: list[LogRecord], path) -> None:
    """One header row plus one line per step, 9 significant digits."""
    if not records:
        raise ValueError("cannot write an empty log")
    n = records[0].tau.shape[0]
    lines = [",".join(csv_header(n))]
    lines += [",".join(record_row(r)) for r in records]
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_summary_csv(rows: list[SweepRow], path) -> None:
    lines = [",".join(("label", "wrench_class", "delta_psi", "peak_psidot",
                       "rms_tracking_err", "peak_alpha"))]
    for r in rows:
        lines.append(",".join((r.label, r.wrench_class.value, _fmt(r.delta_psi),
                               _fmt(r.peak_psidot), _fmt(r.rms_tracking_err),
                               _fmt(r.peak_alpha))))
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
