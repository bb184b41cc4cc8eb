"""Scenario and model files: YAML schema, validation, overrides.

Validation is fail-closed: unknown keys are rejected with the full key
path so gain-name typos surface immediately.  Model descriptions can be
inline mappings, paths to model files, or names of bundled presets.
"""

import importlib.resources
import pathlib

import numpy as np
import yaml

from . import sim
from .advancement import AdvancementConfig, LAWS
from .controller import Gains
from .dynamics import Joint, PRISMATIC, REVOLUTE, RobotModel
from .errors import SchemaError
from .trajectory import (COMPOSITE, CONSTANT_POSE, MinJerkRamp,
                         ReferenceTrajectory, SINUSOID_1D, SinusoidTerm)
from .wrench import Wrench, WrenchEvent

SCHEMA_VERSION = 1

_SCENARIO_KEYS = {
    "schema_version", "name", "model", "q0", "nu0", "duration", "dt", "seed",
    "integrator", "controller", "trajectory", "advancement", "wrench_events",
    "sweep",
}
_CONTROLLER_KEYS = {
    "variant", "task_rows", "kp", "kd", "posture_damping", "pinv_cutoff",
    "pinv_damping",
}
_TRAJECTORY_KEYS = {
    "kind", "base_pose", "axis", "amplitude", "frequency", "phase", "ramp",
    "terms",
}
_TERM_KEYS = {"axis", "amplitude", "frequency", "phase"}
_RAMP_KEYS = {"kind", "duration"}
_ADVANCEMENT_KEYS = {"law", "psidot_upper", "epsilon_reg", "lowpass_cutoff_hz"}
_EVENT_KEYS = {"start", "duration", "force", "torque", "profile", "noise_std"}
_MODEL_KEYS = {
    "schema_version", "name", "n_joints", "joints", "link_lengths",
    "link_masses", "link_com_offsets", "link_inertias", "gravity_g",
    "base_dof", "base_angle", "tracked_link",
}
_JOINT_KEYS = {"kind", "axis"}
_SWEEP_KEYS = {"preset", "scale", "start", "duration", "noise_std"}


def _reject_unknown(mapping: dict, allowed: set, path: str) -> None:
    if not isinstance(mapping, dict):
        raise SchemaError(f"{path}: expected a mapping, got {type(mapping).__name__}")
    unknown = set(mapping) - allowed
    if unknown:
        raise SchemaError(f"{path}: unknown key(s) {sorted(unknown)}; "
                          f"allowed: {sorted(allowed)}")


def _require(mapping: dict, key: str, path: str):
    if key not in mapping:
        raise SchemaError(f"{path}: missing required key {key!r}")
    return mapping[key]


def preset_path(name: str) -> pathlib.Path:
    """Filesystem path of a bundled preset (models/... or scenarios/...)."""
    root = importlib.resources.files("trajadv") / "presets"
    p = root / name
    if not p.is_file():
        raise SchemaError(f"no bundled preset named {name!r}")
    return pathlib.Path(str(p))


def _load_yaml(path) -> dict:
    with open(path) as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise SchemaError(f"{path}: top level must be a mapping")
    return data


def build_model(spec, path: str = "model") -> RobotModel:
    """Model from an inline mapping, a file path, or a bundled preset name."""
    if isinstance(spec, str):
        candidate = pathlib.Path(spec)
        if candidate.is_file():
            spec = _load_yaml(candidate)
        else:
            try:
                spec = _load_yaml(preset_path(f"models/{spec}.yaml"))
            except SchemaError:
                raise SchemaError(
                    f"{path}: {spec!r} is neither a file nor a bundled model")
    _reject_unknown(spec, _MODEL_KEYS, path)
    version = spec.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"{path}: unsupported schema_version {version}")
    joints = []
    for i, j in enumerate(_require(spec, "joints", path)):
        _reject_unknown(j, _JOINT_KEYS, f"{path}.joints[{i}]")
        kind = _require(j, "kind", f"{path}.joints[{i}]")
        if kind not in (REVOLUTE, PRISMATIC):
            raise SchemaError(f"{path}.joints[{i}]: unknown kind {kind!r}")
        if "axis" in j:
            joints.append(Joint(kind, tuple(j["axis"])))
        else:
            joints.append(Joint(kind))
    try:
        return RobotModel(
            n_joints=spec.get("n_joints", len(joints)),
            joint_kinds=tuple(joints),
            link_lengths=tuple(_require(spec, "link_lengths", path)),
            link_masses=tuple(_require(spec, "link_masses", path)),
            link_com_offsets=tuple(_require(spec, "link_com_offsets", path)),
            link_inertias=tuple(_require(spec, "link_inertias", path)),
            gravity_g=float(spec.get("gravity_g", 9.81)),
            base_dof=int(spec.get("base_dof", 0)),
            base_angle=float(spec.get("base_angle", 0.0)),
            tracked_link=int(spec.get("tracked_link", -1)),
            name=str(spec.get("name", "")),
        )
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def _build_trajectory(spec: dict, path: str) -> ReferenceTrajectory:
    _reject_unknown(spec, _TRAJECTORY_KEYS, path)
    kind = spec.get("kind", SINUSOID_1D)
    base = spec.get("base_pose", "auto")
    base_pose = None if (base is None or base == "auto") else np.asarray(base, dtype=float)
    frequency = float(spec.get("frequency", 0.1))
    ramp_spec = spec.get("ramp", "default")
    if ramp_spec == "default":
        ramp = (MinJerkRamp(0.25 / frequency)
                if kind != CONSTANT_POSE and frequency > 0 else None)
    elif ramp_spec in (None, "none"):
        ramp = None
    else:
        _reject_unknown(ramp_spec, _RAMP_KEYS, f"{path}.ramp")
        if ramp_spec.get("kind", "min-jerk") != "min-jerk":
            raise SchemaError(f"{path}.ramp: unknown ramp kind")
        ramp = MinJerkRamp(float(_require(ramp_spec, "duration", f"{path}.ramp")))
    terms = []
    for i, term in enumerate(spec.get("terms", ())):
        _reject_unknown(term, _TERM_KEYS, f"{path}.terms[{i}]")
        terms.append(SinusoidTerm(
            axis=np.asarray(_require(term, "axis", f"{path}.terms[{i}]"), dtype=float),
            amplitude=float(term.get("amplitude", 0.05)),
            frequency=float(term.get("frequency", 0.1)),
            phase=float(term.get("phase", 0.0))))
    try:
        kwargs = dict(kind=kind, base_pose=base_pose, ramp=ramp)
        if kind == COMPOSITE:
            kwargs["terms"] = tuple(terms)
        elif kind == SINUSOID_1D:
            kwargs.update(
                axis=(np.asarray(spec["axis"], dtype=float) if "axis" in spec else None),
                amplitude=float(spec.get("amplitude", 0.05)),
                frequency=frequency,
                phase=float(spec.get("phase", 0.0)))
        return ReferenceTrajectory(**kwargs)
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def _build_events(specs, path: str) -> tuple:
    events = []
    for i, e in enumerate(specs or ()):
        p = f"{path}[{i}]"
        _reject_unknown(e, _EVENT_KEYS, p)
        try:
            events.append(WrenchEvent(
                start=float(_require(e, "start", p)),
                duration=float(_require(e, "duration", p)),
                peak=Wrench(np.asarray(e.get("force", (0, 0, 0)), dtype=float),
                            np.asarray(e.get("torque", (0, 0, 0)), dtype=float)),
                profile=e.get("profile", "smooth"),
                noise_std=float(e.get("noise_std", 0.0))))
        except (ValueError, TypeError) as exc:
            raise SchemaError(f"{p}: {exc}") from exc
    return tuple(events)


def build_scenario(data: dict, path: str = "scenario") -> sim.ScenarioConfig:
    """Validate a scenario mapping and construct the typed config."""
    _reject_unknown(data, _SCENARIO_KEYS, path)
    version = _require(data, "schema_version", path)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"{path}: unsupported schema_version {version}")
    model = build_model(_require(data, "model", path), f"{path}.model")

    cspec = data.get("controller", {})
    _reject_unknown(cspec, _CONTROLLER_KEYS, f"{path}.controller")
    try:
        gains = Gains.diagonal(cspec.get("kp", 25.0), cspec.get("kd", 10.0))
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"{path}.controller: {exc}") from exc

    aspec = data.get("advancement", {})
    _reject_unknown(aspec, _ADVANCEMENT_KEYS, f"{path}.advancement")
    law = aspec.get("law", "proposition1")
    if law not in LAWS:
        raise SchemaError(f"{path}.advancement: unknown law {law!r}")
    try:
        acfg = AdvancementConfig(
            psidot_upper=float(aspec.get("psidot_upper", 10.0)),
            epsilon_reg=float(aspec.get("epsilon_reg", 1e-8)),
            lowpass_cutoff_hz=float(aspec.get("lowpass_cutoff_hz", 10.0)),
            law=law)
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"{path}.advancement: {exc}") from exc

    sweep_spec = data.get("sweep", {})
    _reject_unknown(sweep_spec, _SWEEP_KEYS, f"{path}.sweep")

    try:
        return sim.ScenarioConfig(
            model=model,
            trajectory=_build_trajectory(data.get("trajectory", {}), f"{path}.trajectory"),
            gains=gains,
            advancement=acfg,
            q0=np.asarray(_require(data, "q0", path), dtype=float),
            nu0=(np.asarray(data["nu0"], dtype=float) if "nu0" in data else None),
            controller_variant=cspec.get("variant", "exploiting"),
            task_rows=tuple(cspec.get("task_rows", ("x",))),
            wrench_events=_build_events(data.get("wrench_events"), f"{path}.wrench_events"),
            duration=float(_require(data, "duration", path)),
            dt=float(data.get("dt", 1e-3)),
            seed=int(data.get("seed", 0)),
            integrator=data.get("integrator", "rk4"),
            posture_damping=float(cspec.get("posture_damping", 0.0)),
            pinv_cutoff=float(cspec.get("pinv_cutoff", 1e-8)),
            pinv_damping=float(cspec.get("pinv_damping", 0.0)),
            name=str(data.get("name", "")),
        )
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def sweep_options(data: dict) -> dict:
    """Sweep block with defaults filled in (scale, timing, noise)."""
    spec = data.get("sweep", {})
    _reject_unknown(spec, _SWEEP_KEYS, "scenario.sweep")
    return {
        "preset": spec.get("preset", "table1"),
        "scale": float(spec.get("scale", sim.TABLE1_SCALE)),
        "start": float(spec.get("start", sim.TABLE1_START)),
        "duration": float(spec.get("duration", sim.TABLE1_DURATION)),
        "noise_std": float(spec.get("noise_std", 0.0)),
    }


def apply_overrides(data: dict, overrides) -> dict:
    """Apply repeatable ``key.path=value`` overrides; values parse as YAML."""
    for item in overrides or ():
        if "=" not in item:
            raise SchemaError(f"override {item!r} must look like key.path=value")
        key, _, raw = item.partition("=")
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError as exc:
            raise SchemaError(f"override {item!r}: unparseable value") from exc
        node = data
        parts = key.strip().split(".")
        for part in parts[:-1]:
            nxt = node.get(part)
            if not isinstance(nxt, dict):
                nxt = {}
                node[part] = nxt
            node = nxt
        node[parts[-1]] = value
    return data


def load_scenario(path, overrides=None) -> sim.ScenarioConfig:
    """Load, override and validate a scenario file."""
    data = apply_overrides(_load_yaml(path), overrides)
    return build_scenario(data)
