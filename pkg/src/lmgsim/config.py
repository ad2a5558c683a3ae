"""Experiment configuration: JSON-compatible schema with explicit unit
suffixes in every key (MHz-over-2pi, GHz-over-2pi, ns, us), validated with
field-level error messages.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import units
from .model import DeviceSpec, NoiseSpec, QuenchSchedule, reference_device

__all__ = [
    "ConfigError",
    "ScheduleConfig",
    "IntegratorSpec",
    "WignerGridSpec",
    "ExperimentConfig",
    "PairSwapConfig",
    "load_experiment_config",
]

MODELS = ("effective_dicke", "effective_full", "circuit_qed")
OBSERVABLES = ("populations", "correlations", "fringes", "wigner")
DEVICE_PRESETS = ("reference",)

DEFAULT_DT_NS = {"effective_dicke": 0.05, "effective_full": 0.05,
                 "circuit_qed": 0.005}


class ConfigError(ValueError):
    def __init__(self, fld: str, message: str):
        self.field = fld
        super().__init__(f"{fld}: {message}")


def _require(cond: bool, fld: str, message: str):
    if not cond:
        raise ConfigError(fld, message)


def _get(d: dict, key: str, default=None):
    return d.get(key, default)


@dataclass(frozen=True)
class ScheduleConfig:
    omega0_mhz_over_2pi: float = 40.0
    tf_ns: float = 60.0
    duration_ns: float = 150.0
    drive_sign: int = 1

    def build(self) -> QuenchSchedule:
        return QuenchSchedule(
            omega0=units.from_mhz(self.omega0_mhz_over_2pi),
            tf=self.tf_ns, duration=self.duration_ns,
            drive_sign=self.drive_sign)

    @classmethod
    def from_dict(cls, d: dict, fld: str) -> "ScheduleConfig":
        _require(isinstance(d, dict), fld, "must be an object")
        known = {"omega0_mhz_over_2pi", "tf_ns", "duration_ns", "drive_sign"}
        for k in d:
            _require(k in known, f"{fld}.{k}", "unknown key")
        cfg = cls(**d)
        _require(cfg.omega0_mhz_over_2pi >= 0,
                 f"{fld}.omega0_mhz_over_2pi", "must be >= 0")
        _require(cfg.tf_ns > 0, f"{fld}.tf_ns", "must be > 0")
        _require(cfg.duration_ns >= 0, f"{fld}.duration_ns", "must be >= 0")
        _require(cfg.drive_sign in (-1, 1), f"{fld}.drive_sign",
                 "must be +1 or -1")
        return cfg


@dataclass(frozen=True)
class IntegratorSpec:
    dt_ns: float | None = None          # None: model default
    checkpoint_spacing_ns: float | None = 2.0
    checkpoint_times_ns: tuple[float, ...] | None = None

    def resolve_checkpoints(self, duration: float) -> list[float]:
        if self.checkpoint_times_ns is not None:
            return sorted(self.checkpoint_times_ns)
        spacing = self.checkpoint_spacing_ns
        n = int(round(duration / spacing))
        return [k * spacing for k in range(n + 1)]

    @classmethod
    def from_dict(cls, d: dict, fld: str) -> "IntegratorSpec":
        _require(isinstance(d, dict), fld, "must be an object")
        known = {"dt_ns", "checkpoint_spacing_ns", "checkpoint_times_ns"}
        for k in d:
            _require(k in known, f"{fld}.{k}", "unknown key")
        times = d.get("checkpoint_times_ns")
        if times is not None:
            _require(isinstance(times, (list, tuple)) and len(times) > 0,
                     f"{fld}.checkpoint_times_ns", "must be a non-empty list")
            times = tuple(float(t) for t in times)
        cfg = cls(dt_ns=d.get("dt_ns"),
                  checkpoint_spacing_ns=d.get("checkpoint_spacing_ns", 2.0),
                  checkpoint_times_ns=times)
        if cfg.dt_ns is not None:
            _require(cfg.dt_ns > 0, f"{fld}.dt_ns", "must be > 0")
        if cfg.checkpoint_times_ns is None:
            _require(cfg.checkpoint_spacing_ns is not None
                     and cfg.checkpoint_spacing_ns > 0,
                     f"{fld}.checkpoint_spacing_ns", "must be > 0")
        return cfg


@dataclass(frozen=True)
class WignerGridSpec:
    n_theta: int = 61
    n_phi: int = 121
    normalized: bool = True
    times_ns: tuple[float, ...] | None = None  # None: all checkpoints

    def thetas(self) -> np.ndarray:
        return np.linspace(0.0, np.pi, self.n_theta)

    def phis(self) -> np.ndarray:
        return np.linspace(0.0, 2 * np.pi, self.n_phi, endpoint=False)

    @classmethod
    def from_dict(cls, d: dict, fld: str) -> "WignerGridSpec":
        _require(isinstance(d, dict), fld, "must be an object")
        known = {"n_theta", "n_phi", "normalized", "times_ns"}
        for k in d:
            _require(k in known, f"{fld}.{k}", "unknown key")
        times = d.get("times_ns")
        if times is not None:
            times = tuple(float(t) for t in times)
        cfg = cls(n_theta=d.get("n_theta", 61), n_phi=d.get("n_phi", 121),
                  normalized=d.get("normalized", True), times_ns=times)
        _require(cfg.n_theta >= 1, f"{fld}.n_theta", "must be >= 1")
        _require(cfg.n_phi >= 1, f"{fld}.n_phi", "must be >= 1")
        return cfg


def device_from_dict(d: dict | str, fld: str) -> DeviceSpec:
    """Build a DeviceSpec from a preset name or an explicit parameter map."""
    if isinstance(d, str):
        _require(d in DEVICE_PRESETS, fld,
                 f"unknown device preset {d!r} (known: {DEVICE_PRESETS})")
        return reference_device()
    _require(isinstance(d, dict), fld, "must be a preset name or an object")
    known = {"n_qubits", "xi_mhz_over_2pi", "omega_b_ghz_over_2pi",
             "omega_o_ghz_over_2pi", "omega_q_ghz_over_2pi", "t1_us",
             "t2_us", "f_g", "f_e", "crosstalk_b_mhz_over_2pi"}
    for k in d:
        _require(k in known, f"{fld}.{k}", "unknown key")
    try:
        n = int(d["n_qubits"])
        xi = np.array([units.from_mhz(x) for x in d["xi_mhz_over_2pi"]])
        omega_b = units.from_ghz(float(d["omega_b_ghz_over_2pi"]))
        omega_o = units.from_ghz(float(d["omega_o_ghz_over_2pi"]))
    except KeyError as e:
        raise ConfigError(f"{fld}.{e.args[0]}", "missing required key") from e
    omega_q_ghz = d.get("omega_q_ghz_over_2pi")
    if omega_q_ghz is None:
        lam_bar = float(np.mean(xi ** 2)) / abs(omega_o - omega_b)
        omega_q = omega_o + lam_bar
    else:
        omega_q = units.from_ghz(float(omega_q_ghz))
    b_raw = d.get("crosstalk_b_mhz_over_2pi", 0.0)
    if np.isscalar(b_raw):
        bmat = np.full((n, n), units.from_mhz(float(b_raw)))
        np.fill_diagonal(bmat, 0.0)
    else:
        bmat = units.from_mhz(1.0) * np.asarray(b_raw, dtype=float)
    t1 = np.array([units.from_us(t) for t in d.get("t1_us", [20.0] * n)])
    t2 = np.array([units.from_us(t) for t in d.get("t2_us", [3.0] * n)])
    f_g = np.asarray(d.get("f_g", [1.0] * n), dtype=float)
    f_e = np.asarray(d.get("f_e", [1.0] * n), dtype=float)
    try:
        return DeviceSpec(n_qubits=n, xi=xi, omega_b=omega_b,
                          omega_o=omega_o, omega_q=omega_q, t1=t1, t2=t2,
                          f_g=f_g, f_e=f_e, crosstalk_b=bmat)
    except ValueError as e:
        raise ConfigError(fld, str(e)) from e


@dataclass(frozen=True)
class ExperimentConfig:
    """One quench simulation: model, schedule, noise, grids, observables."""

    model: str
    n_qubits: int
    schedule: ScheduleConfig = field(default_factory=ScheduleConfig)
    lambda_mhz_over_2pi: float | None = None
    device: str | dict | None = None
    n_max: int = 3
    noise: dict = field(default_factory=lambda: {"enable_t1": False,
                                                 "enable_dephasing": False})
    integrator: IntegratorSpec = field(default_factory=IntegratorSpec)
    observables: tuple[str, ...] = ("populations", "correlations", "fringes")
    beta_points: int = 25
    wigner_grid: WignerGridSpec = field(default_factory=WignerGridSpec)
    apply_readout_error: bool = False
    seed: int | None = None

    def noise_spec(self) -> NoiseSpec:
        return NoiseSpec(enable_t1=bool(self.noise.get("enable_t1", False)),
                         enable_dephasing=bool(
                             self.noise.get("enable_dephasing", False)))

    def device_spec(self) -> DeviceSpec | None:
        if self.device is None:
            return None
        return device_from_dict(self.device, "device")

    def dt_ns(self) -> float:
        return self.integrator.dt_ns or DEFAULT_DT_NS[self.model]

    def checkpoints(self) -> list[float]:
        return self.integrator.resolve_checkpoints(self.schedule.duration_ns)

    def beta_grid(self) -> np.ndarray:
        return np.linspace(0.0, np.pi, self.beta_points, endpoint=False)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        _require(isinstance(d, dict), "<root>", "config must be an object")
        known = {"model", "n_qubits", "schedule", "lambda_mhz_over_2pi",
                 "device", "n_max", "noise", "integrator", "observables",
                 "beta_points", "wigner_grid", "apply_readout_error", "seed"}
        for k in d:
            _require(k in known, k, "unknown key")
        model = _get(d, "model")
        _require(model in MODELS, "model", f"must be one of {MODELS}")
        n_qubits = _get(d, "n_qubits")
        _require(isinstance(n_qubits, int) and n_qubits >= 1, "n_qubits",
                 "must be a positive integer")
        schedule = ScheduleConfig.from_dict(_get(d, "schedule", {}),
                                            "schedule")
        integrator = IntegratorSpec.from_dict(_get(d, "integrator", {}),
                                              "integrator")
        wigner_grid = WignerGridSpec.from_dict(_get(d, "wigner_grid", {}),
                                               "wigner_grid")
        observables = tuple(_get(d, "observables",
                                 ["populations", "correlations", "fringes"]))
        for ob in observables:
            _require(ob in OBSERVABLES, "observables",
                     f"unknown observable {ob!r}")
        noise = dict(_get(d, "noise", {}))
        for k in noise:
            _require(k in ("enable_t1", "enable_dephasing"), f"noise.{k}",
                     "unknown key")
        cfg = cls(
            model=model,
            n_qubits=n_qubits,
            schedule=schedule,
            lambda_mhz_over_2pi=_get(d, "lambda_mhz_over_2pi"),
            device=_get(d, "device"),
            n_max=_get(d, "n_max", 3),
            noise=noise,
            integrator=integrator,
            observables=observables,
            beta_points=_get(d, "beta_points", 25),
            wigner_grid=wigner_grid,
            apply_readout_error=bool(_get(d, "apply_readout_error", False)),
            seed=_get(d, "seed"),
        )
        cfg.validate()
        return cfg

    def validate(self):
        if self.model in ("effective_dicke", "effective_full"):
            _require(self.lambda_mhz_over_2pi is not None,
                     "lambda_mhz_over_2pi",
                     f"required for model {self.model}")
            _require(self.lambda_mhz_over_2pi > 0, "lambda_mhz_over_2pi",
                     "must be > 0")
        if self.model == "effective_dicke":
            _require(not self.noise_spec().any_enabled, "noise",
                     "the symmetric-subspace model forbids per-qubit noise")
            _require(not self.apply_readout_error, "apply_readout_error",
                     "needs a per-qubit model and a device")
        if self.model == "circuit_qed":
            _require(self.device is not None, "device",
                     "required for model circuit_qed")
            dev = self.device_spec()
            _require(dev.n_qubits == self.n_qubits, "device.n_qubits",
                     f"device has {dev.n_qubits} qubits, config says "
                     f"{self.n_qubits}")
            _require(self.n_max >= 1, "n_max", "must be >= 1")
        if self.apply_readout_error:
            _require(self.device is not None, "device",
                     "readout error model needs device fidelities")
        if self.noise_spec().any_enabled and self.model == "effective_full":
            _require(self.device is not None, "device",
                     "per-qubit noise rates come from the device table")
        duration = self.schedule.duration_ns
        for t in self.checkpoints():
            _require(0 <= t <= duration + 1e-9, "integrator",
                     f"checkpoint {t} ns outside [0, {duration}] ns")
        _require(self.beta_points >= 8, "beta_points",
                 "need at least 8 fringe samples")

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "model": self.model,
            "n_qubits": self.n_qubits,
            "schedule": asdict(self.schedule),
            "integrator": {
                "dt_ns": self.integrator.dt_ns,
                "checkpoint_spacing_ns": self.integrator.checkpoint_spacing_ns,
                "checkpoint_times_ns":
                    list(self.integrator.checkpoint_times_ns)
                    if self.integrator.checkpoint_times_ns is not None
                    else None,
            },
            "noise": dict(self.noise),
            "observables": list(self.observables),
            "beta_points": self.beta_points,
            "wigner_grid": {
                "n_theta": self.wigner_grid.n_theta,
                "n_phi": self.wigner_grid.n_phi,
                "normalized": self.wigner_grid.normalized,
                "times_ns": list(self.wigner_grid.times_ns)
                            if self.wigner_grid.times_ns is not None else None,
            },
            "n_max": self.n_max,
            "apply_readout_error": self.apply_readout_error,
            "seed": self.seed,
        }
        if self.lambda_mhz_over_2pi is not None:
            out["lambda_mhz_over_2pi"] = self.lambda_mhz_over_2pi
        if self.device is not None:
            out["device"] = self.device
        return out


@dataclass(frozen=True)
class PairSwapConfig:
    """Two-qubit exchange calibration scan across operating points."""

    device: str | dict = "reference"
    pair: tuple[int, int] = (1, 4)
    operating_points_ghz_over_2pi: tuple[float, ...] = (5.6895, 5.66, 5.60)
    models: tuple[str, ...] = ("pairwise", "circuit_qed")
    duration_ns: float = 400.0
    sample_spacing_ns: float = 0.5
    dt_ns: float = 0.005
    n_max: int = 3

    def device_spec(self) -> DeviceSpec:
        return device_from_dict(self.device, "device")

    @classmethod
    def from_dict(cls, d: dict) -> "PairSwapConfig":
        known = {"device", "pair", "operating_points_ghz_over_2pi", "models",
                 "duration_ns", "sample_spacing_ns", "dt_ns", "n_max"}
        for k in d:
            _require(k in known, k, "unknown key")
        cfg = cls(
            device=d.get("device", "reference"),
            pair=tuple(d.get("pair", (1, 4))),
            operating_points_ghz_over_2pi=tuple(
                d.get("operating_points_ghz_over_2pi", (5.6895, 5.66, 5.60))),
            models=tuple(d.get("models", ("pairwise", "circuit_qed"))),
            duration_ns=d.get("duration_ns", 400.0),
            sample_spacing_ns=d.get("sample_spacing_ns", 0.5),
            dt_ns=d.get("dt_ns", 0.005),
            n_max=d.get("n_max", 3),
        )
        _require(len(cfg.pair) == 2 and cfg.pair[0] != cfg.pair[1], "pair",
                 "must be two distinct qubit indices")
        for m in cfg.models:
            _require(m in ("pairwise", "circuit_qed"), "models",
                     f"unknown pair-swap model {m!r}")
        _require(len(cfg.operating_points_ghz_over_2pi) >= 1,
                 "operating_points_ghz_over_2pi", "need at least one point")
        return cfg

    def to_dict(self) -> dict:
        return {
            "device": self.device,
            "pair": list(self.pair),
            "operating_points_ghz_over_2pi":
                list(self.operating_points_ghz_over_2pi),
            "models": list(self.models),
            "duration_ns": self.duration_ns,
            "sample_spacing_ns": self.sample_spacing_ns,
            "dt_ns": self.dt_ns,
            "n_max": self.n_max,
        }


def load_experiment_config(path: str | Path) -> ExperimentConfig:
    with open(path) as f:
        return ExperimentConfig.from_dict(json.load(f))
