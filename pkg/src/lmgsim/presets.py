"""Preset catalog reproducing the published experiment and simulation
configurations.

* fig2 / fig3 / fig4 - error-model runs (full qubits-plus-resonator model,
  reference device, T1 decay) emitting the observables of the corresponding
  measured figures.
* s8 - the same error-model run with the full observable set.
* s9 - ideal symmetric-subspace counterpart (uniform coupling 2pi x 3.8 MHz).
* s12 / s13 - 10-qubit ideal extension with the faster tf = 30 ns ramp.
* pairswap - two-qubit exchange calibration scan (rates vs operating point).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .config import ExperimentConfig, IntegratorSpec, PairSwapConfig, \
    ScheduleConfig, WignerGridSpec

__all__ = ["PRESETS", "build_preset", "preset_names"]

Config = Union[ExperimentConfig, PairSwapConfig]

_ERROR_MODEL = dict(
    model="circuit_qed",
    n_qubits=6,
    schedule=ScheduleConfig(omega0_mhz_over_2pi=40.0, tf_ns=60.0,
                            duration_ns=150.0),
    device="reference",
    n_max=3,
    noise={"enable_t1": True, "enable_dephasing": False},
)

_IDEAL_6Q = dict(
    model="effective_dicke",
    n_qubits=6,
    schedule=ScheduleConfig(omega0_mhz_over_2pi=40.0, tf_ns=60.0,
                            duration_ns=150.0),
    lambda_mhz_over_2pi=3.8,
)

_IDEAL_10Q = dict(
    model="effective_dicke",
    n_qubits=10,
    schedule=ScheduleConfig(omega0_mhz_over_2pi=40.0, tf_ns=30.0,
                            duration_ns=150.0),
    lambda_mhz_over_2pi=3.8,
)

_WIGNER_6Q = WignerGridSpec(times_ns=(0.0, 50.0, 100.0, 150.0))
_WIGNER_10Q = WignerGridSpec(times_ns=(0.0, 30.0, 60.0, 150.0))


def _fig2() -> ExperimentConfig:
    return ExperimentConfig(**_ERROR_MODEL, observables=("populations",))


def _fig3() -> ExperimentConfig:
    return ExperimentConfig(**_ERROR_MODEL,
                            observables=("correlations", "fringes"))


def _fig4() -> ExperimentConfig:
    return ExperimentConfig(
        **_ERROR_MODEL, observables=("correlations", "wigner"),
        integrator=IntegratorSpec(
            checkpoint_times_ns=(0.0, 50.0, 100.0, 150.0)),
        wigner_grid=_WIGNER_6Q)


def _s8() -> ExperimentConfig:
    return ExperimentConfig(
        **_ERROR_MODEL,
        observables=("populations", "correlations", "fringes", "wigner"),
        wigner_grid=_WIGNER_6Q)


def _s9() -> ExperimentConfig:
    return ExperimentConfig(
        **_IDEAL_6Q,
        observables=("populations", "correlations", "fringes", "wigner"),
        wigner_grid=_WIGNER_6Q)


def _s12() -> ExperimentConfig:
    return ExperimentConfig(
        **_IDEAL_10Q, observables=("populations", "correlations", "fringes"))


def _s13() -> ExperimentConfig:
    return ExperimentConfig(
        **_IDEAL_10Q, observables=("correlations", "wigner"),
        integrator=IntegratorSpec(
            checkpoint_times_ns=(0.0, 30.0, 60.0, 150.0)),
        wigner_grid=_WIGNER_10Q)


def _pairswap() -> PairSwapConfig:
    return PairSwapConfig()


@dataclass(frozen=True)
class Preset:
    kind: str  # "experiment" | "pairswap"
    description: str
    build: Callable[[], Config]


PRESETS: dict[str, Preset] = {
    "fig2": Preset("experiment",
                   "error-model excitation populations over the quench",
                   _fig2),
    "fig3": Preset("experiment",
                   "error-model transverse fringes, visibility, and pair "
                   "correlation", _fig3),
    "fig4": Preset("experiment",
                   "error-model spin Wigner maps at 0/50/100/150 ns", _fig4),
    "s8": Preset("experiment",
                 "error-model run with the full observable set", _s8),
    "s9": Preset("experiment",
                 "ideal 6-qubit run (uniform coupling 2pi x 3.8 MHz)", _s9),
    "s12": Preset("experiment",
                  "ideal 10-qubit run, tf = 30 ns (curves)", _s12),
    "s13": Preset("experiment",
                  "ideal 10-qubit run, tf = 30 ns (Wigner maps)", _s13),
    "pairswap": Preset("pairswap",
                       "two-qubit exchange-rate scan vs operating point",
                       _pairswap),
}


def preset_names() -> list[str]:
    return list(PRESETS)


def build_preset(name: str) -> Config:
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; known: {preset_names()}")
    return PRESETS[name].build()
