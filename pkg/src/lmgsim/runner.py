"""Experiment orchestration: simulation dispatch, observable extraction,
deterministic CSV emission, and run manifests with checksums.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.optimize

from . import units
from .config import ExperimentConfig, PairSwapConfig
from .dynamics import IntegratorConfig, TrajectoryRecord, evolve_lindblad, \
    evolve_pure
from .hilbert import (
    HilbertSpace,
    QuantumState,
    SpaceKind,
    basis_state,
    parity_operator,
    product_plus_state,
    ptrace_resonator,
    expectation,
)
from .model import (
    DeviceSpec,
    circuit_qed_quench_hamiltonian,
    lindblad_operators,
    lmg_quench_hamiltonian,
    pair_exchange_hamiltonian,
    pair_exchange_rate,
)
from .observables import (
    apply_readout_error,
    coherence_element,
    excitation_populations,
    fringe_fit,
    ghz_fidelity,
    longitudinal_correlation,
    transverse_correlation,
    wigner,
)
from .spectrum import ScanTarget, degeneracy_scan

__all__ = [
    "RunManifest",
    "PairSwapResult",
    "PairSwapScan",
    "run",
    "run_comparison",
    "run_pair_swap",
    "pair_swap_scan",
    "run_spectrum_scan",
    "default_out_dir",
]

OUT_DIR_ENV = "LMGSIM_OUT_DIR"


def default_out_dir() -> Path:
    return Path(os.environ.get(OUT_DIR_ENV, "out"))


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".12g")


def _write_csv(path: Path, header: Sequence[str],
               rows: Iterable[Sequence]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(_fmt(x) for x in row) + "\n")


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


@dataclass
class RunManifest:
    """Config echo, code version, diagnostics, and checksummed outputs."""

    config: dict
    version: str
    wall_clock_s: float
    norm_drift: float
    warnings: list[str] = field(default_factory=list)
    outputs: list[dict] = field(default_factory=list)

    def add_output(self, path: Path):
        self.outputs.append({
            "path": path.name,
            "sha256": _sha256(path),
            "bytes": path.stat().st_size,
        })

    def write(self, path: Path):
        payload = {
            "config": self.config,
            "version": self.version,
            "wall_clock_s": self.wall_clock_s,
            "norm_drift": self.norm_drift,
            "warnings": self.warnings,
            "outputs": self.outputs,
        }
        with open(path, "w") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")


def _initial_state(config: ExperimentConfig) -> QuantumState:
    n = config.n_qubits
    if config.model == "effective_dicke":
        return product_plus_state(HilbertSpace.dicke(n))
    if config.model == "effective_full":
        return product_plus_state(HilbertSpace.full_spin(n))
    return product_plus_state(HilbertSpace.spin_resonator(n, config.n_max))


def _hamiltonian(config: ExperimentConfig, space: HilbertSpace):
    sched = config.schedule.build()
    if config.model == "circuit_qed":
        return circuit_qed_quench_hamiltonian(config.device_spec(), sched,
                                              n_max=config.n_max)
    lam = units.from_mhz(config.lambda_mhz_over_2pi)
    return lmg_quench_hamiltonian(space, sched, lam,
                                  sign=config.schedule.drive_sign)


def simulate(config: ExperimentConfig,
             dt_override: float | None = None) -> TrajectoryRecord:
    """Integrate the configured quench and return the raw trajectory."""
    psi0 = _initial_state(config)
    h = _hamiltonian(config, psi0.space)
    dt = dt_override if dt_override is not None else config.dt_ns()
    cfg = IntegratorConfig(dt=dt, checkpoint_times=config.checkpoints())
    noise = config.noise_spec()
    if noise.any_enabled:
        lindblads = lindblad_operators(config.device_spec(), noise,
                                       psi0.space)
        return evolve_lindblad(h, psi0.to_density(), lindblads, cfg)
    return evolve_pure(h, psi0, cfg)


def _bitstring_distribution(state: QuantumState) -> np.ndarray:
    reg = ptrace_resonator(state) \
        if state.space.kind is SpaceKind.SPIN_RESONATOR else state
    if reg.is_pure:
        return np.abs(reg.data) ** 2
    return np.clip(np.real(np.diag(reg.data)), 0.0, None)


def _wigner_parallel(state: QuantumState, thetas: np.ndarray,
                     phis: np.ndarray, normalized: bool,
                     threads: int) -> np.ndarray:
    """Theta rows are independent; assembly order is fixed by row index."""
    if threads <= 1 or len(thetas) < 4:
        return wigner(state, thetas, phis, normalized=normalized).values
    chunks = np.array_split(np.arange(len(thetas)), threads * 2)
    values = np.empty((len(thetas), len(phis)))

    def job(idx):
        return wigner(state, thetas[idx], phis, normalized=normalized).values

    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as ex:
        for idx, block in zip(chunks, ex.map(job, chunks)):
            if len(idx):
                values[idx] = block
    return values


def run(config: ExperimentConfig, out_dir: str | Path | None = None,
        threads: int | None = None, dt_override: float | None = None,
        label: str | None = None) -> RunManifest:
    """Quench run: prepare the drive-aligned product state, integrate,
    evaluate the requested observables at every checkpoint, and write one
    CSV per observable plus a manifest."""
    from . import __version__

    t_start = time.monotonic()
    out = Path(out_dir) if out_dir is not None else default_out_dir()
    out.mkdir(parents=True, exist_ok=True)
    threads = threads or os.cpu_count() or 1

    traj = simulate(config, dt_override=dt_override)
    manifest = RunManifest(config=config.to_dict(), version=__version__,
                           wall_clock_s=0.0, norm_drift=traj.norm_drift,
                           warnings=list(traj.warnings))
    if label:
        manifest.config["preset"] = label

    device = config.device_spec() if config.device is not None else None
    n = config.n_qubits
    times = traj.times
    states = traj.states

    if "populations" in config.observables:
        rows = []
        for t, s in zip(times, states):
            rows.append([t, *excitation_populations(s)])
        path = out / "populations.csv"
        _write_csv(path, ["time_ns"] + [f"p{k}" for k in range(n + 1)], rows)
        manifest.add_output(path)
        if config.apply_readout_error:
            rows = []
            counts = np.array([bin(i).count("1") for i in range(2 ** n)])
            for t, s in zip(times, states):
                dist = apply_readout_error(_bitstring_distribution(s), device)
                grouped = np.zeros(n + 1)
                np.add.at(grouped, counts, dist)
                rows.append([t, *grouped])
            path = out / "populations_readout.csv"
            _write_csv(path, ["time_ns"] + [f"p{k}" for k in range(n + 1)],
                       rows)
            manifest.add_output(path)

    if "correlations" in config.observables:
        rows = []
        par_op = parity_operator(states[0].space)
        for t, s in zip(times, states):
            coh = coherence_element(s)
            fid = ghz_fidelity(s)
            rows.append([
                t,
                longitudinal_correlation(s),
                coh.real, coh.imag, abs(coh),
                fid.overlap, fid.population_coherence,
                expectation(s, par_op).real,
            ])
        path = out / "correlations.csv"
        _write_csv(path, ["time_ns", "c2_long", "coherence_re",
                          "coherence_im", "coherence_abs", "ghz_overlap",
                          "ghz_pop_coherence", "parity_x"], rows)
        manifest.add_output(path)

    if "fringes" in config.observables:
        betas = config.beta_grid()
        frows, fitrows = [], []
        for t, s in zip(times, states):
            values = [transverse_correlation(s, b) for b in betas]
            for b, v in zip(betas, values):
                frows.append([t, b, v])
            fit = fringe_fit(betas, values, n)
            fitrows.append([t, fit.amplitude, fit.phase, fit.offset,
                            fit.visibility, fit.coherence_magnitude,
                            fit.residual_rms])
        path = out / "fringes.csv"
        _write_csv(path, ["time_ns", "beta_rad", "value"], frows)
        manifest.add_output(path)
        path = out / "fringe_fits.csv"
        _write_csv(path, ["time_ns", "amplitude", "phase_rad", "offset",
                          "visibility", "coherence_magnitude",
                          "residual_rms"], fitrows)
        manifest.add_output(path)

    if "wigner" in config.observables:
        grid = config.wigner_grid
        wanted = grid.times_ns if grid.times_ns is not None else tuple(times)
        thetas, phis = grid.thetas(), grid.phis()
        rows = []
        for t, s in zip(times, states):
            if not any(abs(t - tw) < 1e-9 for tw in wanted):
                continue
            values = _wigner_parallel(s, thetas, phis, grid.normalized,
                                      threads)
            for i, th in enumerate(thetas):
                for k, ph in enumerate(phis):
                    rows.append([t, th, ph, values[i, k]])
        path = out / "wigner.csv"
        _write_csv(path, ["time_ns", "theta_rad", "phi_rad", "value"], rows)
        manifest.add_output(path)

    manifest.wall_clock_s = time.monotonic() - t_start
    manifest.write(out / "manifest.json")
    return manifest


_COMPARED_SCALARS = ("c2_long", "coherence_abs", "ghz_pop_coherence")


def run_comparison(config_a: ExperimentConfig, config_b: ExperimentConfig,
                   out_dir: str | Path | None = None,
                   threads: int | None = None) -> RunManifest:
    """Side-by-side observable deltas between two runs on one checkpoint
    grid (e.g. error-model vs ideal)."""
    from . import __version__

    if config_a.checkpoints() != config_b.checkpoints():
        raise ValueError("comparison requires identical checkpoint grids")
    if config_a.n_qubits != config_b.n_qubits:
        raise ValueError("comparison requires equal qubit counts")
    t_start = time.monotonic()
    out = Path(out_dir) if out_dir is not None else default_out_dir()
    out.mkdir(parents=True, exist_ok=True)

    traj_a = simulate(config_a)
    traj_b = simulate(config_b)
    n = config_a.n_qubits
    rows = []
    for (t, sa), (_, sb) in zip(traj_a.checkpoints, traj_b.checkpoints):
        pa = excitation_populations(sa)
        pb = excitation_populations(sb)
        for k in range(n + 1):
            rows.append([t, f"p{k}", pa[k], pb[k], pb[k] - pa[k]])
        scal_a = {
            "c2_long": longitudinal_correlation(sa),
            "coherence_abs": abs(coherence_element(sa)),
            "ghz_pop_coherence": ghz_fidelity(sa).population_coherence,
        }
        scal_b = {
            "c2_long": longitudinal_correlation(sb),
            "coherence_abs": abs(coherence_element(sb)),
            "ghz_pop_coherence": ghz_fidelity(sb).population_coherence,
        }
        for key in _COMPARED_SCALARS:
            rows.append([t, key, scal_a[key], scal_b[key],
                         scal_b[key] - scal_a[key]])
    path = out / "comparison.csv"
    _write_csv(path, ["time_ns", "observable", "value_a", "value_b",
                      "delta"], rows)
    manifest = RunManifest(
        config={"a": config_a.to_dict(), "b": config_b.to_dict()},
        version=__version__, wall_clock_s=time.monotonic() - t_start,
        norm_drift=max(traj_a.norm_drift, traj_b.norm_drift),
        warnings=list(traj_a.warnings) + list(traj_b.warnings))
    manifest.add_output(path)
    manifest.write(out / "manifest.json")
    return manifest


@dataclass(frozen=True)
class PairSwapResult:
    model: str
    omega_op: float
    times: np.ndarray
    p_eg: np.ndarray
    p_ge: np.ndarray
    fitted_rate: float     # signed: carries the detuning's sign
    formula_rate: float    # xi_j xi_k / Delta' + b


def run_pair_swap(device: DeviceSpec, pair: Sequence[int], omega_op: float,
                  model: str = "circuit_qed", duration_ns: float = 400.0,
                  sample_spacing_ns: float = 0.5, dt_ns: float = 0.005,
                  n_max: int = 3) -> PairSwapResult:
    """Simulate the |eg> <-> |ge> exchange of one qubit pair biased to
    `omega_op` and fit the oscillation.

    model="circuit_qed" integrates the dispersive qubits-plus-resonator
    pair; model="pairwise" uses the second-order exchange Hamiltonian whose
    rate is xi_j xi_k / Delta' + b (the published calibration model). The
    fitted rate is half the population oscillation frequency, signed by the
    detuning.
    """
    j, k = pair
    sub = device.subset([j, k])
    delta = omega_op - device.omega_b
    pair_dev = DeviceSpec(
        n_qubits=2, xi=sub.xi, omega_b=sub.omega_b, omega_o=omega_op,
        omega_q=omega_op, t1=sub.t1, t2=sub.t2, f_g=sub.f_g, f_e=sub.f_e,
        crosstalk_b=sub.crosstalk_b)  # raises if not dispersive
    formula = sub.xi[0] * sub.xi[1] / delta + sub.crosstalk_b[0, 1]

    if model == "circuit_qed":
        from .model import circuit_qed_hamiltonian
        h = circuit_qed_hamiltonian(pair_dev, omega_drive=0.0, n_max=n_max)
        space = HilbertSpace.spin_resonator(2, n_max)
        vec = np.zeros(space.dim, dtype=complex)
        vec[2 * (n_max + 1)] = 1.0  # |eg> x |0>
        psi0 = QuantumState.pure(space, vec)
    elif model == "pairwise":
        h = pair_exchange_hamiltonian(formula)
        space = HilbertSpace.full_spin(2)
        psi0 = basis_state(space, 2)  # |eg>
    else:
        raise ValueError(f"unknown pair-swap model {model!r}")

    times = np.arange(0.0, duration_ns + sample_spacing_ns / 2,
                      sample_spacing_ns)
    traj = evolve_pure(h, psi0, IntegratorConfig(dt_ns, times))

    if model == "circuit_qed":
        p_eg = np.array([np.sum(np.abs(s.data.reshape(4, n_max + 1)[2]) ** 2)
                         for s in traj.states])
        p_ge = np.array([np.sum(np.abs(s.data.reshape(4, n_max + 1)[1]) ** 2)
                         for s in traj.states])
    else:
        p_eg = np.array([abs(s.data[2]) ** 2 for s in traj.states])
        p_ge = np.array([abs(s.data[1]) ** 2 for s in traj.states])

    def cosine(t, a, w, c):
        return a * np.cos(w * t) + c

    popt, _ = scipy.optimize.curve_fit(
        cosine, traj.times, p_eg, p0=[0.5, 2 * abs(formula), 0.5])
    fitted = float(np.sign(delta) * abs(popt[1]) / 2)
    return PairSwapResult(model=model, omega_op=omega_op, times=traj.times,
                          p_eg=p_eg, p_ge=p_ge, fitted_rate=fitted,
                          formula_rate=float(formula))


@dataclass(frozen=True)
class PairSwapScan:
    results: tuple[PairSwapResult, ...]
    x_values: tuple[float, ...]       # xi_j / Delta' per operating point
    slope: float                      # estimates xi_k
    intercept: float                  # estimates b


def pair_swap_scan(device: DeviceSpec, pair: Sequence[int],
                   operating_points: Sequence[float],
                   model: str = "pairwise", **kwargs) -> PairSwapScan:
    """Exchange rate vs xi_j/Delta' across operating points with a linear
    fit; the slope estimates xi_k and the intercept the XX crosstalk b."""
    j, _ = pair
    results = []
    xs = []
    for omega_op in operating_points:
        res = run_pair_swap(device, pair, omega_op, model=model, **kwargs)
        results.append(res)
        xs.append(device.xi[j] / (omega_op - device.omega_b))
    slope, intercept = np.polyfit(xs, [r.fitted_rate for r in results], 1)
    return PairSwapScan(results=tuple(results), x_values=tuple(xs),
                        slope=float(slope), intercept=float(intercept))


def run_pair_swap_preset(cfg: PairSwapConfig,
                         out_dir: str | Path | None = None) -> RunManifest:
    """Run the configured scan for every requested model and emit CSVs."""
    from . import __version__

    t_start = time.monotonic()
    out = Path(out_dir) if out_dir is not None else default_out_dir()
    out.mkdir(parents=True, exist_ok=True)
    device = cfg.device_spec()
    osc_rows, rate_rows, fit_rows = [], [], []
    for model in cfg.models:
        scan = pair_swap_scan(
            device, cfg.pair,
            [units.from_ghz(f) for f in cfg.operating_points_ghz_over_2pi],
            model=model, duration_ns=cfg.duration_ns,
            sample_spacing_ns=cfg.sample_spacing_ns, dt_ns=cfg.dt_ns,
            n_max=cfg.n_max)
        for res, x, f_ghz in zip(scan.results, scan.x_values,
                                 cfg.operating_points_ghz_over_2pi):
            for t, peg, pge in zip(res.times, res.p_eg, res.p_ge):
                osc_rows.append([model, f_ghz, t, peg, pge])
            rate_rows.append([model, f_ghz, x,
                              units.to_mhz(res.fitted_rate),
                              units.to_mhz(res.formula_rate)])
        fit_rows.append([model, units.to_mhz(scan.slope),
                         units.to_mhz(scan.intercept)])
    paths = []
    p = out / "pairswap_oscillation.csv"
    _write_csv(p, ["model", "omega_op_ghz_over_2pi", "time_ns", "p_eg",
                   "p_ge"], osc_rows)
    paths.append(p)
    p = out / "pairswap_rates.csv"
    _write_csv(p, ["model", "omega_op_ghz_over_2pi", "xi_over_delta",
                   "fitted_rate_mhz_over_2pi", "formula_rate_mhz_over_2pi"],
               rate_rows)
    paths.append(p)
    p = out / "pairswap_fit.csv"
    _write_csv(p, ["model", "slope_mhz_over_2pi", "intercept_mhz_over_2pi"],
               fit_rows)
    paths.append(p)
    manifest = RunManifest(config=cfg.to_dict(), version=__version__,
                           wall_clock_s=time.monotonic() - t_start,
                           norm_drift=0.0)
    for p in paths:
        manifest.add_output(p)
    manifest.write(out / "manifest.json")
    return manifest


def run_spectrum_scan(n_qubits: int, lambda_mhz: float,
                      omega_over_lambda: Sequence[float],
                      out_dir: str | Path | None = None,
                      threads: int | None = None) -> RunManifest:
    """Parity-labelled spectrum and extremal splitting vs Omega/lambda."""
    from . import __version__

    t_start = time.monotonic()
    out = Path(out_dir) if out_dir is not None else default_out_dir()
    out.mkdir(parents=True, exist_ok=True)
    lam = units.from_mhz(lambda_mhz)
    ratios = list(omega_over_lambda)
    scan = degeneracy_scan(n_qubits, lam, [r * lam for r in ratios],
                           target=ScanTarget.HIGHEST_OF_H_EFF)
    rows = []
    for i, r in enumerate(scan.omega_over_lambda):
        for level in range(scan.eigenvalues.shape[1]):
            rows.append([r, level,
                         units.to_mhz(scan.eigenvalues[i, level]),
                         scan.parities[i, level]])
    p1 = out / "spectrum.csv"
    _write_csv(p1, ["omega_over_lambda", "level",
                    "eigenvalue_mhz_over_2pi", "parity"], rows)
    p2 = out / "spectrum_splitting.csv"
    _write_csv(p2, ["omega_over_lambda", "splitting_mhz_over_2pi"],
               [[r, units.to_mhz(s)] for r, s in
                zip(scan.omega_over_lambda, scan.extremal_splitting)])
    manifest = RunManifest(
        config={"n_qubits": n_qubits, "lambda_mhz_over_2pi": lambda_mhz,
                "omega_over_lambda": ratios},
        version=__version__, wall_clock_s=time.monotonic() - t_start,
        norm_drift=0.0)
    manifest.add_output(p1)
    manifest.add_output(p2)
    manifest.write(out / "manifest.json")
    return manifest
