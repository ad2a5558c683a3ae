"""Measured quantities: populations, correlations, fringes, GHZ fidelity,
and the multi-qubit spin Wigner function.

States on a SpinResonator space are reduced to the qubit register first;
Dicke states are mapped through the symmetric-subspace isometry where a
per-qubit structure is required.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .hilbert import (
    HilbertSpace,
    Operator,
    QuantumState,
    SpaceKind,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    dicke_isometry,
    expectation,
    pauli_string,
    ptrace_resonator,
)
from .model import DeviceSpec

__all__ = [
    "FringeFit",
    "WignerGrid",
    "GhzFidelity",
    "excitation_populations",
    "longitudinal_correlation",
    "transverse_correlation",
    "coherence_element",
    "fringe_fit",
    "wigner",
    "ghz_fidelity",
    "apply_readout_error",
]


def _qubit_register_state(state: QuantumState) -> QuantumState:
    """Reduce to a FullSpin state (partial trace / isometry as needed)."""
    if state.space.kind is SpaceKind.SPIN_RESONATOR:
        return ptrace_resonator(state)
    if state.space.kind is SpaceKind.DICKE:
        v = dicke_isometry(state.space.n_qubits)
        full = HilbertSpace.full_spin(state.space.n_qubits)
        if state.is_pure:
            return QuantumState.pure(full, v @ state.data,
                                     norm_tol=max(state.norm_tol, 1e-8))
        return QuantumState.density(full, v @ state.data @ v.conj().T,
                                    norm_tol=max(state.norm_tol, 1e-8))
    return state


def _bit_counts(n_qubits: int) -> np.ndarray:
    return np.array([bin(i).count("1") for i in range(2 ** n_qubits)])


def excitation_populations(state: QuantumState) -> np.ndarray:
    """P_n for n = 0..N: total probability of n qubits excited."""
    n = state.space.n_qubits
    if state.space.kind is SpaceKind.DICKE:
        if state.is_pure:
            return np.abs(state.data) ** 2
        return np.real(np.diag(state.data)).copy()
    reg = _qubit_register_state(state)
    if reg.is_pure:
        probs = np.abs(reg.data) ** 2
    else:
        probs = np.real(np.diag(reg.data))
    out = np.zeros(n + 1)
    np.add.at(out, _bit_counts(n), probs)
    return out


def longitudinal_correlation(state: QuantumState) -> float:
    """Pair-averaged <sigma_j^z sigma_k^z> over all N(N-1)/2 pairs."""
    n = state.space.n_qubits
    if n < 2:
        raise ValueError("longitudinal correlation needs N >= 2")
    if state.space.kind is SpaceKind.DICKE:
        # operator identity: sum_{j<k} z_j z_k = 2 S_z^2 - (N/2) * identity;
        # the identity term carries the squared norm so drifted trajectory
        # states give the same value as the pairwise route
        m = np.arange(n + 1) - n / 2.0
        if state.is_pure:
            weights = np.abs(state.data) ** 2
        else:
            weights = np.real(np.diag(state.data))
        sz2 = float(np.sum(m ** 2 * weights))
        return (4.0 * sz2 - n * float(np.sum(weights))) / (n * (n - 1))
    reg = _qubit_register_state(state)
    total = 0.0
    for j in range(n):
        for k in range(j + 1, n):
            op = pauli_string(reg.space, [(j, "z"), (k, "z")])
            total += expectation(reg, op).real
    return total / (n * (n - 1) / 2)


def _rotated_sigma(beta: float) -> np.ndarray:
    # Equatorial spin component at angle beta from x. The y part carries a
    # minus sign relative to the right-handed (sigma_z = |e><e| - |g><g|)
    # collective algebra so that the fringes obey
    # C(beta) = 2 |rho_{e..e;g..g}| cos(N beta - arg rho_{e..e;g..g}).
    return math.cos(beta) * SIGMA_X - math.sin(beta) * SIGMA_Y


def _apply_on_qubit(mat2: np.ndarray, arr: np.ndarray, j: int,
                    n: int) -> np.ndarray:
    """Apply a 2x2 matrix to qubit j's row index of a vector or matrix."""
    cols = arr.shape[1] if arr.ndim == 2 else 1
    t = arr.reshape(2 ** j, 2, 2 ** (n - j - 1) * cols)
    out = np.einsum("ab,ibj->iaj", mat2, t)
    return out.reshape(arr.shape)


def _expect_applied(reg: QuantumState, mat2: np.ndarray,
                    targets: Iterable[int]) -> float:
    """Re <prod_{j in targets} (mat2 on qubit j)> for a register state."""
    n = reg.space.n_qubits
    if reg.is_pure:
        vec = reg.data
        for j in targets:
            vec = _apply_on_qubit(mat2, vec, j, n)
        return float(np.vdot(reg.data, vec).real)
    acted = reg.data
    for j in targets:
        acted = _apply_on_qubit(mat2, acted, j, n)
    return float(np.trace(acted).real)


def transverse_correlation(state: QuantumState, beta: float) -> float:
    """<(sigma^beta)^{tensor N}> - prod_j <sigma_j^beta>.

    sigma^beta = cos(beta) sigma_x + sin(beta) sigma_y.
    """
    reg = _qubit_register_state(state)
    n = reg.space.n_qubits
    sb = _rotated_sigma(beta)
    joint = _expect_applied(reg, sb, range(n))
    singles = 1.0
    for j in range(n):
        singles *= _expect_applied(reg, sb, [j])
    return joint - singles


def coherence_element(state: QuantumState) -> complex:
    """The off-diagonal element <e...e| rho |g...g>."""
    reg = _qubit_register_state(state)
    if reg.is_pure:
        return complex(reg.data[-1] * np.conj(reg.data[0]))
    return complex(reg.data[-1, 0])


@dataclass(frozen=True)
class FringeFit:
    """Least-squares fit of A cos(N beta - gamma) + c to a fringe scan.

    `visibility` is the fitted amplitude A; `coherence_magnitude` is A/2,
    reading the fringes as 2 |rho_{e..e;g..g}| cos(N beta - gamma).
    """

    amplitude: float
    phase: float
    offset: float
    residual_rms: float
    n_qubits: int

    @property
    def visibility(self) -> float:
        return self.amplitude

    @property
    def coherence_magnitude(self) -> float:
        return self.amplitude / 2.0


def fringe_fit(betas: Sequence[float], values: Sequence[float],
               n_qubits: int) -> FringeFit:
    """Fit A cos(N beta - gamma) + c by linear least squares.

    The design basis {cos(N beta), sin(N beta), 1} makes the fit unique up
    to the (A >= 0, gamma in [-pi, pi)) normalization.
    """
    b = np.asarray(betas, dtype=float)
    y = np.asarray(values, dtype=float)
    if b.size < 8:
        raise ValueError("need at least 8 fringe samples")
    if b.size != y.size:
        raise ValueError("betas and values differ in length")
    span = b.max() - b.min()
    if span < math.pi / n_qubits:
        raise ValueError("fringe samples must span at least one period")
    design = np.column_stack([np.cos(n_qubits * b), np.sin(n_qubits * b),
                              np.ones_like(b)])
    if np.linalg.matrix_rank(design) < 3:
        raise ValueError("degenerate fringe design matrix")
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    a_cos, a_sin, offset = coef
    amplitude = math.hypot(a_cos, a_sin)
    gamma = math.atan2(a_sin, a_cos)
    if gamma >= math.pi:  # wrap to [-pi, pi)
        gamma -= 2 * math.pi
    resid = y - design @ coef
    rms = float(np.sqrt(np.mean(resid ** 2)))
    return FringeFit(amplitude=amplitude, phase=gamma, offset=float(offset),
                     residual_rms=rms, n_qubits=n_qubits)


@dataclass(frozen=True)
class WignerGrid:
    """Spin Wigner function sampled on a (theta, phi) grid."""

    thetas: np.ndarray
    phis: np.ndarray
    values: np.ndarray  # shape (len(thetas), len(phis)), real
    kernel_normalized: bool


def _wigner_rotation(theta: float, phi: float) -> np.ndarray:
    """U(theta, phi) = exp[-i theta/2 (sin phi sigma_x - cos phi sigma_y)]."""
    axis = math.sin(phi) * SIGMA_X - math.cos(phi) * SIGMA_Y
    return math.cos(theta / 2) * np.eye(2, dtype=complex) \
        - 1j * math.sin(theta / 2) * axis


def wigner(state: QuantumState, thetas: Iterable[float],
           phis: Iterable[float], normalized: bool = False) -> WignerGrid:
    """W(theta, phi) = Tr[rho U Pi U^dag] with Pi = prod_j (1 - sqrt3 sigma_j^z).

    The same single-qubit rotation is applied to every qubit. With
    `normalized` the kernel carries a factor 1/2 per qubit.
    """
    reg = _qubit_register_state(state)
    n = reg.space.n_qubits
    th = np.array(list(thetas), dtype=float)
    ph = np.array(list(phis), dtype=float)
    if th.size == 0 or ph.size == 0:
        raise ValueError("wigner grid must be non-empty")

    # Pi is diagonal: entry for basis state i is prod_j (1 -/+ sqrt3)
    kernel_1 = np.array([1.0 + math.sqrt(3.0), 1.0 - math.sqrt(3.0)])
    if normalized:
        kernel_1 = kernel_1 / 2.0
    diag = np.array([1.0])
    for _ in range(n):
        diag = np.kron(diag, kernel_1)

    pure = reg.is_pure
    values = np.empty((th.size, ph.size))
    for it, theta in enumerate(th):
        for ip, phi in enumerate(ph):
            u = _wigner_rotation(theta, phi)
            ud = u.conj().T
            if pure:
                vec = reg.data
                for j in range(n):
                    vec = _apply_on_qubit(ud, vec, j, n)
                w = float(np.sum(diag * np.abs(vec) ** 2))
            else:
                rho = reg.data
                for j in range(n):
                    t = rho.reshape(2 ** j, 2, 2 ** (n - j - 1) * 2 ** n)
                    rho = np.einsum("ab,ibj->iaj", ud, t).reshape(2 ** n, 2 ** n)
                    t = rho.reshape(2 ** n * 2 ** j, 2, 2 ** (n - j - 1))
                    rho = np.einsum("ab,ibj->iaj", u.T, t).reshape(2 ** n, 2 ** n)
                w_c = complex(np.sum(diag * np.diag(rho)))
                if abs(w_c.imag) > 1e-10:
                    raise AssertionError(
                        f"Wigner value has imaginary residue {w_c.imag:.2e}")
                w = w_c.real
            values[it, ip] = w
    return WignerGrid(thetas=th, phis=ph, values=values,
                      kernel_normalized=normalized)


@dataclass(frozen=True)
class GhzFidelity:
    """Overlap with |GHZ_gamma> plus the population-coherence form."""

    overlap: float
    population_coherence: float
    phase: float


def ghz_fidelity(state: QuantumState,
                 phase: float | str = "optimize") -> GhzFidelity:
    """Fidelity to (|g..g> + e^{i gamma} |e..e>)/sqrt(2).

    With phase="optimize", gamma maximizes the overlap (gamma = arg of the
    coherence element); then overlap and the population-coherence form
    (P_g + P_e)/2 + |rho_{e..e;g..g}| agree for states supported on the two
    extremal components.
    """
    reg = _qubit_register_state(state)
    rho_ge = coherence_element(reg)
    if reg.is_pure:
        p_g = abs(reg.data[0]) ** 2
        p_e = abs(reg.data[-1]) ** 2
    else:
        p_g = float(np.real(reg.data[0, 0]))
        p_e = float(np.real(reg.data[-1, -1]))
    if phase == "optimize":
        gamma = cmath.phase(rho_ge) if rho_ge != 0 else 0.0
    else:
        gamma = float(phase)
    overlap = 0.5 * (p_g + p_e) + (cmath.exp(-1j * gamma) * rho_ge).real
    pop_coh = 0.5 * (p_g + p_e) + abs(rho_ge)
    return GhzFidelity(overlap=float(overlap), population_coherence=pop_coh,
                       phase=gamma)


def apply_readout_error(populations: np.ndarray,
                        device: DeviceSpec) -> np.ndarray:
    """Push a bit-string distribution through per-qubit confusion matrices.

    Qubit j's confusion matrix is [[F_g, 1-F_e], [1-F_g, F_e]] acting on
    (P_g, P_e); columns sum to one so the output remains normalized.
    """
    n = device.n_qubits
    p = np.asarray(populations, dtype=float)
    if p.shape != (2 ** n,):
        raise ValueError(f"expected distribution over {2 ** n} bit strings")
    if np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-8:
        raise ValueError("input is not a probability distribution")
    t = p.reshape((2,) * n)
    for j in range(n):
        conf = np.array([
            [device.f_g[j], 1.0 - device.f_e[j]],
            [1.0 - device.f_g[j], device.f_e[j]],
        ])
        t = np.moveaxis(np.tensordot(conf, t, axes=([1], [j])), 0, j)
    return t.reshape(-1)
