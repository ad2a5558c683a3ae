"""Device parameters, Hamiltonians, quench schedule, and noise operators.

All frequencies are angular (rad/ns) and all times are ns; see `units`.
The sign convention follows the drive-tuning choice omega_o = omega - lambda,
for which the register Hamiltonian is sign * (Omega S_x + lambda S_z^2) and
the quench tracks the highest eigenstate (sign = +1 default).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import units
from .hilbert import (
    HilbertSpace,
    Operator,
    SpaceKind,
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_X,
    SIGMA_Z,
    collective_spin,
    pauli_string,
    resonator_ops,
)

__all__ = [
    "DeviceSpec",
    "QuenchSchedule",
    "NoiseSpec",
    "ScheduledHamiltonian",
    "effective_coupling",
    "lmg_hamiltonian",
    "lmg_quench_hamiltonian",
    "circuit_qed_hamiltonian",
    "circuit_qed_quench_hamiltonian",
    "pair_exchange_rate",
    "pair_exchange_hamiltonian",
    "swap_frame_hamiltonian",
    "quench_omega",
    "lindblad_operators",
    "reference_device",
    "homogeneous_device",
]


@dataclass(frozen=True)
class DeviceSpec:
    """Per-qubit circuit-QED parameters (rad/ns and ns).

    `crosstalk_b` is the symmetric matrix of fixed XX-type couplings with a
    zero diagonal. `omega_q` is the common qubit frequency at the operation
    point after tuning.
    """

    n_qubits: int
    xi: np.ndarray
    omega_b: float
    omega_o: float
    omega_q: float
    t1: np.ndarray
    t2: np.ndarray
    f_g: np.ndarray
    f_e: np.ndarray
    crosstalk_b: np.ndarray

    def __post_init__(self):
        for name in ("xi", "t1", "t2", "f_g", "f_e"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            if arr.shape != (self.n_qubits,):
                raise ValueError(f"{name} must have shape ({self.n_qubits},)")
        b = np.asarray(self.crosstalk_b, dtype=float)
        object.__setattr__(self, "crosstalk_b", b)
        if b.shape != (self.n_qubits, self.n_qubits):
            raise ValueError("crosstalk_b must be N x N")
        if np.max(np.abs(b - b.T)) > 0 or np.max(np.abs(np.diag(b))) > 0:
            raise ValueError("crosstalk_b must be symmetric with zero diagonal")
        if np.any(self.xi <= 0):
            raise ValueError("couplings xi must be positive")
        if np.any(self.t1 <= 0) or np.any(self.t2 <= 0):
            raise ValueError("T1 and T2 must be positive")
        for name in ("f_g", "f_e"):
            f = getattr(self, name)
            if np.any(f <= 0) or np.any(f > 1):
                raise ValueError(f"{name} must lie in (0, 1]")
        if abs(self.omega_o - self.omega_b) <= 5 * np.max(self.xi):
            raise ValueError(
                "operating point is not dispersive: |omega_o - omega_b| must "
                "exceed 5 * max(xi)"
            )

    @property
    def detuning(self) -> float:
        """Delta = omega_o - omega_b (negative when operating below the bus)."""
        return self.omega_o - self.omega_b

    def subset(self, indices: Sequence[int]) -> "DeviceSpec":
        """Restrict the device to the given qubits (e.g. a swap pair)."""
        idx = list(indices)
        return DeviceSpec(
            n_qubits=len(idx),
            xi=self.xi[idx],
            omega_b=self.omega_b,
            omega_o=self.omega_o,
            omega_q=self.omega_q,
            t1=self.t1[idx],
            t2=self.t2[idx],
            f_g=self.f_g[idx],
            f_e=self.f_e[idx],
            crosstalk_b=self.crosstalk_b[np.ix_(idx, idx)],
        )


@dataclass(frozen=True)
class QuenchSchedule:
    """Exponential drive ramp Omega(tau) = omega0 * exp(-tau/tf), switched
    off beyond `duration`."""

    omega0: float
    tf: float
    duration: float
    drive_sign: int = 1

    def __post_init__(self):
        if self.omega0 < 0:
            raise ValueError("omega0 must be >= 0")
        if self.tf <= 0:
            raise ValueError("tf must be > 0")
        if self.duration < 0:
            raise ValueError("duration must be >= 0")
        if self.drive_sign not in (-1, 1):
            raise ValueError("drive_sign must be +1 or -1")

    def omega(self, tau: float) -> float:
        return quench_omega(tau, self)


def quench_omega(tau: float, schedule: QuenchSchedule) -> float:
    """Drive amplitude at quench time tau (rad/ns)."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if tau > schedule.duration:
        return 0.0
    return schedule.omega0 * math.exp(-tau / schedule.tf)


@dataclass(frozen=True)
class NoiseSpec:
    enable_t1: bool = False
    enable_dephasing: bool = False

    @property
    def any_enabled(self) -> bool:
        return self.enable_t1 or self.enable_dephasing


def effective_coupling(xi: float, detuning: float) -> float:
    """Resonator-mediated coupling lambda = xi^2 / |Delta|."""
    if detuning == 0:
        raise ValueError("detuning must be nonzero")
    return xi ** 2 / abs(detuning)


def lmg_hamiltonian(space: HilbertSpace, omega: float, lam: float,
                    sign: int = 1) -> Operator:
    """sign * (omega * S_x + lam * S_z^2) on a Dicke or FullSpin space."""
    if space.kind not in (SpaceKind.DICKE, SpaceKind.FULL_SPIN):
        raise ValueError("lmg_hamiltonian needs a Dicke or FullSpin space")
    s = collective_spin(space)
    h = sign * (omega * s.sx.matrix + lam * (s.sz.matrix @ s.sz.matrix))
    return Operator(space, h, hermitian_hint=True)


@dataclass(frozen=True)
class ScheduledHamiltonian:
    """H(t) = static + amplitude(t) * drive; callable as t -> Operator.

    The affine split lets the integrator precompute both parts instead of
    assembling a matrix per RK4 stage.
    """

    static: Operator
    drive: Operator
    amplitude: Callable[[float], float]

    def __call__(self, t: float) -> Operator:
        m = self.static.matrix + self.amplitude(t) * self.drive.matrix
        return Operator(self.static.space, m)

    @property
    def space(self) -> HilbertSpace:
        return self.static.space


def lmg_quench_hamiltonian(space: HilbertSpace, schedule: QuenchSchedule,
                           lam: float, sign: int = 1) -> ScheduledHamiltonian:
    """Quench Hamiltonian sign * (Omega(tau) S_x + lam S_z^2)."""
    s = collective_spin(space)
    static = Operator(space, sign * lam * (s.sz.matrix @ s.sz.matrix),
                      hermitian_hint=True)
    drive = Operator(space, float(sign) * s.sx.matrix, hermitian_hint=True)
    return ScheduledHamiltonian(static, drive,
                                lambda t: quench_omega(t, schedule))


def _circuit_qed_parts(device: DeviceSpec, n_max: int):
    space = HilbertSpace.spin_resonator(device.n_qubits, n_max)
    n = device.n_qubits
    dim = space.dim
    a = resonator_ops(space).a.matrix
    h0 = (device.omega_b - device.omega_o) * (a.conj().T @ a)
    delta_q = device.omega_q - device.omega_o
    for j in range(n):
        pe = pauli_string(space, [(j, "+")]).matrix @ \
            pauli_string(space, [(j, "-")]).matrix
        h0 += delta_q * pe
        spj = pauli_string(space, [(j, "+")]).matrix
        h0 += device.xi[j] * (spj @ a + a.conj().T @ spj.conj().T)
    for j in range(n):
        for k in range(j + 1, n):
            b = device.crosstalk_b[j, k]
            if b != 0.0:
                ex = pauli_string(space, [(j, "+"), (k, "-")]).matrix
                h0 += b * (ex + ex.conj().T)
    drive = np.zeros((dim, dim), dtype=complex)
    for j in range(n):
        drive += 0.5 * pauli_string(space, [(j, "x")]).matrix
    return space, h0, drive


def circuit_qed_hamiltonian(device: DeviceSpec, omega_drive: float,
                            n_max: int = 3) -> Operator:
    """Rotating-frame (at omega_o) qubits-plus-resonator Hamiltonian.

    H' = (omega_b - omega_o) a^dag a + sum_j (omega_q - omega_o) |e>_j<e|
         + sum_j xi_j (sigma_j^+ a + sigma_j^- a^dag)
         + (omega_drive / 2) sum_j sigma_j^x
         + sum_{j<k} b_jk (sigma_j^+ sigma_k^- + h.c.)
    """
    space, h0, drive = _circuit_qed_parts(device, n_max)
    return Operator(space, h0 + omega_drive * drive, hermitian_hint=True)


def circuit_qed_quench_hamiltonian(device: DeviceSpec,
                                   schedule: QuenchSchedule,
                                   n_max: int = 3) -> ScheduledHamiltonian:
    space, h0, drive = _circuit_qed_parts(device, n_max)
    return ScheduledHamiltonian(
        Operator(space, h0, hermitian_hint=True),
        Operator(space, float(schedule.drive_sign) * drive, hermitian_hint=True),
        lambda t: quench_omega(t, schedule),
    )


def pair_exchange_rate(device: DeviceSpec, j: int, k: int) -> float:
    """Second-order virtual-exchange rate xi_j xi_k / Delta' + b_jk (signed)."""
    return device.xi[j] * device.xi[k] / device.detuning + device.crosstalk_b[j, k]


def pair_exchange_hamiltonian(rate: float) -> Operator:
    """Two-qubit effective swap Hamiltonian rate * (|eg><ge| + |ge><eg|)."""
    space = HilbertSpace.full_spin(2)
    ex = pauli_string(space, [(0, "+"), (1, "-")]).matrix
    return Operator(space, rate * (ex + ex.conj().T), hermitian_hint=True)


def swap_frame_hamiltonian(space: HilbertSpace, lam: float,
                           omega: float) -> Callable[[float], Operator]:
    """Swap interaction in the frame co-rotating with the drive.

    Returns t -> (lam/2) [S_x^2 - cos(2 omega t)(S_z^2 - S_y^2)
    + sin(2 omega t)(S_z S_y + S_y S_z)]; its average over a drive period
    pi/omega is lam S_x^2 / 2.
    """
    s = collective_spin(space)
    sx2 = s.sx.matrix @ s.sx.matrix
    szz_yy = s.sz.matrix @ s.sz.matrix - s.sy.matrix @ s.sy.matrix
    szy = s.sz.matrix @ s.sy.matrix + s.sy.matrix @ s.sz.matrix

    def h(t: float) -> Operator:
        m = 0.5 * lam * (sx2 - math.cos(2 * omega * t) * szz_yy
                         + math.sin(2 * omega * t) * szy)
        return Operator(space, m, hermitian_hint=True)

    return h


def lindblad_operators(device: DeviceSpec, noise: NoiseSpec,
                       space: HilbertSpace) -> list[Operator]:
    """Collapse operators with rates absorbed (L_k = sqrt(rate) * op).

    T1 decay gives sqrt(1/T1_j) sigma_j^-; pure dephasing gives
    sqrt(gamma_phi_j / 2) sigma_j^z with gamma_phi = 1/T2 - 1/(2 T1),
    clamped to zero (with a warning) if T2 > 2 T1.
    """
    if space.kind is SpaceKind.DICKE:
        raise ValueError("per-qubit noise needs a FullSpin or SpinResonator space")
    if space.n_qubits != device.n_qubits:
        raise ValueError("space and device qubit counts differ")
    ops: list[Operator] = []
    if noise.enable_t1:
        for j in range(device.n_qubits):
            op = pauli_string(space, [(j, "-")])
            ops.append(math.sqrt(1.0 / device.t1[j]) * op)
    if noise.enable_dephasing:
        for j in range(device.n_qubits):
            gamma_phi = 1.0 / device.t2[j] - 1.0 / (2.0 * device.t1[j])
            if gamma_phi < 0:
                warnings.warn(
                    f"qubit {j}: T2 > 2*T1, pure-dephasing rate clamped to 0",
                    stacklevel=2,
                )
                continue
            op = pauli_string(space, [(j, "z")])
            ops.append(math.sqrt(gamma_phi / 2.0) * op)
    return ops


# ---------------------------------------------------------------------------
# device presets

_REFERENCE_XI_MHZ = (19.56, 19.78, 15.98, 19.24, 19.88, 14.51)
_REFERENCE_T1_US = (17.8, 19.1, 15.5, 13.7, 27.5, 22.9)
_REFERENCE_T2_US = (3.4, 3.6, 1.7, 3.4, 2.0, 4.7)
_REFERENCE_F_G = (0.85, 0.93, 0.85, 0.83, 0.88, 0.84)
_REFERENCE_F_E = (0.82, 0.83, 0.85, 0.70, 0.81, 0.81)
_REFERENCE_OMEGA_B_GHZ = 5.796
_REFERENCE_OMEGA_O_GHZ = 5.6895
_REFERENCE_B_MHZ = -0.27


def reference_device(crosstalk_b_mhz: float | None = None) -> DeviceSpec:
    """The characterized six-qubit device.

    The single published XX crosstalk value is applied to every pair unless
    overridden. omega_q is placed at omega_o + mean_j(xi_j^2)/|Delta| so the
    mean second-order qubit shift cancels (the omega_o = omega - lambda
    tuning choice).
    """
    xi = np.array([units.from_mhz(x) for x in _REFERENCE_XI_MHZ])
    omega_b = units.from_ghz(_REFERENCE_OMEGA_B_GHZ)
    omega_o = units.from_ghz(_REFERENCE_OMEGA_O_GHZ)
    lam_bar = float(np.mean(xi ** 2)) / abs(omega_o - omega_b)
    b = units.from_mhz(_REFERENCE_B_MHZ if crosstalk_b_mhz is None
                       else crosstalk_b_mhz)
    bmat = np.full((6, 6), b)
    np.fill_diagonal(bmat, 0.0)
    return DeviceSpec(
        n_qubits=6,
        xi=xi,
        omega_b=omega_b,
        omega_o=omega_o,
        omega_q=omega_o + lam_bar,
        t1=np.array([units.from_us(t) for t in _REFERENCE_T1_US]),
        t2=np.array([units.from_us(t) for t in _REFERENCE_T2_US]),
        f_g=np.array(_REFERENCE_F_G),
        f_e=np.array(_REFERENCE_F_E),
        crosstalk_b=bmat,
    )


def homogeneous_device(n_qubits: int, xi: float, detuning: float,
                       t1: float = 20000.0, t2: float = 3000.0,
                       crosstalk_b: float = 0.0) -> DeviceSpec:
    """Idealized device with equal couplings (validity-check configuration).

    `detuning` is omega_o - omega_b (rad/ns, negative below the bus);
    omega_q sits at omega_o + xi^2/|detuning|.
    """
    omega_b = units.from_ghz(_REFERENCE_OMEGA_B_GHZ)
    omega_o = omega_b + detuning
    lam = effective_coupling(xi, detuning)
    bmat = np.full((n_qubits, n_qubits), crosstalk_b)
    np.fill_diagonal(bmat, 0.0)
    return DeviceSpec(
        n_qubits=n_qubits,
        xi=np.full(n_qubits, xi),
        omega_b=omega_b,
        omega_o=omega_o,
        omega_q=omega_o + lam,
        t1=np.full(n_qubits, t1),
        t2=np.full(n_qubits, t2),
        f_g=np.ones(n_qubits),
        f_e=np.ones(n_qubits),
        crosstalk_b=bmat,
    )
