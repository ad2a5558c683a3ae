"""Static analysis of the collective-spin Hamiltonian: parity-resolved
eigendecomposition, degeneracy scans, perturbative level shifts in the
strong-coupling regime, and adiabaticity diagnostics along a quench.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .dynamics import TrajectoryRecord
from .hilbert import HilbertSpace, Operator, parity_operator
from .model import lmg_hamiltonian

__all__ = [
    "ScanTarget",
    "SpectrumScan",
    "PerturbativeShifts",
    "eigendecompose_with_parity",
    "degeneracy_scan",
    "perturbative_shifts",
    "adiabaticity_overlap",
]

_COMMUTE_TOL = 1e-10


class ScanTarget(enum.Enum):
    GROUND_OF_H = "ground_of_h"
    HIGHEST_OF_H_EFF = "highest_of_h_eff"


@dataclass(frozen=True)
class SpectrumScan:
    """Per-control-value spectra with parity labels and the extremal gap."""

    omega_over_lambda: np.ndarray
    eigenvalues: np.ndarray      # shape (n_points, dim), ascending
    parities: np.ndarray         # shape (n_points, dim), +-1
    extremal_splitting: np.ndarray
    target: ScanTarget


@dataclass(frozen=True)
class PerturbativeShifts:
    """Second-order drive-induced shifts eta_m of the m-levels.

    eta_{+-J} = -2 J Omega^2 / [(2J - 1) lambda]; for |m| < J,
    eta_m = Omega_m^2/lambda_m - Omega_{m-1}^2/lambda_{m-1} with
    lambda_m = (2m + 1) lambda and Omega_m = Omega sqrt((J-m)(J+m+1)).
    """

    m_values: np.ndarray
    eta: np.ndarray
    omega: float
    lam: float
    j: float

    def eta_of(self, m: float) -> float:
        idx = int(round(m + self.j))
        return float(self.eta[idx])


def eigendecompose_with_parity(h: Operator, p: Operator):
    """Simultaneous eigenbasis of H and a commuting parity operator.

    Returns (eigenvalues ascending, eigenvectors as columns, parity labels).
    Degenerate H-blocks are rotated to make each eigenvector parity-definite.
    """
    comm = h.matrix @ p.matrix - p.matrix @ h.matrix
    if np.max(np.abs(comm)) > _COMMUTE_TOL:
        raise ValueError("H and parity do not commute")
    evals, evecs = np.linalg.eigh(h.matrix)
    scale = max(1.0, float(np.max(np.abs(evals))))
    labels = np.empty(len(evals))
    i = 0
    while i < len(evals):
        j = i + 1
        while j < len(evals) and evals[j] - evals[i] < 1e-8 * scale:
            j += 1
        block = evecs[:, i:j]
        pb = block.conj().T @ p.matrix @ block
        pvals, pvecs = np.linalg.eigh(0.5 * (pb + pb.conj().T))
        evecs[:, i:j] = block @ pvecs
        labels[i:j] = pvals
        i = j
    return evals, evecs, labels


def degeneracy_scan(n_qubits: int, lam: float,
                    omega_values: Sequence[float],
                    target: ScanTarget = ScanTarget.HIGHEST_OF_H_EFF,
                    ) -> SpectrumScan:
    """Scan the splitting between the two extremal parity sectors vs Omega.

    The splitting vanishes as Omega/lambda -> 0 (the degenerate symmetry-
    broken pair) and opens as the drive dominates.
    """
    omegas = np.asarray(list(omega_values), dtype=float)
    if np.any(omegas < 0) or np.any(np.diff(omegas) < 0):
        raise ValueError("omega_values must be nonnegative and sorted")
    space = HilbertSpace.dicke(n_qubits)
    p = parity_operator(space)
    sign = -1 if target is ScanTarget.GROUND_OF_H else 1
    dim = space.dim
    all_evals = np.empty((omegas.size, dim))
    all_par = np.empty((omegas.size, dim))
    split = np.empty(omegas.size)
    for i, om in enumerate(omegas):
        h = lmg_hamiltonian(space, om, lam, sign=sign)
        evals, _, labels = eigendecompose_with_parity(h, p)
        all_evals[i] = evals
        all_par[i] = labels
        if target is ScanTarget.GROUND_OF_H:
            split[i] = evals[1] - evals[0]
        else:
            split[i] = evals[-1] - evals[-2]
    return SpectrumScan(omega_over_lambda=omegas / lam, eigenvalues=all_evals,
                        parities=all_par, extremal_splitting=split,
                        target=target)


def perturbative_shifts(n_qubits: int, omega: float,
                        lam: float) -> PerturbativeShifts:
    """Drive-induced level shifts for Omega << lambda (see class docstring)."""
    if lam == 0:
        raise ValueError("lam must be nonzero")
    j = n_qubits / 2.0
    m_values = np.arange(n_qubits + 1) - j

    def omega_m(m: float) -> float:
        return omega * math.sqrt((j - m) * (j + m + 1))

    def lambda_m(m: float) -> float:
        lm = (2 * m + 1) * lam
        if lm == 0:
            raise ZeroDivisionError(
                f"lambda_m vanishes at m={m}; shifts undefined")
        return lm

    eta = np.empty(n_qubits + 1)
    for idx, m in enumerate(m_values):
        if m == j or m == -j:
            eta[idx] = -2 * j * omega ** 2 / ((2 * j - 1) * lam)
        else:
            eta[idx] = (omega_m(m) ** 2 / lambda_m(m)
                        - omega_m(m - 1) ** 2 / lambda_m(m - 1))
    return PerturbativeShifts(m_values=m_values, eta=eta, omega=omega,
                              lam=lam, j=j)


def adiabaticity_overlap(trajectory: TrajectoryRecord, h_of_t,
                         degeneracy_tol: float = 1e-6) -> np.ndarray:
    """|<psi(t)|extremal eigenspace of H(t)>|^2 at each checkpoint.

    Tracks the extremal (highest) eigenstate of the instantaneous
    Hamiltonian by maximal overlap with the previously tracked vector; when
    the top gap closes below `degeneracy_tol` the overlap is taken with the
    two-dimensional extremal eigenspace instead.
    """
    overlaps = np.empty(len(trajectory.checkpoints))
    prev: np.ndarray | None = None
    h_call = h_of_t if callable(h_of_t) else None
    if h_call is None:
        raise ValueError("h_of_t must be callable (t -> Operator)")
    for i, (t, state) in enumerate(trajectory.checkpoints):
        if not state.is_pure:
            raise ValueError("adiabaticity_overlap needs a pure trajectory")
        h = h_call(t)
        evals, evecs = np.linalg.eigh(h.matrix)
        gap = evals[-1] - evals[-2]
        psi = state.data
        if gap < degeneracy_tol:
            block = evecs[:, -2:]
            overlaps[i] = float(np.sum(np.abs(block.conj().T @ psi) ** 2))
            prev = None  # tracking resumes once the gap reopens
        else:
            top = evecs[:, -1]
            if prev is not None:
                # keep following the branch we were on through crossings
                cands = evecs[:, -2:]
                scores = np.abs(cands.conj().T @ prev)
                top = cands[:, int(np.argmax(scores))]
            overlaps[i] = float(abs(np.vdot(top, psi)) ** 2)
            prev = top
    return overlaps
