"""Hilbert spaces, collective-spin operators, and symmetric-subspace maps.

Conventions (fixed here, used everywhere downstream):

* Per-qubit basis order is (g, e) and sigma_z = |e><e| - |g><g|, so the
  excited state has sigma_z eigenvalue +1 and |g>^N sits at index 0.
* Tensor order: qubit 0 is the leftmost (most significant) factor; the
  resonator, when present, is the last (least significant) factor.
* The Dicke basis is ordered m = -J .. +J with J = N/2, so index k holds
  the symmetric state with k excitations (m = k - J).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "SpaceKind",
    "HilbertSpace",
    "Operator",
    "Representation",
    "QuantumState",
    "collective_spin",
    "pauli_string",
    "dicke_isometry",
    "parity_operator",
    "resonator_ops",
    "basis_state",
    "product_plus_state",
    "ghz_state",
    "with_vacuum",
    "ptrace_resonator",
    "expectation",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
]

# Single-qubit operators in the (g, e) basis.
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)   # |e><g|
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |g><e|

_PAULI_BY_AXIS = {
    "x": SIGMA_X,
    "y": SIGMA_Y,
    "z": SIGMA_Z,
    "+": SIGMA_PLUS,
    "-": SIGMA_MINUS,
}


class SpaceKind(enum.Enum):
    DICKE = "dicke"
    FULL_SPIN = "full_spin"
    SPIN_RESONATOR = "spin_resonator"


@dataclass(frozen=True)
class HilbertSpace:
    """A simulation Hilbert space; `dim` is derived from kind and sizes."""

    kind: SpaceKind
    n_qubits: int
    n_max: int | None = None

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if self.kind is SpaceKind.SPIN_RESONATOR:
            if self.n_max is None or self.n_max < 1:
                raise ValueError("SpinResonator space needs n_max >= 1")
        elif self.n_max is not None:
            raise ValueError(f"{self.kind.value} space takes no n_max")

    @property
    def dim(self) -> int:
        if self.kind is SpaceKind.DICKE:
            return self.n_qubits + 1
        if self.kind is SpaceKind.FULL_SPIN:
            return 2 ** self.n_qubits
        return 2 ** self.n_qubits * (self.n_max + 1)

    @property
    def j(self) -> float:
        """Total angular momentum J = N/2 of the symmetric sector."""
        return self.n_qubits / 2.0

    @classmethod
    def dicke(cls, n_qubits: int) -> "HilbertSpace":
        return cls(SpaceKind.DICKE, n_qubits)

    @classmethod
    def full_spin(cls, n_qubits: int) -> "HilbertSpace":
        return cls(SpaceKind.FULL_SPIN, n_qubits)

    @classmethod
    def spin_resonator(cls, n_qubits: int, n_max: int = 3) -> "HilbertSpace":
        return cls(SpaceKind.SPIN_RESONATOR, n_qubits, n_max)

    def qubit_space(self) -> "HilbertSpace":
        """The FullSpin space of the qubit register (drops the resonator)."""
        if self.kind is SpaceKind.DICKE:
            raise ValueError("Dicke space has no per-qubit factorization")
        return HilbertSpace.full_spin(self.n_qubits)


@dataclass(frozen=True)
class Operator:
    """A dense operator bound to its space.

    If `hermitian_hint` is set the matrix is checked to be Hermitian to
    1e-12 at construction.
    """

    space: HilbertSpace
    matrix: np.ndarray
    hermitian_hint: bool = False

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        if m.shape != (self.space.dim, self.space.dim):
            raise ValueError(
                f"matrix shape {m.shape} does not match space dim {self.space.dim}"
            )
        if self.hermitian_hint:
            dev = np.max(np.abs(m - m.conj().T))
            if dev >= 1e-12:
                raise ValueError(f"operator marked Hermitian deviates by {dev:.2e}")

    def dagger(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T, self.hermitian_hint)

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return Operator(self.space, self.matrix @ other.matrix)

    def __add__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return Operator(self.space, self.matrix - other.matrix)

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.space, scalar * self.matrix)

    __rmul__ = __mul__

    def _check_space(self, other: "Operator"):
        if other.space != self.space:
            raise ValueError("operators act on different spaces")


class Representation(enum.Enum):
    PURE_VECTOR = "pure_vector"
    DENSITY_MATRIX = "density_matrix"


@dataclass(frozen=True)
class QuantumState:
    """Pure state vector or density matrix over a HilbertSpace.

    `norm_tol` loosens the construction check for integrator outputs,
    whose norm drift is tracked (never silently corrected) upstream.
    """

    space: HilbertSpace
    representation: Representation
    data: np.ndarray
    norm_tol: float = 1e-8

    def __post_init__(self):
        d = np.asarray(self.data, dtype=complex)
        object.__setattr__(self, "data", d)
        dim = self.space.dim
        if self.representation is Representation.PURE_VECTOR:
            if d.shape != (dim,):
                raise ValueError(f"state shape {d.shape}, expected ({dim},)")
            if abs(np.linalg.norm(d) - 1.0) >= self.norm_tol:
                raise ValueError(f"state norm {np.linalg.norm(d)} not within "
                                 f"{self.norm_tol} of 1")
        else:
            if d.shape != (dim, dim):
                raise ValueError(f"density matrix shape {d.shape}, expected "
                                 f"({dim},{dim})")
            if abs(np.trace(d).real - 1.0) >= self.norm_tol:
                raise ValueError(f"trace {np.trace(d)} not within {self.norm_tol} of 1")
            if np.max(np.abs(d - d.conj().T)) >= 1e-10:
                raise ValueError("density matrix not Hermitian to 1e-10")
            lo = np.linalg.eigvalsh(d)[0]
            if lo <= -max(1e-8, self.norm_tol):
                raise ValueError(f"density matrix has eigenvalue {lo:.2e} < 0")

    @property
    def is_pure(self) -> bool:
        return self.representation is Representation.PURE_VECTOR

    def to_density(self) -> "QuantumState":
        if not self.is_pure:
            return self
        rho = np.outer(self.data, self.data.conj())
        return QuantumState(self.space, Representation.DENSITY_MATRIX, rho,
                            norm_tol=max(self.norm_tol, 1e-8))

    @property
    def norm(self) -> float:
        if self.is_pure:
            return float(np.linalg.norm(self.data))
        return float(np.trace(self.data).real)

    @classmethod
    def pure(cls, space: HilbertSpace, vec: np.ndarray, **kw) -> "QuantumState":
        return cls(space, Representation.PURE_VECTOR, vec, **kw)

    @classmethod
    def density(cls, space: HilbertSpace, rho: np.ndarray, **kw) -> "QuantumState":
        return cls(space, Representation.DENSITY_MATRIX, rho, **kw)


class CollectiveSpin(NamedTuple):
    sx: Operator
    sy: Operator
    sz: Operator
    splus: Operator
    sminus: Operator


def _dicke_splus(n: int) -> np.ndarray:
    J = n / 2.0
    sp = np.zeros((n + 1, n + 1), dtype=complex)
    for k in range(n):
        m = k - J
        sp[k + 1, k] = math.sqrt((J - m) * (J + m + 1))
    return sp


def _embed_qubit(op2: np.ndarray, j: int, space: HilbertSpace) -> np.ndarray:
    """op2 on qubit j, identity elsewhere (and on the resonator factor)."""
    n = space.n_qubits
    left = 2 ** j
    right = 2 ** (n - j - 1)
    out = np.kron(np.kron(np.eye(left), op2), np.eye(right))
    if space.kind is SpaceKind.SPIN_RESONATOR:
        out = np.kron(out, np.eye(space.n_max + 1))
    return out.astype(complex)


def collective_spin(space: HilbertSpace) -> CollectiveSpin:
    """S_x, S_y, S_z, S_+, S_- on a Dicke or FullSpin space.

    On FullSpin, S_alpha = (1/2) sum_j sigma_j^alpha; on Dicke the ladder
    matrix elements are sqrt((J-m)(J+m+1)) in the m = -J..J ordering.
    """
    if space.kind is SpaceKind.DICKE:
        sp = _dicke_splus(space.n_qubits)
        sm = sp.conj().T
        sz = np.diag(np.arange(space.n_qubits + 1) - space.j).astype(complex)
    elif space.kind is SpaceKind.FULL_SPIN:
        dim = space.dim
        sp = np.zeros((dim, dim), dtype=complex)
        sz = np.zeros((dim, dim), dtype=complex)
        for j in range(space.n_qubits):
            sp += _embed_qubit(SIGMA_PLUS, j, space)
            sz += 0.5 * _embed_qubit(SIGMA_Z, j, space)
        sm = sp.conj().T
    else:
        raise ValueError("collective_spin supports Dicke and FullSpin spaces only")
    sx = (sp + sm) / 2
    sy = (sp - sm) / 2j
    return CollectiveSpin(
        sx=Operator(space, sx, hermitian_hint=True),
        sy=Operator(space, sy, hermitian_hint=True),
        sz=Operator(space, sz, hermitian_hint=True),
        splus=Operator(space, sp),
        sminus=Operator(space, sm),
    )


def pauli_string(space: HilbertSpace,
                 spec: Sequence[tuple[int, str]]) -> Operator:
    """Tensor product of single-qubit operators, identity elsewhere.

    `spec` is a list of (qubit index, axis) with axis in {x, y, z, +, -}.
    """
    if space.kind is SpaceKind.DICKE:
        raise ValueError("pauli_string needs a per-qubit space (FullSpin or "
                         "SpinResonator)")
    seen = set()
    for idx, axis in spec:
        if idx in seen:
            raise ValueError(f"duplicate qubit index {idx}")
        if not 0 <= idx < space.n_qubits:
            raise ValueError(f"qubit index {idx} out of range for N={space.n_qubits}")
        if axis not in _PAULI_BY_AXIS:
            raise ValueError(f"unknown axis {axis!r}")
        seen.add(idx)
    by_index = {idx: _PAULI_BY_AXIS[axis] for idx, axis in spec}
    out = np.array([[1.0 + 0j]])
    for j in range(space.n_qubits):
        out = np.kron(out, by_index.get(j, np.eye(2, dtype=complex)))
    if space.kind is SpaceKind.SPIN_RESONATOR:
        out = np.kron(out, np.eye(space.n_max + 1, dtype=complex))
    hermitian = all(axis in "xyz" for _, axis in spec)
    return Operator(space, out, hermitian_hint=hermitian)


def dicke_isometry(n_qubits: int) -> np.ndarray:
    """Isometry V from Dicke(N) into FullSpin(N).

    Column k is the normalized equal-weight superposition of all
    computational basis states with k excited qubits, so V*V.conj().T is the
    projector onto the symmetric sector and V.conj().T V = identity.
    """
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    v = np.zeros((2 ** n_qubits, n_qubits + 1), dtype=complex)
    for i in range(2 ** n_qubits):
        k = bin(i).count("1")
        v[i, k] = 1.0
    v /= np.sqrt(np.sum(np.abs(v) ** 2, axis=0))
    return v


def parity_operator(space: HilbertSpace) -> Operator:
    """The joint-parity operator: tensor product of sigma_x on every qubit.

    On the Dicke space this restricts to the m -> -m exchange (the
    antidiagonal), equal to i^N exp(-i pi S_x) on the symmetric sector.
    """
    if space.kind is SpaceKind.DICKE:
        mat = np.fliplr(np.eye(space.dim)).astype(complex)
        return Operator(space, mat, hermitian_hint=True)
    dim_q = 2 ** space.n_qubits
    mat = np.zeros((dim_q, dim_q), dtype=complex)
    for i in range(dim_q):
        mat[dim_q - 1 - i, i] = 1.0  # flipping every bit complements the index
    if space.kind is SpaceKind.SPIN_RESONATOR:
        mat = np.kron(mat, np.eye(space.n_max + 1, dtype=complex))
    return Operator(space, mat, hermitian_hint=True)


class ResonatorOps(NamedTuple):
    a: Operator
    a_dagger: Operator


def resonator_ops(space: HilbertSpace) -> ResonatorOps:
    """Truncated annihilation/creation operators on the resonator factor.

    The truncation drops a|n_max+1>, so [a, a^dag] = 1 everywhere except the
    (n_max, n_max) entry, which is -n_max.
    """
    if space.kind is not SpaceKind.SPIN_RESONATOR:
        raise ValueError("resonator_ops needs a SpinResonator space")
    r = space.n_max + 1
    a_small = np.diag(np.sqrt(np.arange(1, r)), 1).astype(complex)
    a = np.kron(np.eye(2 ** space.n_qubits, dtype=complex), a_small)
    return ResonatorOps(a=Operator(space, a), a_dagger=Operator(space, a.conj().T))


# ---------------------------------------------------------------------------
# canonical states


def basis_state(space: HilbertSpace, index: int, **kw) -> QuantumState:
    vec = np.zeros(space.dim, dtype=complex)
    vec[index] = 1.0
    return QuantumState.pure(space, vec, **kw)


def product_plus_state(space: HilbertSpace) -> QuantumState:
    """|+>^N (the drive-aligned initial state); resonator factor in vacuum."""
    n = space.n_qubits
    if space.kind is SpaceKind.DICKE:
        amps = np.array([math.sqrt(math.comb(n, k)) for k in range(n + 1)],
                        dtype=complex) / 2 ** (n / 2)
        return QuantumState.pure(space, amps)
    plus = np.full(2 ** n, 2 ** (-n / 2), dtype=complex)
    if space.kind is SpaceKind.FULL_SPIN:
        return QuantumState.pure(space, plus)
    vac = np.zeros(space.n_max + 1, dtype=complex)
    vac[0] = 1.0
    return QuantumState.pure(space, np.kron(plus, vac))


def ghz_state(space: HilbertSpace, phase: float = 0.0) -> QuantumState:
    """(|g>^N + e^{i phase} |e>^N)/sqrt(2)."""
    if space.kind is SpaceKind.SPIN_RESONATOR:
        raise ValueError("ghz_state is defined on the qubit register")
    vec = np.zeros(space.dim, dtype=complex)
    vec[0] = 1.0 / math.sqrt(2)
    vec[-1] = np.exp(1j * phase) / math.sqrt(2)
    return QuantumState.pure(space, vec)


def with_vacuum(state: QuantumState, n_max: int = 3) -> QuantumState:
    """Extend a FullSpin pure state by a vacuum resonator factor."""
    if state.space.kind is not SpaceKind.FULL_SPIN or not state.is_pure:
        raise ValueError("with_vacuum expects a pure FullSpin state")
    target = HilbertSpace.spin_resonator(state.space.n_qubits, n_max)
    vac = np.zeros(n_max + 1, dtype=complex)
    vac[0] = 1.0
    return QuantumState.pure(target, np.kron(state.data, vac),
                             norm_tol=state.norm_tol)


def ptrace_resonator(state: QuantumState) -> QuantumState:
    """Reduce a SpinResonator state to the qubit register (partial trace)."""
    space = state.space
    if space.kind is not SpaceKind.SPIN_RESONATOR:
        return state
    dq = 2 ** space.n_qubits
    r = space.n_max + 1
    if state.is_pure:
        amp = state.data.reshape(dq, r)
        rho = amp @ amp.conj().T
    else:
        rho = state.data.reshape(dq, r, dq, r)
        rho = np.einsum("arbr->ab", rho)
    return QuantumState.density(space.qubit_space(), rho,
                                norm_tol=max(state.norm_tol, 1e-8))


def expectation(state: QuantumState, op: Operator) -> complex:
    """<op> in the given state (not renormalized)."""
    if op.space != state.space:
        raise ValueError("operator and state live on different spaces")
    if state.is_pure:
        return complex(state.data.conj() @ (op.matrix @ state.data))
    return complex(np.trace(op.matrix @ state.data))
