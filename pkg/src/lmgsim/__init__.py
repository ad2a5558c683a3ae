"""Multi-fidelity simulator of a driven collective-spin (LMG) quench in
circuit QED: ideal symmetric-subspace dynamics, the full qubits-plus-
resonator model with dissipation, and every derived observable.
"""

__version__ = "0.1.0"

from .hilbert import (  # noqa: F401
    HilbertSpace,
    Operator,
    QuantumState,
    SpaceKind,
    collective_spin,
    dicke_isometry,
    ghz_state,
    parity_operator,
    pauli_string,
    product_plus_state,
    resonator_ops,
)
from .model import (  # noqa: F401
    DeviceSpec,
    NoiseSpec,
    QuenchSchedule,
    circuit_qed_hamiltonian,
    circuit_qed_quench_hamiltonian,
    effective_coupling,
    homogeneous_device,
    lindblad_operators,
    lmg_hamiltonian,
    lmg_quench_hamiltonian,
    quench_omega,
    reference_device,
)
from .dynamics import (  # noqa: F401
    IntegratorConfig,
    TrajectoryRecord,
    convergence_check,
    evolve_lindblad,
    evolve_pure,
)
from .observables import (  # noqa: F401
    apply_readout_error,
    coherence_element,
    excitation_populations,
    fringe_fit,
    ghz_fidelity,
    longitudinal_correlation,
    transverse_correlation,
    wigner,
)
from .spectrum import (  # noqa: F401
    adiabaticity_overlap,
    degeneracy_scan,
    eigendecompose_with_parity,
    perturbative_shifts,
)
