"""Non-Hermitian single-qubit simulation library.

Exact normalized evolution under H = (omega/2) sigma_x + (i gamma/2) sigma_z,
its postselected Trotter factorization, a trainable fixed-depth variational
dilation circuit, entanglement/Bloch observables, and deterministic
experiment drivers behind the ``nonherm`` CLI.
"""

__version__ = "0.1.0"

from ._kernels import KERNEL_BACKEND
from .errors import (
    BadWire,
    BadWireSet,
    ConfigError,
    Diverged,
    NoConvergence,
    NonhermError,
    NotHermitian,
    NotPSD,
    SameWire,
    VanishingNorm,
    VanishingTrace,
    ZeroProbability,
)
from .gates import GateU3, rx_matrix, u3_matrix
from .heff import (
    HeffParams,
    PTPhase,
    Spectrum,
    TrotterSchedule,
    build_heff,
    classify_phase,
    evolve_density,
    evolve_pure,
    exact_propagator,
    pt_invariance_check,
    spectrum,
    trotter_evolve,
    trotter_schedule,
    trotter_step,
)
from .linalg import hermitian_eig, kron, psd_sqrt
from .observables import (
    BlochVector,
    ConcurrenceResult,
    asymptotic_mz,
    bloch,
    concurrence,
    mz,
    p0,
    spin_flip,
)
from .states import (
    DensityMatrix,
    PureState,
    apply_1q,
    apply_controlled,
    bell_state,
    maximally_mixed,
    partial_trace,
    pauli_expectation,
    postselect_zero,
)
from .vqc import (
    Checkpoint,
    TrainingConfig,
    TrainingSet,
    TrainingTrace,
    ansatz_unitary,
    build_training_set,
    cost,
    load_checkpoint,
    parameter_shift_gradient,
    pqc_output,
    save_checkpoint,
    train,
)
