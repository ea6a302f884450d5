"""Scalar observables: survival probability, magnetization, Bloch
coordinates, Wootters concurrence, and the closed-form long-time
magnetization used as the phase-transition reference curve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gates import PAULI_Y, PAULI_Z
from .heff import HeffParams, classify_phase, PTPhase, spectrum
from .linalg import hermitian_eig, kron, psd_sqrt
from .states import DensityMatrix, PureState, pauli_expectation

__all__ = [
    "BlochVector",
    "ConcurrenceResult",
    "asymptotic_mz",
    "bloch",
    "concurrence",
    "mz",
    "p0",
    "spin_flip",
]


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.norm() > 1.0 + 1e-9:
            raise ValueError(f"Bloch vector norm {self.norm()} exceeds 1")

    def norm(self) -> float:
        return float(np.sqrt(self.x * self.x + self.y * self.y + self.z * self.z))


@dataclass(frozen=True)
class ConcurrenceResult:
    """Sorted spin-flip eigenvalue roots, their alternating sum, and C(rho)."""

    lambdas: np.ndarray
    delta: float
    value: float


def p0(psi: PureState) -> float:
    """Probability of finding a single qubit in |0>."""
    if psi.num_qubits != 1:
        raise ValueError("p0 takes a single-qubit state")
    return float(abs(psi.amplitudes[0]) ** 2)


def mz(rho: DensityMatrix) -> float:
    """Magnetization tr(rho sigma_z) of a single qubit."""
    if rho.num_qubits != 1:
        raise ValueError("mz takes a single-qubit density matrix")
    return float(np.trace(rho.matrix @ PAULI_Z).real)


def bloch(rho: DensityMatrix) -> BlochVector:
    """(tr rho sigma_x, tr rho sigma_y, tr rho sigma_z) of a single qubit."""
    if rho.num_qubits != 1:
        raise ValueError("bloch takes a single-qubit density matrix")
    return BlochVector(
        pauli_expectation(rho, "x", 0),
        pauli_expectation(rho, "y", 0),
        pauli_expectation(rho, "z", 0),
    )


def spin_flip(rho: DensityMatrix) -> np.ndarray:
    """(sigma_y (x) sigma_y) conj(rho) (sigma_y (x) sigma_y) for a two-qubit state."""
    if rho.num_qubits != 2:
        raise ValueError("spin_flip takes a two-qubit density matrix")
    yy = kron(PAULI_Y, PAULI_Y)
    return yy @ rho.matrix.conj() @ yy


def concurrence(rho: DensityMatrix) -> ConcurrenceResult:
    """Wootters concurrence of a two-qubit density matrix.

    The eigenvalue roots of rho * rho_tilde are taken from the similar
    Hermitian matrix sqrt(rho) rho_tilde sqrt(rho), which shares its
    spectrum and keeps the whole computation inside the Hermitian solver.
    """
    s = psd_sqrt(rho.matrix)
    herm = s @ spin_flip(rho) @ s
    w, _ = hermitian_eig(0.5 * (herm + herm.conj().T))
    lambdas = np.sqrt(np.clip(w, 0.0, None))[::-1].copy()
    delta = float(lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3])
    return ConcurrenceResult(lambdas, delta, max(delta, 0.0))


def asymptotic_mz(p: HeffParams) -> float:
    """Long-time magnetization: the dominant-mode value in the broken phase,
    the zero time-average in the symmetric phase and at the exceptional point.
    """
    if p.gamma <= 0.0:
        raise ValueError("asymptotic_mz requires gamma > 0")
    if classify_phase(p) is not PTPhase.BROKEN:
        return 0.0
    vec = spectrum(p).phi_plus
    rho = DensityMatrix(1, np.outer(vec, vec.conj()))
    return mz(rho)
