"""Pure states and density matrices of 1-3 qubit registers.

Wire 0 is the most significant bit of the computational-basis index, so
the amplitude vector of |q0 q1 q2> reshaped to (2, 2, 2) has axis k
addressing wire k. All operations return new objects; nothing mutates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .errors import BadWire, BadWireSet, SameWire, ZeroProbability
from .gates import PAULIS
from .linalg import as_cmatrix, hermitian_eig

__all__ = [
    "DensityMatrix",
    "PureState",
    "apply_1q",
    "apply_1q_density",
    "apply_controlled",
    "bell_state",
    "maximally_mixed",
    "partial_trace",
    "pauli_expectation",
    "postselect_zero",
    "postselect_zero_density",
    "pure_to_density",
]


@dataclass(frozen=True)
class PureState:
    """Normalized amplitude vector over ``2**num_qubits`` basis states."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.num_qubits not in (1, 2, 3):
            raise ValueError(f"num_qubits must be 1..3, got {self.num_qubits}")
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (2**self.num_qubits,):
            raise ValueError(f"amplitude vector has shape {amps.shape}, expected ({2**self.num_qubits},)")
        if not np.all(np.isfinite(amps.view(np.float64))):
            raise ValueError("amplitudes contain NaN or Inf")
        if abs(np.linalg.norm(amps) - 1.0) > tol.STATE_NORM_ATOL:
            raise ValueError(f"state norm {np.linalg.norm(amps)} is not 1 within {tol.STATE_NORM_ATOL}")
        object.__setattr__(self, "amplitudes", amps)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, PSD matrix over ``2**num_qubits`` basis states."""

    num_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.num_qubits not in (1, 2, 3):
            raise ValueError(f"num_qubits must be 1..3, got {self.num_qubits}")
        dim = 2**self.num_qubits
        m = as_cmatrix(self.matrix)
        if m.shape != (dim, dim):
            raise ValueError(f"matrix has shape {m.shape}, expected ({dim}, {dim})")
        if np.max(np.abs(m - m.conj().T)) > tol.HERMITIAN_ATOL:
            raise ValueError("density matrix is not Hermitian within tolerance")
        if abs(np.trace(m).real - 1.0) > tol.TRACE_ATOL or abs(np.trace(m).imag) > tol.TRACE_ATOL:
            raise ValueError(f"trace {np.trace(m)} is not 1 within {tol.TRACE_ATOL}")
        w, _ = hermitian_eig(m)
        if w[0] < tol.DENSITY_EIGEN_FLOOR:
            raise ValueError(f"density matrix eigenvalue {w[0]:.3e} below {tol.DENSITY_EIGEN_FLOOR}")
        object.__setattr__(self, "matrix", m)


def pure_to_density(state: PureState) -> DensityMatrix:
    a = state.amplitudes
    return DensityMatrix(state.num_qubits, np.outer(a, a.conj()))


def _check_wire(wire: int, n: int) -> None:
    if not (isinstance(wire, (int, np.integer)) and 0 <= wire < n):
        raise BadWire(f"wire {wire} out of range for {n} qubits")


def _check_gate2(gate: np.ndarray) -> np.ndarray:
    g = as_cmatrix(gate)
    if g.shape != (2, 2):
        raise ValueError(f"expected a 2x2 gate, got {g.shape}")
    if np.max(np.abs(g.conj().T @ g - np.eye(2))) > tol.UNITARY_ATOL:
        raise ValueError("gate is not unitary within tolerance")
    return g


def apply_1q(state: PureState, gate, wire: int) -> PureState:
    """Apply a unitary 2x2 gate on one wire of a pure register."""
    n = state.num_qubits
    _check_wire(wire, n)
    g = _check_gate2(gate)
    psi = state.amplitudes.reshape((2,) * n)
    psi = np.moveaxis(np.tensordot(g, psi, axes=([1], [wire])), 0, wire)
    return PureState(n, psi.reshape(-1))


def apply_controlled(state: PureState, gate, control: int, target: int) -> PureState:
    """Apply a 2x2 gate on ``target`` conditioned on ``control`` being |1>."""
    n = state.num_qubits
    _check_wire(control, n)
    _check_wire(target, n)
    if control == target:
        raise SameWire(f"control and target both {control}")
    g = _check_gate2(gate)
    psi = state.amplitudes.reshape((2,) * n).copy()
    sel: list = [slice(None)] * n
    sel[control] = 1
    sub = psi[tuple(sel)]  # n-1 axis view; target axis shifts down if control < target
    t_ax = target if target < control else target - 1
    sub[...] = np.moveaxis(np.tensordot(g, sub, axes=([1], [t_ax])), 0, t_ax)
    return PureState(n, psi.reshape(-1))


def postselect_zero(state: PureState, wire: int) -> tuple[PureState, float]:
    """Project ``wire`` onto |0>, drop it, renormalize; returns (state, probability)."""
    n = state.num_qubits
    _check_wire(wire, n)
    if n < 2:
        raise BadWire("postselection needs at least 2 qubits")
    psi = state.amplitudes.reshape((2,) * n)
    sel: list = [slice(None)] * n
    sel[wire] = 0
    block = psi[tuple(sel)].reshape(-1)
    prob = float(np.real(np.vdot(block, block)))
    if prob < tol.ZERO_PROBABILITY_FLOOR:
        raise ZeroProbability(f"outcome probability {prob:.3e} below {tol.ZERO_PROBABILITY_FLOOR}")
    return PureState(n - 1, block / np.sqrt(prob)), prob


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced density matrix over the ``keep`` wires (ascending order kept)."""
    n = rho.num_qubits
    keep = sorted(set(int(k) for k in keep))
    if not keep or len(keep) >= n or any(k < 0 or k >= n for k in keep):
        raise BadWireSet(f"keep={keep} must be a nonempty strict subset of 0..{n - 1}")
    t = rho.matrix.reshape((2,) * (2 * n))
    # contract each traced-out wire's row index with its column index
    for w in sorted((set(range(n)) - set(keep)), reverse=True):
        nq = t.ndim // 2
        t = np.trace(t, axis1=w, axis2=nq + w)
    dim = 2 ** len(keep)
    return DensityMatrix(len(keep), t.reshape(dim, dim))


def pauli_expectation(rho: DensityMatrix, pauli: str, wire: int) -> float:
    """tr(rho * sigma_pauli acting on one wire)."""
    if pauli not in PAULIS:
        raise ValueError(f"pauli must be one of {sorted(PAULIS)}, got {pauli!r}")
    _check_wire(wire, rho.num_qubits)
    if rho.num_qubits == 1:
        reduced = rho.matrix
    else:
        reduced = partial_trace(rho, [wire]).matrix
    return float(np.trace(reduced @ PAULIS[pauli]).real)


def apply_1q_density(rho: DensityMatrix, gate, wire: int) -> DensityMatrix:
    """Conjugate a density matrix by a single-wire unitary: U rho U^dag."""
    n = rho.num_qubits
    _check_wire(wire, n)
    g = _check_gate2(gate)
    full = np.array([[1.0]], dtype=np.complex128)
    for w in range(n):
        full = np.kron(full, g if w == wire else np.eye(2, dtype=np.complex128))
    return DensityMatrix(n, full @ rho.matrix @ full.conj().T)


def postselect_zero_density(rho: DensityMatrix, wire: int) -> tuple[DensityMatrix, float]:
    """Density-matrix postselection: Pi0 rho Pi0 / tr, dropping the wire."""
    n = rho.num_qubits
    _check_wire(wire, n)
    if n < 2:
        raise BadWire("postselection needs at least 2 qubits")
    t = rho.matrix.reshape((2,) * (2 * n))
    sel: list = [slice(None)] * (2 * n)
    sel[wire] = 0
    sel[n + wire] = 0
    dim = 2 ** (n - 1)
    block = t[tuple(sel)].reshape(dim, dim)
    prob = float(np.trace(block).real)
    if prob < tol.ZERO_PROBABILITY_FLOOR:
        raise ZeroProbability(f"outcome probability {prob:.3e} below {tol.ZERO_PROBABILITY_FLOOR}")
    return DensityMatrix(n - 1, block / prob), prob


def bell_state() -> PureState:
    """(|00> + |11>) / sqrt(2)."""
    amps = np.zeros(4, dtype=np.complex128)
    amps[0] = amps[3] = 1.0 / np.sqrt(2.0)
    return PureState(2, amps)


def maximally_mixed(n: int) -> DensityMatrix:
    return DensityMatrix(n, np.eye(2**n, dtype=np.complex128) / 2**n)
