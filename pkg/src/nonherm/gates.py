"""Single-qubit gate matrices and the three-angle U gate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CNOT_CONTROL_SECOND",
    "GateU3",
    "HADAMARD",
    "IDENTITY2",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "PAULIS",
    "rx_matrix",
    "u3_matrix",
    "u3",
]

IDENTITY2 = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULIS = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)

# CNOT on (first, second) with the control on the SECOND qubit,
# first qubit = most significant bit of the basis index.
CNOT_CONTROL_SECOND = np.array(
    [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=np.complex128
)


@dataclass(frozen=True)
class GateU3:
    """General single-qubit rotation parameterized by three angles (radians)."""

    r_a: float
    r_b: float
    r_c: float


def u3(r_a: float, r_b: float, r_c: float) -> np.ndarray:
    """Matrix of the three-angle U gate.

    [[cos(a/2),            -e^{i c} sin(a/2)],
     [e^{i b} sin(a/2),  e^{i (b+c)} cos(a/2)]]
    """
    ca = np.cos(0.5 * r_a)
    sa = np.sin(0.5 * r_a)
    return np.array(
        [
            [ca, -np.exp(1j * r_c) * sa],
            [np.exp(1j * r_b) * sa, np.exp(1j * (r_b + r_c)) * ca],
        ],
        dtype=np.complex128,
    )


def u3_matrix(g: GateU3) -> np.ndarray:
    return u3(g.r_a, g.r_b, g.r_c)


def rx_matrix(angle: float) -> np.ndarray:
    """x-rotation exp(-i * angle * sigma_x / 2)."""
    c = np.cos(0.5 * angle)
    s = np.sin(0.5 * angle)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
