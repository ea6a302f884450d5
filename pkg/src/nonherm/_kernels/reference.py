"""Pure-Python kernel reference implementation.

Mirrors ``_fast.pyx`` operation for operation. Keep the two in sync: the
cross-backend tests assert agreement to near machine precision.

Circuit layout of the variational ansatz (system wire q = most significant
bit, ancilla wire a = least significant): four layers U(r[3k..3k+2]) on q
and U(r[12+3k..12+3k+2]) on a, with an ancilla-controlled NOT on q between
consecutive layers. ``ansatz_unitary`` returns the operator that maps an
input ket through the layers in their temporal order.
"""

from __future__ import annotations

import numpy as np

N_PARAMS = 24

# CX with control on the ancilla (LSB) permutes basis rows 1 <-> 3
_CX_ROWS = np.array([0, 3, 2, 1])


def _u3(a: float, b: float, c: float) -> np.ndarray:
    ca = np.cos(0.5 * a)
    sa = np.sin(0.5 * a)
    return np.array(
        [
            [ca, -np.exp(1j * c) * sa],
            [np.exp(1j * b) * sa, np.exp(1j * (b + c)) * ca],
        ],
        dtype=np.complex128,
    )


def _layer(r: np.ndarray, k: int) -> np.ndarray:
    uq = _u3(r[3 * k], r[3 * k + 1], r[3 * k + 2])
    ua = _u3(r[12 + 3 * k], r[12 + 3 * k + 1], r[12 + 3 * k + 2])
    return np.kron(uq, ua)


def ansatz_unitary(r) -> np.ndarray:
    """Full 4x4 unitary of the two-qubit variational circuit."""
    r = np.asarray(r, dtype=np.float64)
    t = _layer(r, 0)
    for k in (1, 2, 3):
        t = _layer(r, k) @ t[_CX_ROWS, :]
    return t


def ansatz_block(r) -> np.ndarray:
    """Top-left (ancilla |0> -> |0>) 2x2 block of the circuit unitary."""
    return np.ascontiguousarray(ansatz_unitary(r)[::2, ::2])


def ansatz_block_shifts(r, shift: float):
    """Block at r plus blocks at r[k] +- shift for every parameter k.

    Returns (block, plus, minus) with plus/minus of shape (24, 2, 2).
    """
    r = np.asarray(r, dtype=np.float64)
    plus = np.empty((N_PARAMS, 2, 2), dtype=np.complex128)
    minus = np.empty((N_PARAMS, 2, 2), dtype=np.complex128)
    work = r.copy()
    for k in range(N_PARAMS):
        work[k] = r[k] + shift
        plus[k] = ansatz_block(work)
        work[k] = r[k] - shift
        minus[k] = ansatz_block(work)
        work[k] = r[k]
    return ansatz_block(r), plus, minus


def trotter_run(amp0, theta: float, phi: float, steps: int, gaussian: bool, floor: float):
    """Apply ``steps`` postselected Kraus steps to a single-qubit amplitude pair.

    Each step is Rx(theta) followed by diag(1, k1) with k1 = cos(phi/2) or
    exp(-phi^2/8), renormalized; per-step squared norms are recorded.
    Returns (final_amplitudes, per_step) or (None, truncated per_step) if a
    step probability falls below ``floor``.
    """
    c = np.cos(0.5 * theta)
    s = np.sin(0.5 * theta)
    k1 = np.exp(-phi * phi / 8.0) if gaussian else np.cos(0.5 * phi)
    a0 = complex(amp0[0])
    a1 = complex(amp0[1])
    per_step = np.empty(steps, dtype=np.float64)
    for k in range(steps):
        b0 = c * a0 - 1j * s * a1
        b1 = (-1j * s * a0 + c * a1) * k1
        p = b0.real * b0.real + b0.imag * b0.imag + b1.real * b1.real + b1.imag * b1.imag
        if p < floor:
            return None, per_step[:k]
        per_step[k] = p
        inv = 1.0 / np.sqrt(p)
        a0 = b0 * inv
        a1 = b1 * inv
    return np.array([a0, a1], dtype=np.complex128), per_step
