"""Dense complex linear algebra for the 2x2 .. 8x8 matrices used here.

Matrices and vectors are plain ``numpy.ndarray`` objects with dtype
``complex128``. The Hermitian eigensolver is a cyclic Jacobi iteration:
at these dimensions it is robust, dependency-free, and fast enough that
nothing else is worth carrying.
"""

from __future__ import annotations

import numpy as np

from . import tolerances as tol
from .errors import NoConvergence, NotHermitian, NotPSD

__all__ = [
    "adjoint",
    "as_cmatrix",
    "hermitian_eig",
    "is_hermitian",
    "kron",
    "psd_sqrt",
]


def as_cmatrix(m) -> np.ndarray:
    """Coerce to a C-contiguous complex128 2-D array, rejecting non-finite entries."""
    a = np.ascontiguousarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def adjoint(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def kron(a, b) -> np.ndarray:
    """Kronecker product; dimensions multiply."""
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def is_hermitian(m: np.ndarray, atol: float = tol.HERMITIAN_ATOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= atol)


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """One complex Jacobi rotation zeroing a[p, q]; updates a and v in place."""
    apq = a[p, q]
    mag = abs(apq)
    if mag == 0.0:
        return
    phase = apq / mag
    # t solves t^2 - 2*theta*t - 1 = 0; smaller-magnitude root for stability
    theta = (a[p, p].real - a[q, q].real) / (2.0 * mag)
    if theta >= 0.0:
        t = -1.0 / (theta + np.sqrt(theta * theta + 1.0))
    else:
        t = 1.0 / (-theta + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c * phase

    # a <- J^dag a J with J[p,p]=J[q,q]=c, J[p,q]=s, J[q,p]=-conj(s)
    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - np.conj(s) * col_q
    a[:, q] = s * col_p + c * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = np.conj(s) * row_p + c * row_q

    vcol_p = v[:, p].copy()
    vcol_q = v[:, q].copy()
    v[:, p] = c * vcol_p - np.conj(s) * vcol_q
    v[:, q] = s * vcol_p + c * vcol_q


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def hermitian_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as orthonormal columns, so ``V @ diag(w) @ V^dag == m``.

    Raises NotHermitian when the symmetry tolerance is violated and
    NoConvergence if the sweep cap is exhausted.
    """
    a = as_cmatrix(m)
    n, ncols = a.shape
    if n != ncols:
        raise ValueError(f"matrix must be square, got {a.shape}")
    if not is_hermitian(a):
        raise NotHermitian(f"max asymmetry {np.max(np.abs(a - a.conj().T)):.3e} exceeds {tol.HERMITIAN_ATOL}")

    a = 0.5 * (a + a.conj().T)  # symmetrize rounding noise before iterating
    v = np.eye(n, dtype=np.complex128)
    for _ in range(tol.JACOBI_MAX_SWEEPS):
        if _offdiag_norm(a) < tol.JACOBI_OFF_TOL:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate(a, v, p, q)
    else:
        raise NoConvergence(f"Jacobi did not reach off-norm {tol.JACOBI_OFF_TOL} in {tol.JACOBI_MAX_SWEEPS} sweeps")

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(v[:, order])


def psd_sqrt(m) -> np.ndarray:
    """Hermitian PSD square root S with S @ S == m.

    Eigenvalues in [PSD_EIGEN_FLOOR, 0) are clipped to zero; anything lower
    raises NotPSD.
    """
    w, v = hermitian_eig(m)
    if w[0] < tol.PSD_EIGEN_FLOOR:
        raise NotPSD(f"smallest eigenvalue {w[0]:.3e} below {tol.PSD_EIGEN_FLOOR}")
    s = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    return 0.5 * (s + s.conj().T)
