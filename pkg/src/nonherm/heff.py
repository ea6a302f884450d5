"""The non-Hermitian single-qubit generator and its dynamics.

Everything specific to H = (omega/2) sigma_x + (i gamma/2) sigma_z lives
here: the closed-form spectrum, symmetry-phase classification, the exact
(normalized, nonlinear) propagated states, and the postselected Trotter
factorization with its success-probability accounting.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from ._kernels import kernels
from .errors import VanishingNorm, VanishingTrace, ZeroProbability
from .gates import PAULI_X, rx_matrix
from .states import DensityMatrix, PureState

__all__ = [
    "HeffParams",
    "PTPhase",
    "Spectrum",
    "TrotterSchedule",
    "build_heff",
    "classify_phase",
    "evolve_density",
    "evolve_pure",
    "exact_propagator",
    "pt_invariance_check",
    "spectrum",
    "trotter_evolve",
    "trotter_schedule",
    "trotter_step",
]

TROTTER_MODES = ("exact_kraus", "gaussian_kraus")


@dataclass(frozen=True)
class HeffParams:
    """Drive frequency (any sign) and dissipation rate (nonnegative)."""

    omega: float
    gamma: float

    def __post_init__(self):
        if not (np.isfinite(self.omega) and np.isfinite(self.gamma)):
            raise ValueError("omega and gamma must be finite")
        if self.gamma < 0.0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")


class PTPhase(enum.Enum):
    SYMMETRIC = "Symmetric"
    BROKEN = "Broken"
    EXCEPTIONAL_POINT = "ExceptionalPoint"


@dataclass(frozen=True)
class Spectrum:
    lambda_plus: complex
    lambda_minus: complex
    phi_plus: np.ndarray
    phi_minus: np.ndarray
    is_defective: bool


@dataclass(frozen=True)
class TrotterSchedule:
    """Per-step rotation/dissipation angles for a K-step factorization."""

    tau: float
    steps: int
    theta: float
    phi: float

    def __post_init__(self):
        if self.tau < 0.0:
            raise ValueError(f"tau must be >= 0, got {self.tau}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if self.phi < 0.0:
            raise ValueError(f"phi must be >= 0, got {self.phi}")


def classify_phase(p: HeffParams) -> PTPhase:
    """Symmetric for |omega| > gamma, Broken below, ExceptionalPoint at equality."""
    scale = max(abs(p.omega), p.gamma, 1.0)
    if abs(abs(p.omega) - p.gamma) <= tol.EP_RTOL * scale:
        return PTPhase.EXCEPTIONAL_POINT
    return PTPhase.SYMMETRIC if abs(p.omega) > p.gamma else PTPhase.BROKEN


def build_heff(p: HeffParams) -> np.ndarray:
    """[[i gamma/2, omega/2], [omega/2, -i gamma/2]]."""
    return np.array(
        [[0.5j * p.gamma, 0.5 * p.omega], [0.5 * p.omega, -0.5j * p.gamma]],
        dtype=np.complex128,
    )


def _principal_root(p: HeffParams) -> complex:
    """sqrt(omega^2 - gamma^2) with +i sqrt(|.|) for a negative radicand."""
    disc = p.omega * p.omega - p.gamma * p.gamma
    if disc >= 0.0:
        return complex(np.sqrt(disc), 0.0)
    return complex(0.0, np.sqrt(-disc))


def spectrum(p: HeffParams) -> Spectrum:
    """Closed-form eigenvalues and unit eigenvectors.

    At an exceptional point the eigenvalues vanish identically and the
    single (coalesced) eigenvector lies on the Bloch equator.
    """
    if classify_phase(p) is PTPhase.EXCEPTIONAL_POINT:
        if p.omega >= 0.0:
            phi = np.array([1.0, -1.0j], dtype=np.complex128) / np.sqrt(2.0)
        else:
            phi = np.array([1.0, 1.0j], dtype=np.complex128) / np.sqrt(2.0)
        return Spectrum(0.0 + 0.0j, 0.0 + 0.0j, phi, phi.copy(), True)

    root = _principal_root(p)
    lam = 0.5 * root
    if p.omega == 0.0:
        # the (omega, -i gamma +- root) layout degenerates at omega = 0, where
        # the generator is already diagonal with the growing mode on |0>
        vec_plus = np.array([1.0, 0.0], dtype=np.complex128)
        vec_minus = np.array([0.0, 1.0], dtype=np.complex128)
    else:
        vec_plus = np.array([p.omega, -1j * p.gamma + root], dtype=np.complex128)
        vec_minus = np.array([p.omega, -1j * p.gamma - root], dtype=np.complex128)
        vec_plus /= np.linalg.norm(vec_plus)
        vec_minus /= np.linalg.norm(vec_minus)
    return Spectrum(lam, -lam, vec_plus, vec_minus, False)


def pt_invariance_check(p: HeffParams) -> float:
    """Max entrywise |sigma_x conj(H) sigma_x - H|; zero for every valid parameter pair."""
    h = build_heff(p)
    return float(np.max(np.abs(PAULI_X @ h.conj() @ PAULI_X - h)))


def _sinc_complex(z: complex) -> complex:
    """sin(z)/z extended through z = 0."""
    if abs(z) < 1e-6:
        z2 = z * z
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0
    return np.sin(z) / z


def exact_propagator(p: HeffParams, t: float) -> np.ndarray:
    """exp(-i H t) in closed form.

    Since H^2 = ((omega^2 - gamma^2)/4) I the exponential reduces to
    cos(lam t) I - i t sinc(lam t) H with lam the principal half-root;
    cosh/sinh behavior in the broken phase comes out of the complex
    trigonometry automatically, and lam = 0 degrades to I - i H t.
    """
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    lam = 0.5 * _principal_root(p)
    z = lam * t
    h = build_heff(p)
    return np.cos(z) * np.eye(2, dtype=np.complex128) - 1j * t * _sinc_complex(z) * h


def _scaled_propagator(p: HeffParams, t: float) -> np.ndarray:
    """Propagator rescaled by its largest entry; safe to normalize against."""
    a = exact_propagator(p, t)
    return a / np.max(np.abs(a))


def evolve_pure(p: HeffParams, t: float, psi: PureState) -> PureState:
    """Normalized non-unitary evolution A_t |psi> / ||A_t |psi>||."""
    if psi.num_qubits != 1:
        raise ValueError("evolve_pure acts on a single qubit")
    v = _scaled_propagator(p, t) @ psi.amplitudes
    nrm = np.linalg.norm(v)
    if nrm <= tol.VANISHING_NORM_FLOOR:
        raise VanishingNorm(f"propagated norm {nrm:.3e} too small to renormalize")
    return PureState(1, v / nrm)


def evolve_density(p: HeffParams, t: float, rho: DensityMatrix) -> DensityMatrix:
    """rho -> A_t rho A_t^dag / tr(.); nonlinear in rho through the trace."""
    if rho.num_qubits != 1:
        raise ValueError("evolve_density acts on a single qubit")
    a = _scaled_propagator(p, t)
    m = a @ rho.matrix @ a.conj().T
    tr = np.trace(m).real
    if tr <= tol.VANISHING_NORM_FLOOR:
        raise VanishingTrace(f"propagated trace {tr:.3e} too small to renormalize")
    m = m / tr
    return DensityMatrix(1, 0.5 * (m + m.conj().T))


def trotter_schedule(p: HeffParams, t: float, K: int) -> TrotterSchedule:
    """tau = t/K with theta = omega tau and phi = sqrt(8 gamma tau)."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    tau = t / K
    return TrotterSchedule(tau=tau, steps=K, theta=p.omega * tau, phi=np.sqrt(8.0 * p.gamma * tau))


def _kraus_factor(s: TrotterSchedule, mode: str) -> float:
    if mode == "exact_kraus":
        return float(np.cos(0.5 * s.phi))
    if mode == "gaussian_kraus":
        return float(np.exp(-s.phi * s.phi / 8.0))
    raise ValueError(f"mode must be one of {TROTTER_MODES}, got {mode!r}")


def trotter_step(psi: PureState, s: TrotterSchedule, mode: str = "exact_kraus") -> tuple[PureState, float]:
    """One postselected step: K_mode Rx(theta), renormalized.

    The returned probability is the squared pre-normalization norm, i.e.
    the chance this step's ancilla measurement returns 0.
    """
    if psi.num_qubits != 1:
        raise ValueError("trotter_step acts on a single qubit")
    v = rx_matrix(s.theta) @ psi.amplitudes
    v[1] *= _kraus_factor(s, mode)
    prob = float(np.real(np.vdot(v, v)))
    if prob < tol.ZERO_PROBABILITY_FLOOR:
        raise ZeroProbability(f"step probability {prob:.3e} below {tol.ZERO_PROBABILITY_FLOOR}")
    return PureState(1, v / np.sqrt(prob)), prob


def trotter_evolve(
    psi: PureState, p: HeffParams, t: float, K: int, mode: str = "exact_kraus"
) -> tuple[PureState, float, np.ndarray]:
    """K postselected steps; returns (state, product of step probabilities, per-step array)."""
    if psi.num_qubits != 1:
        raise ValueError("trotter_evolve acts on a single qubit")
    s = trotter_schedule(p, t, K)
    _kraus_factor(s, mode)  # validate mode before dispatching
    amps, per_step = kernels.trotter_run(
        psi.amplitudes, s.theta, s.phi, K, mode == "gaussian_kraus", tol.ZERO_PROBABILITY_FLOOR
    )
    if amps is None:
        raise ZeroProbability("a step probability fell below the postselection floor")
    return PureState(1, amps), float(np.prod(per_step)), per_step
