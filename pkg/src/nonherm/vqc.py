"""Fixed-depth variational circuit that learns the normalized non-unitary map.

One system qubit plus one ancilla, four three-angle U gates per wire with
an ancilla-controlled NOT between layers. Postselecting the ancilla on
|0> realizes the top-left 2x2 block M(r) of the circuit unitary; training
drives M(r) toward a positive multiple of the target propagator so that
normalized outputs reproduce the target states, global phase included.

Gradients are exact. Each U(a, b, c) factors as P(b) Ry(a) P(c) with
P(x) = diag(1, e^{ix}), so every parameter enters through a single
one-parameter gate. Evaluating the circuit at r_k +- pi/2 then gives the
derivative of the (unnormalized) block image: coefficient 1/2 for the
phase angles b, c and 1/(2 sqrt 2) for the half-angle rotation a. The
chain rule through the postselection normalization is applied in closed
form, and agreement with central finite differences is the test contract.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import tolerances as tol
from ._kernels import kernels
from .errors import Diverged, ZeroProbability
from .heff import HeffParams, evolve_pure, trotter_evolve
from .states import PureState

__all__ = [
    "Checkpoint",
    "N_PARAMS",
    "TrainingConfig",
    "TrainingSet",
    "TrainingTrace",
    "ansatz_block",
    "ansatz_unitary",
    "as_param_vector",
    "build_training_set",
    "cost",
    "load_checkpoint",
    "parameter_shift_gradient",
    "pqc_output",
    "save_checkpoint",
    "train",
]

N_PARAMS = 24
PARAM_SHIFT = 0.5 * np.pi

# state-level two-point rule coefficients at +- pi/2 shifts:
# half-angle rotation parameters (every third) vs pure phase parameters
_SHIFT_COEF = np.where(np.arange(N_PARAMS) % 3 == 0, 1.0 / (2.0 * np.sqrt(2.0)), 0.5)


def as_param_vector(r) -> np.ndarray:
    v = np.ascontiguousarray(r, dtype=np.float64)
    if v.shape != (N_PARAMS,):
        raise ValueError(f"parameter vector must have shape ({N_PARAMS},), got {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("parameter vector contains NaN or Inf")
    return v


def ansatz_unitary(r) -> np.ndarray:
    """4x4 unitary of the variational circuit (layers composed in gate order)."""
    return kernels.ansatz_unitary(as_param_vector(r))


def ansatz_block(r) -> np.ndarray:
    """Postselected 2x2 block M(r) = <0_a| V(r) |0_a>."""
    return kernels.ansatz_block(as_param_vector(r))


def pqc_output(r, state: PureState) -> tuple[PureState, float]:
    """Run the circuit on ``state`` (x) |0_a>, postselect the ancilla on 0.

    Returns the renormalized single-qubit output and the success probability
    ||M(r) psi||^2.
    """
    if state.num_qubits != 1:
        raise ValueError("pqc_output takes a single-qubit input")
    v = ansatz_block(r) @ state.amplitudes
    prob = float(np.real(np.vdot(v, v)))
    if prob < tol.ZERO_PROBABILITY_FLOOR:
        raise ZeroProbability(f"postselection probability {prob:.3e} below {tol.ZERO_PROBABILITY_FLOOR}")
    return PureState(1, v / np.sqrt(prob)), prob


@dataclass(frozen=True)
class TrainingSet:
    """Input states paired with their target (already normalized) images."""

    pairs: tuple[tuple[PureState, PureState], ...]

    def __post_init__(self):
        if not self.pairs:
            raise ValueError("training set must be nonempty")
        for inp, ideal in self.pairs:
            if inp.num_qubits != 1 or ideal.num_qubits != 1:
                raise ValueError("training pairs must be single-qubit states")


@dataclass(frozen=True)
class TrainingConfig:
    learning_rate: float = 0.05
    max_iterations: int = 2000
    target_cost: float = 1e-3
    optimizer: str = "plain_gd"
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0.0:
            raise ValueError("learning_rate must be > 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not (0.0 <= self.target_cost < 2.0):
            raise ValueError("target_cost must be in [0, 2)")
        if self.optimizer not in ("plain_gd", "adam"):
            raise ValueError(f"optimizer must be plain_gd or adam, got {self.optimizer!r}")


@dataclass(frozen=True)
class TrainingTrace:
    iteration: np.ndarray
    cost: np.ndarray
    grad_norm: np.ndarray

    def __len__(self) -> int:
        return len(self.iteration)


def _pair_arrays(ts: TrainingSet) -> tuple[np.ndarray, np.ndarray]:
    inputs = np.stack([p[0].amplitudes for p in ts.pairs])
    ideals = np.stack([p[1].amplitudes for p in ts.pairs])
    return inputs, ideals


def _cost_only(block: np.ndarray, inputs: np.ndarray, ideals: np.ndarray) -> float:
    phi = inputs @ block.T  # (npairs, 2) unnormalized block images
    norms2 = np.einsum("ji,ji->j", phi.conj(), phi).real
    if np.any(norms2 < tol.ZERO_PROBABILITY_FLOOR):
        raise ZeroProbability("a training input has vanishing postselection probability")
    overlaps = np.einsum("ji,ji->j", ideals.conj(), phi)
    return float(np.mean(2.0 - 2.0 * overlaps.real / np.sqrt(norms2)))


def cost(r, ts: TrainingSet) -> float:
    """Mean over pairs of || |psi_out> - |psi_ideal> ||^2 = 2 - 2 Re<ideal|out>."""
    inputs, ideals = _pair_arrays(ts)
    return _cost_only(ansatz_block(r), inputs, ideals)


def _cost_and_gradient(r: np.ndarray, inputs: np.ndarray, ideals: np.ndarray) -> tuple[float, np.ndarray]:
    block, plus, minus = kernels.ansatz_block_shifts(r, PARAM_SHIFT)
    dblock = (plus - minus) * _SHIFT_COEF[:, None, None]  # (24, 2, 2) dM/dr_k
    total_cost = 0.0
    grad = np.zeros(N_PARAMS)
    for x, y in zip(inputs, ideals):
        phi = block @ x
        n2 = float(np.real(np.vdot(phi, phi)))
        if n2 < tol.ZERO_PROBABILITY_FLOOR:
            raise ZeroProbability("a training input has vanishing postselection probability")
        n = np.sqrt(n2)
        g = np.vdot(y, phi)
        dphi = dblock @ x  # (24, 2)
        d_overlap = (dphi @ y.conj()).real  # Re <ideal | dphi_k>
        d_norm = (dphi @ phi.conj()).real  # Re <phi | dphi_k>
        total_cost += 2.0 - 2.0 * g.real / n
        grad += -2.0 * d_overlap / n + 2.0 * g.real * d_norm / (n2 * n)
    npairs = len(inputs)
    return total_cost / npairs, grad / npairs


def parameter_shift_gradient(r, ts: TrainingSet) -> np.ndarray:
    """Exact gradient of the cost assembled from +- pi/2 shifted circuit runs."""
    inputs, ideals = _pair_arrays(ts)
    return _cost_and_gradient(as_param_vector(r), inputs, ideals)[1]


def build_training_set(
    p: HeffParams, t: float, engine: str = "exact", K: int | None = None
) -> TrainingSet:
    """Spanning single-qubit inputs paired with their propagated, normalized images.

    ``engine`` may be "exact" (closed-form propagator) or one of the Trotter
    modes, in which case ``K`` steps are used to generate the targets.
    """
    isq = 1.0 / np.sqrt(2.0)
    inputs = [
        PureState(1, np.array([1.0, 0.0], dtype=np.complex128)),
        PureState(1, np.array([0.0, 1.0], dtype=np.complex128)),
        PureState(1, np.array([isq, isq], dtype=np.complex128)),
        PureState(1, np.array([isq, 1j * isq], dtype=np.complex128)),
    ]
    pairs = []
    for s in inputs:
        if engine == "exact":
            ideal = evolve_pure(p, t, s)
        elif engine in ("trotter_exact_kraus", "trotter_gaussian_kraus"):
            if K is None or K < 1:
                raise ValueError("Trotter target generation needs K >= 1")
            ideal = trotter_evolve(s, p, t, K, engine.removeprefix("trotter_"))[0]
        else:
            raise ValueError(f"unknown target engine {engine!r}")
        pairs.append((s, ideal))
    return TrainingSet(tuple(pairs))


def train(
    ts: TrainingSet, cfg: TrainingConfig, init_params=None
) -> tuple[np.ndarray, TrainingTrace]:
    """Gradient-descent training loop; deterministic for a fixed seed.

    Starts from uniform random angles in [0, 2 pi) unless ``init_params`` is
    given. Stops once the cost reaches ``cfg.target_cost`` or after
    ``cfg.max_iterations`` parameter updates; every evaluation is recorded.
    """
    inputs, ideals = _pair_arrays(ts)
    if init_params is None:
        rng = np.random.default_rng(cfg.seed)
        r = rng.uniform(0.0, 2.0 * np.pi, N_PARAMS)
    else:
        r = as_param_vector(init_params).copy()

    adam_m = np.zeros(N_PARAMS)
    adam_v = np.zeros(N_PARAMS)
    iters, costs, gnorms = [], [], []
    for it in range(cfg.max_iterations + 1):
        c, g = _cost_and_gradient(r, inputs, ideals)
        if not np.isfinite(c):
            raise Diverged(f"cost became non-finite at iteration {it}")
        iters.append(it)
        costs.append(c)
        gnorms.append(float(np.linalg.norm(g)))
        if c <= cfg.target_cost or it == cfg.max_iterations:
            break
        if cfg.optimizer == "plain_gd":
            r = r - cfg.learning_rate * g
        else:
            adam_m = cfg.adam_beta1 * adam_m + (1.0 - cfg.adam_beta1) * g
            adam_v = cfg.adam_beta2 * adam_v + (1.0 - cfg.adam_beta2) * g * g
            mhat = adam_m / (1.0 - cfg.adam_beta1 ** (it + 1))
            vhat = adam_v / (1.0 - cfg.adam_beta2 ** (it + 1))
            r = r - cfg.learning_rate * mhat / (np.sqrt(vhat) + cfg.adam_eps)
    trace = TrainingTrace(np.array(iters), np.array(costs), np.array(gnorms))
    return r, trace


@dataclass(frozen=True)
class Checkpoint:
    """Trained parameters plus the task and configuration that produced them."""

    omega: float
    gamma: float
    t: float
    tau_convention: float
    params: np.ndarray
    final_cost: float
    seed: int
    config: dict = field(default_factory=dict)


def save_checkpoint(path, ck: Checkpoint) -> None:
    doc = {
        "omega": ck.omega,
        "gamma": ck.gamma,
        "t": ck.t,
        "tau_convention": ck.tau_convention,
        "parameters": [f"{x:.18g}" for x in as_param_vector(ck.params)],
        "final_cost": ck.final_cost,
        "seed": ck.seed,
        "config": ck.config,
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def load_checkpoint(path) -> Checkpoint:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    params = np.array([float(x) for x in doc["parameters"]], dtype=np.float64)
    return Checkpoint(
        omega=float(doc["omega"]),
        gamma=float(doc["gamma"]),
        t=float(doc["t"]),
        tau_convention=float(doc["tau_convention"]),
        params=as_param_vector(params),
        final_cost=float(doc["final_cost"]),
        seed=int(doc["seed"]),
        config=dict(doc.get("config", {})),
    )
