"""Coined discrete-time walk engine.

One step is coin then shift: psi' = S C psi, with C block diagonal over
vertices and S the flip-flop shift.  Transfer is judged on vertex
probability, the sum of squared amplitude moduli over a vertex's ports,
so a perfect transfer claim is independent of the coin state in which
the walker arrives.  Periodicity comes in two strengths: strict means
the full state returns (fidelity with the start state reaches one),
positional means all probability returns to the start vertex whatever
the coin configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from qwalk.arcs import ArcSpace, shift_matrix
from qwalk.coins import CoinPolicy, assemble_coin
from qwalk.errors import ConfigError, ToleranceError
from qwalk.graphs import Graph

__all__ = [
    "StepOperator",
    "build_step_operator",
    "state_at_vertex",
    "equal_superposition",
    "vertex_probability",
    "evolve",
    "haar_states",
    "detect_transfer",
    "max_transfer_scan",
    "target_block_powers",
    "TransferReport",
    "ScanResult",
]

UNITARITY_TOL = 1e-12


@dataclass(frozen=True)
class StepOperator:
    """A single-step walk operator S C over the arc space of a graph."""

    graph: Graph
    space: ArcSpace
    matrix: np.ndarray

    def apply(self, psi: np.ndarray) -> np.ndarray:
        return self.matrix @ psi


def build_step_operator(g: Graph, policy: CoinPolicy) -> StepOperator:
    space = ArcSpace.from_graph(g)
    coin = assemble_coin(g, policy, space)
    u = shift_matrix(space) @ coin
    defect = np.abs(u.conj().T @ u - np.eye(space.n_arcs)).max()
    if defect > UNITARITY_TOL:
        raise ToleranceError(f"step operator unitarity defect {defect:.3e}")
    return StepOperator(g, space, u)


def state_at_vertex(space: ArcSpace, v: int, amplitudes: Sequence[complex]) -> np.ndarray:
    """State with the given port amplitudes at v and zero elsewhere."""
    d = space.degree(v)
    amps = np.asarray(list(amplitudes), dtype=complex)
    if amps.shape != (d,):
        raise ConfigError(f"vertex {v} has {d} ports, got {amps.shape[0]} amplitudes")
    norm = np.linalg.norm(amps)
    if abs(norm - 1.0) > 1e-9:
        raise ConfigError(f"initial amplitudes must be unit norm, got {norm}")
    psi = np.zeros(space.n_arcs, dtype=complex)
    psi[space.vertex_slice(v)] = amps
    return psi


def equal_superposition(space: ArcSpace, v: int) -> np.ndarray:
    d = space.degree(v)
    return state_at_vertex(space, v, np.ones(d) / np.sqrt(d))


def vertex_probability(space: ArcSpace, psi: np.ndarray, v: int) -> float:
    block = psi[space.vertex_slice(v)]
    return float(np.sum(np.abs(block) ** 2))


def evolve(op: StepOperator, psi: np.ndarray, steps: int) -> Iterator[np.ndarray]:
    """Yield the state after each of the given number of steps."""
    state = np.asarray(psi, dtype=complex)
    for _ in range(steps):
        state = op.matrix @ state
        yield state


def haar_states(d: int, count: int, seed: int) -> np.ndarray:
    """(count, d) array of Haar-uniform unit vectors on C^d."""
    if d < 1 or count < 1:
        raise ConfigError("haar_states requires d >= 1 and count >= 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


@dataclass(frozen=True)
class TransferReport:
    """Per-step transfer diagnostics between a source and target vertex."""

    source: int
    target: int
    target_series: np.ndarray       # probability at target, index = step
    source_series: np.ndarray       # probability back at source
    fidelity_series: np.ndarray     # |<psi0|psi_t>|^2
    pst_steps: tuple[int, ...]      # steps with target probability >= 1 - pst_tol
    strict_period: int | None       # first full-state return
    positional_period: int | None   # first all-probability return to source
    max_probability: float
    max_step: int
    high_amplitude: bool
    lam: float
    pst_tol: float

    def to_json_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "target_series": [float(p) for p in self.target_series],
            "source_series": [float(p) for p in self.source_series],
            "pst_steps": list(self.pst_steps),
            "strict_period": self.strict_period,
            "positional_period": self.positional_period,
            "max_probability": self.max_probability,
            "max_step": self.max_step,
            "high_amplitude": self.high_amplitude,
            "lam": self.lam,
            "pst_tol": self.pst_tol,
        }


def detect_transfer(
    g: Graph,
    policy: CoinPolicy,
    init: np.ndarray,
    pair: tuple[int, int],
    t_max: int = 100,
    lam: float = 0.9,
    pst_tol: float = 1e-9,
) -> TransferReport:
    """Evolve for t_max steps and summarize transfer between the pair."""
    op = build_step_operator(g, policy)
    source, target = pair
    psi0 = np.asarray(init, dtype=complex)
    if psi0.shape != (op.space.n_arcs,):
        raise ConfigError(
            f"initial state has {psi0.shape} entries, arc space has {op.space.n_arcs}"
        )
    target_series = np.empty(t_max + 1)
    source_series = np.empty(t_max + 1)
    fidelity_series = np.empty(t_max + 1)
    target_series[0] = vertex_probability(op.space, psi0, target)
    source_series[0] = vertex_probability(op.space, psi0, source)
    fidelity_series[0] = abs(np.vdot(psi0, psi0)) ** 2
    psi = psi0
    for t in range(1, t_max + 1):
        psi = op.matrix @ psi
        target_series[t] = vertex_probability(op.space, psi, target)
        source_series[t] = vertex_probability(op.space, psi, source)
        fidelity_series[t] = abs(np.vdot(psi0, psi)) ** 2
    drift = abs(np.linalg.norm(psi) - 1.0)
    if drift > 1e-9:
        raise ToleranceError(f"norm drift {drift:.3e} after {t_max} steps")
    pst_steps = tuple(
        int(t) for t in range(1, t_max + 1) if target_series[t] >= 1.0 - pst_tol
    )
    strict = next(
        (int(t) for t in range(1, t_max + 1) if fidelity_series[t] >= 1.0 - pst_tol),
        None,
    )
    positional = next(
        (int(t) for t in range(1, t_max + 1) if source_series[t] >= 1.0 - pst_tol),
        None,
    )
    max_step = int(np.argmax(target_series[1:]) + 1)
    max_probability = float(target_series[max_step])
    return TransferReport(
        source=source,
        target=target,
        target_series=target_series,
        source_series=source_series,
        fidelity_series=fidelity_series,
        pst_steps=pst_steps,
        strict_period=strict,
        positional_period=positional,
        max_probability=max_probability,
        max_step=max_step,
        high_amplitude=max_probability > lam,
        lam=lam,
        pst_tol=pst_tol,
    )


def target_block_powers(
    op: StepOperator, pair: tuple[int, int], t_max: int
) -> Iterator[np.ndarray]:
    """Source-to-target blocks of U^t for t = 1..t_max.

    The block at step t maps port amplitudes at the source to port
    amplitudes at the target; its largest singular value reaching one
    certifies a perfectly transferring initial coin state at that step.
    """
    source, target = pair
    src = op.space.vertex_slice(source)
    tgt = op.space.vertex_slice(target)
    power = np.eye(op.space.n_arcs, dtype=complex)
    for _ in range(t_max):
        power = op.matrix @ power
        yield power[tgt, src]


@dataclass(frozen=True)
class ScanResult:
    """Best transfer over Haar-sampled initial coin states."""

    max_probability: float
    best_step: int
    fraction_over_lam: float
    lam: float
    samples: int
    t_max: int


def max_transfer_scan(
    g: Graph,
    policy: CoinPolicy,
    pair: tuple[int, int],
    samples: int = 1500,
    t_max: int = 100,
    seed: int = 0,
    lam: float = 0.9,
) -> ScanResult:
    """Haar-sample source coin states and track the target probability.

    Works on the source-to-target blocks of the step operator powers, so
    the cost per step is one small matrix product for all samples at
    once.
    """
    op = build_step_operator(g, policy)
    source, _ = pair
    d = op.space.degree(source)
    states = haar_states(d, samples, seed)      # (samples, d)
    per_sample_max = np.zeros(samples)
    best_probability = 0.0
    best_step = 0
    for t, block in enumerate(target_block_powers(op, pair, t_max), start=1):
        probs = np.sum(np.abs(states @ block.T) ** 2, axis=1)
        np.maximum(per_sample_max, probs, out=per_sample_max)
        step_best = float(probs.max())
        if step_best > best_probability:
            best_probability = step_best
            best_step = t
    fraction = float(np.mean(per_sample_max > lam))
    return ScanResult(
        max_probability=best_probability,
        best_step=best_step,
        fraction_over_lam=fraction,
        lam=lam,
        samples=samples,
        t_max=t_max,
    )
