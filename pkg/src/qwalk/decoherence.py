"""Dephasing noise for discrete and continuous walks.

Density matrices evolve one step as

    rho' = (1 - p) W rho W* + p sum_j P_j W rho W* P_j

with W the unitary step and the P_j an orthogonal projector family.
Because every family used here projects onto coordinate subspaces of
the arc basis, the projected sum is an elementwise mask: entries whose
row and column fall in the same subspace survive, the rest are zeroed.

Three families are offered for the discrete walk.  Position dephasing
projects onto vertex blocks, killing coherence between vertices while
leaving each vertex's port coherences alone.  Coin dephasing projects
onto port-index classes across vertices, killing coherence between
different port indices.  Dephasing in both erases everything off the
arc diagonal; with coins whose entries all share one magnitude this
reproduces the classical random walk exactly.

The continuous version integrates

    drho/dt = -i [A, rho] - p rho + p sum_j P_j rho P_j

with a fixed-step fourth-order Runge-Kutta scheme, halving the step
until the trace drift stays below 1e-8.  Its projectors are the vertex
basis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qwalk.arcs import ArcSpace
from qwalk.dtqw import StepOperator
from qwalk.errors import ConfigError, ToleranceError
from qwalk.graphs import Graph

__all__ = [
    "NoiseModel",
    "dephasing_mask",
    "decohere_step",
    "evolve_density",
    "decohere_ct",
    "density_from_state",
    "validate_density",
    "classical_transition_matrix",
    "classical_walk",
    "vertex_marginal",
    "target_probability_vs_rate",
    "RateSweep",
]

_BASES = ("position", "coin", "both")


@dataclass(frozen=True)
class NoiseModel:
    basis: str
    rate: float

    def __post_init__(self) -> None:
        if self.basis not in _BASES:
            raise ConfigError(f"noise basis must be one of {_BASES}, got {self.basis!r}")
        if not 0.0 <= self.rate <= 1.0:
            raise ConfigError(f"noise rate must lie in [0, 1], got {self.rate}")


def dephasing_mask(space: ArcSpace, basis: str) -> np.ndarray:
    """0/1 matrix marking arc pairs that survive the projector sum."""
    m = space.n_arcs
    if basis == "both":
        return np.eye(m)
    if basis == "position":
        labels = space.heads
    elif basis == "coin":
        labels = np.asarray(
            [a - space.offsets[space.heads[a]] for a in range(m)], dtype=int
        )
    else:
        raise ConfigError(f"unknown dephasing basis {basis!r}")
    return (labels[:, None] == labels[None, :]).astype(float)


def density_from_state(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def validate_density(rho: np.ndarray, tol: float = 1e-8) -> None:
    if abs(np.trace(rho).real - 1.0) > tol or abs(np.trace(rho).imag) > tol:
        raise ToleranceError(f"density trace {np.trace(rho)!r} drifted from 1")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ToleranceError("density matrix lost Hermiticity")
    lo = np.linalg.eigvalsh(rho).min()
    if lo < -tol:
        raise ToleranceError(f"density matrix lost positivity (min eigenvalue {lo:.3e})")


def decohere_step(rho: np.ndarray, op: StepOperator, noise: NoiseModel) -> np.ndarray:
    """One noisy step of the discrete walk."""
    mask = dephasing_mask(op.space, noise.basis)
    return _noisy_step(rho, op.matrix, mask, noise.rate)


def _noisy_step(rho: np.ndarray, u: np.ndarray, mask: np.ndarray, p: float) -> np.ndarray:
    rot = u @ rho @ u.conj().T
    if p == 0.0:
        return rot
    return (1.0 - p) * rot + p * (rot * mask)


def evolve_density(
    rho0: np.ndarray, op: StepOperator, noise: NoiseModel, steps: int
) -> list[np.ndarray]:
    """Density matrices after each step, starting list with the input."""
    mask = dephasing_mask(op.space, noise.basis)
    out = [np.asarray(rho0, dtype=complex)]
    for _ in range(steps):
        out.append(_noisy_step(out[-1], op.matrix, mask, noise.rate))
    return out


def decohere_ct(
    g: Graph,
    rho0: np.ndarray,
    rate: float,
    t: float,
    dt: float = 1e-3,
    trace_tol: float = 1e-8,
    max_halvings: int = 8,
) -> np.ndarray:
    """Integrate the dephasing master equation to time t.

    Fixed-step RK4 on the vertex basis; the step is halved until the
    trace drifts by less than trace_tol over the whole integration.
    """
    a = g.adjacency.astype(complex)
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (g.n, g.n):
        raise ConfigError(f"density is {rho0.shape}, graph has {g.n} vertices")
    eye_mask = np.eye(g.n)

    def rhs(rho: np.ndarray) -> np.ndarray:
        comm = a @ rho - rho @ a
        return -1j * comm - rate * rho + rate * (rho * eye_mask)

    step = dt
    for _ in range(max_halvings + 1):
        rho = rho0.copy()
        n_steps = max(1, int(round(t / step))) if t > 0 else 0
        h = t / n_steps if n_steps else 0.0
        for _ in range(n_steps):
            k1 = rhs(rho)
            k2 = rhs(rho + 0.5 * h * k1)
            k3 = rhs(rho + 0.5 * h * k2)
            k4 = rhs(rho + h * k3)
            rho = rho + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        drift = abs(np.trace(rho).real - 1.0) + abs(np.trace(rho).imag)
        if drift < trace_tol:
            return rho
        step /= 2.0
    raise ToleranceError(f"trace drift {drift:.3e} persists at dt = {step * 2:.3e}")


# ===== Classical reference walk =====


def classical_transition_matrix(g: Graph) -> np.ndarray:
    """Column-stochastic matrix of the uniform random walk on g.

    From vertex v the walker moves along each incident edge with
    probability 1/degree(v); a self loop counts as an edge back to v.
    """
    n = g.n
    t = np.zeros((n, n))
    for v in range(n):
        d = g.degree(v)
        if d == 0:
            t[v, v] = 1.0
            continue
        for w in g.neighbors(v):
            t[w, v] += 1.0 / d
        if g.has_loop(v):
            t[v, v] += 1.0 / d
    return t


def classical_walk(g: Graph, start, steps: int) -> np.ndarray:
    """Distribution over vertices after the given number of steps.

    ``start`` is either a vertex index or a probability distribution over
    the vertices (non-negative, summing to one).
    """
    if np.isscalar(start):
        dist = np.zeros(g.n)
        dist[int(start)] = 1.0
    else:
        dist = np.asarray(start, dtype=float).copy()
        if dist.shape != (g.n,):
            raise ConfigError(f"start distribution has shape {dist.shape}, expected ({g.n},)")
        if np.any(dist < 0) or abs(dist.sum() - 1.0) > 1e-9:
            raise ConfigError("start distribution must be non-negative and sum to 1")
    t = classical_transition_matrix(g)
    for _ in range(steps):
        dist = t @ dist
    return dist


def vertex_marginal(space: ArcSpace, rho: np.ndarray) -> np.ndarray:
    """Probability per vertex from an arc-basis density matrix."""
    diag = np.real(np.diag(rho))
    return np.asarray([diag[space.vertex_slice(v)].sum() for v in range(space.graph.n)])


# ===== Rate sweeps =====


@dataclass(frozen=True)
class RateSweep:
    rates: np.ndarray
    probabilities: np.ndarray
    step: int
    basis: str


def target_probability_vs_rate(
    g: Graph,
    policy,
    init: np.ndarray,
    pair: tuple[int, int],
    rates: np.ndarray,
    step: int,
    basis: str = "coin",
) -> RateSweep:
    """Target probability at a fixed step as the noise rate varies."""
    from qwalk.dtqw import build_step_operator

    op = build_step_operator(g, policy)
    rho0 = density_from_state(init)
    target = pair[1]
    sl = op.space.vertex_slice(target)
    probs = np.empty(len(rates))
    mask = dephasing_mask(op.space, basis)
    for i, p in enumerate(np.asarray(rates, dtype=float)):
        rho = rho0
        for _ in range(step):
            rho = _noisy_step(rho, op.matrix, mask, float(p))
        validate_density(rho)
        probs[i] = np.real(np.trace(rho[sl, sl]))
    return RateSweep(np.asarray(rates, dtype=float), probs, step, basis)
