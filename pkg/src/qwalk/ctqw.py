"""Continuous-time walk generated by the adjacency matrix.

The Hamiltonian is gamma * A with gamma fixed at 1.  Evolution goes
through the eigendecomposition, psi(t) = V exp(-i Lambda t) V* psi(0),
so states at arbitrary times cost one small matrix product each.
Transfer detection scans a time grid and sharpens every local maximum
with golden-section search, and only the refined values are allowed to
certify perfect transfer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qwalk.errors import ConfigError, ToleranceError
from qwalk.graphs import Graph

__all__ = [
    "Spectrum",
    "evolve_ct",
    "evolve_ct_many",
    "detect_transfer_ct",
    "analytic_pair_hub_state",
    "CtTransferReport",
    "golden_section_max",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of an adjacency matrix, checked on construction."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns

    @classmethod
    def from_graph(cls, g: Graph, reconstruction_tol: float = 1e-9) -> "Spectrum":
        vals, vecs = np.linalg.eigh(g.adjacency)
        err = np.abs(vecs @ np.diag(vals) @ vecs.T - g.adjacency).max()
        if err > reconstruction_tol:
            raise ToleranceError(f"eigendecomposition residual {err:.3e}")
        return cls(vals, vecs)

    def propagate(self, psi0: np.ndarray, t: float) -> np.ndarray:
        phases = np.exp(-1j * self.eigenvalues * t)
        return self.eigenvectors @ (phases * (self.eigenvectors.T @ psi0))


def evolve_ct(g: Graph, psi0: np.ndarray, t: float) -> np.ndarray:
    """State of the continuous walk at time t from a unit initial state."""
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape != (g.n,):
        raise ConfigError(f"state has {psi0.shape} entries, graph has {g.n} vertices")
    return Spectrum.from_graph(g).propagate(psi0, t)


def evolve_ct_many(spec: Spectrum, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
    """(len(times), n) array of states, one row per requested time."""
    coeff = spec.eigenvectors.T @ np.asarray(psi0, dtype=complex)
    phases = np.exp(-1j * np.outer(times, spec.eigenvalues))
    return (phases * coeff) @ spec.eigenvectors.T


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-12) -> tuple[float, float]:
    """Locate the maximum of a unimodal function on [lo, hi]."""
    a, b = lo, hi
    h = b - a
    c = b - _INVPHI * h
    d = a + _INVPHI * h
    fc, fd = f(c), f(d)
    while h > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            h = b - a
            c = b - _INVPHI * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


@dataclass(frozen=True)
class CtTransferReport:
    source: int
    target: int
    times: np.ndarray
    target_series: np.ndarray
    pst_times: tuple[float, ...]
    period: float | None
    max_probability: float
    max_time: float
    high_amplitude: bool
    lam: float
    pst_tol: float

    def to_json_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "pst_times": list(self.pst_times),
            "period": self.period,
            "max_probability": self.max_probability,
            "max_time": self.max_time,
            "high_amplitude": self.high_amplitude,
            "lam": self.lam,
            "pst_tol": self.pst_tol,
        }


def _refined_maxima(series: np.ndarray, times: np.ndarray, value_at) -> list[tuple[float, float]]:
    """Golden-section refinement of every interior local maximum of a grid scan."""
    out = []
    for i in range(1, len(series) - 1):
        if series[i] >= series[i - 1] and series[i] > series[i + 1]:
            t, p = golden_section_max(value_at, times[i - 1], times[i + 1])
            out.append((t, p))
    return out


def detect_transfer_ct(
    g: Graph,
    pair: tuple[int, int],
    t_max: float = 100.0,
    dt: float = 0.01,
    lam: float = 0.9,
    pst_tol: float = 1e-9,
) -> CtTransferReport:
    """Scan [0, t_max] for transfer and periodicity of the continuous walk."""
    source, target = pair
    spec = Spectrum.from_graph(g)
    psi0 = np.zeros(g.n, dtype=complex)
    psi0[source] = 1.0
    times = np.arange(0.0, t_max + dt / 2, dt)
    states = evolve_ct_many(spec, psi0, times)
    target_series = np.abs(states[:, target]) ** 2

    def target_prob(t: float) -> float:
        return float(np.abs(spec.propagate(psi0, t)[target]) ** 2)

    def source_fidelity(t: float) -> float:
        return float(np.abs(np.vdot(psi0, spec.propagate(psi0, t))) ** 2)

    maxima = _refined_maxima(target_series, times, target_prob)
    pst_times = tuple(t for t, p in maxima if p >= 1.0 - pst_tol)
    if maxima:
        max_time, max_probability = max(maxima, key=lambda tp: tp[1])
    else:
        max_time, max_probability = 0.0, float(target_series[0])
    grid_best = int(np.argmax(target_series))
    if target_series[grid_best] > max_probability:
        max_time, max_probability = float(times[grid_best]), float(target_series[grid_best])

    fid_series = np.abs(np.conj(psi0) @ states.T) ** 2
    # skip the trivial peak at t = 0: look only after fidelity first dips
    dipped = np.nonzero(fid_series < 0.5)[0]
    period = None
    if dipped.size:
        start = dipped[0]
        for t, p in _refined_maxima(fid_series[start:], times[start:], source_fidelity):
            if p >= 1.0 - pst_tol:
                period = t
                break
    return CtTransferReport(
        source=source,
        target=target,
        times=times,
        target_series=target_series,
        pst_times=pst_times,
        period=period,
        max_probability=max_probability,
        max_time=max_time,
        high_amplitude=max_probability > lam,
        lam=lam,
        pst_tol=pst_tol,
    )


def analytic_pair_hub_state(n: int, t: float) -> np.ndarray:
    """Closed-form continuous walk on Join(Edgeless(2), Edgeless(n)).

    Vertex order matches the join convention: source hub 0, target hub 1,
    then the n bulk vertices.  Starting from the source, the amplitudes
    are (cos(w t) + 1) / 2 at the source, (cos(w t) - 1) / 2 at the
    target, and -i sin(w t) / sqrt(2 n) on each bulk vertex, where
    w = sqrt(2 n).  The walk is periodic with period 2 pi / w and the
    target amplitude peaks at half the period.
    """
    if n < 0:
        raise ConfigError("analytic_pair_hub_state requires n >= 0")
    out = np.zeros(n + 2, dtype=complex)
    if n == 0:
        out[0] = 1.0
        return out
    w = math.sqrt(2.0 * n)
    out[0] = (math.cos(w * t) + 1.0) / 2.0
    out[1] = (math.cos(w * t) - 1.0) / 2.0
    out[2:] = -1j * math.sin(w * t) / w
    return out
