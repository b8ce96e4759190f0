"""Search harness: cycle variants, transfer surveys, parameter sweeps.

Variants of a base cycle are built by adding up to a handful of new
nodes, each wired to a nonempty subset of cycle vertices, with every
edge pattern among the new nodes.  Duplicates are removed with a
canonical key that marks the antipodal transfer pair, so two variants
count as the same when an isomorphism maps the pair onto itself.

For each variant and coin policy the harness records the best Haar
sampled transfer and, separately, an exact certificate: step t admits
perfect transfer from the source if and only if the source-to-target
block of U^t has a singular value of one.  The exact test catches the
measure-zero initial-state families that sampling always misses.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from qwalk.coins import CoinPolicy, UniformGrover, grover, interp_grover, parse_policy
from qwalk.dtqw import (
    StepOperator,
    build_step_operator,
    equal_superposition,
    haar_states,
    state_at_vertex,
    target_block_powers,
    vertex_probability,
)
from qwalk.errors import ConfigError
from qwalk.graphs import Cycle, Edgeless, Graph, Join, build, canonical_key

__all__ = [
    "VariantDescriptor",
    "build_variant",
    "enumerate_variants",
    "is_trivial_variant",
    "SearchRecord",
    "pst_search",
    "family_initial_state",
    "robustness_sweep",
    "RobustnessResult",
    "interpolation_sweep",
    "InterpolationResult",
]

PST_SINGULAR_TOL = 1e-9


# ===== Variant descriptors =====


@dataclass(frozen=True)
class VariantDescriptor:
    """A base cycle plus added nodes.

    attachments[i] is the set of cycle vertices node i wires into, and
    links lists index pairs of added nodes joined to each other.  Added
    nodes take indices base, base + 1, ... in the built graph.
    """

    base: int
    attachments: tuple[tuple[int, ...], ...]
    links: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.base < 3:
            raise ConfigError("variant base cycle needs at least 3 vertices")
        for sub in self.attachments:
            if not sub:
                raise ConfigError("each added node must attach to the cycle")
            if any(not 0 <= v < self.base for v in sub):
                raise ConfigError(f"attachment out of range: {sub}")
            if tuple(sorted(set(sub))) != sub:
                raise ConfigError(f"attachments must be sorted unique tuples: {sub}")
        k = len(self.attachments)
        for i, j in self.links:
            if not (0 <= i < j < k):
                raise ConfigError(f"bad link ({i}, {j}) for {k} added nodes")

    def to_json_dict(self) -> dict:
        return {
            "base": self.base,
            "attachments": [list(s) for s in self.attachments],
            "links": [list(l) for l in self.links],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "VariantDescriptor":
        return cls(
            base=data["base"],
            attachments=tuple(tuple(s) for s in data["attachments"]),
            links=tuple(tuple(l) for l in data["links"]),
        )


def build_variant(desc: VariantDescriptor) -> Graph:
    m = desc.base
    k = len(desc.attachments)
    adj = np.zeros((m + k, m + k))
    for v in range(m):
        adj[v, (v + 1) % m] = adj[(v + 1) % m, v] = 1
    for i, subset in enumerate(desc.attachments):
        for v in subset:
            adj[m + i, v] = adj[v, m + i] = 1
    for i, j in desc.links:
        adj[m + i, m + j] = adj[m + j, m + i] = 1
    return Graph(adj)


def is_trivial_variant(desc: VariantDescriptor, target: int) -> bool:
    """True when every added node touches the cycle only at the target."""
    return all(set(sub) == {target} for sub in desc.attachments)


def enumerate_variants(
    base: int, max_new: int
) -> Iterator[tuple[VariantDescriptor, Graph]]:
    """Deduplicated variants of an even cycle with up to max_new added nodes.

    The canonical key marks the antipodal pair {0, base/2} as a set, so
    mirror-image variants and source/target swaps collapse together.
    """
    if base < 4 or base % 2:
        raise ConfigError("variant enumeration expects an even base cycle >= 4")
    if max_new < 1:
        raise ConfigError("max_new must be at least 1")
    pair = (0, base // 2)
    subsets = [
        tuple(sorted(s))
        for r in range(1, base + 1)
        for s in itertools.combinations(range(base), r)
    ]
    seen: set[bytes] = set()
    for k in range(1, max_new + 1):
        link_choices = list(itertools.combinations(range(k), 2))
        for attachments in itertools.combinations_with_replacement(subsets, k):
            for link_count in range(len(link_choices) + 1):
                for links in itertools.combinations(link_choices, link_count):
                    desc = VariantDescriptor(base, attachments, links)
                    g = build_variant(desc)
                    key = canonical_key(g, marks=pair)
                    if key in seen:
                        continue
                    seen.add(key)
                    yield desc, g


# ===== Search =====


@dataclass(frozen=True)
class SearchRecord:
    """One (variant, policy) survey result.

    Transfer metrics cover the better of the two directions across the
    marked pair, since one representative stands for a variant and its
    mirror image.  ``pst`` means some step's source-to-target block had
    a unit singular value, so an exact-transfer initial state exists
    even when no Haar sample comes close.
    """

    key: str
    descriptor: dict
    policy: str
    best_p: float
    best_step: int
    pst: bool
    pst_steps: tuple[int, ...]
    frac_over_lambda: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "key": self.key,
                "descriptor": self.descriptor,
                "policy": self.policy,
                "best_p": self.best_p,
                "best_step": self.best_step,
                "pst": self.pst,
                "pst_steps": list(self.pst_steps),
                "frac_over_lambda": self.frac_over_lambda,
            }
        )

    @classmethod
    def from_json(cls, line: str) -> "SearchRecord":
        data = json.loads(line)
        return cls(
            key=data["key"],
            descriptor=data["descriptor"],
            policy=data["policy"],
            best_p=data["best_p"],
            best_step=data["best_step"],
            pst=data["pst"],
            pst_steps=tuple(data["pst_steps"]),
            frac_over_lambda=data["frac_over_lambda"],
        )


def _search_cell(
    g: Graph,
    policy: CoinPolicy,
    pair: tuple[int, int],
    samples: int,
    t_max: int,
    seeds: tuple[int, int],
    lam: float,
) -> tuple[float, int, bool, tuple[int, ...], float]:
    """Scan one variant under one policy and keep the stronger direction.

    Deduplication treats the marked pair as unordered, so one emitted
    representative can stand for a variant and its mirror image.  Those
    two differ dynamically (walking toward a modified vertex is not the
    same as walking away from it), so the scan runs the transfer both
    ways across the pair and reports whichever direction does better,
    preferring exact PST, then best probability, then sample fraction.
    """
    op = build_step_operator(g, policy)
    directions = (pair, (pair[1], pair[0]))
    states = [
        haar_states(op.space.degree(src), samples, sd)
        for (src, _), sd in zip(directions, seeds)
    ]
    slices = [
        (op.space.vertex_slice(src), op.space.vertex_slice(tgt))
        for src, tgt in directions
    ]
    per_sample_max = [np.zeros(samples), np.zeros(samples)]
    best = [(0.0, 0), (0.0, 0)]
    hits: list[list[int]] = [[], []]
    power = np.eye(op.space.n_arcs, dtype=complex)
    for t in range(1, t_max + 1):
        power = op.matrix @ power
        for i, (src_sl, tgt_sl) in enumerate(slices):
            block = power[tgt_sl, src_sl]
            probs = np.sum(np.abs(states[i] @ block.T) ** 2, axis=1)
            np.maximum(per_sample_max[i], probs, out=per_sample_max[i])
            step_best = float(probs.max())
            if step_best > best[i][0]:
                best[i] = (step_best, t)
            top_singular = np.linalg.svd(block, compute_uv=False)[0]
            if top_singular >= 1.0 - PST_SINGULAR_TOL:
                hits[i].append(t)
    outcomes = [
        (bool(hits[i]), best[i][0], float(np.mean(per_sample_max[i] > lam)), i)
        for i in range(2)
    ]
    pst, best_p, frac, pick = max(
        outcomes, key=lambda o: (o[0], o[1], o[2], -o[3])
    )
    return best_p, best[pick][1], pst, tuple(hits[pick]), frac


def pst_search(
    base: int,
    max_new: int,
    policies: Sequence[str] = ("O1", "O2", "O3"),
    samples: int = 1500,
    t_max: int = 100,
    lam: float = 0.9,
    seed: int = 0,
    sink_path: str | None = None,
    workers: int = 1,
) -> list[SearchRecord]:
    """Survey every variant under every policy and sort by best transfer.

    With a sink path, records append to a JSON-lines file as they are
    produced and cells already present in the file are skipped, so an
    interrupted enumeration resumes where it stopped.  Per-cell seeds
    derive from the master seed and the cell's position, which keeps
    results identical however many workers run.
    """
    pair = (0, base // 2)
    done: set[tuple[str, str]] = set()
    records: list[SearchRecord] = []
    if sink_path and os.path.exists(sink_path):
        with open(sink_path) as fh:
            for line in fh:
                if line.strip():
                    rec = SearchRecord.from_json(line)
                    records.append(rec)
                    done.add((rec.key, rec.policy))

    cells = []
    for idx, (desc, g) in enumerate(enumerate_variants(base, max_new)):
        key = canonical_key(g, marks=pair).hex()
        for policy_name in policies:
            if (key, policy_name) in done:
                continue
            cell_seed = np.random.SeedSequence([seed, idx, _policy_index(policy_name)])
            cells.append((key, desc, policy_name, cell_seed, pair, samples, t_max, lam))

    if workers > 1 and len(cells) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            fresh = list(pool.map(_run_cell, cells, chunksize=8))
    else:
        fresh = [_run_cell(cell) for cell in cells]

    sink = open(sink_path, "a") if sink_path else None
    try:
        for rec in fresh:
            if sink:
                sink.write(rec.to_json() + "\n")
            records.append(rec)
    finally:
        if sink:
            sink.close()
    records.sort(key=lambda r: -r.best_p)
    return records


def _policy_index(name: str) -> int:
    return {"O1": 1, "O2": 2, "O3": 3}.get(name, 99)


def _run_cell(cell) -> SearchRecord:
    key, desc, policy_name, cell_seed, pair, samples, t_max, lam = cell
    policy = parse_policy(policy_name)
    seeds = tuple(int(child.generate_state(1)[0]) for child in cell_seed.spawn(2))
    best_p, best_step, pst, pst_steps, frac = _search_cell(
        build_variant(desc), policy, pair, samples, t_max, seeds, lam
    )
    return SearchRecord(
        key=key,
        descriptor=desc.to_json_dict(),
        policy=policy_name,
        best_p=best_p,
        best_step=best_step,
        pst=pst,
        pst_steps=pst_steps,
        frac_over_lambda=frac,
    )


# ===== Initial-state family for tailed cycles =====


def family_initial_state(x: complex, y: complex) -> np.ndarray:
    """Three-port source state that hides the pendant port from the coin.

    For a cycle vertex carrying one pendant neighbor (ports ordered
    cycle, cycle, pendant), the Grover coin maps this state to (x, y, 0),
    so the walker runs around the cycle as if the pendant were absent
    and transfers perfectly to the antipodal vertex in half a lap.
    Any nonzero (x, y) works; the pair is scaled to unit length first.
    """
    scale = math.hypot(abs(x), abs(y))
    if scale < 1e-12:
        raise ConfigError("family_initial_state needs a nonzero (x, y)")
    x, y = x / scale, y / scale
    first = (2.0 * y - x) / 3.0
    second = (2.0 * x - y) / 3.0
    return np.asarray([first, second, 2.0 * (first + second)], dtype=complex)


# ===== Robustness sweep =====


@dataclass(frozen=True)
class RobustnessResult:
    kind: str
    n_values: tuple[int, ...]
    magnitudes: np.ndarray       # grid of delta or theta (empty for random)
    probabilities: np.ndarray    # (len(n_values), len(magnitudes)) or (len(n_values),)
    step: int


def _hub_cycle_block(n: int, step: int) -> tuple[StepOperator, np.ndarray]:
    g = build(Join(Edgeless(2), Cycle(n)))
    op = build_step_operator(g, UniformGrover())
    block = None
    for t, b in enumerate(target_block_powers(op, (0, 1), step), start=1):
        if t == step:
            block = b
    assert block is not None
    return op, block


def robustness_sweep(
    kind: str,
    n_values: Sequence[int],
    magnitudes: Sequence[float] | None = None,
    runs: int = 1000,
    seed: int = 0,
    step: int = 6,
) -> RobustnessResult:
    """Transfer at the perfect-transfer step under perturbed initial states.

    The reference walk is the hub pair joined to a cycle with Grover
    coins, which transfers perfectly at step 6 from the equal
    superposition.  Three perturbation kinds are supported.  "defect"
    scales one port amplitude by 1 - delta before renormalizing,
    "phase" multiplies one port by exp(i theta), and "random" draws an
    independent uniform delta in [0, 1] for every port, averaging the
    resulting transfer over the requested number of runs.
    """
    if kind not in ("defect", "phase", "random"):
        raise ConfigError(f"unknown robustness kind {kind!r}")
    n_values = tuple(int(n) for n in n_values)
    if kind == "random":
        means = np.empty(len(n_values))
        for i, n in enumerate(n_values):
            rng = np.random.default_rng(np.random.SeedSequence([seed, n]))
            _, block = _hub_cycle_block(n, step)
            deltas = rng.uniform(0.0, 1.0, size=(runs, n))
            states = 1.0 - deltas
            states = states / np.linalg.norm(states, axis=1, keepdims=True)
            probs = np.sum(np.abs(states @ block.T) ** 2, axis=1)
            means[i] = probs.mean()
        return RobustnessResult(kind, n_values, np.empty(0), means, step)

    mags = np.asarray(list(magnitudes if magnitudes is not None else []), dtype=float)
    if mags.size == 0:
        raise ConfigError(f"robustness kind {kind!r} needs a magnitude grid")
    out = np.empty((len(n_values), mags.size))
    for i, n in enumerate(n_values):
        _, block = _hub_cycle_block(n, step)
        for j, mag in enumerate(mags):
            amps = np.ones(n, dtype=complex)
            if kind == "defect":
                amps[-1] = 1.0 - mag
            else:
                amps[-1] = np.exp(1j * mag)
            amps = amps / np.linalg.norm(amps)
            out[i, j] = float(np.sum(np.abs(block @ amps) ** 2))
    return RobustnessResult(kind, n_values, mags, out, step)


# ===== Interpolation sweep =====


@dataclass(frozen=True)
class InterpolationResult:
    chain: str
    n_values: tuple[int, ...]
    c_grid: np.ndarray
    probabilities: np.ndarray  # (len(n_values), len(c_grid))
    step: int


class _InterpPolicy:
    """Grover everywhere except vertices with turned-on edges, which get
    the interpolating coin with their tunnel ports masked in arc order."""

    def __init__(self, turned_on: dict[int, set[int]], c: float):
        self.turned_on = turned_on
        self.c = c
        self.name = f"interp:{c}"

    def coin_for(self, g: Graph, v: int, d: int) -> np.ndarray:
        extra = self.turned_on.get(v)
        if not extra:
            return grover(d)
        nbrs = g.neighbors(v)
        tunnel = [i for i, w in enumerate(nbrs) if w in extra]
        t = len(tunnel)
        base = interp_grover(d, t, self.c)
        order = [i for i in range(d) if i not in tunnel] + tunnel
        inv = np.argsort(order)
        return base[np.ix_(inv, inv)]


_CHAINS = ("k2kn-k2cn", "k2kn-k2pn", "k2pn-k2cn")


def _chain_graphs(chain: str, n: int) -> tuple[Graph, Graph]:
    if chain == "k2kn-k2cn":
        return build(Join(Edgeless(2), Edgeless(n))), build(Join(Edgeless(2), Cycle(n)))
    if chain == "k2kn-k2pn":
        from qwalk.graphs import Path

        return build(Join(Edgeless(2), Edgeless(n))), build(Join(Edgeless(2), Path(n)))
    if chain == "k2pn-k2cn":
        from qwalk.graphs import Path

        return build(Join(Edgeless(2), Path(n))), build(Join(Edgeless(2), Cycle(n)))
    raise ConfigError(f"interpolation chain must be one of {_CHAINS}, got {chain!r}")


def interpolation_sweep(
    chain: str,
    n_values: Sequence[int],
    c_grid: Sequence[float],
    step: int = 6,
) -> InterpolationResult:
    """Transfer vs coupling as one graph's extra edges turn on.

    Walks run on the larger endpoint graph for c > 0, with the
    interpolating coin at every vertex that gains edges; c = 0 falls
    back to the plain Grover walk on the smaller endpoint.  The initial
    state is the equal superposition at hub 0 and the probability is
    read at hub 1 after the given step count.
    """
    n_values = tuple(int(n) for n in n_values)
    cs = np.asarray(list(c_grid), dtype=float)
    out = np.empty((len(n_values), cs.size))
    for i, n in enumerate(n_values):
        sparse, dense = _chain_graphs(chain, n)
        diff = dense.edge_set() - sparse.edge_set()
        turned_on: dict[int, set[int]] = {}
        for u, v in diff:
            turned_on.setdefault(u, set()).add(v)
            turned_on.setdefault(v, set()).add(u)
        for j, c in enumerate(cs):
            if c == 0.0:
                op = build_step_operator(sparse, UniformGrover())
            else:
                op = build_step_operator(dense, _InterpPolicy(turned_on, float(c)))
            psi = equal_superposition(op.space, 0)
            for _ in range(step):
                psi = op.matrix @ psi
            out[i, j] = vertex_probability(op.space, psi, 1)
    return InterpolationResult(chain, n_values, cs, out, step)
