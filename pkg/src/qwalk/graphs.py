"""Undirected graphs with optional edge weights and self loops.

A graph is stored as a symmetric non-negative adjacency matrix.  A self
loop is a single unit on the diagonal and contributes one to the degree
of its vertex.  Vertex indices are dense integers starting at zero, and
every construction helper documents where its pieces land so that walk
sources and targets can be addressed deterministically.

The join of two graphs keeps the left operand's vertices first, so for
example ``build(Join(Edgeless(2), Cycle(5)))`` places the two hub
vertices at indices 0 and 1 and the cycle at indices 2..6.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from qwalk.errors import ConfigError

__all__ = [
    "Graph",
    "Complete",
    "Cycle",
    "Path",
    "Edgeless",
    "Join",
    "DiamondChain",
    "Custom",
    "build",
    "complement",
    "canonical_key",
    "graph_to_json",
    "graph_from_json",
]

_SYMMETRY_TOL = 0.0  # adjacency must be exactly symmetric


# ===== Core container =====


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph backed by an adjacency matrix."""

    adjacency: np.ndarray

    def __post_init__(self) -> None:
        adj = np.asarray(self.adjacency, dtype=float)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ConfigError("adjacency must be a square matrix")
        if adj.shape[0] == 0:
            raise ConfigError("graph needs at least one vertex")
        if not np.array_equal(adj, adj.T):
            raise ConfigError("adjacency must be symmetric")
        if np.any(adj < 0):
            raise ConfigError("edge weights must be non-negative")
        if not np.all(np.isfinite(adj)):
            raise ConfigError("edge weights must be finite")
        adj = adj.copy()
        adj.flags.writeable = False
        object.__setattr__(self, "adjacency", adj)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def neighbors(self, v: int) -> list[int]:
        """Neighbors of v in ascending index order, excluding v itself."""
        row = self.adjacency[v]
        return [int(w) for w in np.nonzero(row)[0] if w != v]

    def has_loop(self, v: int) -> bool:
        return self.adjacency[v, v] != 0

    def degree(self, v: int) -> int:
        """Number of incident edge ends at v; a self loop counts once."""
        return len(self.neighbors(v)) + (1 if self.has_loop(v) else 0)

    @property
    def degrees(self) -> list[int]:
        return [self.degree(v) for v in range(self.n)]

    def is_unweighted(self) -> bool:
        adj = self.adjacency
        return bool(np.all((adj == 0) | (adj == 1)))

    def edge_set(self) -> set[tuple[int, int]]:
        """Off-diagonal edges as (i, j) pairs with i < j."""
        out = set()
        rows, cols = np.nonzero(self.adjacency)
        for i, j in zip(rows, cols):
            if i < j:
                out.add((int(i), int(j)))
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self.adjacency, other.adjacency)

    def __hash__(self) -> int:
        return hash(self.adjacency.tobytes())


# ===== Graph families =====


@dataclass(frozen=True)
class Complete:
    n: int


@dataclass(frozen=True)
class Cycle:
    n: int


@dataclass(frozen=True)
class Path:
    n: int


@dataclass(frozen=True)
class Edgeless:
    """n vertices, no edges (the complement of the complete graph)."""

    n: int


@dataclass(frozen=True)
class Join:
    """Join of two graphs: every left vertex joined to every right vertex.

    Left vertices come first in the result.
    """

    left: "FamilySpec"
    right: "FamilySpec"


@dataclass(frozen=True)
class DiamondChain:
    """Chain of n four-cycles glued at opposite corners.

    Vertices are ordered corner-first along the chain: corner 0, the two
    middle vertices of diamond 0, corner 1, the two middles of diamond 1,
    and so on, ending at corner n (index 3n).  The chain ends are the
    natural transfer pair.  With ``loop_ends`` a single self loop is added
    at each end vertex, raising its degree from 2 to 3.
    """

    n: int
    loop_ends: bool = False


@dataclass(frozen=True, eq=False)
class Custom:
    adjacency: np.ndarray


FamilySpec = Union[Complete, Cycle, Path, Edgeless, Join, DiamondChain, Custom]


def build(spec: FamilySpec) -> Graph:
    """Construct the graph a family dataclass describes."""
    if isinstance(spec, Complete):
        if spec.n < 1:
            raise ConfigError("complete graph requires n ≥ 1")
        adj = np.ones((spec.n, spec.n)) - np.eye(spec.n)
        return Graph(adj)
    if isinstance(spec, Cycle):
        if spec.n < 3:
            raise ConfigError("cycle requires n ≥ 3")
        adj = np.zeros((spec.n, spec.n))
        for v in range(spec.n):
            adj[v, (v + 1) % spec.n] = 1
            adj[(v + 1) % spec.n, v] = 1
        return Graph(adj)
    if isinstance(spec, Path):
        if spec.n < 2:
            raise ConfigError("path requires n ≥ 2")
        adj = np.zeros((spec.n, spec.n))
        for v in range(spec.n - 1):
            adj[v, v + 1] = 1
            adj[v + 1, v] = 1
        return Graph(adj)
    if isinstance(spec, Edgeless):
        if spec.n < 1:
            raise ConfigError("edgeless graph requires n ≥ 1")
        return Graph(np.zeros((spec.n, spec.n)))
    if isinstance(spec, Join):
        return _join(build(spec.left), build(spec.right))
    if isinstance(spec, DiamondChain):
        return _diamond_chain(spec.n, spec.loop_ends)
    if isinstance(spec, Custom):
        return Graph(np.asarray(spec.adjacency, dtype=float))
    raise ConfigError(f"unknown family spec: {spec!r}")


def _join(g: Graph, h: Graph) -> Graph:
    ng, nh = g.n, h.n
    adj = np.zeros((ng + nh, ng + nh))
    adj[:ng, :ng] = g.adjacency
    adj[ng:, ng:] = h.adjacency
    adj[:ng, ng:] = 1.0
    adj[ng:, :ng] = 1.0
    return Graph(adj)


def _diamond_chain(n: int, loop_ends: bool) -> Graph:
    if n < 1:
        raise ConfigError("diamond chain requires n ≥ 1")
    size = 3 * n + 1
    adj = np.zeros((size, size))
    for i in range(n):
        left = 3 * i
        top, bottom = 3 * i + 1, 3 * i + 2
        right = 3 * i + 3
        for mid in (top, bottom):
            adj[left, mid] = adj[mid, left] = 1
            adj[right, mid] = adj[mid, right] = 1
    if loop_ends:
        adj[0, 0] = 1
        adj[size - 1, size - 1] = 1
    return Graph(adj)


def complement(g: Graph) -> Graph:
    """Complement of an unweighted, loop-free graph."""
    if not g.is_unweighted():
        raise ConfigError("complement is defined for unweighted graphs only")
    if any(g.has_loop(v) for v in range(g.n)):
        raise ConfigError("complement is defined for loop-free graphs only")
    adj = 1.0 - g.adjacency - np.eye(g.n)
    return Graph(adj)


# ===== Canonical keys =====


def _refine_colors(adj: np.ndarray, colors: list[int]) -> list[int]:
    """Stabilize a vertex coloring under neighborhood signatures.

    Classic 1-dimensional refinement: a vertex's new color is its old
    color together with the sorted multiset of neighbor colors, renamed
    to dense integers in a vertex-order-independent way.
    """
    n = adj.shape[0]
    while True:
        signatures = []
        for v in range(n):
            nbr = tuple(sorted(colors[w] for w in np.nonzero(adj[v])[0] if w != v))
            signatures.append((colors[v], int(adj[v, v] != 0), nbr))
        ranked = {sig: rank for rank, sig in enumerate(sorted(set(signatures)))}
        new_colors = [ranked[sig] for sig in signatures]
        if new_colors == colors:
            return colors
        colors = new_colors


def _color_classes(colors: list[int]) -> list[list[int]]:
    classes: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        classes.setdefault(c, []).append(v)
    return [classes[c] for c in sorted(classes)]


def _orderings(classes: list[list[int]]) -> Iterator[tuple[int, ...]]:
    pools = [itertools.permutations(cls) for cls in classes]
    for combo in itertools.product(*pools):
        yield tuple(itertools.chain.from_iterable(combo))


def canonical_key(g: Graph, marks: Sequence[int] = ()) -> bytes:
    """Relabeling-invariant key for an unweighted graph.

    ``marks`` singles out a set of vertices (for instance a transfer
    pair); two marked graphs get equal keys exactly when some
    isomorphism maps marks onto marks.  The key is the minimum adjacency
    bitstring over all vertex orders consistent with a structure-refined
    coloring, which prunes the search well below n factorial for
    anything that is not highly symmetric.
    """
    if not g.is_unweighted():
        raise ConfigError("canonical_key supports unweighted graphs only")
    adj = g.adjacency
    n = g.n
    mark_set = set(marks)
    if any(not 0 <= v < n for v in mark_set):
        raise ConfigError("mark vertex out of range")
    colors = _refine_colors(adj, [1 if v in mark_set else 0 for v in range(n)])
    classes = _color_classes(colors)
    best: bytes | None = None
    for order in _orderings(classes):
        perm = np.asarray(order)
        rel = adj[np.ix_(perm, perm)]
        bits = bytearray()
        for i in range(n):
            for j in range(i, n):
                bits.append(1 if rel[i, j] else 0)
        key = bytes([n]) + bytes(bits)
        if best is None or key < best:
            best = key
    assert best is not None
    return best


# ===== Serialization =====


def graph_to_json(g: Graph) -> str:
    """Serialize to the {"n", "edges", "loops"} JSON schema."""
    edges = []
    rows, cols = np.nonzero(g.adjacency)
    for i, j in zip(rows, cols):
        if i < j:
            edges.append([int(i), int(j), float(g.adjacency[i, j])])
    loops = [int(v) for v in range(g.n) if g.has_loop(v)]
    return json.dumps({"n": g.n, "edges": edges, "loops": loops})


def graph_from_json(text: str) -> Graph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid graph JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("graph JSON must be an object")
    for key in ("n", "edges", "loops"):
        if key not in data:
            raise ConfigError(f"graph JSON missing field {key!r}")
    n = data["n"]
    if not isinstance(n, int) or n < 1:
        raise ConfigError("graph JSON field 'n' must be a positive integer")
    adj = np.zeros((n, n))
    for entry in data["edges"]:
        if len(entry) != 3:
            raise ConfigError(f"edge entry must be [i, j, weight]: {entry!r}")
        i, j, w = entry
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise ConfigError(f"edge endpoints out of range: {entry!r}")
        adj[i, j] = adj[j, i] = float(w)
    for v in data["loops"]:
        if not 0 <= v < n:
            raise ConfigError(f"loop vertex out of range: {v!r}")
        adj[v, v] = 1.0
    return Graph(adj)
