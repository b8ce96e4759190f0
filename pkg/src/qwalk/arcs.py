"""Arc space of a graph and the flip-flop shift.

A coined walk lives on directed arcs.  Vertex v with degree d owns d
arcs, one per port.  Ports are ordered by ascending neighbor index, and
when v carries a self loop the loop arc sits last.  Arcs are laid out
vertex by vertex, so any per-vertex coin becomes a block-diagonal
matrix in this basis.

The flip-flop shift sends the arc (v -> w) to (w -> v) and leaves loop
arcs fixed, which makes it an involution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from qwalk.graphs import Graph

__all__ = ["ArcSpace", "shift_matrix"]


@dataclass(frozen=True)
class ArcSpace:
    graph: Graph
    heads: np.ndarray        # arc index -> vertex the arc leaves
    targets: np.ndarray      # arc index -> vertex the arc points at
    offsets: np.ndarray      # vertex -> index of its first arc
    reverse: np.ndarray      # arc index -> arc index under flip-flop

    @classmethod
    def from_graph(cls, g: Graph) -> "ArcSpace":
        heads: list[int] = []
        targets: list[int] = []
        offsets = np.zeros(g.n + 1, dtype=int)
        for v in range(g.n):
            offsets[v] = len(heads)
            for w in g.neighbors(v):
                heads.append(v)
                targets.append(w)
            if g.has_loop(v):
                heads.append(v)
                targets.append(v)
        offsets[g.n] = len(heads)
        heads_a = np.asarray(heads, dtype=int)
        targets_a = np.asarray(targets, dtype=int)
        index = {(v, w): a for a, (v, w) in enumerate(zip(heads, targets))}
        reverse = np.asarray([index[(w, v)] for v, w in zip(heads, targets)], dtype=int)
        for arr in (heads_a, targets_a, reverse, offsets):
            arr.flags.writeable = False
        return cls(g, heads_a, targets_a, offsets, reverse)

    @property
    def n_arcs(self) -> int:
        return len(self.heads)

    def ports(self, v: int) -> range:
        """Arc indices owned by vertex v, in port order."""
        return range(int(self.offsets[v]), int(self.offsets[v + 1]))

    def degree(self, v: int) -> int:
        return int(self.offsets[v + 1] - self.offsets[v])

    def arc(self, v: int, w: int) -> int:
        """Index of the arc leaving v toward w (w == v for a loop arc)."""
        for a in self.ports(v):
            if self.targets[a] == w:
                return a
        raise KeyError(f"no arc {v} -> {w}")

    def vertex_slice(self, v: int) -> slice:
        return slice(int(self.offsets[v]), int(self.offsets[v + 1]))


def shift_matrix(space: ArcSpace) -> np.ndarray:
    """Flip-flop shift as a dense permutation matrix over arcs."""
    m = space.n_arcs
    s = np.zeros((m, m), dtype=complex)
    s[space.reverse, np.arange(m)] = 1.0
    return s
