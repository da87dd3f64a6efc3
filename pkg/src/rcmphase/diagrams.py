"""Quotient graphs obtained by overlaying n copies of a template and merging blocks."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch
from .graph_model import EndpointGraph
from .partitions import SetPartition


@dataclass(frozen=True)
class DiagramGraph:
    """Deduplicated quotient graph.

    Vertices ``1..block_count`` are the blocks in lexicographic order and
    ``block_count+1..block_count+m`` are the endpoints.
    """

    block_count: int
    m: int
    edges: frozenset[tuple[int, int]]

    @property
    def v(self) -> int:
        return self.block_count + self.m

    @property
    def e(self) -> int:
        return len(self.edges)


def _check(g: EndpointGraph, p: SetPartition) -> None:
    if p.r != g.r:
        raise DimensionMismatch(f"partition has {p.r} columns but the template has r={g.r}")


def quotient_graph(g: EndpointGraph, p: SetPartition) -> DiagramGraph:
    _check(g, p)
    block = p.block_of()
    nb = len(p.blocks)
    edges: set[tuple[int, int]] = set()
    for i in range(1, p.n + 1):
        for a, b in g.core_edges:
            u, w = block[(i, a)] + 1, block[(i, b)] + 1
            if u != w:  # only possible for flat partitions; loops are dropped
                edges.add((u, w) if u < w else (w, u))
        for a, k in g.endpoint_edges:
            edges.add((block[(i, a)] + 1, nb + (k - g.r)))
    return DiagramGraph(nb, g.m, frozenset(edges))


def diagram_point(g: EndpointGraph, p: SetPartition) -> tuple[int, int]:
    """Lattice point (nr + m - v(rho_G), n e(G) - e(rho_G))."""
    q = quotient_graph(g, p)
    return p.n * g.r + g.m - q.v, p.n * g.e - q.e


def endpoint_neighborhoods(g: EndpointGraph, p: SetPartition) -> list[frozenset[int]]:
    """For each endpoint j, the 1-based indices of blocks holding a cell whose column touches j."""
    _check(g, p)
    out = []
    for j in range(1, g.m + 1):
        cols = {a for a, k in g.endpoint_edges if k == g.r + j}
        out.append(frozenset(idx + 1 for idx, b in enumerate(p.blocks) if any(c in cols for _, c in b)))
    return out
