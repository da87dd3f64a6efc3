"""Counting endpoint-labelled templates by structural and balance conditions.

For every connected graph on r+m vertices and every choice of m vertices as
endpoints, a configuration is kept when the endpoints are independent and the
remaining r vertices induce a connected graph.  Configurations are merged up
to isomorphisms that map cores to cores and endpoints to endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, MalformedInput, SourceEmpty
from .graph_model import EndpointGraph, balance_report

MAX_INTERNAL_VERTICES = 7


@lru_cache(maxsize=None)
def _perm_table(sizes: tuple[int, ...]) -> np.ndarray:
    """All relabelings permuting each consecutive colour class within itself."""
    blocks = []
    start = 0
    for s in sizes:
        blocks.append(list(permutations(range(start, start + s))))
        start += s
    rows = [[]]
    for block in blocks:
        rows = [row + list(p) for row in rows for p in block]
    return np.array(rows, dtype=np.int64).reshape(len(rows), start)


def _edge_arrays(edges: Iterable[tuple[int, int]]) -> tuple[np.ndarray, np.ndarray]:
    edges = list(edges)
    ea = np.array([a for a, _ in edges], dtype=np.int64)
    eb = np.array([b for _, b in edges], dtype=np.int64)
    return ea, eb


def canonical_mask(edges: Iterable[tuple[int, int]], sizes: tuple[int, ...]) -> int:
    """Canonical form of a vertex-coloured graph (0-based edges, colour classes as consecutive ranges)."""
    ea, eb = _edge_arrays(edges)
    if ea.size == 0:
        return 0
    return int(_kernels.min_edge_mask(ea, eb, _perm_table(sizes)))


def _mask_to_adjacency(mask: int, v: int) -> np.ndarray:
    adj = np.zeros((v, v), dtype=np.uint8)
    for j in range(1, v):
        for i in range(j):
            if mask >> (j * (j - 1) // 2 + i) & 1:
                adj[i, j] = adj[j, i] = 1
    return adj


def _adjacency_edges(adj: np.ndarray) -> list[tuple[int, int]]:
    n = adj.shape[0]
    return [(i, j) for j in range(1, n) for i in range(j) if adj[i, j]]


@lru_cache(maxsize=None)
def _connected_masks(v: int) -> tuple[int, ...]:
    if v == 1:
        return (0,)
    found = set()
    for mask in _connected_masks(v - 1):
        base = _adjacency_edges(_mask_to_adjacency(mask, v - 1))
        # every connected graph has a vertex whose removal keeps it connected
        for k in range(1, v):
            for nbrs in combinations(range(v - 1), k):
                found.add(canonical_mask(base + [(u, v - 1) for u in nbrs], (v,)))
    return tuple(sorted(found))


def connected_graphs(v: int) -> list[np.ndarray]:
    """One adjacency matrix per isomorphism class of connected graphs on v vertices."""
    if not 1 <= v <= MAX_INTERNAL_VERTICES:
        raise MalformedInput(
            f"internal generator covers 1..{MAX_INTERNAL_VERTICES} vertices; supply graph6 input for v={v}"
        )
    return [_mask_to_adjacency(mask, v) for mask in _connected_masks(v)]


def _connected(vertices: list[int], adj: np.ndarray) -> bool:
    seen = {vertices[0]}
    stack = [vertices[0]]
    allowed = set(vertices)
    while stack:
        u = stack.pop()
        for w in allowed:
            if w not in seen and adj[u, w]:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vertices)


def endpoint_templates(r: int, m: int, source: Iterable[np.ndarray]) -> list[EndpointGraph]:
    """Distinct endpoint-labelled templates (cores 1..r, endpoints r+1..r+m) built from the source."""
    v = r + m
    classes: dict[int, EndpointGraph] = {}
    seen_any = False
    for adj in source:
        seen_any = True
        adj = np.asarray(adj)
        if adj.shape != (v, v):
            raise DimensionMismatch(f"source graph has {adj.shape[0]} vertices, expected r+m={v}")
        for ends in combinations(range(v), m):
            if any(adj[i, j] for i in ends for j in ends):
                continue
            core = [u for u in range(v) if u not in ends]
            if not _connected(core, adj):
                continue
            relabel = {u: k for k, u in enumerate(core)}
            relabel.update({u: r + k for k, u in enumerate(ends)})
            edges = [
                tuple(sorted((relabel[i], relabel[j]))) for i, j in _adjacency_edges(adj)
            ]
            key = canonical_mask(edges, (r, m))
            if key not in classes:
                classes[key] = EndpointGraph(r, m, frozenset((a + 1, b + 1) for a, b in edges))
    if not seen_any:
        raise SourceEmpty(f"no source graphs on {v} vertices were supplied")
    return [classes[k] for k in sorted(classes)]


@dataclass(frozen=True)
class CensusRow:
    r: int
    m: int
    t: int
    g: int
    a: int

    def to_csv(self) -> str:
        return f"{self.r},{self.m},{self.t},{self.g},{self.a}"


def census(r: int, m: int, source: Iterable[np.ndarray] | None = None) -> CensusRow:
    """Counts (trees passing m-balance, templates passing m-balance, all templates)."""
    if r < 2 or m < 0:
        raise MalformedInput("need r >= 2 and m >= 0")
    if source is None:
        source = connected_graphs(r + m)
    templates = endpoint_templates(r, m, source)
    good = [g for g in templates if balance_report(g).m_balanced]
    trees = sum(1 for g in good if g.is_tree())
    return CensusRow(r, m, trees, len(good), len(templates))
