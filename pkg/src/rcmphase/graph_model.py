"""Template graphs with fixed endpoints, balance predicates and invariants.

Vertices are labeled 1..r (core, mapped to Poisson points) followed by
r+1..r+m (endpoints, pinned to fixed locations).  Every density comparison
is done on integers by cross-multiplication; ``0/0`` is read as ``0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Iterable

from .errors import AssumptionViolation, MalformedInput

Edge = tuple[int, int]


def _norm_edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class EndpointGraph:
    """Connected template G on core vertices [r] plus m pairwise non-adjacent endpoints."""

    r: int
    m: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        r, m = self.r, self.m
        if not isinstance(r, int) or r < 2:
            raise MalformedInput(f"core size r must be an integer >= 2, got {r!r}")
        if not isinstance(m, int) or m < 0:
            raise MalformedInput(f"endpoint count m must be a non-negative integer, got {m!r}")
        norm = set()
        for a, b in self.edges:
            if a == b:
                raise MalformedInput(f"self-loop at vertex {a}")
            if not (1 <= a <= r + m and 1 <= b <= r + m):
                raise MalformedInput(f"edge {a}-{b} has a label outside 1..{r + m}")
            norm.add(_norm_edge(a, b))
        object.__setattr__(self, "edges", frozenset(norm))

        for a, b in norm:
            if a > r and b > r:
                raise AssumptionViolation(
                    f"endpoints {a} and {b} are adjacent; endpoints must be pairwise non-adjacent"
                )
        if not _is_connected(range(1, r + 1), [e for e in norm if e[1] <= r]):
            raise AssumptionViolation("the subgraph induced on the core vertices 1..r is not connected")
        for k in range(r + 1, r + m + 1):
            if not any(k in e for e in norm):
                raise AssumptionViolation(
                    f"endpoint {k} has no neighbour, so the template graph is disconnected"
                )

    @classmethod
    def from_edges(cls, r: int, m: int, edges: Iterable[Edge]) -> "EndpointGraph":
        edges = list(edges)
        seen: set[Edge] = set()
        for a, b in edges:
            key = _norm_edge(a, b)
            if key in seen:
                raise MalformedInput(f"duplicate edge {a}-{b}")
            seen.add(key)
        return cls(r, m, frozenset(edges))

    @property
    def v(self) -> int:
        return self.r + self.m

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def core_edges(self) -> list[Edge]:
        return sorted(e for e in self.edges if e[1] <= self.r)

    @property
    def endpoint_edges(self) -> list[Edge]:
        """Pairs (core, endpoint) sorted by core then endpoint."""
        return sorted(e for e in self.edges if e[1] > self.r)

    def attachments(self, i: int) -> frozenset[int]:
        """Endpoints (labels r+1..r+m) adjacent to core vertex ``i``."""
        return frozenset(b for a, b in self.edges if a == i and b > self.r)

    def is_tree(self) -> bool:
        return self.e == self.v - 1

    def spec(self) -> str:
        body = ",".join(f"{a}-{b}" for a, b in sorted(self.edges))
        return f"r={self.r} m={self.m} edges={body}"


def _is_connected(vertices: Iterable[int], edges: Iterable[Edge]) -> bool:
    verts = list(vertices)
    if not verts:
        return True
    adj: dict[int, set[int]] = {u: set() for u in verts}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(verts)


_SPEC_RE = re.compile(r"^\s*r\s*=\s*(\S+)\s+m\s*=\s*(\S+)\s+edges\s*=\s*(\S*)\s*$")


def parse_graph_spec(text: str) -> EndpointGraph:
    """Parse ``"r=<int> m=<int> edges=<a>-<b>,..."`` (1-indexed labels)."""
    match = _SPEC_RE.match(text)
    if match is None:
        raise MalformedInput(f"expected 'r=<int> m=<int> edges=a-b,...', got {text!r}")
    try:
        r = int(match.group(1))
        m = int(match.group(2))
    except ValueError as exc:
        raise MalformedInput(f"r and m must be integers in {text!r}") from exc
    edges: list[Edge] = []
    body = match.group(3)
    for token in filter(None, body.split(",")):
        parts = token.split("-")
        if len(parts) != 2:
            raise MalformedInput(f"bad edge token {token!r}; expected a-b")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise MalformedInput(f"bad edge token {token!r}; labels must be integers") from exc
    return EndpointGraph.from_edges(r, m, edges)


def endpoint_degree_max(g: EndpointGraph) -> int:
    """Largest number of endpoints adjacent to a single core vertex (0 when m = 0)."""
    if g.m == 0:
        return 0
    return max(len(g.attachments(i)) for i in range(1, g.r + 1))


def critical_exponent(g: EndpointGraph) -> Fraction:
    """Decay exponent separating the normal regime from the Poisson boundary."""
    a = endpoint_degree_max(g)
    return max(Fraction(g.r - 1, g.e - a), Fraction(g.r, g.e))


# --------------------------------------------------------------------------
# balance predicates
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BalanceReport:
    balanced: bool
    strictly_balanced: bool
    strongly_balanced: bool
    k2_balanced: bool
    m_balanced: bool
    # vertex labels of the first induced subgraph breaking the m-balance condition
    witness: tuple[int, ...] | None = field(default=None)


def induced_edge_counts(v: int, edges: Iterable[Edge]) -> list[int]:
    """e(H) for every induced subgraph, indexed by vertex bitmask (bit k <-> label k+1)."""
    nbr = [0] * v
    for a, b in edges:
        nbr[a - 1] |= 1 << (b - 1)
        nbr[b - 1] |= 1 << (a - 1)
    counts = [0] * (1 << v)
    for mask in range(1, 1 << v):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        counts[mask] = counts[rest] + (nbr[low] & rest).bit_count()
    return counts


def _le(num1: int, den1: int, num2: int, den2: int) -> bool:
    """num1/den1 <= num2/den2 with positive denominators, or 0/0 read as 0."""
    if den1 == 0:
        num1, den1 = 0, 1
    if den2 == 0:
        num2, den2 = 0, 1
    return num1 * den2 <= num2 * den1


def _lt(num1: int, den1: int, num2: int, den2: int) -> bool:
    if den1 == 0:
        num1, den1 = 0, 1
    if den2 == 0:
        num2, den2 = 0, 1
    return num1 * den2 < num2 * den1


def balance_report(g: EndpointGraph) -> BalanceReport:
    """Evaluate every density predicate over all induced subgraphs of ``g``."""
    v, e = g.v, g.e
    m = g.m
    a = endpoint_degree_max(g)
    counts = induced_edge_counts(v, g.edges)
    full = (1 << v) - 1

    balanced = strict = strong = k2 = mbal = True
    witness = None
    for mask in range(1, full + 1):
        vh = mask.bit_count()
        eh = counts[mask]
        if not _le(eh, vh, e, v):
            balanced = False
        if mask != full and not _lt(eh, vh, e, v):
            strict = False
        if vh >= 2 and not _le(eh, vh - 1, e, v - 1):
            strong = False
        if vh >= 3 and not _le(eh - 1, vh - 2, e - 1, v - 2):
            k2 = False
        if vh >= m + 2 and not _le(eh - a, vh - m - 1, e - a, v - m - 1):
            if mbal:
                witness = tuple(k + 1 for k in range(v) if mask >> k & 1)
            mbal = False
    return BalanceReport(balanced, strict, strong, k2, mbal, witness)


def is_m_balanced(g: EndpointGraph) -> bool:
    return balance_report(g).m_balanced


# --------------------------------------------------------------------------
# automorphisms
# --------------------------------------------------------------------------


def automorphisms(g: EndpointGraph) -> list[tuple[int, ...]]:
    """Core permutations preserving core edges and every core vertex's endpoint set.

    Endpoints are fixed pointwise.  Each permutation is returned as the tuple
    of images of 1..r.  Backtracking search with adjacency pruning.
    """
    r = g.r
    adj = [[False] * (r + 1) for _ in range(r + 1)]
    for a, b in g.core_edges:
        adj[a][b] = adj[b][a] = True
    att = [frozenset()] + [g.attachments(i) for i in range(1, r + 1)]
    image = [0] * (r + 1)
    used = [False] * (r + 1)
    out: list[tuple[int, ...]] = []

    def extend(i: int) -> None:
        if i > r:
            out.append(tuple(image[1:]))
            return
        for w in range(1, r + 1):
            if used[w] or att[w] != att[i]:
                continue
            if any(adj[i][j] != adj[w][image[j]] for j in range(1, i)):
                continue
            image[i] = w
            used[w] = True
            extend(i + 1)
            used[w] = False

    extend(1)
    return out


def automorphism_count(g: EndpointGraph) -> int:
    return len(automorphisms(g))


def automorphism_count_bruteforce(g: EndpointGraph) -> int:
    """Same count by filtering all r! permutations; used as a test oracle."""
    r = g.r
    core = set(g.core_edges)
    att = {i: g.attachments(i) for i in range(1, r + 1)}
    total = 0
    for perm in permutations(range(1, r + 1)):
        sigma = dict(zip(range(1, r + 1), perm))
        if all(att[i] == att[sigma[i]] for i in sigma) and {
            _norm_edge(sigma[a], sigma[b]) for a, b in core
        } == core:
            total += 1
    return total
