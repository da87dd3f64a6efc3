"""Diagram point sets Sigma_n(G, m), their upper convex boundary and leading points.

Everything here is exact: coordinates are integers, slopes are ``Fraction``
and the only non-rational value is ``math.inf`` for the left-end convention.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _kernels
from .diagrams import diagram_point
from .errors import MalformedInput, NotOnBoundary
from .graph_model import EndpointGraph
from .partitions import _check_budget, enumerate_cnf

Point = tuple[int, int]
Slope = Fraction | float  # float only ever holds math.inf


@dataclass(frozen=True)
class SigmaSet:
    n: int
    points: tuple[Point, ...]
    # number of diagrams mapping to each point
    multiplicity: dict[Point, int]

    def __hash__(self) -> int:
        return hash((self.n, self.points))


def template_arrays(g: EndpointGraph) -> tuple[np.ndarray, ...]:
    """0-based edge arrays in the layout expected by the histogram kernel."""
    core = g.core_edges
    ends = g.endpoint_edges
    core_a = np.array([b - 1 for a, b in core], dtype=np.int64)
    core_b = np.array([a - 1 for a, b in core], dtype=np.int64)
    end_a = np.array([a - 1 for a, k in ends], dtype=np.int64)
    end_k = np.array([k - g.r - 1 for a, k in ends], dtype=np.int64)
    return core_a, core_b, end_a, end_k


def diagram_histogram(g: EndpointGraph, n: int, connected_only: bool = True) -> np.ndarray:
    """``h[b, e]`` = number of (connected) non-flat diagrams with b blocks and e quotient edges."""
    core_a, core_b, end_a, end_k = template_arrays(g)
    return _kernels.diagram_histogram(n, g.r, core_a, core_b, end_a, end_k, g.m, connected_only)


@lru_cache(maxsize=128)
def _sigma_cached(g: EndpointGraph, n: int) -> SigmaSet:
    hist = diagram_histogram(g, n)
    mult: dict[Point, int] = {}
    for b, ec in zip(*np.nonzero(hist)):
        mult[(n * g.r - int(b), n * g.e - int(ec))] = int(hist[b, ec])
    return SigmaSet(n, tuple(sorted(mult)), mult)


def sigma_set(g: EndpointGraph, n: int, budget: int | None = None) -> SigmaSet:
    """Exact point set over CNF(n, r), sorted lexicographically, with multiplicities."""
    if n < 1:
        raise MalformedInput(f"order n must be >= 1, got {n}")
    _check_budget(n, g.r, budget)
    return _sigma_cached(g, n)


def sigma_set_python(g: EndpointGraph, n: int, budget: int | None = None) -> SigmaSet:
    """Reference implementation through explicit quotient graphs (slow)."""
    mult: dict[Point, int] = {}
    for p in enumerate_cnf(n, g.r, budget):
        pt = diagram_point(g, p)
        mult[pt] = mult.get(pt, 0) + 1
    return SigmaSet(n, tuple(sorted(mult)), mult)


# --------------------------------------------------------------------------
# upper hull
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class HullChain:
    vertices: tuple[Point, ...]
    # every input point lying on the chain, collinear interior points included
    boundary: tuple[Point, ...]

    def slopes(self) -> list[Fraction]:
        v = self.vertices
        return [Fraction(v[i + 1][1] - v[i][1], v[i + 1][0] - v[i][0]) for i in range(len(v) - 1)]


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_chain(vertices: tuple[Point, ...], pt: Point) -> int | None:
    """Index i of the chain edge [v_i, v_{i+1}] containing pt, len-1 for the last vertex."""
    x, y = pt
    if len(vertices) == 1:
        return 0 if pt == vertices[0] else None
    for i in range(len(vertices) - 1):
        (x0, y0), (x1, y1) = vertices[i], vertices[i + 1]
        if x0 <= x <= x1 and (y - y0) * (x1 - x0) == (y1 - y0) * (x - x0):
            return i if pt != vertices[i + 1] else i + 1
    return None


def upper_hull(s: SigmaSet | list[Point] | tuple[Point, ...]) -> HullChain:
    points = list(s.points if isinstance(s, SigmaSet) else s)
    if not points:
        raise MalformedInput("cannot take the hull of an empty point set")
    top: dict[int, int] = {}
    for x, y in points:
        if x not in top or y > top[x]:
            top[x] = y
    chain: list[Point] = []
    for p in sorted(top.items()):
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) >= 0:
            chain.pop()
        chain.append(p)
    vertices = tuple(chain)
    boundary = tuple(sorted(p for p in set(points) if _on_chain(vertices, p) is not None))
    return HullChain(vertices, boundary)


def is_segment(c: HullChain) -> bool:
    return len(c.vertices) <= 2


def local_slopes(c: HullChain, pt: Point) -> tuple[Slope, Slope]:
    """Incoming and outgoing boundary slopes at ``pt`` (inf on the left end, 0 on the right end)."""
    idx = _on_chain(c.vertices, tuple(pt))
    if idx is None:
        raise NotOnBoundary(f"point {tuple(pt)} is not on the upper boundary")
    v = c.vertices
    slopes = c.slopes()
    if tuple(pt) == v[idx]:
        left: Slope = math.inf if idx == 0 else slopes[idx - 1]
        right: Slope = Fraction(0) if idx == len(v) - 1 else slopes[idx]
        return left, right
    # strictly inside edge idx
    return slopes[idx], slopes[idx]


def leading_points(g: EndpointGraph, n: int, alpha: Fraction, budget: int | None = None) -> list[Point]:
    """Boundary points whose diagrams dominate the n-th cumulant when c = lambda^(-alpha)."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise MalformedInput("alpha must be positive")
    inv = 1 / alpha
    chain = upper_hull(sigma_set(g, n, budget))
    out = []
    for pt in chain.boundary:
        lo, hi = local_slopes(chain, pt)
        if lo >= inv and hi <= inv:
            out.append(pt)
    return out


# --------------------------------------------------------------------------
# output
# --------------------------------------------------------------------------


def sigma_csv(s: SigmaSet, chain: HullChain | None = None) -> str:
    chain = chain or upper_hull(s)
    on = set(chain.boundary)
    buf = io.StringIO()
    buf.write("x,y,multiplicity,on_boundary\n")
    for pt in s.points:
        buf.write(f"{pt[0]},{pt[1]},{s.multiplicity[pt]},{'true' if pt in on else 'false'}\n")
    return buf.getvalue()


def sigma_svg(s: SigmaSet, chain: HullChain | None = None, scale: int = 40) -> str:
    """Scatter plot of the points with the upper boundary drawn in red."""
    chain = chain or upper_hull(s)
    xs = [p[0] for p in s.points]
    ys = [p[1] for p in s.points]
    pad = scale
    w = (max(xs) - min(0, min(xs))) * scale + 2 * pad
    h = (max(ys) - min(0, min(ys))) * scale + 2 * pad

    def tx(x: int) -> int:
        return pad + x * scale

    def ty(y: int) -> int:
        return h - pad - y * scale

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<line x1="{tx(0)}" y1="{ty(0)}" x2="{w - pad // 2}" y2="{ty(0)}" stroke="black"/>',
        f'<line x1="{tx(0)}" y1="{ty(0)}" x2="{tx(0)}" y2="{pad // 2}" stroke="black"/>',
    ]
    poly = " ".join(f"{tx(x)},{ty(y)}" for x, y in chain.vertices)
    lines.append(f'<polyline points="{poly}" fill="none" stroke="red" stroke-width="2"/>')
    for x, y in s.points:
        lines.append(f'<circle cx="{tx(x)}" cy="{ty(y)}" r="4" fill="black"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
