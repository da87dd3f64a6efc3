"""Monte Carlo for subgraph counts in the random-connection model on a torus.

Each replication draws a Poisson number of uniform points in ``[0, L)^d``
with the periodic metric, joins each pair independently with probability
``c * H(x, y)`` and pins every endpoint edge with the same law.  Replication
``k`` uses its own counter-based stream derived from ``(seed, k)`` so results
do not depend on scheduling or thread count.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations

import numpy as np
from scipy.special import gammaln

from . import _kernels
from .diagrams import quotient_graph
from .errors import DimensionMismatch, MalformedInput
from .graph_model import EndpointGraph, automorphism_count, automorphisms
from .hull import diagram_histogram
from .partitions import _check_budget, enumerate_cnf, enumerate_nonflat

KERNELS = ("constant", "indicator", "exponential")
# exponential offsets are proposed inside this many scale lengths (tail mass e^-40)
_EXP_REACH = 40.0


@dataclass(frozen=True)
class SimConfig:
    d: int
    L: float
    lam: float
    c: float
    kernel: str = "constant"
    # r0 for the indicator kernel, s for the exponential kernel
    scale: float = 1.0
    endpoints: tuple[tuple[float, ...], ...] = ()
    reps: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.d < 1:
            raise MalformedInput("dimension d must be >= 1")
        if not self.L > 0:
            raise MalformedInput("torus side L must be positive")
        if not self.lam >= 0:
            raise MalformedInput("intensity must be non-negative")
        if not 0 < self.c <= 1:
            raise MalformedInput("connection scale c must lie in (0, 1]")
        if self.kernel not in KERNELS:
            raise MalformedInput(f"kernel must be one of {', '.join(KERNELS)}")
        if not self.scale > 0:
            raise MalformedInput("kernel scale must be positive")
        if self.reps < 1:
            raise MalformedInput("need at least one replication")
        for y in self.endpoints:
            if len(y) != self.d:
                raise DimensionMismatch(f"endpoint {y} does not live in dimension {self.d}")

    @property
    def volume(self) -> float:
        return self.L**self.d

    @property
    def m(self) -> int:
        return len(self.endpoints)


def torus_distance(x: np.ndarray, y: np.ndarray, L: float) -> np.ndarray:
    diff = np.abs(np.asarray(x) - np.asarray(y)) % L
    diff = np.minimum(diff, L - diff)
    return np.sqrt(np.sum(diff * diff, axis=-1))


def kernel_values(cfg: SimConfig, dist: np.ndarray) -> np.ndarray:
    """H as a function of torus distance (before the c factor)."""
    if cfg.kernel == "constant":
        return np.ones_like(dist, dtype=float)
    if cfg.kernel == "indicator":
        return (dist <= cfg.scale).astype(float)
    return np.exp(-dist / cfg.scale)


def replication_rng(seed: int, rep: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(rep,))))


@dataclass(frozen=True)
class Sample:
    """One realisation: points, symmetric CSR adjacency with sorted rows, endpoint adjacency."""

    points: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    end_adj: np.ndarray

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def has_edge(self, i: int, j: int) -> bool:
        row = self.indices[self.indptr[i]:self.indptr[i + 1]]
        k = np.searchsorted(row, j)
        return bool(k < row.size and row[k] == j)

    def edge_count(self) -> int:
        return int(self.indices.size // 2)


def _pair_from_index(k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert k = j(j-1)/2 + i (0 <= i < j) on int64 arrays."""
    j = ((1 + np.sqrt(1 + 8 * k.astype(np.float64))) // 2).astype(np.int64)
    # repair float rounding on either side
    j -= (j * (j - 1) // 2 > k).astype(np.int64)
    j += ((j + 1) * j // 2 <= k).astype(np.int64)
    return k - j * (j - 1) // 2, j


def _bernoulli_pairs(rng: np.random.Generator, npairs: int, p: float) -> np.ndarray:
    """Sorted indices of a Bernoulli(p) subset of range(npairs) via geometric gaps."""
    if npairs == 0:
        return np.zeros(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(npairs, dtype=np.int64)
    chunks = []
    pos = -1
    batch = int(npairs * p + 5 * math.sqrt(npairs * p) + 16)
    while True:
        gaps = rng.geometric(p, size=batch)
        idx = pos + np.cumsum(gaps)
        keep = idx[idx < npairs]
        chunks.append(keep)
        if keep.size < idx.size:
            break
        pos = int(idx[-1])
    return np.concatenate(chunks)


def sample_rcm(cfg: SimConfig, replication_index: int) -> Sample:
    """Draw one realisation, deterministic in (cfg.seed, replication_index)."""
    rng = replication_rng(cfg.seed, replication_index)
    npts = int(rng.poisson(cfg.lam * cfg.volume))
    pts = rng.random((npts, cfg.d)) * cfg.L
    # Bernoulli(c) layer over all pairs, then thin by H(x, y)
    k = _bernoulli_pairs(rng, npts * (npts - 1) // 2, cfg.c)
    i, j = _pair_from_index(k)
    if cfg.kernel != "constant" and k.size:
        h = kernel_values(cfg, torus_distance(pts[i], pts[j], cfg.L))
        keep = rng.random(k.size) < h
        i, j = i[keep], j[keep]
    src = np.concatenate([i, j])
    dst = np.concatenate([j, i])
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    indptr = np.zeros(npts + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=npts), out=indptr[1:])

    m = cfg.m
    if m:
        ys = np.asarray(cfg.endpoints, dtype=float)
        dist = torus_distance(pts[:, None, :], ys[None, :, :], cfg.L)
        prob = cfg.c * kernel_values(cfg, dist)
        end_adj = rng.random((npts, m)) < prob
    else:
        end_adj = np.zeros((npts, 0), dtype=np.bool_)
    return Sample(pts, indptr, dst.astype(np.int64), end_adj)


# --------------------------------------------------------------------------
# counting
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class _Plan:
    order: np.ndarray
    back_ptr: np.ndarray
    back_idx: np.ndarray
    end_ptr: np.ndarray
    end_idx: np.ndarray
    lt_ptr: np.ndarray
    lt_idx: np.ndarray
    gt_ptr: np.ndarray
    gt_idx: np.ndarray
    aut: int


def symmetry_conditions(g: EndpointGraph, order: list[int]) -> list[tuple[int, int]]:
    """Pairs (v, w) such that requiring f(v) < f(w) keeps one embedding per automorphism orbit.

    Repeatedly pick the earliest placed vertex with a non-trivial orbit, order
    it below the rest of its orbit and pass to its stabiliser.
    """
    group = automorphisms(g)
    conditions = []
    while len(group) > 1:
        for v in order:
            orbit = {perm[v - 1] for perm in group}
            if len(orbit) > 1:
                break
        conditions.extend((v, w) for w in sorted(orbit) if w != v)
        group = [perm for perm in group if perm[v - 1] == v]
    return conditions


@lru_cache(maxsize=64)
def _placement_plan(g: EndpointGraph) -> _Plan:
    """BFS order over the core starting from the vertex with the most constraints."""
    r = g.r
    nbrs = {i: set() for i in range(1, r + 1)}
    for a, b in g.core_edges:
        nbrs[a].add(b)
        nbrs[b].add(a)
    start = max(range(1, r + 1), key=lambda i: (len(g.attachments(i)), len(nbrs[i]), -i))
    order = [start]
    seen = {start}
    head = 0
    while head < len(order):
        u = order[head]
        head += 1
        for w in sorted(nbrs[u], key=lambda w: (-len(g.attachments(w)), -len(nbrs[w]), w)):
            if w not in seen:
                seen.add(w)
                order.append(w)
    step = {v: s for s, v in enumerate(order)}
    back_ptr, back_idx, end_ptr, end_idx = [0], [], [0], []
    for s, v in enumerate(order):
        earlier = sorted((step[w] for w in nbrs[v] if step[w] < s))
        back_idx.extend(earlier)
        back_ptr.append(len(back_idx))
        end_idx.extend(sorted(k - r - 1 for k in g.attachments(v)))
        end_ptr.append(len(end_idx))
    # each order condition is enforced at the later of its two steps
    lt: list[list[int]] = [[] for _ in order]
    gt: list[list[int]] = [[] for _ in order]
    for v, w in symmetry_conditions(g, order):
        if step[w] > step[v]:
            lt[step[w]].append(step[v])
        else:
            gt[step[v]].append(step[w])
    arr = lambda xs: np.array(xs, dtype=np.int64)  # noqa: E731
    ptr = lambda rows: arr([0] + list(np.cumsum([len(x) for x in rows])))  # noqa: E731
    return _Plan(
        arr([v - 1 for v in order]), arr(back_ptr), arr(back_idx), arr(end_ptr), arr(end_idx),
        ptr(lt), arr([t for x in lt for t in x]), ptr(gt), arr([t for x in gt for t in x]),
        len(automorphisms(g)),
    )


def count_subgraphs(sample: Sample, g: EndpointGraph, symmetry_breaking: bool = True) -> int:
    """Ordered injective core embeddings with every template edge present.

    With ``symmetry_breaking`` one embedding per automorphism orbit is
    enumerated and the result scaled by |Aut(G)|; without it every ordered
    embedding is visited.  Both give the same number.
    """
    if sample.end_adj.shape[1] != g.m:
        raise DimensionMismatch(
            f"sample has {sample.end_adj.shape[1]} endpoints but the template has m={g.m}"
        )
    plan = _placement_plan(g)
    empty = np.zeros(len(plan.order) + 1, dtype=np.int64)
    lt_ptr, gt_ptr = (plan.lt_ptr, plan.gt_ptr) if symmetry_breaking else (empty, empty)
    found = _kernels.count_embeddings(
        sample.indptr, sample.indices, sample.size, plan.order,
        plan.back_ptr, plan.back_idx, plan.end_ptr, plan.end_idx, sample.end_adj,
        lt_ptr, plan.lt_idx, gt_ptr, plan.gt_idx,
    )
    return int(found) * (plan.aut if symmetry_breaking else 1)


def count_subgraphs_bruteforce(sample: Sample, g: EndpointGraph) -> int:
    """Test oracle: try every ordered r-tuple."""
    total = 0
    for tup in permutations(range(sample.size), g.r):
        ok = all(sample.has_edge(tup[a - 1], tup[b - 1]) for a, b in g.core_edges)
        ok = ok and all(sample.end_adj[tup[a - 1], k - g.r - 1] for a, k in g.endpoint_edges)
        total += ok
    return total


# --------------------------------------------------------------------------
# statistics
# --------------------------------------------------------------------------


def _kstats_from_sums(n, s1, s2, s3, s4):
    """k-statistics k1..k4 from power sums (vectorised over leading axes)."""
    k1 = s1 / n
    k2 = (n * s2 - s1**2) / (n * (n - 1))
    k3 = (2 * s1**3 - 3 * n * s1 * s2 + n**2 * s3) / (n * (n - 1) * (n - 2))
    k4 = (
        -6 * s1**4 + 12 * n * s1**2 * s2 - 3 * n * (n - 1) * s2**2
        - 4 * n * (n + 1) * s1 * s3 + n**2 * (n + 1) * s4
    ) / (n * (n - 1) * (n - 2) * (n - 3))
    return k1, k2, k3, k4


def k_statistics(x: np.ndarray) -> tuple[list[float | None], list[float | None]]:
    """k1..k4 with jackknife standard errors; None where the sample is too small."""
    x = np.asarray(x, dtype=float)
    n = x.size
    shift = x.mean() if n else 0.0
    y = x - shift  # k2..k4 are shift invariant; centring avoids cancellation
    s = [np.sum(y**p) for p in range(1, 5)]
    loo = [s[p - 1] - y**p for p in range(1, 5)]
    with np.errstate(divide="ignore", invalid="ignore"):
        full = _kstats_from_sums(float(n), *s)
        jack = _kstats_from_sums(float(n - 1), *loo)
    values: list[float | None] = []
    errors: list[float | None] = []
    for order in range(1, 5):
        if n < order:
            values.append(None)
            errors.append(None)
            continue
        values.append(float(full[order - 1]) + (shift if order == 1 else 0.0))
        if n - 1 >= order:
            th = jack[order - 1]
            errors.append(float(math.sqrt((n - 1) / n * np.sum((th - th.mean()) ** 2))))
        else:
            errors.append(None)
    return values, errors


@dataclass
class EmpiricalStats:
    counts: np.ndarray
    aut: int
    mean: float
    variance: float | None
    k3: float | None
    k4: float | None
    se: dict[str, float | None]
    skewness: float | None
    skewness_se: float | None
    # value of round(N / |Aut|) -> number of replications
    histogram: dict[int, int] = field(default_factory=dict)
    rounding_flags: int = 0

    @classmethod
    def from_counts(cls, counts: np.ndarray, aut: int) -> "EmpiricalStats":
        counts = np.asarray(counts, dtype=np.int64)
        (k1, k2, k3, k4), (e1, e2, e3, e4) = k_statistics(counts)
        skew, skew_se = _skewness(counts)
        scaled = counts / aut
        binned = np.rint(scaled).astype(np.int64)
        flags = int(np.sum(np.abs(scaled - binned) > 1e-9))
        values, freq = np.unique(binned, return_counts=True)
        hist = {int(v): int(f) for v, f in zip(values, freq)}
        return cls(counts, aut, k1, k2, k3, k4, {"mean": e1, "variance": e2, "k3": e3, "k4": e4},
                   skew, skew_se, hist, flags)

    def to_dict(self) -> dict:
        return {
            "reps": int(self.counts.size),
            "aut": self.aut,
            "mean": self.mean,
            "variance": self.variance,
            "k3": self.k3,
            "k4": self.k4,
            "se": self.se,
            "skewness": self.skewness,
            "skewness_se": self.skewness_se,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "rounding_flags": self.rounding_flags,
        }

    def counts_csv(self) -> str:
        buf = io.StringIO()
        buf.write("replication,count\n")
        for k, c in enumerate(self.counts):
            buf.write(f"{k},{int(c)}\n")
        return buf.getvalue()


def _skewness(x: np.ndarray) -> tuple[float | None, float | None]:
    """Standardised k3 / k2^(3/2) with a jackknife standard error."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 4:
        return None, None
    y = x - x.mean()
    s = [np.sum(y**p) for p in range(1, 5)]
    _, k2, k3, _ = _kstats_from_sums(float(n), *s)
    if k2 <= 0:
        return None, None
    loo = [s[p - 1] - y**p for p in range(1, 5)]
    _, j2, j3, _ = _kstats_from_sums(float(n - 1), *loo)
    with np.errstate(divide="ignore", invalid="ignore"):
        th = j3 / j2**1.5
    th = th[np.isfinite(th)]
    se = float(math.sqrt((n - 1) / n * np.sum((th - th.mean()) ** 2))) if th.size else None
    return float(k3 / k2**1.5), se


def _count_rep(cfg: SimConfig, g: EndpointGraph, rep: int) -> int:
    return count_subgraphs(sample_rcm(cfg, rep), g)


def run_experiment(cfg: SimConfig, g: EndpointGraph, threads: int = 1) -> EmpiricalStats:
    """Run ``cfg.reps`` independent replications; results are ordered by replication index."""
    if g.m != cfg.m:
        raise DimensionMismatch(f"config has {cfg.m} endpoint locations but the template has m={g.m}")
    if threads <= 1:
        counts = [_count_rep(cfg, g, k) for k in range(cfg.reps)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(lambda k: _count_rep(cfg, g, k), range(cfg.reps)))
    return EmpiricalStats.from_counts(np.array(counts, dtype=np.int64), automorphism_count(g))


# --------------------------------------------------------------------------
# exact moments and cumulants
# --------------------------------------------------------------------------


def _edge_integral(
    cfg: SimConfig, nb: int, edges: frozenset[tuple[int, int]], samples: int, rng: np.random.Generator
) -> tuple[float, float]:
    """Estimate of the integral over (torus)^nb of prod H over the quotient edges.

    Vertices 1..nb are random, nb+1..nb+m are the fixed endpoints.  Points
    are placed along a BFS tree rooted at the endpoints (or at vertex 1, which
    is then uniform), each child uniform in a cube around its parent that
    covers the kernel support, and the tree edges are importance-weighted.
    """
    m = cfg.m
    d, L = cfg.d, cfg.L
    if cfg.kernel == "constant":
        return cfg.volume**nb, 0.0
    reach = cfg.scale if cfg.kernel == "indicator" else _EXP_REACH * cfg.scale
    half = min(L / 2, reach)
    cube = (2 * half) ** d

    adj: dict[int, list[int]] = {v: [] for v in range(1, nb + m + 1)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    roots = list(range(nb + 1, nb + m + 1)) or [1]
    parent: dict[int, int] = {}
    order: list[int] = []
    seen = set(roots)
    queue = list(roots)
    while queue:
        u = queue.pop(0)
        for w in sorted(adj[u]):
            if w not in seen:
                seen.add(w)
                parent[w] = u
                order.append(w)
                queue.append(w)
    if len(seen) != nb + m:
        raise MalformedInput("quotient graph is disconnected")

    pos = np.zeros((nb + m + 1, samples, d))
    for k, y in enumerate(cfg.endpoints):
        pos[nb + 1 + k] = np.asarray(y, dtype=float)
    weight = np.ones(samples)
    if not cfg.endpoints:
        pos[1] = rng.random((samples, d)) * L
        weight *= cfg.volume
    for w in order:
        u = parent[w]
        offset = (rng.random((samples, d)) * 2 - 1) * half
        pos[w] = (pos[u] + offset) % L
        weight *= cube
    for a, b in edges:
        weight *= kernel_values(cfg, torus_distance(pos[a], pos[b], L))
    mean = float(weight.mean())
    se = float(weight.std(ddof=1) / math.sqrt(samples)) if samples > 1 else math.inf
    return mean, se


def exact_moment(
    g: EndpointGraph,
    n: int,
    cfg: SimConfig,
    mc_samples: int = 20000,
    kind: str = "moment",
    budget: int | None = None,
    seed: int = 12345,
) -> tuple[float, float]:
    """E[N_G^n] (kind="moment") or kappa_n(N_G) (kind="cumulant") with a standard error.

    Sum of lambda^|rho| c^e(rho_G) times the kernel integral over non-flat
    (moments) or connected non-flat (cumulants) partitions.  The constant
    kernel is exact; otherwise each distinct quotient graph is integrated by
    Monte Carlo.
    """
    if kind not in ("moment", "cumulant"):
        raise MalformedInput("kind must be 'moment' or 'cumulant'")
    if g.m != cfg.m:
        raise DimensionMismatch(f"config has {cfg.m} endpoint locations but the template has m={g.m}")
    _check_budget(n, g.r, budget)
    lam, c = cfg.lam, cfg.c
    if cfg.kernel == "constant":
        hist = diagram_histogram(g, n, connected_only=(kind == "cumulant"))
        total = 0.0
        for b, ec in zip(*np.nonzero(hist)):
            total += float(hist[b, ec]) * (lam * cfg.volume) ** int(b) * c ** int(ec)
        return total, 0.0

    parts = enumerate_cnf(n, g.r, budget) if kind == "cumulant" else enumerate_nonflat(n, g.r, budget)
    groups: dict[tuple[int, frozenset], int] = {}
    for p in parts:
        q = quotient_graph(g, p)
        key = (q.block_count, q.edges)
        groups[key] = groups.get(key, 0) + 1
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    total = 0.0
    var = 0.0
    for (nb, edges), mult in sorted(groups.items(), key=lambda kv: (kv[0][0], sorted(kv[0][1]))):
        val, se = _edge_integral(cfg, nb, edges, mc_samples, rng)
        coef = mult * lam**nb * c ** len(edges)
        total += coef * val
        var += (coef * se) ** 2
    return total, math.sqrt(var)


# --------------------------------------------------------------------------
# Poisson goodness of fit
# --------------------------------------------------------------------------


def poisson_pmf(k: np.ndarray, mean: float) -> np.ndarray:
    k = np.asarray(k, dtype=float)
    if mean == 0:
        return (k == 0).astype(float)
    return np.exp(k * math.log(mean) - mean - gammaln(k + 1))


def poisson_gof(stats: EmpiricalStats, mean: float) -> float:
    """Total-variation distance between the law of round(N / |Aut|) and Poisson(mean)."""
    if not stats.histogram:
        raise MalformedInput("empty histogram")
    if mean < 0:
        raise MalformedInput("Poisson mean must be non-negative")
    total = sum(stats.histogram.values())
    ks = np.array(sorted(stats.histogram))
    emp = np.array([stats.histogram[k] for k in ks], dtype=float) / total
    pois = np.where(ks >= 0, poisson_pmf(np.maximum(ks, 0), mean), 0.0)
    # Poisson mass off the observed support counts fully
    outside = max(0.0, 1.0 - float(pois.sum()))
    return 0.5 * (float(np.abs(emp - pois).sum()) + outside)

