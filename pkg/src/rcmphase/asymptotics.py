"""Exact-rational growth exponents and regime labels under the scaling c = lambda^(-alpha).

Every exponent is a ``Fraction``; floats appear only in
:func:`concentration_bound`, which evaluates a numeric tail bound.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .diagrams import quotient_graph
from .errors import MalformedInput, NotMBalanced, NotNormalRegime
from .graph_model import EndpointGraph, critical_exponent, endpoint_degree_max, is_m_balanced
from .hull import diagram_histogram
from .partitions import SetPartition, _check_budget


class Phase(str, enum.Enum):
    NORMAL = "Normal"
    POISSON_CRITICAL = "PoissonCritical"
    SUBCRITICAL = "Subcritical"
    NOT_COVERED = "NotCovered"


@dataclass(frozen=True)
class RegimeReport:
    alpha: Fraction
    alpha_star: Fraction
    threshold: Fraction
    phase: Phase
    delta_exponent: Fraction | None
    kolmogorov_exponent: Fraction | None

    def to_dict(self) -> dict[str, str | None]:
        def q(x: Fraction | None) -> str | None:
            return None if x is None else f"{x.numerator}/{x.denominator}"

        return {
            "alpha": q(self.alpha),
            "alpha_star": q(self.alpha_star),
            "threshold": q(self.threshold),
            "phase": self.phase.value,
            "delta_exponent": q(self.delta_exponent),
            "kolmogorov_exponent": q(self.kolmogorov_exponent),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def threshold(g: EndpointGraph) -> Fraction:
    """Boundary (r-1)/(e-a) between the dense and sparse cumulant branches."""
    return Fraction(g.r - 1, g.e - endpoint_degree_max(g))


def _require(g: EndpointGraph, alpha: Fraction) -> Fraction:
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise MalformedInput(f"decay exponent alpha must be positive, got {alpha}")
    if not is_m_balanced(g):
        raise NotMBalanced(
            "the template violates the m-balance density condition, "
            "so the diagram boundary need not be a segment"
        )
    return alpha


def f_exponents(g: EndpointGraph, p: SetPartition) -> tuple[int, int]:
    """Powers of lambda and c in the size of the diagram integral F(rho)."""
    return len(p.blocks), quotient_graph(g, p).e


def cumulant_order(g: EndpointGraph, n: int, alpha: Fraction) -> Fraction:
    """Exponent q with kappa_n(N_G) of order lambda^q."""
    alpha = _require(g, alpha)
    if n < 1:
        raise MalformedInput(f"cumulant order must be >= 1, got {n}")
    r, e, a = g.r, g.e, endpoint_degree_max(g)
    thr = threshold(g)
    if alpha < thr:
        return 1 + (r - 1) * n - alpha * (n * e - (n - 1) * a)
    if alpha == thr:
        return 1 - alpha * a
    return r - alpha * e


def cumulant_order_bruteforce(g: EndpointGraph, n: int, alpha: Fraction, budget: int | None = None) -> Fraction:
    """max over CNF diagrams of |rho| - alpha e(rho_G); no balance assumption needed."""
    alpha = Fraction(alpha)
    _check_budget(n, g.r, budget)
    hist = diagram_histogram(g, n)
    return max(int(b) - alpha * int(ec) for b, ec in zip(*np.nonzero(hist)))


def delta_exponent(g: EndpointGraph, alpha: Fraction) -> Fraction:
    """Exponent of the cumulant normalisation rate Delta_lambda."""
    alpha = _require(g, alpha)
    r, e, a = g.r, g.e, endpoint_degree_max(g)
    thr = threshold(g)
    if alpha < thr:
        return (1 - alpha * a) / 2
    if alpha == thr:
        return Fraction(e - r * a, 2 * (e - a))
    return (r - alpha * e) / 2


def classify_regime(g: EndpointGraph, alpha: Fraction) -> RegimeReport:
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise MalformedInput(f"decay exponent alpha must be positive, got {alpha}")
    r, e, a = g.r, g.e, endpoint_degree_max(g)
    star = critical_exponent(g)
    thr = threshold(g)
    balanced = is_m_balanced(g)
    delta = delta_exponent(g, alpha) if balanced else None
    light = a * r < e  # endpoint attachments light enough for the Poisson/threshold results
    poisson_point = Fraction(r, e)

    if balanced and light and alpha > poisson_point:
        phase = Phase.SUBCRITICAL
    elif balanced and light and alpha == poisson_point:
        phase = Phase.POISSON_CRITICAL
    elif balanced and alpha < star and delta is not None and delta > 0:
        phase = Phase.NORMAL
    else:
        phase = Phase.NOT_COVERED
    kol = delta / (2 * r - 1) if phase is Phase.NORMAL else None
    return RegimeReport(alpha, star, thr, phase, delta, kol)


def kolmogorov_exponent(g: EndpointGraph, alpha: Fraction) -> Fraction:
    """kappa with Kolmogorov distance to the normal law of order lambda^(-kappa)."""
    report = classify_regime(g, alpha)
    if report.phase is not Phase.NORMAL:
        raise NotNormalRegime(
            f"alpha={report.alpha} gives phase {report.phase.value}; "
            "the Kolmogorov rate needs the normal regime (0 < alpha < critical exponent)"
        )
    return report.kolmogorov_exponent


def concentration_bound(x: float, delta_lambda: float, r: int) -> float:
    """Tail bound 2 exp(-min(x^2 / 2^r, (x Delta)^(1/r)) / 4) for the standardised count."""
    if x < 0 or delta_lambda <= 0 or r < 2:
        raise MalformedInput("need x >= 0, Delta > 0 and r >= 2")
    return 2.0 * math.exp(-0.25 * min(x * x / 2.0**r, (x * delta_lambda) ** (1.0 / r)))
