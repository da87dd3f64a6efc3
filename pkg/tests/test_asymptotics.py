from __future__ import annotations

import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcmphase.asymptotics import (
    Phase,
    classify_regime,
    concentration_bound,
    cumulant_order,
    cumulant_order_bruteforce,
    delta_exponent,
    f_exponents,
    kolmogorov_exponent,
    threshold,
)
from rcmphase.census import connected_graphs, endpoint_templates
from rcmphase.diagrams import quotient_graph
from rcmphase.errors import MalformedInput, NotMBalanced, NotNormalRegime
from rcmphase.graph_model import balance_report, endpoint_degree_max, parse_graph_spec
from rcmphase.partitions import SetPartition, enumerate_cnf

F = Fraction


def balanced_templates(max_v):
    for v in range(2, max_v + 1):
        for m in range(0, v - 1):
            for g in endpoint_templates(v - m, m, connected_graphs(v)):
                if balance_report(g).m_balanced:
                    yield g


def test_f_exponents(graphs):
    p = SetPartition.from_blocks(2, 2, [[(1, 1), (2, 1)], [(1, 2), (2, 2)]])
    assert f_exponents(graphs["k2"], p) == (2, 1)
    c3 = graphs["c3"]
    assert f_exponents(c3, SetPartition.singletons(1, 3)) == (3, 3)
    fig2 = SetPartition.from_blocks(
        3, 4,
        [[(1, 1), (2, 1), (3, 1)], [(1, 2)], [(1, 3), (2, 3)], [(1, 4)], [(2, 2), (3, 2)], [(2, 4), (3, 3)], [(3, 4)]],
    )
    assert f_exponents(graphs["pendant_tree"], fig2) == (7, 8)


def test_cumulant_order_examples(graphs):
    c3 = graphs["c3"]
    assert cumulant_order(c3, 2, F(1, 2)) == 2
    assert cumulant_order(c3, 3, F(1)) == 0
    for g in (c3, graphs["rooted_c4"], graphs["p3"]):
        alpha = threshold(g) / 2
        assert cumulant_order(g, 1, alpha) == g.r - alpha * g.e


def test_cumulant_order_requires_balance(graphs):
    with pytest.raises(NotMBalanced):
        cumulant_order(graphs["paw"], 2, F(1, 2))
    with pytest.raises(MalformedInput):
        cumulant_order(graphs["c3"], 2, F(0))


def test_delta_examples(graphs):
    c3 = graphs["c3"]
    assert delta_exponent(c3, F(1, 2)) == F(1, 2)
    assert delta_exponent(c3, F(5, 6)) == F(1, 4)
    assert delta_exponent(c3, F(2, 3)) == F(1, 2)


def test_classify_examples(graphs):
    c3 = graphs["c3"]
    rep = classify_regime(c3, F(1, 2))
    assert rep.phase is Phase.NORMAL
    assert rep.delta_exponent == F(1, 2) and rep.kolmogorov_exponent == F(1, 10)
    assert classify_regime(c3, F(1)).phase is Phase.POISSON_CRITICAL
    assert classify_regime(c3, F(6, 5)).phase is Phase.SUBCRITICAL
    assert classify_regime(graphs["paw"], F(1, 2)).phase is Phase.NOT_COVERED


def test_heavy_attachment_tree_not_covered():
    # a star core with both endpoints on one vertex: a*r = 6 > e = 4
    g = parse_graph_spec("r=3 m=2 edges=1-2,1-3,1-4,1-5")
    assert balance_report(g).m_balanced
    thr = threshold(g)
    assert thr > F(g.r, g.e)
    # at the branch point the verbatim exponent is negative
    assert delta_exponent(g, thr) < 0
    assert classify_regime(g, thr).phase is Phase.NOT_COVERED
    assert classify_regime(g, F(g.r, g.e)).phase is not Phase.POISSON_CRITICAL


def test_kolmogorov(graphs):
    assert kolmogorov_exponent(graphs["c3"], F(1, 2)) == F(1, 10)
    assert kolmogorov_exponent(graphs["c3"], F(5, 6)) == F(1, 20)
    assert kolmogorov_exponent(graphs["k2"], F(1, 4)) == F(1, 6)
    with pytest.raises(NotNormalRegime):
        kolmogorov_exponent(graphs["c3"], F(1))


def test_kolmogorov_matches_closed_forms_without_endpoints():
    # (1 - alpha a)/(4(v-m)-2) on the dense side and (v - alpha e)/(4v-2) on the sparse side
    for g in balanced_templates(5):
        if g.m:
            continue
        v = g.r
        for k in range(1, 24):
            alpha = F(k, 24) * F(v, g.e)
            want = F(1, 4 * v - 2) if alpha <= threshold(g) else (v - alpha * g.e) / (4 * v - 2)
            assert kolmogorov_exponent(g, alpha) == want


def test_concentration_bound():
    assert concentration_bound(0, 1.0, 2) == 2.0
    assert concentration_bound(2, 1.0, 2) == pytest.approx(2 * math.exp(-0.25))
    vals = [concentration_bound(x, 3.0, 3) for x in range(0, 40)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    with pytest.raises(MalformedInput):
        concentration_bound(-1, 1.0, 2)


def test_branch_continuity_and_n_independence():
    for g in balanced_templates(5):
        thr = threshold(g)
        r, e, a = g.r, g.e, endpoint_degree_max(g)
        for n in (1, 2, 3, 4):
            dense = 1 + (r - 1) * n - thr * (n * e - (n - 1) * a)
            sparse = r - thr * e
            assert dense == sparse == cumulant_order(g, n, thr)
        dense_delta = (1 - thr * a) / 2
        assert dense_delta == (r - thr * e) / 2 == delta_exponent(g, thr)
        above = thr + F(1, 7)
        assert len({cumulant_order(g, n, above) for n in (1, 2, 3, 5)}) == 1
        # standardised cumulants decay like Delta^-(n-2) on both branches
        for alpha in (thr / 2, thr + F(1, 3)):
            q2 = cumulant_order(g, 2, alpha)
            for n in (3, 4, 5):
                assert cumulant_order(g, n, alpha) - F(n, 2) * q2 == -(n - 2) * delta_exponent(g, alpha)


def diagram_sizes(g, n):
    return {(len(p), quotient_graph(g, p).e) for p in enumerate_cnf(n, g.r)}


def brute_exponent(g, n, alpha, sizes=None):
    sizes = diagram_sizes(g, n) if sizes is None else sizes
    return max(b - alpha * e for b, e in sizes)


def test_closed_form_matches_python_diagram_maximum():
    """Independent of the compiled histogram: explicit quotient graphs."""
    for g in balanced_templates(4):
        thr = threshold(g)
        grid = sorted({thr * F(k, 6) for k in range(1, 13)} | {F(g.r, g.e)})
        for n in (1, 2, 3):
            if n * g.r > 9:
                continue
            sizes = diagram_sizes(g, n)
            for alpha in grid:
                assert cumulant_order(g, n, alpha) == brute_exponent(g, n, alpha, sizes)


def test_bruteforce_helper_agrees(graphs):
    for alpha in (F(1, 3), F(2, 3), F(1)):
        assert cumulant_order_bruteforce(graphs["c3"], 3, alpha) == brute_exponent(graphs["c3"], 3, alpha)


def test_json_report(graphs):
    data = json.loads(classify_regime(graphs["c3"], F(1, 2)).to_json())
    assert data == {
        "alpha": "1/2",
        "alpha_star": "1/1",
        "threshold": "2/3",
        "phase": "Normal",
        "delta_exponent": "1/2",
        "kolmogorov_exponent": "1/10",
    }


_PHASE_RANK = {Phase.NORMAL: 0, Phase.POISSON_CRITICAL: 1, Phase.SUBCRITICAL: 2}


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["k2", "p3", "c3", "c4", "rooted_c4"]), st.lists(st.fractions(F(1, 50), F(3), max_denominator=50), min_size=2, max_size=8))
def test_phase_monotone_in_alpha(name, alphas):
    from conftest import SPECS

    g = parse_graph_spec(SPECS[name])
    phases = [classify_regime(g, a).phase for a in sorted(alphas)]
    ranks = [_PHASE_RANK[p] for p in phases if p in _PHASE_RANK]
    assert ranks == sorted(ranks)
    for a, ph in zip(sorted(alphas), phases):
        if ph is Phase.NORMAL:
            assert classify_regime(g, a).delta_exponent > 0
