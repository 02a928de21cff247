"""Acceptance gate: one test per criterion, exact tolerances throughout."""

import time
from fractions import Fraction as Q

import pytest

import snaketree.cli as cli
from conftest import PROBLEMS, four_roots, five_roots, mono, three_cusps, whitney
from randsys import draws
from snaketree.errors import ConjugationClosureViolated, NonPositiveValuation, NotRightReduced
from snaketree.exact import NumberField
from snaketree.morse import Snake, analyze, sigma
from snaketree.puiseux import PuiseuxPoly, real_less
from snaketree.textio import parse_input
from snaketree.trees import RootSystem, build_contact_tree, is_planar_order, wedge_map

SINGLE_CASE_SECONDS = 1.0
SUITE_SECONDS = 120.0
SUITE_DRAWS = 1000
SUITE_SEED = 20240617


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    elapsed = time.perf_counter() - t0
    assert elapsed < SINGLE_CASE_SECONDS, f"single case took {elapsed:.2f}s"
    return out


def test_criterion_1_whitney_cusp():
    rs, unit = whitney()
    r = timed(analyze, rs, unit, run_oracle=True)
    assert [a.series for a in r.areas] == [mono(-4, "3/2")]
    assert r.areas[0].sigma == Q(3, 2)
    assert r.injectivity.passed
    assert r.snake == Snake((2, 1))
    assert set(r.discriminant_roots) == {mono(2, "3/2"), mono(-2, "3/2")}
    assert r.discriminant_match is True
    assert r.oracle_agrees is True


def test_criterion_2_five_roots(capsys):
    r = timed(analyze, five_roots())
    assert [a.sigma for a in r.areas] == [6, 10, 10, 6]
    assert [a.initial_coeff for a in r.areas] == [Q(1, 12), Q(-1, 4), Q(1, 4), Q(-1, 12)]
    assert not r.injectivity.passed
    w = r.injectivity.witness
    assert w.exponent == 1
    assert w.zero_sum_terms == (1, 4)
    assert r.determinate_signs
    deltas = r.discriminant_roots
    for (i, j), sgn in r.determinate_signs.items():
        assert sgn == (1 if real_less(deltas[i - 1], deltas[j - 1]) else -1)
    assert cli.main(["analyze", str(PROBLEMS / "five_roots.mrs"), "--quiet"]) == 2
    capsys.readouterr()


def lam(c):
    return Q(1, 2) * (c - 1) ** 3 * (c * c + 3 * c + 1) / (5 * c * c - 1)


@pytest.mark.parametrize("c, ranks, lam_range", [
    (Q(2), (4, 5, 2, 3, 1), (Q(0), Q(1, 2))),
    (Q(5, 2), (3, 5, 2, 4, 1), (Q(1, 2), Q(1))),
    (Q(3), (2, 4, 3, 5, 1), (Q(1), None)),
])
def test_criterion_3_three_cusps(c, ranks, lam_range):
    r = timed(analyze, three_cusps(c), run_oracle=True)
    s1 = Q(2, 15) * c ** 5 - Q(2, 3) * c ** 3 + Q(2, 3) * c ** 2 - Q(2, 15)
    assert [a.initial_coeff for a in r.areas] == [s1, Q(-4, 3) * c ** 2 + Q(4, 15), s1, Q(-3, 40)]
    assert [a.sigma for a in r.areas] == [Q(19, 2), Q(19, 2), Q(19, 2), Q(16, 3)]
    assert r.injectivity.passed
    assert r.snake.target_ranks == ranks
    order = [i + 1 for i in r.integrated.leaf_order()]
    if c == 2:
        assert order == [5, 3, 4, 1, 2]
    if c == 3:
        assert order[0] == 5 and order[1:] == [1, 3, 2, 4]
    low, high = lam_range
    assert low < lam(c) and (high is None or lam(c) < high)
    assert r.discriminant_match is True
    assert r.oracle_agrees is True


def test_criterion_4_four_roots_tree():
    t = timed(build_contact_tree, four_roots())
    internal = t.internal_vertices()
    assert sorted(t.exponent[v] for v in internal) == [1, 3]
    (top,) = t.children[0]
    assert t.exponent[top] == 1
    leaf1, low = t.children[top]
    assert t.leaf_label[leaf1] == 0
    assert t.exponent[low] == 3
    assert [t.leaf_label[v] for v in t.children[low]] == [1, 2, 3]
    assert len(t) == 7


@pytest.fixture(scope="module")
def suite():
    """Run the randomized property suite once; individual criteria read the record."""
    record = {k: [] for k in "abcdef"}
    counts = {"draws": 0, "passing": 0, "binary": 0}
    t0 = time.perf_counter()
    for rs, unit in draws(SUITE_SEED, SUITE_DRAWS):
        counts["draws"] += 1
        r = analyze(rs, unit, run_oracle=True)
        tc, tr = r.complex_tree, r.real_tree
        for a in r.areas:
            if a.sigma != sigma(tc, tr.embedding[a.wedge_vertex]):
                record["a"].append((rs, a.index))
        for v in range(1, len(tr)):
            if not r.sigma[v] > r.sigma[tr.parent[v]]:
                record["b"].append((rs, v))
        for a, b in zip(r.areas, r.areas[1:]):
            if (a.initial_coeff > 0) == (b.initial_coeff > 0):
                record["c"].append((rs, a.index))
        if not wedge_map(tr).is_bijective() or not is_planar_order(tr, range(rs.n)):
            record["d"].append(rs)
        if r.injectivity.passed:
            counts["passing"] += 1
            ok = (r.discriminant_match is True and r.oracle_agrees is True
                  and is_planar_order(tr, r.integrated.leaf_order()))
            if not ok:
                record["e"].append(rs)
        if all(len(tr.children[v]) == 2 for v in tr.internal_vertices()):
            counts["binary"] += 1
            if not r.injectivity.passed:
                record["f"].append(rs)
    return record, counts, time.perf_counter() - t0


def test_criterion_5_runtime_and_volume(suite):
    _, counts, elapsed = suite
    assert counts["draws"] >= SUITE_DRAWS
    assert elapsed < SUITE_SECONDS, f"randomized suite took {elapsed:.1f}s"


def test_criterion_5a_sigma_equals_valuation(suite):
    assert suite[0]["a"] == []


def test_criterion_5b_sigma_increasing(suite):
    assert suite[0]["b"] == []


def test_criterion_5c_alternating_signs(suite):
    assert suite[0]["c"] == []


def test_criterion_5d_wedge_map_and_planarity(suite):
    assert suite[0]["d"] == []


def test_criterion_5e_discriminant_match_and_oracle(suite):
    assert suite[1]["passing"] > 0
    assert suite[0]["e"] == []


def test_criterion_5f_binary_trees_inject(suite):
    assert suite[1]["binary"] > 0
    assert suite[0]["f"] == []


def test_criterion_6_negative_validation():
    with pytest.raises(NotRightReduced):
        RootSystem([mono(1, 1), mono(1, 1)])
    with pytest.raises(NotRightReduced):
        parse_input("real_root = x\nreal_root = x\n")
    gauss = NumberField([1, 0, 1], [0, -1])
    with pytest.raises(ConjugationClosureViolated):
        RootSystem([mono(1, 1)], [mono(gauss.gen(), 1, gauss)])
    with pytest.raises(ConjugationClosureViolated):
        parse_input("field t: minpoly = t^2+1; conj = -t\nreal_root = x\ncomplex_root = t*x\n")
    with pytest.raises(NonPositiveValuation):
        RootSystem([PuiseuxPoly([(0, 1), (1, 1)])])
    with pytest.raises(NonPositiveValuation):
        parse_input("real_root = 1 + x\n")
