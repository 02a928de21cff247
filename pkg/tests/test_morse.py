from fractions import Fraction as Q

import pytest

from conftest import five_roots, mono, three_cusps, whitney
from snaketree.errors import IndeterminateSign, InjectivityRequired
from snaketree.morse import (Snake, analyze, area_series, check_injectivity, check_discriminant_match, critical_value_series,
                             integrated_tree, integration_tables, sign_of_difference, snake)
from snaketree.puiseux import PuiseuxPoly, integrate_y, product_from_roots, real_less
from snaketree.trees import RootSystem


def s_closed_forms(c):
    s1 = Q(2, 15) * c ** 5 - Q(2, 3) * c ** 3 + Q(2, 3) * c ** 2 - Q(2, 15)
    return [s1, Q(-4, 3) * c ** 2 + Q(4, 15), s1, Q(-3, 40)]


def test_whitney():
    rs, unit = whitney()
    r = analyze(rs, unit)
    assert [a.series for a in r.areas] == [mono(-4, "3/2")]
    assert r.areas[0].sigma == Q(3, 2)
    assert r.injectivity.passed
    assert r.snake == Snake((2, 1))
    assert r.discriminant_roots == [mono(2, "3/2"), mono(-2, "3/2")]
    assert r.discriminant_match is True


def test_five_roots_areas_and_failure():
    r = analyze(five_roots())
    assert [a.sigma for a in r.areas] == [6, 10, 10, 6]
    assert [a.initial_coeff for a in r.areas] == [Q(1, 12), Q(-1, 4), Q(1, 4), Q(-1, 12)]
    assert not r.injectivity.passed
    w = r.injectivity.witness
    assert (w.exponent, w.colliding, w.zero_sum_range, w.zero_sum_terms) == (1, (0, 2), (1, 3), (1, 4))
    assert [x.exponent for x in r.injectivity.witnesses] == [1, 2]
    assert r.tables[w.vertex].partial_sums == (0, Q(1, 12), 0)
    assert r.snake is None and r.integrated is None and r.discriminant_match is None
    assert r.indeterminate_pairs == [(1, 5), (2, 4)]


def test_determinate_signs_match_critical_values():
    """Where a sign is announced it is the sign of delta_j - delta_i."""
    for rs in (five_roots(), three_cusps(Q(5, 2))):
        r = analyze(rs)
        deltas = r.discriminant_roots
        for (i, j), sgn in r.determinate_signs.items():
            assert sgn == (1 if real_less(deltas[i - 1], deltas[j - 1]) else -1)


def test_indeterminate_sign_raises():
    r = analyze(five_roots())
    with pytest.raises(IndeterminateSign):
        sign_of_difference(1, 5, r.tables, r.real_tree)
    with pytest.raises(ValueError):
        sign_of_difference(3, 2, r.tables, r.real_tree)


def test_odd_function_fails_injectivity():
    # f = y (y^2 - x^3)
    r = analyze(RootSystem([mono(-1, "3/2"), PuiseuxPoly(), mono(1, "3/2")]))
    assert not r.injectivity.passed
    assert r.injectivity.witness.zero_sum_terms == (1, 2)


@pytest.mark.parametrize("c, snake_ranks, order", [
    (Q(2), (4, 5, 2, 3, 1), [5, 3, 4, 1, 2]),
    (Q(5, 2), (3, 5, 2, 4, 1), [5, 3, 1, 4, 2]),
    (Q(3), (2, 4, 3, 5, 1), [5, 1, 3, 2, 4]),
])
def test_three_cusps(c, snake_ranks, order):
    r = analyze(three_cusps(c))
    assert [a.initial_coeff for a in r.areas] == s_closed_forms(c)
    assert [a.sigma for a in r.areas] == [Q(19, 2)] * 3 + [Q(16, 3)]
    assert r.injectivity.passed
    assert r.snake.target_ranks == snake_ranks
    assert [i + 1 for i in r.integrated.leaf_order()] == order
    assert r.discriminant_match is True


def test_integrated_tree_requires_injectivity():
    r = analyze(five_roots())
    with pytest.raises(InjectivityRequired):
        integrated_tree(r.real_tree, r.tables)


def test_discriminant_match_detects_wrong_order():
    r = analyze(three_cusps(2))
    flipped = r.integrated.reordered({0: r.integrated.children[0]} | {
        v: tuple(reversed(r.integrated.children[v])) for v in r.integrated.internal_vertices()})
    assert check_discriminant_match(flipped, r.sigma, r.discriminant) is False
    wrong_sigma = dict(r.sigma)
    v = r.integrated.internal_vertices()[0]
    wrong_sigma[v] += 1
    assert check_discriminant_match(r.integrated, wrong_sigma, r.discriminant) is False


def test_snake_helper():
    assert snake(3, [2, 0, 1]) == Snake((2, 3, 1))
    with pytest.raises(InjectivityRequired):
        snake(3, [0, 1])
    with pytest.raises(ValueError):
        Snake((1, 1))


def test_area_series_telescopes():
    rs = three_cusps(3)
    F = integrate_y(product_from_roots(rs))
    deltas = critical_value_series(F, rs)
    areas = area_series(F, rs)
    total = sum((a.series for a in areas), PuiseuxPoly())
    assert total == (deltas[-1] - deltas[0]).to_rational_field()


def test_binary_tree_tables_are_injective():
    rs = RootSystem([mono(-1, 1), mono(1, 1) - mono(1, 2), mono(1, 1) + mono(1, 2)])
    r = analyze(rs)
    assert all(len(t.edges) == 2 for t in r.tables.values())
    assert check_injectivity(integration_tables(r.real_tree, r.areas), r.real_tree).passed


def test_unit_scales_areas():
    rs, _ = whitney()
    from snaketree.puiseux import BivarPoly
    r1 = analyze(rs)
    r3 = analyze(rs, BivarPoly.constant(3))
    assert r3.areas[0].initial_coeff == 3 * r1.areas[0].initial_coeff
    assert r3.snake == r1.snake


def test_random_signs_match_critical_values():
    from randsys import draws
    for rs, unit in draws(11, 150):
        r = analyze(rs, unit)
        deltas = r.discriminant_roots
        for (i, j), sgn in r.determinate_signs.items():
            assert sgn == (1 if real_less(deltas[i - 1], deltas[j - 1]) else -1)
        if r.snake is not None:
            by_value = sorted(range(rs.n), key=r.snake.target_ranks.__getitem__)
            assert all(real_less(deltas[a], deltas[b]) for a, b in zip(by_value, by_value[1:]))


def test_single_real_root():
    r = analyze(RootSystem([mono(1, 1)]), run_oracle=True)
    assert r.areas == []
    assert r.snake == Snake((1,))
    assert r.discriminant_match is True
    assert r.oracle_agrees is True
