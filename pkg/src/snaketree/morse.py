"""Combinatorial type of the morsification ``F_x(y)`` from contact trees.

Given the roots of ``f = dF/dy``, this module computes the area series
``S_r = F(xi_{r+1}) - F(xi_r)``, the integrated exponent ``sigma`` on the real
contact tree, the discrete integration tables at its internal vertices and,
when those tables are injective, the integrated leaf order and the snake.
It also builds the contact tree of the critical value series
``delta_i = F(xi_i)`` and checks that it matches the integrated tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import (EqualCriticalValueSeries, EqualDiscriminantRoots, IndeterminateSign,
                     InconsistencyError, InjectivityRequired)
from .exact import Rational
from .puiseux import BivarPoly, PuiseuxPoly, compose, integrate_y, product_from_roots
from .trees import ContactTree, RootSystem, WedgeMap, build_contact_tree, build_embedded_trees, wedge_map

__all__ = [
    "AreaSeries",
    "IntegrationTable",
    "Witness",
    "InjectivityVerdict",
    "Snake",
    "MorsificationReport",
    "area_series",
    "sigma",
    "sigma_map",
    "integration_table",
    "integration_tables",
    "check_injectivity",
    "integrated_tree",
    "snake",
    "sign_of_difference",
    "pairwise_signs",
    "discriminant_tree",
    "check_discriminant_match",
    "analyze",
]


@dataclass(frozen=True)
class AreaSeries:
    index: int
    series: PuiseuxPoly
    sigma: Rational
    initial_coeff: Rational
    wedge_vertex: int


@dataclass(frozen=True)
class IntegrationTable:
    """Partial sums of initial coefficients along the outgoing edges at a vertex.

    ``iota[k]`` is the 1-based index ``r`` of the area series attached to the
    edge interval ``(edges[k], edges[k+1])``.
    """

    vertex: int
    edges: tuple
    iota: tuple
    partial_sums: tuple

    def is_injective(self) -> bool:
        return len(set(self.partial_sums)) == len(self.partial_sums)

    def first_collision(self):
        seen = {}
        for b, v in enumerate(self.partial_sums):
            if v in seen:
                return seen[v], b
            seen[v] = b
        return None


@dataclass(frozen=True)
class Witness:
    vertex: int
    exponent: Rational
    colliding: tuple
    # 1-based positions of the first and last outgoing edge of the vanishing sum
    zero_sum_range: tuple
    zero_sum_terms: tuple


@dataclass(frozen=True)
class InjectivityVerdict:
    passed: bool
    witnesses: tuple = ()

    @property
    def witness(self):
        return self.witnesses[0] if self.witnesses else None


@dataclass(frozen=True)
class Snake:
    """Permutation ``i -> rank of the critical value at the i-th critical point``."""

    target_ranks: tuple

    @property
    def n(self) -> int:
        return len(self.target_ranks)

    @property
    def source_order(self) -> tuple:
        return tuple(range(1, self.n + 1))

    def __post_init__(self):
        if sorted(self.target_ranks) != list(range(1, len(self.target_ranks) + 1)):
            raise ValueError(f"{self.target_ranks} is not a permutation")

    def as_list(self) -> list:
        return list(self.target_ranks)


@dataclass
class MorsificationReport:
    roots: RootSystem
    unit: BivarPoly
    f: BivarPoly
    F: BivarPoly
    complex_tree: ContactTree
    real_tree: ContactTree
    areas: list
    sigma: dict
    tables: dict
    injectivity: InjectivityVerdict
    determinate_signs: dict
    indeterminate_pairs: list
    discriminant_roots: list | None = None
    discriminant: ContactTree | None = None
    integrated: ContactTree | None = None
    snake: Snake | None = None
    discriminant_match: bool | None = None
    oracle: object | None = None
    oracle_error: str | None = None
    oracle_agrees: bool | None = None
    notes: list = field(default_factory=list)


def critical_value_series(F: BivarPoly, rs: RootSystem) -> list:
    return [compose(F, xi) for xi in rs.real_roots]


def area_series(F: BivarPoly, rs: RootSystem, tree: ContactTree | None = None, deltas=None) -> list:
    """The ``n - 1`` differences of consecutive critical value series."""
    if tree is None:
        tree = build_contact_tree(rs.real_roots)
    if deltas is None:
        deltas = critical_value_series(F, rs)
    out = []
    for r in range(1, rs.n):
        S = (deltas[r] - deltas[r - 1]).to_rational_field()
        if S.is_zero():
            raise EqualCriticalValueSeries(f"F(xi_{r}) and F(xi_{r + 1}) coincide")
        P = tree.wedge(tree.leaf_of[r - 1], tree.leaf_of[r])
        out.append(AreaSeries(r, S, S.val(), S.lc().rational_value(), P))
    return out


def sigma(tc: ContactTree, P: int):
    """Integrated exponent at a vertex ``P`` of the complex tree.

    Every leaf contributes ``E(P ^ leaf)`` times its multiplicity, the two
    members of a conjugate pair separately.
    """
    total = tc.exponent[P]
    for v, m in tc.multiplicity.items():
        total = total + m * tc.exponent[tc.wedge(P, v)]
    return total


def sigma_map(tc: ContactTree, tr: ContactTree) -> dict:
    """``sigma`` on every vertex of the real tree, through its embedding."""
    return {v: sigma(tc, tr.embedding[v]) for v in range(len(tr))}


def integration_table(tree: ContactTree, areas, P: int, wmap: WedgeMap | None = None) -> IntegrationTable:
    wmap = wmap or wedge_map(tree)
    edges = tree.children[P]
    iota, sums = [], [Rational(0)]
    for k in range(len(edges) - 1):
        r = wmap.preimage(P, k).lower + 1
        iota.append(r)
        sums.append(sums[-1] + areas[r - 1].initial_coeff)
    return IntegrationTable(P, tuple(edges), tuple(iota), tuple(sums))


def integration_tables(tree: ContactTree, areas) -> dict:
    wmap = wedge_map(tree)
    return {P: integration_table(tree, areas, P, wmap) for P in tree.internal_vertices()}


def check_injectivity(tables, tree: ContactTree | None = None) -> InjectivityVerdict:
    """Injectivity of every table; failures carry the vertex and index pair."""
    tables = list(tables.values()) if isinstance(tables, dict) else list(tables)
    witnesses = []
    for t in tables:
        hit = t.first_collision()
        if hit is None:
            continue
        a, b = hit
        exponent = tree.exponent[t.vertex] if tree is not None else None
        witnesses.append(Witness(t.vertex, exponent, (a, b), (a + 1, b + 1), t.iota[a:b]))
    return InjectivityVerdict(not witnesses, tuple(witnesses))


def integrated_tree(tree: ContactTree, tables: dict) -> ContactTree:
    """Reorder outgoing edges at each internal vertex by the table values."""
    orders = {}
    for P, t in tables.items():
        if not t.is_injective():
            raise InjectivityRequired(f"integration table at vertex {P} is not injective")
        orders[P] = tuple(e for _, e in sorted(zip(t.partial_sums, t.edges)))
    return tree.reordered(orders)


def snake(n: int, integrated_order) -> Snake:
    """``integrated_order`` lists 0-based root labels from lowest to highest value."""
    order = list(integrated_order)
    if sorted(order) != list(range(n)):
        raise InjectivityRequired("integrated order is missing or incomplete")
    ranks = [0] * n
    for pos, lab in enumerate(order):
        ranks[lab] = pos + 1
    return Snake(tuple(ranks))


def sign_of_difference(i: int, j: int, tables: dict, tree: ContactTree) -> int:
    """Sign of ``F(xi_j) - F(xi_i)`` near ``x = 0`` for 1-based ``i < j``.

    Only the outgoing edges at ``xi_i ^ xi_j`` between the two leaves are
    used, so the answer is available even where other sums vanish.
    """
    if not i < j:
        raise ValueError("need i < j")
    vi, vj = tree.leaf_of[i - 1], tree.leaf_of[j - 1]
    P = tree.wedge(vi, vj)
    t = tables[P]
    ka = t.edges.index(tree.edge_towards(P, vi))
    kb = t.edges.index(tree.edge_towards(P, vj))
    s = t.partial_sums[kb] - t.partial_sums[ka]
    if s == 0:
        raise IndeterminateSign(f"s-sum between xi_{i} and xi_{j} vanishes")
    return 1 if s > 0 else -1


def pairwise_signs(n: int, tables: dict, tree: ContactTree):
    known, unknown = {}, []
    for i, j in combinations(range(1, n + 1), 2):
        try:
            known[i, j] = sign_of_difference(i, j, tables, tree)
        except IndeterminateSign:
            unknown.append((i, j))
    return known, unknown


def discriminant_tree(F: BivarPoly, rs: RootSystem, deltas=None):
    """Critical value series and their real contact tree."""
    if deltas is None:
        deltas = critical_value_series(F, rs)
    deltas = [d.to_rational_field() for d in deltas]
    for a, b in combinations(range(len(deltas)), 2):
        if deltas[a] == deltas[b]:
            raise EqualDiscriminantRoots(f"delta_{a + 1} = delta_{b + 1}")
    return deltas, build_contact_tree(deltas)


def check_discriminant_match(integrated: ContactTree, sigma_values: dict, discriminant: ContactTree) -> bool:
    """Label-preserving isomorphism sending ``sigma`` to ``E`` and planar to planar."""
    if len(integrated) != len(discriminant):
        return False
    def key(tree, v):
        # the root and a lone leaf share a clade when n = 1
        return tree.clade(v), v == 0, tree.is_leaf(v)

    by_clade = {key(discriminant, v): v for v in range(len(discriminant))}
    for v in range(len(integrated)):
        w = by_clade.get(key(integrated, v))
        if w is None:
            return False
        if v == 0 or integrated.is_leaf(v):
            if integrated.is_leaf(v) != discriminant.is_leaf(w):
                return False
            continue
        if sigma_values[v] != discriminant.exponent[w]:
            return False
        mine = [integrated.clade(c) for c in integrated.children[v]]
        theirs = [discriminant.clade(c) for c in discriminant.children[w]]
        if mine != theirs:
            return False
    return integrated.leaf_order() == discriminant.leaf_order()


def analyze(rs: RootSystem, unit: BivarPoly | None = None, run_oracle: bool = False) -> MorsificationReport:
    """Run the whole pipeline; see :class:`MorsificationReport`."""
    unit = unit if unit is not None else BivarPoly.constant(1)
    f = product_from_roots(rs, unit)
    F = integrate_y(f)
    tc = build_embedded_trees(rs)
    tr = tc.real_part()
    deltas = critical_value_series(F, rs)
    areas = area_series(F, rs, tr, deltas)
    sig = sigma_map(tc, tr)
    for a in areas:
        if a.sigma != sig[a.wedge_vertex]:
            raise InconsistencyError(
                f"val(S_{a.index}) = {a.sigma} but the tree gives sigma = {sig[a.wedge_vertex]}")
    tables = integration_tables(tr, areas)
    verdict = check_injectivity(tables, tr)
    known, unknown = pairwise_signs(rs.n, tables, tr)
    report = MorsificationReport(rs, unit, f, F, tc, tr, areas, sig, tables, verdict, known, unknown)
    try:
        report.discriminant_roots, report.discriminant = discriminant_tree(F, rs, deltas)
    except EqualDiscriminantRoots:
        if verdict.passed:
            raise InconsistencyError("critical value series coincide although injectivity holds")
        report.notes.append("critical value series are not pairwise distinct")
    if verdict.passed:
        report.integrated = integrated_tree(tr, tables)
        report.snake = snake(rs.n, report.integrated.leaf_order())
        report.discriminant_match = check_discriminant_match(report.integrated, sig, report.discriminant)
    if run_oracle and report.discriminant is not None:
        from .errors import NoStabilization
        from .oracle import cross_check, numeric_snake
        try:
            report.oracle = numeric_snake(F, rs)
        except NoStabilization as exc:
            report.oracle_error = str(exc)
        else:
            if report.snake is not None:
                report.oracle_agrees = cross_check(report.snake, report.oracle)
    return report
