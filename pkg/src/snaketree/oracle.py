"""Snake of ``F_{x0}`` by direct exact evaluation at small sample points.

Nothing here looks at contact trees, valuations of area series or
integration tables.  The critical points of ``F_{x0}`` are the numbers
``xi_i(x0)``; their values are ``F(x0, xi_i(x0))``.  Sample points are
``x0 = 2^(-j D)`` with ``D`` the common exponent denominator, so every power
of ``x0`` that occurs is an exact rational.

Sampling starts at a ``j`` read off from coefficient heights: below it the
leading term of every pairwise difference dominates the rest of that
difference, so a sample cannot be fooled by large higher-order terms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NoStabilization
from .exact import Rational
from .morse import Snake
from .puiseux import BivarPoly, PuiseuxPoly, compose, eval_exact, exponent_lcm
from .trees import RootSystem

__all__ = ["Sample", "OracleResult", "evaluate_bivar", "dominance_start", "certified_start", "numeric_snake",
           "cross_check"]


@dataclass(frozen=True)
class Sample:
    j: int
    x0: Rational
    points: tuple
    values: tuple
    # indices of roots sorted by critical point; None on ties
    source_order: tuple | None
    snake: Snake | None


@dataclass(frozen=True)
class OracleResult:
    snake: Snake
    x0_used: Rational
    stabilization_count: int
    samples: tuple
    start_j: int = 1

    @property
    def critical_values(self):
        """``(point, value)`` pairs at the final sample."""
        last = self.samples[-1]
        return list(zip(last.points, last.values))


def evaluate_bivar(F: BivarPoly, x0, y0) -> Rational:
    acc = Rational(0)
    for c in reversed(F.y_coeffs):
        acc = acc * y0 + eval_exact(c, x0)
    return acc


def _sample(F, rs, j, D) -> Sample:
    x0 = Rational(1, 2 ** (j * D))
    points = tuple(eval_exact(xi, x0) for xi in rs.real_roots)
    values = tuple(evaluate_bivar(F, x0, y0) for y0 in points)
    if len(set(points)) < len(points) or len(set(values)) < len(values):
        return Sample(j, x0, points, values, None, None)
    source = tuple(sorted(range(len(points)), key=points.__getitem__))
    by_value = sorted(range(len(values)), key=values.__getitem__)
    rank = {i: k + 1 for k, i in enumerate(by_value)}
    return Sample(j, x0, points, values, source, Snake(tuple(rank[i] for i in source)))


def dominance_start(p: PuiseuxPoly) -> int:
    """Smallest ``j >= 1`` with ``2^-j * sum |tail coefficients| < |leading coefficient|``.

    For ``u = x0^(1/D) <= 2^-j`` the sign of ``p(x0)`` is then the sign of its
    leading coefficient, because every tail exponent exceeds the leading one
    by at least ``1/D``.
    """
    coeffs = [abs(c.rational_value()) for _, c in p.items()]
    if len(coeffs) < 2:
        return 1
    ratio = sum(coeffs[1:]) / coeffs[0]
    return max(1, int(ratio).bit_length())


def certified_start(F: BivarPoly, rs: RootSystem) -> int:
    """Sample index beyond which no pairwise order of points or values can change."""
    xs = list(rs.real_roots)
    ds = [compose(F, xi).to_rational_field() for xi in xs]
    j = 1
    for a in range(len(xs)):
        for b in range(a + 1, len(xs)):
            for diff in (xs[b] - xs[a], ds[b] - ds[a]):
                if not diff.is_zero():
                    j = max(j, dominance_start(diff))
    return j


def numeric_snake(F: BivarPoly, rs: RootSystem, stable_runs: int = 3, max_samples: int = 64,
                  start: int | str = "certified") -> OracleResult:
    """Halve ``x0^(1/D)`` until the bi-ordered critical set repeats ``stable_runs`` times.

    ``start="certified"`` begins at :func:`certified_start`; an integer starts
    the plain halving there instead.
    """
    D = exponent_lcm(list(rs.real_roots) + list(F.y_coeffs))
    j0 = certified_start(F, rs) if start == "certified" else int(start)
    samples = []
    streak, previous = 0, None
    for j in range(j0, j0 + max_samples):
        s = _sample(F, rs, j, D)
        samples.append(s)
        if s.snake is None:
            streak, previous = 0, None
            continue
        key = (s.source_order, s.snake)
        streak = streak + 1 if key == previous else 1
        previous = key
        if streak >= stable_runs:
            return OracleResult(s.snake, s.x0, streak, tuple(samples), j0)
    raise NoStabilization(f"no stable snake after {max_samples} samples")


def cross_check(combinatorial: Snake, oracle: OracleResult) -> bool:
    return combinatorial.target_ranks == oracle.snake.target_ranks
