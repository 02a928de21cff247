"""Puiseux polynomials in ``x`` and polynomials in ``y`` over them.

A :class:`PuiseuxPoly` is a finite sum ``sum c_e x^e`` with rational
exponents ``e >= 0`` and coefficients in a :class:`~snaketree.exact.NumberField`.
A :class:`BivarPoly` is a polynomial in ``y`` whose coefficients are
Puiseux polynomials; it holds both ``f(x, y)`` and its primitive ``F_x(y)``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import gmpy2

from .errors import EqualSeries, IncompatiblePoint, NonRealProduct, UnitVanishes, ZeroSeries
from .exact import QQ, RATIONAL_TYPES, FieldElement, NumberField, Rational, as_rational

INFINITY = math.inf

__all__ = [
    "INFINITY",
    "PuiseuxPoly",
    "BivarPoly",
    "val",
    "lc",
    "real_less",
    "product_from_roots",
    "integrate_y",
    "compose",
    "eval_exact",
    "exponent_lcm",
]


def _common_field(f1: NumberField, f2: NumberField) -> NumberField:
    if f1 is f2 or f1 == f2:
        return f1
    if f1.is_rational:
        return f2
    if f2.is_rational:
        return f1
    from .errors import FieldMismatch
    raise FieldMismatch("operands belong to different number fields")


class PuiseuxPoly:
    """Finite Puiseux sum with exact coefficients.

    ``terms`` maps exponent to coefficient; zero coefficients are dropped and
    iteration is by increasing exponent.
    """

    __slots__ = ("field", "_terms", "_hash")

    def __init__(self, terms=(), field: NumberField | None = None):
        if isinstance(terms, dict):
            terms = terms.items()
        items = []
        for e, c in terms:
            e = as_rational(e)
            if e < 0:
                raise ValueError(f"negative exponent {e}")
            items.append((e, c))
        if field is None:
            field = QQ
            for _, c in items:
                if isinstance(c, FieldElement) and not c.field.is_rational:
                    field = c.field
                    break
        acc: dict = {}
        for e, c in items:
            c = field(c)
            if e in acc:
                acc[e] = acc[e] + c
            else:
                acc[e] = c
        self.field = field
        self._terms = {e: acc[e] for e in sorted(acc) if not acc[e].is_zero()}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, field: NumberField) -> "PuiseuxPoly":
        # terms already canonical: sorted, non-zero, coefficients in field
        obj = object.__new__(cls)
        obj.field = field
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, coeff, exponent, field: NumberField | None = None) -> "PuiseuxPoly":
        return cls([(exponent, coeff)], field)

    @classmethod
    def zero(cls, field: NumberField = QQ) -> "PuiseuxPoly":
        return cls._raw({}, field)

    @classmethod
    def constant(cls, c, field: NumberField | None = None) -> "PuiseuxPoly":
        return cls([(0, c)], field)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def exponents(self) -> list:
        return list(self._terms)

    def coefficient(self, exponent) -> FieldElement:
        return self._terms.get(as_rational(exponent), self.field.zero())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_real(self) -> bool:
        return all(c.is_rational() for c in self._terms.values())

    def lift(self, field: NumberField) -> "PuiseuxPoly":
        if field is self.field:
            return self
        return PuiseuxPoly._raw({e: field(c) for e, c in self._terms.items()}, field)

    def to_rational_field(self) -> "PuiseuxPoly":
        """Re-express over ``QQ``; raises NotRational on irrational coefficients."""
        if self.field.is_rational:
            return self
        return PuiseuxPoly._raw({e: QQ.from_rational(c.rational_value()) for e, c in self._terms.items()}, QQ)

    def _pair(self, other):
        if isinstance(other, PuiseuxPoly):
            field = _common_field(self.field, other.field)
            return self.lift(field), other.lift(field)
        if isinstance(other, RATIONAL_TYPES + (FieldElement,)):
            c = other
            field = self.field
            if isinstance(c, FieldElement) and not c.field.is_rational:
                field = _common_field(field, c.field)
            return self.lift(field), PuiseuxPoly.constant(c, field)
        return None

    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        acc = dict(a._terms)
        for e, c in b._terms.items():
            if e in acc:
                s = acc[e] + c
                if s.is_zero():
                    del acc[e]
                else:
                    acc[e] = s
            else:
                acc[e] = c
        return PuiseuxPoly._raw({e: acc[e] for e in sorted(acc)}, a.field)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxPoly._raw({e: -c for e, c in self._terms.items()}, self.field)

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        field = a.field
        if not a._terms or not b._terms:
            return PuiseuxPoly._raw({}, field)
        acc: dict = {}
        if field.is_rational:
            bt = [(e, c.coeffs[0]) for e, c in b._terms.items()]
            for e1, c1 in a._terms.items():
                x = c1.coeffs[0]
                for e2, y in bt:
                    e = e1 + e2
                    acc[e] = acc.get(e, 0) + x * y
            return PuiseuxPoly._raw(
                {e: FieldElement(field, (acc[e],)) for e in sorted(acc) if acc[e]}, field)
        for e1, c1 in a._terms.items():
            for e2, c2 in b._terms.items():
                e = e1 + e2
                if e in acc:
                    acc[e] = acc[e] + c1 * c2
                else:
                    acc[e] = c1 * c2
        return PuiseuxPoly._raw({e: acc[e] for e in sorted(acc) if not acc[e].is_zero()}, field)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = PuiseuxPoly.constant(1, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conj(self) -> "PuiseuxPoly":
        return PuiseuxPoly._raw({e: c.conj() for e, c in self._terms.items()}, self.field)

    def __eq__(self, other):
        if isinstance(other, RATIONAL_TYPES + (FieldElement,)):
            other = PuiseuxPoly.constant(other)
        if not isinstance(other, PuiseuxPoly):
            return NotImplemented
        if len(self._terms) != len(other._terms):
            return False
        for (e1, c1), (e2, c2) in zip(self._terms.items(), other._terms.items()):
            if e1 != e2 or c1 != c2:
                return False
        return True

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def val(self):
        for e in self._terms:
            return e
        return INFINITY

    def lc(self) -> FieldElement:
        for c in self._terms.values():
            return c
        raise ZeroSeries("the zero series has no initial coefficient")

    def __repr__(self):
        return f"PuiseuxPoly({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            mono = _x_power(e)
            if c.is_rational():
                q = c.coeffs[0]
                if mono and q == 1:
                    parts.append(mono)
                elif mono and q == -1:
                    parts.append("-" + mono)
                else:
                    parts.append(f"{q}*{mono}" if mono else str(q))
            else:
                parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts).replace("+ -", "- ")


def _x_power(e: Rational) -> str:
    if e == 0:
        return ""
    if e == 1:
        return "x"
    if e.denominator == 1:
        return f"x^{e.numerator}"
    return f"x^({e})"


def val(p: PuiseuxPoly):
    """Smallest exponent with a non-zero coefficient, ``INFINITY`` for zero."""
    return p.val()


def lc(p: PuiseuxPoly) -> FieldElement:
    return p.lc()


def real_less(a: PuiseuxPoly, b: PuiseuxPoly) -> bool:
    """``a`` precedes ``b`` for all small enough ``x > 0``."""
    d = b - a
    if d.is_zero():
        raise EqualSeries(f"{a} equals {b}")
    return d.lc().rational_value() > 0


def exponent_lcm(polys) -> int:
    """Least common multiple of all exponent denominators."""
    D = 1
    for p in polys:
        for e in p.exponents():
            D = math.lcm(D, e.denominator)
    return D


class BivarPoly:
    """Polynomial in ``y`` with :class:`PuiseuxPoly` coefficients.

    ``y_coeffs[q]`` is the coefficient of ``y^q``; the list never ends with a
    zero polynomial, so the zero polynomial has an empty list.
    """

    __slots__ = ("field", "y_coeffs")

    def __init__(self, y_coeffs=(), field: NumberField | None = None):
        coeffs = list(y_coeffs)
        if field is None:
            field = QQ
            for c in coeffs:
                field = _common_field(field, c.field)
        coeffs = [c.lift(field) for c in coeffs]
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.field = field
        self.y_coeffs = tuple(coeffs)

    @classmethod
    def from_terms(cls, terms, field: NumberField | None = None) -> "BivarPoly":
        """Build from ``(x_exponent, y_exponent, coeff)`` triples."""
        by_y: dict = {}
        for xe, ye, c in terms:
            if ye < 0 or int(ye) != ye:
                raise ValueError(f"bad y exponent {ye}")
            by_y.setdefault(int(ye), []).append((xe, c))
        top = max(by_y, default=-1)
        coeffs = [PuiseuxPoly(by_y.get(q, ()), field) for q in range(top + 1)]
        return cls(coeffs, field)

    @classmethod
    def constant(cls, c, field: NumberField | None = None) -> "BivarPoly":
        return cls([PuiseuxPoly.constant(c, field)], field)

    @classmethod
    def y(cls, field: NumberField = QQ) -> "BivarPoly":
        return cls([PuiseuxPoly.zero(field), PuiseuxPoly.constant(1, field)], field)

    def degree(self) -> int:
        return len(self.y_coeffs) - 1

    def is_zero(self) -> bool:
        return not self.y_coeffs

    def coeff(self, q: int) -> PuiseuxPoly:
        if 0 <= q < len(self.y_coeffs):
            return self.y_coeffs[q]
        return PuiseuxPoly.zero(self.field)

    def terms(self):
        """Iterate ``(x_exponent, y_exponent, coeff)`` in a fixed order."""
        for q, c in enumerate(self.y_coeffs):
            for e, a in c.items():
                yield e, q, a

    def _coerce(self, other):
        if isinstance(other, BivarPoly):
            return other
        if isinstance(other, PuiseuxPoly):
            return BivarPoly([other])
        if isinstance(other, RATIONAL_TYPES + (FieldElement,)):
            return BivarPoly.constant(other, self.field)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.y_coeffs), len(other.y_coeffs))
        return BivarPoly([self.coeff(q) + other.coeff(q) for q in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly([-c for c in self.y_coeffs], self.field)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return BivarPoly([], _common_field(self.field, other.field))
        out = [None] * (len(self.y_coeffs) + len(other.y_coeffs) - 1)
        for i, a in enumerate(self.y_coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.y_coeffs):
                if b.is_zero():
                    continue
                p = a * b
                out[i + j] = p if out[i + j] is None else out[i + j] + p
        field = _common_field(self.field, other.field)
        return BivarPoly([c if c is not None else PuiseuxPoly.zero(field) for c in out], field)

    __rmul__ = __mul__

    def times_linear(self, root: PuiseuxPoly) -> "BivarPoly":
        """Multiply by ``(y - root)``."""
        field = _common_field(self.field, root.field)
        cs = [c.lift(field) for c in self.y_coeffs]
        root = root.lift(field)
        out = [PuiseuxPoly.zero(field) for _ in range(len(cs) + 1)]
        for q, c in enumerate(cs):
            out[q + 1] = out[q + 1] + c
            out[q] = out[q] - root * c
        return BivarPoly(out, field)

    def to_rational_field(self) -> "BivarPoly":
        return BivarPoly([c.to_rational_field() for c in self.y_coeffs], QQ)

    def __eq__(self, other):
        if not isinstance(other, BivarPoly):
            return NotImplemented
        return self.y_coeffs == other.y_coeffs

    def __hash__(self):
        return hash(self.y_coeffs)

    def __repr__(self):
        return f"BivarPoly({self})"

    def __str__(self):
        if not self.y_coeffs:
            return "0"
        parts = []
        for q, c in enumerate(self.y_coeffs):
            if c.is_zero():
                continue
            ymono = "" if q == 0 else ("y" if q == 1 else f"y^{q}")
            if not ymono:
                parts.append(f"({c})")
            else:
                parts.append(f"({c})*{ymono}")
        return " + ".join(parts)


def product_from_roots(rs, unit: BivarPoly | None = None) -> BivarPoly:
    """Expand ``u * prod (y - xi_i) * prod (y - eta_l)^m_l`` over the rationals."""
    if unit is None:
        unit = BivarPoly.constant(1)
    c00 = unit.coeff(0).coefficient(0)
    if c00.is_zero():
        raise UnitVanishes("the unit vanishes at the origin")
    if not c00.is_rational():
        raise NonRealProduct("the unit has a non-rational constant term")
    f = unit
    for xi in rs.real_roots:
        f = f.times_linear(xi)
    for eta, mult in rs.complex_roots:
        for _ in range(mult):
            f = f.times_linear(eta)
    for c in f.y_coeffs:
        if not c.is_real():
            raise NonRealProduct(f"expanded coefficient {c} is not real")
    return f.to_rational_field()


def integrate_y(f: BivarPoly) -> BivarPoly:
    """Termwise primitive in ``y`` with zero constant of integration."""
    if f.is_zero():
        return f
    out = [PuiseuxPoly.zero(f.field)]
    for q, c in enumerate(f.y_coeffs):
        out.append(c * Rational(1, q + 1))
    return BivarPoly(out, f.field)


def compose(F: BivarPoly, xi: PuiseuxPoly) -> PuiseuxPoly:
    """Substitute ``y := xi`` and expand (Horner)."""
    field = _common_field(F.field, xi.field)
    acc = PuiseuxPoly.zero(field)
    xi = xi.lift(field)
    for c in reversed(F.y_coeffs):
        acc = acc * xi + c.lift(field)
    return acc


def _iroot(n, k: int):
    """Exact integer k-th root of n >= 0, or None."""
    r, exact = gmpy2.iroot(gmpy2.mpz(n), int(k))
    return r if exact else None


@lru_cache(maxsize=4096)
def rational_power(x0: Rational, e: Rational) -> Rational:
    """``x0 ** e`` when it is rational; raises IncompatiblePoint otherwise."""
    if x0 <= 0:
        raise IncompatiblePoint(f"sample point {x0} is not positive")
    num = _iroot(x0.numerator, e.denominator)
    den = _iroot(x0.denominator, e.denominator)
    if num is None or den is None:
        raise IncompatiblePoint(f"{x0}^({e}) is irrational")
    return Rational(num, den) ** e.numerator


def eval_exact(p: PuiseuxPoly, x0) -> Rational:
    """Exact value of a rational-coefficient Puiseux polynomial at ``x0 > 0``."""
    x0 = as_rational(x0)
    total = Rational(0)
    for e, c in p.items():
        total += c.rational_value() * rational_power(x0, e)
    return total
