"""Exact scalars: rationals and a small number-field quotient ring.

Rationals are ``gmpy2.mpq``: canonical reduced form, hashes equal to those of
:class:`fractions.Fraction`, and an order of magnitude faster.  ``Fraction``
values are accepted everywhere and converted on entry.  Non-real coefficients live in
``Q[t]/(m(t))`` together with a user-declared conjugation ``t -> c(t)``;
nothing here ever computes a complex embedding.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import gmpy2

from .errors import FieldMismatch, InvalidField, NotRational

Rational = gmpy2.mpq
_MPQ = type(gmpy2.mpq(0))
RATIONAL_TYPES = (int, Fraction, type(gmpy2.mpq(0)), type(gmpy2.mpz(0)))

__all__ = [
    "Rational",
    "RATIONAL_TYPES",
    "NumberField",
    "FieldElement",
    "QQ",
    "as_rational",
    "nf_mul",
    "nf_conj",
    "nf_rational_value",
]


def as_rational(value) -> Rational:
    if type(value) is _MPQ:
        return value
    if isinstance(value, RATIONAL_TYPES) or isinstance(value, str):
        return Rational(value)
    raise TypeError(f"cannot read {value!r} as a rational")


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _divisors(n):
    n = abs(n)
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _has_rational_root(coeffs):
    """Rational root test for a polynomial given low-to-high."""
    coeffs = _trim(coeffs)
    if len(coeffs) <= 1:
        return False
    if coeffs[0] == 0:
        return True
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // _gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    for p, q in product(_divisors(ints[0]), _divisors(ints[-1])):
        for cand in (Rational(p, q), Rational(-p, q)):
            acc = Rational(0)
            for c in reversed(ints):
                acc = acc * cand + c
            if acc == 0:
                return True
    return False


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class NumberField:
    """``Q[t]/(m(t))`` with a conjugation involution.

    Parameters
    ----------
    minimal_polynomial : sequence of rationals
        Coefficients of the monic polynomial ``m``, lowest degree first.
    conjugation_image : sequence of rationals
        Coefficients (lowest first) of the image of ``t`` under conjugation,
        degree below ``deg m``.  Defaults to ``t`` itself (identity).
    name : str
        Printed name of the generator.
    """

    def __init__(self, minimal_polynomial, conjugation_image=None, name="t"):
        m = _trim(as_rational(c) for c in minimal_polynomial)
        if len(m) < 2:
            raise InvalidField("minimal polynomial must have degree >= 1")
        if m[-1] != 1:
            raise InvalidField("minimal polynomial must be monic")
        self.minimal_polynomial = tuple(m)
        self.degree = d = len(m) - 1
        self.name = name
        if d <= 3 and d > 1 and _has_rational_root(m):
            raise InvalidField("minimal polynomial is reducible over Q")
        # reduction table: t^k for d <= k <= 2d-2 in the power basis
        table = []
        cur = [-c for c in m[:-1]]
        for _ in range(max(d - 1, 0)):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [Rational(0)] + cur[:-1]
            cur = [a - top * b for a, b in zip(cur, m[:-1])]
        self._reduction = table
        if conjugation_image is None:
            image = self._reduce_poly([Rational(0), Rational(1)])
        else:
            image = [as_rational(c) for c in conjugation_image]
            if len(_trim(image)) > d:
                raise InvalidField("conjugation image must have degree < deg m")
            image = (image + [Rational(0)] * d)[:d]
        self.conjugation_image = tuple(image)
        self._validate_conjugation()

    @classmethod
    def rational(cls) -> "NumberField":
        return QQ

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def _reduce_poly(self, coeffs):
        d = self.degree
        coeffs = list(coeffs)
        if len(coeffs) <= d:
            return tuple(coeffs + [Rational(0)] * (d - len(coeffs)))
        if d == 1:
            # t = -m0
            root = -self.minimal_polynomial[0]
            acc = Rational(0)
            for c in reversed(coeffs):
                acc = acc * root + c
            return (acc,)
        out = list(coeffs[:d])
        for k in range(d, len(coeffs)):
            c = coeffs[k]
            if c:
                row = self._reduction[k - d]
                for i in range(d):
                    out[i] += c * row[i]
        return tuple(out)

    def _validate_conjugation(self):
        g = FieldElement(self, self.conjugation_image)
        acc = self.zero()
        for c in reversed(self.minimal_polynomial):
            acc = acc * g + c
        if not acc.is_zero():
            raise InvalidField("conjugation image is not a root of the minimal polynomial")
        if self.degree > 1 and g.conj() != self.gen():
            raise InvalidField("conjugation is not an involution")

    # element constructors
    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field is self:
                return value
            if value.field.is_rational:
                return self.from_rational(value.coeffs[0])
            raise FieldMismatch("element belongs to another number field")
        if isinstance(value, (list, tuple)):
            coeffs = [as_rational(c) for c in value]
            if len(coeffs) <= 2 * self.degree - 1:
                return FieldElement(self, self._reduce_poly(coeffs))
            acc = self.zero()
            t = self.gen()
            for c in reversed(coeffs):
                acc = acc * t + c
            return acc
        return self.from_rational(as_rational(value))

    def from_rational(self, q) -> "FieldElement":
        return FieldElement(self, (q,) + (Rational(0),) * (self.degree - 1))

    def zero(self) -> "FieldElement":
        return self.from_rational(Rational(0))

    def one(self) -> "FieldElement":
        return self.from_rational(Rational(1))

    def gen(self) -> "FieldElement":
        return self([0, 1])

    def __eq__(self, other):
        if not isinstance(other, NumberField):
            return NotImplemented
        return (self.minimal_polynomial == other.minimal_polynomial
                and self.conjugation_image == other.conjugation_image)

    def __hash__(self):
        return hash((self.minimal_polynomial, self.conjugation_image))

    def __repr__(self):
        return f"NumberField(minpoly={_poly_str(self.minimal_polynomial, self.name)}, conj={_poly_str(self.conjugation_image, self.name)})"


def _poly_str(coeffs, name):
    parts = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        mono = "" if k == 0 else (name if k == 1 else f"{name}^{k}")
        if mono and c == 1:
            parts.append(mono)
        elif mono and c == -1:
            parts.append("-" + mono)
        elif mono:
            parts.append(f"{c}*{mono}")
        else:
            parts.append(str(c))
    if not parts:
        return "0"
    return "+".join(parts).replace("+-", "-")


class FieldElement:
    """Element of a :class:`NumberField`, stored in the power basis."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field == self.field:
                return other
            if other.field.is_rational:
                return self.field.from_rational(other.coeffs[0])
            if self.field.is_rational:
                return NotImplemented
            raise FieldMismatch("operands belong to different number fields")
        if isinstance(other, RATIONAL_TYPES):
            return self.field.from_rational(as_rational(other))
        return NotImplemented

    def _lift(self, other):
        """Return (a, b) over a common field, promoting rationals."""
        if isinstance(other, FieldElement) and self.field.is_rational and not other.field.is_rational:
            return other.field.from_rational(self.coeffs[0]), other
        b = self._coerce(other)
        if b is NotImplemented:
            return None
        return self, b

    def __add__(self, other):
        pair = self._lift(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return FieldElement(a.field, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        pair = self._lift(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return FieldElement(a.field, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._lift(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        field = a.field
        if field.degree == 1:
            return FieldElement(field, (a.coeffs[0] * b.coeffs[0],))
        d = field.degree
        prod = [Rational(0)] * (2 * d - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return FieldElement(field, field._reduce_poly(prod))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, RATIONAL_TYPES):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        if not isinstance(other, FieldElement):
            return NotImplemented
        pair = self._lift(other)
        if pair is None:
            return False
        a, b = pair
        return a.coeffs == b.coeffs

    def __hash__(self):
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def conj(self) -> "FieldElement":
        field = self.field
        if field.degree == 1:
            return self
        g = FieldElement(field, field.conjugation_image)
        acc = field.zero()
        for c in reversed(self.coeffs):
            acc = acc * g + c
        return acc

    def rational_value(self) -> Rational:
        if any(self.coeffs[1:]):
            raise NotRational(f"{self} is not rational")
        return self.coeffs[0]

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        return _poly_str(self.coeffs, self.field.name)


QQ = NumberField([0, 1], name="t")


def nf_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    if a.field != b.field:
        raise FieldMismatch("operands belong to different number fields")
    return a * b


def nf_conj(a: FieldElement) -> FieldElement:
    return a.conj()


def nf_rational_value(a: FieldElement) -> Rational:
    return a.rational_value()
