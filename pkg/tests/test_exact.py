from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from snaketree.errors import FieldMismatch, InvalidField, NotRational
from snaketree.exact import QQ, NumberField, as_rational, nf_conj, nf_mul, nf_rational_value

GAUSS = NumberField([1, 0, 1], [0, -1])
EIS = NumberField([1, 1, 1], [-1, -1])
CUBIC = NumberField([-2, 0, 0, 1])  # t^3 - 2, identity conjugation

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)


def elements(field):
    return st.lists(rationals, min_size=field.degree, max_size=field.degree).map(field)


def test_gaussian_unit():
    i = GAUSS.gen()
    assert i * i == GAUSS(-1)
    assert i.conj() == -i


def test_eisenstein_root_of_unity():
    rho = EIS.gen()
    assert rho ** 3 == EIS.one()
    assert rho + rho.conj() == EIS(-1)
    assert rho * rho.conj() == EIS.one()
    assert (rho * rho.conj()).rational_value() == 1


def test_cubic_reduction():
    t = CUBIC.gen()
    assert t ** 3 == CUBIC(2)
    assert t ** 4 == CUBIC([0, 2])
    assert CUBIC([0, 0, 0, 0, 1]) == CUBIC([0, 2])


@pytest.mark.parametrize("poly", [[0, 0, 1], [-1, 0, 1], [2, -3, 1], [0, 1, 0, 1]])
def test_reducible_rejected(poly):
    with pytest.raises(InvalidField):
        NumberField(poly)


def test_non_monic_rejected():
    with pytest.raises(InvalidField):
        NumberField([1, 0, 2])


def test_bad_conjugation_rejected():
    with pytest.raises(InvalidField):
        NumberField([1, 0, 1], [1, 1])


def test_rational_value_and_errors():
    assert GAUSS(Q(3, 4)).rational_value() == Q(3, 4)
    with pytest.raises(NotRational):
        GAUSS.gen().rational_value()
    with pytest.raises(NotRational):
        nf_rational_value(EIS.gen())


def test_mixed_fields():
    with pytest.raises(FieldMismatch):
        nf_mul(GAUSS.gen(), EIS.gen())
    assert GAUSS.gen() + QQ(1) == GAUSS([1, 1])
    assert QQ(2) * GAUSS.gen() == GAUSS([0, 2])


def test_rational_equality_across_fields():
    assert GAUSS(Q(1, 2)) == QQ(Q(1, 2))
    assert hash(GAUSS(Q(1, 2))) == hash(QQ(Q(1, 2)))
    assert GAUSS(5) == 5


def test_as_rational():
    assert as_rational("3/2") == Q(3, 2)
    assert as_rational(Q(1, 3)) == Q(1, 3)
    with pytest.raises(TypeError):
        as_rational(0.5)


@given(elements(EIS), elements(EIS), elements(EIS))
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == EIS.zero()


@given(elements(GAUSS), elements(GAUSS))
def test_conjugation_is_ring_involution(a, b):
    assert nf_conj(a * b) == a.conj() * b.conj()
    assert (a + b).conj() == a.conj() + b.conj()
    assert a.conj().conj() == a
    assert (a * a.conj()).is_rational()
    assert (a + a.conj()).is_rational()


@given(elements(CUBIC))
def test_identity_conjugation(a):
    assert a.conj() == a
