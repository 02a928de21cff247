import sys
from fractions import Fraction as Q
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from snaketree.exact import NumberField  # noqa: E402
from snaketree.puiseux import BivarPoly, PuiseuxPoly  # noqa: E402
from snaketree.trees import RootSystem  # noqa: E402

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def mono(c, e, field=None):
    return PuiseuxPoly.monomial(c, Q(e), field)


def series(*terms, field=None):
    """``series((c, e), ...)`` -> sum of ``c x^e``."""
    return PuiseuxPoly([(Q(e), c) for c, e in terms], field)


EISENSTEIN = NumberField([1, 1, 1], [-1, -1], name="t")


def whitney():
    return RootSystem([mono(-1, "1/2"), mono(1, "1/2")]), BivarPoly.constant(3)


def five_roots(c=Q(1, 2)):
    return RootSystem([mono(-1, 1), mono(-1, 2), PuiseuxPoly(), mono(1, 2), series((1, 1), (c, 2))])


def four_roots():
    return [mono(-1, 1), mono(1, 1), series((1, 1), (1, 3)), series((1, 1), (2, 3))]


def three_cusps(c):
    c = Q(c)
    rho = EISENSTEIN.gen()
    reals = [mono(-c, "3/2"), mono(-1, "3/2"), mono(1, "3/2"), mono(c, "3/2"), mono(1, "2/3")]
    eta = mono(rho, "2/3", EISENSTEIN)
    return RootSystem(reals, [(eta, 1), (eta.conj(), 1)])


@pytest.fixture
def problems_dir():
    return PROBLEMS
