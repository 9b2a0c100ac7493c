from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from chordknot.poly import LaurentPoly, PolyParseError, mod4_class

polys = st.dictionaries(st.integers(-30, 30), st.integers(-10**12, 10**12), max_size=8).map(LaurentPoly)


def test_text_examples():
    assert LaurentPoly({7: 1, 3: 1, -1: 1, -9: -1}).to_text() == "A^7+A^3+A^-1-A^-9"
    assert LaurentPoly({2: -1, -2: -1}).to_text() == "-A^2-A^-2"
    assert LaurentPoly({0: 1}).to_text() == "1"
    assert LaurentPoly({}).to_text() == "0"
    assert LaurentPoly({1: 1}).to_text() == "A"
    assert LaurentPoly({3: 2, 0: -5}).to_text() == "2A^3-5"


def test_parse_variants():
    assert LaurentPoly.parse("A + A^-1") == LaurentPoly({1: 1, -1: 1})
    assert LaurentPoly.parse("-A^10-A^-10") == LaurentPoly({10: -1, -10: -1})
    with pytest.raises(PolyParseError):
        LaurentPoly.parse("A^^2")


@given(polys)
def test_text_round_trip(p):
    assert LaurentPoly.parse(p.to_text()) == p


@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p - p).is_zero()


@given(polys)
def test_mirror_is_involution(p):
    assert p.mirror().mirror() == p


def test_unit_inverse():
    m = LaurentPoly({3: -1})
    assert m * m ** -1 == LaurentPoly({0: 1})


def test_mod4_class():
    assert mod4_class(LaurentPoly({7: 1, 3: 1, -1: 1, -9: -1})) == 3
    assert mod4_class(LaurentPoly({6: 1, 0: -1, -2: -1, -4: -1})) == "mixed"
    assert mod4_class(LaurentPoly({})) == 0
