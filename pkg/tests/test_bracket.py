from __future__ import annotations

import itertools
import random

import pytest

from chordknot.bracket import ChordCapExceeded, LOOP, jones_f, kauffman_bracket, mod4_class, state_counts
from chordknot.core import SignedChordDiagram, State, component_count
from chordknot.poly import LaurentPoly
from chordknot.search import enumerate_all, random_diagram

from conftest import diag

P = LaurentPoly.parse


def naive_bracket(d) -> LaurentPoly:
    total = LaurentPoly({})
    for markers in itertools.product((1, -1), repeat=d.n_chords):
        s = State(markers)
        total = total + LaurentPoly({s.a - s.b: 1}) * LOOP ** component_count(d, s)
    return total


@pytest.mark.parametrize("circles,expected", [
    ((), "1"),
    (("",), "-A^2-A^-2"),
    (("1+ 2+", "1 2"), "A^6+A^2+A^-2+A^-6"),
    (("1+ 2+ 3+ 1 2 3",), "A^7+A^3+A^-1-A^-9"),
    (("1- 2- 3- 1 2 3",), "-A^9+A+A^-3+A^-7"),
    (("1+ 2- 1 2",), "-A^2-A^-2"),
    (("1- 2- 1 2",), "A^6-1-A^-2-A^-4"),
    (("1+ 1",), "A^5+A"),
    (("1- 1",), "A^-1+A^-5"),
])
def test_fixtures(circles, expected):
    d = diag(*circles) if circles else SignedChordDiagram((), {})
    assert kauffman_bracket(d).to_text() == expected


def test_matches_naive_state_sum():
    for d in enumerate_all(4, 2):
        assert kauffman_bracket(d) == naive_bracket(d)


def test_mirror_symmetry():
    rng = random.Random(5)
    for _ in range(50):
        d = random_diagram(rng, rng.randint(0, 7), 3)
        assert kauffman_bracket(d.mirror()) == kauffman_bracket(d).mirror()


def test_disjoint_union_multiplies():
    a, b = diag("1+ 2+ 3+ 1 2 3"), diag("1- 1")
    assert kauffman_bracket(a.disjoint_union(b)) == kauffman_bracket(a) * kauffman_bracket(b)


def test_jones_normalisation(trefoil):
    assert jones_f(trefoil) == LaurentPoly({-9: 1}) * kauffman_bracket(trefoil) * LaurentPoly({0: -1})
    assert jones_f(diag("1+ 1")) == jones_f(diag(""))


def test_never_zero():
    for d in enumerate_all(4, 3):
        assert not kauffman_bracket(d).is_zero()


def test_parallel_matches_serial():
    d = random_diagram(random.Random(2), 12, 2)
    assert state_counts(d, workers=3) == state_counts(d)
    assert kauffman_bracket(d, workers=3) == kauffman_bracket(d)


def test_cap(monkeypatch):
    with pytest.raises(ChordCapExceeded):
        kauffman_bracket(diag("1+ 2+ 3+ 1 2 3"), cap=2)
    monkeypatch.setenv("CHORDKNOT_BRACKET_CAP", "2")
    with pytest.raises(ChordCapExceeded):
        kauffman_bracket(diag("1+ 2+ 3+ 1 2 3"))


def test_mod4_uniform_on_orientable_mixed_example():
    assert mod4_class(kauffman_bracket(diag("1- 2- 1 2"))) == "mixed"
    assert mod4_class(kauffman_bracket(diag("1+ 2+ 3+ 1 2 3"))) == 3


def test_twisted_bracket_forgets_marks():
    assert kauffman_bracket(diag("1+ * 2- 1 * 2")) == kauffman_bracket(diag("1+ 2- 1 2"))
    assert kauffman_bracket(diag("O1- U2- O3- U1- O2- U3-")) == kauffman_bracket(diag("1- 2- 3- 1 2 3"))
