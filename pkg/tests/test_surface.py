from __future__ import annotations

import pytest

from chordknot.core import GaussDiagram, blunt
from chordknot.orientation import is_orientable
from chordknot.search import enumerate_gauss_diagrams
from chordknot.surface import checkerboard, faces, genus

from conftest import diag


def test_classical_trefoil():
    g = diag("O1- U2- O3- U1- O2- U3-")
    fs = faces(g)
    (comp,) = fs.components
    assert (comp.vertices, comp.edges, comp.faces) == (3, 6, 5)
    assert genus(g) == 0
    assert checkerboard(g) is not None


def test_virtual_trefoil():
    g = diag("O1+ O2+ U1+ U2+")
    assert genus(g) == 1
    assert checkerboard(g) is None


def test_hopf_and_free_circle():
    assert genus(diag("O1+ U2+", "U1 O2")) == 0
    # one circle over at both crossings: the virtual Hopf link
    assert genus(diag("O1+ O2+", "U1 U2")) == 1
    (comp,) = faces(diag("")).components
    assert (comp.vertices, comp.edges, comp.faces) == (1, 1, 2)
    assert checkerboard(diag("")) == {0: 0, 1: 1}


def test_not_colourable_example():
    assert checkerboard(diag("O1+ U2- U1 O2")) is None


def test_signed_input_refused():
    with pytest.raises(TypeError):
        genus(diag("1+ 2+ 3+ 1 2 3"))


def test_twisted_uses_underlying():
    assert genus(diag("O1+ * O2+ U1+ U2+")) == 1


def test_face_traversal_is_a_partition():
    for n in range(4):
        for g in enumerate_gauss_diagrams(n, 2):
            fs = faces(g)
            darts = [x for f in fs.faces for x in f]
            assert sorted(darts) == sorted(fs.darts)
            for comp in fs.components:
                assert comp.euler % 2 == 0 and comp.genus >= 0


def test_genus_bounded_by_chords():
    # one vertex per chord: the surface of a connected diagram has genus <= (n + 1) / 2
    for g in enumerate_gauss_diagrams(4, 1):
        assert genus(g) <= 2


def test_checkerboard_iff_orientable_small():
    for n in range(4):
        for k in (1, 2):
            for g in enumerate_gauss_diagrams(n, k):
                assert (checkerboard(g) is not None) == is_orientable(blunt(g))


def test_colouring_is_proper():
    g = diag("O1- U2- O3- U1- O2- U3-")
    col = checkerboard(g)
    face_of = faces(g).face_of()
    for a in g.underlying.arcs:
        assert col[face_of[(a, 1)]] != col[face_of[(a, -1)]]
