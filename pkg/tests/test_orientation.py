from __future__ import annotations

import itertools

import pytest

from chordknot.core import State, component_count
from chordknot.orientation import (
    OrientationCertificateError,
    find_orientation,
    is_orientable,
    obstruction,
    oriented_resolution,
)
from chordknot.search import enumerate_all

from conftest import diag


def brute_force_orientable(d) -> bool:
    """Try every assignment of directions to arcs."""
    arcs = d.arcs
    for dirs in itertools.product((1, -1), repeat=len(arcs)):
        dir_of = dict(zip(arcs, dirs))
        ok = True
        for c, (p, q) in d.endpoints.items():
            types = []
            for e in (p, q):
                i, o = dir_of[d.in_arc(e)], dir_of[d.out_arc(e)]
                if i == o:
                    ok = False
                    break
                types.append(i)
            if not ok or types[0] == types[1]:
                ok = False
                break
        if ok:
            return True
    return False


def test_pair_fixture():
    for signs in ("1+ 2+ 1 2", "1+ 2- 1 2", "1- 2- 1 2"):
        assert not is_orientable(diag(signs))
    assert is_orientable(diag("1+ 2+", "1 2"))


def test_chord_free_circles_are_orientable():
    assert is_orientable(diag(""))
    assert is_orientable(diag("", ""))


def test_kink_is_orientable():
    o = find_orientation(diag("1+ 1"))
    assert o is not None
    o.check()


def test_against_brute_force():
    for d in enumerate_all(3, 2):
        assert is_orientable(d) == brute_force_orientable(d), d


def test_methods_agree_and_certificates_check():
    for d in enumerate_all(4, 3):
        o = find_orientation(d)
        rep = obstruction(d)
        assert (o is not None) == rep.orientable
        if o is not None:
            o.check()
            arrows = o.arrows()
            # tails and heads alternate along every circle
            for ci, word in enumerate(d.circles):
                is_tail = [arrows[c][0] == (ci, k) for k, c in enumerate(word)]
                n = len(is_tail)
                assert all(is_tail[k] != is_tail[(k + 1) % n] for k in range(n))


def test_cycle_basis_size():
    d = diag("1+ 2+ 3+ 1 2 3")
    rep = obstruction(d)
    # graph: 6 vertices, 6 arcs + 3 chords, connected
    assert len(rep.cycle_basis) == 6 + 3 - 6 + 1


def test_oriented_resolution_certificate(trefoil):
    o = find_orientation(trefoil)
    for bits in range(8):
        rc = oriented_resolution(trefoil, o, State.from_bits(bits, 3))
        assert rc.count >= 1


def test_oriented_resolution_refuses_wrong_orientation():
    d = diag("1+ 2+", "1 2")
    o = find_orientation(d)
    flipped = type(o)(o.diagram, {a: -v for a, v in o.dir.items()})
    # reversing all arcs is again an orientation; break one arc instead
    broken = dict(o.dir)
    first = sorted(broken)[0]
    broken[first] = -broken[first]
    flipped.check()
    with pytest.raises(OrientationCertificateError):
        oriented_resolution(d, type(o)(o.diagram, broken), State((1, 1)))


def test_loop_count_parity_characterises_orientability():
    # every marker flip changes the loop count by one exactly when the
    # diagram is orientable (checked both ways up to four chords)
    for d in enumerate_all(4, 3):
        n = d.n_chords
        counts = [component_count(d, State.from_bits(b, n)) for b in range(1 << n)]
        all_odd = all(abs(counts[b] - counts[b ^ 1 << k]) == 1 for b in range(1 << n) for k in range(n))
        assert all_odd == is_orientable(d), d
