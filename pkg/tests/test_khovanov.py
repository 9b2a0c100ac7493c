from __future__ import annotations

import random
from fractions import Fraction

import pytest

from chordknot.bracket import ChordCapExceeded, jones_f
from chordknot.khovanov import (
    NonOrientableError,
    build_complex,
    dsq_defect,
    euler_identity,
    homology,
    naive_complex,
)
from chordknot.orientation import is_orientable
from chordknot.poly import LaurentPoly
from chordknot.search import enumerate_all, random_diagram

from conftest import diag


def dense(cx, key):
    rows = cx.matrices.get(key, [])
    width = len(cx.basis.get((key[0] + 1, key[1]), []))
    return [[row.get(t, 0) for t in range(width)] for row in rows]


def rank_q(m) -> int:
    m = [[Fraction(v) for v in row] for row in m]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


def rank_2(m) -> int:
    rows = [sum(1 << j for j, v in enumerate(row) if v % 2) for row in m]
    rank = 0
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
    return rank


def field_homology(cx, rank):
    out = {}
    for (i, j), gens in cx.basis.items():
        r_out = rank(dense(cx, (i, j)))
        r_in = rank(dense(cx, (i - 1, j))) if (i - 1, j) in cx.basis else 0
        out[(i, j)] = len(gens) - r_out - r_in
    return out


def check_against_fields(d):
    cx = build_complex(d)
    table = homology(cx)
    over_q = field_homology(cx, rank_q)
    over_2 = field_homology(cx, rank_2)
    for key in cx.basis:
        i, j = key
        assert table.betti(i, j) == over_q[key]
        twos = sum(1 for t in table.torsion(i, j) + table.torsion(i + 1, j) if t % 2 == 0)
        assert over_2[key] == over_q[key] + twos
    return table


def test_unknot():
    table = homology(build_complex(diag("")))
    assert table.nonzero() == {(0, 1): (1, []), (0, -1): (1, [])}


def test_trefoil_table(trefoil, trefoil_mirror):
    t = check_against_fields(trefoil)
    assert t.nonzero() == {
        (0, 1): (1, []), (0, 3): (1, []), (2, 5): (1, []), (3, 9): (1, []), (3, 7): (0, [2]),
    }
    m = check_against_fields(trefoil_mirror)
    assert m == t.mirror()


def test_field_oracles_small():
    for d in enumerate_all(4, 2):
        if is_orientable(d):
            check_against_fields(d)


def test_d_squared_zero_small():
    for d in enumerate_all(4, 3):
        if not is_orientable(d):
            continue
        cx = build_complex(d)
        for key in cx.basis:
            for src in range(len(cx.basis[key])):
                g = cx.basis[key][src]
                acc = {}
                for h, c in cx.apply(g).items():
                    for k, c2 in cx.apply(h).items():
                        acc[k] = acc.get(k, 0) + c * c2
                assert not any(acc.values())


def test_non_orientable_refused():
    with pytest.raises(NonOrientableError, match="dsq"):
        build_complex(diag("1+ 2- 1 2"))


def test_dsq_on_failure_example():
    rep = dsq_defect(diag("1+ 2- 1 2"))
    assert [e.describe() for e in rep.entries] == ["1 ↦ 2x at (i:-1→1, j:0)"]
    ranks = sorted(r.to_text() for _, _, r in rep.graded_ranks)
    assert ranks == sorted(["1+q^-2", "q+q^-1", "q^2+2+q^-2", "q^2+1"])


def test_dsq_zero_on_orientable(trefoil):
    assert dsq_defect(trefoil).is_zero


def test_naive_equals_real_on_orientable(trefoil):
    a, b = naive_complex(trefoil), build_complex(trefoil)
    assert a.matrices == b.matrices and a.basis == b.basis


def test_euler_identity(trefoil):
    rep = euler_identity(trefoil)
    assert rep.chain_matches and rep.homology_matches
    assert rep.jones == jones_f(trefoil)


def test_first_move_invariance():
    base = homology(build_complex(diag("")))
    for code in ("1+ 1", "1- 1", "1+ 1 2- 2"):
        assert homology(build_complex(diag(code))) == base


def test_gradings_are_integral_and_j_parity():
    rng = random.Random(4)
    for _ in range(20):
        d = random_diagram(rng, rng.randint(1, 6), 2, orientable=True)
        cx = build_complex(d)
        parities = {j % 2 for (_, j) in cx.basis}
        assert len(parities) == 1


def test_parallel_homology(trefoil):
    cx = build_complex(trefoil)
    assert homology(cx, workers=2) == homology(cx)


def test_cap(monkeypatch):
    monkeypatch.setenv("CHORDKNOT_KHOVANOV_CAP", "2")
    with pytest.raises(ChordCapExceeded):
        build_complex(diag("1+ 2+ 3+ 1 2 3"))


def test_poincare_of_unknot():
    assert homology(build_complex(diag(""))).poincare() == LaurentPoly({1: 1, -1: 1}, "q")


def test_mirror_duality_small():
    for d in enumerate_all(4, 2):
        if is_orientable(d):
            assert homology(build_complex(d.mirror())) == homology(build_complex(d)).mirror()
