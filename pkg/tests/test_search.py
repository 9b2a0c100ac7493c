from __future__ import annotations

import itertools

import pytest

from chordknot.bracket import kauffman_bracket
from chordknot.codec import serialize
from chordknot.core import SignedChordDiagram
from chordknot.orientation import is_orientable
from chordknot.poly import LaurentPoly
from chordknot.search import (
    enumerate_all,
    enumerate_diagrams,
    enumerate_gauss_diagrams,
    search,
    search_by_bracket,
)


def brute_key(words, signs):
    """Orbit minimum by trying every circle order and rotation."""
    best = None
    for order in itertools.permutations(range(len(words))):
        for rots in itertools.product(*[range(max(len(words[i]), 1)) for i in order]):
            relabel = {}
            rows = []
            for i, r in zip(order, rots):
                w = words[i][r:] + words[i][:r]
                row = []
                for c in w:
                    relabel.setdefault(c, len(relabel) + 1)
                    row.append(relabel[c])
                rows.append(tuple(row))
            inv = {v: k for k, v in relabel.items()}
            key = (tuple(rows), tuple(signs[inv[k]] for k in range(1, len(inv) + 1)))
            if best is None or key < best:
                best = key
    return best


def brute_count(n, k):
    keys = set()
    points = [c for c in range(1, n + 1) for _ in range(2)]
    for perm in set(itertools.permutations(points)):
        for cuts in itertools.combinations_with_replacement(range(2 * n + 1), k - 1):
            bounds = (0,) + cuts + (2 * n,)
            words = [perm[a:b] for a, b in zip(bounds, bounds[1:])]
            for sv in itertools.product((1, -1), repeat=n):
                keys.add(brute_key(words, dict(zip(range(1, n + 1), sv))))
    return len(keys)


@pytest.mark.parametrize("n,k", [(0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (2, 3)])
def test_counts_match_brute_force(n, k):
    assert sum(1 for _ in enumerate_diagrams(n, k)) == brute_count(n, k)


def test_small_examples():
    assert [serialize(d) for d in enumerate_diagrams(1, 1)] == ["circle: 1- 1", "circle: 1+ 1"]
    assert sum(1 for _ in enumerate_diagrams(2, 1)) == 6
    assert sum(1 for _ in enumerate_diagrams(0, 2)) == 1


def test_no_duplicates_and_sorted():
    codes = [serialize(d) for d in enumerate_all(4, 3)]
    assert len(codes) == len(set(codes))
    for n in range(5):
        for k in range(1, 4):
            ds = list(enumerate_diagrams(n, k))
            assert all(serialize(d) == serialize(SignedChordDiagram(d.circles, dict(d.signs))) for d in ds)


def test_mirror_closure():
    codes = {serialize(d) for d in enumerate_all(4, 2)}
    assert {serialize(SignedChordDiagram(d.circles, {c: -s for c, s in d.signs})) for d in enumerate_all(4, 2)} == codes


def test_bounds_checked():
    with pytest.raises(ValueError):
        list(enumerate_diagrams(7, 1))
    with pytest.raises(ValueError):
        list(enumerate_diagrams(1, 4))


def test_search_by_bracket_examples():
    assert search_by_bracket(LaurentPoly({2: -1, -2: -1}), 1) == ["circle:"]
    assert search_by_bracket(LaurentPoly({}), 3) == []
    assert search_by_bracket(LaurentPoly({10: -1, -10: -1}), 4)


def test_search_predicate():
    hits = list(search(lambda d: not is_orientable(d), 2))
    assert [serialize(d) for d in hits][:1] == ["circle: 1- 2- 1 2"]


def test_gauss_enumeration_counts():
    # one chord on one circle: "O1 U1" and "U1 O1" are rotations, so only signs differ
    assert sum(1 for _ in enumerate_gauss_diagrams(1, 1)) == 2
    # two circles: a kink beside a free circle, or a chord joining the circles
    # (which circle is over is absorbed by swapping circles); times two signs
    assert sum(1 for _ in enumerate_gauss_diagrams(1, 2)) == 4
    gs = list(enumerate_gauss_diagrams(2, 1))
    assert len({serialize(g) for g in gs}) == len(gs)
