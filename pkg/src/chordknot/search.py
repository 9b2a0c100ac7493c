"""Exhaustive enumeration of small diagrams up to relabelling.

Two diagrams are identified when they differ by rotating circles,
permuting circles, or renumbering chords. Reversing a circle's orientation
is not an identification: the base is oriented.
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Iterator

from chordknot.bracket import kauffman_bracket
from chordknot.codec import canonical_labelings, serialize
from chordknot.core import GaussDiagram, SignedChordDiagram
from chordknot.poly import LaurentPoly

__all__ = [
    "MAX_CHORDS",
    "MAX_CIRCLES",
    "canonical_code",
    "enumerate_all",
    "enumerate_diagrams",
    "enumerate_gauss_diagrams",
    "random_diagram",
    "search",
    "search_by_bracket",
]

MAX_CHORDS = 6
MAX_CIRCLES = 3


def _check_bounds(n_chords: int, n_circles: int) -> None:
    if not 0 <= n_chords <= MAX_CHORDS:
        raise ValueError(f"chord count {n_chords} outside 0..{MAX_CHORDS}")
    if not 0 <= n_circles <= MAX_CIRCLES:
        raise ValueError(f"circle count {n_circles} outside 0..{MAX_CIRCLES}")


def canonical_code(d) -> str:
    return serialize(d)


def _matchings(points: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for i, p in enumerate(rest):
        for m in _matchings(rest[:i] + rest[i + 1:]):
            yield [(first, p)] + m


def _size_partitions(total: int, parts: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples of ``parts`` non-negative ints summing to ``total``."""
    cap = total if cap is None else cap
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total, cap), -1, -1):
        if first * parts < total:
            break
        for rest in _size_partitions(total - first, parts - 1, first):
            yield (first,) + rest


def _structures(n_chords: int, n_circles: int) -> list[tuple[tuple, list]]:
    """Distinct unsigned chord diagrams: (canonical code, automorphisms).

    Each automorphism is a tuple ``perm`` with ``perm[k]`` the image of
    chord ``k + 1`` (0-based images).
    """
    found: dict[tuple, list] = {}
    for sizes in _size_partitions(2 * n_chords, n_circles):
        for matching in _matchings(list(range(2 * n_chords))):
            label = {}
            for cid, (p, q) in enumerate(matching, start=1):
                label[p] = label[q] = cid
            words, pos = [], 0
            for size in sizes:
                words.append(tuple(label[p] for p in range(pos, pos + size)))
                pos += size
            d = SignedChordDiagram(tuple(words), {c: 1 for c in range(1, n_chords + 1)})
            code, labelings = canonical_labelings(d)
            if code in found:
                continue
            # automorphisms of the canonical structure: compare labelings
            base = labelings[0][1]
            inv_base = {new: old for old, new in base.items()}
            autos = set()
            for _, mapping in labelings:
                autos.add(tuple(mapping[inv_base[k]] - 1 for k in range(1, n_chords + 1)))
            found[code] = sorted(autos)
    return sorted(found.items())


def _code_words(code: tuple) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(tok[0] for tok in row) for row in code)


def enumerate_diagrams(n_chords: int, n_circles: int) -> Iterator[SignedChordDiagram]:
    """Every signed chord diagram with exactly these counts, once each.

    Output is in canonical form, sorted by (structure, signs).
    """
    _check_bounds(n_chords, n_circles)
    for code, autos in _structures(n_chords, n_circles):
        words = _code_words(code)
        for bits in itertools.product((0, 1), repeat=n_chords):
            # canonical iff minimal within its automorphism orbit
            if any(tuple(bits[perm.index(k)] for k in range(n_chords)) < bits for perm in autos):
                continue
            signs = {k + 1: 1 if bits[k] else -1 for k in range(n_chords)}
            yield SignedChordDiagram(words, signs)


def enumerate_all(max_chords: int, max_circles: int, min_circles: int = 1) -> Iterator[SignedChordDiagram]:
    """All diagrams with 0..max_chords chords and min..max circles."""
    for n in range(max_chords + 1):
        for k in range(min_circles, max_circles + 1):
            if k == 0 and n > 0:
                continue
            yield from enumerate_diagrams(n, k)


def enumerate_gauss_diagrams(n_chords: int, n_circles: int) -> Iterator[GaussDiagram]:
    """Every Gauss diagram (signed and directed) with these counts, once each."""
    _check_bounds(n_chords, n_circles)
    seen: set[tuple] = set()
    for code, _ in _structures(n_chords, n_circles):
        words = _code_words(code)
        first = {}
        for ci, w in enumerate(words):
            for k, c in enumerate(w):
                first.setdefault(c, (ci, k))
        for sbits in itertools.product((1, -1), repeat=n_chords):
            base = SignedChordDiagram(words, {k + 1: s for k, s in enumerate(sbits)})
            for obits in itertools.product((True, False), repeat=n_chords):
                over = tuple(
                    tuple(obits[c - 1] == (first[c] == (ci, k)) for k, c in enumerate(w))
                    for ci, w in enumerate(words)
                )
                g = GaussDiagram(base, over)
                key = serialize(g)
                if key in seen:
                    continue
                seen.add(key)
                yield g


def search(
    predicate: Callable[[SignedChordDiagram], bool],
    max_chords: int,
    max_circles: int = 1,
) -> Iterator[SignedChordDiagram]:
    _check_bounds(max_chords, max_circles)
    for d in enumerate_all(max_chords, max_circles):
        if predicate(d):
            yield d


def search_by_bracket(target: LaurentPoly, max_chords: int, max_circles: int = 1) -> list[str]:
    """Canonical codes of all diagrams within bounds with bracket ``target``."""
    return [canonical_code(d) for d in search(lambda d: kauffman_bracket(d) == target, max_chords, max_circles)]


def random_diagram(
    rng: random.Random,
    n_chords: int,
    max_circles: int = 1,
    orientable: bool = False,
) -> SignedChordDiagram:
    """A random signed chord diagram (not uniform over classes).

    With ``orientable=True`` every circle gets an even number of endpoints,
    alternately labelled tail and head, and tails are matched to heads; a
    chord diagram is orientable exactly when it arises this way.
    """
    k = rng.randint(1, max_circles)
    cuts = sorted(rng.randint(0, n_chords if orientable else 2 * n_chords) for _ in range(k - 1))
    sizes = [b - a for a, b in zip([0] + cuts, cuts + [n_chords if orientable else 2 * n_chords])]
    if orientable:
        sizes = [2 * x for x in sizes]
        heads = list(range(1, n_chords + 1))
        tails = heads[:]
        rng.shuffle(heads)
        rng.shuffle(tails)
        words = []
        for size in sizes:
            phase = rng.randint(0, 1)
            words.append(tuple(tails.pop() if (pos + phase) % 2 else heads.pop() for pos in range(size)))
    else:
        points = [c for c in range(1, n_chords + 1) for _ in range(2)]
        rng.shuffle(points)
        words, pos = [], 0
        for size in sizes:
            words.append(tuple(points[pos:pos + size]))
            pos += size
    signs = {c: rng.choice((1, -1)) for c in range(1, n_chords + 1)}
    return SignedChordDiagram(tuple(words), signs)
