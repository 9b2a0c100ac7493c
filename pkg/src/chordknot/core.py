"""Diagram data model and the state-resolution (surgery) engine.

Three diagram levels are supported:

* :class:`SignedChordDiagram` -- oriented base circles with sign-labelled
  chords. Every invariant in this package consumes this level.
* :class:`GaussDiagram` -- adds chord directions. The ``over`` flag marks the
  overpass endpoint, which is taken as the arrow tail (arrows point
  over -> under). Only surface computations look at it.
* :class:`TwistedGaussDiagram` -- adds marked points on the base.

A circle is stored as the cyclic sequence of chord ids met along the base
orientation; each id occurs exactly twice overall. Arc ``(c, k)`` is the
base segment from endpoint ``k`` to endpoint ``k + 1`` of circle ``c``; a
chord-free circle is the single closed arc ``(c, 0)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence, Union

__all__ = [
    "Arc",
    "DiagramError",
    "GaussDiagram",
    "ResolvedCurve",
    "SignedChordDiagram",
    "State",
    "Token",
    "TwistedGaussDiagram",
    "Diagram",
    "as_signed",
    "blunt",
    "forget_marks",
    "resolve",
    "validate",
    "writhe",
]

FORWARD = 1
BACKWARD = -1


class DiagramError(ValueError):
    """Raised when a diagram description violates structural invariants.

    ``errors`` holds every violation found, not just the first one.
    """

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class Arc(NamedTuple):
    circle: int
    start: int


class Endpoint(NamedTuple):
    circle: int
    pos: int


def _freeze_signs(signs) -> tuple[tuple[int, int], ...]:
    if isinstance(signs, Mapping):
        items = signs.items()
    else:
        items = signs
    return tuple(sorted((int(c), int(s)) for c, s in items))


@dataclass(frozen=True)
class SignedChordDiagram:
    circles: tuple[tuple[int, ...], ...]
    signs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "circles", tuple(tuple(int(c) for c in w) for w in self.circles))
        object.__setattr__(self, "signs", _freeze_signs(self.signs))
        errors = _structural_errors(self.circles, dict(self.signs))
        if errors:
            raise DiagramError(errors)

    @classmethod
    def from_words(cls, words: Iterable[Iterable[int]], signs: Mapping[int, int]) -> SignedChordDiagram:
        return cls(tuple(tuple(w) for w in words), signs)

    @cached_property
    def sign(self) -> dict[int, int]:
        return dict(self.signs)

    @cached_property
    def chords(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.signs)

    @property
    def n_chords(self) -> int:
        return len(self.signs)

    @cached_property
    def endpoints(self) -> dict[int, tuple[Endpoint, Endpoint]]:
        found: dict[int, list[Endpoint]] = {}
        for ci, word in enumerate(self.circles):
            for k, c in enumerate(word):
                found.setdefault(c, []).append(Endpoint(ci, k))
        return {c: (e[0], e[1]) for c, e in found.items()}

    @cached_property
    def arcs(self) -> tuple[Arc, ...]:
        out = []
        for ci, word in enumerate(self.circles):
            out.extend(Arc(ci, k) for k in range(max(len(word), 1)))
        return tuple(out)

    def in_arc(self, e: Endpoint) -> Arc:
        n = len(self.circles[e.circle])
        return Arc(e.circle, (e.pos - 1) % n)

    def out_arc(self, e: Endpoint) -> Arc:
        return Arc(e.circle, e.pos)

    def mirror(self) -> SignedChordDiagram:
        return SignedChordDiagram(self.circles, {c: -s for c, s in self.signs})

    def disjoint_union(self, other: SignedChordDiagram) -> SignedChordDiagram:
        offset = max(self.chords, default=0)
        words = list(self.circles) + [tuple(c + offset for c in w) for w in other.circles]
        signs = dict(self.signs)
        signs.update({c + offset: s for c, s in other.signs})
        return SignedChordDiagram(tuple(words), signs)

    def add_circle(self) -> SignedChordDiagram:
        return SignedChordDiagram(self.circles + ((),), self.signs)

    @cached_property
    def _resolver(self) -> _Resolver:
        return _Resolver(self)

    def __str__(self) -> str:
        from chordknot.codec import serialize

        return serialize(self, canonical=False)


@dataclass(frozen=True)
class GaussDiagram:
    underlying: SignedChordDiagram
    over: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "over", tuple(tuple(bool(f) for f in row) for row in self.over))
        errors = []
        circles = self.underlying.circles
        if len(self.over) != len(circles) or any(len(r) != len(w) for r, w in zip(self.over, circles)):
            raise DiagramError(["over flags do not match circle layout"])
        for c, (p, q) in self.underlying.endpoints.items():
            fp, fq = self.over[p.circle][p.pos], self.over[q.circle][q.pos]
            if fp == fq:
                errors.append(f"over_endpoint not on chord: chord {c} needs one O and one U endpoint")
        if errors:
            raise DiagramError(errors)

    @property
    def circles(self):
        return self.underlying.circles

    @property
    def chords(self):
        return self.underlying.chords

    @property
    def sign(self):
        return self.underlying.sign

    def over_endpoint(self, c: int) -> Endpoint:
        p, q = self.underlying.endpoints[c]
        return p if self.over[p.circle][p.pos] else q

    def under_endpoint(self, c: int) -> Endpoint:
        p, q = self.underlying.endpoints[c]
        return q if self.over[p.circle][p.pos] else p


@dataclass(frozen=True)
class TwistedGaussDiagram:
    """Diagram with marked points on the base.

    ``marks[c]`` is the sorted multiset of arc indices of circle ``c``
    carrying a mark. ``underlying`` may be a Gauss diagram or, when the
    input carried no over/under data, a signed chord diagram.
    """

    underlying: Union[GaussDiagram, SignedChordDiagram]
    marks: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        circles = self.underlying.circles
        marks = tuple(tuple(sorted(int(m) for m in row)) for row in self.marks)
        if not marks:
            marks = tuple(() for _ in circles)
        object.__setattr__(self, "marks", marks)
        if len(marks) != len(circles):
            raise DiagramError(["marks do not match circle layout"])
        errors = []
        for ci, (row, word) in enumerate(zip(marks, circles)):
            n = max(len(word), 1)
            for m in row:
                if not 0 <= m < n:
                    errors.append(f"mark on circle {ci} references arc {m} out of range")
        if errors:
            raise DiagramError(errors)

    @property
    def circles(self):
        return self.underlying.circles

    @property
    def n_marks(self) -> int:
        return sum(len(r) for r in self.marks)


Diagram = Union[SignedChordDiagram, GaussDiagram, TwistedGaussDiagram]


def blunt(g: GaussDiagram) -> SignedChordDiagram:
    """Forget chord directions."""
    if isinstance(g, SignedChordDiagram):
        return g
    return g.underlying


def forget_marks(t: TwistedGaussDiagram):
    """Forget marked points; the result is one level down."""
    if isinstance(t, TwistedGaussDiagram):
        return t.underlying
    return t


def as_signed(d: Diagram) -> SignedChordDiagram:
    """Signed chord diagram underlying any diagram level."""
    if isinstance(d, TwistedGaussDiagram):
        d = d.underlying
    if isinstance(d, GaussDiagram):
        d = d.underlying
    return d


def writhe(d: Diagram) -> int:
    return sum(s for _, s in as_signed(d).signs)


# --- validation -------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    """One item of a raw circle description: an endpoint or a mark.

    ``chord`` is None for a mark. ``line``/``col`` locate it in source text.
    """

    chord: int | None
    tag: str | None = None
    sign: int | None = None
    line: int = 0
    col: int = 0

    @property
    def is_mark(self) -> bool:
        return self.chord is None

    def where(self) -> str:
        return f" (line {self.line}, col {self.col})" if self.line else ""


def _structural_errors(circles, sign: dict[int, int]) -> list[str]:
    errors = []
    counts: dict[int, int] = {}
    for word in circles:
        for c in word:
            counts[c] = counts.get(c, 0) + 1
    for c, n in sorted(counts.items()):
        if n != 2:
            errors.append(f"chord {c} has {n} endpoint{'s' if n != 1 else ''}")
    for c in sorted(counts):
        if c not in sign:
            errors.append(f"missing sign: chord {c}")
    for c in sorted(sign):
        if c not in counts:
            errors.append(f"sign given for absent chord {c}")
        elif sign[c] not in (1, -1):
            errors.append(f"chord {c} has sign {sign[c]}, expected +1 or -1")
    return errors


def validate(raw: Iterable[Iterable[Token]]) -> Diagram:
    """Build the richest diagram level a raw description supports.

    ``raw`` is a sequence of circles, each a sequence of :class:`Token`.
    Raises :class:`DiagramError` listing every violated invariant.
    """
    circles = [list(c) for c in raw]
    errors: list[str] = []
    seen: dict[int, list[Token]] = {}
    for circle in circles:
        for tok in circle:
            if tok.is_mark:
                continue
            seen.setdefault(tok.chord, []).append(tok)

    signs: dict[int, int] = {}
    for c, toks in sorted(seen.items()):
        if len(toks) != 2:
            errors.append(f"chord {c} has {len(toks)} endpoint{'s' if len(toks) != 1 else ''}{toks[-1].where()}")
        given = [t for t in toks if t.sign is not None]
        if not given:
            errors.append(f"missing sign: chord {c}{toks[0].where()}")
        elif len({t.sign for t in given}) > 1:
            errors.append(f"conflicting signs: chord {c}{given[-1].where()}")
        else:
            signs[c] = given[0].sign

    tagged = {c for c, toks in seen.items() if any(t.tag for t in toks)}
    if tagged:
        for c, toks in sorted(seen.items()):
            tags = [t.tag for t in toks]
            if c not in tagged:
                errors.append(f"mixed O/U-tagged and untagged chords: chord {c} untagged{toks[0].where()}")
            elif None in tags:
                errors.append(f"mixed O/U-tagged and untagged chords: chord {c} partially tagged{toks[0].where()}")
            elif len(toks) == 2 and tags[0] == tags[1]:
                kind = "over" if tags[0] == "O" else "under"
                errors.append(f"duplicate {kind} endpoint: chord {c}{toks[1].where()}")
    if errors:
        raise DiagramError(errors)

    words = tuple(tuple(t.chord for t in circle if not t.is_mark) for circle in circles)
    d: Diagram = SignedChordDiagram(words, signs)
    if tagged:
        over = tuple(tuple(t.tag == "O" for t in circle if not t.is_mark) for circle in circles)
        d = GaussDiagram(d, over)
    if any(t.is_mark for circle in circles for t in circle):
        marks = []
        for circle in circles:
            n = sum(1 for t in circle if not t.is_mark)
            row = []
            k = -1  # marks before the first endpoint lie on the last arc
            for t in circle:
                if t.is_mark:
                    row.append(k % max(n, 1))
                else:
                    k += 1
            marks.append(tuple(row))
        d = TwistedGaussDiagram(d, tuple(marks))
    return d


# --- states and resolution --------------------------------------------------


@dataclass(frozen=True)
class State:
    """Marker per chord in ascending chord-id order (+1 or -1)."""

    markers: tuple[int, ...]

    @classmethod
    def from_bits(cls, bits: int, n: int) -> State:
        """Bit ``i`` set means chord ``i`` (ascending id order) has marker -1."""
        return cls(tuple(-1 if bits >> i & 1 else 1 for i in range(n)))

    @classmethod
    def all_positive(cls, n: int) -> State:
        return cls((1,) * n)

    @property
    def bits(self) -> int:
        return sum(1 << i for i, m in enumerate(self.markers) if m == -1)

    @property
    def a(self) -> int:
        return sum(1 for m in self.markers if m == 1)

    @property
    def b(self) -> int:
        return sum(1 for m in self.markers if m == -1)

    def flip(self, i: int) -> State:
        m = list(self.markers)
        m[i] = -m[i]
        return State(tuple(m))


@dataclass(frozen=True)
class ResolvedCurve:
    """Closed 1-manifold left after all surgeries of a state.

    Each component is a cyclic sequence of ``(arc, direction)`` with
    direction +1 (along the base orientation) or -1.
    """

    components: tuple[tuple[tuple[Arc, int], ...], ...]

    @property
    def count(self) -> int:
        return len(self.components)

    def arc_sets(self) -> list[frozenset[Arc]]:
        return [frozenset(a for a, _ in comp) for comp in self.components]


class _Resolver:
    """Precomputed gluing data for one signed chord diagram.

    Arc ``i`` of the flat arc list has tail end ``2i`` and head end
    ``2i + 1``. For each chord two gluings are stored, one per surgery type.
    """

    def __init__(self, d: SignedChordDiagram):
        self.diagram = d
        self.arcs = d.arcs
        index = {a: i for i, a in enumerate(self.arcs)}
        self.index = index
        self.n_ends = 2 * len(self.arcs)
        base = [-1] * self.n_ends
        for ci, word in enumerate(d.circles):
            if not word:
                a = index[Arc(ci, 0)]
                base[2 * a + 1] = 2 * a
                base[2 * a] = 2 * a + 1
        self.base = base
        self.chord_sign = [d.sign[c] for c in d.chords]
        self.preserving: list[tuple[int, int, int, int]] = []
        self.reversing: list[tuple[int, int, int, int]] = []
        for c in d.chords:
            p, q = d.endpoints[c]
            in_p, out_p = index[d.in_arc(p)], index[d.out_arc(p)]
            in_q, out_q = index[d.in_arc(q)], index[d.out_arc(q)]
            self.preserving.append((2 * in_p + 1, 2 * out_q, 2 * in_q + 1, 2 * out_p))
            self.reversing.append((2 * in_p + 1, 2 * in_q + 1, 2 * out_p, 2 * out_q))

    def glue(self, markers: Sequence[int]) -> list[int]:
        partner = list(self.base)
        for i, m in enumerate(markers):
            g = self.preserving[i] if m * self.chord_sign[i] == 1 else self.reversing[i]
            partner[g[0]] = g[1]
            partner[g[1]] = g[0]
            partner[g[2]] = g[3]
            partner[g[3]] = g[2]
        return partner

    def count(self, markers: Sequence[int]) -> int:
        partner = self.glue(markers)
        seen = bytearray(self.n_ends)
        n = 0
        for start in range(self.n_ends):
            if seen[start]:
                continue
            n += 1
            e = start
            while not seen[e]:
                seen[e] = 1
                seen[e ^ 1] = 1
                e = partner[e ^ 1]
        return n

    def components(self, markers: Sequence[int]) -> ResolvedCurve:
        partner = self.glue(markers)
        seen = bytearray(len(self.arcs))
        comps = []
        for a0 in range(len(self.arcs)):
            if seen[a0]:
                continue
            comp = []
            e = 2 * a0  # enter at tail, travel forward
            while True:
                a = e >> 1
                if seen[a]:
                    break
                seen[a] = 1
                direction = FORWARD if e % 2 == 0 else BACKWARD
                comp.append((self.arcs[a], direction))
                e = partner[e ^ 1]
            comps.append(tuple(comp))
        return ResolvedCurve(tuple(comps))


def _markers(d: SignedChordDiagram, s) -> tuple[int, ...]:
    markers = s.markers if isinstance(s, State) else tuple(s)
    if len(markers) != d.n_chords:
        raise ValueError(f"state has {len(markers)} markers, diagram has {d.n_chords} chords")
    return markers


def resolve(d: SignedChordDiagram, s) -> ResolvedCurve:
    """Perform every chord surgery of state ``s`` simultaneously.

    Chord ``c`` with endpoints ``p, q`` is cut orientation-preservingly when
    ``marker * sign == +1``: the curve arriving at ``p`` leaves from ``q``
    and vice versa. Otherwise the two arriving arcs are joined head to head
    and the two leaving arcs tail to tail.
    """
    d = as_signed(d)
    return d._resolver.components(_markers(d, s))


def component_count(d: SignedChordDiagram, s) -> int:
    d = as_signed(d)
    return d._resolver.count(_markers(d, s))
