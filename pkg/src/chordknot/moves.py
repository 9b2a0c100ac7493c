"""Reidemeister moves on signed chord diagrams and twisted moves on marks.

Moves act on the token rows of a diagram: per circle, the cyclic sequence
of chord endpoints and marks. Insertion sites are *gaps*: gap ``(c, g)``
lies just after token ``g`` of circle ``c`` (gap ``(c, 0)`` on an empty
circle). On an unmarked diagram gap ``(c, g)`` is arc ``(c, g)``.

Gauss diagrams are blunted first; moves never look at arrow directions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from chordknot.core import (
    GaussDiagram,
    SignedChordDiagram,
    Token,
    TwistedGaussDiagram,
    validate,
)
from chordknot.orientation import is_orientable

__all__ = [
    "MoveError",
    "MoveSpec",
    "R3_ENABLED",
    "apply_move",
    "enumerate_moves",
    "preserves_orientability",
    "r3_variant",
    "random_walk",
]

KINDS = ("R1_add", "R1_remove", "R2_add", "R2_remove", "R3", "M1_add", "M1_remove", "M2")

# Third-move variants whose endpoint swap leaves the bracket unchanged on
# every diagram with at most two chords besides the move's three, and the
# homology unchanged on the orientable sites sampled. Regenerate with
# ``python3 -m chordknot.moves`` (see docs/r3_variants.md); key format is
# documented on :func:`r3_variant`.
R3_ENABLED: frozenset = frozenset({
    (((0, 1), (0, 2), (1, 2)), (-1, -1, -1)),
    (((0, 1), (0, 2), (1, 2)), (-1, -1, 1)),
    (((0, 1), (0, 2), (1, 2)), (-1, 1, 1)),
    (((0, 1), (0, 2), (1, 2)), (1, -1, -1)),
    (((0, 1), (0, 2), (1, 2)), (1, 1, -1)),
    (((0, 1), (0, 2), (1, 2)), (1, 1, 1)),
    (((0, 1), (1, 2), (2, 0)), (-1, -1, 1)),
    (((0, 1), (1, 2), (2, 0)), (-1, 1, 1)),
})


class MoveError(ValueError):
    pass


@dataclass(frozen=True)
class MoveSpec:
    """One move and its site.

    ``site`` layout per kind:

    * R1_add, M1_add: ``((circle, gap),)``
    * R2_add: ``((circle, gap), (circle, gap))`` with the first <= second
    * R1_remove: ``(chord,)``; R2_remove: ``(chord, chord)``
    * R3: three position pairs ``((circle, k), (circle, k + 1))``
    * M1_remove, M2: one position pair ``((circle, k), (circle, k + 1))``
    """

    kind: str
    site: tuple
    sign: int = 0
    variant: str = ""

    def describe(self) -> str:
        parts = [self.kind, str(self.site)]
        if self.sign:
            parts.append("+" if self.sign > 0 else "-")
        if self.variant:
            parts.append(self.variant)
        return " ".join(parts)


class _Rows:
    """Mutable token rows: chord id per endpoint, None per mark."""

    def __init__(self, d):
        self.twisted = isinstance(d, TwistedGaussDiagram)
        marks = d.marks if self.twisted else None
        base = d.underlying if self.twisted else d
        if isinstance(base, GaussDiagram):
            base = base.underlying
        self.signs = dict(base.signs)
        self.rows: list[list] = []
        for ci, word in enumerate(base.circles):
            row: list = []
            if not word and marks:
                row.extend([None] * len(marks[ci]))
            for k, c in enumerate(word):
                row.append(c)
                if marks:
                    row.extend([None] * marks[ci].count(k))
            self.rows.append(row)

    def next_id(self) -> int:
        return max(self.signs, default=0) + 1

    def gaps(self) -> list[tuple[int, int]]:
        return [(ci, g) for ci, row in enumerate(self.rows) for g in range(max(len(row), 1))]

    def adjacent_pairs(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        out = []
        for ci, row in enumerate(self.rows):
            n = len(row)
            if n < 2:
                continue
            for k in range(n if n > 2 else 1):
                out.append(((ci, k), (ci, (k + 1) % n)))
        return out

    def token(self, pos):
        return self.rows[pos[0]][pos[1]]

    def positions(self, chord: int) -> list[tuple[int, int]]:
        return [(ci, k) for ci, row in enumerate(self.rows) for k, t in enumerate(row) if t == chord]

    def insert(self, gap, tokens) -> None:
        ci, g = gap
        row = self.rows[ci]
        at = g + 1 if row else 0
        row[at:at] = tokens

    def delete(self, positions) -> None:
        for ci, k in sorted(positions, reverse=True):
            del self.rows[ci][k]

    def build(self):
        circles = [[Token(None) if t is None else Token(t, None, self.signs[t]) for t in row] for row in self.rows]
        d = validate(circles)
        if self.twisted and not isinstance(d, TwistedGaussDiagram):
            d = TwistedGaussDiagram(d, tuple(() for _ in circles))
        return d


def _are_adjacent(rows: _Rows, p, q) -> bool:
    if p[0] != q[0]:
        return False
    n = len(rows.rows[p[0]])
    return n >= 2 and ((p[1] + 1) % n == q[1] or (q[1] + 1) % n == p[1])


def r3_variant(d, move: MoveSpec) -> tuple:
    """Local type of a third move: ``(ordered pairs, signs)``.

    The three chords are relabelled 0, 1, 2 in the way that makes the key
    lexicographically least. ``ordered pairs`` lists, per affected arc, the
    two chords in base order; ``signs`` are indexed by the new labels.
    """
    rows = _Rows(d)
    pairs = [(rows.token(p), rows.token(q)) for p, q in move.site]
    chords = sorted({c for pr in pairs for c in pr})
    best = None
    for perm in itertools.permutations(range(3)):
        relabel = dict(zip(chords, perm))
        key_pairs = tuple(sorted((relabel[a], relabel[b]) for a, b in pairs))
        inv = {v: k for k, v in relabel.items()}
        key_signs = tuple(rows.signs[inv[k]] for k in range(3))
        key = (key_pairs, key_signs)
        if best is None or key < best:
            best = key
    return best


def _r3_sites(rows: _Rows) -> list[tuple]:
    cands = [
        (p, q) for p, q in rows.adjacent_pairs()
        if rows.token(p) is not None and rows.token(q) is not None and rows.token(p) != rows.token(q)
    ]
    sites = []
    for trio in itertools.combinations(cands, 3):
        used = [pos for pr in trio for pos in pr]
        if len(set(used)) != 6:
            continue
        chords = [rows.token(pos) for pos in used]
        if len(set(chords)) != 3 or any(chords.count(c) != 2 for c in set(chords)):
            continue
        sites.append(tuple(trio))
    return sites


def enumerate_moves(d, include_disabled_r3: bool = False) -> list[MoveSpec]:
    """Every applicable move, in a fixed order.

    Additions are offered once per gap (R1, M1) or per unordered gap pair
    and variant (R2). Third moves are restricted to :data:`R3_ENABLED`
    unless ``include_disabled_r3`` is set.
    """
    rows = _Rows(d)
    moves: list[MoveSpec] = []
    gaps = rows.gaps()
    for gap in gaps:
        for s in (1, -1):
            moves.append(MoveSpec("R1_add", (gap,), s))
    for c in sorted(rows.signs):
        p, q = rows.positions(c)
        if _are_adjacent(rows, p, q):
            moves.append(MoveSpec("R1_remove", (c,)))
    for g1, g2 in itertools.combinations_with_replacement(gaps, 2):
        for variant in ("nested", "interleaved"):
            for s in (1, -1):
                moves.append(MoveSpec("R2_add", (g1, g2), s, variant))
    for c, e in itertools.combinations(sorted(rows.signs), 2):
        if rows.signs[c] != -rows.signs[e]:
            continue
        pc, pe = rows.positions(c), rows.positions(e)
        if (_are_adjacent(rows, pc[0], pe[0]) and _are_adjacent(rows, pc[1], pe[1])) or (
            _are_adjacent(rows, pc[0], pe[1]) and _are_adjacent(rows, pc[1], pe[0])
        ):
            moves.append(MoveSpec("R2_remove", (c, e)))
    for site in _r3_sites(rows):
        m = MoveSpec("R3", site)
        if include_disabled_r3 or r3_variant(d, m) in R3_ENABLED:
            moves.append(m)
    if rows.twisted:
        for gap in gaps:
            moves.append(MoveSpec("M1_add", (gap,)))
        for p, q in rows.adjacent_pairs():
            tp, tq = rows.token(p), rows.token(q)
            if tp is None and tq is None:
                moves.append(MoveSpec("M1_remove", ((p, q),)))
            elif (tp is None) != (tq is None):
                moves.append(MoveSpec("M2", ((p, q),)))
    return moves


def apply_move(d, m: MoveSpec):
    """Apply ``m`` to ``d``; raises :class:`MoveError` when inapplicable."""
    rows = _Rows(d)
    try:
        _apply(rows, m)
        return rows.build()
    except (IndexError, KeyError, ValueError) as exc:
        raise MoveError(f"cannot apply {m.describe()}: {exc}") from exc


def _apply(rows: _Rows, m: MoveSpec) -> None:
    kind = m.kind
    if kind == "R1_add":
        (gap,) = m.site
        _check_gap(rows, gap)
        c = rows.next_id()
        rows.signs[c] = m.sign
        rows.insert(gap, [c, c])
    elif kind == "R1_remove":
        (c,) = m.site
        p, q = rows.positions(c)
        if not _are_adjacent(rows, p, q):
            raise MoveError(f"chord {c} endpoints are not adjacent")
        rows.delete([p, q])
        del rows.signs[c]
    elif kind == "R2_add":
        g1, g2 = m.site
        _check_gap(rows, g1)
        _check_gap(rows, g2)
        if m.variant not in ("nested", "interleaved") or m.sign not in (1, -1):
            raise MoveError("R2_add needs variant nested/interleaved and sign +-1")
        c = rows.next_id()
        e = c + 1
        rows.signs[c], rows.signs[e] = m.sign, -m.sign
        second = [e, c] if m.variant == "nested" else [c, e]
        if g1 == g2:
            rows.insert(g1, [c, e] + second)
        else:
            # insert at the later gap first so earlier indices stay valid
            for gap, toks in sorted([(g1, [c, e]), (g2, second)], reverse=True):
                rows.insert(gap, toks)
    elif kind == "R2_remove":
        c, e = m.site
        if rows.signs[c] != -rows.signs[e]:
            raise MoveError("R2 chords must have opposite signs")
        pc, pe = rows.positions(c), rows.positions(e)
        ok = (_are_adjacent(rows, pc[0], pe[0]) and _are_adjacent(rows, pc[1], pe[1])) or (
            _are_adjacent(rows, pc[0], pe[1]) and _are_adjacent(rows, pc[1], pe[0])
        )
        if not ok:
            raise MoveError(f"chords {c}, {e} do not form a second-move bigon")
        rows.delete(pc + pe)
        del rows.signs[c], rows.signs[e]
    elif kind == "R3":
        if tuple(m.site) not in _r3_sites(rows):
            raise MoveError("not a third-move site")
        for p, q in m.site:
            rows.rows[p[0]][p[1]], rows.rows[q[0]][q[1]] = rows.token(q), rows.token(p)
    elif kind == "M1_add":
        if not rows.twisted:
            raise MoveError("mark moves need a twisted diagram")
        (gap,) = m.site
        _check_gap(rows, gap)
        rows.insert(gap, [None, None])
    elif kind == "M1_remove":
        ((p, q),) = m.site
        if not (_are_adjacent(rows, p, q) and rows.token(p) is None and rows.token(q) is None):
            raise MoveError("M1_remove needs two adjacent marks")
        rows.delete([p, q])
    elif kind == "M2":
        ((p, q),) = m.site
        tp, tq = rows.token(p), rows.token(q)
        if not _are_adjacent(rows, p, q) or (tp is None) == (tq is None):
            raise MoveError("M2 needs an adjacent mark and endpoint")
        rows.rows[p[0]][p[1]], rows.rows[q[0]][q[1]] = tq, tp
    else:
        raise MoveError(f"unknown move kind {kind!r}")


def _check_gap(rows: _Rows, gap) -> None:
    ci, g = gap
    if not (0 <= ci < len(rows.rows) and 0 <= g < max(len(rows.rows[ci]), 1)):
        raise MoveError(f"no gap {gap}")


def preserves_orientability(d, m: MoveSpec) -> bool:
    """Whether ``apply_move(d, m)`` is orientable.

    First and third moves on an orientable diagram always give True; that
    is asserted rather than assumed.
    """
    result = is_orientable(apply_move(d, m))
    if m.kind in ("R1_add", "R1_remove", "R3") and not result and is_orientable(d):
        raise AssertionError(f"{m.kind} destroyed orientability")
    return result


def random_walk(
    d,
    steps: int,
    seed: int,
    policy: str = "any",
    max_chords: int | None = None,
    kinds: tuple[str, ...] | None = None,
) -> list:
    """Seeded sequence of diagrams, each one move from the previous.

    At every step a move kind is drawn uniformly among kinds with at least
    one admissible site, then a site uniformly. ``policy`` is ``"any"`` or
    ``"orientability_preserving"`` (every intermediate stays orientable).
    The walk stops early if no move is admissible.
    """
    if policy not in ("any", "orientability_preserving"):
        raise ValueError(f"unknown policy {policy!r}")
    rng = random.Random(seed)
    out = [d]
    cur = d
    for _ in range(steps):
        by_kind: dict[str, list[MoveSpec]] = {}
        for m in enumerate_moves(cur):
            if kinds is not None and m.kind not in kinds:
                continue
            by_kind.setdefault(m.kind, []).append(m)
        nxt = None
        while by_kind and nxt is None:
            kind = rng.choice(sorted(by_kind))
            cands = by_kind[kind]
            m = cands.pop(rng.randrange(len(cands)))
            if not cands:
                del by_kind[kind]
            cand = apply_move(cur, m)
            n_chords = len(_Rows(cand).signs)
            if max_chords is not None and n_chords > max_chords:
                continue
            if policy == "orientability_preserving" and not is_orientable(cand):
                continue
            nxt = cand
        if nxt is None:
            break
        out.append(nxt)
        cur = nxt
    return out


def gate_r3_variants(max_extra: int = 2, max_circles: int = 3) -> dict[tuple, dict]:
    """Test every third-move variant against the bracket on small diagrams.

    Returns variant key -> {"sites": n, "failures": n}. A variant belongs in
    :data:`R3_ENABLED` when it was seen and never failed.
    """
    from chordknot.bracket import kauffman_bracket
    from chordknot.search import enumerate_diagrams

    stats: dict[tuple, dict] = {}
    for n in range(3, 3 + max_extra + 1):
        for k in range(1, max_circles + 1):
            for d in enumerate_diagrams(n, k):
                before = None
                for m in enumerate_moves(d, include_disabled_r3=True):
                    if m.kind != "R3":
                        continue
                    if before is None:
                        before = kauffman_bracket(d)
                    key = r3_variant(d, m)
                    entry = stats.setdefault(key, {"sites": 0, "failures": 0})
                    entry["sites"] += 1
                    if kauffman_bracket(apply_move(d, m)) != before:
                        entry["failures"] += 1
    return stats


def khovanov_check_r3(variants, max_extra: int = 1, max_circles: int = 2, per_variant: int = 40) -> dict[tuple, dict]:
    """Compare homology before and after third moves on orientable diagrams.

    At most ``per_variant`` sites are checked per variant (in enumeration
    order), which keeps the check to a few seconds.
    """
    from chordknot.khovanov import build_complex, homology
    from chordknot.search import enumerate_diagrams

    stats: dict[tuple, dict] = {v: {"sites": 0, "failures": 0} for v in variants}
    for n in range(3, 3 + max_extra + 1):
        for k in range(1, max_circles + 1):
            for d in enumerate_diagrams(n, k):
                if not is_orientable(d):
                    continue
                before = None
                for m in enumerate_moves(d, include_disabled_r3=True):
                    if m.kind != "R3":
                        continue
                    key = r3_variant(d, m)
                    entry = stats.get(key)
                    if entry is None or entry["sites"] >= per_variant:
                        continue
                    after = apply_move(d, m)
                    if not is_orientable(after):
                        continue
                    if before is None:
                        before = homology(build_complex(d))
                    entry["sites"] += 1
                    if homology(build_complex(after)) != before:
                        entry["failures"] += 1
    return stats


def _fmt_variant(key: tuple) -> str:
    pairs, signs = key
    arcs = " ".join(f"({a} {b})" for a, b in pairs)
    return arcs + " signs " + " ".join("+" if s > 0 else "-" for s in signs)


def render_r3_doc(bracket_stats: dict, khovanov_stats: dict) -> str:
    lines = [
        "# Third-move variants",
        "",
        "Generated by `python3 -m chordknot.moves`. Do not edit by hand.",
        "",
        "A variant is the local picture of a third move: the three chords are",
        "relabelled 0, 1, 2, each affected arc is listed as the ordered pair of",
        "chords it meets, and the signs are indexed by the new labels. The",
        "move swaps the two endpoints on each of the three arcs.",
        "",
        "Bracket column: sites tried and failures over every diagram with 3 to",
        "5 chords on at most 3 circles. Khovanov column: orientable sites",
        "where both sides are orientable, capped per variant.",
        "",
        "| variant | bracket sites | bracket failures | khovanov sites | khovanov failures | enabled |",
        "|---|---|---|---|---|---|",
    ]
    for key in sorted(bracket_stats):
        b = bracket_stats[key]
        kh = khovanov_stats.get(key, {"sites": 0, "failures": 0})
        enabled = b["failures"] == 0 and kh["failures"] == 0
        lines.append(
            f"| {_fmt_variant(key)} | {b['sites']} | {b['failures']} | {kh['sites']} | {kh['failures']} | {'yes' if enabled else 'no'} |"
        )
    lines.append("")
    return "\n".join(lines)


def enabled_from_stats(bracket_stats: dict, khovanov_stats: dict) -> frozenset:
    return frozenset(
        key for key, b in bracket_stats.items()
        if b["sites"] and b["failures"] == 0 and khovanov_stats.get(key, {"failures": 0})["failures"] == 0
    )


if __name__ == "__main__":
    import sys

    bracket_stats = gate_r3_variants()
    passing = [k for k, v in bracket_stats.items() if v["failures"] == 0]
    kh_stats = khovanov_check_r3(passing)
    sys.stdout.write(render_r3_doc(bracket_stats, kh_stats))
    sys.stderr.write(repr(sorted(enabled_from_stats(bracket_stats, kh_stats))) + "\n")
