"""Text format for diagrams and polynomials.

Grammar (line oriented, ``#`` starts a comment)::

    diagram <name>              optional header
    circle: <token> <token> ... one line per base circle, may be empty

    token := [O|U]? <int> [+|-]?   chord endpoint
           | *                     marked point (twisted diagrams)

Signs may be written on either or both occurrences of a chord. Tagging any
endpoint with O/U makes the result a Gauss diagram; any ``*`` makes it
twisted.
"""

from __future__ import annotations

import json
import re
from typing import Iterator

from chordknot.core import (
    Diagram,
    DiagramError,
    GaussDiagram,
    SignedChordDiagram,
    Token,
    TwistedGaussDiagram,
    validate,
)
from chordknot.poly import LaurentPoly

__all__ = [
    "ParseError",
    "canonical_form",
    "canonicalize",
    "parse",
    "parse_named",
    "poly_from_text",
    "poly_to_text",
    "report_json",
    "serialize",
]

_TOKEN_RE = re.compile(r"([OU]?)(\d+)([+-]?)$")
_MARK = (0, 0)


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        loc = f"line {line}, col {col}: " if line else ""
        super().__init__(loc + message)


def _tokenize(text: str) -> tuple[str | None, list[list[Token]]]:
    name = None
    circles: list[list[Token]] = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("diagram"):
            rest = stripped[len("diagram"):]
            if rest and not rest[0].isspace():
                raise ParseError(f"unknown directive {stripped.split()[0]!r}", lineno, line.index("d") + 1)
            if circles or name is not None:
                raise ParseError("'diagram' header must come first and only once", lineno, 1)
            name = rest.strip() or None
            continue
        if not stripped.startswith("circle:"):
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError(f"expected 'circle:' or 'diagram', got {stripped.split()[0]!r}", lineno, col)
        start = line.index("circle:") + len("circle:")
        tokens = []
        for m in re.finditer(r"\S+", line[start:]):
            word, col = m.group(0), start + m.start() + 1
            if word == "*":
                tokens.append(Token(None, line=lineno, col=col))
                continue
            tm = _TOKEN_RE.match(word)
            if not tm:
                raise ParseError(f"bad token {word!r}", lineno, col)
            tag = tm.group(1) or None
            sign = {"+": 1, "-": -1}.get(tm.group(3))
            tokens.append(Token(int(tm.group(2)), tag, sign, lineno, col))
        circles.append(tokens)
    return name, circles


def parse_named(text: str) -> tuple[str | None, Diagram]:
    """Parse diagram text, returning ``(name, diagram)``."""
    name, circles = _tokenize(text)
    return name, validate(circles)


def parse(text: str) -> Diagram:
    return parse_named(text)[1]


# --- canonical form -----------------------------------------------------------


def _circle_tokens(d: Diagram) -> list[list[tuple]]:
    """Per circle: list of ``(chord, tag)`` endpoint tokens and ``None`` marks."""
    marks = None
    if isinstance(d, TwistedGaussDiagram):
        marks = d.marks
        d = d.underlying
    over = d.over if isinstance(d, GaussDiagram) else None
    base = d.underlying if isinstance(d, GaussDiagram) else d
    out = []
    for ci, word in enumerate(base.circles):
        row: list = []
        n = len(word)
        if n == 0:
            row.extend([None] * (len(marks[ci]) if marks else 0))
        for k, c in enumerate(word):
            tag = 0 if over is None else (1 if over[ci][k] else 2)
            row.append((c, tag))
            if marks:
                row.extend([None] * marks[ci].count(k))
        out.append(row)
    return out


def _encode(row: list, mapping: dict[int, int], next_id: int) -> tuple[tuple, dict[int, int], int]:
    code = []
    mapping = dict(mapping)
    for tok in row:
        if tok is None:
            code.append(_MARK)
            continue
        c, tag = tok
        if c not in mapping:
            mapping[c] = next_id
            next_id += 1
        code.append((mapping[c], tag))
    return tuple(code), mapping, next_id


def _rotations(row: list) -> list[list]:
    if not row:
        return [row]
    return [row[k:] + row[:k] for k in range(len(row))]


def canonical_labelings(d: Diagram) -> tuple[tuple, list[tuple[list[list], dict[int, int]]]]:
    """Minimal structural code and every labeling that achieves it.

    The structural code ignores signs. A labeling is ``(rows, mapping)``:
    the rotated rows in canonical circle order and the old -> new chord map.
    Ties are branched exhaustively, so the result is exact.
    """
    rows = _circle_tokens(d)
    best: list = [None, []]

    def extend(remaining: tuple[int, ...], prefix: tuple, chosen: list, mapping, next_id):
        if not remaining:
            if best[0] is None or prefix < best[0]:
                best[0], best[1] = prefix, [(chosen, mapping)]
            elif prefix == best[0]:
                best[1].append((chosen, mapping))
            return
        cands = []
        for idx in remaining:
            for rot in _rotations(rows[idx]):
                code, m2, n2 = _encode(rot, mapping, next_id)
                cands.append((code, idx, rot, m2, n2))
        low = min(c[0] for c in cands)
        if best[0] is not None and prefix + (low,) > best[0][: len(prefix) + 1]:
            return
        seen = set()
        for code, idx, rot, m2, n2 in cands:
            if code != low:
                continue
            key = (idx, tuple(sorted(m2.items())))
            if key in seen:
                continue
            seen.add(key)
            rest = tuple(i for i in remaining if i != idx)
            extend(rest, prefix + (code,), chosen + [rot], m2, n2)

    extend(tuple(range(len(rows))), (), [], {}, 1)
    return best[0], best[1]


def canonical_form(d: Diagram) -> tuple:
    """Hashable canonical key: (structure code, signs in new-id order).

    Signs are encoded 0 for ``-`` and 1 for ``+``, so among equal structures
    the labelling putting negative chords first wins.
    """
    code, labelings = canonical_labelings(d)
    base = _signed(d)
    best_signs = None
    for _, mapping in labelings:
        inv = {new: old for old, new in mapping.items()}
        signs = tuple(1 if base.sign[inv[k]] == 1 else 0 for k in range(1, len(inv) + 1))
        if best_signs is None or signs < best_signs:
            best_signs = signs
    return code, best_signs or ()


def _signed(d: Diagram) -> SignedChordDiagram:
    if isinstance(d, TwistedGaussDiagram):
        d = d.underlying
    if isinstance(d, GaussDiagram):
        d = d.underlying
    return d


def _from_code(code: tuple, signs: tuple, twisted: bool) -> Diagram:
    circles = []
    for row in code:
        circles.append([
            Token(None) if tok == _MARK else Token(tok[0], {0: None, 1: "O", 2: "U"}[tok[1]], 2 * signs[tok[0] - 1] - 1)
            for tok in row
        ])
    d = validate(circles)
    if twisted and not isinstance(d, TwistedGaussDiagram):
        d = TwistedGaussDiagram(d, tuple(() for _ in circles))
    return d


def canonicalize(d: Diagram) -> Diagram:
    """Relabel ``d`` into canonical form (same diagram level)."""
    code, signs = canonical_form(d)
    return _from_code(code, signs, isinstance(d, TwistedGaussDiagram))


def serialize(d: Diagram, name: str | None = None, canonical: bool = True) -> str:
    """Render ``d`` as text; canonical relabelling unless ``canonical=False``."""
    if canonical:
        d = canonicalize(d)
    base = _signed(d)
    lines = [f"diagram {name}"] if name else []
    seen: set[int] = set()
    for row in _circle_tokens(d):
        toks = []
        for tok in row:
            if tok is None:
                toks.append("*")
                continue
            c, tag = tok
            prefix = {0: "", 1: "O", 2: "U"}[tag]
            suffix = ""
            if c not in seen:
                suffix = "+" if base.sign[c] == 1 else "-"
                seen.add(c)
            toks.append(f"{prefix}{c}{suffix}")
        lines.append(("circle: " + " ".join(toks)).rstrip())
    return "\n".join(lines)


def poly_to_text(p: LaurentPoly) -> str:
    return p.to_text()


def poly_from_text(text: str, var: str | None = None) -> LaurentPoly:
    return LaurentPoly.parse(text, var)


def report_json(obj) -> str:
    """Deterministic single-line JSON (insertion order preserved)."""
    return json.dumps(obj, separators=(", ", ": "), ensure_ascii=False)


def iter_documents(text: str) -> Iterator[str]:
    """Split a multi-diagram text on ``diagram`` headers."""
    chunk: list[str] = []
    for line in text.splitlines():
        if line.strip().startswith("diagram") and any(l.strip().startswith("circle:") for l in chunk):
            yield "\n".join(chunk)
            chunk = []
        chunk.append(line)
    if any(l.strip() for l in chunk):
        yield "\n".join(chunk)
