"""Kauffman bracket state sum, Jones normalisation and mod-4 analysis.

Every loop of a smoothing, the last one included, contributes a factor
``d = -A^2 - A^-2``; the empty diagram has bracket 1.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable

from chordknot.core import SignedChordDiagram, as_signed, writhe
from chordknot.poly import LaurentPoly, mod4_class

__all__ = [
    "ChordCapExceeded",
    "LOOP",
    "bracket_cap",
    "jones_f",
    "kauffman_bracket",
    "mod4_class",
    "state_counts",
]

LOOP = LaurentPoly({2: -1, -2: -1})
DEFAULT_BRACKET_CAP = 24


class ChordCapExceeded(RuntimeError):
    pass


def bracket_cap() -> int:
    return int(os.environ.get("CHORDKNOT_BRACKET_CAP", DEFAULT_BRACKET_CAP))


def _check_cap(d: SignedChordDiagram, cap: int | None) -> None:
    cap = bracket_cap() if cap is None else cap
    if d.n_chords > cap:
        raise ChordCapExceeded(f"diagram has {d.n_chords} chords; cap is {cap} (2^{d.n_chords} states)")


def _count_range(d: SignedChordDiagram, lo: int, hi: int) -> dict[tuple[int, int], int]:
    """Histogram of (a - b, |s|) over state bit patterns in [lo, hi)."""
    n = d.n_chords
    res = d._resolver
    hist: dict[tuple[int, int], int] = {}
    for bits in range(lo, hi):
        markers = [-1 if bits >> i & 1 else 1 for i in range(n)]
        b = bin(bits).count("1")
        key = (n - 2 * b, res.count(markers))
        hist[key] = hist.get(key, 0) + 1
    return hist


def _count_range_job(args):
    d, lo, hi = args
    return _count_range(d, lo, hi)


def state_counts(d, workers: int = 1) -> dict[tuple[int, int], int]:
    """Number of states per ``(a(s) - b(s), |s|)``.

    With ``workers > 1`` the state range is split into contiguous blocks
    summed in separate processes; the merged histogram is identical.
    """
    d = as_signed(d)
    total = 1 << d.n_chords
    if workers <= 1 or total < 1024:
        return _count_range(d, 0, total)
    step = -(-total // (workers * 4))
    jobs = [(d, lo, min(lo + step, total)) for lo in range(0, total, step)]
    hist: dict[tuple[int, int], int] = {}
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(_count_range_job, jobs):
            for k, v in part.items():
                hist[k] = hist.get(k, 0) + v
    return hist


def _assemble(hist: Iterable[tuple[tuple[int, int], int]]) -> LaurentPoly:
    out = LaurentPoly.zero()
    loop_powers: dict[int, LaurentPoly] = {}
    for (ab, loops), mult in sorted(hist):
        if loops not in loop_powers:
            loop_powers[loops] = LOOP ** loops
        out = out + loop_powers[loops].shift(ab) * mult
    return out


def kauffman_bracket(d, cap: int | None = None, workers: int = 1) -> LaurentPoly:
    """Exact state sum  sum_s A^(a(s)-b(s)) (-A^2-A^-2)^|s|.

    Accepts any diagram level; directions and marks are ignored.
    """
    d = as_signed(d)
    _check_cap(d, cap)
    return _assemble(state_counts(d, workers).items())


def jones_f(d, cap: int | None = None, workers: int = 1) -> LaurentPoly:
    """``(-A)^(-3w) <D>``, invariant under all Reidemeister moves."""
    w = writhe(d)
    factor = LaurentPoly.monomial(-3 * w, -1 if w % 2 else 1)
    return factor * kauffman_bracket(d, cap, workers)
