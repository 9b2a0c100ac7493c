"""Elementary divisors of sparse integer matrices.

Matrices are given as a list of rows, each a ``{column: value}`` dict.
Unit pivots are eliminated first with sparse row operations (Khovanov
differentials are mostly +-1); whatever remains is reduced densely with the
smallest-absolute-value pivot rule. All arithmetic is exact.
"""

from __future__ import annotations

from typing import Sequence

__all__ = ["elementary_divisors", "smith_diagonal"]


def _sparse_unit_phase(rows: list[dict[int, int]]) -> tuple[int, list[dict[int, int]]]:
    rows = [dict(r) for r in rows if r]
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            cols.setdefault(c, set()).add(i)
    alive = set(range(len(rows)))
    units = 0
    while True:
        best = None
        for i in alive:
            r = rows[i]
            for c, v in r.items():
                if v in (1, -1):
                    cost = (len(r) - 1) * (len(cols[c]) - 1)
                    if best is None or cost < best[0]:
                        best = (cost, i, c)
                    break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        _, p, c = best
        prow = rows[p]
        pv = prow[c]
        for i in list(cols[c]):
            if i == p:
                continue
            r = rows[i]
            f = r[c] * pv  # pv is a unit, pv == 1/pv
            for cc, vv in prow.items():
                nv = r.get(cc, 0) - f * vv
                if nv:
                    if cc not in r:
                        cols.setdefault(cc, set()).add(i)
                    r[cc] = nv
                else:
                    if cc in r:
                        del r[cc]
                        cols[cc].discard(i)
            if not r:
                alive.discard(i)
        for cc in prow:
            cols[cc].discard(p)
        alive.discard(p)
        rows[p] = {}
        units += 1
    return units, [rows[i] for i in sorted(alive) if rows[i]]


def _dense_snf(m: list[list[int]]) -> list[int]:
    nr = len(m)
    nc = len(m[0]) if nr else 0
    diag = []
    t = 0
    while t < nr and t < nc:
        # smallest nonzero entry in the trailing block
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = m[i][j]
                if v and (piv is None or abs(v) < piv[0]):
                    piv = (abs(v), i, j)
        if piv is None:
            break
        _, pi, pj = piv
        m[t], m[pi] = m[pi], m[t]
        for row in m:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = m[t][t]
            done = True
            for i in range(t + 1, nr):
                if m[i][t]:
                    q = m[i][t] // p
                    if q:
                        ri, rt = m[i], m[t]
                        for j in range(t, nc):
                            ri[j] -= q * rt[j]
                    if m[i][t]:
                        done = False
            for j in range(t + 1, nc):
                if m[t][j]:
                    q = m[t][j] // p
                    if q:
                        for row in m[t:]:
                            row[j] -= q * row[t]
                    if m[t][j]:
                        done = False
            if done:
                bad = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if m[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rt, rb = m[t], m[bad]
                for j in range(t, nc):
                    rt[j] += rb[j]
                continue
            # a smaller remainder appeared: bring it to the pivot slot
            piv = None
            for i in range(t, nr):
                if m[i][t] and (piv is None or abs(m[i][t]) < piv[0]):
                    piv = (abs(m[i][t]), i, t)
            for j in range(t, nc):
                if m[t][j] and abs(m[t][j]) < piv[0]:
                    piv = (abs(m[t][j]), t, j)
            _, pi, pj = piv
            m[t], m[pi] = m[pi], m[t]
            for row in m:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(m[t][t]))
        t += 1
    return diag


def smith_diagonal(rows: Sequence[dict[int, int]]) -> list[int]:
    """Nonzero Smith invariants of the matrix, as positive ints, ascending."""
    units, rest = _sparse_unit_phase(list(rows))
    diag = [1] * units
    if rest:
        colset = sorted({c for r in rest for c in r})
        pos = {c: k for k, c in enumerate(colset)}
        dense = [[0] * len(colset) for _ in rest]
        for i, r in enumerate(rest):
            for c, v in r.items():
                dense[i][pos[c]] = v
        diag.extend(_dense_snf(dense))
    return sorted(diag)


def elementary_divisors(rows: Sequence[dict[int, int]]) -> tuple[int, list[int]]:
    """``(rank, divisors > 1)`` of an integer matrix."""
    diag = smith_diagonal(rows)
    return len(diag), [x for x in diag if x > 1]
