"""Orientations of chord diagrams and the Z/2 obstruction to them.

An orientation assigns each base arc a direction (relative to the base
orientation) such that directions never extend across a chord endpoint and
each chord has one attractive and one repulsive endpoint. Two independent
routes decide existence: a GF(2) linear solve (:func:`find_orientation`)
and evaluation of a 1-cocycle on a cycle basis (:func:`obstruction`).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from chordknot.core import (
    BACKWARD,
    FORWARD,
    Arc,
    Endpoint,
    ResolvedCurve,
    SignedChordDiagram,
    as_signed,
    resolve,
)

__all__ = [
    "ChordOrientation",
    "ObstructionReport",
    "OrientationCertificateError",
    "find_orientation",
    "is_orientable",
    "obstruction",
    "oriented_resolution",
]


class OrientationCertificateError(AssertionError):
    """An oriented resolution disagreed with its orientation. Always a bug."""


@dataclass(frozen=True)
class ChordOrientation:
    diagram: SignedChordDiagram
    dir: dict  # Arc -> +1 forward / -1 backward

    def endpoint_type(self, e: Endpoint) -> str:
        d = self.diagram
        incoming = self.dir[d.in_arc(e)]
        outgoing = self.dir[d.out_arc(e)]
        if incoming == FORWARD and outgoing == BACKWARD:
            return "attractive"
        if incoming == BACKWARD and outgoing == FORWARD:
            return "repulsive"
        raise OrientationCertificateError(f"orientation extends across endpoint {e}")

    def arrows(self) -> dict[int, tuple[Endpoint, Endpoint]]:
        """Chord -> (tail, head) with the tail at the attractive endpoint.

        Along every base circle, tails and heads then alternate.
        """
        out = {}
        for c, (p, q) in self.diagram.endpoints.items():
            out[c] = (p, q) if self.endpoint_type(p) == "attractive" else (q, p)
        return out

    def check(self) -> None:
        for c, (p, q) in self.diagram.endpoints.items():
            if self.endpoint_type(p) == self.endpoint_type(q):
                raise OrientationCertificateError(f"chord {c} endpoints have equal type")


def _solve_gf2(rows: list[tuple[int, int]], n_vars: int) -> list[int] | None:
    """Solve equations ``mask . x = rhs`` over GF(2); free variables are 0."""
    pivots: dict[int, tuple[int, int]] = {}  # pivot column -> (mask, rhs)
    for mask, rhs in rows:
        for col, (pm, pr) in pivots.items():
            if mask >> col & 1:
                mask ^= pm
                rhs ^= pr
        if mask == 0:
            if rhs:
                return None
            continue
        col = (mask & -mask).bit_length() - 1
        for other, (pm, pr) in list(pivots.items()):
            if pm >> col & 1:
                pivots[other] = (pm ^ mask, pr ^ rhs)
        pivots[col] = (mask, rhs)
    x = [0] * n_vars
    for col, (mask, rhs) in pivots.items():
        x[col] = rhs  # reduced form: other set bits are free columns, all 0
    return x


def find_orientation(d) -> ChordOrientation | None:
    """Return one orientation of ``d`` or None when none exists.

    Variable per arc: 0 forward, 1 backward. Free variables are fixed to
    forward in canonical arc order, so the answer is deterministic.
    """
    d = as_signed(d)
    arcs = d.arcs
    index = {a: i for i, a in enumerate(arcs)}
    rows = []
    for ci, word in enumerate(d.circles):
        n = len(word)
        for k in range(n):
            a_in, a_out = index[Arc(ci, (k - 1) % n)], index[Arc(ci, k)]
            mask = (1 << a_in) ^ (1 << a_out)
            rows.append((mask, 1))  # directions differ across the endpoint
    for c, (p, q) in d.endpoints.items():
        mask = (1 << index[d.out_arc(p)]) ^ (1 << index[d.out_arc(q)])
        rows.append((mask, 1))  # endpoint types differ
    x = _solve_gf2(rows, len(arcs))
    if x is None:
        return None
    o = ChordOrientation(d, {a: BACKWARD if x[i] else FORWARD for i, a in enumerate(arcs)})
    o.check()
    return o


def is_orientable(d) -> bool:
    return find_orientation(d) is not None


@dataclass(frozen=True)
class ObstructionReport:
    orientable: bool
    cycle_basis: list  # each cycle: list of edges ("arc", Arc) / ("chord", id)
    evaluation: list[int]
    cochain: dict  # Arc -> 0/1 for the chosen chord directions


def obstruction(d) -> ObstructionReport:
    """Evaluate the obstruction cocycle on a fundamental cycle basis.

    Chord ``c`` is directed so its first endpoint is attractive. An arc gets
    value 1 when the local directions forced at its two ends disagree.
    Chord edges carry 0. The graph has one vertex per endpoint (plus one per
    chord-free circle); edges are the arcs and the chords.
    """
    d = as_signed(d)
    attractive: dict[Endpoint, int] = {}
    for c, (p, q) in d.endpoints.items():
        attractive[p], attractive[q] = 1, 0

    cochain: dict[Arc, int] = {}
    vertex: dict = {}
    edges: list[tuple[tuple, object, object, int]] = []  # (label, u, v, value)
    for ci, word in enumerate(d.circles):
        n = len(word)
        if n == 0:
            cochain[Arc(ci, 0)] = 0
            v = ("circle", ci)
            vertex.setdefault(v, len(vertex))
            edges.append((("arc", Arc(ci, 0)), v, v, 0))
            continue
        for k in range(n):
            tail, head = Endpoint(ci, k), Endpoint(ci, (k + 1) % n)
            # arc leaves its tail backward iff tail is attractive;
            # it enters its head forward iff head is attractive
            value = (attractive[tail] + (1 - attractive[head])) % 2
            cochain[Arc(ci, k)] = value
            vertex.setdefault(tail, len(vertex))
            vertex.setdefault(head, len(vertex))
            edges.append((("arc", Arc(ci, k)), tail, head, value))
    for c, (p, q) in sorted(d.endpoints.items()):
        edges.append((("chord", c), p, q, 0))

    adj: dict = {v: [] for v in vertex}
    for ei, (_, u, v, _) in enumerate(edges):
        adj[u].append((ei, v))
        if u != v:
            adj[v].append((ei, u))

    parent: dict = {}
    depth: dict = {}
    tree_edges: set[int] = set()
    for root in vertex:
        if root in depth:
            continue
        depth[root] = 0
        parent[root] = None
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for ei, v in adj[u]:
                if v not in depth:
                    depth[v] = depth[u] + 1
                    parent[v] = (u, ei)
                    tree_edges.add(ei)
                    queue.append(v)

    def path_to_root(v):
        out = []
        while parent[v] is not None:
            u, ei = parent[v]
            out.append((v, ei))
            v = u
        return out

    basis, evaluation = [], []
    for ei, (label, u, v, value) in enumerate(edges):
        if ei in tree_edges:
            continue
        pu, pv = path_to_root(u), path_to_root(v)
        # drop the common tail of the two root paths
        while pu and pv and pu[-1] == pv[-1]:
            pu.pop()
            pv.pop()
        cycle_edges = [ei] + [e for _, e in pu] + [e for _, e in pv]
        basis.append([edges[e][0] for e in cycle_edges])
        evaluation.append(sum(edges[e][3] for e in cycle_edges) % 2)
    return ObstructionReport(not any(evaluation), basis, evaluation, cochain)


def oriented_resolution(d, orientation: ChordOrientation, s) -> ResolvedCurve:
    """Resolve ``d`` at ``s`` with every component traversed along ``orientation``.

    Raises :class:`OrientationCertificateError` if some component cannot be
    traversed consistently.
    """
    d = as_signed(d)
    curve = resolve(d, s)
    comps = []
    for comp in curve.components:
        arc0, dir0 = comp[0]
        if orientation.dir[arc0] != dir0:
            comp = tuple((a, -x) for a, x in reversed(comp))
        for a, x in comp:
            if orientation.dir[a] != x:
                raise OrientationCertificateError(f"arc {a} traversed against its orientation")
        comps.append(comp)
    return ResolvedCurve(tuple(comps))
