"""Carter surface of a Gauss diagram: faces, genus, checkerboard colouring.

The diagram is a 4-valent graph on its minimal closed orientable surface:
one vertex per chord (crossing), one edge per base arc. The cyclic order
of the four half-edges at a crossing, counterclockwise, is

* positive crossing: over-out, under-out, over-in, under-in
* negative crossing: over-out, under-in, over-in, under-out

Faces are the orbits of the usual rotation-system face permutation. Each
chord-free circle is its own sphere: a loop at a phantom vertex bounding
two faces.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from chordknot.core import Arc, GaussDiagram, SignedChordDiagram, TwistedGaussDiagram

__all__ = ["Dart", "FaceSet", "checkerboard", "faces", "genus"]

# a dart is an arc traversed along (+1) or against (-1) the base orientation
Dart = tuple  # (Arc, direction)


@dataclass(frozen=True)
class ComponentEuler:
    vertices: int
    edges: int
    faces: int

    @property
    def euler(self) -> int:
        return self.vertices - self.edges + self.faces

    @property
    def genus(self) -> int:
        return (2 - self.euler) // 2


@dataclass(frozen=True)
class FaceSet:
    darts: tuple
    rotation: dict  # chord -> 4-tuple of half-edges (Arc, "tail"/"head"), ccw
    faces: tuple  # each face: tuple of darts in boundary order
    components: tuple  # ComponentEuler per connected component

    @property
    def euler(self) -> int:
        return sum(c.euler for c in self.components)

    def face_of(self) -> dict:
        return {dart: i for i, face in enumerate(self.faces) for dart in face}


def _gauss(g) -> GaussDiagram:
    if isinstance(g, TwistedGaussDiagram):
        g = g.underlying
    if isinstance(g, SignedChordDiagram) and g.n_chords == 0:
        return GaussDiagram(g, tuple(() for _ in g.circles))
    if not isinstance(g, GaussDiagram):
        raise TypeError("surface computations need over/under data (a Gauss diagram)")
    return g


def faces(g) -> FaceSet:
    g = _gauss(g)
    d = g.underlying
    # half-edge: (arc, end) with end "tail" (arc leaves the vertex) or "head"
    rotation = {}
    for c in d.chords:
        o, u = g.over_endpoint(c), g.under_endpoint(c)
        over_out, over_in = (d.out_arc(o), "tail"), (d.in_arc(o), "head")
        under_out, under_in = (d.out_arc(u), "tail"), (d.in_arc(u), "head")
        if d.sign[c] == 1:
            rotation[c] = (over_out, under_out, over_in, under_in)
        else:
            rotation[c] = (over_out, under_in, over_in, under_out)

    succ = {}
    for cyc in rotation.values():
        for i, h in enumerate(cyc):
            succ[h] = cyc[(i + 1) % 4]

    def other_end(h):
        return (h[0], "head" if h[1] == "tail" else "tail")

    # face permutation on half-edges: h -> succ(alpha(h)); the orbit of
    # half-edge (arc, tail) traverses the arc forward
    halfedges = [h for cyc in rotation.values() for h in cyc]
    seen = set()
    face_list = []
    for h0 in halfedges:
        if h0 in seen:
            continue
        face = []
        h = h0
        while h not in seen:
            seen.add(h)
            face.append((h[0], 1 if h[1] == "tail" else -1))
            h = succ[other_end(h)]
        face_list.append(tuple(face))

    # chord-free circles: phantom vertex, one loop edge, two faces
    for ci, word in enumerate(d.circles):
        if not word:
            a = Arc(ci, 0)
            face_list.append(((a, 1),))
            face_list.append(((a, -1),))

    # connected components over chords and circles
    parent = list(range(len(d.circles)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c, (p, q) in d.endpoints.items():
        parent[find(p.circle)] = find(q.circle)
    groups: dict[int, list[int]] = {}
    for ci in range(len(d.circles)):
        groups.setdefault(find(ci), []).append(ci)

    face_comp = [find(f[0][0].circle) for f in face_list]
    comps = []
    for root, members in sorted(groups.items(), key=lambda kv: kv[1][0]):
        n_ep = sum(len(d.circles[ci]) for ci in members)
        if n_ep == 0:
            comps.append(ComponentEuler(1, 1, 2))
            continue
        v = n_ep // 2
        e = n_ep
        f = sum(1 for fc in face_comp if fc == root)
        comps.append(ComponentEuler(v, e, f))
    darts = tuple((a, s) for a in d.arcs for s in (1, -1))
    return FaceSet(darts, rotation, tuple(face_list), tuple(comps))


def genus(g) -> int:
    return sum(c.genus for c in faces(g).components)


def checkerboard(g) -> dict[int, int] | None:
    """Two-colour the faces so the two sides of every arc differ.

    Returns face index -> colour (0/1), or None when impossible.
    """
    fs = faces(g)
    face_of = fs.face_of()
    n = len(fs.faces)
    adj: list[list[int]] = [[] for _ in range(n)]
    arcs = sorted({dart[0] for dart in fs.darts})
    for a in arcs:
        f1, f2 = face_of[(a, 1)], face_of[(a, -1)]
        if f1 == f2:
            return None
        adj[f1].append(f2)
        adj[f2].append(f1)
    colour: dict[int, int] = {}
    for start in range(n):
        if start in colour:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            f = queue.popleft()
            for h in adj[f]:
                if h not in colour:
                    colour[h] = 1 - colour[f]
                    queue.append(h)
                elif colour[h] == colour[f]:
                    return None
    return colour
