"""Integer Khovanov homology of orientable signed chord diagrams.

Generators are pairs (state, labelling of the smoothing's components by
``1``/``x``). For a state ``s`` with ``a`` positive and ``b`` negative
markers and writhe ``w``::

    i = (w - a + b) / 2
    j = #1 - #x + (3w - a + b) / 2

The differential flips one positive marker at a time, applying the
multiplication ``m`` on a merge and the comultiplication ``Delta`` on a
split, with sign ``(-1)^r`` where ``r`` counts negative markers on later
chords. Components are matched between adjacent states by arc-set
equality.

On a non-orientable diagram some flips keep the number of components; the
naive extension sets those partial maps to zero, and the result generally
fails ``d^2 = 0``. :func:`dsq_defect` reports exactly how.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from chordknot.bracket import ChordCapExceeded, jones_f
from chordknot.core import SignedChordDiagram, State, as_signed, writhe
from chordknot.orientation import is_orientable
from chordknot.poly import LaurentPoly
from chordknot.smith import elementary_divisors

__all__ = [
    "DsqEntry",
    "DsqReport",
    "EulerReport",
    "Generator",
    "HomologyTable",
    "KhovanovComplex",
    "NonOrientableError",
    "build_complex",
    "dsq_defect",
    "euler_identity",
    "homology",
    "khovanov_cap",
]

ONE, X = 0, 1
DEFAULT_KHOVANOV_CAP = 12


class NonOrientableError(ValueError):
    pass


def khovanov_cap() -> int:
    return int(os.environ.get("CHORDKNOT_KHOVANOV_CAP", DEFAULT_KHOVANOV_CAP))


@dataclass(frozen=True, order=True)
class Generator:
    state: int  # bit k set: chord k (ascending id) has marker -1
    labels: tuple[int, ...]  # per component, ordered by smallest arc; 0 = "1", 1 = "x"
    i: int = field(compare=False)
    j: int = field(compare=False)

    def label_text(self) -> str:
        if not self.labels:
            return "1"
        return "⊗".join("x" if lab else "1" for lab in self.labels)


@dataclass
class KhovanovComplex:
    diagram: SignedChordDiagram
    chords: tuple[int, ...]
    components: dict  # state bits -> list of frozenset arc sets, ordered
    basis: dict  # (i, j) -> list[Generator]
    matrices: dict  # (i, j) -> list[dict[target index, coeff]], one dict per source
    orientable: bool

    def index(self, g: Generator) -> int:
        return self._index[(g.i, g.j)][g]

    def __post_init__(self):
        self._index = {k: {g: n for n, g in enumerate(v)} for k, v in self.basis.items()}

    @property
    def bidegrees(self) -> list[tuple[int, int]]:
        return sorted(self.basis)

    def apply(self, g: Generator) -> dict[Generator, int]:
        """Image of one generator under d."""
        row = self.matrices[(g.i, g.j)][self.index(g)]
        target = self.basis.get((g.i + 1, g.j), [])
        return {target[t]: c for t, c in row.items()}

    def square_entries(self) -> list[DsqEntry]:
        """Nonzero entries of d∘d; empty for a genuine complex."""
        return _square(self)[0]

    def chain_euler(self) -> LaurentPoly:
        """sum over generators of (-1)^i q^j."""
        terms: dict[int, int] = {}
        for (i, j), gens in self.basis.items():
            terms[j] = terms.get(j, 0) + (-1) ** (i % 2) * len(gens)
        return LaurentPoly(terms, "q")

    def state_graded_ranks(self) -> list[tuple[State, int, LaurentPoly]]:
        """Per state: (state, i, graded rank q^shift (q + 1/q)^|s|)."""
        n = len(self.chords)
        w = writhe(self.diagram)
        out = []
        for bits in range(1 << n):
            st = State.from_bits(bits, n)
            shift = (3 * w - st.a + st.b) // 2
            rank = LaurentPoly({1: 1, -1: 1}, "q") ** len(self.components[bits])
            out.append((st, (w - st.a + st.b) // 2, rank.shift(shift)))
        return out


def _check_cap(d: SignedChordDiagram, cap: int | None) -> None:
    cap = khovanov_cap() if cap is None else cap
    if d.n_chords > cap:
        raise ChordCapExceeded(f"diagram has {d.n_chords} chords; Khovanov cap is {cap}")


def _build(d: SignedChordDiagram, naive: bool) -> KhovanovComplex:
    n = d.n_chords
    w = writhe(d)
    res = d._resolver
    comps: dict[int, list[frozenset]] = {}
    for bits in range(1 << n):
        markers = [-1 if bits >> k & 1 else 1 for k in range(n)]
        sets = res.components(markers).arc_sets()
        comps[bits] = sorted(sets, key=min)

    basis: dict[tuple[int, int], list[Generator]] = {}
    for bits in range(1 << n):
        b = bin(bits).count("1")
        a = n - b
        i = (w - a + b) // 2
        shift = (3 * w - a + b) // 2
        for labels in itertools.product((ONE, X), repeat=len(comps[bits])):
            j = labels.count(ONE) - labels.count(X) + shift
            basis.setdefault((i, j), []).append(Generator(bits, labels, i, j))
    for gens in basis.values():
        gens.sort()
    index = {k: {g: t for t, g in enumerate(v)} for k, v in basis.items()}

    matrices: dict[tuple[int, int], list[dict[int, int]]] = {k: [{} for _ in v] for k, v in basis.items()}
    for bits in range(1 << n):
        cs = comps[bits]
        for k in range(n):
            if bits >> k & 1:
                continue
            tbits = bits | 1 << k
            ct = comps[tbits]
            if len(ct) == len(cs):
                if not naive:
                    raise NonOrientableError("component count preserved by a marker flip")
                continue
            sign = -1 if bin(bits >> (k + 1)).count("1") % 2 else 1
            tset = set(ct)
            sset = set(cs)
            s_only = [c for c in cs if c not in tset]
            t_only = [c for c in ct if c not in sset]
            kept = {c: ct.index(c) for c in cs if c in tset}
            if len(s_only) == 2 and len(t_only) == 1:
                merge = True
            elif len(s_only) == 1 and len(t_only) == 2:
                merge = False
            else:  # pragma: no cover - surgery on a 1-manifold is merge/split
                raise AssertionError(f"unexpected component change {len(s_only)} -> {len(t_only)}")
            s_pos = [cs.index(c) for c in s_only]
            t_pos = [ct.index(c) for c in t_only]
            for labels in itertools.product((ONE, X), repeat=len(cs)):
                template = [0] * len(ct)
                for c, tp in kept.items():
                    template[tp] = labels[cs.index(c)]
                images: list[tuple[int, ...]] = []
                if merge:
                    l1, l2 = labels[s_pos[0]], labels[s_pos[1]]
                    if l1 == X and l2 == X:
                        continue
                    template[t_pos[0]] = X if (l1 == X or l2 == X) else ONE
                    images.append(tuple(template))
                else:
                    lab = labels[s_pos[0]]
                    if lab == ONE:
                        for pair in ((ONE, X), (X, ONE)):
                            template[t_pos[0]], template[t_pos[1]] = pair
                            images.append(tuple(template))
                    else:
                        template[t_pos[0]] = template[t_pos[1]] = X
                        images.append(tuple(template))
                b_ = bin(bits).count("1")
                i = (w - (n - b_) + b_) // 2
                j = labels.count(ONE) - labels.count(X) + (3 * w - (n - b_) + b_) // 2
                src = index[(i, j)][Generator(bits, labels, i, j)]
                row = matrices[(i, j)][src]
                for img in images:
                    tj = img.count(ONE) - img.count(X) + (3 * w - (n - b_ - 1) + b_ + 1) // 2
                    if tj != j:
                        raise AssertionError("differential does not preserve j")
                    tgt = index[(i + 1, j)][Generator(tbits, img, i + 1, j)]
                    row[tgt] = row.get(tgt, 0) + sign
                    if row[tgt] == 0:
                        del row[tgt]
    return KhovanovComplex(d, d.chords, comps, basis, matrices, not naive)


def build_complex(d, cap: int | None = None) -> KhovanovComplex:
    """Khovanov complex of an orientable signed chord diagram.

    Raises :class:`NonOrientableError` otherwise; :func:`dsq_defect` is the
    diagnostic for that case.
    """
    d = as_signed(d)
    _check_cap(d, cap)
    if not is_orientable(d):
        raise NonOrientableError(
            "non-orientable diagram: the Khovanov differential is not defined; "
            "run dsq_defect (CLI: dsq) to inspect d∘d"
        )
    return _build(d, naive=False)


def naive_complex(d, cap: int | None = None) -> KhovanovComplex:
    """Complex with zero partial maps on component-count-preserving flips."""
    d = as_signed(d)
    _check_cap(d, cap)
    return _build(d, naive=True)


@dataclass(frozen=True)
class DsqEntry:
    source: Generator
    target: Generator
    coeff: int

    def describe(self) -> str:
        tgt = self.target.label_text()
        c = self.coeff
        img = tgt if c == 1 else (f"-{tgt}" if c == -1 else f"{c}{tgt}")
        return f"{self.source.label_text()} ↦ {img} at (i:{self.source.i}→{self.target.i}, j:{self.source.j})"


@dataclass
class DsqReport:
    entries: list[DsqEntry]
    matrices: dict  # (i, j) -> {(source index, target index): coeff}
    graded_ranks: list  # per state (State, i, graded rank in q)

    @property
    def is_zero(self) -> bool:
        return not self.entries


def _square(cx: KhovanovComplex) -> tuple[list[DsqEntry], dict]:
    entries = []
    mats = {}
    for (i, j) in cx.bidegrees:
        src_basis = cx.basis[(i, j)]
        mid = cx.matrices.get((i + 1, j))
        tgt_basis = cx.basis.get((i + 2, j))
        if mid is None or tgt_basis is None:
            continue
        block = {}
        for s, row in enumerate(cx.matrices[(i, j)]):
            acc: dict[int, int] = {}
            for m, c in row.items():
                for t, c2 in mid[m].items():
                    acc[t] = acc.get(t, 0) + c * c2
            for t, v in sorted(acc.items()):
                if v:
                    block[(s, t)] = v
                    entries.append(DsqEntry(src_basis[s], tgt_basis[t], v))
        if block:
            mats[(i, j)] = block
    return entries, mats


def dsq_defect(d, cap: int | None = None) -> DsqReport:
    """All nonzero entries of d∘d for the naive complex of ``d``."""
    cx = naive_complex(d, cap)
    ranks = cx.state_graded_ranks()
    n = len(cx.chords)
    by_bits = {st.bits: r for st, _, r in ranks}
    for bits in range(1 << n):
        for k in range(n):
            if bits >> k & 1:
                continue
            t = bits | 1 << k
            if len(cx.components[t]) == len(cx.components[bits]):
                # a grading-preserving map between these groups must vanish
                if by_bits[t] != by_bits[bits].shift(1):
                    raise AssertionError("count-preserving flip did not shift the graded rank by q")
                if {e % 2 for e in by_bits[t].exponents()} & {e % 2 for e in by_bits[bits].exponents()}:
                    raise AssertionError("count-preserving flip kept exponent parity")
    entries, mats = _square(cx)
    return DsqReport(entries, mats, ranks)


@dataclass
class HomologyTable:
    groups: dict  # (i, j) -> (betti, [torsion divisors])

    def betti(self, i: int, j: int) -> int:
        return self.groups.get((i, j), (0, []))[0]

    def torsion(self, i: int, j: int) -> list[int]:
        return list(self.groups.get((i, j), (0, []))[1])

    def nonzero(self) -> dict:
        return {k: v for k, v in sorted(self.groups.items()) if v[0] or v[1]}

    def poincare(self) -> LaurentPoly:
        """sum (-1)^i q^j betti(i, j)."""
        terms: dict[int, int] = {}
        for (i, j), (b, _) in self.groups.items():
            terms[j] = terms.get(j, 0) + (-1) ** (i % 2) * b
        return LaurentPoly(terms, "q")

    def mirror(self) -> HomologyTable:
        """The table expected for the mirror diagram.

        The mirror's complex is the dual complex, so free parts move to
        (-i, -j) while torsion moves to (1 - i, -j) (universal coefficients).
        """
        groups: dict = {}
        for (i, j), (b, tors) in self.groups.items():
            free = groups.setdefault((-i, -j), [0, []])
            free[0] += b
            if tors:
                groups.setdefault((1 - i, -j), [0, []])[1].extend(tors)
        return HomologyTable({k: (b, sorted(t)) for k, (b, t) in groups.items()})

    def as_rows(self) -> list[tuple[int, int, int, list[int]]]:
        return [(i, j, b, t) for (i, j), (b, t) in self.nonzero().items()]

    def __eq__(self, other) -> bool:
        if not isinstance(other, HomologyTable):
            return NotImplemented
        return self.nonzero() == other.nonzero()


def _divisors_job(rows):
    return elementary_divisors(rows)


def homology(cx: KhovanovComplex, workers: int = 1) -> HomologyTable:
    """Betti numbers and torsion per bidegree via Smith normal form."""
    keys = cx.bidegrees
    mats = [cx.matrices[k] for k in keys]
    if workers > 1 and len(keys) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_divisors_job, mats))
    else:
        results = [elementary_divisors(m) for m in mats]
    rank = {k: r[0] for k, r in zip(keys, results)}
    divisors = {k: r[1] for k, r in zip(keys, results)}
    groups = {}
    for (i, j) in keys:
        dim = len(cx.basis[(i, j)])
        betti = dim - rank[(i, j)] - rank.get((i - 1, j), 0)
        torsion = sorted(divisors.get((i - 1, j), []))
        groups[(i, j)] = (betti, torsion)
    return HomologyTable(groups)


@dataclass
class EulerReport:
    chain: LaurentPoly  # chain-level K(q) at q = -A^-2
    homology: LaurentPoly | None  # Betti-level K(q) at q = -A^-2
    jones: LaurentPoly

    @property
    def chain_matches(self) -> bool:
        return self.chain == self.jones

    @property
    def homology_matches(self) -> bool | None:
        return None if self.homology is None else self.homology == self.jones


def euler_identity(d, with_homology: bool = True, cap: int | None = None) -> EulerReport:
    """Compare the graded Euler characteristic with ``jones_f`` under q = -A^-2."""
    cx = build_complex(d, cap)
    chain = cx.chain_euler().q_to_A()
    hom = homology(cx).poincare().q_to_A() if with_homology else None
    return EulerReport(chain, hom, jones_f(d))
