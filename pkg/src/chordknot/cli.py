"""Command line entry point: ``chordknot <subcommand> ...``.

Exit codes: 0 success, 1 usage or parse error, 2 domain refusal (for
example Khovanov homology of a non-orientable diagram), 3 resource cap.
Errors go to standard error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterator, Sequence

from chordknot.bracket import ChordCapExceeded, jones_f, kauffman_bracket, mod4_class
from chordknot.codec import ParseError, iter_documents, parse_named, poly_from_text, report_json, serialize
from chordknot.core import DiagramError, GaussDiagram, TwistedGaussDiagram, as_signed, writhe
from chordknot.khovanov import NonOrientableError, build_complex, dsq_defect, homology, khovanov_cap
from chordknot.moves import MoveError, apply_move, enumerate_moves, random_walk
from chordknot.orientation import find_orientation, obstruction
from chordknot.poly import PolyParseError
from chordknot.search import enumerate_all
from chordknot.surface import checkerboard, faces, genus

EXIT_OK, EXIT_USAGE, EXIT_REFUSED, EXIT_CAP = 0, 1, 2, 3


class Refusal(Exception):
    """A well-formed request the mathematics does not support."""


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str) -> list[tuple[str | None, object]]:
    text = _read(path)
    docs = [parse_named(doc) for doc in iter_documents(text)]
    if not docs:
        raise ParseError(f"{path}: no diagram found")
    return docs


def _out(line: str = "") -> None:
    sys.stdout.write(line + "\n")


def _label(name: str | None, d) -> str:
    return name if name else serialize(d).replace("\n", " / ")


def _level(d) -> str:
    if isinstance(d, TwistedGaussDiagram):
        return "twisted"
    if isinstance(d, GaussDiagram):
        return "gauss"
    return "signed"


def _kh_cap(args) -> int:
    return args.khovanov_cap if getattr(args, "khovanov_cap", None) is not None else khovanov_cap()


# -- per-diagram commands ---------------------------------------------------

def cmd_validate(args, name, d) -> None:
    s = as_signed(d)
    info = {
        "name": name,
        "level": _level(d),
        "circles": len(s.circles),
        "chords": s.n_chords,
        "writhe": writhe(d),
        "canonical": serialize(d),
    }
    if args.json:
        _out(report_json(info))
    else:
        circles = f"{info['circles']} circle{'' if info['circles'] == 1 else 's'}"
        chords = f"{info['chords']} chord{'' if info['chords'] == 1 else 's'}"
        _out(f"ok: {_label(name, d)} ({info['level']}, {circles}, {chords}, writhe {info['writhe']})")


def cmd_bracket(args, name, d) -> None:
    p = kauffman_bracket(d, cap=args.cap, workers=args.jobs)
    _emit_poly(args, name, d, "bracket", p)


def cmd_jones(args, name, d) -> None:
    p = jones_f(d, cap=args.cap, workers=args.jobs)
    _emit_poly(args, name, d, "jones", p)


def _emit_poly(args, name, d, key: str, p) -> None:
    if args.json:
        obj = {"diagram": serialize(d), key: p.to_pairs(), f"{key}_text": p.to_text()}
        if args.mod4:
            obj["mod4"] = mod4_class(p)
        _out(report_json(obj))
        return
    line = p.to_text()
    if args.mod4:
        line += f"  [mod 4: {mod4_class(p)}]"
    _out(line)


def cmd_orient(args, name, d) -> None:
    o = find_orientation(d)
    rep = obstruction(d)
    if args.json:
        obj = {
            "diagram": serialize(d),
            "orientable": o is not None,
            "arc_directions": None if o is None else [[a.circle, a.start, v] for a, v in sorted(o.dir.items())],
            "obstruction": {"cycles": len(rep.cycle_basis), "nonzero": sum(rep.evaluation)},
        }
        _out(report_json(obj))
        return
    if o is None:
        bad = sum(rep.evaluation)
        _out(f"not orientable: obstruction nonzero on {bad} of {len(rep.cycle_basis)} basis cycles")
        return
    _out("orientable")
    for c, (tail, head) in sorted(o.arrows().items()):
        _out(f"  chord {c}: tail {tail.circle}:{tail.pos} -> head {head.circle}:{head.pos}")


def _need_gauss(d) -> None:
    base = d.underlying if isinstance(d, TwistedGaussDiagram) else d
    if not isinstance(base, GaussDiagram) and as_signed(d).n_chords:
        raise Refusal("surface data needs O/U tags on every chord (a Gauss diagram)")


def cmd_genus(args, name, d) -> None:
    _need_gauss(d)
    g = genus(d)
    if args.json:
        _out(report_json({"diagram": serialize(d), "genus": g}))
    else:
        _out(str(g))


def _dart_text(dart) -> str:
    arc, direction = dart
    return f"{arc.circle}:{arc.start}{'+' if direction > 0 else '-'}"


def cmd_faces(args, name, d) -> None:
    _need_gauss(d)
    fs = faces(d)
    if args.json:
        obj = {
            "diagram": serialize(d),
            "faces": [[_dart_text(x) for x in f] for f in fs.faces],
            "components": [[c.vertices, c.edges, c.faces] for c in fs.components],
        }
        _out(report_json(obj))
        return
    for k, f in enumerate(fs.faces):
        _out(f"face {k}: " + " ".join(_dart_text(x) for x in f))
    for c in fs.components:
        _out(f"V={c.vertices} E={c.edges} F={c.faces} genus {c.genus}")


def cmd_checkerboard(args, name, d) -> None:
    _need_gauss(d)
    col = checkerboard(d)
    if args.json:
        _out(report_json({"diagram": serialize(d), "colourable": col is not None,
                          "colours": None if col is None else [col[k] for k in sorted(col)]}))
        return
    if col is None:
        _out("not checkerboard colourable")
    else:
        _out("colourable: " + " ".join(f"{k}:{v}" for k, v in sorted(col.items())))


def cmd_khovanov(args, name, d) -> None:
    try:
        cx = build_complex(d, cap=_kh_cap(args))
    except NonOrientableError as exc:
        raise Refusal(f"{exc}") from exc
    table = homology(cx, workers=args.jobs)
    if args.json:
        _out(report_json({"diagram": serialize(d), "homology": [list(r) for r in table.as_rows()]}))
        return
    for i, j, b, tors in table.as_rows():
        parts = [f"Z^{b}" if b > 1 else "Z"] if b else []
        parts += [f"Z/{t}" for t in tors]
        _out(f"H^({i},{j}) = " + " + ".join(parts))


def cmd_dsq(args, name, d) -> None:
    rep = dsq_defect(d, cap=_kh_cap(args))
    if args.json:
        obj = {
            "diagram": serialize(d),
            "zero": rep.is_zero,
            "entries": [e.describe() for e in rep.entries],
            "graded_ranks": [[st.bits, i, r.to_text()] for st, i, r in rep.graded_ranks],
        }
        _out(report_json(obj))
        return
    for st, i, r in rep.graded_ranks:
        markers = "".join("+" if m > 0 else "-" for m in st.markers)
        _out(f"state {markers} i={i}: {r.to_text()}")
    if rep.is_zero:
        _out("d∘d = 0")
    for e in rep.entries:
        _out(e.describe())


def cmd_moves(args, name, d) -> None:
    for k, m in enumerate(enumerate_moves(d)):
        _out(f"{k}: {m.describe()}")


def cmd_move(args, name, d) -> None:
    ms = enumerate_moves(d)
    if not 0 <= args.apply < len(ms):
        raise MoveError(f"move index {args.apply} out of range (0..{len(ms) - 1})")
    _out(serialize(apply_move(d, ms[args.apply])))


def cmd_walk(args, name, d) -> None:
    walk = random_walk(d, args.steps, args.seed, args.policy, max_chords=args.max_chords)
    for k, x in enumerate(walk):
        if args.json:
            _out(report_json({"step": k, "diagram": serialize(x), "jones": jones_f(x).to_text()}))
        else:
            _out(f"# step {k}")
            _out(serialize(x))


PER_DIAGRAM: dict[str, Callable] = {
    "validate": cmd_validate,
    "bracket": cmd_bracket,
    "jones": cmd_jones,
    "orient": cmd_orient,
    "genus": cmd_genus,
    "faces": cmd_faces,
    "checkerboard": cmd_checkerboard,
    "khovanov": cmd_khovanov,
    "dsq": cmd_dsq,
    "moves": cmd_moves,
    "move": cmd_move,
    "walk": cmd_walk,
}


# -- enumeration commands ---------------------------------------------------

def cmd_search(args) -> None:
    target = poly_from_text(args.bracket) if args.bracket is not None else None
    for d in enumerate_all(args.chords, args.circles, min_circles=args.min_circles):
        if args.non_orientable and find_orientation(d) is not None:
            continue
        p = kauffman_bracket(d)
        if target is not None and p != target:
            continue
        m4 = mod4_class(p)
        if args.mixed_mod4 and m4 != "mixed":
            continue
        code = serialize(d).replace("\n", " / ")
        if args.json:
            _out(report_json({"diagram": serialize(d), "bracket": p.to_text(), "mod4": m4,
                              "orientable": find_orientation(d) is not None}))
        else:
            _out(f"{code}    bracket {p.to_text()}  mod4 {m4}")


def cmd_catalog(args) -> None:
    for d in enumerate_all(args.chords, args.circles, min_circles=args.min_circles):
        p = kauffman_bracket(d)
        _out(report_json({
            "diagram": serialize(d),
            "bracket": p.to_pairs(),
            "orientable": find_orientation(d) is not None,
            "genus": None,
        }))


# -- report -----------------------------------------------------------------

REPORT_FIELDS = (
    "file", "name", "diagram", "level", "chords", "circles", "writhe",
    "bracket", "bracket_text", "jones", "mod4", "orientable", "obstruction",
    "genus", "checkerboard", "khovanov", "dsq", "timings", "skipped",
)


def build_report(path: str, name: str | None, d, kh_cap: int, bracket_cap: int | None, timings: bool) -> dict:
    """Report object with every field present, in :data:`REPORT_FIELDS` order."""
    s = as_signed(d)
    rep: dict = dict.fromkeys(REPORT_FIELDS)
    skipped: dict[str, str] = {}
    clock: dict[str, float] = {}

    def timed(key, fn):
        t0 = time.perf_counter()
        try:
            return fn()
        finally:
            clock[key] = round(time.perf_counter() - t0, 6)

    rep.update(file=path, name=name, diagram=serialize(d), level=_level(d), chords=s.n_chords,
               circles=len(s.circles), writhe=writhe(d))
    try:
        p = timed("bracket", lambda: kauffman_bracket(d, cap=bracket_cap))
        rep["bracket"] = p.to_pairs()
        rep["bracket_text"] = p.to_text()
        rep["jones"] = jones_f(d, cap=bracket_cap).to_text()
        rep["mod4"] = mod4_class(p)
    except ChordCapExceeded as exc:
        for key in ("bracket", "bracket_text", "jones", "mod4"):
            skipped[key] = f"cap exceeded: {exc}"

    rep["orientable"] = timed("orient", lambda: find_orientation(d) is not None)
    ob = obstruction(d)
    rep["obstruction"] = {"cycles": len(ob.cycle_basis), "nonzero": sum(ob.evaluation)}

    base = d.underlying if isinstance(d, TwistedGaussDiagram) else d
    if isinstance(base, GaussDiagram) or s.n_chords == 0:
        rep["genus"] = timed("surface", lambda: genus(d))
        rep["checkerboard"] = checkerboard(d) is not None
    else:
        skipped["genus"] = skipped["checkerboard"] = "no over/under data"

    if s.n_chords > kh_cap:
        skipped["khovanov"] = skipped["dsq"] = f"cap exceeded: {s.n_chords} chords > {kh_cap}"
    elif rep["orientable"]:
        table = timed("khovanov", lambda: homology(build_complex(d, cap=kh_cap)))
        rep["khovanov"] = [list(r) for r in table.as_rows()]
        skipped["dsq"] = "orientable: d∘d = 0"
    else:
        skipped["khovanov"] = "not orientable; see dsq"
        rep["dsq"] = [e.describe() for e in timed("dsq", lambda: dsq_defect(d, cap=kh_cap)).entries]

    if timings:
        rep["timings"] = clock
    else:
        skipped["timings"] = "not requested"
    rep["skipped"] = skipped
    return rep


def _report_file(job) -> list[str]:
    path, kh_cap, bracket_cap, timings = job
    return [report_json(build_report(path, name, d, kh_cap, bracket_cap, timings)) for name, d in _load(path)]


def _expand(paths: Sequence[str]) -> list[str]:
    out = []
    for p in paths:
        if os.path.isdir(p):
            for root, dirs, files in os.walk(p):
                dirs.sort()
                out.extend(os.path.join(root, f) for f in sorted(files) if not f.startswith("."))
        else:
            out.append(p)
    return out


def cmd_report(args) -> None:
    jobs = [(p, _kh_cap(args), args.cap, args.timings) for p in _expand(args.paths)]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results: Iterator[list[str]] = pool.map(_report_file, jobs)
            for lines in results:
                for line in lines:
                    _out(line)
    else:
        for job in jobs:
            for line in _report_file(job):
                _out(line)


# -- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chordknot", description="Invariants of signed chord diagrams.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, kh=False):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
        p.add_argument("--cap", type=int, default=None, help="chord cap for the bracket (env CHORDKNOT_BRACKET_CAP)")
        if kh:
            p.add_argument("--khovanov-cap", type=int, default=None,
                           help="chord cap for Khovanov (env CHORDKNOT_KHOVANOV_CAP)")

    helps = {
        "validate": "check a diagram file",
        "bracket": "Kauffman bracket",
        "jones": "Jones-normalised polynomial f",
        "orient": "orientation or obstruction",
        "genus": "Carter surface genus",
        "faces": "Carter surface faces",
        "checkerboard": "checkerboard colouring",
        "khovanov": "Khovanov homology (orientable input)",
        "dsq": "d∘d of the naive complex",
        "moves": "list applicable moves",
        "move": "apply one move",
        "walk": "seeded random walk of moves",
    }
    for cmd, text in helps.items():
        p = sub.add_parser(cmd, help=text)
        p.add_argument("file", help="diagram file, or - for stdin")
        common(p, kh=cmd in ("khovanov", "dsq"))
        if cmd in ("bracket", "jones"):
            p.add_argument("--mod4", action="store_true", help="also print the mod-4 class of the exponents")
        if cmd == "move":
            p.add_argument("--apply", type=int, required=True, metavar="K", help="index from 'moves'")
        if cmd == "walk":
            p.add_argument("--steps", type=int, required=True)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--policy", choices=("any", "orientability_preserving"), default="any")
            p.add_argument("--max-chords", type=int, default=None)

    for cmd in ("search", "catalog"):
        p = sub.add_parser(cmd, help="enumerate small diagrams" if cmd == "search" else "JSON table of small diagrams")
        p.add_argument("--chords", type=int, required=True, help="maximum chord count")
        p.add_argument("--circles", type=int, default=1, help="maximum circle count")
        p.add_argument("--min-circles", type=int, default=1)
        p.add_argument("--json", action="store_true")
        if cmd == "search":
            g = p.add_mutually_exclusive_group()
            g.add_argument("--bracket", metavar="POLY")
            g.add_argument("--non-orientable", action="store_true")
            g.add_argument("--mixed-mod4", action="store_true")

    p = sub.add_parser("report", help="per-diagram JSON report, one object per line")
    p.add_argument("paths", nargs="+", help="files or directories")
    common(p, kh=True)
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (not deterministic)")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    status = EXIT_OK
    try:
        if args.command == "search":
            cmd_search(args)
        elif args.command == "catalog":
            cmd_catalog(args)
        elif args.command == "report":
            cmd_report(args)
        else:
            fn = PER_DIAGRAM[args.command]
            docs = _load(args.file)
            for name, d in docs:
                if len(docs) > 1 and not getattr(args, "json", False):
                    _out(f"## {_label(name, d)}")
                try:
                    fn(args, name, d)
                except Refusal as exc:
                    print(f"{args.command}: {exc}", file=sys.stderr)
                    status = max(status, EXIT_REFUSED)
    except (ParseError, DiagramError, PolyParseError, MoveError, OSError, ValueError) as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ChordCapExceeded as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_CAP
    sys.stdout.flush()
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
