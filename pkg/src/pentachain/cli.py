"""Command-line driver.

Exit codes: 0 success, 1 identity failure, 2 singular coordinates after
resampling, 3 unsupported boundary, 4 inapplicable move, 64 usage error,
65 malformed input. Structured results go to stdout as JSON, a short human
summary to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .chain import Coloring, build_complex, enumerate_colorings, verify_complex
from .coords import CoordinateAssignment, SamplingError, random_coordinates
from .invariants import invariant_table, pentagon_clusters, verify_pentagon_matrix, verify_pentagon_scalar
from .io import FormatError, dump_triangulation, format_json, load_triangulation
from .matrix import ExactMatrix, SingularMatrix
from .scalar import format_scalar, parse_scalar
from .selftest import GROUPS, run_checks
from .triangulation import (MoveError, Triangulation, TriangulationError, classify, move_02,
                            pachner_14, pachner_23, pachner_32, pachner_41, validate)

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_SINGULAR = 2
EXIT_BOUNDARY = 3
EXIT_MOVE = 4
EXIT_USAGE = 64
EXIT_DATA = 65

RETRIES = 16


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _jobs(args) -> int:
    env = os.environ.get("PENTACHAIN_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"PENTACHAIN_JOBS must be an integer, got {env!r}") from None
    return args.jobs


def _emit(args, payload: dict, started: float) -> None:
    if getattr(args, "timing", False):
        payload["elapsed_ms"] = int((time.perf_counter() - started) * 1000)
    text = format_json(payload) + "\n"
    out = getattr(args, "output", None)
    if out and args.command != "pachner":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}/{trial}")


# verify-pentagon ------------------------------------------------------------


def _pentagon_trial(job):
    kind, n, seed, trial, bound = job
    rng = _trial_rng(seed, trial)
    try:
        z = random_coordinates(range(1, 6), n, rng, bound=bound, retries=RETRIES)
    except SamplingError as exc:
        return {"trial": trial, "error": str(exc)}
    rep = verify_pentagon_scalar(z) if kind == "scalar" else verify_pentagon_matrix(z)
    return {"trial": trial, "equal": rep.equal, "lhs_terms": len(rep.lhs), "rhs_terms": len(rep.rhs)}


def _map(fn, jobs, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def cmd_verify_pentagon(args) -> int:
    started = time.perf_counter()
    kinds = [k for k, on in (("scalar", args.scalar), ("matrix", args.matrix)) if on] or ["scalar"]
    workers = _jobs(args)
    reports, code = [], EXIT_OK
    for kind in kinds:
        n = 1 if kind == "scalar" else args.n
        jobs = [(kind, n, args.seed, i, args.bound) for i in range(args.trials)]
        results = _map(_pentagon_trial, jobs, workers)
        errors = [r for r in results if "error" in r]
        equal = not errors and all(r["equal"] for r in results)
        reports.append({
            "identity": f"pentagon-{kind}", "n": n, "seed": args.seed, "trials": args.trials,
            "equal": equal, "lhs_terms": sum(r.get("lhs_terms", 0) for r in results),
            "rhs_terms": sum(r.get("rhs_terms", 0) for r in results), "results": results,
        })
        ok = sum(1 for r in results if r.get("equal"))
        _say(f"pentagon-{kind} n={n}: {ok}/{args.trials} trials equal")
        if errors:
            code = max(code, EXIT_SINGULAR)
        elif not equal:
            code = EXIT_IDENTITY if code == EXIT_OK else code
    _emit(args, {"reports": reports}, started)
    return code


# shared loading ----------------------------------------------------------------


def _load(args) -> tuple[Triangulation, CoordinateAssignment]:
    loaded = load_triangulation(args.file)
    t = loaded.triangulation
    problems = validate(t)
    scope = [p for p in problems if "boundary" in p and ("component" in p or "empty" in p)]
    if scope:
        raise _BoundaryScope(scope[0])
    if problems:
        raise TriangulationError("; ".join(problems))
    n = loaded.n
    if getattr(args, "n", None) and args.n != n and loaded.coordinates is not None:
        raise UsageError(f"--n {args.n} conflicts with the file's n = {n}")
    n = getattr(args, "n", None) or n
    zeta = loaded.coordinates
    if zeta is None:
        zeta = random_coordinates(t.vertices, n, random.Random(f"{args.seed}/coords"),
                                  bound=args.bound, retries=RETRIES)
    return t, zeta


class _BoundaryScope(Exception):
    pass


def _colorings(args, t: Triangulation, n: int) -> list[Coloring]:
    if args.coloring and not getattr(args, "all_colorings", False):
        out = []
        for spec in args.coloring:
            try:
                c = Coloring.parse(spec)
                c.validate(t, n)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            out.append(c)
        return out
    return enumerate_colorings(t, n)


def _stats(t: Triangulation) -> dict:
    s = classify(t)
    return {"N": list(s.N), "N_inner": list(s.N_inner), "inner_vertices": list(s.inner_vertices),
            "inner_edges": [list(e) for e in s.inner_edges]}


# invariant -------------------------------------------------------------------


def cmd_invariant(args) -> int:
    started = time.perf_counter()
    t, zeta = _load(args)
    rows = [r.to_json() for r in invariant_table(t, zeta, _colorings(args, t, zeta.n))]
    nonzero = sum(1 for r in rows if r["value"] != "0")
    _say(f"{len(rows)} colorings, {nonzero} nonzero invariants")
    _emit(args, {"n": zeta.n, "stats": _stats(t), "colorings": len(rows), "rows": rows}, started)
    return EXIT_OK


# build-complex ---------------------------------------------------------------


def cmd_build_complex(args) -> int:
    started = time.perf_counter()
    t, zeta = _load(args)
    cols = _colorings(args, t, zeta.n)
    if not cols:
        raise UsageError("no coloring of the required size exists")
    data = build_complex(t, zeta, cols[0])
    report = verify_complex(data)
    _say(f"dims {report['dims']}, f3 f2 = 0: {report['f3f2_zero']}, f4 f3 = 0: {report['f4f3_zero']}")
    _emit(args, {"complex": data.to_json(), "report": report}, started)
    return EXIT_OK if report["ok"] else EXIT_IDENTITY


# pachner ------------------------------------------------------------------------


def _ids(text: str) -> list[int]:
    try:
        return [int(x.strip().lstrip("Tt")) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad id list {text!r}") from None


def _new_coordinate(args, t: Triangulation, zeta: CoordinateAssignment, w: int) -> CoordinateAssignment:
    spec = args.coordinate
    if spec is not None and not spec.lstrip("-").isdigit():
        try:
            value = json.loads(spec)
        except json.JSONDecodeError:
            value = spec
        if isinstance(value, (str, int)):
            value = [[value]]
        try:
            m = ExactMatrix.from_rows([[parse_scalar(str(x)) for x in row] for row in value])
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad --coordinate: {exc}") from None
        if m.shape != (zeta.n, zeta.n):
            raise UsageError(f"--coordinate must be {zeta.n}x{zeta.n}")
        return zeta.with_vertex(w, m)
    seed = int(spec) if spec is not None else args.seed
    return random_coordinates([w], zeta.n, random.Random(f"{seed}/vertex{w}"),
                              bound=args.bound, retries=RETRIES, fixed=zeta)


def _apply_move(args, t: Triangulation, zeta: CoordinateAssignment):
    move = args.move
    if move == "2-3":
        if not args.tetras:
            raise UsageError("--move 2-3 needs --tetras T1,T2")
        return pachner_23(t, _ids(args.tetras)), zeta
    if move == "3-2":
        if not args.edge:
            raise UsageError("--move 3-2 needs --edge I,J")
        e = _ids(args.edge)
        if len(e) != 2:
            raise UsageError("--edge needs two vertices")
        return pachner_32(t, e), zeta
    if move == "1-4":
        if args.tetra is None:
            raise UsageError("--move 1-4 needs --tetra T")
        ids = _ids(args.tetra)
        if len(ids) != 1:
            raise UsageError("--tetra takes one id")
        (tid,) = ids
        w = args.new_vertex or t.next_vertex_label()
        if w in t.vertices:
            raise MoveError(f"vertex label {w} already in use")
        return pachner_14(t, tid, w), _new_coordinate(args, t, zeta, w)
    if move == "4-1":
        if args.vertex is None:
            raise UsageError("--move 4-1 needs --vertex V")
        return pachner_41(t, args.vertex), zeta
    if move == "0-2":
        if not args.face:
            raise UsageError("--move 0-2 needs --face IJK")
        try:
            (member,) = Coloring.parse(args.face + ":0").members
        except ValueError as exc:
            raise UsageError(f"bad --face: {exc}") from None
        w = args.new_vertex or t.next_vertex_label()
        if w in t.vertices:
            raise MoveError(f"vertex label {w} already in use")
        return move_02(t, member[0], w), _new_coordinate(args, t, zeta, w)
    raise UsageError(f"unknown move {move!r}")


def cmd_pachner(args) -> int:
    started = time.perf_counter()
    t, zeta = _load(args)
    new_t, new_zeta = _apply_move(args, t, zeta)
    problems = validate(new_t)
    if problems:
        raise MoveError("move produced an invalid complex: " + "; ".join(problems))
    payload = {"move": args.move, "before": _stats(t), "after": _stats(new_t)}
    doc = dump_triangulation(new_t, new_zeta)
    if args.output:
        Path(args.output).write_text(format_json(doc) + "\n")
        payload["output"] = args.output
    else:
        payload["triangulation"] = doc
    code = EXIT_OK
    if args.check_invariants:
        cols = _colorings(args, t, zeta.n)
        before = invariant_table(t, zeta, cols)
        after = invariant_table(new_t, new_zeta, cols)
        rows = [{"coloring": b.coloring.labels(), "before": format_scalar(b.value),
                 "after": format_scalar(a.value), "match": a.value == b.value}
                for b, a in zip(before, after)]
        payload["invariants"] = rows
        payload["all_match"] = all(r["match"] for r in rows)
        _say(f"{sum(r['match'] for r in rows)}/{len(rows)} invariants unchanged up to sign")
        if not payload["all_match"]:
            code = EXIT_IDENTITY
    _emit(args, payload, started)
    return code


# selftest / gen-coords ------------------------------------------------------------


def cmd_selftest(args) -> int:
    started = time.perf_counter()
    only = args.only or None
    if only:
        bad = [g for g in only if g not in GROUPS]
        if bad:
            raise UsageError(f"unknown group(s) {bad}; choose from {GROUPS}")
    results = run_checks(args.seed, only)
    for r in results:
        _say(f"[{'PASS' if r.ok else 'FAIL'}] {r.group:<10} {r.name}: {r.detail}")
    passed = sum(r.ok for r in results)
    _say(f"{passed}/{len(results)} checks passed")
    _emit(args, {"seed": args.seed, "passed": passed, "total": len(results),
                 "checks": [r.to_json() for r in results]}, started)
    return EXIT_OK if passed == len(results) else EXIT_IDENTITY


PRESETS = {
    "tetra": lambda: Triangulation.from_tuples([(1, 2, 3, 4)]),
    "pentagon-lhs": lambda: pentagon_clusters()[0],
    "pentagon-rhs": lambda: pentagon_clusters()[1],
    "ball": lambda: pachner_14(Triangulation.from_tuples([(1, 2, 3, 4)]), 1, 5),
}


def cmd_gen_coords(args) -> int:
    started = time.perf_counter()
    if (args.file is None) == (args.preset is None):
        raise UsageError("give either a triangulation file or --preset")
    if args.file is not None:
        loaded = load_triangulation(args.file)
        t = loaded.triangulation
    else:
        t = PRESETS[args.preset]()
    zeta = random_coordinates(t.vertices, args.n, random.Random(f"{args.seed}/coords"),
                              bound=args.bound, retries=RETRIES)
    _emit(args, dump_triangulation(t, zeta), started)
    return EXIT_OK


# parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--bound", type=_positive, default=100,
                        help="bound on random numerators and denominators (default 100)")
    common.add_argument("--jobs", type=_positive, default=1,
                        help="worker processes; PENTACHAIN_JOBS overrides")
    common.add_argument("--timing", action="store_true", help="add elapsed_ms to the JSON output")
    common.add_argument("-o", "--output", help="write JSON here instead of stdout")

    p = _Parser(prog="pentachain", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify-pentagon", parents=[common], help="check the pentagon equations")
    s.add_argument("--scalar", action="store_true")
    s.add_argument("--matrix", action="store_true")
    s.add_argument("--n", type=_positive, default=1)
    s.add_argument("--trials", type=_positive, default=1)
    s.set_defaults(func=cmd_verify_pentagon)

    def with_file(name, func, help_):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("file", help="triangulation JSON ('-' for stdin)")
        s.add_argument("--n", type=_positive, default=None, help="block size when the file has no coordinates")
        s.add_argument("--coloring", action="append", help="e.g. 123:0,124:0 (repeatable)")
        s.add_argument("--all-colorings", action="store_true")
        s.set_defaults(func=func)
        return s

    with_file("invariant", cmd_invariant, "compute I_C for colorings")
    with_file("build-complex", cmd_build_complex, "assemble f2, f3, f4 and check the complex")
    s = with_file("pachner", cmd_pachner, "apply a move")
    s.add_argument("--move", required=True, choices=["2-3", "3-2", "1-4", "4-1", "0-2"])
    s.add_argument("--tetras")
    s.add_argument("--tetra")
    s.add_argument("--edge")
    s.add_argument("--vertex", type=int)
    s.add_argument("--face")
    s.add_argument("--new-vertex", type=_positive)
    s.add_argument("--coordinate", help="seed or explicit matrix (JSON) for the new vertex")
    s.add_argument("--check-invariants", action="store_true")

    s = sub.add_parser("selftest", parents=[common], help="run the property suite")
    s.add_argument("--only", action="append", help=f"group to run: {', '.join(GROUPS)}")
    s.set_defaults(func=cmd_selftest)

    s = sub.add_parser("gen-coords", parents=[common], help="attach random coordinates")
    s.add_argument("file", nargs="?")
    s.add_argument("--preset", choices=sorted(PRESETS))
    s.add_argument("--n", type=_positive, default=1)
    s.set_defaults(func=cmd_gen_coords)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _say(f"usage error: {exc}")
        return EXIT_USAGE
    except _BoundaryScope as exc:
        _say(f"unsupported boundary: {exc}; only manifolds with a one-component boundary are handled")
        return EXIT_BOUNDARY
    except (FormatError, TriangulationError) as exc:
        _say(f"bad input: {exc}")
        return EXIT_DATA
    except MoveError as exc:
        _say(f"move not applicable: {exc}")
        return EXIT_MOVE
    except (SamplingError, SingularMatrix) as exc:
        _say(f"singular coordinates: {exc}")
        return EXIT_SINGULAR
    except OSError as exc:
        _say(f"cannot read input: {exc}")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
