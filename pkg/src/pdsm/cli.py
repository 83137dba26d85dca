"""Command-line driver.

Exit codes: 0 ok, 1 bad input, 2 plan/recipe does not fit, 3 unstable,
4 round bound violated.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench as benchmod
from .compound import default_recipe, run_compound
from .elemental import count_elemental, enumerate_trees, max_enum_p, path_tree, run_elemental, shorthand
from .errors import BoundViolation, GuardError, ParseError, StructureError, ValidationError
from .generator import PROFILES, GenSpec, generate
from .io import dumps, read_instance, read_matching, read_plan, read_recipe, write_instance, write_matching
from .stability import MAX_CANDIDATES, WITNESS_CAP, verify

EXIT_OK, EXIT_INPUT, EXIT_STRUCTURE, EXIT_UNSTABLE, EXIT_BOUND = 0, 1, 2, 3, 4


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out and out != "-":
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _int_range(text: str) -> list[int]:
    """``3-7``, ``3:7`` (inclusive) or ``4,8,16``."""
    text = text.strip()
    for sep in ("-", ":"):
        if sep in text and "," not in text:
            lo, hi = text.split(sep, 1)
            return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",") if v.strip()]


def cmd_gen(args) -> int:
    inst = generate(GenSpec(args.p, args.n, args.seed, args.profile))
    _emit(write_instance(inst), args.output)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = read_instance(_read(args.instance))
    err = sys.stderr
    if args.algorithm == "elemental":
        tree = read_plan(args.plan, inst.p) if args.plan else path_tree(inst.p)
        res = run_elemental(inst, tree, backend=args.backend)
        matching = res.matching
        print(f"plan {shorthand(tree)}", file=err)
        print(f"rounds {res.total_rounds} per-edge {list(res.rounds)}", file=err)
    else:
        if args.recipe:
            recipe = read_recipe(_read(args.recipe), inst.p)
        else:
            recipe = default_recipe(inst.p, args.strategy or "path")
        res = run_compound(inst, recipe, backend=args.backend)
        matching = res.matching
        for k, lv in enumerate(res.levels):
            print(f"level {k}: {lv.parties_in} -> {lv.parties_out} parties, rounds {lv.rounds}, ties {lv.ties}", file=err)
            if args.dump_reduced:
                d = Path(args.dump_reduced)
                d.mkdir(parents=True, exist_ok=True)
                (d / f"level{k}.instance.json").write_text(write_instance(lv.reduced.derived))
                (d / f"level{k}.provenance.json").write_text(dumps(lv.reduced.to_side_table()))
        print(f"rounds {res.total_rounds} ties {res.ties}", file=err)
    _emit(write_matching(matching, inst), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = read_instance(_read(args.instance))
    matching = read_matching(_read(args.matching), inst)
    report = verify(
        inst, matching, cap=args.cap, max_candidates=args.max_candidates, jobs=args.jobs, backend=args.backend
    )
    print("stable" if report.stable else "unstable")
    print(f"candidates_checked {report.candidates_checked}")
    for fam in report.witnesses:
        print(json.dumps([inst.members[a][i] for a, i in enumerate(fam)], ensure_ascii=False))
    return EXIT_OK if report.stable else EXIT_UNSTABLE


def cmd_enumerate(args) -> int:
    out = sys.stdout
    for tree in enumerate_trees(args.p, max_p=args.max_p):
        out.write(f"{shorthand(tree)}\t{json.dumps([list(e) for e in tree.edges])}\n")
    return EXIT_OK


def cmd_count(args) -> int:
    print(count_elemental(args.p))
    return EXIT_OK


def cmd_bench(args) -> int:
    records = benchmod.run_bench(
        _int_range(args.p_range), _int_range(args.n_range), args.seeds, args.plan_shape, jobs=args.jobs, backend=args.backend
    )
    _emit(benchmod.to_csv(records), args.output)
    print(benchmod.format_summary(benchmod.summarize(records)), file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pdsm", description="p-party stable marriage solver")
    ap.add_argument("--backend", choices=("numba", "numpy"), default=None, help="kernel backend (default: $PDSM_BACKEND or numba)")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a generated instance")
    g.add_argument("-p", type=int, required=True)
    g.add_argument("-n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--profile", choices=PROFILES, default="uniform")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="run an elemental or compound algorithm")
    s.add_argument("instance")
    s.add_argument("--algorithm", choices=("elemental", "compound"), default="elemental")
    s.add_argument("--plan", help="plan file, inline JSON, or prufer:<seq>/orient:<mask>")
    s.add_argument("--recipe", help="recipe file")
    s.add_argument("--strategy", choices=("path", "balanced-bisection"))
    s.add_argument("--dump-reduced", metavar="DIR", help="write each reduced instance and its provenance")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="exhaustively check a matching for blocking families")
    v.add_argument("instance")
    v.add_argument("matching")
    v.add_argument("--max-candidates", type=int, default=MAX_CANDIDATES)
    v.add_argument("--cap", type=int, default=WITNESS_CAP, help="witnesses to report")
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("enumerate", help="list every elemental plan for p parties")
    e.add_argument("-p", type=int, required=True)
    e.add_argument("--max-p", type=int, default=None, help=f"enumeration guard (default $PDSM_MAX_ENUM_P or {max_enum_p()})")
    e.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("count", help="number of elemental algorithms for p parties")
    c.add_argument("-p", type=int, required=True)
    c.set_defaults(func=cmd_count)

    b = sub.add_parser("bench", help="round counts of elemental runs as CSV")
    b.add_argument("--p-range", default="3-7")
    b.add_argument("--n-range", default="4,8,16")
    b.add_argument("--seeds", type=int, default=50)
    b.add_argument("--plan-shape", choices=benchmod.SHAPES, default="path")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BoundViolation as exc:
        print(f"error: round bound violated: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except StructureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE
    except ValidationError as exc:
        print("error: invalid input", file=sys.stderr)
        for v in exc.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_INPUT
    except (ParseError, GuardError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
