"""Command-line front end.

Exit codes: 0 success, 1 failed checks or invariant mismatch, 2 unreadable
input or bad parameters, 3 state space too large for brute force.
"""
from __future__ import annotations

import argparse
import collections
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence, TextIO

from . import io
from .complex import SEEDS, ComplexError, CurveSurfaceComplex, barycentric_subdivide, seed_complex, validate
from .examples import (
    NAMED_GROUPS,
    ActionTable,
    GroupTable,
    closed_surface_system,
    group_algebra,
    gset_system,
    matrix_system,
    regular_biset,
    regular_module,
    s3_biset_system,
    trivial_defect_system,
    twisted_system,
)
from .frobenius_data import DataError, NotProjectivelySpecial, equations_passed
from .moves import GENERATOR, MoveRecord, random_walk
from .statesum import (
    DEFAULT_BRUTE_FORCE_CAP,
    DEFAULT_MEMORY_BUDGET,
    InvalidComplex,
    InvalidSystem,
    TooLarge,
    normalized_invariant,
)

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_TOO_LARGE = 0, 1, 2, 3
N_EQUATIONS = 35


class InputError(Exception):
    pass


def data_path(name: str) -> Path:
    """Path of a file shipped in the package's ``data`` directory."""
    return Path(str(resources.files("defect_statesum") / "data" / name))


def _load_system(text: str):
    try:
        return io.load_system(text)
    except DataError as exc:
        raise InputError(str(exc)) from exc


def _load_complex(text: str) -> CurveSurfaceComplex:
    """A complex file, or the name of a built-in seed complex."""
    if not Path(text).exists() and text in SEEDS:
        return seed_complex(text)
    try:
        cx = io.load_complex(text)
    except DataError as exc:
        raise InputError(str(exc)) from exc
    problems = validate(cx)
    if problems:
        raise InputError(f"{text}: invalid complex: " + "; ".join(problems))
    return cx


def _emit(text: str, output: Optional[str], out: TextIO) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
        print(f"wrote {output}", file=out)
    else:
        out.write(text)


# -- check --------------------------------------------------------------------

def cmd_check(args, out: TextIO) -> int:
    system = _load_system(args.system)
    results = system.checks
    numbered = [r for r in results if isinstance(r.equation_id, int)]
    laws = [r for r in results if not isinstance(r.equation_id, int)]
    print(f"system: {system.name or args.system}", file=out)
    print(f"dimensions: A={system.algebra.dim} B={system.module.dim} C={system.defect.dim}", file=out)
    for r in numbered + laws:
        print(r.describe(), file=out)
    print(f"{equations_passed(results)}/{N_EQUATIONS} equations hold", file=out)
    print(f"{sum(r.passed for r in laws)}/{len(laws)} named laws hold", file=out)
    for label, getter in (("rho", lambda: system.rho), ("lambda", lambda: system.lam)):
        try:
            print(f"{label} = {getter()}", file=out)
        except (DataError, NotProjectivelySpecial) as exc:
            print(f"{label}: unavailable ({exc})", file=out)
    failed = [str(r.equation_id) for r in results if not r.passed]
    if failed:
        print("violated: " + ", ".join(failed), file=out)
        return EXIT_FAILED
    return EXIT_OK


# -- invariant ------------------------------------------------------------------

def _value_lines(value) -> list[str]:
    return [f"unnormalized = {value.unnormalized}", f"normalized = {value.normalized}"]


def cmd_invariant(args, out: TextIO) -> int:
    system = _load_system(args.system)
    cx = _load_complex(args.complex)
    try:
        value = normalized_invariant(system, cx, method=args.method, cap=args.cap, budget=args.budget)
    except InvalidSystem as exc:
        print(f"system fails its checks: {exc}", file=out)
        return EXIT_FAILED
    except InvalidComplex as exc:
        raise InputError(str(exc)) from exc
    if args.json:
        out.write(io.dumps(io.result_to_dict(value, cx, args.method)))
        return EXIT_OK
    for line in _value_lines(value):
        print(line, file=out)
    print(f"off-curve vertices |T0^0| = {value.n_off_vertices}", file=out)
    print(f"on-curve vertices |T0^1| = {value.n_on_vertices}", file=out)
    counts = io.result_to_dict(value, cx)["class_counts"]
    print("triangle classes: " + " ".join(f"{k}={counts[k]}" for k in sorted(counts)), file=out)
    return EXIT_OK


# -- fuzz -------------------------------------------------------------------------

@dataclass
class FuzzReport:
    seed: int
    steps: int
    initial: Fraction
    checkpoints: list[tuple[int, Fraction]] = field(default_factory=list)
    histogram: collections.Counter = field(default_factory=collections.Counter)
    mismatch: Optional[int] = None
    trace: list[MoveRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.mismatch is None


class _Mismatch(Exception):
    pass


def run_fuzz(
    system,
    cx: CurveSurfaceComplex,
    seed: int,
    steps: int,
    checkpoint_every: int = 10,
    max_edges: Optional[int] = None,
    barred_order: str = "path",
    method: str = "auto",
) -> FuzzReport:
    """Random walk with the invariant recomputed every ``checkpoint_every`` moves and after the last one."""
    initial = normalized_invariant(system, cx, method=method, barred_order=barred_order).normalized
    report = FuzzReport(seed, steps, initial)

    def callback(step, current, record):
        report.histogram[record.kind] += 1
        report.trace.append(record)
        if step % checkpoint_every == 0 or step == steps:
            value = normalized_invariant(system, current, method=method, barred_order=barred_order, check=False)
            report.checkpoints.append((step, value.normalized))
            if value.normalized != initial:
                report.mismatch = step
                raise _Mismatch

    try:
        random_walk(cx, seed, steps, max_edges=max_edges, callback=callback)
    except _Mismatch:
        pass
    return report


def cmd_fuzz(args, out: TextIO) -> int:
    if args.steps < 0 or args.checkpoint_every < 1:
        raise InputError("--steps must be >= 0 and --checkpoint-every >= 1")
    system = _load_system(args.system)
    cx = _load_complex(args.complex)
    print(f"generator: {GENERATOR}", file=out)
    print(f"seed: {args.seed}", file=out)
    print(f"steps: {args.steps}  checkpoint every: {args.checkpoint_every}", file=out)
    if args.barred_order != "path":
        print(f"barred argument order: {args.barred_order} (test only)", file=out)
    try:
        report = run_fuzz(
            system, cx, args.seed, args.steps, args.checkpoint_every, args.max_edges, args.barred_order
        )
    except InvalidSystem as exc:
        print(f"system fails its checks: {exc}", file=out)
        return EXIT_FAILED
    print(f"initial normalized = {report.initial}", file=out)
    for step, value in report.checkpoints:
        mark = "ok" if value == report.initial else "MISMATCH"
        print(f"  step {step:>5}: {value}  {mark}", file=out)
    print("moves: " + " ".join(f"{k}={report.histogram[k]}" for k in sorted(report.histogram)), file=out)
    if report.ok:
        print(f"invariant constant over {args.steps} moves", file=out)
        return EXIT_OK
    print(f"mismatch at step {report.mismatch}; move trace (seed {args.seed}):", file=out)
    for i, record in enumerate(report.trace, 1):
        print(f"  {i}: " + json.dumps(record.as_dict(), sort_keys=True), file=out)
    return EXIT_FAILED


# -- gen / subdivide --------------------------------------------------------------

def _group_arg(args, prefix: str = "") -> GroupTable:
    table = getattr(args, f"{prefix}table", None)
    name = getattr(args, f"{prefix}group", None)
    if table:
        try:
            return io.load_group_table(table)
        except DataError as exc:
            raise InputError(str(exc)) from exc
    if name:
        if name not in NAMED_GROUPS:
            raise InputError(f"unknown group {name!r}; choose from {', '.join(sorted(NAMED_GROUPS))}")
        return NAMED_GROUPS[name]()
    raise InputError("give --table FILE or --group NAME")


def _regular_pair(G: GroupTable) -> tuple[GroupTable, ActionTable]:
    """H = X = G, acting by left and right multiplication."""
    return G, regular_biset(G, G, list(range(G.order)))


def _generate(args):
    kind = args.kind
    if kind == "matrix":
        return matrix_system(args.n, args.m, name=f"example3_{args.n}_{args.m}")
    if kind == "group-algebra":
        G = _group_arg(args)
        return closed_surface_system(group_algebra(G), name="group_algebra")
    if kind == "example1":
        G = _group_arg(args)
        H, X = _regular_pair(G)
        return gset_system(G, H, X, name="example1")
    if kind == "example1-s3":
        return s3_biset_system()
    if kind == "trivial-defect":
        if args.matrix:
            m = matrix_system(args.matrix, args.matrix)
            A = m.algebra
        else:
            A = group_algebra(_group_arg(args))
        return trivial_defect_system(A, regular_module(A), name="example4")
    if kind == "twisted":
        G = _group_arg(args)
        H, X = _regular_pair(G)
        tables = {"alpha": {}, "beta": {}, "gamma": {}}
        if args.cocycles:
            try:
                doc = json.loads(Path(args.cocycles).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise InputError(f"cannot read {args.cocycles}: {exc}") from exc
            for key in tables:
                if key in doc:
                    tables[key] = doc[key]
        return twisted_system(G, H, X, tables["alpha"], tables["beta"], tables["gamma"], name="example2")
    raise InputError(f"unknown generator {kind!r}")


def cmd_gen(args, out: TextIO) -> int:
    if args.kind == "complex":
        if args.name not in SEEDS:
            raise InputError(f"unknown seed {args.name!r}; choose from {', '.join(SEEDS)}")
        _emit(io.dumps(io.complex_to_dict(seed_complex(args.name))), args.output, out)
        return EXIT_OK
    try:
        system = _generate(args)
    except DataError as exc:
        raise InputError(str(exc)) from exc
    _emit(io.dumps(io.system_to_dict(system)), args.output, out)
    return EXIT_OK


def cmd_subdivide(args, out: TextIO) -> int:
    cx = _load_complex(args.complex)
    _emit(io.dumps(io.complex_to_dict(barycentric_subdivide(cx))), args.output, out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------------

def _add_group_options(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--table", help="group multiplication table file (.tbl)")
    g.add_argument("--group", choices=sorted(NAMED_GROUPS), help="built-in group")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="defect-statesum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check a system file against every equation and law")
    p.add_argument("system")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("invariant", help="compute the normalized state-sum")
    p.add_argument("system")
    p.add_argument("complex", help="complex file or built-in seed name")
    p.add_argument("--method", choices=["auto", "brute", "contract"], default="auto")
    p.add_argument("--cap", type=int, default=DEFAULT_BRUTE_FORCE_CAP, help="brute-force colouring cap")
    p.add_argument("--budget", type=int, default=DEFAULT_MEMORY_BUDGET, help="entries per contraction intermediate")
    p.add_argument("--json", action="store_true", help="print the result as JSON")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("fuzz", help="random move walk with invariant checkpoints")
    p.add_argument("system")
    p.add_argument("complex", help="complex file or built-in seed name")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--steps", type=int, default=200)
    p.add_argument("--checkpoint-every", type=int, default=10)
    p.add_argument("--max-edges", type=int, default=None, help="edge bound for growth moves (default: start + 60)")
    p.add_argument("--barred-order", choices=["path", "encounter"], default="path", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_fuzz)

    p = sub.add_parser("gen", help="write an example system or seed complex")
    gen = p.add_subparsers(dest="kind", required=True)
    g = gen.add_parser("matrix", help="matrix algebras Mat(n), Mat(m x n), Mat(m)")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g = gen.add_parser("group-algebra", help="closed-surface data K[G] with the trivial defect")
    _add_group_options(g)
    g = gen.add_parser("example1", help="G = H = X with multiplication actions")
    _add_group_options(g)
    gen.add_parser("example1-s3", help="G = X = S3, H = Z/2 through a transposition")
    g = gen.add_parser("trivial-defect", help="A = B regular, C = K")
    _add_group_options(g)
    g.add_argument("--matrix", type=int, help="use A = Mat(n) instead of a group algebra")
    g = gen.add_parser("twisted", help="example1 data twisted by cocycle tables")
    _add_group_options(g)
    g.add_argument("--cocycles", help="JSON with alpha, beta, gamma tables (nested lists)")
    g = gen.add_parser("complex", help="a built-in seed complex")
    g.add_argument("name", choices=sorted(SEEDS))
    for g in gen.choices.values():
        g.add_argument("-o", "--output", help="output file (default: stdout)")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("subdivide", help="barycentric subdivision of a complex")
    p.add_argument("complex", help="complex file or built-in seed name")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.set_defaults(func=cmd_subdivide)
    return parser


def main(argv: Optional[Sequence[str]] = None, out: TextIO = sys.stdout) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except TooLarge as exc:
        print(f"too large: {exc}", file=out)
        print("use --method contract, or raise --cap if the enumeration is really wanted", file=out)
        return EXIT_TOO_LARGE
    except (InputError, ComplexError) as exc:
        print(f"error: {exc}", file=out)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
