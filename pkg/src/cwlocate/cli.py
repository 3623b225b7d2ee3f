"""Command-line interface: ``cwlocate {diag,count,translate,check,gen,bench}``.

Exit status: 0 success, 1 bad input or usage, 2 engine invariant violation,
3 engine/oracle mismatch.
"""
from __future__ import annotations

import argparse
import math
import random
import sys
from fractions import Fraction

from . import __version__
from .engine import BACKENDS, InvariantViolation, MatrixSpec, diagonalize
from .expr import ClassicExpr, ExprError, evaluate, format_expr, parse_expr
from .generate import random_slick
from .spectral import count_eigenvalues, inertia, parse_interval, parse_rational
from .translate import classic_to_slick, slick_to_classic

EXIT_INPUT, EXIT_INVARIANT, EXIT_MISMATCH = 1, 2, 3
FUZZ_SHIFTS = [Fraction(x) for x in ("-2", "-1", "-1/2", "0", "1/2", "1", "2")]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _rational(text):
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_slick(args):
    expr = parse_expr(_read(args.input), args.format)
    return classic_to_slick(expr) if isinstance(expr, ClassicExpr) else expr


def _read_diagonal(path):
    values = {}
    for no, line in enumerate(_read(path).splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise UsageError(f"{path}:{no}: expected 'vertex value'")
        try:
            values[parts[0]] = parse_rational(parts[1])
        except ValueError as exc:
            raise UsageError(f"{path}:{no}: {exc}")
    return values


def _spec(args):
    if args.spec == "custom":
        if not args.diagonal:
            raise UsageError("--spec custom needs --diagonal PATH")
        return MatrixSpec.custom(args.w, _read_diagonal(args.diagonal))
    if args.diagonal:
        raise UsageError("--diagonal only applies to --spec custom")
    return {
        "adjacency": MatrixSpec.adjacency,
        "laplacian": MatrixSpec.laplacian,
        "signless-laplacian": MatrixSpec.signless_laplacian,
    }[args.spec]()


def _run(e, c, spec, args):
    d = diagonalize(e, c, spec, backend=args.backend, check=args.check, trace=args.trace)
    if args.trace:
        for rec in d.trace:
            print(rec, file=sys.stderr)
    return d


# -- subcommands -------------------------------------------------------------

def cmd_diag(args):
    e = _load_slick(args)
    d = _run(e, args.c, _spec(args), args)
    for entry in d:
        print(entry.value)
    print(f"inertia: {inertia(d)}")
    return 0


def cmd_count(args):
    e = _load_slick(args)
    interval = parse_interval(args.interval)
    print(f"count: {count_eigenvalues(e, interval, _spec(args), backend=args.backend)}")
    return 0


def cmd_translate(args):
    expr = parse_expr(_read(args.input), args.format)
    target = args.to or ("slick" if args.format == "classic" else "classic")
    if target == args.format:
        out = expr
    elif target == "slick":
        out = classic_to_slick(expr)
    else:
        out = slick_to_classic(expr)
    print(format_expr(out, indent=args.indent).rstrip())
    return 0


def _compare(e, c, spec, args):
    """(engine inertia, oracle inertia, determinants agree)."""
    from .oracle import build_matrix, dense_congruent_diagonalize, determinant

    d = diagonalize(e, c, spec, backend=args.backend, check=True)
    B = build_matrix(evaluate(e), c, spec)[1]
    mine = inertia(d)
    ref = inertia(dense_congruent_diagonalize(B))
    return mine, ref, math.prod(d.values()) == determinant(B)


def cmd_check(args):
    spec = _spec(args)
    if args.fuzz:
        ok = 0
        for i in range(args.fuzz):
            rng = random.Random(args.seed * 1_000_003 + i)
            n, k = rng.randint(1, args.max_n), rng.randint(1, args.max_k)
            e = random_slick(n, k, rng)
            good = True
            for c in FUZZ_SHIFTS:
                mine, ref, det_ok = _compare(e, c, spec, args)
                if mine != ref or not det_ok:
                    good = False
                    print(f"MISMATCH case={i} n={n} k={k} c={c} engine {mine} oracle {ref}",
                          file=sys.stderr)
            ok += good
        print(f"{ok}/{args.fuzz} {'MATCH' if ok == args.fuzz else 'MISMATCH'}")
        return 0 if ok == args.fuzz else EXIT_MISMATCH
    if not args.input:
        raise UsageError("check needs --input or --fuzz N")
    e = _load_slick(args)
    n = len(evaluate(e))
    if n > args.max_oracle_n:
        raise UsageError(f"graph has {n} vertices; the dense oracle is capped at {args.max_oracle_n}")
    mine, ref, det_ok = _compare(e, args.c, spec, args)
    print(f"engine: {mine}")
    print(f"oracle: {ref}")
    same = mine == ref and det_ok
    print("MATCH" if same else "MISMATCH")
    return 0 if same else EXIT_MISMATCH


def cmd_gen(args):
    if args.n < 1 or args.k < 1:
        raise UsageError("--n and --k must be positive")
    print(format_expr(random_slick(args.n, args.k, args.seed), indent=args.indent).rstrip())
    return 0


def cmd_bench(args):
    from .bench import format_rows, run_bench

    backends = args.backends.split(",") if args.backends else None
    rows = run_bench(args.sizes, args.k, args.seed, backends, args.c, args.repeat)
    print(format_rows(rows))
    return 0


# -- wiring ----------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="cwlocate", description="Eigenvalue location for graphs given as slick k-expressions.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, need_input=True):
        sp.add_argument("--input", required=need_input, help="expression file, '-' for stdin")
        sp.add_argument("--format", choices=("slick", "classic"), default="slick")

    def matrix(sp):
        sp.add_argument("--spec", default="adjacency",
                        choices=("adjacency", "laplacian", "signless-laplacian", "custom"))
        sp.add_argument("--w", type=_rational, default=Fraction(1),
                        help="off-diagonal value for --spec custom")
        sp.add_argument("--diagonal", help="file of 'vertex value' lines for --spec custom")
        sp.add_argument("--backend", choices=("auto",) + BACKENDS, default="auto")

    s = sub.add_parser("diag", help="print the congruent diagonal and its inertia")
    common(s)
    matrix(s)
    s.add_argument("--c", type=_rational, default=Fraction(0))
    s.add_argument("--trace", action="store_true", help="per-node trace on stderr")
    s.add_argument("--check", action="store_true", help="validate every box")
    s.set_defaults(func=cmd_diag)

    s = sub.add_parser("count", help="number of eigenvalues in an interval")
    common(s)
    matrix(s)
    s.add_argument("--interval", required=True, help="e.g. '(0,1]' or '(-inf,2)'")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("translate", help="convert between classic and slick expressions")
    common(s)
    s.add_argument("--to", choices=("slick", "classic"))
    s.add_argument("--indent", type=int, default=2, help="0 for a single line")
    s.set_defaults(func=cmd_translate)

    s = sub.add_parser("check", help="compare the engine with the dense oracle")
    common(s, need_input=False)
    matrix(s)
    s.add_argument("--c", type=_rational, default=Fraction(0))
    s.add_argument("--fuzz", type=int, default=0, metavar="N")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-n", type=int, default=12)
    s.add_argument("--max-k", type=int, default=4)
    s.add_argument("--max-oracle-n", type=int, default=2000)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("gen", help="random slick expression")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--indent", type=int, default=0, help="0 for a single line")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", help="time both kernels on generated expressions")
    s.add_argument("--sizes", type=int, nargs="+", default=[10_000, 20_000])
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--c", type=_rational, default=Fraction(0))
    s.add_argument("--repeat", type=int, default=1)
    s.add_argument("--backends", help=f"comma list from {','.join(BACKENDS)}")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "indent", None) == 0:
        args.indent = None
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ExprError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
