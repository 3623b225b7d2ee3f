"""Compiled GMP kernel vs. the pure-Python kernel on random slick expressions.

    python benchmarks/compare_backends.py --sizes 5000 10000 20000 --k 3

Both kernels must report the same op count for every size; the script
exits nonzero if they do not.
"""
import argparse
import sys

from cwlocate.bench import format_rows, run_bench
from cwlocate.engine import BACKENDS


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[2500, 5000, 10000, 20000])
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if "compiled" not in BACKENDS:
        sys.exit("compiled kernel not built; run `pip install -e . --no-build-isolation`")
    rows = run_bench(args.sizes, args.k, args.seed, ["python", "compiled"], repeat=args.repeat)
    print(format_rows(rows))
    ops = {}
    for r in rows:
        ops.setdefault(r.n, set()).add(r.ops)
    if any(len(v) != 1 for v in ops.values()):
        sys.exit("op counts differ between kernels")


if __name__ == "__main__":
    main()
