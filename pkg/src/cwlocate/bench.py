"""Timing and op-count table for the diagonalization kernels."""
from __future__ import annotations

import time
from dataclasses import dataclass

from .engine import BACKENDS, compile_plan, diagonalize
from .generate import random_slick


@dataclass
class BenchRow:
    backend: str
    n: int
    k: int
    seconds: float
    ops: int


def run_bench(sizes, k=3, seed=1, backends=None, c=0, repeat=1) -> list[BenchRow]:
    """Best-of-``repeat`` wall time per (backend, n); expression generation
    and plan compilation are not timed."""
    rows = []
    for n in sizes:
        e = random_slick(n, k, seed)
        plan = compile_plan(e)
        for name in backends or BACKENDS:
            best = None
            for _ in range(repeat):
                t0 = time.perf_counter()
                d = diagonalize(e, c, backend=name, plan=plan)
                dt = time.perf_counter() - t0
                best = dt if best is None else min(best, dt)
            rows.append(BenchRow(name, n, k, best, d.ops))
    return rows


def format_rows(rows: list[BenchRow]) -> str:
    """Table with op-count ratio to the previous size and, when both kernels
    ran, the python/compiled time ratio."""
    lines = [f"{'backend':<9} {'k':>2} {'n':>8} {'seconds':>9} {'ops':>11} {'ops_ratio':>9} {'speedup':>8}"]
    prev_ops = {}
    times = {(r.backend, r.n): r.seconds for r in rows}
    for r in rows:
        p = prev_ops.get(r.backend)
        ratio = f"{r.ops / p:.3f}" if p else "-"
        prev_ops[r.backend] = r.ops
        speed = "-"
        py = times.get(("python", r.n))
        if r.backend == "compiled" and py and r.seconds > 0:
            speed = f"{py / r.seconds:.1f}x"
        lines.append(f"{r.backend:<9} {r.k:>2} {r.n:>8} {r.seconds:>9.3f} {r.ops:>11} {ratio:>9} {speed:>8}")
    return "\n".join(lines)
