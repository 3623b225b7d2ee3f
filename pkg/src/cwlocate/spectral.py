"""Inertia and eigenvalue counts over real intervals via Sylvester's law."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .engine import ADJACENCY, MatrixSpec, diagonalize
from .expr import Atom, Join, SlickExpr, postorder

__all__ = [
    "Inertia", "inertia", "inertia_of_values", "Interval", "parse_interval",
    "count_eigenvalues", "multiplicity", "JoinBoundsReport", "check_join_bounds",
    "format_rational", "parse_rational",
]


class Inertia(NamedTuple):
    n_plus: int
    n_zero: int
    n_minus: int

    def __str__(self):
        return f"n+={self.n_plus} n0={self.n_zero} n-={self.n_minus}"


def inertia_of_values(values) -> Inertia:
    pos = neg = zero = 0
    for v in values:
        if v > 0:
            pos += 1
        elif v < 0:
            neg += 1
        else:
            zero += 1
    return Inertia(pos, zero, neg)


def inertia(d) -> Inertia:
    """Sign counts of a DiagList (or any iterable of entries / rationals)."""
    values = d.values() if hasattr(d, "values") else [getattr(x, "value", x) for x in d]
    return inertia_of_values(values)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: {text!r}") from None


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


_INF = {"inf": 1, "+inf": 1, "-inf": -1}
_INTERVAL = re.compile(r"\s*([\[(])\s*([^,\s]+)\s*,\s*([^,\s]+)\s*([\])])\s*\Z")


@dataclass(frozen=True)
class Interval:
    """A real interval; ``lo``/``hi`` of None mean -inf/+inf (always open)."""

    lo: Fraction | None
    hi: Fraction | None
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        if self.lo is None and self.lo_closed or self.hi is None and self.hi_closed:
            raise ValueError("an infinite endpoint must be open")
        if self.lo is not None and self.hi is not None:
            if self.lo > self.hi:
                raise ValueError(f"empty interval: {self.lo} > {self.hi}")
            if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
                raise ValueError("a point interval must be closed on both sides")

    @property
    def bounded(self) -> bool:
        return self.lo is not None and self.hi is not None

    def __str__(self):
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        return f"{'[' if self.lo_closed else '('}{lo},{hi}{']' if self.hi_closed else ')'}"


def _endpoint(text: str, side: int):
    t = text.strip().lower()
    if t in _INF:
        if _INF[t] != side:
            raise ValueError(f"{text!r} cannot be the {'lower' if side < 0 else 'upper'} end")
        return None
    return parse_rational(t)


def parse_interval(text: str) -> Interval:
    """Parse ``[a,b]``, ``(a,b)``, ``(a,b]``, ``[a,b)``; ends may be -inf/inf."""
    m = _INTERVAL.match(text)
    if not m:
        raise ValueError(f"malformed interval: {text!r}")
    lb, a, b, rb = m.groups()
    return Interval(_endpoint(a, -1), _endpoint(b, 1), lb == "[", rb == "]")


def count_eigenvalues(e: SlickExpr, I: Interval | str, spec: MatrixSpec = ADJACENCY,
                      backend: str = "auto") -> int:
    """Number of eigenvalues (with multiplicity) inside ``I``; at most two runs."""
    if isinstance(I, str):
        I = parse_interval(I)
    if I.lo is None and I.hi is None:
        return _size(e)
    at = {}

    def inert(x):
        if x not in at:
            at[x] = inertia(diagonalize(e, x, spec, backend=backend))
        return at[x]

    if I.lo is None:
        b = inert(I.hi)
        return b.n_minus + (b.n_zero if I.hi_closed else 0)
    if I.hi is None:
        a = inert(I.lo)
        return a.n_plus + (a.n_zero if I.lo_closed else 0)
    if I.lo == I.hi:
        return inert(I.lo).n_zero
    a, b = inert(I.lo), inert(I.hi)
    if I.lo_closed and I.hi_closed:
        return b.n_minus + b.n_zero - a.n_minus
    if I.lo_closed:
        return b.n_minus - a.n_minus
    if I.hi_closed:
        return a.n_plus - b.n_plus
    return b.n_minus - a.n_minus - a.n_zero


def _size(e: SlickExpr) -> int:
    return sum(1 for node in postorder(e.root) if isinstance(node, Atom))


def multiplicity(e: SlickExpr, lam, spec: MatrixSpec = ADJACENCY, backend: str = "auto") -> int:
    return inertia(diagonalize(e, Fraction(lam), spec, backend=backend)).n_zero


@dataclass
class JoinBoundsReport:
    k: int
    interval: Interval
    count: int
    count_left: int
    count_right: int
    samples: list = field(default_factory=list)  # (lam, m_G, m_left, m_right)

    @property
    def count_bound_applies(self) -> bool:
        return self.count_left == 0 and self.count_right == 0

    @property
    def count_bound_ok(self) -> bool:
        return self.count <= 8 * self.k

    @property
    def multiplicity_ok(self) -> bool:
        return all(mg <= ml + mr + 4 * self.k for _, mg, ml, mr in self.samples)

    @property
    def max_multiplicity(self) -> int:
        return max((mg for _, mg, _, _ in self.samples), default=0)

    def table(self) -> str:
        lines = [f"{'lambda':>12} {'m_G':>5} {'m_L':>5} {'m_R':>5} {'ok':>4}"]
        for lam, mg, ml, mr in self.samples:
            ok = "yes" if mg <= ml + mr + 4 * self.k else "NO"
            lines.append(f"{str(lam):>12} {mg:>5} {ml:>5} {mr:>5} {ok:>4}")
        return "\n".join(lines)

    def key_values(self) -> str:
        applies = self.count_bound_applies
        pairs = [
            ("interval", str(self.interval)), ("k", self.k),
            ("count", self.count), ("count_left", self.count_left),
            ("count_right", self.count_right), ("bound_8k", 8 * self.k),
            ("bound_8k_applies", str(applies).lower()),
            ("bound_8k_ok", str(self.count_bound_ok).lower() if applies else "n/a"),
            ("max_multiplicity", self.max_multiplicity),
            ("multiplicity_ok", str(self.multiplicity_ok).lower()),
        ]
        return "\n".join(f"{k}={v}" for k, v in pairs)

    def __str__(self):
        return self.table() + "\n" + self.key_values()


def check_join_bounds(e: SlickExpr, I: Interval | str, spec: MatrixSpec = ADJACENCY,
                      samples: int = 7, backend: str = "auto") -> JoinBoundsReport:
    """Counts for G and both root children in an open bounded interval, and
    the multiplicity inequality m_G <= m_L + m_R + 4k at ``samples`` evenly
    spaced rational points strictly inside it."""
    if isinstance(I, str):
        I = parse_interval(I)
    if not isinstance(e.root, Join):
        raise ValueError("root of the expression is an atom, not a join")
    if not I.bounded or I.lo_closed or I.hi_closed:
        raise ValueError("need an open bounded interval")
    left = SlickExpr(e.k, e.root.left, validate=False)
    right = SlickExpr(e.k, e.root.right, validate=False)
    rep = JoinBoundsReport(
        e.k, I,
        count_eigenvalues(e, I, spec, backend),
        count_eigenvalues(left, I, spec, backend),
        count_eigenvalues(right, I, spec, backend))
    step = (I.hi - I.lo) / (samples + 1)
    for j in range(1, samples + 1):
        lam = I.lo + step * j
        rep.samples.append((lam, multiplicity(e, lam, spec, backend),
                            multiplicity(left, lam, spec, backend),
                            multiplicity(right, lam, spec, backend)))
    return rep
