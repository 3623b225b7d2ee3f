"""Value types shared by both diagonalization backends."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction
from typing import Iterator, Mapping, NamedTuple

__all__ = [
    "RowKind", "RowMeta", "KBox", "DiagEntry", "DiagList", "TraceRecord",
    "MatrixSpec", "InvariantViolation", "ADJACENCY",
]


class InvariantViolation(RuntimeError):
    """A box broke one of the k-box invariants while processing ``node``."""

    def __init__(self, node: int, message: str):
        self.node = node
        super().__init__(f"node={node}: {message}")


class RowKind(IntEnum):
    # numeric order is the only allowed direction of travel
    TYPE_II = 1
    TYPE_I = 2
    DIAGONALIZED = 3


class RowMeta(NamedTuple):
    kind: RowKind
    label: int
    vertex: str


@dataclass
class KBox:
    """Undiagonalized rows of a subexpression: ``M`` plus one RowMeta per row.

    Rows are stored type-i first, so ``M[:kp, :kp]`` is the M0 block and
    ``M[kp:, kp:]`` the M2 block.
    """

    M: list
    rows: list

    @property
    def kp(self) -> int:
        return sum(1 for r in self.rows if r.kind == RowKind.TYPE_I)

    @property
    def kpp(self) -> int:
        return sum(1 for r in self.rows if r.kind == RowKind.TYPE_II)

    @property
    def labels(self) -> list[int]:
        return [r.label for r in self.rows]

    def block(self, which: int) -> list[list[Fraction]]:
        kp = self.kp
        rows = range(kp) if which in (0, 1) else range(kp, len(self.rows))
        cols = range(kp) if which == 0 else range(kp, len(self.rows))
        return [[self.M[i][j] for j in cols] for i in rows]

    def is_symmetric(self) -> bool:
        m = len(self.M)
        return all(self.M[i][j] == self.M[j][i] for i in range(m) for j in range(i))


class DiagEntry(NamedTuple):
    node: int
    vertex: str
    value: Fraction


class TraceRecord(NamedTuple):
    node: int
    kp: int
    kpp: int
    emitted: tuple

    def __str__(self):
        return "node=%d kp=%d kpp=%d emit=[%s]" % (
            self.node, self.kp, self.kpp, ",".join(str(v) for v in self.emitted))


@dataclass
class DiagList:
    """Diagonal entries of a matrix congruent to the shifted matrix, in emission order."""

    entries: list
    ops: int = 0
    trace: list | None = None
    backend: str = ""

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[DiagEntry]:
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def values(self) -> list[Fraction]:
        return [e.value for e in self.entries]


@dataclass(frozen=True)
class MatrixSpec:
    """A graph matrix with one off-diagonal value ``w`` on edges.

    The diagonal entry of vertex v is ``diagonal.get(v, 0) + degree_weight * deg(v)``.
    """

    w: Fraction = Fraction(1)
    degree_weight: Fraction = Fraction(0)
    diagonal: Mapping[str, Fraction] = field(default_factory=dict)
    name: str = "adjacency"

    def __post_init__(self):
        if self.w == 0:
            raise ValueError("off-diagonal value must be nonzero")

    def diagonal_of(self, vertex: str, degree: int = 0) -> Fraction:
        return Fraction(self.diagonal.get(vertex, 0)) + self.degree_weight * degree

    @property
    def uses_degrees(self) -> bool:
        return self.degree_weight != 0

    @classmethod
    def adjacency(cls) -> "MatrixSpec":
        return cls()

    @classmethod
    def laplacian(cls) -> "MatrixSpec":
        return cls(Fraction(-1), Fraction(1), {}, "laplacian")

    @classmethod
    def signless_laplacian(cls) -> "MatrixSpec":
        return cls(Fraction(1), Fraction(1), {}, "signless-laplacian")

    @classmethod
    def custom(cls, w, diagonal: Mapping[str, Fraction]) -> "MatrixSpec":
        return cls(Fraction(w), Fraction(0), {v: Fraction(x) for v, x in diagonal.items()}, "custom")


ADJACENCY = MatrixSpec()
