"""Slick and classic clique-width expressions.

Two grammars share the atom ``i(v)``:

* slick expressions join two subexpressions with ``(join (S ..) (L ..) (R ..) a b)``,
  creating edges between the sides and relabelling each side in one step;
* classic expressions use disjoint union ``u``, edge creation ``eta`` and
  relabelling ``rho``.

Every traversal here is iterative, so expressions with very deep parse trees
(hundreds of thousands of nodes) are handled without touching the recursion
limit.
"""
from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

__all__ = [
    "ExprError", "ParseError", "LabelMap", "Atom", "Join", "Union", "Eta", "Rho",
    "SlickExpr", "ClassicExpr", "LabeledGraph", "parse_slick", "parse_classic",
    "parse_expr", "format_expr", "eval_slick", "eval_classic", "evaluate", "depth",
    "node_count", "graphs_equal", "children", "postorder", "same_tree",
]


class ExprError(ValueError):
    """An expression violates one of its structural invariants."""


class ParseError(ExprError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)


class LabelMap:
    """A total function on labels; unlisted labels map to themselves."""

    __slots__ = ("pairs", "_image")

    def __init__(self, pairs: Iterable[tuple[int, int]] = ()):
        image: dict[int, int] = {}
        for src, dst in pairs:
            if src in image:
                raise ExprError(f"label {src} mapped twice")
            image[src] = dst
        self._image = {s: d for s, d in image.items() if s != d}
        self.pairs = tuple(sorted(self._image.items()))

    def __call__(self, label: int) -> int:
        return self._image.get(label, label)

    def __eq__(self, other):
        if isinstance(other, LabelMap):
            return self.pairs == other.pairs
        return NotImplemented

    def __hash__(self):
        return hash(self.pairs)

    def __repr__(self):
        return "LabelMap(%r)" % (list(self.pairs),)

    def is_identity(self) -> bool:
        return not self.pairs

    def table(self, k: int) -> list[int]:
        """Images of labels ``1..k`` (index 0 unused)."""
        return [0] + [self._image.get(i, i) for i in range(1, k + 1)]


IDENTITY = LabelMap()


@dataclass(frozen=True, eq=False)
class Atom:
    label: int
    vertex: str


@dataclass(frozen=True, eq=False)
class Join:
    S: frozenset
    L: LabelMap
    R: LabelMap
    left: object
    right: object


@dataclass(frozen=True, eq=False)
class Union:
    left: object
    right: object


@dataclass(frozen=True, eq=False)
class Eta:
    i: int
    j: int
    child: object


@dataclass(frozen=True, eq=False)
class Rho:
    i: int
    j: int
    child: object


def children(node) -> tuple:
    if isinstance(node, Atom):
        return ()
    if isinstance(node, (Join, Union)):
        return (node.left, node.right)
    return (node.child,)


def postorder(root) -> Iterator:
    """Yield the nodes below ``root`` (inclusive) in post order, left child first."""
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        kids = children(node)
        if expanded or not kids:
            yield node
            continue
        stack.append((node, True))
        for kid in reversed(kids):
            stack.append((kid, False))


def _check_label(label: int, k: int, what: str = "label"):
    if not 1 <= label <= k:
        raise ExprError(f"{what} {label} out of range 1..{k}")


def _validate(root, k: int, slick: bool):
    if k < 1:
        raise ExprError(f"width must be positive, got {k}")
    seen: set[str] = set()
    for node in postorder(root):
        if isinstance(node, Atom):
            _check_label(node.label, k)
            if node.vertex in seen:
                raise ExprError(f"duplicate vertex {node.vertex!r}")
            seen.add(node.vertex)
        elif isinstance(node, Join):
            if not slick:
                raise ExprError("join node in a classic expression")
            for i, j in node.S:
                _check_label(i, k)
                _check_label(j, k)
            for pairs in (node.L.pairs, node.R.pairs):
                for i, j in pairs:
                    _check_label(i, k)
                    _check_label(j, k)
        elif slick:
            raise ExprError(f"{type(node).__name__} node in a slick expression")
        elif isinstance(node, (Eta, Rho)):
            _check_label(node.i, k)
            _check_label(node.j, k)
            if isinstance(node, Eta) and node.i == node.j:
                raise ExprError(f"eta needs two distinct labels, got {node.i} {node.j}")


@dataclass(frozen=True, eq=False)
class SlickExpr:
    k: int
    root: object
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.validate:
            _validate(self.root, self.k, slick=True)

    def __eq__(self, other):
        if not isinstance(other, SlickExpr):
            return NotImplemented
        return self.k == other.k and same_tree(self.root, other.root)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class ClassicExpr:
    k: int
    root: object
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.validate:
            _validate(self.root, self.k, slick=False)

    def __eq__(self, other):
        if not isinstance(other, ClassicExpr):
            return NotImplemented
        return self.k == other.k and same_tree(self.root, other.root)

    __hash__ = None


def _node_key(node):
    if isinstance(node, Atom):
        return ("v", node.label, node.vertex)
    if isinstance(node, Join):
        return ("join", node.S, node.L, node.R)
    if isinstance(node, Union):
        return ("u",)
    return (type(node).__name__, node.i, node.j)


def same_tree(a, b) -> bool:
    """Node-for-node structural equality, without recursion."""
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        if _node_key(x) != _node_key(y):
            return False
        stack.extend(zip(children(x), children(y)))
    return True


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_IDENT = re.compile(r"[A-Za-z0-9_]+\Z")
_INT = re.compile(r"[+-]?\d+\Z")


class _Text:
    def __init__(self, text: str):
        self.text = text
        self._line_starts = [0] + [m.end() for m in re.finditer(r"\n", text)]

    def where(self, offset: int) -> tuple[int, int]:
        line = bisect.bisect_right(self._line_starts, offset)
        return line, offset - self._line_starts[line - 1] + 1

    def error(self, message: str, offset: int) -> ParseError:
        return ParseError(message, *self.where(offset))


class _SList(list):
    """A parenthesised list remembering where it opened."""

    def __init__(self, pos: int):
        super().__init__()
        self.pos = pos


@dataclass
class _Tok:
    text: str
    pos: int


def _read_sexpr(src: _Text, start: int):
    """Read exactly one s-expression beginning at ``start``; reject trailing input."""
    stack: list[_SList] = []
    result = None
    for m in _TOKEN.finditer(src.text, start):
        tok = m.group()
        if result is not None:
            raise src.error(f"unexpected trailing input {tok!r}", m.start())
        if tok == "(":
            stack.append(_SList(m.start()))
        elif tok == ")":
            if not stack:
                raise src.error("unbalanced ')'", m.start())
            done = stack.pop()
            if stack:
                stack[-1].append(done)
            else:
                result = done
        elif stack:
            stack[-1].append(_Tok(tok, m.start()))
        else:
            raise src.error(f"expected '(' but found {tok!r}", m.start())
    if stack:
        raise src.error("unclosed '('", stack[-1].pos)
    if result is None:
        raise src.error("missing expression", len(src.text))
    return result


def _read_header(src: _Text) -> tuple[int, int]:
    m = re.match(r"\s*k\s+([+-]?\d+)\s", src.text + "\n")
    if not m:
        first = re.match(r"\s*", src.text).end()
        raise src.error("expected header 'k <INT>'", first)
    k = int(m.group(1))
    if k < 1:
        raise src.error(f"width must be positive, got {k}", m.start(1))
    return k, m.end()


def _int(src: _Text, item, what: str) -> int:
    if not isinstance(item, _Tok) or not _INT.match(item.text):
        pos = item.pos
        raise src.error(f"expected integer {what}", pos)
    return int(item.text)


def _label(src: _Text, item, k: int) -> int:
    value = _int(src, item, "label")
    if not 1 <= value <= k:
        raise src.error(f"label {value} out of range 1..{k}", item.pos)
    return value


def _keyword(item) -> str | None:
    if isinstance(item, _SList) and item and isinstance(item[0], _Tok):
        return item[0].text
    return None


def _pairs(src: _Text, item, head: str, k: int) -> list[tuple[int, int]]:
    if _keyword(item) != head:
        raise src.error(f"expected ({head} ...)", item.pos)
    out = []
    for pair in item[1:]:
        if not isinstance(pair, _SList) or len(pair) != 2:
            raise src.error("expected a pair (INT INT)", pair.pos)
        out.append((_label(src, pair[0], k), _label(src, pair[1], k)))
    return out


def _atom(src: _Text, sx: _SList, k: int, seen: set) -> Atom:
    if len(sx) != 3:
        raise src.error("atom must be (v INT IDENT)", sx.pos)
    label = _label(src, sx[1], k)
    name = sx[2]
    if not isinstance(name, _Tok) or not _IDENT.match(name.text):
        raise src.error("vertex name must match [A-Za-z0-9_]+", name.pos)
    if name.text in seen:
        raise src.error(f"duplicate vertex {name.text!r}", name.pos)
    seen.add(name.text)
    return Atom(label, name.text)


def _build(src: _Text, root: _SList, split: Callable):
    """Turn an s-expression into nodes bottom-up; ``split`` validates one list
    and returns ``(make, child_lists)``."""
    stack = [(root, None)]
    built: list = []
    while stack:
        sx, make = stack.pop()
        if make is not None:
            n = make.arity
            kids = built[len(built) - n:]
            del built[len(built) - n:]
            built.append(make(*kids))
            continue
        if not isinstance(sx, _SList):
            raise src.error(f"expected an expression, found {sx.text!r}", sx.pos)
        make, kids = split(sx)
        if not kids:
            built.append(make())
            continue
        stack.append((sx, make))
        for kid in reversed(kids):
            stack.append((kid, None))
    return built[0]


class _Maker:
    def __init__(self, arity: int, fn: Callable):
        self.arity = arity
        self.fn = fn

    def __call__(self, *kids):
        return self.fn(*kids)


def parse_slick(text: str) -> SlickExpr:
    src = _Text(text)
    k, start = _read_header(src)
    sx = _read_sexpr(src, start)
    seen: set[str] = set()

    def split(sx):
        head = _keyword(sx)
        if head == "v":
            atom = _atom(src, sx, k, seen)
            return _Maker(0, lambda: atom), ()
        if head == "join":
            if len(sx) != 6:
                raise src.error("join must be (join (S ..) (L ..) (R ..) expr expr)", sx.pos)
            S = frozenset(_pairs(src, sx[1], "S", k))
            try:
                L = LabelMap(_pairs(src, sx[2], "L", k))
                R = LabelMap(_pairs(src, sx[3], "R", k))
            except ExprError as exc:
                raise src.error(str(exc), sx.pos) from None
            return _Maker(2, lambda a, b: Join(S, L, R, a, b)), (sx[4], sx[5])
        raise src.error(f"unknown slick operator {head!r}", sx.pos)

    root = _build(src, sx, split)
    return SlickExpr(k, root, validate=False)


def parse_classic(text: str) -> ClassicExpr:
    src = _Text(text)
    k, start = _read_header(src)
    sx = _read_sexpr(src, start)
    seen: set[str] = set()

    def split(sx):
        head = _keyword(sx)
        if head == "v":
            atom = _atom(src, sx, k, seen)
            return _Maker(0, lambda: atom), ()
        if head == "u":
            if len(sx) != 3:
                raise src.error("union must be (u expr expr)", sx.pos)
            return _Maker(2, Union), (sx[1], sx[2])
        if head in ("eta", "rho"):
            if len(sx) != 4:
                raise src.error(f"{head} must be ({head} INT INT expr)", sx.pos)
            i = _label(src, sx[1], k)
            j = _label(src, sx[2], k)
            if head == "eta":
                if i == j:
                    raise src.error(f"eta needs two distinct labels, got {i} {j}", sx.pos)
                return _Maker(1, lambda c: Eta(i, j, c)), (sx[3],)
            return _Maker(1, lambda c: Rho(i, j, c)), (sx[3],)
        raise src.error(f"unknown classic operator {head!r}", sx.pos)

    root = _build(src, sx, split)
    return ClassicExpr(k, root, validate=False)


def parse_expr(text: str, fmt: str = "slick"):
    if fmt == "slick":
        return parse_slick(text)
    if fmt == "classic":
        return parse_classic(text)
    raise ValueError(f"unknown expression format {fmt!r}")


# ---------------------------------------------------------------- printing

def _pairs_text(head: str, pairs) -> str:
    return "(" + " ".join([head] + ["(%d %d)" % p for p in pairs]) + ")"


def format_expr(expr: SlickExpr | ClassicExpr, indent: int | None = None) -> str:
    """Render ``expr`` in the file format, header included.

    With ``indent=None`` the expression is written on one line; otherwise each
    subexpression starts a new line indented by ``indent`` spaces per level.
    """
    out: list[str] = []
    # (node, level) for a node to open; (None, text) for literal closing text
    stack: list = [(expr.root, 0)]
    while stack:
        node, level = stack.pop()
        if node is None:
            out.append(level)
            continue
        if indent is not None and out:
            out.append("\n" + " " * (indent * level))
        elif out:
            out.append(" ")
        if isinstance(node, Atom):
            out.append("(v %d %s)" % (node.label, node.vertex))
            continue
        if isinstance(node, Join):
            out.append("(join %s %s %s" % (
                _pairs_text("S", sorted(node.S)),
                _pairs_text("L", node.L.pairs),
                _pairs_text("R", node.R.pairs)))
        elif isinstance(node, Union):
            out.append("(u")
        else:
            out.append("(%s %d %d" % ("eta" if isinstance(node, Eta) else "rho", node.i, node.j))
        stack.append((None, ")"))
        for kid in reversed(children(node)):
            stack.append((kid, level + 1))
    return "k %d\n%s\n" % (expr.k, "".join(out))


# ---------------------------------------------------------------- evaluation

@dataclass(eq=False)
class LabeledGraph:
    """Vertices (in atom order) with their labels, and an undirected edge set."""

    labels: dict
    edges: frozenset

    @property
    def vertices(self) -> list[str]:
        return list(self.labels)

    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return graphs_equal(self, other)

    __hash__ = None

    def adjacency(self) -> dict[str, set[str]]:
        adj = {v: set() for v in self.labels}
        for e in self.edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degrees(self) -> dict[str, int]:
        return {v: len(nb) for v, nb in self.adjacency().items()}

    def induced(self, vertices: Iterable[str]) -> "LabeledGraph":
        keep = set(vertices)
        labels = {v: lab for v, lab in self.labels.items() if v in keep}
        return LabeledGraph(labels, frozenset(e for e in self.edges if e <= keep))

    def components(self) -> int:
        adj = self.adjacency()
        seen: set[str] = set()
        count = 0
        for start in adj:
            if start in seen:
                continue
            count += 1
            seen.add(start)
            todo = [start]
            while todo:
                for w in adj[todo.pop()]:
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
        return count

    @classmethod
    def from_edges(cls, labels: dict, edges: Iterable[tuple[str, str]]) -> "LabeledGraph":
        es = set()
        for u, v in edges:
            if u == v:
                raise ExprError(f"self-loop at {u!r}")
            if u not in labels or v not in labels:
                raise ExprError(f"edge {u}-{v} has an unknown endpoint")
            es.add(frozenset((u, v)))
        return cls(dict(labels), frozenset(es))


def graphs_equal(g1: LabeledGraph, g2: LabeledGraph) -> bool:
    """Identity-level equality: same vertex names, labels and edges."""
    return g1.labels == g2.labels and g1.edges == g2.edges


def _put(groups: dict, label: int, vertices: list):
    """Add ``vertices`` to ``groups[label]``, extending the larger list."""
    cur = groups.get(label)
    if cur is None:
        groups[label] = vertices
    elif len(cur) >= len(vertices):
        cur.extend(vertices)
    else:
        vertices.extend(cur)
        groups[label] = vertices


def _merge(a: dict, b: dict) -> dict:
    if len(a) < len(b):
        a, b = b, a
    for label, vs in b.items():
        _put(a, label, vs)
    return a


def _relabel(groups: dict, f) -> dict:
    out: dict = {}
    for label, vs in groups.items():
        _put(out, f(label), vs)
    return out


def _result(order: list[str], groups: dict, edges: set) -> LabeledGraph:
    final = {v: label for label, vs in groups.items() for v in vs}
    return LabeledGraph({v: final[v] for v in order}, frozenset(edges))


# Subtrees are carried as {label: [vertices]} and merged small-into-large, so
# evaluation costs O(n log n) plus the edges, whatever the tree shape.

def eval_slick(expr: SlickExpr) -> LabeledGraph:
    edges: set = set()
    order: list[str] = []
    stack: list[dict] = []
    for node in postorder(expr.root):
        if isinstance(node, Atom):
            order.append(node.vertex)
            stack.append({node.label: [node.vertex]})
            continue
        right = stack.pop()
        left = stack.pop()
        for i, j in node.S:
            for u in left.get(i, ()):
                for w in right.get(j, ()):
                    edges.add(frozenset((u, w)))
        if node.L.pairs:
            left = _relabel(left, node.L)
        if node.R.pairs:
            right = _relabel(right, node.R)
        stack.append(_merge(left, right))
    return _result(order, stack[0], edges)


def eval_classic(expr: ClassicExpr) -> LabeledGraph:
    edges: set = set()
    order: list[str] = []
    stack: list[dict] = []
    for node in postorder(expr.root):
        if isinstance(node, Atom):
            order.append(node.vertex)
            stack.append({node.label: [node.vertex]})
        elif isinstance(node, Union):
            right = stack.pop()
            stack[-1] = _merge(stack[-1], right)
        elif isinstance(node, Eta):
            groups = stack[-1]
            for u in groups.get(node.i, ()):
                for w in groups.get(node.j, ()):
                    edges.add(frozenset((u, w)))
        else:
            groups = stack[-1]
            moved = groups.pop(node.i, None)
            if moved is not None:
                _put(groups, node.j, moved)
    return _result(order, stack[0], edges)


def evaluate(expr: SlickExpr | ClassicExpr) -> LabeledGraph:
    if isinstance(expr, SlickExpr):
        return eval_slick(expr)
    return eval_classic(expr)


def depth(expr: SlickExpr | ClassicExpr) -> int:
    heights: list[int] = []
    for node in postorder(expr.root):
        arity = len(children(node))
        if arity == 0:
            heights.append(0)
        elif arity == 1:
            heights[-1] += 1
        else:
            b = heights.pop()
            heights[-1] = 1 + max(heights[-1], b)
    return heights[0]


def node_count(expr: SlickExpr | ClassicExpr) -> int:
    return sum(1 for _ in postorder(expr.root))
