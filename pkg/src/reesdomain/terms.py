"""Terms as hash-consed DAGs, their text syntax, and vectorised evaluation.

Nodes are ``Var(k)`` (1-based), ``Const(s)`` (a carrier element index),
``Concat(children)`` and ``Power(child, k)``. Structurally equal nodes are
the same object, so ``==`` is identity and shared subterms are shared.

Text grammar (single pass, whitespace separates atoms)::

    term   := factor+
    factor := atom ("^" INT)?
    atom   := "x" INT | "[" lam "," name "," i "]" | "one" | "(" term ")" | "@" INT

``@k`` refers to the k-th entry of a shared-definition list (see
:func:`render_shared`).
"""

from __future__ import annotations

import weakref
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ArityMismatch,
    IndexOutOfRange,
    InputFormatError,
    TermSyntaxError,
    UnknownConstant,
    VariableIndexOutOfRange,
)

__all__ = [
    "Term",
    "Var",
    "Const",
    "Concat",
    "Power",
    "concat",
    "power",
    "atoms",
    "flat_length",
    "node_count",
    "parse_term",
    "render_term",
    "render_shared",
    "Evaluator",
    "eval_term",
]

_INTERN: "weakref.WeakValueDictionary[tuple, Term]" = weakref.WeakValueDictionary()


class Term:
    __slots__ = ("_key", "support", "flat_len", "first", "last", "__weakref__")

    def __repr__(self) -> str:
        return f"{type(self).__name__}{self._key[1:]}"

    def __reduce__(self):
        return (type(self), self._key[1:])

    @property
    def children(self) -> tuple["Term", ...]:
        return ()

    @property
    def arity(self) -> int:
        """Largest variable index used (0 for constant terms)."""
        return self.support[-1] if self.support else 0


def _intern(cls, key):
    node = _INTERN.get(key)
    if node is None:
        node = object.__new__(cls)
        node._key = key
        _INTERN[key] = node
        return node, True
    return node, False


class Var(Term):
    __slots__ = ()

    def __new__(cls, k: int):
        k = int(k)
        if k < 1:
            raise VariableIndexOutOfRange(f"variable index {k} must be >= 1")
        node, fresh = _intern(cls, ("var", k))
        if fresh:
            node.support = (k,)
            node.flat_len = 1
            node.first = node.last = node
        return node

    @property
    def k(self) -> int:
        return self._key[1]


class Const(Term):
    __slots__ = ()

    def __new__(cls, s: int):
        s = int(s)
        if s < 0:
            raise IndexOutOfRange(f"constant index {s} must be >= 0")
        node, fresh = _intern(cls, ("const", s))
        if fresh:
            node.support = ()
            node.flat_len = 1
            node.first = node.last = node
        return node

    @property
    def s(self) -> int:
        return self._key[1]


class Concat(Term):
    __slots__ = ("_children",)

    def __new__(cls, *children: Term):
        if len(children) == 1 and not isinstance(children[0], Term):
            children = tuple(children[0])
        if not children:
            raise ValueError("Concat needs at least one child")
        for c in children:
            if not isinstance(c, Term):
                raise TypeError(f"not a term: {c!r}")
        node, fresh = _intern(cls, ("concat",) + tuple(id(c) for c in children))
        if fresh:
            node._children = tuple(children)
            node.support = tuple(sorted(set().union(*(c.support for c in children))))
            node.flat_len = sum(c.flat_len for c in children)
            node.first = children[0].first
            node.last = children[-1].last
        return node

    def __repr__(self) -> str:
        return f"Concat{self._children!r}"

    def __reduce__(self):
        return (Concat, self._children)

    @property
    def children(self) -> tuple[Term, ...]:
        return self._children


class Power(Term):
    __slots__ = ("_child",)

    def __new__(cls, child: Term, exponent: int):
        exponent = int(exponent)
        if exponent < 1:
            raise ValueError("Power exponent must be >= 1")
        if not isinstance(child, Term):
            raise TypeError(f"not a term: {child!r}")
        node, fresh = _intern(cls, ("power", id(child), exponent))
        if fresh:
            node._child = child
            node.support = child.support
            node.flat_len = child.flat_len * exponent
            node.first = child.first
            node.last = child.last
        return node

    def __repr__(self) -> str:
        return f"Power({self._child!r}, {self.exponent})"

    def __reduce__(self):
        return (Power, (self._child, self.exponent))

    @property
    def child(self) -> Term:
        return self._child

    @property
    def exponent(self) -> int:
        return self._key[2]

    @property
    def children(self) -> tuple[Term, ...]:
        return (self._child,)


def concat(*terms: Term) -> Term:
    return terms[0] if len(terms) == 1 else Concat(*terms)


def power(t: Term, k: int) -> Term:
    return t if k == 1 else Power(t, k)


def _postorder(root: Term) -> list[Term]:
    order: list[Term] = []
    seen: set[int] = set()
    stack: list[tuple[Term, bool]] = [(root, False)]
    while stack:
        node, done = stack.pop()
        if done:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for c in reversed(node.children):
            if id(c) not in seen:
                stack.append((c, False))
    return order


def node_count(t: Term) -> int:
    return len(_postorder(t))


def flat_length(t: Term) -> int:
    """Number of atoms in the fully expanded product (may be astronomically large)."""
    return t.flat_len


def atoms(t: Term, limit: int = 1_000_000) -> list[Term]:
    """Expand to the flat list of Var/Const atoms; refuses expansions longer than ``limit``."""
    if t.flat_len > limit:
        from .errors import BudgetExceeded

        raise BudgetExceeded("flattened term length", t.flat_len, limit)
    out: list[Term] = []
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, (Var, Const)):
            out.append(node)
        elif isinstance(node, Power):
            stack.extend([node.child] * node.exponent)
        else:
            stack.extend(reversed(node.children))
    return out


# -- parsing -------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str, num_vars: int | None, S, shared: Sequence[Term]):
        self.text = text
        self.pos = 0
        self.num_vars = num_vars
        self.S = S
        self.shared = shared

    def error(self, msg: str, pos: int | None = None):
        raise TermSyntaxError(msg, self.text, self.pos if pos is None else pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def parse(self) -> Term:
        t = self.term()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("unexpected character")
        return t

    def term(self) -> Term:
        factors = []
        while True:
            self.skip_ws()
            if self.peek() in ("", ")"):
                break
            factors.append(self.factor())
        if not factors:
            self.error("expected a term")
        return concat(*factors)

    def factor(self) -> Term:
        node = self.atom()
        if self.peek() == "^":
            self.pos += 1
            k = self.integer()
            if k < 1:
                self.error("exponent must be >= 1", self.pos - 1)
            node = power(node, k)
        return node

    def atom(self) -> Term:
        start = self.pos
        ch = self.peek()
        if ch == "x":
            self.pos += 1
            k = self.integer()
            if k < 1 or (self.num_vars is not None and k > self.num_vars):
                raise VariableIndexOutOfRange(
                    f"variable x{k} at position {start} outside x1..x{self.num_vars}"
                )
            return Var(k)
        if ch == "[":
            end = self.text.find("]", self.pos)
            if end < 0:
                self.error("unterminated constant")
            self.pos = end + 1
            return Const(self._constant(self.text[start:end + 1], start))
        if ch == "(":
            self.pos += 1
            inner = self.term()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return inner
        if ch == "@":
            self.pos += 1
            k = self.integer()
            if k >= len(self.shared):
                self.error(f"undefined shared term @{k}", start)
            return self.shared[k]
        if self.text.startswith("one", self.pos) or ch == "𝟙":
            self.pos += 1 if ch == "𝟙" else 3
            return Const(self._constant("one", start))
        self.error("unexpected character")

    def _constant(self, text: str, pos: int) -> int:
        if self.S is None:
            raise UnknownConstant(f"constant {text!r} at position {pos} needs a semigroup")
        try:
            return self.S.parse_element(text)
        except (InputFormatError, IndexOutOfRange, AttributeError) as exc:
            raise UnknownConstant(f"unknown constant {text!r} at position {pos}: {exc}") from None


def parse_term(text: str, num_vars: int | None = None, S=None, shared: Sequence[Term] = ()) -> Term:
    return _Parser(text, num_vars, S, shared).parse()


def _render(t: Term, S, refs: dict[int, int], root: bool) -> str:
    if not root and id(t) in refs:
        return f"@{refs[id(t)]}"
    if isinstance(t, Var):
        return f"x{t.k}"
    if isinstance(t, Const):
        return S.constant_text(t.s) if S is not None else f"<{t.s}>"
    if isinstance(t, Power):
        inner = _render(t.child, S, refs, False)
        if not (isinstance(t.child, (Var, Const)) or (id(t.child) in refs)):
            inner = f"({inner})"
        return f"{inner}^{t.exponent}"
    return " ".join(_render(c, S, refs, False) for c in t.children)


def render_term(t: Term, S=None) -> str:
    """Fully expanded text; the size follows the tree, not the DAG."""
    return _render(t, S, {}, True)


def render_shared(roots: Iterable[Term], S=None) -> tuple[list[str], list[str]]:
    """Render several terms with every repeated composite node factored out.

    Returns ``(shared, texts)`` where ``shared[k]`` defines ``@k`` (entries only
    refer to earlier ones) and ``texts`` are the root renderings.
    """
    roots = list(roots)
    counts: dict[int, int] = {}
    nodes: dict[int, Term] = {}
    for r in roots:
        for node in _postorder(r):
            nodes[id(node)] = node
    for node in nodes.values():
        for c in node.children:
            counts[id(c)] = counts.get(id(c), 0) + 1
    for r in roots:
        counts[id(r)] = counts.get(id(r), 0) + 1

    order: list[Term] = []
    seen: set[int] = set()
    for r in roots:
        for node in _postorder(r):
            if id(node) in seen:
                continue
            seen.add(id(node))
            if isinstance(node, (Concat, Power)) and counts.get(id(node), 0) > 1:
                order.append(node)
    refs = {id(node): k for k, node in enumerate(order)}
    shared = [_render(node, S, refs, True) for node in order]
    texts = [_render(r, S, refs, False) for r in roots]
    return shared, texts


# -- evaluation ----------------------------------------------------------------


class Evaluator:
    """Evaluate terms at a batch of points.

    Each node is evaluated only on the distinct projections of the batch onto
    the variables it mentions, so a subterm in one variable costs at most
    ``|S|`` table lookups however large the batch is. Results are memoised per
    node for the lifetime of the evaluator.
    """

    def __init__(self, S, points):
        self.S = S
        self.table = np.asarray(S.table)
        pts = np.asarray(points, dtype=np.int64)
        if pts.ndim == 1:
            pts = pts.reshape(1, -1) if pts.size else pts.reshape(0, 0)
        self.points = pts
        self.size, self.arity = pts.shape
        self._proj: dict[tuple[int, ...], tuple[np.ndarray, np.ndarray]] = {}
        self._lift: dict[tuple[tuple[int, ...], tuple[int, ...]], np.ndarray] = {}
        self._memo: dict[int, np.ndarray] = {}
        self._keep: list[Term] = []

    def _projection(self, support: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
        """(first-occurrence indices, inverse map) for the batch projected on ``support``."""
        hit = self._proj.get(support)
        if hit is not None:
            return hit
        if not support or self.size == 0:
            hit = (np.zeros(min(1, self.size), dtype=np.int64), np.zeros(self.size, dtype=np.int64))
        else:
            cols = self.points[:, [k - 1 for k in support]]
            base = self.S.order
            keys = np.zeros(self.size, dtype=np.int64)
            for j in range(cols.shape[1]):
                keys = keys * base + cols[:, j]
            _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
            hit = (first, inverse.reshape(-1))
        self._proj[support] = hit
        return hit

    def _lifted(self, child: Term, support: tuple[int, ...]) -> np.ndarray:
        vals = self._memo[id(child)]
        if child.support == support:
            return vals
        key = (child.support, support)
        idx = self._lift.get(key)
        if idx is None:
            rep, _ = self._projection(support)
            _, inv_child = self._projection(child.support)
            idx = inv_child[rep]
            self._lift[key] = idx
        return vals[idx]

    def _compute(self, node: Term) -> np.ndarray:
        T = self.table
        if isinstance(node, Var):
            rep, _ = self._projection(node.support)
            return self.points[rep, node.k - 1]
        if isinstance(node, Const):
            return np.full(min(1, self.size), node.s, dtype=np.int64)
        if isinstance(node, Power):
            base = self._memo[id(node.child)]
            k = node.exponent
            result = None
            while True:
                if k & 1:
                    result = base if result is None else T[result, base]
                k >>= 1
                if not k:
                    return result
                base = T[base, base]
        acc = None
        for c in node.children:
            vals = self._lifted(c, node.support)
            acc = vals if acc is None else T[acc, vals]
        return acc

    def _ensure(self, root: Term) -> None:
        if root.arity > self.arity:
            raise ArityMismatch(f"term uses x{root.arity} but points have arity {self.arity}")
        if id(root) in self._memo:
            return
        for node in _postorder(root):
            if id(node) not in self._memo:
                self._memo[id(node)] = self._compute(node)
                self._keep.append(node)

    def values(self, t: Term) -> np.ndarray:
        """Values of ``t`` at every point of the batch, as element indices."""
        self._ensure(t)
        vals = self._memo[id(t)]
        _, inverse = self._projection(t.support)
        return vals[inverse]


def eval_term(t: Term, point: Sequence[int], S) -> int:
    point = tuple(int(S.coerce(p)) if hasattr(S, "coerce") else int(p) for p in point)
    if t.arity > len(point):
        raise ArityMismatch(f"term uses x{t.arity} but the point has arity {len(point)}")
    seq = t.children if isinstance(t, Concat) else (t,)
    if all(isinstance(a, (Var, Const)) for a in seq):
        # flat word: walk the table directly
        T = S.table
        v = None
        for a in seq:
            x = point[a.k - 1] if isinstance(a, Var) else a.s
            v = x if v is None else int(T[v, x])
        return v
    return int(Evaluator(S, np.array([point], dtype=np.int64).reshape(1, len(point))).values(t)[0])
