"""Finite groups given by multiplication tables.

Elements are integer indices into the table; the identity is always index 0.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    IndexOutOfRange,
    InputFormatError,
    MissingInverse,
    NoIdentityAtZero,
    NonAssociative,
    NotAPermutation,
)

__all__ = [
    "FiniteGroup",
    "ZeroDivisorWitness",
    "validate_group",
    "group_from_permutations",
    "cyclic_group",
    "parse_cycles",
    "find_nonassociative",
    "zero_divisors",
    "is_group_ed",
]


def _as_table(table) -> np.ndarray:
    arr = np.asarray(table)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise InputFormatError("multiplication table must be a nonempty square array")
    if not np.issubdtype(arr.dtype, np.integer):
        raise InputFormatError("multiplication table entries must be integers")
    n = arr.shape[0]
    bad = np.argwhere((arr < 0) | (arr >= n))
    if len(bad):
        r, c = bad[0]
        raise IndexOutOfRange(f"table entry ({r}, {c}) = {arr[r, c]} outside [0, {n})")
    return arr.astype(np.int32)


def find_nonassociative(table: np.ndarray) -> tuple[int, int, int] | None:
    """Exhaustive associativity scan; return the first violating triple or None."""
    n = table.shape[0]
    for a in range(n):
        # (a*b)*c for all b, c against a*(b*c)
        left = table[table[a]]
        right = table[a][table]
        if not np.array_equal(left, right):
            b, c = np.argwhere(left != right)[0]
            return a, int(b), int(c)
    return None


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    table: np.ndarray
    names: tuple[str, ...]
    inverses: np.ndarray = field(repr=False)

    identity = 0

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup(order={self.order})"

    def _check(self, *xs: int) -> None:
        for x in xs:
            if not 0 <= x < self.order:
                raise IndexOutOfRange(f"group element {x} outside [0, {self.order})")

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputFormatError(f"unknown group element {name!r}") from None

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.table[a, b])

    def pow(self, a: int, k: int) -> int:
        self._check(a)
        if k < 0:
            raise ValueError("exponent must be nonnegative")
        result, base = 0, a
        while k:
            if k & 1:
                result = int(self.table[result, base])
            base = int(self.table[base, base])
            k >>= 1
        return result

    def inv(self, a: int) -> int:
        return self.pow(a, self.order - 1)

    def conjugate(self, y: int, g: int) -> int:
        """y^g = g y g^-1."""
        self._check(y, g)
        return int(self.table[self.table[g, y], self.inverses[g]])

    def commutator(self, a: int, b: int) -> int:
        """[a, b] = a^-1 b^-1 a b."""
        self._check(a, b)
        t, inv = self.table, self.inverses
        return int(t[t[t[inv[a], inv[b]], a], b])

    def conjugacy_class(self, y: int) -> frozenset[int]:
        self._check(y)
        return frozenset(self.conjugation_table()[y].tolist())

    def conjugation_table(self) -> np.ndarray:
        """Array c with c[y, g] = g y g^-1."""
        cached = self.__dict__.get("_conj")
        if cached is None:
            g = np.arange(self.order)
            cached = self.table[self.table[g[None, :], g[:, None]], self.inverses[None, :]]
            object.__setattr__(self, "_conj", cached)
        return cached

    def commutes(self) -> np.ndarray:
        """Boolean matrix: entry (a, b) is True iff ab = ba."""
        return self.table == self.table.T

    def is_abelian(self) -> bool:
        return bool(self.commutes().all())


@dataclass(frozen=True)
class ZeroDivisorWitness:
    x: int
    y: int

    def check(self, group: FiniteGroup) -> bool:
        if self.x == group.identity or self.y == group.identity:
            return False
        return all(
            group.commutator(self.x, group.conjugate(self.y, g)) == group.identity
            for g in range(group.order)
        )


def validate_group(table, names: Sequence[str] | None = None, reindex: bool = False) -> FiniteGroup:
    """Check the group axioms on a Cayley table and wrap it.

    With ``reindex=True`` a table whose identity is not element 0 is permuted
    so that it is; otherwise such a table is rejected.
    """
    arr = _as_table(table)
    n = arr.shape[0]
    if names is None:
        names = [str(i) for i in range(n)]
    names = tuple(str(s) for s in names)
    if len(names) != n or len(set(names)) != n:
        raise InputFormatError("names must be distinct and one per element")

    idx = np.arange(n)
    is_identity = [bool((arr[e] == idx).all() and (arr[:, e] == idx).all()) for e in range(n)]
    if not is_identity[0]:
        if not reindex or not any(is_identity):
            if not any(is_identity):
                raise NoIdentityAtZero()
            bad = np.flatnonzero((arr[0] != idx) | (arr[:, 0] != idx))
            raise NoIdentityAtZero(int(bad[0]))
        e = is_identity.index(True)
        perm = np.arange(n)
        perm[[0, e]] = perm[[e, 0]]
        # perm is an involution, so it is its own inverse
        arr = perm[arr[np.ix_(perm, perm)]].astype(np.int32)
        names = tuple(names[p] for p in perm)

    triple = find_nonassociative(arr)
    if triple is not None:
        raise NonAssociative(*triple)

    hits = arr == 0
    inverses = np.empty(n, dtype=np.int32)
    for x in range(n):
        ys = np.flatnonzero(hits[x])
        if len(ys) == 0:
            raise MissingInverse(x)
        inverses[x] = ys[0]

    arr.setflags(write=False)
    inverses.setflags(write=False)
    return FiniteGroup(arr, names, inverses)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int | None = None) -> tuple[int, ...]:
    """Parse 1-based cycle notation such as ``"(1 2 3)(4 5)"`` into 0-based images."""
    text = text.strip()
    cycles = []
    pos = 0
    for m in _CYCLE_RE.finditer(text):
        if text[pos:m.start()].strip():
            raise NotAPermutation(f"cannot parse cycle notation {text!r}")
        pos = m.end()
        body = m.group(1).replace(",", " ").split()
        try:
            cycles.append([int(p) - 1 for p in body])
        except ValueError:
            raise NotAPermutation(f"cannot parse cycle notation {text!r}") from None
    if text[pos:].strip():
        raise NotAPermutation(f"cannot parse cycle notation {text!r}")
    points = [p for c in cycles for p in c]
    if any(p < 0 for p in points) or len(points) != len(set(points)):
        raise NotAPermutation(f"cycles in {text!r} are not disjoint positive points")
    n = max(points, default=-1) + 1
    if degree is not None:
        if degree < n:
            raise NotAPermutation(f"{text!r} moves points beyond degree {degree}")
        n = degree
    images = list(range(n))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            images[a] = b
    return tuple(images)


def _cycle_name(perm: tuple[int, ...]) -> str:
    seen = set()
    parts = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cycle = [start]
        seen.add(start)
        j = perm[start]
        while j != start:
            cycle.append(j)
            seen.add(j)
            j = perm[j]
        parts.append("(" + " ".join(str(p + 1) for p in cycle) + ")")
    return "".join(parts) or "e"


def _normalize_perm(gen) -> tuple[int, ...]:
    if isinstance(gen, str):
        return parse_cycles(gen)
    try:
        images = [int(v) for v in gen]
    except (TypeError, ValueError):
        raise NotAPermutation(f"not a permutation: {gen!r}") from None
    n = len(images)
    if sorted(images) == list(range(n)):
        return tuple(images)
    if sorted(images) == list(range(1, n + 1)):
        return tuple(v - 1 for v in images)
    raise NotAPermutation(f"not a bijection of a finite set: {gen!r}")


def group_from_permutations(generators: Iterable) -> FiniteGroup:
    """Close a set of permutations under composition and return its table.

    Generators may be image sequences (0-based, or 1-based one-line notation)
    or cycle strings. Products compose right to left: (ab)(p) = a(b(p)).
    Element names are 1-based cycle notation, the identity is ``"e"``.
    """
    gens = [_normalize_perm(g) for g in generators]
    degree = max((len(g) for g in gens), default=0)
    padded = []
    for g in gens:
        if len(g) != degree:
            # cycle strings only mention moved points
            g = g + tuple(range(len(g), degree))
        padded.append(g)

    identity = tuple(range(degree))
    elements = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        p = queue.popleft()
        for g in padded:
            q = tuple(p[g[k]] for k in range(degree))
            if q not in index:
                index[q] = len(elements)
                elements.append(q)
                queue.append(q)

    n = len(elements)
    perms = np.array(elements, dtype=np.int64).reshape(n, degree)
    table = np.empty((n, n), dtype=np.int32)
    for a in range(n):
        composed = perms[a][perms] if degree else perms
        for b in range(n):
            table[a, b] = index[tuple(composed[b].tolist())]
    return validate_group(table, [_cycle_name(p) for p in elements])


def cyclic_group(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return validate_group((idx[:, None] + idx[None, :]) % n)


def zero_divisors(group: FiniteGroup) -> list[ZeroDivisorWitness]:
    """All pairs (x, y), x, y != 1, with x commuting with every conjugate of y."""
    commutes = group.commutes()
    conj = group.conjugation_table()
    out = []
    for y in range(1, group.order):
        cls = np.unique(conj[y])
        ok = commutes[:, cls].all(axis=1)
        for x in np.flatnonzero(ok[1:]) + 1:
            out.append(ZeroDivisorWitness(int(x), y))
    out.sort(key=lambda w: (w.x, w.y))
    return out


def is_group_ed(group: FiniteGroup) -> bool:
    return not zero_divisors(group)
