"""Rees matrix semigroups, their identity-adjoined monoids, and Cayley-table semigroups.

A Rees element is a triple (lam, g, i) with lam in 1..|Lambda|, i in 1..|I|
and g a group element index. Products follow

    (lam, g, i)(mu, h, j) = (lam, g * p[i][mu] * h, j).

Triples are numbered by ``index = ((lam - 1) * |G| + g) * |I| + (i - 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import (
    IndexOutOfRange,
    InputFormatError,
    NonAssociative,
    NotAHomogroup,
    NotNormalized,
)
from .groups import FiniteGroup, _as_table, find_nonassociative, validate_group

__all__ = [
    "ReesElement",
    "SandwichMatrix",
    "ReesSemigroup",
    "StarSemigroup",
    "FiniteSemigroup",
    "ONE",
    "rees_mul",
    "is_nonsingular",
    "is_group_case",
    "adjoin_identity",
    "rees_to_table",
    "as_finite_semigroup",
    "center",
    "kernel",
    "kernel_group",
    "is_homogroup",
    "principal_ideal",
]


class ReesElement(NamedTuple):
    lam: int
    g: int
    i: int


class _One:
    """The adjoined identity of a star monoid."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "ONE"

    def __reduce__(self):
        return (_One, ())


ONE = _One()

Element = Union[ReesElement, _One]


@dataclass(frozen=True)
class SandwichMatrix:
    """|I| x |Lambda| array of group elements p[i][mu], stored 0-based."""

    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], group: FiniteGroup | None = None) -> "SandwichMatrix":
        entries = tuple(tuple(int(v) for v in row) for row in rows)
        if not entries or not entries[0]:
            raise InputFormatError("sandwich matrix must be nonempty")
        if any(len(r) != len(entries[0]) for r in entries):
            raise InputFormatError("sandwich matrix rows must have equal length")
        if group is not None:
            for r, row in enumerate(entries):
                for c, v in enumerate(row):
                    if not 0 <= v < group.order:
                        raise IndexOutOfRange(f"matrix entry ({r + 1}, {c + 1}) = {v} is not a group element")
        for r, row in enumerate(entries):
            for c, v in enumerate(row):
                if (r == 0 or c == 0) and v != 0:
                    raise NotNormalized(r + 1, c + 1)
        return cls(entries)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def p(self, i: int, mu: int) -> int:
        """Entry p_{i mu} with 1-based indices."""
        return self.entries[i - 1][mu - 1]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i - 1]

    def col(self, mu: int) -> tuple[int, ...]:
        return tuple(r[mu - 1] for r in self.entries)

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int32)


def _first_equal_pair(vectors: list[tuple[int, ...]]) -> tuple[int, int] | None:
    seen: dict[tuple[int, ...], int] = {}
    best = None
    for k, v in enumerate(vectors, start=1):
        if v in seen:
            pair = (seen[v], k)
            if best is None or pair < best:
                best = pair
        else:
            seen[v] = k
    return best


def is_nonsingular(matrix: SandwichMatrix) -> tuple[bool, tuple[str, int, int] | None]:
    """Return ``(True, None)`` or ``(False, (kind, idx1, idx2))`` for the first equal rows/columns.

    Rows are checked before columns; indices are 1-based.
    """
    rows = _first_equal_pair([matrix.row(i) for i in range(1, matrix.rows + 1)])
    if rows is not None:
        return False, ("row", *rows)
    cols = _first_equal_pair([matrix.col(m) for m in range(1, matrix.cols + 1)])
    if cols is not None:
        return False, ("column", *cols)
    return True, None


def equal_pairs(matrix: SandwichMatrix, kind: str) -> list[tuple[int, int]]:
    if kind == "row":
        vecs = [matrix.row(i) for i in range(1, matrix.rows + 1)]
    else:
        vecs = [matrix.col(m) for m in range(1, matrix.cols + 1)]
    return [(a + 1, b + 1) for a in range(len(vecs)) for b in range(a + 1, len(vecs)) if vecs[a] == vecs[b]]


class _Carrier:
    """Shared behaviour of finite structures that terms are evaluated in."""

    order: int

    @cached_property
    def cache(self) -> dict:
        # per-structure memo for constructed terms and grid evaluations
        return {}

    def elements(self) -> range:
        return range(self.order)


@dataclass(frozen=True, eq=False)
class ReesSemigroup(_Carrier):
    group: FiniteGroup
    matrix: SandwichMatrix

    def __post_init__(self):
        for r, row in enumerate(self.matrix.entries):
            for c, v in enumerate(row):
                if not 0 <= v < self.group.order:
                    raise IndexOutOfRange(f"matrix entry ({r + 1}, {c + 1}) = {v} is not a group element")
                if (r == 0 or c == 0) and v != 0:
                    raise NotNormalized(r + 1, c + 1)

    def __repr__(self) -> str:
        return f"ReesSemigroup(|G|={self.group.order}, |Lambda|={self.n_lambda}, |I|={self.n_i})"

    @property
    def n_lambda(self) -> int:
        return self.matrix.cols

    @property
    def n_i(self) -> int:
        return self.matrix.rows

    @property
    def order(self) -> int:
        return self.n_lambda * self.group.order * self.n_i

    def __len__(self) -> int:
        return self.order

    # -- triple <-> index -------------------------------------------------

    def index(self, e: ReesElement) -> int:
        lam, g, i = e
        self._check(lam, g, i)
        return ((lam - 1) * self.group.order + g) * self.n_i + (i - 1)

    def element(self, idx: int) -> ReesElement:
        if not 0 <= idx < self.order:
            raise IndexOutOfRange(f"element index {idx} outside [0, {self.order})")
        rest, i = divmod(idx, self.n_i)
        lam, g = divmod(rest, self.group.order)
        return ReesElement(lam + 1, g, i + 1)

    def _check(self, lam: int, g: int, i: int) -> None:
        if not (1 <= lam <= self.n_lambda and 0 <= g < self.group.order and 1 <= i <= self.n_i):
            raise IndexOutOfRange(f"({lam}, {g}, {i}) is not an element of {self!r}")

    def coerce(self, e) -> int:
        """Accept an index, a triple, or an element name and return the index."""
        if isinstance(e, str):
            return self.parse_element(e)
        if isinstance(e, tuple):
            return self.index(ReesElement(*e))
        e = int(e)
        if not 0 <= e < self.order:
            raise IndexOutOfRange(f"element index {e} outside [0, {self.order})")
        return e

    # -- Gamma = {(1, g, 1)} ------------------------------------------------

    def gamma(self, g: int) -> int:
        return self.index(ReesElement(1, g, 1))

    @property
    def gamma_identity(self) -> int:
        return self.gamma(0)

    def gamma_part(self, idx: int) -> int | None:
        """Group part of ``idx`` if it lies in Gamma, else None."""
        lam, g, i = self.element(idx)
        return g if lam == 1 and i == 1 else None

    @cached_property
    def gamma_indices(self) -> np.ndarray:
        return np.array([self.gamma(g) for g in range(self.group.order)], dtype=np.int64)

    @cached_property
    def gamma_lookup(self) -> np.ndarray:
        """Array mapping element index to its Gamma group part, or -1."""
        out = np.full(self.order, -1, dtype=np.int64)
        out[self.gamma_indices] = np.arange(self.group.order)
        return out

    # -- names --------------------------------------------------------------

    def name(self, idx: int) -> str:
        lam, g, i = self.element(idx)
        return f"({lam},{self.group.names[g]},{i})"

    def constant_text(self, idx: int) -> str:
        lam, g, i = self.element(idx)
        return f"[{lam},{self.group.names[g]},{i}]"

    def parse_element(self, text: str) -> int:
        t = text.strip()
        if len(t) < 2 or (t[0], t[-1]) not in {("(", ")"), ("[", "]")}:
            raise InputFormatError(f"cannot parse element {text!r}")
        body = t[1:-1]
        first, last = body.find(","), body.rfind(",")
        if first < 0 or first == last:
            raise InputFormatError(f"cannot parse element {text!r}")
        try:
            lam = int(body[:first])
            i = int(body[last + 1:])
        except ValueError:
            raise InputFormatError(f"cannot parse element {text!r}") from None
        g = self.group.index(body[first + 1:last].strip())
        return self.index(ReesElement(lam, g, i))

    # -- multiplication -----------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def table(self) -> np.ndarray:
        n = self.order
        idx = np.arange(n)
        rest, i = np.divmod(idx, self.n_i)
        lam, g = np.divmod(rest, self.group.order)
        p = self.matrix.as_array()
        gt = self.group.table
        sandwich = p[i[:, None], lam[None, :]]
        gp = gt[gt[g[:, None], sandwich], g[None, :]]
        out = ((lam[:, None] * self.group.order + gp) * self.n_i + i[None, :]).astype(np.int32)
        out.setflags(write=False)
        return out


def rees_mul(S: ReesSemigroup, a: ReesElement, b: ReesElement) -> ReesElement:
    """Multiply two triples directly from the defining formula."""
    a, b = ReesElement(*a), ReesElement(*b)
    S._check(*a)
    S._check(*b)
    G = S.group
    g = G.mul(G.mul(a.g, S.matrix.p(a.i, b.lam)), b.g)
    return ReesElement(a.lam, g, b.i)


def is_group_case(S: ReesSemigroup) -> bool:
    return S.n_lambda == 1 and S.n_i == 1


@dataclass(frozen=True, eq=False)
class StarSemigroup(_Carrier):
    """A Rees semigroup with an identity ``ONE`` adjoined at index ``base.order``."""

    base: ReesSemigroup

    def __repr__(self) -> str:
        return f"StarSemigroup({self.base!r})"

    @property
    def order(self) -> int:
        return self.base.order + 1

    def __len__(self) -> int:
        return self.order

    @property
    def group(self) -> FiniteGroup:
        return self.base.group

    @property
    def matrix(self) -> SandwichMatrix:
        return self.base.matrix

    @property
    def one(self) -> int:
        return self.base.order

    def index(self, e: Element) -> int:
        if e is ONE:
            return self.one
        return self.base.index(e)

    def element(self, idx: int) -> Element:
        if idx == self.one:
            return ONE
        return self.base.element(idx)

    def coerce(self, e) -> int:
        if e is ONE:
            return self.one
        if isinstance(e, str):
            return self.parse_element(e)
        if isinstance(e, tuple):
            return self.base.index(ReesElement(*e))
        e = int(e)
        if not 0 <= e < self.order:
            raise IndexOutOfRange(f"element index {e} outside [0, {self.order})")
        return e

    def gamma(self, g: int) -> int:
        return self.base.gamma(g)

    @property
    def gamma_identity(self) -> int:
        return self.base.gamma_identity

    def gamma_part(self, idx: int) -> int | None:
        if idx == self.one:
            return None
        return self.base.gamma_part(idx)

    @cached_property
    def gamma_indices(self) -> np.ndarray:
        return self.base.gamma_indices

    @cached_property
    def gamma_lookup(self) -> np.ndarray:
        return np.append(self.base.gamma_lookup, -1)

    def name(self, idx: int) -> str:
        return "one" if idx == self.one else self.base.name(idx)

    def constant_text(self, idx: int) -> str:
        return "one" if idx == self.one else self.base.constant_text(idx)

    def parse_element(self, text: str) -> int:
        if text.strip() in ("one", "𝟙"):
            return self.one
        return self.base.parse_element(text)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    @cached_property
    def table(self) -> np.ndarray:
        n = self.base.order
        out = np.empty((n + 1, n + 1), dtype=np.int32)
        out[:n, :n] = self.base.table
        out[n, :] = np.arange(n + 1)
        out[:, n] = np.arange(n + 1)
        out.setflags(write=False)
        return out


def adjoin_identity(S: ReesSemigroup) -> StarSemigroup:
    return StarSemigroup(S)


@dataclass(frozen=True, eq=False)
class FiniteSemigroup(_Carrier):
    table: np.ndarray
    names: tuple[str, ...]

    @classmethod
    def from_table(cls, table, names: Sequence[str] | None = None, check: bool = True) -> "FiniteSemigroup":
        arr = _as_table(table)
        if check:
            triple = find_nonassociative(arr)
            if triple is not None:
                raise NonAssociative(*triple)
        n = arr.shape[0]
        names = tuple(str(s) for s in (names if names is not None else range(n)))
        if len(names) != n or len(set(names)) != n:
            raise InputFormatError("names must be distinct and one per element")
        arr.setflags(write=False)
        return cls(arr, names)

    def __repr__(self) -> str:
        return f"FiniteSemigroup(order={self.order})"

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self) -> int:
        return self.order

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def name(self, idx: int) -> str:
        return self.names[idx]

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InputFormatError(f"unknown element {name!r}") from None


def rees_to_table(S: ReesSemigroup | StarSemigroup) -> FiniteSemigroup:
    names = [S.name(k) for k in range(S.order)]
    return FiniteSemigroup(S.table, tuple(names))


def as_finite_semigroup(S) -> FiniteSemigroup:
    if isinstance(S, FiniteSemigroup):
        return S
    if isinstance(S, FiniteGroup):
        return FiniteSemigroup(S.table, S.names)
    return rees_to_table(S)


def center(S) -> frozenset[int]:
    T = as_finite_semigroup(S).table
    return frozenset(np.flatnonzero((T == T.T).all(axis=1)).tolist())


def principal_ideal(S, a: int, side: str) -> frozenset[int]:
    """S^1 a (left), a S^1 (right) or S^1 a S^1 (two-sided)."""
    T = as_finite_semigroup(S).table
    if side == "left":
        members = set(T[:, a].tolist())
    elif side == "right":
        members = set(T[a, :].tolist())
    elif side == "two-sided":
        left = np.unique(T[:, a])
        members = set(T[np.append(left, a)].ravel().tolist()) | set(left.tolist())
        members |= set(T[a, :].tolist())
    else:
        raise ValueError(f"unknown side {side!r}")
    members.add(a)
    return frozenset(members)


def kernel(S) -> frozenset[int]:
    """Minimal two-sided ideal: the intersection of all principal ideals S^1 a S^1."""
    F = as_finite_semigroup(S)
    out: set[int] | None = None
    for a in range(F.order):
        ideal = principal_ideal(F, a, "two-sided")
        out = set(ideal) if out is None else out & ideal
    return frozenset(out)


def kernel_group(S) -> tuple[FiniteGroup, list[int]] | None:
    """Restrict the table to the kernel and validate it as a group.

    Returns the group (identity moved to index 0) and the list mapping group
    indices back to semigroup elements, or None if the kernel is not a group.
    """
    F = as_finite_semigroup(S)
    members = sorted(kernel(F))
    pos = {m: k for k, m in enumerate(members)}
    sub = np.array([[pos[int(F.table[a, b])] for b in members] for a in members], dtype=np.int32)
    try:
        grp = validate_group(sub, [F.name(m) for m in members], reindex=True)
    except ValueError:
        return None
    by_name = {F.name(m): m for m in members}
    return grp, [by_name[n] for n in grp.names]


def is_homogroup(S) -> bool:
    return kernel_group(S) is not None


def kernel_identity(S) -> int:
    found = kernel_group(S)
    if found is None:
        raise NotAHomogroup("kernel is not a group")
    return found[1][0]
