"""Point sets in S^n.

A point is a tuple of element indices. Sets are stored as sorted arrays of
mixed-radix keys (base ``|S|``), which is also the lexicographic order of the
points. Besides explicit :class:`PointSet` there are two implicit domains,
:class:`FullSpace` (all of S^n) and :class:`MsemSpace` (x1 = x2 or x3 = x4),
used where materialising the set would be wasteful.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, InputFormatError

__all__ = ["PointSet", "FullSpace", "MsemSpace", "encode", "decode", "grid"]

DEFAULT_MATERIALIZE = 5_000_000


def encode(rows: np.ndarray, base: int) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    keys = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(rows.shape[1]):
        keys = keys * base + rows[:, j]
    return keys


def decode(keys: np.ndarray, base: int, arity: int) -> np.ndarray:
    keys = np.asarray(keys, dtype=np.int64)
    out = np.empty((keys.shape[0], arity), dtype=np.int64)
    rest = keys.copy()
    for j in range(arity - 1, -1, -1):
        rest, out[:, j] = np.divmod(rest, base)
    return out


def grid(base: int, arity: int, budget: int | None = None) -> np.ndarray:
    """All of S^n as rows, in lexicographic order."""
    size = base**arity
    if budget is not None and size > budget:
        raise BudgetExceeded(f"enumerating |S|^n = {base}^{arity}", size, budget)
    return decode(np.arange(size, dtype=np.int64), base, arity)


class _Domain:
    arity: int
    base: int

    def __len__(self) -> int:
        return self.size

    def first_difference(self, target: Sequence[int], rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """For each row: the first coordinate (1-based) differing from ``target`` and its value."""
        diff = rows != np.asarray(target, dtype=np.int64)[None, :]
        c = diff.argmax(axis=1)
        return c + 1, rows[np.arange(rows.shape[0]), c]

    def select(self, target: Sequence[int], groups: Iterable[tuple[int, int]]) -> "PointSet":
        """Points of this domain whose first difference from ``target`` is one of ``groups``."""
        rows = self.rows()
        keep = np.zeros(rows.shape[0], dtype=bool)
        if rows.shape[0]:
            differs = (rows != np.asarray(target)[None, :]).any(axis=1)
            c, v = self.first_difference(target, rows)
            wanted = {(int(a), int(b)) for a, b in groups}
            pairs = c * self.base + v
            codes = np.array([a * self.base + b for a, b in wanted], dtype=np.int64)
            keep = differs & np.isin(pairs, codes)
        return PointSet.from_rows(rows[keep], self.base, self.arity)

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(f"{type(self).__name__}:{self.base}:{self.arity}:".encode())
        h.update(self._digest_payload())
        return h.hexdigest()


class PointSet(_Domain):
    """Explicit finite set of points with fixed arity."""

    def __init__(self, keys: np.ndarray, base: int, arity: int):
        self.keys = np.unique(np.asarray(keys, dtype=np.int64))
        self.keys.setflags(write=False)
        self.base = int(base)
        self.arity = int(arity)

    @classmethod
    def from_rows(cls, rows, base: int, arity: int | None = None) -> "PointSet":
        rows = np.asarray(rows, dtype=np.int64)
        if rows.size == 0:
            if arity is None:
                raise InputFormatError("cannot infer arity of an empty point set")
            return cls(np.zeros(0, dtype=np.int64), base, arity)
        if rows.ndim != 2:
            raise InputFormatError("points must all have the same arity")
        if arity is not None and rows.shape[1] != arity:
            raise InputFormatError(f"points have arity {rows.shape[1]}, expected {arity}")
        if rows.min() < 0 or rows.max() >= base:
            raise InputFormatError("point coordinate outside the carrier")
        return cls(encode(rows, base), base, rows.shape[1])

    @classmethod
    def from_points(cls, points: Iterable[Sequence[int]], base: int, arity: int | None = None) -> "PointSet":
        pts = [tuple(int(v) for v in p) for p in points]
        if pts and len({len(p) for p in pts}) != 1:
            raise InputFormatError("points must all have the same arity")
        rows = np.array(pts, dtype=np.int64).reshape(len(pts), len(pts[0]) if pts else (arity or 0))
        return cls.from_rows(rows, base, arity)

    @property
    def size(self) -> int:
        return int(self.keys.shape[0])

    def rows(self, limit: int | None = None) -> np.ndarray:
        return decode(self.keys, self.base, self.arity)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for row in self.rows().tolist():
            yield tuple(row)

    def __contains__(self, point) -> bool:
        point = tuple(point)
        if len(point) != self.arity:
            return False
        key = encode(np.array([point]), self.base)[0]
        pos = np.searchsorted(self.keys, key)
        return bool(pos < self.size and self.keys[pos] == key)

    def __eq__(self, other) -> bool:
        if isinstance(other, _Domain) and not isinstance(other, PointSet):
            other = other.materialize()
        if not isinstance(other, PointSet):
            return NotImplemented
        return (self.arity, self.base) == (other.arity, other.base) and np.array_equal(self.keys, other.keys)

    __hash__ = None

    def __repr__(self) -> str:
        return f"PointSet(size={self.size}, arity={self.arity}, base={self.base})"

    def _same_space(self, other: "PointSet") -> None:
        if (self.arity, self.base) != (other.arity, other.base):
            raise InputFormatError("point sets live in different spaces")

    def union(self, other: "PointSet") -> "PointSet":
        self._same_space(other)
        return PointSet(np.union1d(self.keys, other.keys), self.base, self.arity)

    __or__ = union

    def difference(self, other: "PointSet") -> "PointSet":
        self._same_space(other)
        return PointSet(np.setdiff1d(self.keys, other.keys), self.base, self.arity)

    __sub__ = difference

    def complement(self) -> "PointSet":
        full = np.arange(self.base**self.arity, dtype=np.int64)
        return PointSet(np.setdiff1d(full, self.keys, assume_unique=True), self.base, self.arity)

    def issubset(self, other: "PointSet") -> bool:
        return bool(np.isin(self.keys, other.keys).all())

    def materialize(self, budget: int | None = None) -> "PointSet":
        return self

    def leaf_groups(self, target: Sequence[int]) -> list[tuple[int, int]]:
        rows = self.rows()
        differs = (rows != np.asarray(target)[None, :]).any(axis=1)
        c, v = self.first_difference(target, rows[differs])
        pairs = np.unique(c * self.base + v)
        return [(int(p // self.base), int(p % self.base)) for p in pairs]

    def sample(self, k: int, rng: np.random.Generator, exclude: Sequence[int] | None = None) -> np.ndarray:
        keys = self.keys
        if exclude is not None:
            ex = encode(np.array([tuple(exclude)]), self.base)[0]
            keys = keys[keys != ex]
        k = min(k, keys.shape[0])
        chosen = np.sort(rng.choice(keys, size=k, replace=False))
        return decode(chosen, self.base, self.arity)

    def _digest_payload(self) -> bytes:
        return self.keys.astype("<i8").tobytes()


class FullSpace(_Domain):
    """All of S^n."""

    def __init__(self, base: int, arity: int):
        self.base = int(base)
        self.arity = int(arity)

    @property
    def size(self) -> int:
        return self.base**self.arity

    def __contains__(self, point) -> bool:
        point = tuple(point)
        return len(point) == self.arity and all(0 <= p < self.base for p in point)

    def __repr__(self) -> str:
        return f"FullSpace(base={self.base}, arity={self.arity})"

    def rows(self, budget: int = DEFAULT_MATERIALIZE) -> np.ndarray:
        return grid(self.base, self.arity, budget)

    def materialize(self, budget: int = DEFAULT_MATERIALIZE) -> PointSet:
        if self.size > budget:
            _too_big(self, budget)
        return PointSet(np.arange(self.size, dtype=np.int64), self.base, self.arity)

    def leaf_groups(self, target: Sequence[int]) -> list[tuple[int, int]]:
        return [(c, v) for c in range(1, self.arity + 1) for v in range(self.base) if v != target[c - 1]]

    def sample(self, k: int, rng: np.random.Generator, exclude: Sequence[int] | None = None) -> np.ndarray:
        rows = rng.integers(0, self.base, size=(k, self.arity), dtype=np.int64)
        if exclude is not None:
            bad = (rows == np.asarray(exclude)[None, :]).all(axis=1)
            while bad.any():
                rows[bad] = rng.integers(0, self.base, size=(int(bad.sum()), self.arity), dtype=np.int64)
                bad = (rows == np.asarray(exclude)[None, :]).all(axis=1)
        return rows

    def _digest_payload(self) -> bytes:
        return b"all"


class MsemSpace(_Domain):
    """{(x1, x2, x3, x4) : x1 = x2 or x3 = x4}, optionally with extra points added."""

    arity = 4

    def __init__(self, base: int, extra: Iterable[Sequence[int]] = ()):
        self.base = int(base)
        self.extra = tuple(sorted({tuple(int(v) for v in p) for p in extra if not self.in_msem(p)}))

    @staticmethod
    def in_msem(p: Sequence[int]) -> bool:
        return p[0] == p[1] or p[2] == p[3]

    @property
    def msem_size(self) -> int:
        s = self.base
        return 2 * s**3 - s**2

    @property
    def size(self) -> int:
        return self.msem_size + len(self.extra)

    def __contains__(self, point) -> bool:
        point = tuple(point)
        return len(point) == 4 and all(0 <= p < self.base for p in point) and (
            self.in_msem(point) or point in self.extra
        )

    def __repr__(self) -> str:
        return f"MsemSpace(base={self.base}, extra={len(self.extra)})"

    def rows(self, budget: int = DEFAULT_MATERIALIZE) -> np.ndarray:
        if self.size > budget:
            _too_big(self, budget)
        s = self.base
        a = np.arange(s, dtype=np.int64)
        # x1 = x2 block and x3 = x4 block, merged as keys
        x, y, z = np.meshgrid(a, a, a, indexing="ij")
        x, y, z = x.ravel(), y.ravel(), z.ravel()
        first = ((x * s + x) * s + y) * s + z
        second = ((x * s + y) * s + z) * s + z
        keys = np.union1d(first, second)
        if self.extra:
            keys = np.union1d(keys, encode(np.array(self.extra), s))
        return decode(keys, s, 4)

    def materialize(self, budget: int = DEFAULT_MATERIALIZE) -> PointSet:
        return PointSet(encode(self.rows(budget), self.base), self.base, 4)

    def _completable(self, prefix: tuple[int, ...]) -> bool:
        k = len(prefix)
        left = k < 2 or prefix[0] == prefix[1]
        right = k < 4 or prefix[2] == prefix[3]
        return left or right

    def leaf_groups(self, target: Sequence[int]) -> list[tuple[int, int]]:
        target = tuple(int(v) for v in target)
        groups = set()
        for c in range(1, 5):
            for v in range(self.base):
                if v != target[c - 1] and self._completable(target[: c - 1] + (v,)):
                    groups.add((c, v))
        if self.extra:
            rows = np.array([p for p in self.extra if p != target], dtype=np.int64).reshape(-1, 4)
            if rows.shape[0]:
                cs, vs = self.first_difference(target, rows)
                groups.update(zip(cs.tolist(), vs.tolist()))
        return sorted(groups)

    def sample(self, k: int, rng: np.random.Generator, exclude: Sequence[int] | None = None) -> np.ndarray:
        """Uniform samples from M_sem (the extra points are not sampled)."""
        s = self.base
        out = np.empty((0, 4), dtype=np.int64)
        while out.shape[0] < k:
            m = 2 * (k - out.shape[0]) + 16
            x = rng.integers(0, s, size=(m, 3), dtype=np.int64)
            branch = rng.integers(0, 2, size=m).astype(bool)
            rows = np.where(
                branch[:, None],
                np.stack([x[:, 0], x[:, 0], x[:, 1], x[:, 2]], axis=1),
                np.stack([x[:, 0], x[:, 1], x[:, 2], x[:, 2]], axis=1),
            )
            # points in both branches are drawn twice as often; thin them by half
            both = (rows[:, 0] == rows[:, 1]) & (rows[:, 2] == rows[:, 3])
            keep = ~both | (rng.random(m) < 0.5)
            if exclude is not None:
                keep &= ~(rows == np.asarray(exclude)[None, :]).all(axis=1)
            out = np.concatenate([out, rows[keep]])
        return out[:k]

    def _digest_payload(self) -> bytes:
        return b"msem" + repr(self.extra).encode()


def _too_big(domain, budget: int):
    raise BudgetExceeded(f"materialising {domain!r}", domain.size, budget)
