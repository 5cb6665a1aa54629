"""Equational-domain verdicts with re-checkable certificates."""

from __future__ import annotations

import hashlib
from dataclasses import asdict, dataclass, field
from typing import ClassVar

import numpy as np

from .errors import NotAHomogroup, VerificationError
from .groups import FiniteGroup, ZeroDivisorWitness, zero_divisors
from .semigroups import (
    ReesSemigroup,
    StarSemigroup,
    as_finite_semigroup,
    center,
    is_nonsingular,
    kernel,
    kernel_group,
    principal_ideal,
)

__all__ = [
    "EdCertificate",
    "PositiveSimple",
    "EqualRowsOrColumns",
    "GroupZeroDivisor",
    "CenterWitness",
    "IdealWitness",
    "HomogroupWitness",
    "SizeBound",
    "StarInherited",
    "decide_ed",
    "decide_ed_rees",
    "decide_ed_star",
    "decide_ed_table",
    "size_bound_check",
    "center_refutation",
    "ideal_refutation",
    "homogroup_refutation",
    "recheck",
]

ED, NOT_ED, UNKNOWN = "ED", "NotED", "Unknown"


def _digest(vec) -> str:
    return hashlib.sha256(",".join(map(str, vec)).encode()).hexdigest()[:16]


@dataclass(frozen=True)
class PositiveSimple:
    kind: ClassVar[str] = "PositiveSimple"
    row_digests: tuple[str, ...]
    column_digests: tuple[str, ...]
    zero_divisor_scan: str = "empty"
    trivial_group: bool = False


@dataclass(frozen=True)
class EqualRowsOrColumns:
    kind: ClassVar[str] = "EqualRowsOrColumns"
    which: str
    idx1: int
    idx2: int


@dataclass(frozen=True)
class GroupZeroDivisor:
    kind: ClassVar[str] = "GroupZeroDivisor"
    x: int
    y: int
    x_name: str = ""
    y_name: str = ""


@dataclass(frozen=True)
class CenterWitness:
    kind: ClassVar[str] = "CenterWitness"
    e: int
    a: int


@dataclass(frozen=True)
class IdealWitness:
    kind: ClassVar[str] = "IdealWitness"
    generator: int | None
    side: str
    e: int
    a: int


@dataclass(frozen=True)
class HomogroupWitness:
    kind: ClassVar[str] = "HomogroupWitness"
    e: int
    a: int


@dataclass(frozen=True)
class SizeBound:
    kind: ClassVar[str] = "SizeBound"
    clause: int
    satisfied: tuple[int, ...]


@dataclass(frozen=True)
class StarInherited:
    kind: ClassVar[str] = "StarInherited"
    base: "EdCertificate"


@dataclass(frozen=True)
class EdCertificate:
    verdict: str
    evidence: object
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        ev = self.evidence
        if isinstance(ev, StarInherited):
            payload = {"base": ev.base.to_dict()}
        elif ev is None:
            payload = {}
        else:
            payload = asdict(ev)
        return {
            "verdict": self.verdict,
            "evidence": {"kind": ev.kind if ev is not None else None, **payload},
            "notes": list(self.notes),
        }


def size_bound_check(S: ReesSemigroup) -> SizeBound | None:
    """Counting clauses forcing two equal rows or columns.

    The reported clause is the most specific satisfied one (5, then 3 and 4,
    then 1 and 2); ``satisfied`` lists them all.
    """
    g, lam, i = S.group.order, S.n_lambda, S.n_i
    clauses = {
        1: g ** (lam - 1) < i,
        2: g ** (i - 1) < lam,
        3: lam == 1 and i > 1,
        4: i == 1 and lam > 1,
        5: g == 1 and (i > 1 or lam > 1),
    }
    satisfied = tuple(k for k in sorted(clauses) if clauses[k])
    if not satisfied:
        return None
    clause = next(k for k in (5, 3, 4, 1, 2) if clauses[k])
    if is_nonsingular(S.matrix)[0]:
        raise VerificationError(f"size clause {clause} fired on a nonsingular matrix")
    return SizeBound(clause, satisfied)


def decide_ed_rees(S: ReesSemigroup) -> EdCertificate:
    """ED iff the sandwich matrix is nonsingular and the group has no zero-divisors."""
    ok, pair = is_nonsingular(S.matrix)
    notes = []
    if not ok:
        bound = size_bound_check(S)
        if bound is not None:
            notes.append(f"size clause {bound.clause} also applies")
        return EdCertificate(NOT_ED, EqualRowsOrColumns(*pair), tuple(notes))
    G = S.group
    witnesses = zero_divisors(G)
    if witnesses:
        w = witnesses[0]
        return EdCertificate(NOT_ED, GroupZeroDivisor(w.x, w.y, G.names[w.x], G.names[w.y]))
    rows = tuple(_digest(S.matrix.row(i)) for i in range(1, S.n_i + 1))
    cols = tuple(_digest(S.matrix.col(m)) for m in range(1, S.n_lambda + 1))
    trivial = G.order == 1
    if trivial:
        notes.append("trivial group: the zero-divisor condition holds vacuously")
    return EdCertificate(ED, PositiveSimple(rows, cols, "empty", trivial), tuple(notes))


def decide_ed_star(S: StarSemigroup) -> EdCertificate:
    """ED when the base is ED; otherwise Unknown (no converse is available)."""
    base = decide_ed_rees(S.base)
    if base.verdict == ED:
        return EdCertificate(ED, StarInherited(base))
    return EdCertificate(UNKNOWN, StarInherited(base), ("base semigroup is not an equational domain",))


def center_refutation(S) -> CenterWitness | None:
    """First (e, a) with e central and e a != a."""
    T = as_finite_semigroup(S).table
    idx = np.arange(T.shape[0])
    for e in sorted(center(S)):
        moved = np.flatnonzero(T[e] != idx)
        if len(moved):
            return CenterWitness(e, int(moved[0]))
    return None


def _ideal_hit(T: np.ndarray, commutes: np.ndarray, ideal: frozenset[int]) -> tuple[int, int] | None:
    members = np.array(sorted(ideal))
    for e in np.flatnonzero(commutes[:, members].all(axis=1)):
        moved = members[T[e, members] != members]
        if len(moved):
            return int(e), int(moved[0])
    return None


def ideal_refutation(S) -> IdealWitness | None:
    """Search S itself, then each principal left ideal S^1 a and right ideal a S^1."""
    F = as_finite_semigroup(S)
    T = F.table
    commutes = T == T.T
    candidates = [(None, "whole", frozenset(range(F.order)))]
    for g in range(F.order):
        candidates.append((g, "left", principal_ideal(F, g, "left")))
        candidates.append((g, "right", principal_ideal(F, g, "right")))
    for gen, side, ideal in candidates:
        hit = _ideal_hit(T, commutes, ideal)
        if hit is not None:
            return IdealWitness(gen, side, *hit)
    return None


def homogroup_refutation(S) -> HomogroupWitness | None:
    found = kernel_group(S)
    if found is None:
        raise NotAHomogroup("the kernel is not a group")
    F = as_finite_semigroup(S)
    K = kernel(F)
    if len(K) == F.order:
        return None
    e = found[1][0]
    a = min(set(range(F.order)) - K)
    return HomogroupWitness(e, a)


def decide_ed_table(S) -> EdCertificate:
    """Refutation-only verdict for an arbitrary finite semigroup."""
    F = as_finite_semigroup(S)
    if F.order == 1:
        return EdCertificate(UNKNOWN, None, ("trivial semigroup",))
    for refute in (center_refutation, ideal_refutation):
        w = refute(F)
        if w is not None:
            return EdCertificate(NOT_ED, w)
    if kernel_group(F) is not None:
        w = homogroup_refutation(F)
        if w is not None:
            return EdCertificate(NOT_ED, w)
    return EdCertificate(UNKNOWN, None, ("no center, ideal or homogroup witness found",))


def decide_ed(S) -> EdCertificate:
    if isinstance(S, StarSemigroup):
        return decide_ed_star(S)
    if isinstance(S, ReesSemigroup):
        return decide_ed_rees(S)
    if isinstance(S, FiniteGroup):
        w = zero_divisors(S)
        if w:
            return EdCertificate(NOT_ED, GroupZeroDivisor(w[0].x, w[0].y, S.names[w[0].x], S.names[w[0].y]))
        return EdCertificate(ED, None, ("group without zero-divisors",))
    return decide_ed_table(S)


def recheck(cert: EdCertificate, S) -> bool:
    """Re-validate a certificate's evidence by direct computation."""
    ev = cert.evidence
    if isinstance(ev, StarInherited):
        return recheck(ev.base, S.base if isinstance(S, StarSemigroup) else S)
    if isinstance(ev, EqualRowsOrColumns):
        P = S.matrix
        if ev.which == "row":
            return ev.idx1 != ev.idx2 and P.row(ev.idx1) == P.row(ev.idx2)
        return ev.idx1 != ev.idx2 and P.col(ev.idx1) == P.col(ev.idx2)
    if isinstance(ev, GroupZeroDivisor):
        G = S if isinstance(S, FiniteGroup) else S.group
        return ZeroDivisorWitness(ev.x, ev.y).check(G)
    if isinstance(ev, PositiveSimple):
        rows = [S.matrix.row(i) for i in range(1, S.n_i + 1)]
        cols = [S.matrix.col(m) for m in range(1, S.n_lambda + 1)]
        return (
            len(set(rows)) == len(rows)
            and len(set(cols)) == len(cols)
            and tuple(map(_digest, rows)) == ev.row_digests
            and tuple(map(_digest, cols)) == ev.column_digests
            and not zero_divisors(S.group)
        )
    F = as_finite_semigroup(S)
    T = F.table
    if isinstance(ev, (CenterWitness, HomogroupWitness)):
        central = bool((T[ev.e] == T[:, ev.e]).all())
        return central and int(T[ev.a, ev.e]) != ev.a and int(T[ev.e, ev.a]) != ev.a
    if isinstance(ev, IdealWitness):
        if ev.side == "whole":
            ideal = frozenset(range(F.order))
        else:
            ideal = principal_ideal(F, ev.generator, ev.side)
        # the ideal must really be one-sided closed
        members = np.array(sorted(ideal))
        closed = set(T[:, members].ravel().tolist()) <= ideal if ev.side != "right" else True
        closed = closed and (set(T[members, :].ravel().tolist()) <= ideal if ev.side != "left" else True)
        commutes = all(int(T[ev.e, m]) == int(T[m, ev.e]) for m in ideal)
        return closed and commutes and ev.a in ideal and int(T[ev.e, ev.a]) != ev.a
    return False
