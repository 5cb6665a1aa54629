"""Separating terms, killer terms and equation-system synthesis.

A killer term for a target point P is a term that is Gamma-valued, takes a
non-identity value at P and the Gamma identity (1, 1, 1) on a set of other
points. Killers for single points come from separating terms; killers for
larger sets are merged pairwise with group commutators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    EmptyKillSet,
    EqualElements,
    EqualPoints,
    InputError,
    InputFormatError,
    NotAnEquationalDomain,
    RowsNotEqual,
    SingularMatrix,
    VerificationError,
    ZeroDivisorObstruction,
)
from .equations import DEFAULT_SOLVE_BUDGET, Equation, EquationSystem, enumerate_terms, grid_values
from .points import FullSpace, MsemSpace, PointSet
from .semigroups import ReesSemigroup, StarSemigroup
from .terms import Concat, Const, Evaluator, Term, Var, eval_term, power

__all__ = [
    "KillerTerm",
    "separate_simple",
    "separate_star",
    "separate",
    "term_inverse",
    "killer_pair",
    "combine_killers",
    "conjugate_killer",
    "point_killer",
    "synthesize_system",
    "msem_system",
    "verify_singular_obstruction",
    "DEFAULT_VERIFY_BUDGET",
]

DEFAULT_VERIFY_BUDGET = 100_000
DEFAULT_SYNTH_BUDGET = 100_000


@dataclass(frozen=True, eq=False)
class KillerTerm:
    """A term non-identity at ``target`` and identity on the points it kills.

    ``groups`` lists the (coordinate, value) pairs of first differences from
    the target; the killed set is every point of ``domain`` whose first
    difference from the target is one of them.
    """

    term: Term
    target: tuple[int, ...]
    domain: object
    groups: tuple[tuple[int, int], ...]
    target_value: int
    report: dict | None = field(default=None, compare=False)

    @property
    def killed(self) -> PointSet:
        return self.domain.select(self.target, self.groups)


def _rees(S) -> ReesSemigroup:
    return S.base if isinstance(S, StarSemigroup) else S


def _sep_term(S, first: tuple[int, int, int], last: tuple[int, int, int], var: int) -> Term:
    R = _rees(S)
    return Concat(Const(R.index(first)), Var(var), Const(R.index(last)))


def separate_simple(S: ReesSemigroup, s1, s2, var: int = 1) -> Term:
    """A one-variable Gamma-valued term taking different values at ``s1`` and ``s2``."""
    R = _rees(S)
    a, b = R.coerce(s1), R.coerce(s2)
    if a == b:
        raise EqualElements(f"cannot separate {R.name(a)} from itself")
    (lam, g, i), (mu, h, j) = R.element(a), R.element(b)
    P = R.matrix
    if g != h:
        return _sep_term(S, (1, 0, 1), (1, 0, 1), var)
    if lam != mu:
        for k in range(1, P.rows + 1):
            if P.p(k, lam) != P.p(k, mu):
                return _sep_term(S, (1, 0, k), (1, 0, 1), var)
        raise SingularMatrix("column", min(lam, mu), max(lam, mu))
    for nu in range(1, P.cols + 1):
        if P.p(i, nu) != P.p(j, nu):
            return _sep_term(S, (1, 0, 1), (nu, 0, 1), var)
    raise SingularMatrix("row", min(i, j), max(i, j))


def separate_star(S: StarSemigroup, s1, s2, var: int = 1) -> Term:
    """Separating term over the identity-adjoined monoid."""
    a, b = S.coerce(s1), S.coerce(s2)
    if a == b:
        raise EqualElements(f"cannot separate {S.name(a)} from itself")
    if S.one not in (a, b):
        return separate_simple(S, a, b, var)
    other = b if a == S.one else a
    lam, g, i = S.base.element(other)
    P = S.matrix
    if g != 0:
        return _sep_term(S, (1, 0, 1), (1, 0, 1), var)
    if i != 1:
        for mu in range(1, P.cols + 1):
            if P.p(i, mu) != 0:
                return _sep_term(S, (1, 0, 1), (mu, 0, 1), var)
        raise SingularMatrix("row", 1, i)
    if lam != 1:
        for j in range(1, P.rows + 1):
            if P.p(j, lam) != 0:
                return _sep_term(S, (1, 0, j), (1, 0, 1), var)
        raise SingularMatrix("column", 1, lam)
    for j in range(1, P.rows + 1):
        for mu in range(1, P.cols + 1):
            if P.p(j, mu) != 0:
                return _sep_term(S, (1, 0, j), (mu, 0, 1), var)
    if P.rows > 1:
        raise SingularMatrix("row", 1, 2)
    if P.cols > 1:
        raise SingularMatrix("column", 1, 2)
    raise InputError("the adjoined identity cannot be separated from (1,1,1) when S is a group")


def separate(S, s1, s2, var: int = 1) -> Term:
    if isinstance(S, StarSemigroup):
        return separate_star(S, s1, s2, var)
    return separate_simple(S, s1, s2, var)


def term_inverse(t: Term, S) -> Term:
    """t^(|G|-1): the inverse of t wherever t is Gamma-valued."""
    return power(t, max(1, S.group.order - 1))


def _leaf(S, target: tuple[int, ...], c: int, v: int) -> tuple[Term, int]:
    """s(X) = t(x_c) t(v)^-1 with the constant inverse folded into t's last constant."""
    t = separate(S, target[c - 1], v, var=c)
    G = S.group
    h = S.gamma_part(eval_term(t, (v,) * c, S))
    tail = Const(S.mul(t.children[-1].s, S.gamma(G.inv(h))))
    term = Concat(*t.children[:-1], tail)
    value = S.gamma_part(eval_term(term, target, S))
    if value is None or value == 0:
        raise VerificationError("separating term failed to separate")
    return term, S.gamma(value)


def killer_pair(S, P: Sequence[int], Q: Sequence[int]) -> KillerTerm:
    """Killer for target P on {Q}, built from the first coordinate where P and Q differ."""
    P = tuple(S.coerce(p) for p in P)
    Q = tuple(S.coerce(q) for q in Q)
    if len(P) != len(Q):
        raise InputFormatError("points have different arities")
    if P == Q:
        raise EqualPoints("target and killed point coincide")
    c = next(k for k in range(len(P)) if P[k] != Q[k]) + 1
    term, value = _leaf(S, P, c, Q[c - 1])
    domain = PointSet.from_points([P, Q], S.order)
    return KillerTerm(term, P, domain, ((c, Q[c - 1]),), value)


def conjugate_killer(S, a: KillerTerm, g: int) -> KillerTerm:
    """(1, g, 1) t (1, g^-1, 1): same kill set, target value conjugated by g."""
    if g == 0:
        return a
    G = S.group
    term = Concat(Const(S.gamma(g)), a.term, Const(S.gamma(G.inv(g))))
    value = S.gamma(G.conjugate(S.gamma_part(a.target_value), g))
    return KillerTerm(term, a.target, a.domain, a.groups, value)


def _merge_domains(a, b):
    if a is b:
        return a
    if isinstance(a, PointSet) and isinstance(b, PointSet):
        return a | b
    if a.digest() == b.digest():
        return a
    return a.materialize() | b.materialize()


def combine_killers(S, a: KillerTerm, b: KillerTerm) -> KillerTerm:
    """Commutator [a, b'] with b' a conjugate of b chosen so the value at the target survives."""
    if a.target != b.target:
        raise InputFormatError("killers have different targets")
    G = S.group
    g1 = S.gamma_part(a.target_value)
    g2 = S.gamma_part(b.target_value)
    conj = G.conjugation_table()[g2]
    commuting = G.commutes()[g1]
    candidates = np.flatnonzero(~commuting[conj])
    if len(candidates) == 0:
        raise ZeroDivisorObstruction(g1, g2)
    b = conjugate_killer(S, b, int(candidates[0]))
    term = Concat(term_inverse(a.term, S), term_inverse(b.term, S), a.term, b.term)
    value = S.gamma(G.commutator(g1, S.gamma_part(b.target_value)))
    return KillerTerm(term, a.target, _merge_domains(a.domain, b.domain),
                      tuple(sorted(set(a.groups) | set(b.groups))), value)


def _verify(S, killer: KillerTerm, verify_budget: int, seed: int) -> dict:
    domain = killer.domain
    P = killer.target
    n = len(P)
    if domain.size <= verify_budget:
        mode = "exhaustive"
        if isinstance(domain, FullSpace):
            rows = None
            vals = grid_values(S, n, killer.term)
            target_key = 0
            for p in P:
                target_key = target_key * S.order + p
            at_target = int(vals[target_key])
            others = np.delete(vals, target_key)
        else:
            rows = domain.rows()
            vals = Evaluator(S, rows).values(killer.term)
            is_target = (rows == np.asarray(P)[None, :]).all(axis=1)
            at_target = int(vals[is_target][0])
            others = vals[~is_target]
        checked = domain.size
    else:
        mode = "sampled"
        rng = np.random.default_rng(seed)
        sample = domain.sample(verify_budget, rng, exclude=P)
        rows = np.vstack([np.asarray(P, dtype=np.int64)[None, :], sample])
        vals = Evaluator(S, rows).values(killer.term)
        at_target, others = int(vals[0]), vals[1:]
        checked = rows.shape[0]
    failures = int((others != S.gamma_identity).sum())
    target_ok = at_target == killer.target_value and S.gamma_part(at_target) not in (None, 0)
    report = {
        "target": [S.name(p) for p in P],
        "killed": domain.size - 1,
        "mode": mode,
        "checked": checked,
        "seed": seed if mode == "sampled" else None,
        "failures": failures,
        "target_value": S.name(at_target),
        "passed": bool(target_ok and failures == 0),
    }
    return report


def point_killer(S, P: Sequence[int], M, verify_budget: int = DEFAULT_VERIFY_BUDGET,
                 seed: int = 0, verify: bool = True) -> KillerTerm:
    """Killer for target P on M minus P, merged from pair killers as a balanced tree.

    ``M`` is a :class:`PointSet`, a :class:`FullSpace`/:class:`MsemSpace`, or
    the string ``"all"`` for S^n. Pair killers with identical terms are shared,
    so the tree has at most n * (|S| - 1) leaves. The result is checked by
    evaluation on M (exhaustively up to ``verify_budget`` points, otherwise on
    that many uniform samples plus the target).
    """
    P = tuple(S.coerce(p) for p in P)
    if isinstance(M, str):
        M = FullSpace(S.order, len(P))
    elif not hasattr(M, "leaf_groups"):
        M = PointSet.from_points([tuple(S.coerce(p) for p in q) for q in M], S.order, len(P))
    if M.arity != len(P):
        raise InputFormatError(f"point of arity {len(P)} in a domain of arity {M.arity}")
    if P not in M:
        raise InputFormatError("target point must belong to M")
    if M.size < 2:
        raise EmptyKillSet("M contains no point besides the target")

    cache_key = ("killer", P, M.digest(), verify_budget, seed)
    hit = S.cache.get(cache_key)
    if hit is not None:
        return hit

    leaves = []
    for c, v in M.leaf_groups(P):
        term, value = _leaf(S, P, c, v)
        leaves.append(KillerTerm(term, P, M, ((c, v),), value))

    def merge(lo: int, hi: int) -> KillerTerm:
        if hi - lo == 1:
            return leaves[lo]
        mid = (lo + hi) // 2
        return combine_killers(S, merge(lo, mid), merge(mid, hi))

    killer = merge(0, len(leaves))
    report = None
    if verify:
        report = _verify(S, killer, verify_budget, seed)
        if not report["passed"]:
            raise VerificationError(f"killer for {P} failed verification: {report}")
    killer = KillerTerm(killer.term, P, M, killer.groups, killer.target_value, report)
    S.cache[cache_key] = killer
    return killer


def _require_ed(S):
    from .decision import decide_ed

    cert = decide_ed(S)
    if cert.verdict != "ED":
        raise NotAnEquationalDomain(cert)
    return cert


def synthesize_system(S, M, n: int | None = None, budget: int = DEFAULT_SYNTH_BUDGET,
                      verify_budget: int = DEFAULT_VERIFY_BUDGET, seed: int = 0,
                      reports: list | None = None) -> EquationSystem:
    """A system whose solution set is exactly M: one killer equation per point outside M."""
    _require_ed(S)
    if not isinstance(M, PointSet):
        pts = [tuple(S.coerce(p) for p in q) for q in M]
        M = PointSet.from_points(pts, S.order, n)
    if n is None:
        n = M.arity
    if M.arity != n:
        raise InputFormatError(f"points have arity {M.arity}, expected {n}")
    if M.size == 0:
        raise InputError("M must be nonempty")
    if S.order**n > DEFAULT_SOLVE_BUDGET:
        raise BudgetExceeded(f"enumerating |S|^n = {S.order}^{n}", S.order**n, DEFAULT_SOLVE_BUDGET)
    excluded = S.order**n - M.size
    if excluded > budget:
        raise BudgetExceeded("excluded points to kill", excluded, budget)
    identity = Const(S.gamma_identity)
    equations = []
    space = FullSpace(S.order, n)
    for P in M.complement():
        killer = point_killer(S, P, space, verify_budget, seed)
        if reports is not None:
            reports.append(killer.report)
        equations.append(Equation(killer.term, identity))
    return EquationSystem(n, tuple(equations))


def msem_system(S, targets: Sequence[Sequence[int]] | None = None, budget: int = DEFAULT_SYNTH_BUDGET,
                verify_budget: int = DEFAULT_VERIFY_BUDGET, seed: int = 0,
                reports: list | None = None) -> EquationSystem:
    """Killer equations cutting out {x1 = x2 or x3 = x4} in S^4.

    Without ``targets`` the whole system is built, which needs
    (|S|(|S|-1))^2 killers and is refused beyond ``budget``. With ``targets``
    only those excluded points get an equation.
    """
    _require_ed(S)
    excluded = (S.order * (S.order - 1)) ** 2
    if targets is None:
        if excluded > budget:
            raise BudgetExceeded("M_sem exclusions", excluded, budget)
        domain = MsemSpace(S.order)
        return synthesize_system(S, domain.materialize(), 4, budget, verify_budget, seed, reports)
    identity = Const(S.gamma_identity)
    equations = []
    for P in targets:
        P = tuple(S.coerce(p) for p in P)
        if len(P) != 4 or MsemSpace.in_msem(P):
            raise InputFormatError(f"target {P} is not a point of S^4 outside M_sem")
        killer = point_killer(S, P, MsemSpace(S.order, [P]), verify_budget, seed)
        if reports is not None:
            reports.append(killer.report)
        equations.append(Equation(killer.term, identity))
    return EquationSystem(4, tuple(equations))


def verify_singular_obstruction(S: ReesSemigroup, idx1: int, idx2: int, kind: str,
                                max_len: int, budget: int = 10_000_000) -> dict:
    """Check the equal-values-or-index-pattern dichotomy on every short one-variable term.

    For equal columns lam, mu the probe elements are (lam, 1, 1), (mu, 1, 1);
    for equal rows i, j they are (1, 1, i), (1, 1, j). Each term must either
    agree on them or give values that differ only in the probed index.
    """
    P = S.matrix
    if kind == "column":
        if P.col(idx1) != P.col(idx2):
            raise RowsNotEqual(f"columns {idx1} and {idx2} differ")
        s1, s2 = S.index((idx1, 0, 1)), S.index((idx2, 0, 1))
    elif kind == "row":
        if P.row(idx1) != P.row(idx2):
            raise RowsNotEqual(f"rows {idx1} and {idx2} differ")
        s1, s2 = S.index((1, 0, idx1)), S.index((1, 0, idx2))
    else:
        raise ValueError("kind must be 'row' or 'column'")

    T = S.table
    checked = equal = pattern = 0
    counterexample = None
    for t in enumerate_terms(S, 1, max_len, budget):
        seq = [t] if not isinstance(t, Concat) else t.children
        v1 = v2 = None
        for a in seq:
            x1 = a.s if isinstance(a, Const) else s1
            x2 = a.s if isinstance(a, Const) else s2
            v1 = x1 if v1 is None else int(T[v1, x1])
            v2 = x2 if v2 is None else int(T[v2, x2])
        checked += 1
        if v1 == v2:
            equal += 1
            continue
        (l1, g1, i1), (l2, g2, i2) = S.element(v1), S.element(v2)
        if kind == "column":
            ok = g1 == g2 and i1 == i2 and (l1, l2) == (idx1, idx2)
        else:
            ok = g1 == g2 and l1 == l2 and (i1, i2) == (idx1, idx2)
        if ok:
            pattern += 1
        elif counterexample is None:
            counterexample = {"term": t, "values": (S.name(v1), S.name(v2))}
    return {
        "kind": kind,
        "indices": (idx1, idx2),
        "elements": (S.name(s1), S.name(s2)),
        "max_len": max_len,
        "checked": checked,
        "equal": equal,
        "pattern": pattern,
        "passed": counterexample is None,
        "counterexample": counterexample,
    }
