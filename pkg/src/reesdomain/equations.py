"""Equations, systems, brute-force solving and Gamma-related term checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ArityMismatch, BudgetExceeded, InconsistentEquation
from .points import FullSpace, PointSet, grid
from .semigroups import ReesSemigroup, StarSemigroup
from .terms import Const, Evaluator, Term, Var, atoms, concat, parse_term

__all__ = [
    "Equation",
    "EquationSystem",
    "GammaCheck",
    "solve",
    "grid_values",
    "is_gamma_valued",
    "structural_gamma_condition",
    "gamma_reduce",
    "enumerate_terms",
    "DEFAULT_SOLVE_BUDGET",
]

DEFAULT_SOLVE_BUDGET = 2_000_000
_GRID_CACHE_LIMIT = 50_000_000


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    @classmethod
    def parse(cls, lhs: str, rhs: str, num_vars: int, S) -> "Equation":
        return cls(parse_term(lhs, num_vars, S), parse_term(rhs, num_vars, S))

    @property
    def arity(self) -> int:
        return max(self.lhs.arity, self.rhs.arity)


@dataclass(frozen=True)
class EquationSystem:
    num_vars: int
    equations: tuple[Equation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "equations", tuple(self.equations))
        for eq in self.equations:
            if eq.arity > self.num_vars:
                raise ArityMismatch(f"equation uses x{eq.arity} in a system of {self.num_vars} variables")

    def __len__(self) -> int:
        return len(self.equations)

    def __iter__(self):
        return iter(self.equations)


def grid_values(S, num_vars: int, t: Term, budget: int = DEFAULT_SOLVE_BUDGET,
                evaluator: Evaluator | None = None) -> np.ndarray:
    """Values of ``t`` over all of S^n in lexicographic order (cached per structure)."""
    cache = S.cache.setdefault(("grid", num_vars), {})
    hit = cache.get(t)
    if hit is not None:
        return hit
    if evaluator is None:
        evaluator = Evaluator(S, grid(S.order, num_vars, budget))
    vals = evaluator.values(t)
    used = S.cache.get("grid_cells", 0)
    if used + vals.size <= _GRID_CACHE_LIMIT:
        vals.setflags(write=False)
        cache[t] = vals
        S.cache["grid_cells"] = used + vals.size
    return vals


def solve(system: EquationSystem, S, budget: int = DEFAULT_SOLVE_BUDGET) -> PointSet:
    """All points of S^n satisfying every equation, by exhaustive enumeration."""
    n = system.num_vars
    size = S.order**n
    if size > budget:
        raise BudgetExceeded(f"solving over |S|^n = {S.order}^{n}", size, budget)
    mask = np.ones(size, dtype=bool)
    evaluator = None
    for eq in system.equations:
        sides = []
        for t in (eq.lhs, eq.rhs):
            cache = S.cache.get(("grid", n), {})
            if t not in cache and evaluator is None:
                evaluator = Evaluator(S, grid(S.order, n))
            sides.append(grid_values(S, n, t, budget, evaluator))
        mask &= sides[0] == sides[1]
    return PointSet(np.flatnonzero(mask).astype(np.int64), S.order, n)


@dataclass(frozen=True)
class GammaCheck:
    """Outcome of :func:`is_gamma_valued`; truthy iff every value lies in Gamma."""

    valued: bool
    structural: bool
    counterexample: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.valued


def _atom_lambda_i(S, atom: Term) -> tuple[int, int] | None:
    if not isinstance(atom, Const):
        return None
    rees = S.base if isinstance(S, StarSemigroup) else S
    if isinstance(S, StarSemigroup) and atom.s == S.one:
        return None
    lam, _, i = rees.element(atom.s)
    return lam, i


def structural_gamma_condition(t: Term, S) -> bool:
    """Leading atom a constant (1, g, k) and trailing atom a constant (lam, h, 1).

    A side whose index set is a singleton cannot leave Gamma through that
    index, so the matching condition is vacuous there.
    """
    rees = S.base if isinstance(S, StarSemigroup) else S
    head, tail = _atom_lambda_i(S, t.first), _atom_lambda_i(S, t.last)
    head_ok = rees.n_lambda == 1 or (head is not None and head[0] == 1)
    tail_ok = rees.n_i == 1 or (tail is not None and tail[1] == 1)
    return head_ok and tail_ok


def is_gamma_valued(t: Term, S, domain="all", num_vars: int | None = None,
                    budget: int = DEFAULT_SOLVE_BUDGET) -> GammaCheck:
    """Check that ``t`` takes values in Gamma at every point of ``domain``."""
    n = num_vars if num_vars is not None else t.arity
    if isinstance(domain, str):
        if domain != "all":
            raise ValueError("domain must be 'all' or a point set")
        domain = FullSpace(S.order, n)
    if domain.size > budget:
        raise BudgetExceeded("Gamma-valuedness check", domain.size, budget)
    rows = domain.rows()
    if isinstance(domain, FullSpace):
        vals = grid_values(S, n, t, budget)
    else:
        vals = Evaluator(S, rows).values(t)
    outside = S.gamma_lookup[vals] < 0
    example = tuple(rows[int(np.argmax(outside))].tolist()) if outside.any() else None
    return GammaCheck(not outside.any(), structural_gamma_condition(t, S), example)


def _fold_constants(S, seq: list[Term]) -> list[Term]:
    out: list[Term] = []
    for a in seq:
        if isinstance(a, Const) and out and isinstance(out[-1], Const):
            out[-1] = Const(S.mul(out[-1].s, a.s))
        else:
            out.append(a)
    return out


def _gamma_solutions(eq: Equation, S: ReesSemigroup, n: int) -> np.ndarray:
    G = S.group.order
    rows = S.gamma_indices[grid(G, n)] if n else np.zeros((1, 0), dtype=np.int64)
    ev = Evaluator(S, rows)
    return ev.values(eq.lhs) == ev.values(eq.rhs)


def gamma_reduce(eq: Equation, S: ReesSemigroup, num_vars: int | None = None,
                 limit: int = 100_000) -> Equation:
    """Replace every constant (lam, c, i) by (1, c, 1), keeping the solutions inside Gamma^n.

    Adjacent constants are multiplied together first; between two Gamma values a
    constant acts only through its group part, which is what makes the rewrite
    sound once the equation has some solution in Gamma^n.
    """
    n = num_vars if num_vars is not None else eq.arity
    if not _gamma_solutions(eq, S, n).any():
        raise InconsistentEquation("equation has no solution with all variables in Gamma")

    def reduce_side(t: Term) -> Term:
        seq = _fold_constants(S, atoms(t, limit))
        out = []
        for a in seq:
            if isinstance(a, Const):
                lam, c, i = S.element(a.s)
                a = Const(S.gamma(c))
            out.append(a)
        return concat(*out)

    return Equation(reduce_side(eq.lhs), reduce_side(eq.rhs))


def enumerate_terms(S, num_vars: int, max_len: int, budget: int = 10_000_000) -> Iterator[Term]:
    """Every flattened term of length 1..max_len, shortest first, then lexicographically.

    The alphabet is x1..xn followed by the constants in index order.
    """
    alphabet: list[Term] = [Var(k) for k in range(1, num_vars + 1)]
    alphabet += [Const(s) for s in range(S.order)]
    total = sum(len(alphabet) ** L for L in range(1, max_len + 1))
    if total > budget:
        raise BudgetExceeded("term enumeration", total, budget)
    for L in range(1, max_len + 1):
        for word in itertools.product(alphabet, repeat=L):
            yield concat(*word)
