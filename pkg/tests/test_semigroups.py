from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import TupleModel, rees_product
from reesdomain import load_structure
from reesdomain.errors import IndexOutOfRange, NonAssociative, NotNormalized
from reesdomain.semigroups import (
    ONE,
    FiniteSemigroup,
    ReesSemigroup,
    SandwichMatrix,
    center,
    equal_pairs,
    is_group_case,
    is_homogroup,
    is_nonsingular,
    kernel,
    kernel_identity,
    principal_ideal,
    rees_mul,
)


def test_orders(s8, s240, star240):
    assert s8.order == 8
    assert s240.order == 240
    assert star240.order == 241
    assert star240.one == 240


def test_index_bijection_formula(s240):
    G = s240.group.order
    for idx in range(s240.order):
        lam, g, i = s240.element(idx)
        assert ((lam - 1) * G + g) * s240.n_i + (i - 1) == idx
        assert s240.index((lam, g, i)) == idx


def test_table_matches_tuple_formula(s8, s240):
    for S in (s8, s240):
        G = S.group.table.tolist()
        P = [list(S.matrix.row(i)) for i in range(1, S.n_i + 1)]
        elems = [S.element(k) for k in range(S.order)]
        T = S.table
        for a, b in itertools.product(range(S.order), repeat=2):
            expect = rees_product(G, P, elems[a], elems[b])
            assert S.element(int(T[a, b])) == expect


def test_s8_worked_products(s8):
    # p_22 = 1 in Z_2: (1,0,2)(2,0,1) = (1, 0+1+0, 1)
    assert rees_mul(s8, (1, 0, 2), (2, 0, 1)) == (1, 1, 1)
    assert rees_mul(s8, (2, 1, 1), (1, 1, 2)) == (2, 0, 2)
    assert s8.name(s8.mul(s8.parse_element("(1,0,2)"), s8.parse_element("(2,0,1)"))) == "(1,1,1)"


def test_associativity_by_triple_loop(s8, star8):
    for S in (s8, star8):
        T = S.table.tolist()
        n = S.order
        for a, b, c in itertools.product(range(n), repeat=3):
            assert T[T[a][b]][c] == T[a][T[b][c]]


def test_star_identity(star240):
    T = star240.table
    one = star240.one
    assert (T[one] == np.arange(241)).all() and (T[:, one] == np.arange(241)).all()
    assert star240.element(one) is ONE
    assert star240.parse_element("one") == one
    assert star240.name(one) == "one"


def test_gamma_is_a_copy_of_the_group(s240):
    G = s240.group
    for g, h in itertools.product(range(0, 60, 3), repeat=2):
        assert s240.mul(s240.gamma(g), s240.gamma(h)) == s240.gamma(G.mul(g, h))
    assert s240.gamma_part(s240.gamma(17)) == 17
    assert s240.gamma_part(s240.index((2, 0, 1))) is None
    assert s240.gamma_identity == s240.gamma(0)


def test_normalization_and_range_checks(z2):
    with pytest.raises(NotNormalized):
        SandwichMatrix.from_rows([[1, 0], [0, 0]], z2)
    with pytest.raises(NotNormalized):
        SandwichMatrix.from_rows([[0, 0], [1, 1]], z2)
    with pytest.raises(IndexOutOfRange):
        SandwichMatrix.from_rows([[0, 0], [0, 5]], z2)


def test_nonsingularity(s8, s8_singular, s240):
    assert is_nonsingular(s8.matrix) == (True, None)
    assert is_nonsingular(s240.matrix)[0]
    # rows are checked before columns
    assert is_nonsingular(s8_singular.matrix) == (False, ("row", 1, 2))
    assert equal_pairs(s8_singular.matrix, "column") == [(1, 2)]


def test_group_case():
    A = load_structure("a5_group_case")
    assert is_group_case(A)
    assert A.order == 60


def test_parse_element_round_trip(s240, star240):
    for S in (s240, star240):
        for k in range(S.order):
            assert S.parse_element(S.name(k)) == k
    assert s240.parse_element("[2,(1 2 3 4 5),1]") == s240.index((2, s240.group.index("(1 2 3 4 5)"), 1))


def test_cayley_table_semigroup():
    with pytest.raises(NonAssociative):
        FiniteSemigroup.from_table([[0, 1, 2], [1, 0, 0], [2, 0, 0]])
    F = load_structure("mod4mul")
    assert F.mul(2, 3) == 2 and F.mul(3, 3) == 1


def test_center_and_ideals_by_definition():
    F = load_structure("mod4mul")
    assert center(F) == frozenset(range(4))
    T = F.table.tolist()
    for a in range(4):
        left = {a} | {T[s][a] for s in range(4)}
        right = {a} | {T[a][s] for s in range(4)}
        two = left | right | {T[T[s][a]][u] for s in range(4) for u in range(4)}
        assert principal_ideal(F, a, "left") == left
        assert principal_ideal(F, a, "right") == right
        assert principal_ideal(F, a, "two-sided") == two


@pytest.mark.parametrize("name, expected", [
    ("mod4mul", {0}),
    ("zero3", {0}),
    ("z3add", {0, 1, 2}),
    ("semilattice3", {0}),
    ("z2_with_zero", {0}),
])
def test_kernels(name, expected):
    F = load_structure(name)
    assert kernel(F) == frozenset(expected)
    assert is_homogroup(F)


def test_simple_semigroup_is_its_own_kernel(s8):
    assert kernel(s8) == frozenset(range(8))
    # S_8's kernel is not a group (two idempotents in distinct H-classes)
    assert not is_homogroup(s8)


@pytest.mark.parametrize("name", ["mod4mul", "zero3", "z3add", "semilattice3", "z2_with_zero"])
def test_kernel_identity_is_central_idempotent(name):
    F = load_structure(name)
    e = kernel_identity(F)
    T = F.table.tolist()
    assert T[e][e] == e
    assert all(T[e][s] == T[s][e] for s in range(F.order))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_random_rees_semigroups_are_associative(data):
    from reesdomain.groups import cyclic_group

    n = data.draw(st.integers(1, 4))
    rows = data.draw(st.integers(1, 3))
    cols = data.draw(st.integers(1, 3))
    entries = [[0] * cols] + [
        [0] + [data.draw(st.integers(0, n - 1)) for _ in range(cols - 1)] for _ in range(rows - 1)
    ]
    G = cyclic_group(n)
    S = ReesSemigroup(G, SandwichMatrix.from_rows(entries, G))
    model = TupleModel(S)
    a, b, c = (data.draw(st.integers(0, S.order - 1)) for _ in range(3))
    ea, eb, ec = (S.element(x) for x in (a, b, c))
    assert model.mul(model.mul(ea, eb), ec) == model.mul(ea, model.mul(eb, ec))
    assert S.element(S.mul(a, b)) == model.mul(ea, eb)
