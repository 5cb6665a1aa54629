from __future__ import annotations

import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from reesdomain.errors import BudgetExceeded, InputFormatError
from reesdomain.points import FullSpace, MsemSpace, PointSet, decode, encode, grid


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 9), st.lists(st.lists(st.integers(0, 8), min_size=3, max_size=3), min_size=1, max_size=20))
def test_encode_decode_round_trip(base, pts):
    rows = np.array([[v % base for v in p] for p in pts])
    assert np.array_equal(decode(encode(rows, base), base, 3), rows)


def test_grid_order_is_lexicographic():
    g = grid(3, 2)
    assert g.tolist() == [list(p) for p in itertools.product(range(3), repeat=2)]
    with pytest.raises(BudgetExceeded):
        grid(240, 4, budget=10**6)


@settings(max_examples=50, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=25),
       st.sets(st.tuples(st.integers(0, 4), st.integers(0, 4)), max_size=25))
def test_set_algebra_matches_python_sets(a, b):
    A = PointSet.from_points(a, 5, 2)
    B = PointSet.from_points(b, 5, 2)
    assert set(A | B) == a | b
    assert set(A - B) == a - b
    assert set(A.complement()) == set(itertools.product(range(5), repeat=2)) - a
    assert A.issubset(A | B)
    for p in itertools.product(range(5), repeat=2):
        assert (p in A) == (p in a)


def test_point_validation():
    with pytest.raises(InputFormatError):
        PointSet.from_points([(0, 1), (2,)], 3)
    with pytest.raises(InputFormatError):
        PointSet.from_points([(0, 5)], 3)


def test_full_space_leaf_groups():
    F = FullSpace(4, 2)
    groups = F.leaf_groups((1, 2))
    assert len(groups) == 2 * 3
    assert (1, 1) not in groups and (2, 2) not in groups


def test_point_set_leaf_groups_are_first_differences():
    M = PointSet.from_points([(0, 0), (0, 1), (2, 1), (1, 1)], 3, 2)
    # relative to target (0, 1): (0,0) differs first at coordinate 2, the others at 1
    assert M.leaf_groups((0, 1)) == [(1, 1), (1, 2), (2, 0)]


def test_msem_size_and_membership():
    s = 5
    M = MsemSpace(s)
    brute = [p for p in itertools.product(range(s), repeat=4) if p[0] == p[1] or p[2] == p[3]]
    assert M.size == len(brute) == 2 * s**3 - s**2
    assert set(M.materialize()) == set(brute)
    assert (1, 1, 2, 3) in M and (1, 2, 3, 4) not in M
    with_extra = MsemSpace(s, [(1, 2, 3, 4)])
    assert (1, 2, 3, 4) in with_extra and with_extra.size == M.size + 1


def test_msem_leaf_groups_match_materialized():
    s = 4
    target = (0, 1, 2, 3)
    M = MsemSpace(s, [target])
    explicit = PointSet(encode(M.rows(), s), s, 4)
    assert M.leaf_groups(target) == explicit.leaf_groups(target)


def test_msem_sampling_is_uniform():
    s = 3
    M = MsemSpace(s)
    rng = np.random.default_rng(1)
    rows = M.sample(63_000, rng)
    assert all(M.in_msem(p) for p in rows.tolist()[:2000])
    counts = Counter(map(tuple, rows.tolist()))
    assert len(counts) == M.size  # 45 points
    expected = len(rows) / M.size
    # chi-square with 44 degrees of freedom; 99.9% quantile is about 78
    chi2 = sum((c - expected) ** 2 / expected for c in counts.values())
    assert chi2 < 78


def test_sample_excludes_target():
    rng = np.random.default_rng(0)
    F = FullSpace(2, 2)
    rows = F.sample(200, rng, exclude=(1, 1))
    assert not (rows == 1).all(axis=1).any()


def test_digest_is_stable():
    a = PointSet.from_points([(1, 2), (0, 0)], 3)
    b = PointSet.from_points([(0, 0), (1, 2), (1, 2)], 3)
    assert a == b and a.digest() == b.digest()
    assert FullSpace(3, 2).digest() != a.digest()
