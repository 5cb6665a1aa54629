from __future__ import annotations

import json
from dataclasses import replace

import pytest

from oracles import brute_zero_divisors
from reesdomain import adjoin_identity, load_structure
from reesdomain.decision import (
    EdCertificate,
    EqualRowsOrColumns,
    GroupZeroDivisor,
    PositiveSimple,
    center_refutation,
    decide_ed,
    homogroup_refutation,
    ideal_refutation,
    recheck,
    size_bound_check,
)
from reesdomain.errors import NotAHomogroup
from reesdomain.semigroups import is_nonsingular


def test_s240_is_ed(s240):
    cert = decide_ed(s240)
    assert cert.verdict == "ED"
    assert isinstance(cert.evidence, PositiveSimple)
    assert recheck(cert, s240)
    json.dumps(cert.to_dict())


def test_singular_beats_zero_divisors(s8_singular):
    # both obstructions present; the matrix one is reported
    cert = decide_ed(s8_singular)
    assert cert.verdict == "NotED"
    assert cert.evidence == EqualRowsOrColumns("row", 1, 2)
    assert recheck(cert, s8_singular)


def test_group_zero_divisor_certificate(s8):
    cert = decide_ed(s8)
    assert isinstance(cert.evidence, GroupZeroDivisor)
    ev = cert.evidence
    assert (ev.x, ev.y) in brute_zero_divisors(s8.group.table.tolist())
    assert recheck(cert, s8)


def test_tampered_certificates_fail_recheck(s8, s240):
    bad = EdCertificate("NotED", EqualRowsOrColumns("row", 1, 2))
    assert not recheck(bad, s240)
    assert not recheck(EdCertificate("NotED", GroupZeroDivisor(0, 1)), s8)
    good = decide_ed(s240)
    forged = replace(good, evidence=replace(good.evidence, row_digests=("0", "0")))
    assert not recheck(forged, s240)


def test_star_inherits(s240, s8):
    cert = decide_ed(adjoin_identity(s240))
    assert cert.verdict == "ED" and recheck(cert, adjoin_identity(s240))
    assert decide_ed(adjoin_identity(s8)).verdict == "Unknown"


@pytest.mark.parametrize("clause", [1, 2, 3, 4, 5])
def test_size_clauses(clause):
    S = load_structure(f"size_clause{clause}")
    bound = size_bound_check(S)
    assert bound is not None and bound.clause == clause and clause in bound.satisfied
    assert not is_nonsingular(S.matrix)[0]
    assert decide_ed(S).verdict == "NotED"


def test_size_clause_absent_on_s240(s240):
    assert size_bound_check(s240) is None


def test_group_case_verdict():
    A = load_structure("a5_group_case")
    assert decide_ed(A).verdict == "ED"


@pytest.mark.parametrize("name", ["mod4mul", "zero3", "z3add", "semilattice3", "z2_with_zero"])
def test_refutations_recheck(name):
    F = load_structure(name)
    cert = decide_ed(F)
    assert cert.verdict == "NotED"
    assert recheck(cert, F)
    T = F.table.tolist()
    ev = cert.evidence
    assert T[ev.e][ev.a] != ev.a


def test_mod4_center_witness():
    F = load_structure("mod4mul")
    w = center_refutation(F)
    T = F.table.tolist()
    assert all(T[w.e][s] == T[s][w.e] for s in range(4)) and T[w.e][w.a] != w.a


def test_ideal_and_homogroup_witnesses():
    F = load_structure("z2_with_zero")
    assert ideal_refutation(F) is not None
    w = homogroup_refutation(F)
    assert w.e == 0 and w.a == 1


def test_homogroup_refutation_requires_group_kernel(s8):
    with pytest.raises(NotAHomogroup):
        homogroup_refutation(s8)


def test_simple_semigroup_has_no_center_witness(s240):
    assert center_refutation(s240) is None
