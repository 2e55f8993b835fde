from __future__ import annotations

import pytest

from qinv.diagram import builtin
from qinv.invariant import congruence_test, projective_invariant
from qinv.liedata import InvalidRootOfUnity
from qinv.periodicity import CONSISTENT, OBSTRUCTED, NotHomologySphere, periodicity_scan


def test_poincare_r5_consistent():
    rep = periodicity_scan(builtin("poincare"), [5])
    (e,) = rep.entries
    assert e.witnesses and e.verdict == CONSISTENT


def test_poincare_obstructed_at_7():
    rep = periodicity_scan(builtin("poincare"), [7])
    assert rep.entries[0].witnesses == () and rep.entries[0].verdict == OBSTRUCTED


def test_non_homology_sphere_rejected():
    with pytest.raises(NotHomologySphere):
        periodicity_scan(builtin("s1xs2"), [5])
    with pytest.raises(NotHomologySphere):
        periodicity_scan(builtin("unknot(2)"), [5])


def test_bad_prime_rejected():
    with pytest.raises(InvalidRootOfUnity):
        periodicity_scan(builtin("poincare"), [9])


def test_s3_is_consistent_everywhere():
    rep = periodicity_scan(builtin("s3_empty"), [5, 7, 11])
    assert all(e.verdict == CONSISTENT for e in rep.entries)


@pytest.mark.parametrize("name", ["poincare", "brieskorn"])
@pytest.mark.parametrize("r", [5, 7])
def test_verdict_galois_invariant(name, r):
    x = projective_invariant(builtin(name), r).integer_value
    ws = congruence_test(x)
    for a in range(2, r):
        assert congruence_test(x.galois(a)) == {(a * s) % r for s in ws}
    y = projective_invariant(builtin(name), r, root=3).integer_value
    assert y == x.galois(3)
    assert bool(congruence_test(y)) == bool(ws)


def test_report_rendering():
    rep = periodicity_scan(builtin("poincare"), [5, 7])
    js = rep.to_json()
    assert [e["verdict"] for e in js["entries"]] == [CONSISTENT, OBSTRUCTED]
    table = rep.table().splitlines()
    assert len(table) == 4
