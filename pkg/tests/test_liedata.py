from __future__ import annotations

import pytest

from qinv.exactring import qint
from qinv.liedata import (
    InvalidRootOfUnity,
    alcove_colors,
    cartan_datum,
    level_k,
    quantum_dimension_poly,
    sl2,
    validate_r,
    weyl_dimension,
    zeta_order,
)

ALGEBRAS = ["A1", "A2", "A3", "B2", "G2"]


def test_sl2_pairing():
    d = sl2()
    assert d.pairing((1,), (1,)) == 2
    assert d.pairing((0,), (5,)) == 0
    assert d.pairing((2,), (3,)) == 12
    with pytest.raises(ValueError):
        d.pairing((1, 0), (1,))


@pytest.mark.parametrize("name", ALGEBRAS)
def test_datum_invariants(name):
    d = cartan_datum(name)
    n = d.rank
    for i in range(n):
        for j in range(n):
            assert d.form[i][j] == d.form[j][i]
        assert d.form[i][i] == 2 * d.d[i]
        assert d.pairing(d.rho, d.simple_root(i)) == d.d[i]
    assert d.dim == n + 2 * d.num_pos_roots


@pytest.mark.parametrize(
    "name,dim,h_dual,det,npos",
    [("A1", 3, 2, 2, 1), ("A2", 8, 3, 3, 3), ("A3", 15, 4, 4, 6), ("B2", 10, 3, 2, 4), ("G2", 14, 4, 1, 6)],
)
def test_classical_tables(name, dim, h_dual, det, npos):
    d = cartan_datum(name)
    assert (d.dim, d.h_dual, d.det, d.num_pos_roots) == (dim, h_dual, det, npos)


def test_level_k_examples():
    assert [level_k(sl2(), r) for r in (5, 3, 7)] == [3, 1, 5]


@pytest.mark.parametrize("r,code", [(9, "non-prime"), (2, "even"), (4, "even"), (15, "non-prime")])
def test_validate_r_errors(r, code):
    with pytest.raises(InvalidRootOfUnity) as err:
        validate_r(sl2(), r)
    assert err.value.code == code


def test_validate_r_too_small_and_det():
    with pytest.raises(InvalidRootOfUnity) as err:
        validate_r(cartan_datum("G2"), 5)  # d h = 3 * 4 = 12
    assert err.value.code == "too-small"
    with pytest.raises(InvalidRootOfUnity) as err:
        validate_r(cartan_datum("A2"), 3)
    assert err.value.code == "divides-det"
    validate_r(sl2(), 5)


def test_alcove_sl2_examples():
    assert alcove_colors(sl2(), 5) == [(0,), (1,)]
    assert alcove_colors(sl2(), 7) == [(0,), (1,), (2,)]
    assert alcove_colors(sl2(), 3) == [(0,)]


@pytest.mark.parametrize("r", [3, 5, 7, 11, 13, 17])
def test_alcove_sl2_count(r):
    assert len(alcove_colors(sl2(), r)) == (r - 1) // 2


def _alcove_brute(d, r, box=12):
    # brute force over a box of root-lattice points
    from itertools import product

    k = level_k(d, r)
    out = []
    for mu in product(range(box), repeat=d.rank):
        if all(d.pairing(mu, d.simple_root(i)) >= 0 for i in range(d.rank)) and d.pairing(mu, d.alpha0) <= k:
            out.append(mu)
    return sorted(out)


@pytest.mark.parametrize("name,r", [("A2", 7), ("A2", 11), ("B2", 7), ("B2", 11), ("G2", 13), ("A3", 7)])
def test_alcove_matches_brute_force(name, r):
    d = cartan_datum(name)
    got = alcove_colors(d, r)
    assert got == _alcove_brute(d, r)
    assert got == sorted(got)
    k = level_k(d, r)
    for mu in got:
        assert d.pairing(mu, d.alpha0) <= k


def test_alcove_maximal_color_is_maximal():
    d = sl2()
    for r in (5, 7, 11):
        top = alcove_colors(d, r)[-1]
        assert d.pairing((top[0] + 1,), d.alpha0) > level_k(d, r)


def test_quantum_dimension_sl2():
    d = sl2()
    assert quantum_dimension_poly(d, (0,)) == 1
    assert quantum_dimension_poly(d, (1,)) == qint(3)
    for n in range(6):
        q = quantum_dimension_poly(d, (n,))
        assert q == qint(2 * n + 1)
        assert q.evaluate(1) == 2 * n + 1


@pytest.mark.parametrize("name", ALGEBRAS)
def test_quantum_dimension_palindromic_and_weyl(name):
    d = cartan_datum(name)
    for mu in alcove_colors(d, 13 if name != "G2" else 13)[:6]:
        q = quantum_dimension_poly(d, mu)
        assert q.is_palindromic()
        assert q.evaluate(1) == weyl_dimension(d, mu)


def test_quantum_dimension_rejects_non_dominant():
    with pytest.raises(ValueError):
        quantum_dimension_poly(cartan_datum("A2"), (1, 0))


def test_zeta_order_sl2():
    assert zeta_order(sl2(), 7) == 7
    assert zeta_order(sl2(), 11) == 11
    assert zeta_order(sl2(), 5) == 20
    assert zeta_order(sl2(), 13) == 52
