from __future__ import annotations

from fractions import Fraction

import pytest

from qinv.analysis import (
    ChordDiagram,
    casimir_eigenvalue,
    classical_action,
    degree_bound_check,
    finite_difference_degree,
    weight_sl2,
)
from qinv.diagram import builtin
from qinv.exactring import h_expand, qint
from qinv.invariant import Ring, evaluate_J


def dense(m):
    rows, cols = m.shape
    return [[Fraction(m.get(i, j, 0)) for j in range(cols)] for i in range(rows)]


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))] for i in range(len(a))]


def kron(a, b):
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


def eye(d):
    return [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]


def add(a, b, s=1):
    return [[x + s * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def casimir_tensor(n):
    """sum x_i (x) x^i on V_n (x) V_n with an orthonormal-free hand basis:
    E (x) F/4 + F (x) E/4 + H (x) H/8."""
    A = classical_action(n)
    out = None
    for x, y, c in (("E", "F", Fraction(1, 4)), ("F", "E", Fraction(1, 4)), ("H", "H", Fraction(1, 8))):
        t = [[c * v for v in row] for row in kron(A[x], A[y])]
        out = t if out is None else add(out, t)
    return out


def test_classical_relations():
    for n in range(4):
        A = classical_action(n)
        E, F, H = A["E"], A["F"], A["H"]
        assert add(matmul(E, F), matmul(F, E), -1) == H
        assert add(matmul(H, E), matmul(E, H), -1) == [[2 * v for v in row] for row in E]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_chordless_is_identity(m):
    w = weight_sl2(ChordDiagram(m), 1)
    assert dense(w) == eye(3**m)


def test_single_chord_between_strands_is_casimir_tensor():
    n = 1
    w = weight_sl2(ChordDiagram(2, 0, (((0, 0), (1, 0)),)), n)
    assert dense(w) == casimir_tensor(n)


@pytest.mark.parametrize("n", range(4))
def test_self_chord_on_circle(n):
    w = weight_sl2(ChordDiagram(0, 1, (((0, 0), (0, 1)),)), n)
    assert w.shape == (1, 1)
    # oracle: trace of the explicit Casimir matrix
    A = classical_action(n)
    cas = add(add(matmul(A["E"], [[v / 4 for v in r] for r in A["F"]]),
                  matmul(A["F"], [[v / 4 for v in r] for r in A["E"]])),
              matmul(A["H"], [[v / 8 for v in r] for r in A["H"]]))
    tr = sum(cas[i][i] for i in range(2 * n + 1))
    assert w.get(0, 0, 0) == tr == (2 * n + 1) * casimir_eigenvalue(n)
    assert cas == [[casimir_eigenvalue(n) * v for v in r] for r in eye(2 * n + 1)]


def test_self_chord_on_strand_is_casimir_scalar():
    for n in range(3):
        w = weight_sl2(ChordDiagram(1, 0, (((0, 0), (0, 1)),)), n)
        assert dense(w) == [[casimir_eigenvalue(n) * v for v in r] for r in eye(2 * n + 1)]


def _action_on_tensor(word, g):
    mats = []
    for n, s in word:
        a = classical_action(n)[g]
        if s < 0:
            a = [[-a[j][i] for j in range(len(a))] for i in range(len(a))]
        mats.append(a)
    total = None
    for k in range(len(mats)):
        t = [[Fraction(1)]]
        for q, (n, _) in enumerate(word):
            t = kron(t, mats[q] if q == k else eye(2 * n + 1))
        total = t if total is None else add(total, t)
    return total


@pytest.mark.parametrize(
    "C",
    [
        ChordDiagram(2, 0, (((0, 0), (1, 0)),)),
        ChordDiagram(2, 0, (((0, 0), (1, 1)), ((0, 1), (1, 0))), (1, -1)),
        ChordDiagram(2, 1, (((0, 0), (2, 0)), ((1, 0), (2, 1)))),
        ChordDiagram(1, 0, (((0, 0), (0, 2)), ((0, 1), (0, 3)))),
    ],
)
@pytest.mark.parametrize("n", [1, 2])
def test_weight_is_invariant(C, n):
    w = dense(weight_sl2(C, n))
    word = [(n, C.orientations[i]) for i in range(C.n_strands)]
    for g in ("E", "F", "H"):
        a = _action_on_tensor(word, g)
        assert matmul(w, a) == matmul(a, w)


def test_weight_multiplicative_under_stacking():
    n = 1
    A = ChordDiagram(2, 0, (((0, 0), (1, 0)),))
    B = ChordDiagram(2, 0, (((0, 0), (0, 1)), ((1, 0), (0, 2))))
    AB = A.stack(B)
    # A on top acts first
    assert dense(weight_sl2(AB, n)) == matmul(dense(weight_sl2(B, n)), dense(weight_sl2(A, n)))


def test_chord_validation():
    with pytest.raises(ValueError):
        ChordDiagram(1, 0, (((0, 0), (0, 0)),))
    with pytest.raises(ValueError):
        ChordDiagram(1, 0, (((0, 0), (3, 0)),))


# -- degree bounds ----------------------------------------------------------------


def test_finite_difference_degree():
    assert finite_difference_degree([0, 0, 0]) == -1
    assert finite_difference_degree([5, 5, 5, 5]) == 0
    assert finite_difference_degree([n**3 - n for n in range(8)]) == 3
    assert finite_difference_degree([2**n for n in range(6)]) is None


def test_unknot_h_coefficients():
    for n in range(8):
        N = 2 * n + 1
        c = h_expand(qint(N), 2)
        assert c[0] == N
        assert c[2] == Fraction(N * (N * N - 1), 24)
    rep = degree_bound_check("unknot(0)", 10, 4)
    assert rep.measured[0] == 1
    assert rep.measured[2] == 3
    assert rep.ok


def test_hseries_backend_matches_symbolic_expansion():
    p = builtin("trefoil_right(0)")
    ring = Ring("hseries", order=4)
    for n in range(4):
        assert evaluate_J(p, {"C1": n}, ring).h_coefficients() == h_expand(evaluate_J(p, {"C1": n}), 4)


def test_trefoil_degree_small():
    rep = degree_bound_check("trefoil_left(0)", 6, 2)
    assert rep.ok
    assert all(m <= 2 * i + 1 for i, m in enumerate(rep.measured))
