"""The sl2 weight system on chord diagrams and polynomial degree checks for colored J."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

from .diagram import FramedLinkPresentation, builtin
from .invariant import Ring, evaluate_J, InvariantError
from .repcat import MorphismMatrix

Matrix = list[list[Fraction]]

# Killing form of sl2: K(E,F) = 4, K(H,H) = 8.  Dual basis of (E, F, H) is (F/4, E/4, H/8).
_BASIS = ("E", "F", "H")
_DUAL = (("F", Fraction(1, 4)), ("E", Fraction(1, 4)), ("H", Fraction(1, 8)))


@dataclass(frozen=True)
class ChordDiagram:
    """Chords on m open strands followed by closed circles.

    ``orientations`` has one sign per component (+1 downward strand / V, -1 upward / V*).
    A chord is a pair of ends (component, position); positions order the ends along
    each component in the direction of the orientation.
    """

    n_strands: int
    n_circles: int = 0
    chords: tuple[tuple[tuple[int, float], tuple[int, float]], ...] = ()
    orientations: tuple[int, ...] | None = None

    def __post_init__(self):
        total = self.n_strands + self.n_circles
        if self.orientations is None:
            object.__setattr__(self, "orientations", (1,) * total)
        if len(self.orientations) != total:
            raise ValueError("one orientation per component")
        seen = set()
        for chord in self.chords:
            if len(chord) != 2 or chord[0] == chord[1]:
                raise ValueError(f"bad chord {chord!r}")
            for comp, pos in chord:
                if not 0 <= comp < total:
                    raise ValueError(f"chord end on missing component {comp}")
                if (comp, pos) in seen:
                    raise ValueError(f"two chord ends at {(comp, pos)}")
                seen.add((comp, pos))

    @property
    def n_components(self) -> int:
        return self.n_strands + self.n_circles

    def stack(self, other: ChordDiagram) -> ChordDiagram:
        """self above other on shared strands; circles are placed side by side."""
        if self.n_strands != other.n_strands:
            raise ValueError("stacking needs the same number of strands")
        if self.orientations[: self.n_strands] != other.orientations[: other.n_strands]:
            raise ValueError("strand orientations differ")
        top = max((p for ch in self.chords for c, p in ch), default=0) + 1
        m = self.n_strands

        def shift(end):
            c, p = end
            if c < m:
                return (c, p + top)
            return (c + self.n_circles, p)

        chords = self.chords + tuple((shift(a), shift(b)) for a, b in other.chords)
        orients = self.orientations + other.orientations[m:]
        return ChordDiagram(m, self.n_circles + other.n_circles, chords, orients)


def classical_action(n: int) -> dict[str, Matrix]:
    """E, F, H on the classical V_n (dim 2n+1, basis b_j of H-weight 2n-2j)."""
    d = 2 * n + 1
    E = [[Fraction(0)] * d for _ in range(d)]
    F = [[Fraction(0)] * d for _ in range(d)]
    H = [[Fraction(0)] * d for _ in range(d)]
    for j in range(d):
        H[j][j] = Fraction(2 * n - 2 * j)
        if j + 1 < d:
            F[j + 1][j] = Fraction(j + 1)
        if j >= 1:
            E[j - 1][j] = Fraction(2 * n - j + 1)
    return {"E": E, "F": F, "H": H}


def _dual_action(mats: dict[str, Matrix]) -> dict[str, Matrix]:
    return {k: [[-m[j][i] for j in range(len(m))] for i in range(len(m))] for k, m in mats.items()}


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def _eye(d: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(d)] for i in range(d)]


def _kron(a: Matrix, b: Matrix) -> Matrix:
    return [[x * y for x in ra for y in rb] for ra in a for rb in b]


def weight_sl2(C: ChordDiagram, color: int | Sequence[int]) -> MorphismMatrix:
    """Sum over states of insertions x_i, x^i at chord ends, with circles traced.

    The result is an endomorphism of the tensor product of the strand modules;
    with no strands it is a 1x1 matrix holding a scalar.
    """
    colors = [color] * C.n_components if isinstance(color, int) else list(color)
    if len(colors) != C.n_components:
        raise ValueError("one color per component")
    actions = []
    for c, s in zip(colors, C.orientations):
        base = classical_action(c)
        actions.append(base if s > 0 else _dual_action(base))
    ends_on: list[list[tuple[float, int, int]]] = [[] for _ in range(C.n_components)]
    for k, (a, b) in enumerate(C.chords):
        ends_on[a[0]].append((a[1], k, 0))
        ends_on[b[0]].append((b[1], k, 1))
    for lst in ends_on:
        lst.sort()

    strand_dims = [2 * colors[i] + 1 for i in range(C.n_strands)]
    total_dim = 1
    for d in strand_dims:
        total_dim *= d
    acc: Matrix = [[Fraction(0)] * total_dim for _ in range(total_dim)]

    for state in product(range(3), repeat=len(C.chords)):
        scalar = Fraction(1)
        per_comp = []
        for comp in range(C.n_components):
            mats = actions[comp]
            d = 2 * colors[comp] + 1
            cur = _eye(d)
            for _, k, which in ends_on[comp]:
                i = state[k]
                if which == 0:
                    x = mats[_BASIS[i]]
                else:
                    name, coef = _DUAL[i]
                    x = [[coef * y for y in row] for row in mats[name]]
                cur = _matmul(x, cur)  # later ends act after earlier ones
            if comp < C.n_strands:
                per_comp.append(cur)
            else:
                scalar *= sum(cur[j][j] for j in range(d))
        if scalar == 0:
            continue
        term = [[Fraction(1)]]
        for m in per_comp:
            term = _kron(term, m)
        for i in range(total_dim):
            for j in range(total_dim):
                if term[i][j]:
                    acc[i][j] += scalar * term[i][j]

    word = tuple((colors[i], C.orientations[i]) for i in range(C.n_strands))
    entries = {(i, j): acc[i][j] for i in range(total_dim) for j in range(total_dim) if acc[i][j]}
    return MorphismMatrix(word, word, entries)


def casimir_eigenvalue(n: int) -> Fraction:
    """Eigenvalue of sum x_i x^i (Killing-dual bases) on V_n."""
    return Fraction(n * (n + 1), 2)


# ---------------------------------------------------------------------------
# degree bounds


def finite_difference_degree(values: Sequence[Fraction]) -> int | None:
    """Degree of the polynomial through equally spaced samples.

    Returns -1 for the zero sequence, None when the samples cannot certify a
    degree (the last difference that fits is still nonzero).
    """
    row = [Fraction(v) for v in values]
    if not any(row):
        return -1
    deg = 0
    while len(row) > 1:
        row = [b - a for a, b in zip(row, row[1:])]
        if not any(row):
            return deg
        deg += 1
    return None


@dataclass
class DegreeReport:
    name: str
    max_color: int
    order: int
    coefficients: list[list[Fraction]] = field(default_factory=list)  # [n][i]
    measured: list[int | None] = field(default_factory=list)
    bounds: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(m is not None and m <= b for m, b in zip(self.measured, self.bounds))

    def rows(self) -> list[tuple[int, int | None, int, bool]]:
        return [
            (i, m, b, m is not None and m <= b)
            for i, (m, b) in enumerate(zip(self.measured, self.bounds))
        ]


def knot_family(p: FramedLinkPresentation) -> Callable[[int], tuple[FramedLinkPresentation, dict]]:
    names = p.info().names
    if len(names) != 1:
        raise ValueError("degree checks take a single-component knot")
    return lambda n: (p, {names[0]: n})


def degree_bound_check(
    K: FramedLinkPresentation | str, max_color: int = 10, order: int = 4, strict: bool = False
) -> DegreeReport:
    """h-expand J(K colored n) for n = 0..max_color and measure the degree in n of each coefficient.

    Evaluation runs in Q[h]/(h^(order+1)) directly, which equals h-expanding
    the symbolic J but is far cheaper at large colors.
    """
    if isinstance(K, str):
        K = builtin(K)
    fam = knot_family(K)
    ring = Ring("hseries", order=order)
    coeffs = []
    for n in range(max_color + 1):
        p, colors = fam(n)
        coeffs.append(evaluate_J(p, colors, ring).h_coefficients())
    rep = DegreeReport(K.name or "knot", max_color, order, coeffs)
    for i in range(order + 1):
        rep.measured.append(finite_difference_degree([c[i] for c in coeffs]))
        rep.bounds.append(2 * i + 1)
    if strict and not rep.ok:
        raise InvariantError(f"degree bound violated: {rep.rows()}")
    return rep
