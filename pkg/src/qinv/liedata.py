"""Cartan data, the invariant form, the fundamental alcove and quantum dimensions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactring import ONE, LaurentPoly, is_prime, qint

RootVector = tuple[int, ...]

_CARTAN = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "A3": ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
    "B2": ((2, -1), (-2, 2)),
    "G2": ((2, -1), (-3, 2)),
}
_ALIASES = {"sl2": "A1", "sl3": "A2", "sl4": "A3", "so5": "B2", "sp4": "B2", "g2": "G2"}


class InvalidRootOfUnity(ValueError):
    """Raised when r is not admissible; ``code`` names the failed condition."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class CartanDatum:
    name: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    d: tuple[int, ...]
    form: tuple[tuple[int, ...], ...]
    positive_roots: tuple[RootVector, ...]
    rho: tuple[Fraction, ...]
    alpha0: RootVector
    dmax: int
    h_dual: int
    num_pos_roots: int
    dim: int
    det: int

    def pairing(self, mu, nu) -> int | Fraction:
        if len(mu) != self.rank or len(nu) != self.rank:
            raise ValueError(f"expected vectors of length {self.rank}")
        return sum(
            mu[i] * self.form[i][j] * nu[j]
            for i in range(self.rank)
            for j in range(self.rank)
        )

    def simple_root(self, i: int) -> RootVector:
        return tuple(int(j == i) for j in range(self.rank))

    def rho_pairing(self, mu) -> int:
        val = self.pairing(self.rho, mu)
        if Fraction(val).denominator != 1:
            raise ArithmeticError(f"(rho|{mu}) = {val} is not integral")
        return int(val)


def _det(m) -> int:
    m = [[Fraction(x) for x in row] for row in m]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            for j in range(c, n):
                m[i][j] -= f * m[c][j]
    return int(det)


def _symmetrizers(a) -> tuple[int, ...]:
    n = len(a)
    d: list[Fraction | None] = [None] * n
    d[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if a[i][j] and d[j] is None:
                d[j] = d[i] * a[i][j] / a[j][i]
                stack.append(j)
    lo = min(d)
    return tuple(int(x / lo) for x in d)


@lru_cache(maxsize=None)
def cartan_datum(name: str) -> CartanDatum:
    key = _ALIASES.get(name.lower(), name.upper())
    if key not in _CARTAN:
        raise KeyError(f"unknown algebra {name!r}; known: {sorted(_CARTAN) + sorted(_ALIASES)}")
    a = _CARTAN[key]
    n = len(a)
    d = _symmetrizers(a)
    form = tuple(tuple(d[i] * a[i][j] for j in range(n)) for i in range(n))
    for i in range(n):
        for j in range(n):
            assert form[i][j] == form[j][i], "symmetrized Cartan matrix is not symmetric"

    def pair(x, y):
        return sum(x[i] * form[i][j] * y[j] for i in range(n) for j in range(n))

    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        beta = frontier.pop()
        for i in range(n):
            k = pair(beta, simple[i]) // d[i]
            img = tuple(beta[j] - (k if j == i else 0) for j in range(n))
            if img not in roots and any(img):
                roots.add(img)
                frontier.append(img)
    positive = tuple(sorted((b for b in roots if all(c >= 0 for c in b)), key=lambda b: (sum(b), b)))
    rho = tuple(Fraction(sum(b[i] for b in positive), 2) for i in range(n))
    short = [b for b in positive if pair(b, b) == 2]
    alpha0 = max(short, key=lambda b: (sum(b), b))
    dmax = max(d)
    max_rho = max(sum(b[i] * form[i][j] * rho[j] for i in range(n) for j in range(n)) for b in positive)
    h_dual = 1 + max_rho / dmax
    assert h_dual.denominator == 1
    s = len(positive)
    datum = CartanDatum(
        name=key,
        rank=n,
        cartan=a,
        d=d,
        form=form,
        positive_roots=positive,
        rho=rho,
        alpha0=alpha0,
        dmax=dmax,
        h_dual=int(h_dual),
        num_pos_roots=s,
        dim=n + 2 * s,
        det=_det(a),
    )
    for i in range(n):
        assert datum.pairing(datum.rho, simple[i]) == d[i]
    for b in positive:
        datum.rho_pairing(b)
    return datum


def sl2() -> CartanDatum:
    return cartan_datum("A1")


def pairing(datum: CartanDatum, mu, nu):
    return datum.pairing(mu, nu)


def validate_r(datum: CartanDatum, r: int) -> None:
    """Raise InvalidRootOfUnity unless r is an odd prime >= d h^v not dividing det."""
    if r % 2 == 0:
        raise InvalidRootOfUnity("even", f"r={r} is even")
    if not is_prime(r):
        raise InvalidRootOfUnity("non-prime", f"r={r} is not prime")
    if r < datum.dmax * datum.h_dual:
        raise InvalidRootOfUnity(
            "too-small", f"r={r} is below d*h_dual={datum.dmax * datum.h_dual} for {datum.name}"
        )
    if datum.det % r == 0:
        raise InvalidRootOfUnity("divides-det", f"r={r} divides det={datum.det}")


def level_k(datum: CartanDatum, r: int) -> int:
    return r - 1 - datum.rho_pairing(datum.alpha0)


def alcove_colors(datum: CartanDatum, r: int) -> list[RootVector]:
    """Root-lattice points of the fundamental alcove at level k(r), in lexicographic order."""
    validate_r(datum, r)
    k = level_k(datum, r)
    n = datum.rank
    # (omega_i | alpha0) > 0, so the Dynkin labels are bounded.
    form = [[Fraction(x) for x in row] for row in datum.form]
    inv = _inverse(form)
    omega = [tuple(inv[j][i] * datum.d[i] for j in range(n)) for i in range(n)]
    caps = []
    for i in range(n):
        w = datum.pairing(omega[i], datum.alpha0)
        caps.append(int(k // w))
    found = []

    def rec(i: int, labels: list[int]) -> None:
        if i == n:
            coords = [sum(labels[j] * omega[j][t] for j in range(n)) for t in range(n)]
            if all(Fraction(c).denominator == 1 for c in coords):
                mu = tuple(int(c) for c in coords)
                if datum.pairing(mu, datum.alpha0) <= k:
                    found.append(mu)
            return
        for lab in range(caps[i] + 1):
            rec(i + 1, labels + [lab])

    rec(0, [])
    return sorted(found)


def _inverse(m):
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(i for i in range(c, n) if aug[i][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def is_dominant(datum: CartanDatum, lam) -> bool:
    return all(datum.pairing(lam, datum.simple_root(i)) >= 0 for i in range(datum.rank))


def quantum_dimension_poly(datum: CartanDatum, lam) -> LaurentPoly:
    """prod over positive roots of [(lam + rho | alpha)] / [(rho | alpha)]."""
    if not is_dominant(datum, lam):
        raise ValueError(f"{lam} is not dominant")
    num = ONE
    den = ONE
    for alpha in datum.positive_roots:
        top = datum.pairing(lam, alpha) + datum.rho_pairing(alpha)
        num = num * qint(int(top))
        den = den * qint(datum.rho_pairing(alpha))
    return num / den


def weyl_dimension(datum: CartanDatum, lam) -> Fraction:
    out = Fraction(1)
    for alpha in datum.positive_roots:
        out *= Fraction(datum.pairing(lam, alpha) + datum.rho_pairing(alpha), datum.rho_pairing(alpha))
    return out


def zeta_order(datum: CartanDatum, r: int) -> int:
    """Order of the root of unity zeta whose ring contains kappa."""
    sign_w0 = (-1) ** datum.num_pos_roots
    if datum.rank % 2 == 0:
        return r if sign_w0 == 1 else 4 * r
    return r if (sign_w0 * r) % 4 == 1 else 4 * r
