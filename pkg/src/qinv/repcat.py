"""Quantum sl2 at the level of root-lattice colored modules over Z[v, 1/v].

An object is a pair (n, sign): n is the color (highest weight n*alpha, dimension
2n+1), sign +1 is the module V_n and sign -1 its dual. Words of objects stand
for tensor products. Bases: V_n has b_j = F^(j) b_0 with weight (n-j)*alpha;
V_n^* has the dual basis b^j of weight -(n-j)*alpha.

Coproduct: Delta(E) = E (x) K + 1 (x) E, Delta(F) = F (x) 1 + K^-1 (x) F,
Delta(K) = K (x) K.  Antipode: S(E) = -E K^-1, S(F) = -K F.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import prod
from typing import Callable, Iterable, Sequence

from .exactring import (
    ONE,
    ZERO,
    CyclotomicInteger,
    LaurentPoly,
    qbinomial,
    qfactorial,
    qint,
    specialize,
)

Obj = tuple[int, int]
ObjectWord = tuple[Obj, ...]
Entries = dict[tuple[int, int], object]

_mono = LaurentPoly.monomial
_V_MINUS_VINV = LaurentPoly({1: 1, -1: -1})


def as_obj(x) -> Obj:
    if isinstance(x, int):
        return (x, 1)
    n, s = x
    if isinstance(s, str):
        s = 1 if s == "+" else -1
    if n < 0 or s not in (1, -1):
        raise ValueError(f"bad object {x!r}")
    return (int(n), int(s))


def as_word(xs: Iterable) -> ObjectWord:
    return tuple(as_obj(x) for x in xs)


def obj_dim(x: Obj) -> int:
    return 2 * x[0] + 1


def word_dim(word: ObjectWord) -> int:
    return prod(obj_dim(x) for x in word)


def obj_weights(x: Obj) -> tuple[int, ...]:
    """Weights as multiples of alpha (the sl2 root); (a alpha | b alpha) = 2ab."""
    n, s = x
    return tuple(s * (n - j) for j in range(2 * n + 1))


def word_basis(word: ObjectWord) -> list[tuple[int, ...]]:
    return list(product(*(range(obj_dim(x)) for x in word)))


def flat_index(word: ObjectWord, idx: Sequence[int]) -> int:
    out = 0
    for x, i in zip(word, idx):
        out = out * obj_dim(x) + i
    return out


def unflat_index(word: ObjectWord, k: int) -> tuple[int, ...]:
    out = []
    for x in reversed(word):
        k, i = divmod(k, obj_dim(x))
        out.append(i)
    return tuple(reversed(out))


@dataclass(frozen=True)
class MorphismMatrix:
    """A matrix from domain to codomain, stored as its nonzero entries.

    entries[(row, col)] with row indexing the codomain basis, col the domain basis.
    Entries are LaurentPoly, or CyclotomicInteger once specialized.
    """

    domain: ObjectWord
    codomain: ObjectWord
    entries: Entries = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        rows, cols = self.shape
        for (i, j), val in self.entries.items():
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i},{j}) outside shape {self.shape}")

    @property
    def shape(self) -> tuple[int, int]:
        return word_dim(self.codomain), word_dim(self.domain)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MorphismMatrix):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and _clean(self.entries) == _clean(other.entries)
        )

    def __hash__(self):
        return hash((self.domain, self.codomain))

    def is_zero(self) -> bool:
        return not _clean(self.entries)

    def get(self, i: int, j: int, default=ZERO):
        return self.entries.get((i, j), default)

    def to_dense(self, zero=ZERO) -> list[list]:
        rows, cols = self.shape
        out = [[zero] * cols for _ in range(rows)]
        for (i, j), val in self.entries.items():
            out[i][j] = val
        return out

    def compose(self, other: MorphismMatrix) -> MorphismMatrix:
        """self after other."""
        if other.codomain != self.domain:
            raise ValueError("composition of incompatible morphisms")
        by_row: dict[int, list] = {}
        for (k, j), b in other.entries.items():
            by_row.setdefault(k, []).append((j, b))
        out: dict = {}
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                key = (i, j)
                prev = out.get(key)
                out[key] = a * b if prev is None else prev + a * b
        return MorphismMatrix(other.domain, self.codomain, _clean(out))

    __matmul__ = compose

    def tensor(self, other: MorphismMatrix) -> MorphismMatrix:
        r2, c2 = other.shape
        out = {}
        for (i1, j1), a in self.entries.items():
            for (i2, j2), b in other.entries.items():
                out[(i1 * r2 + i2, j1 * c2 + j2)] = a * b
        return MorphismMatrix(
            self.domain + other.domain, self.codomain + other.codomain, _clean(out)
        )

    def scale(self, c) -> MorphismMatrix:
        return MorphismMatrix(
            self.domain, self.codomain, _clean({k: c * x for k, x in self.entries.items()})
        )

    def __add__(self, other: MorphismMatrix) -> MorphismMatrix:
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise ValueError("sum of morphisms with different (co)domains")
        out = dict(self.entries)
        for k, b in other.entries.items():
            out[k] = out[k] + b if k in out else b
        return MorphismMatrix(self.domain, self.codomain, _clean(out))

    def __sub__(self, other: MorphismMatrix) -> MorphismMatrix:
        return self + other.scale(-1)

    def map_entries(self, fn: Callable) -> MorphismMatrix:
        return MorphismMatrix(
            self.domain, self.codomain, _clean({k: fn(x) for k, x in self.entries.items()})
        )

    def specialize(self, r: int, root: int = 1) -> MorphismMatrix:
        return self.map_entries(lambda p: specialize(p, r, root))

    def trace(self):
        if self.domain != self.codomain:
            raise ValueError("trace of a non-endomorphism")
        total = None
        for (i, j), a in self.entries.items():
            if i == j:
                total = a if total is None else total + a
        return ZERO if total is None else total


def _clean(entries: dict) -> dict:
    return {k: x for k, x in entries.items() if x}


def identity(word) -> MorphismMatrix:
    word = as_word(word)
    return MorphismMatrix(word, word, {(i, i): ONE for i in range(word_dim(word))})


# ---------------------------------------------------------------------------
# single-object actions


@lru_cache(maxsize=None)
def _k_power(x: Obj, p: int) -> dict:
    ws = obj_weights(x)
    return {(j, j): _mono(2 * p * w) for j, w in enumerate(ws)}


@lru_cache(maxsize=None)
def e_divided(x: Obj, t: int) -> dict:
    """Matrix of E^(t) = E^t/[t]! on the object x."""
    n, s = x
    out = {}
    if s == 1:
        for j in range(t, 2 * n + 1):
            out[(j - t, j)] = qbinomial(2 * n - j + t, t)
    else:
        # transpose of S(E^(t)) = (-1)^t v^{-t(t-1)} E^(t) K^-t on V_n
        sign = -1 if t % 2 else 1
        for j in range(t, 2 * n + 1):
            c = qbinomial(2 * n - j + t, t) * _mono(-t * (t - 1) - 2 * t * (n - j), sign)
            out[(j, j - t)] = c
    return out


@lru_cache(maxsize=None)
def f_divided(x: Obj, t: int) -> dict:
    """Matrix of F^(t) = F^t/[t]! on the object x."""
    n, s = x
    out = {}
    if s == 1:
        for j in range(0, 2 * n + 1 - t):
            out[(j + t, j)] = qbinomial(j + t, t)
    else:
        # transpose of S(F^(t)) = (-1)^t v^{t(t-1)} K^t F^(t) on V_n
        sign = -1 if t % 2 else 1
        for j in range(0, 2 * n + 1 - t):
            c = qbinomial(j + t, t) * _mono(t * (t - 1) + 2 * t * (n - j - t), sign)
            out[(j, j + t)] = c
    return out


def _single(gen: str, x: Obj) -> dict:
    if gen == "E":
        return e_divided(x, 1)
    if gen == "F":
        return f_divided(x, 1)
    if gen == "K":
        return _k_power(x, 1)
    if gen == "Kinv":
        return _k_power(x, -1)
    if gen == "1":
        return {(j, j): ONE for j in range(obj_dim(x))}
    raise ValueError(f"unknown generator {gen!r}")


@dataclass(frozen=True)
class IrrepModule:
    """V_n with E, F, K given as MorphismMatrix on the one-letter word."""

    n: int
    E: MorphismMatrix
    F: MorphismMatrix
    K: MorphismMatrix
    Kinv: MorphismMatrix

    @property
    def dim(self) -> int:
        return 2 * self.n + 1

    @property
    def weights(self) -> tuple[int, ...]:
        return obj_weights((self.n, 1))


def irrep(n: int, sign: int = 1) -> IrrepModule:
    if n < 0:
        raise ValueError("color must be nonnegative")
    x = (n, sign)
    w = (x,)
    mats = {g: MorphismMatrix(w, w, dict(_single(g, x))) for g in ("E", "F", "K", "Kinv")}
    return IrrepModule(n, mats["E"], mats["F"], mats["K"], mats["Kinv"])


def _kron_list(mats: list[dict], word: ObjectWord) -> dict:
    out = {(0, 0): ONE}
    for m, x in zip(mats, word):
        d = obj_dim(x)
        nxt = {}
        for (i, j), a in out.items():
            for (k, l), b in m.items():
                nxt[(i * d + k, j * d + l)] = a * b
        out = nxt
    return out


def tensor_action(gen: str, word) -> MorphismMatrix:
    """Action of E, F, K (or Kinv) on a tensor product through the iterated coproduct."""
    word = as_word(word)
    if not word:
        raise ValueError("empty word")
    if gen in ("K", "Kinv"):
        return MorphismMatrix(word, word, _kron_list([_single(gen, x) for x in word], word))
    total: dict = {}
    for pos in range(len(word)):
        mats = []
        for q, x in enumerate(word):
            if q == pos:
                mats.append(_single(gen, x))
            elif gen == "E":
                mats.append(_single("1" if q < pos else "K", x))
            elif gen == "F":
                mats.append(_single("Kinv" if q < pos else "1", x))
            else:
                raise ValueError(f"unknown generator {gen!r}")
        for k, val in _kron_list(mats, word).items():
            total[k] = total[k] + val if k in total else val
    return MorphismMatrix(word, word, _clean(total))


# ---------------------------------------------------------------------------
# braiding and twist


@lru_cache(maxsize=None)
def _theta_coeff(t: int, inverse: bool) -> LaurentPoly:
    base = _V_MINUS_VINV**t * qfactorial(t)
    if inverse:
        return base * _mono(-t * (t - 1) // 2, -1 if t % 2 else 1)
    return base * _mono(t * (t - 1) // 2)


@lru_cache(maxsize=None)
def _braiding_entries(x: Obj, y: Obj, inverse: bool) -> dict:
    dx, dy = obj_dim(x), obj_dim(y)
    wx, wy = obj_weights(x), obj_weights(y)
    tmax = min(dx, dy) - 1
    out: dict = {}
    for t in range(tmax + 1):
        ex, fy = e_divided(x, t), f_divided(y, t)
        if not ex or not fy:
            continue
        coef = _theta_coeff(t, inverse)
        for (i2, i), a in ex.items():
            for (j2, j), b in fy.items():
                if inverse:
                    # c^-1 : y (x) x -> x (x) y is Theta^-1 Psi^-1 P
                    psi = _mono(-2 * wx[i] * wy[j])
                    key = (i2 * dy + j2, j * dx + i)
                else:
                    psi = _mono(2 * wx[i2] * wy[j2])
                    key = (j2 * dx + i2, i * dy + j)
                val = coef * a * b * psi
                out[key] = out[key] + val if key in out else val
    return _clean(out)


def braiding(a, b) -> MorphismMatrix:
    """c_{X,Y} = P Psi Theta-bar : X (x) Y -> Y (x) X."""
    x, y = as_obj(a), as_obj(b)
    return MorphismMatrix((x, y), (y, x), dict(_braiding_entries(x, y, False)))


def braiding_inverse(a, b) -> MorphismMatrix:
    """Inverse of braiding(a, b), as a map Y (x) X -> X (x) Y."""
    x, y = as_obj(a), as_obj(b)
    return MorphismMatrix((y, x), (x, y), dict(_braiding_entries(x, y, True)))


def twist_exponent(n: int) -> int:
    # (n alpha + 2 rho | n alpha) with 2 rho = alpha
    return 2 * n * n + 2 * n


def twist_scalar(n: int) -> LaurentPoly:
    return _mono(twist_exponent(n))


# ---------------------------------------------------------------------------
# duality
#
# variant "l": the left strand is the module V (oriented downward), so
#   cup("l"): 1 -> V (x) V*,  cap("l"): V (x) V* -> 1   (carries K)
# variant "r": the right strand is V,
#   cup("r"): 1 -> V* (x) V   (carries K^-1),  cap("r"): V* (x) V -> 1


def _variant(variant: str) -> str:
    v = variant.lower()
    if v in ("l", "left"):
        return "l"
    if v in ("r", "right"):
        return "r"
    raise ValueError(f"unknown duality variant {variant!r}")


@lru_cache(maxsize=None)
def _cup_entries(n: int, variant: str) -> dict:
    d = 2 * n + 1
    out = {}
    for j in range(d):
        if variant == "l":
            out[(j * d + j, 0)] = ONE
        else:
            out[(j * d + j, 0)] = _mono(-2 * (n - j))
    return out


@lru_cache(maxsize=None)
def _cap_entries(n: int, variant: str) -> dict:
    d = 2 * n + 1
    out = {}
    for j in range(d):
        if variant == "l":
            out[(0, j * d + j)] = _mono(2 * (n - j))
        else:
            out[(0, j * d + j)] = ONE
    return out


def cup(n: int, variant: str = "l") -> MorphismMatrix:
    v = _variant(variant)
    word = ((n, 1), (n, -1)) if v == "l" else ((n, -1), (n, 1))
    return MorphismMatrix((), word, dict(_cup_entries(n, v)))


def cap(n: int, variant: str = "l") -> MorphismMatrix:
    v = _variant(variant)
    word = ((n, 1), (n, -1)) if v == "l" else ((n, -1), (n, 1))
    return MorphismMatrix(word, (), dict(_cap_entries(n, v)))


def quantum_trace(f: MorphismMatrix):
    """tr(K_{2 rho} f); for sl2, K_{2 rho} = K."""
    if f.domain != f.codomain:
        raise ValueError(
            f"quantum trace needs an endomorphism, got {f.domain} -> {f.codomain}"
        )
    if not f.domain:
        return f.get(0, 0)
    return tensor_action("K", f.domain).compose(f).trace()


def qdim(n: int) -> LaurentPoly:
    return qint(2 * n + 1)


def specialize_matrix(m: MorphismMatrix, r: int, root: int = 1) -> MorphismMatrix:
    return m.specialize(r, root)


def galois_matrix(m: MorphismMatrix, a: int) -> MorphismMatrix:
    def fn(x):
        if isinstance(x, CyclotomicInteger):
            return x.galois(a)
        raise TypeError("Galois action needs specialized entries")

    return m.map_entries(fn)
