"""Exact rings: Laurent polynomials Z[v, 1/v], cyclotomic integers Z[xi_r],
their fraction field with integer denominators, and the kappa extension.

Nothing here ever touches a floating point embedding of xi; a cyclotomic
integer is a coefficient vector in the power basis 1, xi, ..., xi^(r-2).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Mapping, Sequence


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class LaurentPoly:
    """An element of Z[v, 1/v] stored sparsely as {exponent: coefficient}."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self._c: dict[int, int] = (
            {int(e): int(c) for e, c in coeffs.items() if c} if coeffs else {}
        )
        self._hash: int | None = None

    @classmethod
    def _raw(cls, d: dict[int, int]) -> LaurentPoly:
        # d must already be free of zero coefficients
        obj = cls.__new__(cls)
        obj._c = d
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> LaurentPoly:
        return cls._raw({exp: coeff} if coeff else {})

    @classmethod
    def const(cls, c: int) -> LaurentPoly:
        return cls.monomial(0, c)

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def min_exp(self) -> int:
        return min(self._c)

    def max_exp(self) -> int:
        return max(self._c)

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __add__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        if len(other._c) > len(self._c):
            a, b = other._c, self._c
        else:
            a, b = self._c, other._c
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw({e: -c for e, c in self._c.items()})

    def __sub__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other: int) -> LaurentPoly:
        return LaurentPoly.const(other) - self

    def __mul__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            if not other:
                return LaurentPoly()
            return LaurentPoly._raw({e: c * other for e, c in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            ((eb, cb),) = b.items()
            return LaurentPoly._raw({e + eb: c * cb for e, c in a.items()})
        out: dict[int, int] = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                k = ea + eb
                out[k] = get(k, 0) + ca * cb
        return LaurentPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if not self.is_monomial() or abs(next(iter(self._c.values()))) != 1:
                raise ValueError("only unit monomials have negative powers")
            ((e, c),) = self._c.items()
            return LaurentPoly.monomial(-e * (-n), c ** (-n))
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def bar(self) -> LaurentPoly:
        """The involution v -> 1/v."""
        return LaurentPoly._raw({-e: c for e, c in self._c.items()})

    def is_palindromic(self) -> bool:
        return self == self.bar()

    def evaluate(self, x):
        return sum((c * x**e for e, c in self._c.items()), start=0 * x)

    def divmod_exact(self, other: LaurentPoly) -> LaurentPoly:
        """Exact quotient self / other; raises ArithmeticError on a remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if self.is_zero():
            return LaurentPoly()
        top_b = other.max_exp()
        lead = other._c[top_b]
        low_b = other.min_exp()
        rem = dict(self._c)
        quot: dict[int, int] = {}
        while rem:
            top = max(rem)
            if top - top_b < min(rem) - low_b:
                raise ArithmeticError("inexact Laurent polynomial division")
            c = rem[top]
            if c % lead:
                raise ArithmeticError("inexact Laurent polynomial division")
            q = c // lead
            shift = top - top_b
            quot[shift] = q
            for e, cb in other._c.items():
                k = e + shift
                s = rem.get(k, 0) - q * cb
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return LaurentPoly._raw(quot)

    def __truediv__(self, other: LaurentPoly | int) -> LaurentPoly:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        return self.divmod_exact(other)

    def to_json(self) -> list[list]:
        return [[e, str(self._c[e])] for e in sorted(self._c)]

    @classmethod
    def from_json(cls, data: Sequence[Sequence]) -> LaurentPoly:
        return cls({int(e): int(c) for e, c in data})

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c, reverse=True):
            c = self._c[e]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                var = "v" if e == 1 else f"v^{e}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


V = LaurentPoly.monomial(1)
ONE = LaurentPoly.const(1)
ZERO = LaurentPoly()


@lru_cache(maxsize=None)
def qint(n: int) -> LaurentPoly:
    """Quantum integer [n] = (v^n - v^-n) / (v - 1/v)."""
    if n == 0:
        return ZERO
    if n < 0:
        return -qint(-n)
    return LaurentPoly({e: 1 for e in range(-(n - 1), n, 2)})


@lru_cache(maxsize=None)
def qfactorial(n: int) -> LaurentPoly:
    out = ONE
    for i in range(2, n + 1):
        out = out * qint(i)
    return out


@lru_cache(maxsize=None)
def qbinomial(n: int, k: int) -> LaurentPoly:
    """Symmetric quantum binomial coefficient, via
    [n, k] = v^k [n-1, k] + v^-(n-k) [n-1, k-1]."""
    if k < 0 or k > n:
        return ZERO
    if k == 0 or k == n:
        return ONE
    return V**k * qbinomial(n - 1, k) + LaurentPoly.monomial(-(n - k)) * qbinomial(
        n - 1, k - 1
    )


class CyclotomicInteger:
    """Element sum_i c_i xi^i (0 <= i <= r-2) of Z[xi], xi a primitive r-th root of 1."""

    __slots__ = ("r", "coeffs", "_hash")

    def __init__(self, r: int, coeffs: Iterable[int]):
        c = tuple(int(x) for x in coeffs)
        if len(c) != r - 1:
            raise ValueError(f"expected {r - 1} coefficients for r={r}, got {len(c)}")
        if not is_prime(r) or r == 2:
            raise ValueError(f"r must be an odd prime, got {r}")
        self.r = r
        self.coeffs = c
        self._hash = None

    @classmethod
    def _raw(cls, r: int, coeffs: tuple[int, ...]) -> CyclotomicInteger:
        obj = cls.__new__(cls)
        obj.r = r
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def from_cyclic(cls, r: int, cyc: Sequence[int]) -> CyclotomicInteger:
        """Reduce a length-r vector in Z[x]/(x^r - 1) to the power basis."""
        top = cyc[r - 1]
        return cls._raw(r, tuple(cyc[i] - top for i in range(r - 1)))

    @classmethod
    def const(cls, r: int, c: int) -> CyclotomicInteger:
        return cls._raw(r, (int(c),) + (0,) * (r - 2))

    @classmethod
    def xi_power(cls, r: int, s: int, coeff: int = 1) -> CyclotomicInteger:
        cyc = [0] * r
        cyc[s % r] = coeff
        return cls.from_cyclic(r, cyc)

    def _cyclic(self) -> list[int]:
        return list(self.coeffs) + [0]

    def _coerce(self, other) -> CyclotomicInteger:
        if isinstance(other, CyclotomicInteger):
            if other.r != self.r:
                raise ValueError(f"mixing r={self.r} and r={other.r}")
            return other
        if isinstance(other, int):
            return CyclotomicInteger.const(self.r, other)
        raise TypeError(f"cannot combine CyclotomicInteger with {type(other).__name__}")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = CyclotomicInteger.const(self.r, other)
        if not isinstance(other, CyclotomicInteger):
            return NotImplemented
        return self.r == other.r and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.r, self.coeffs))
        return self._hash

    def __add__(self, other) -> CyclotomicInteger:
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CyclotomicInteger._raw(
            self.r, tuple(a + b for a, b in zip(self.coeffs, o.coeffs))
        )

    __radd__ = __add__

    def __neg__(self) -> CyclotomicInteger:
        return CyclotomicInteger._raw(self.r, tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> CyclotomicInteger:
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return CyclotomicInteger._raw(
            self.r, tuple(a - b for a, b in zip(self.coeffs, o.coeffs))
        )

    def __rsub__(self, other) -> CyclotomicInteger:
        return self._coerce(other) - self

    def __mul__(self, other) -> CyclotomicInteger:
        if isinstance(other, int):
            return CyclotomicInteger._raw(self.r, tuple(a * other for a in self.coeffs))
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        r = self.r
        out = [0] * r
        b = o.coeffs
        nz_b = [(j, bj) for j, bj in enumerate(b) if bj]
        for i, ai in enumerate(self.coeffs):
            if not ai:
                continue
            for j, bj in nz_b:
                k = i + j
                if k >= r:
                    k -= r
                out[k] += ai * bj
        return CyclotomicInteger.from_cyclic(r, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> CyclotomicInteger:
        if n < 0:
            raise ValueError("negative powers live in CycRational")
        result = CyclotomicInteger.const(self.r, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def galois(self, a: int) -> CyclotomicInteger:
        """Apply the automorphism xi -> xi^a (a coprime to r)."""
        r = self.r
        if a % r == 0:
            raise ValueError("Galois exponent must be coprime to r")
        out = [0] * r
        for i, c in enumerate(self.coeffs):
            out[(i * a) % r] += c
        return CyclotomicInteger.from_cyclic(r, out)

    def conjugate(self) -> CyclotomicInteger:
        return self.galois(self.r - 1)

    def coefficient_sum(self) -> int:
        return sum(self.coeffs)

    def norm(self) -> int:
        """Field norm to Q, the product of all Galois conjugates."""
        prod = self
        for a in range(2, self.r):
            prod = prod * self.galois(a)
        if any(prod.coeffs[1:]):
            raise ArithmeticError("norm did not land in Z")
        return prod.coeffs[0]

    def content(self) -> int:
        return reduce(math.gcd, self.coeffs, 0)

    def to_json(self) -> dict:
        return {"r": self.r, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data) -> CyclotomicInteger:
        return cls(int(data["r"]), [int(c) for c in data["coeffs"]])

    def __repr__(self) -> str:
        return f"CyclotomicInteger({self.r}, {list(self.coeffs)})"

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                x = "xi" if i == 1 else f"xi^{i}"
                terms.append(x if c == 1 else f"-{x}" if c == -1 else f"{c}*{x}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def xi(r: int) -> CyclotomicInteger:
    return CyclotomicInteger.xi_power(r, 1)


def specialize(p: LaurentPoly, r: int, root: int = 1) -> CyclotomicInteger:
    """Image of p under v -> xi^root (root = 1 is the reference primitive root)."""
    out = [0] * r
    for e, c in p.items():
        out[(e * root) % r] += c
    return CyclotomicInteger.from_cyclic(r, out)


def conjugate(x: CyclotomicInteger) -> CyclotomicInteger:
    return x.conjugate()


def mod_r_reduce(x: CyclotomicInteger) -> CyclotomicInteger:
    r = x.r
    return CyclotomicInteger._raw(r, tuple(c % r for c in x.coeffs))


def _divide_by_xi_minus_one(x: CyclotomicInteger) -> CyclotomicInteger:
    # x(1) = 0 mod r; subtract (x(1)/r) * Phi_r so the polynomial vanishes at 1,
    # then synthetic division by (t - 1).
    r = x.r
    s = x.coefficient_sum()
    if s % r:
        raise ArithmeticError("not divisible by (xi - 1)")
    q = s // r
    poly = [c - q for c in x.coeffs] + [-q]  # degree r-1 now, value 0 at t=1
    out = [0] * (r - 1)
    acc = 0
    for i in range(r - 1, 0, -1):
        acc += poly[i]
        out[i - 1] = acc
    return CyclotomicInteger._raw(r, tuple(out))


def valuation_at_one_minus_xi(
    x: CyclotomicInteger,
) -> tuple[float | int, CyclotomicInteger]:
    """Largest k with (xi - 1)^k | x together with the exact quotient.

    Returns (math.inf, 0) for x = 0.
    """
    if x.is_zero():
        return math.inf, x
    k = 0
    r = x.r
    while x.coefficient_sum() % r == 0:
        x = _divide_by_xi_minus_one(x)
        k += 1
    return k, x


def h_expand(p: LaurentPoly, order: int) -> list[Fraction]:
    """Taylor coefficients of p(e^(h/2)) in h, up to h^order."""
    out = []
    fact = 1
    for i in range(order + 1):
        if i:
            fact *= i
        total = sum(c * e**i for e, c in p.items())
        out.append(Fraction(total, fact * 2**i))
    return out


class HSeries:
    """Image of Z[v, 1/v] in Q[h]/(h^(order+1)) under v = e^(h/2).

    Stored through power sums m_i = sum_e c_e e^i, which are integers; the
    h^i coefficient is m_i / (2^i i!).  Products follow the binomial rule
    m_i(pq) = sum_j C(i, j) m_j(p) m_(i-j)(q).
    """

    __slots__ = ("m",)

    def __init__(self, moments: Sequence[int]):
        self.m = tuple(moments)

    @classmethod
    def from_laurent(cls, p: LaurentPoly, order: int) -> HSeries:
        return cls(sum(c * e**i for e, c in p.items()) for i in range(order + 1))

    @classmethod
    def const(cls, c: int, order: int) -> HSeries:
        return cls((c,) + (0,) * order)

    def __bool__(self) -> bool:
        return any(self.m)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, HSeries) and self.m == other.m

    def __hash__(self) -> int:
        return hash(self.m)

    def __add__(self, other: HSeries) -> HSeries:
        return HSeries(tuple(a + b for a, b in zip(self.m, other.m)))

    def __mul__(self, other: HSeries) -> HSeries:
        a, b = self.m, other.m
        n = len(a)
        out = []
        for i in range(n):
            row = _binom_row(i)
            out.append(sum(row[j] * a[j] * b[i - j] for j in range(i + 1)))
        return HSeries(out)

    def h_coefficients(self) -> list[Fraction]:
        return [
            Fraction(mi, 2**i * math.factorial(i)) for i, mi in enumerate(self.m)
        ]

    def __repr__(self) -> str:
        return f"HSeries({self.h_coefficients()})"


@lru_cache(maxsize=None)
def _binom_row(i: int) -> tuple[int, ...]:
    return tuple(math.comb(i, j) for j in range(i + 1))


class CycRational:
    """num / den with num in Z[xi] and den a positive rational integer, reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num: CyclotomicInteger, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = math.gcd(num.content(), den)
        if g > 1:
            num = CyclotomicInteger._raw(num.r, tuple(c // g for c in num.coeffs))
            den //= g
        if num.is_zero():
            den = 1
        self.num = num
        self.den = den

    @property
    def r(self) -> int:
        return self.num.r

    @classmethod
    def of(cls, x: CycRational | CyclotomicInteger) -> CycRational:
        return x if isinstance(x, CycRational) else cls(x, 1)

    def is_integral(self) -> bool:
        return self.den == 1

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def _co(self, other) -> CycRational:
        if isinstance(other, CycRational):
            return other
        if isinstance(other, CyclotomicInteger):
            return CycRational(other, 1)
        if isinstance(other, int):
            return CycRational(CyclotomicInteger.const(self.r, other), 1)
        raise TypeError(f"cannot combine CycRational with {type(other).__name__}")

    def __eq__(self, other: object) -> bool:
        try:
            o = self._co(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other) -> CycRational:
        o = self._co(other)
        return CycRational(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> CycRational:
        return CycRational(-self.num, self.den)

    def __sub__(self, other) -> CycRational:
        return self + (-self._co(other))

    def __mul__(self, other) -> CycRational:
        o = self._co(other)
        return CycRational(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> CycRational:
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        x = self.num
        adj = CyclotomicInteger.const(x.r, 1)
        for a in range(2, x.r):
            adj = adj * x.galois(a)
        prod = x * adj
        if any(prod.coeffs[1:]):
            raise ArithmeticError("norm did not land in Z")
        n = prod.coeffs[0]
        return CycRational(adj * self.den, n)

    def __truediv__(self, other) -> CycRational:
        return self * self._co(other).inverse()

    def __pow__(self, n: int) -> CycRational:
        if n < 0:
            return self.inverse() ** (-n)
        return CycRational(self.num**n, self.den**n)

    def galois(self, a: int) -> CycRational:
        return CycRational(self.num.galois(a), self.den)

    def conjugate(self) -> CycRational:
        return self.galois(self.r - 1)

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "coeffs": [str(c) for c in self.num.coeffs],
            "den": str(self.den),
        }

    def __repr__(self) -> str:
        return f"CycRational({self.num!r}, {self.den})"

    def __str__(self) -> str:
        return f"({self.num})" if self.den == 1 else f"({self.num})/{self.den}"


class KappaScalar:
    """c * kappa^e with e in {0, 1}, where kappa^2 = kappa_sq is a fixed element."""

    __slots__ = ("c", "e", "kappa_sq")

    def __init__(self, c, e: int, kappa_sq: CycRational):
        c = CycRational.of(c)
        kappa_sq = CycRational.of(kappa_sq)
        q, e = divmod(e, 2)
        if q:
            c = c * kappa_sq**q
        self.c = c
        self.e = e
        self.kappa_sq = kappa_sq

    def _check(self, other: KappaScalar) -> None:
        if self.kappa_sq != other.kappa_sq:
            raise ValueError("KappaScalars built over different kappa^2")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KappaScalar):
            return NotImplemented
        return (
            self.kappa_sq == other.kappa_sq
            and (self.c == other.c)
            and (self.e == other.e or self.c.is_zero())
        )

    def __hash__(self) -> int:
        return hash((self.c, self.e if self.c else 0, self.kappa_sq))

    def __mul__(self, other) -> KappaScalar:
        if isinstance(other, KappaScalar):
            self._check(other)
            return KappaScalar(self.c * other.c, self.e + other.e, self.kappa_sq)
        return KappaScalar(self.c * other, self.e, self.kappa_sq)

    __rmul__ = __mul__

    def __add__(self, other: KappaScalar) -> KappaScalar:
        self._check(other)
        if self.c.is_zero():
            return other
        if other.c.is_zero():
            return self
        if self.e != other.e:
            raise ValueError("sum of c1 + c2*kappa is not a single KappaScalar")
        return KappaScalar(self.c + other.c, self.e, self.kappa_sq)

    def __neg__(self) -> KappaScalar:
        return KappaScalar(-self.c, self.e, self.kappa_sq)

    def __sub__(self, other: KappaScalar) -> KappaScalar:
        return self + (-other)

    def inverse(self) -> KappaScalar:
        # (c kappa)^-1 = kappa / (c kappa^2)
        if self.e == 0:
            return KappaScalar(self.c.inverse(), 0, self.kappa_sq)
        return KappaScalar((self.c * self.kappa_sq).inverse(), 1, self.kappa_sq)

    def __pow__(self, n: int) -> KappaScalar:
        if n < 0:
            return self.inverse() ** (-n)
        out = KappaScalar(CycRational.of(CyclotomicInteger.const(self.c.r, 1)), 0, self.kappa_sq)
        for _ in range(n):
            out = out * self
        return out

    def __repr__(self) -> str:
        return f"KappaScalar({self.c}, kappa^{self.e})"
