"""Evaluation of colored ribbon graphs and the surgery invariant tau at odd primes r."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from .diagram import (
    SURGERY,
    ComponentInfo,
    CouponSpec,
    DiagramError,
    FramedLinkPresentation,
    SlicedDiagram,
    analyze,
    linking_matrix,
    writhe,
)
from .exactring import (
    ONE,
    CyclotomicInteger,
    CycRational,
    HSeries,
    KappaScalar,
    LaurentPoly,
    conjugate,
    mod_r_reduce,
    specialize,
    valuation_at_one_minus_xi,
)
from .liedata import alcove_colors, sl2, validate_r, zeta_order
from .repcat import (
    MorphismMatrix,
    _braiding_entries,
    _cap_entries,
    _cup_entries,
    obj_dim,
    qdim,
    twist_exponent,
    unflat_index,
    word_basis,
)


class InvariantError(ArithmeticError):
    """A computation-level failure (integrality or divisibility shortfall)."""


# ---------------------------------------------------------------------------
# coefficient rings


@dataclass(frozen=True)
class Ring:
    """Where the evaluation takes place.

    kind "symbolic": Z[v, 1/v].  "specialized": Z[xi_r] with v -> xi^root.
    "hseries": Q[h]/(h^(order+1)) with v = e^(h/2).
    """

    kind: str = "symbolic"
    r: int | None = None
    root: int = 1
    order: int | None = None

    def __post_init__(self):
        if self.kind == "specialized":
            if self.r is None:
                raise ValueError("specialized ring needs r")
            if math.gcd(self.root, self.r) != 1:
                raise ValueError("root exponent must be prime to r")
        elif self.kind == "hseries":
            if self.order is None or self.order < 0:
                raise ValueError("hseries ring needs a nonnegative order")
        elif self.kind != "symbolic":
            raise ValueError(f"unknown ring kind {self.kind!r}")

    def convert(self, p: LaurentPoly):
        return _convert(self, p)

    def one(self):
        return self.convert(ONE)


@lru_cache(maxsize=200_000)
def _convert(ring: Ring, p: LaurentPoly):
    if ring.kind == "symbolic":
        return p
    if ring.kind == "specialized":
        return specialize(p, ring.r, ring.root)
    return HSeries.from_laurent(p, ring.order)


SYMBOLIC = Ring("symbolic")


def specialized(r: int, root: int = 1) -> Ring:
    return Ring("specialized", r, root)


# ---------------------------------------------------------------------------
# local pieces as sparse maps  in-tuple -> [(out-tuple, coeff)]


def _to_local(entries: dict, dom, cod) -> dict:
    out: dict = {}
    for (row, col), val in entries.items():
        out.setdefault(unflat_index(dom, col), []).append((unflat_index(cod, row), val))
    return out


@lru_cache(maxsize=None)
def _local_symbolic(kind: str, objs: tuple) -> dict:
    if kind == "x+":
        a, b = objs
        return _to_local(_braiding_entries(a, b, False), (a, b), (b, a))
    if kind == "x-":
        # objs are the incoming (b, a); c^-1_{a,b}: b (x) a -> a (x) b
        b, a = objs
        return _to_local(_braiding_entries(a, b, True), (b, a), (a, b))
    if kind in ("cupl", "cupr"):
        (n,) = objs
        v = kind[-1]
        word = ((n, 1), (n, -1)) if v == "l" else ((n, -1), (n, 1))
        return _to_local(_cup_entries(n, v), (), word)
    if kind in ("capl", "capr"):
        (n,) = objs
        v = kind[-1]
        word = ((n, 1), (n, -1)) if v == "l" else ((n, -1), (n, 1))
        return _to_local(_cap_entries(n, v), word, ())
    raise ValueError(kind)


@lru_cache(maxsize=None)
def _local_in_ring(kind: str, objs: tuple, ring: Ring) -> dict:
    loc = _local_symbolic(kind, objs)
    if ring.kind == "symbolic":
        return loc
    out = {}
    for k, outs in loc.items():
        conv = [(o, ring.convert(c)) for o, c in outs]
        conv = [(o, c) for o, c in conv if c]
        if conv:
            out[k] = conv
    return out


def _coupon_local(spec: CouponSpec, ring: Ring) -> dict:
    if ring.kind != "specialized":
        raise DiagramError(f"coupon {spec.name!r} needs a specialized ring (entries lie in Z[xi])")
    if spec.r is not None and spec.r != ring.r:
        raise DiagramError(f"coupon {spec.name!r} is defined over r={spec.r}, evaluating at r={ring.r}")
    dom_basis = word_basis(spec.domain)
    cod_basis = word_basis(spec.codomain)
    out: dict = {}
    for i, row in enumerate(spec.entries):
        for j, x in enumerate(row):
            val = x if isinstance(x, CyclotomicInteger) else CyclotomicInteger.const(ring.r, int(x))
            if val.r != ring.r:
                raise DiagramError(f"coupon {spec.name!r} entry lives over r={val.r}")
            if val:
                out.setdefault(dom_basis[j], []).append((cod_basis[i], val))
    return out


# ---------------------------------------------------------------------------
# evaluation


def resolve_colors(
    p: FramedLinkPresentation, colors: Mapping[str, int] | None, info: ComponentInfo
) -> dict[str, int]:
    out: dict[str, int] = {}
    for nm in info.names:
        val = None
        if colors and nm in colors:
            val = colors[nm]
        elif isinstance(p.coloring.get(nm), int):
            val = p.coloring[nm]
        if nm in info.coupon_colors:
            if val is not None and val != info.coupon_colors[nm]:
                raise DiagramError(
                    f"component {nm} colored {val} but its coupon end expects {info.coupon_colors[nm]}"
                )
            val = info.coupon_colors[nm]
        if val is None:
            raise DiagramError(f"component {nm} has no color")
        if val < 0:
            raise DiagramError(f"component {nm} has negative color {val}")
        out[nm] = int(val)
    return out


def evaluate_J(
    graph: FramedLinkPresentation | SlicedDiagram,
    colors: Mapping[str, int] | None = None,
    ring: Ring = SYMBOLIC,
):
    """J of a fully colored ribbon graph.

    Closed diagrams give a scalar in the ring; open ones give a MorphismMatrix
    from the top word to the bottom word. Components with a declared framing
    receive theta^(framing - writhe); all others keep the blackboard framing.
    """
    if isinstance(graph, SlicedDiagram):
        graph = FramedLinkPresentation(graph)
    d = graph.diagram
    info = analyze(d)
    col = resolve_colors(graph, colors, info)
    obj = lambda lev, pos: (col[info.segment_component[(lev, pos)]], d.levels[lev][pos])
    one = ring.one()

    top_word = tuple(obj(0, p) for p in range(len(d.top)))
    T = len(top_word)
    if T:
        states = {b + b: one for b in word_basis(top_word)}
    else:
        states = {(): one}

    for i, pieces in enumerate(d.slices):
        plan = []
        p_in = p_out = 0
        for piece in pieces:
            if piece.kind == "id":
                plan.append(None)
            elif piece.kind == "coupon":
                plan.append((piece.n_in, _coupon_local(d.coupons[piece.name], ring)))
            else:
                if piece.kind.startswith("cup"):
                    key = (col[info.segment_component[(i + 1, p_out)]],)
                elif piece.kind.startswith("cap"):
                    key = (col[info.segment_component[(i, p_in)]],)
                else:
                    key = (obj(i, p_in), obj(i, p_in + 1))
                plan.append((piece.n_in, _local_in_ring(piece.kind, key, ring)))
            p_in += piece.n_in
            p_out += piece.n_out
        states = _apply(states, plan, T)
        if not states:
            break

    scalar = one
    for nm in info.names:
        if nm in graph.framing:
            shift = graph.framing[nm] - writhe(info, nm)
            if shift:
                scalar = scalar * ring.convert(LaurentPoly.monomial(shift * twist_exponent(col[nm])))

    bottom_word = tuple(obj(len(d.levels) - 1, p) for p in range(len(d.bottom)))
    if not T and not bottom_word:
        val = states.get((), None)
        if val is None:
            return ring.convert(LaurentPoly())
        return val * scalar
    entries = {}
    from .repcat import flat_index

    for key, val in states.items():
        entries[(flat_index(bottom_word, key[T:]), flat_index(top_word, key[:T]))] = val * scalar
    return MorphismMatrix(top_word, bottom_word, entries)


def _apply(states: dict, plan: list, T: int) -> dict:
    new: dict = {}
    for key, c in states.items():
        partial = [(key[:T], c)]
        pos = T
        for step in plan:
            if step is None:
                x = key[pos : pos + 1]
                partial = [(pre + x, cc) for pre, cc in partial]
                pos += 1
                continue
            n_in, lmap = step
            outs = lmap.get(key[pos : pos + n_in])
            pos += n_in
            if not outs:
                partial = []
                break
            if len(outs) == 1:
                o, w = outs[0]
                partial = [(pre + o, cc * w) for pre, cc in partial]
            else:
                partial = [(pre + o, cc * w) for pre, cc in partial for o, w in outs]
        for k, v in partial:
            prev = new.get(k)
            new[k] = v if prev is None else prev + v
    return {k: v for k, v in new.items() if v}


@lru_cache(maxsize=4096)
def _cached_symbolic_J(p: FramedLinkPresentation, colors: tuple) -> LaurentPoly:
    return evaluate_J(p, dict(colors), SYMBOLIC)


def J_symbolic(p: FramedLinkPresentation, colors: Mapping[str, int]) -> LaurentPoly:
    """Cached symbolic J for a closed, coupon-free diagram."""
    try:
        return _cached_symbolic_J(p, tuple(sorted(colors.items())))
    except TypeError:  # unhashable presentation (mutable mappings)
        return evaluate_J(p, colors, SYMBOLIC)


# ---------------------------------------------------------------------------
# color sums


def _alcove_ints(r: int) -> list[int]:
    return [mu[0] for mu in alcove_colors(sl2(), r)]


def _term(args):
    p, colors, ring, surgery = args
    val = evaluate_J(p, colors, ring)
    for nm in surgery:
        val = val * ring.convert(qdim(colors[nm]))
    return val


def _chunk_sum(args):
    p, color_list, ring, surgery = args
    total = None
    for colors in color_list:
        t = _term((p, colors, ring, surgery))
        total = t if total is None else total + t
    return total


def F_value(
    p: FramedLinkPresentation,
    r: int,
    colors: Mapping[str, int] | None = None,
    root: int = 1,
    workers: int | None = 1,
    order: Sequence[int] | None = None,
) -> CyclotomicInteger:
    """F_(L, Omega): sum over alcove colorings mu of L of prod qdim(mu_i) * J(Omega u L(mu)).

    ``colors`` colors the non-surgery part Omega (where the presentation does not).
    ``order`` optionally permutes the alcove enumeration (the sum is order independent).
    """
    validate_r(sl2(), r)
    ring = specialized(r, root)
    surgery = p.surgery_components
    alcove = _alcove_ints(r)
    if order is not None:
        alcove = [alcove[i] for i in order]
    base = {k: v for k, v in (colors or {}).items() if k not in surgery}
    assignments = [
        {**base, **dict(zip(surgery, mu))} for mu in product(alcove, repeat=len(surgery))
    ]
    workers = workers or os.cpu_count() or 1
    if workers <= 1 or len(assignments) < 2:
        total = _chunk_sum((p, assignments, ring, surgery))
    else:
        k = min(workers, len(assignments))
        chunks = [assignments[i::k] for i in range(k)]
        with ProcessPoolExecutor(max_workers=k) as ex:
            parts = list(ex.map(_chunk_sum, [(p, c, ring, surgery) for c in chunks]))
        total = None
        for part in parts:
            if part is not None:
                total = part if total is None else total + part
    if total is None:
        return CyclotomicInteger.const(r, 0)
    return total


# ---------------------------------------------------------------------------
# context and tau


@dataclass(frozen=True)
class InvariantContext:
    r: int
    root: int
    alcove: tuple[int, ...]
    F_plus: CyclotomicInteger
    F_minus: CyclotomicInteger
    kappa_sq: CycRational
    zeta_order: int

    @property
    def required_valuation(self) -> int:
        # (r l - dim g)/2 with l = 1, dim sl2 = 3
        return (self.r - 3) // 2

    def eta(self) -> KappaScalar:
        return KappaScalar(CycRational.of(self.F_plus), 1, self.kappa_sq)

    def eta_inverse(self) -> KappaScalar:
        return KappaScalar(CycRational.of(self.F_minus).inverse(), 1, self.kappa_sq)

    def kappa(self) -> KappaScalar:
        return KappaScalar(CycRational.of(CyclotomicInteger.const(self.r, 1)), 1, self.kappa_sq)


@lru_cache(maxsize=None)
def context(r: int, root: int = 1) -> InvariantContext:
    from .diagram import builtin

    datum = sl2()
    validate_r(datum, r)
    fp = F_value(builtin("unknot(1)"), r, root=root)
    fm = F_value(builtin("unknot(-1)"), r, root=root)
    need = (r - 3) // 2
    for name, f in (("F+", fp), ("F-", fm)):
        k, _ = valuation_at_one_minus_xi(f)
        if k != need:
            raise InvariantError(f"{name} has (xi-1)-valuation {k}, expected {need}")
    ksq = CycRational.of(fm) / CycRational.of(fp)
    return InvariantContext(
        r, root, tuple(_alcove_ints(r)), fp, fm, ksq, zeta_order(datum, r)
    )


@dataclass(frozen=True)
class TauResult:
    value: KappaScalar
    m: int
    sigma_plus: int
    sigma_minus: int
    betti1: int
    weight: int
    required: int
    actual: float | int
    F: CyclotomicInteger

    @property
    def r(self) -> int:
        return self.F.r

    def to_json(self) -> dict:
        return _result_json(self.value, self)


def _result_json(value: KappaScalar, res) -> dict:
    actual = res.actual
    return {
        "r": res.r,
        "kappa_exp": value.e,
        "coeffs": [str(c) for c in value.c.num.coeffs],
        "den": str(value.c.den),
        "m": res.m,
        "sigma": [res.sigma_plus, res.sigma_minus],
        "betti1": res.betti1,
        "valuation": {
            "required": res.required,
            "actual": "inf" if actual == math.inf else actual,
        },
    }


def _surgery_data(p: FramedLinkPresentation, r: int, ctx, colors, workers):
    ld = linking_matrix(p)
    F = F_value(p, r, colors, root=ctx.root, workers=workers)
    m = ld.size
    k, _ = valuation_at_one_minus_xi(F)
    return ld, F, m, k


def tau(
    p: FramedLinkPresentation,
    r: int,
    weight: int = 0,
    colors: Mapping[str, int] | None = None,
    workers: int | None = 1,
    root: int = 1,
) -> TauResult:
    """tau(M) = F * kappa^(b1+w+1) / (F_-^(s_- + b1 + 1) F_+^(s_+))."""
    ctx = context(r, root)
    ld, F, m, actual = _surgery_data(p, r, ctx, colors, workers)
    required = m * ctx.required_valuation
    if actual < required:
        raise InvariantError(
            f"F has (xi-1)-valuation {actual}, below the guaranteed {required}"
        )
    b1 = ld.nullity
    den = CycRational.of(ctx.F_minus) ** (ld.sigma_minus + b1 + 1) * CycRational.of(
        ctx.F_plus
    ) ** ld.sigma_plus
    c = CycRational.of(F) / den
    value = KappaScalar(c, b1 + weight + 1, ctx.kappa_sq)
    return TauResult(value, m, ld.sigma_plus, ld.sigma_minus, b1, weight, required, actual, F)


@dataclass(frozen=True)
class ProjectiveResult:
    value: KappaScalar
    m: int
    sigma_plus: int
    sigma_minus: int
    betti1: int
    weight: int
    required: int
    actual: float | int
    F: CyclotomicInteger

    @property
    def r(self) -> int:
        return self.F.r

    @property
    def integer_value(self) -> CyclotomicInteger | None:
        """The value as an element of Z[xi] when it has no kappa factor."""
        if self.value.e == 0 and self.value.c.is_integral():
            return self.value.c.num
        return None

    def to_json(self) -> dict:
        return _result_json(self.value, self)


def projective_invariant(
    p: FramedLinkPresentation,
    r: int,
    weight: int = 0,
    colors: Mapping[str, int] | None = None,
    workers: int | None = 1,
    root: int = 1,
) -> ProjectiveResult:
    """eta * tau(M) = F / (F_-^(s_- + b1) F_+^(s_+)) * kappa^(b1 + w)."""
    ctx = context(r, root)
    ld, F, m, actual = _surgery_data(p, r, ctx, colors, workers)
    required = m * ctx.required_valuation
    if actual < required:
        raise InvariantError(
            f"F has (xi-1)-valuation {actual}, below the guaranteed {required}"
        )
    b1 = ld.nullity
    den = CycRational.of(ctx.F_minus) ** (ld.sigma_minus + b1) * CycRational.of(
        ctx.F_plus
    ) ** ld.sigma_plus
    value = KappaScalar(CycRational.of(F) / den, b1 + weight, ctx.kappa_sq)
    if value.e == 0 and not value.c.is_integral():
        raise InvariantError("projective invariant is not a cyclotomic integer")
    return ProjectiveResult(value, m, ld.sigma_plus, ld.sigma_minus, b1, weight, required, actual, F)


@dataclass(frozen=True)
class DivisibilityCertificate:
    required: int
    actual: float | int
    passed: bool
    quotient: CyclotomicInteger


def divisibility_certificate(
    p: FramedLinkPresentation,
    r: int,
    colors: Mapping[str, int] | None = None,
    workers: int | None = 1,
) -> DivisibilityCertificate:
    m = len(p.surgery_components)
    F = F_value(p, r, colors, workers=workers)
    actual, quot = valuation_at_one_minus_xi(F)
    required = m * (r - 3) // 2
    return DivisibilityCertificate(required, actual, actual >= required, quot)


@dataclass(frozen=True)
class IntegralityReport:
    r: int
    value: KappaScalar
    kappa_exp: int
    integral: bool
    zeta_order: int


def almost_integrality_check(
    p: FramedLinkPresentation, r: int, weight: int = 0, workers: int | None = 1
) -> IntegralityReport:
    res = projective_invariant(p, r, weight, workers=workers)
    ok = res.value.c.is_integral()
    if not ok:
        raise InvariantError(f"eta*tau has denominator {res.value.c.den}")
    return IntegralityReport(r, res.value, res.value.e, ok, context(r).zeta_order)


# ---------------------------------------------------------------------------
# state-space dimensions and the congruence of periodic manifolds


def fusion(a: int, b: int, r: int) -> list[int]:
    """Truncated sl2 fusion V_a (x) V_b in color units at level r - 2."""
    hi = min(a + b, r - 2 - a - b)
    return list(range(abs(a - b), hi + 1))


def tqft_dimension(genus: int, marks: Iterable[tuple[int, int]] = (), r: int = 5) -> int:
    """dim of the state space of a genus-g surface with marked points colored (n, sign)."""
    if genus < 0:
        raise ValueError("genus must be nonnegative")
    alcove = _alcove_ints(r)
    vec = {0: 1}

    def fuse(v: dict, n: int) -> dict:
        out: dict = {}
        for a, mult in v.items():
            for c in fusion(a, n, r):
                out[c] = out.get(c, 0) + mult
        return out

    for n, _sign in marks:
        if n not in alcove:
            raise ValueError(f"mark color {n} is not in the alcove for r={r}")
        vec = fuse(vec, n)  # V* is isomorphic to V for sl2
    for _ in range(genus):
        acc: dict = {}
        for lam in alcove:
            for c, mult in fuse(fuse(vec, lam), lam).items():
                acc[c] = acc.get(c, 0) + mult
        vec = acc
    return vec.get(0, 0)


def congruence_test(x: CyclotomicInteger, r: int | None = None) -> set[int]:
    """All s in 0..r-1 with x = xi^s * conj(x) mod r in Z[xi]."""
    r = x.r if r is None else r
    if r != x.r:
        raise ValueError("r does not match the element")
    cx = conjugate(x)
    out = set()
    for s in range(r):
        diff = x - CyclotomicInteger.xi_power(r, s) * cx
        if mod_r_reduce(diff).is_zero():
            out.add(s)
    return out
