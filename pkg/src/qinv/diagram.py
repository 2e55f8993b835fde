"""Sliced (Morse) diagrams of framed ribbon graphs, their components and linking data.

A diagram is read top to bottom. Each boundary level is a row of strand ends
carrying an orientation sign: ``+`` for a strand running downward (colored by
V), ``-`` for one running upward (colored by V*). Each slice is a row of
pieces that together consume the level above and produce the level below.

Text format, one slice per line (or several on one line separated by ``/``)::

    # comment
    top: + -          (optional; open top boundary)
    cupl
    id x+ id
    capl

Pieces: ``id``, ``x+``, ``x-``, ``cupl``, ``cupr``, ``capl``, ``capr``, ``coupon:NAME``.
The trailing l/r of a cup or cap names the leg oriented downward. In ``x+`` the
strand running from top right to bottom left passes over.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .exactring import CyclotomicInteger

SURGERY = "surgery"

_PIECE_ARITY = {
    "id": (1, 1),
    "x+": (2, 2),
    "x-": (2, 2),
    "cupl": (0, 2),
    "cupr": (0, 2),
    "capl": (2, 0),
    "capr": (2, 0),
}


class DiagramError(ValueError):
    """Parse or validation failure; carries the 1-based line/column when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = f"line {line}, col {col}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
        self.col = col


@dataclass(frozen=True)
class CouponSpec:
    """A coupon: a matrix between two object words, entries in Z[xi_r]."""

    name: str
    domain: tuple[tuple[int, int], ...]
    codomain: tuple[tuple[int, int], ...]
    entries: tuple[tuple[CyclotomicInteger | int, ...], ...]
    r: int | None = None

    @property
    def arity(self) -> tuple[int, int]:
        return len(self.domain), len(self.codomain)

    def galois(self, a: int) -> CouponSpec:
        rows = tuple(
            tuple(x.galois(a) if isinstance(x, CyclotomicInteger) else x for x in row)
            for row in self.entries
        )
        return replace(self, entries=rows)


@dataclass(frozen=True)
class ElementaryPiece:
    kind: str
    name: str | None = None
    n_in: int = 0
    n_out: int = 0

    @property
    def token(self) -> str:
        return f"coupon:{self.name}" if self.kind == "coupon" else self.kind


@dataclass(frozen=True)
class SlicedDiagram:
    top: tuple[int, ...]
    slices: tuple[tuple[ElementaryPiece, ...], ...]
    levels: tuple[tuple[int, ...], ...]
    coupons: Mapping[str, CouponSpec] = field(default_factory=dict, compare=False, hash=False)

    @property
    def bottom(self) -> tuple[int, ...]:
        return self.levels[-1]

    @property
    def is_closed(self) -> bool:
        return not self.top and not self.bottom

    def stack(self, other: SlicedDiagram) -> SlicedDiagram:
        """Vertical composition: self on top of other."""
        if self.bottom != other.top:
            raise DiagramError("boundary mismatch when stacking diagrams")
        coupons = dict(self.coupons)
        for k, c in other.coupons.items():
            if k in coupons and coupons[k] != c:
                raise DiagramError(f"conflicting definitions of coupon {k!r}")
            coupons[k] = c
        return SlicedDiagram(
            self.top, self.slices + other.slices, self.levels + other.levels[1:], coupons
        )


def _sign(tok: str) -> int:
    if tok == "+":
        return 1
    if tok == "-":
        return -1
    raise ValueError(tok)


def _apply_slice(
    level: tuple[int, ...], pieces: Sequence[ElementaryPiece], coupons, line=None
) -> tuple[int, ...]:
    need = sum(p.n_in for p in pieces)
    if need != len(level):
        raise DiagramError(
            f"boundary mismatch: slice consumes {need} strands but {len(level)} arrive", line
        )
    out: list[int] = []
    pos = 0
    for k, p in enumerate(pieces):
        ins = level[pos : pos + p.n_in]
        pos += p.n_in
        col = k + 1
        if p.kind == "id":
            out += ins
        elif p.kind in ("x+", "x-"):
            out += [ins[1], ins[0]]
        elif p.kind == "cupl":
            out += [1, -1]
        elif p.kind == "cupr":
            out += [-1, 1]
        elif p.kind in ("capl", "capr"):
            want = (1, -1) if p.kind == "capl" else (-1, 1)
            if tuple(ins) != want:
                raise DiagramError(
                    f"orientation mismatch at {p.kind}: incoming {_fmt_signs(ins)}", line, col
                )
        elif p.kind == "coupon":
            spec = coupons[p.name]
            want = tuple(s for _, s in spec.domain)
            if tuple(ins) != want:
                raise DiagramError(
                    f"orientation mismatch at coupon {p.name}: incoming {_fmt_signs(ins)},"
                    f" coupon expects {_fmt_signs(want)}",
                    line,
                    col,
                )
            out += [s for _, s in spec.codomain]
    return tuple(out)


def _fmt_signs(signs) -> str:
    return " ".join("+" if s > 0 else "-" for s in signs) or "(none)"


def make_piece(token: str, coupons: Mapping[str, CouponSpec], line=None, col=None) -> ElementaryPiece:
    if token in _PIECE_ARITY:
        a, b = _PIECE_ARITY[token]
        return ElementaryPiece(token, None, a, b)
    if token.startswith("coupon:"):
        name = token[len("coupon:") :]
        if name not in coupons:
            raise DiagramError(f"unknown coupon {name!r}", line, col)
        a, b = coupons[name].arity
        return ElementaryPiece("coupon", name, a, b)
    raise DiagramError(f"unknown token {token!r}", line, col)


def parse_diagram(text: str, coupons: Mapping[str, CouponSpec] | None = None) -> SlicedDiagram:
    coupons = dict(coupons or {})
    top: tuple[int, ...] = ()
    rows: list[tuple[int, list[tuple[str, int]]]] = []
    seen_slice = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = re.match(r"\s*top\s*:(.*)$", line)
        if m:
            if seen_slice:
                raise DiagramError("'top:' header must precede all slices", lineno, 1)
            try:
                top = tuple(_sign(t) for t in m.group(1).split())
            except ValueError as exc:
                raise DiagramError(f"bad orientation {exc.args[0]!r} in top header", lineno) from None
            continue
        for chunk in _split_slices(line):
            toks = [(mm.group(0), mm.start() + 1) for mm in re.finditer(r"\S+", chunk[0])]
            toks = [(t, c + chunk[1]) for t, c in toks]
            if not toks:
                raise DiagramError("empty slice", lineno)
            rows.append((lineno, toks))
            seen_slice = True
    slices = []
    levels = [top]
    for lineno, toks in rows:
        pieces = tuple(make_piece(t, coupons, lineno, c) for t, c in toks)
        levels.append(_apply_slice(levels[-1], pieces, coupons, lineno))
        slices.append(pieces)
    return SlicedDiagram(top, tuple(slices), tuple(levels), coupons)


def _split_slices(line: str) -> list[tuple[str, int]]:
    out = []
    start = 0
    for part in line.split("/"):
        out.append((part, start))
        start += len(part) + 1
    return out


def format_diagram(d: SlicedDiagram) -> str:
    lines = []
    if d.top:
        lines.append("top: " + _fmt_signs(d.top))
    for pieces in d.slices:
        lines.append(" ".join(p.token for p in pieces))
    return "\n".join(lines) + ("\n" if lines else "")


def load_coupons(source: str | Path | Mapping, r: int | None = None) -> dict[str, CouponSpec]:
    """Read coupon definitions from a JSON file path, JSON text, or parsed mapping.

    Each entry: {"domain": [[n, "+"], ...], "codomain": [...], "entries": rows}
    where an entry is an int, a coefficient list of length r-1, or
    {"r": r, "coeffs": [...]}. An optional top-level or per-coupon "r" fixes the prime.
    """
    if isinstance(source, Mapping):
        data = source
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            text = Path(text).read_text()
        data = json.loads(text)
    r_top = data.get("r", r) if isinstance(data.get("r", None), int) else r
    out = {}
    for name, spec in data.items():
        if name == "r":
            continue
        rr = spec.get("r", r_top)
        dom = tuple((int(n), _sign(s) if isinstance(s, str) else int(s)) for n, s in spec["domain"])
        cod = tuple((int(n), _sign(s) if isinstance(s, str) else int(s)) for n, s in spec["codomain"])
        rows = tuple(tuple(_coupon_entry(x, rr) for x in row) for row in spec["entries"])
        nrows = _word_dim(cod)
        ncols = _word_dim(dom)
        if len(rows) != nrows or any(len(row) != ncols for row in rows):
            raise DiagramError(
                f"coupon {name!r}: matrix must be {nrows}x{ncols} to match its words"
            )
        out[name] = CouponSpec(name, dom, cod, rows, rr)
    return out


def _word_dim(word) -> int:
    d = 1
    for n, _ in word:
        d *= 2 * n + 1
    return d


def _coupon_entry(x, r):
    if isinstance(x, (int, str)):
        return int(x)
    if isinstance(x, dict):
        return CyclotomicInteger(int(x["r"]), [int(c) for c in x["coeffs"]])
    if isinstance(x, list):
        if r is None:
            raise DiagramError("coupon entry given as coefficient list but no r declared")
        return CyclotomicInteger(r, [int(c) for c in x])
    raise DiagramError(f"bad coupon entry {x!r}")


# ---------------------------------------------------------------------------
# components


@dataclass(frozen=True)
class Crossing:
    slice: int
    position: int
    over_sign: int  # +1 for x+, -1 for x-
    sign: int  # oriented crossing sign
    components: tuple[str, str]


@dataclass(frozen=True)
class ComponentInfo:
    segment_component: Mapping[tuple[int, int], str]
    names: tuple[str, ...]
    closed: Mapping[str, bool]
    crossings: tuple[Crossing, ...]
    coupon_colors: Mapping[str, int]


class _UF:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def analyze(d: SlicedDiagram) -> ComponentInfo:
    uf = _UF()
    for lev, signs in enumerate(d.levels):
        for pos in range(len(signs)):
            uf.find((lev, pos))
    open_segments = {(0, p) for p in range(len(d.top))}
    open_segments |= {(len(d.levels) - 1, p) for p in range(len(d.bottom))}
    coupon_ends: dict[tuple[int, int], int] = {}
    raw_cross = []
    for i, pieces in enumerate(d.slices):
        p_in = p_out = 0
        for piece in pieces:
            if piece.kind == "id":
                uf.union((i, p_in), (i + 1, p_out))
            elif piece.kind in ("x+", "x-"):
                uf.union((i, p_in), (i + 1, p_out + 1))
                uf.union((i, p_in + 1), (i + 1, p_out))
                raw_cross.append((i, p_in, piece.kind, p_out))
            elif piece.kind.startswith("cup"):
                uf.union((i + 1, p_out), (i + 1, p_out + 1))
            elif piece.kind.startswith("cap"):
                uf.union((i, p_in), (i, p_in + 1))
            elif piece.kind == "coupon":
                spec = d.coupons[piece.name]
                for k, (n, _) in enumerate(spec.domain):
                    coupon_ends[(i, p_in + k)] = n
                for k, (n, _) in enumerate(spec.codomain):
                    coupon_ends[(i + 1, p_out + k)] = n
            p_in += piece.n_in
            p_out += piece.n_out
    names: dict = {}
    seg_comp = {}
    for lev, signs in enumerate(d.levels):
        for pos in range(len(signs)):
            root = uf.find((lev, pos))
            if root not in names:
                names[root] = f"C{len(names) + 1}"
            seg_comp[(lev, pos)] = names[root]
    closed = {nm: True for nm in names.values()}
    for seg in open_segments | set(coupon_ends):
        closed[seg_comp[seg]] = False
    coupon_colors: dict[str, int] = {}
    for seg, n in coupon_ends.items():
        nm = seg_comp[seg]
        if coupon_colors.get(nm, n) != n:
            raise DiagramError(f"component {nm} meets coupons with different colors")
        coupon_colors[nm] = n
    crossings = []
    for i, p_in, kind, p_out in raw_cross:
        s1, s2 = d.levels[i][p_in], d.levels[i][p_in + 1]
        over = 1 if kind == "x+" else -1
        sign = over if s1 == s2 else -over
        comps = (seg_comp[(i, p_in)], seg_comp[(i, p_in + 1)])
        crossings.append(Crossing(i, p_in, over, sign, comps))
    return ComponentInfo(seg_comp, tuple(names.values()), closed, tuple(crossings), coupon_colors)


def components(d: SlicedDiagram) -> list[list[tuple[int, int]]]:
    """Partition of strand segments (level, position) into components, in discovery order."""
    info = analyze(d)
    groups: dict[str, list] = {nm: [] for nm in info.names}
    for seg, nm in sorted(info.segment_component.items()):
        groups[nm].append(seg)
    return [groups[nm] for nm in info.names]


def writhe(info: ComponentInfo, name: str) -> int:
    return sum(c.sign for c in info.crossings if c.components == (name, name))


# ---------------------------------------------------------------------------
# framed link presentations


@dataclass(frozen=True)
class FramedLinkPresentation:
    """A diagram with framings and colors per component.

    coloring maps a component name to an alcove color (int) or SURGERY.
    Components missing from ``framing`` use the blackboard framing (their writhe).
    """

    diagram: SlicedDiagram
    framing: Mapping[str, int] = field(default_factory=dict)
    coloring: Mapping[str, int | str] = field(default_factory=dict)
    name: str | None = None

    def info(self) -> ComponentInfo:
        return analyze(self.diagram)

    @property
    def surgery_components(self) -> tuple[str, ...]:
        return tuple(nm for nm in self.info().names if self.coloring.get(nm) == SURGERY)

    def effective_framing(self, name: str, info: ComponentInfo | None = None) -> int:
        info = info or self.info()
        if name in self.framing:
            return self.framing[name]
        return writhe(info, name)

    def with_updates(self, framing=None, coloring=None) -> FramedLinkPresentation:
        fr = dict(self.framing)
        fr.update(framing or {})
        co = dict(self.coloring)
        co.update(coloring or {})
        return replace(self, framing=fr, coloring=co)


@dataclass(frozen=True)
class LinkingData:
    matrix: tuple[tuple[int, ...], ...]
    sigma_plus: int
    sigma_minus: int
    nullity: int

    @property
    def size(self) -> int:
        return len(self.matrix)


def inertia(matrix: Sequence[Sequence[int | Fraction]]) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts of a symmetric rational matrix, exactly.

    Symmetric Gaussian elimination over Fractions, smallest-index pivots. When
    every remaining diagonal entry vanishes, a congruence i += j produces a
    nonzero pivot 2*a_ij.
    """
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    for i in range(n):
        if len(a[i]) != n:
            raise ValueError("matrix is not square")
        for j in range(n):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")
    active = list(range(n))
    pos = neg = 0
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i < j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            continue
        d = a[piv][piv]
        if d > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for j in active:
            f = a[j][piv] / d
            if f:
                for k in active:
                    a[j][k] -= f * a[piv][k]
    return pos, neg, len(active)


def linking_matrix(p: FramedLinkPresentation, names: Sequence[str] | None = None) -> LinkingData:
    info = p.info()
    names = tuple(names) if names is not None else p.surgery_components
    idx = {nm: k for k, nm in enumerate(names)}
    m = len(names)
    counts = [[0] * m for _ in range(m)]
    for c in info.crossings:
        a, b = c.components
        if a != b and a in idx and b in idx:
            counts[idx[a]][idx[b]] += c.sign
            counts[idx[b]][idx[a]] += c.sign
    mat = []
    for i in range(m):
        row = []
        for j in range(m):
            if i == j:
                if not info.closed[names[i]]:
                    raise DiagramError(f"surgery component {names[i]} is not a closed circle")
                row.append(p.effective_framing(names[i], info))
            else:
                if counts[i][j] % 2:
                    raise DiagramError(
                        f"odd signed crossing count between {names[i]} and {names[j]}"
                    )
                row.append(counts[i][j] // 2)
        mat.append(tuple(row))
    sp, sm, nul = inertia(mat)
    return LinkingData(tuple(mat), sp, sm, nul)


def betti1(p: FramedLinkPresentation) -> int:
    return linking_matrix(p).nullity


def linking_determinant(data: LinkingData) -> int:
    a = [[Fraction(x) for x in row] for row in data.matrix]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        r = next((i for i in range(c, n) if a[i][c] != 0), None)
        if r is None:
            return 0
        if r != c:
            a[c], a[r] = a[r], a[c]
            det = -det
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            for j in range(c, n):
                a[i][j] -= f * a[c][j]
    return int(det)


# ---------------------------------------------------------------------------
# builtin library

_TREFOIL = """\
cupl
id cupl id
{x} id id
{x} id id
{x} id id
id capl id
capl
"""

_HOPF = """\
cupl cupr
id x+ id
id x+ id
capl capr
"""

BUILTIN_TEXT = {
    "unknot": "cupl\ncapl\n",
    "hopf": _HOPF,
    "trefoil_left": _TREFOIL.format(x="x-"),
    "trefoil_right": _TREFOIL.format(x="x+"),
}


def _surgery(d: SlicedDiagram, framings: Sequence[int], name: str) -> FramedLinkPresentation:
    names = analyze(d).names
    if len(names) != len(framings):
        raise AssertionError("builtin framing count does not match components")
    return FramedLinkPresentation(
        d,
        {nm: f for nm, f in zip(names, framings)},
        {nm: SURGERY for nm in names},
        name,
    )


_EMPTY = SlicedDiagram((), (), ((),), {})


def _call(name: str) -> tuple[str, list[int]]:
    m = re.fullmatch(r"\s*([a-z0-9_]+)\s*(?:\((.*)\))?\s*", name)
    if not m:
        raise KeyError(f"unknown builtin {name!r}")
    args = [int(a) for a in m.group(2).split(",")] if m.group(2) and m.group(2).strip() else []
    return m.group(1), args


def builtin(name: str) -> FramedLinkPresentation:
    """Canonical surgery presentations, e.g. ``unknot(-1)``, ``hopf(0,0)``, ``poincare``."""
    base, args = _call(name)

    def need(k):
        if len(args) != k:
            raise KeyError(f"builtin {base!r} takes {k} integer argument(s), got {len(args)}")

    if base in ("unknot", "trefoil_left", "trefoil_right"):
        need(1)
        return _surgery(parse_diagram(BUILTIN_TEXT[base]), args, name.replace(" ", ""))
    if base == "hopf":
        need(2)
        return _surgery(parse_diagram(BUILTIN_TEXT["hopf"]), args, name.replace(" ", ""))
    need(0)
    if base == "poincare":
        return replace(builtin("trefoil_left(-1)"), name="poincare")
    if base == "brieskorn":
        return replace(builtin("trefoil_right(-1)"), name="brieskorn")
    if base == "s1xs2":
        return replace(builtin("unknot(0)"), name="s1xs2")
    if base in ("s3_empty", "empty"):
        return FramedLinkPresentation(_EMPTY, {}, {}, "s3_empty")
    if base == "s3_stab_pm":
        return replace(disjoint_union(builtin("unknot(1)"), builtin("unknot(-1)")), name="s3_stab_pm")
    raise KeyError(f"unknown builtin {name!r}")


BUILTIN_NAMES = (
    "unknot(f)",
    "hopf(f1,f2)",
    "trefoil_left(f)",
    "trefoil_right(f)",
    "poincare",
    "brieskorn",
    "s1xs2",
    "s3_empty",
    "s3_stab_pm",
)


def disjoint_union(a: FramedLinkPresentation, b: FramedLinkPresentation) -> FramedLinkPresentation:
    """Split union: b is drawn below a. Components of b are renumbered after a's."""
    if not (a.diagram.is_closed and b.diagram.is_closed):
        raise DiagramError("disjoint union needs closed diagrams")
    na = len(analyze(a.diagram).names)
    rename = {f"C{k}": f"C{k + na}" for k in range(1, len(analyze(b.diagram).names) + 1)}
    d = a.diagram.stack(b.diagram)
    framing = dict(a.framing)
    framing.update({rename[k]: v for k, v in b.framing.items()})
    coloring = dict(a.coloring)
    coloring.update({rename[k]: v for k, v in b.coloring.items()})
    nm = f"{a.name}+{b.name}" if a.name and b.name else None
    return FramedLinkPresentation(d, framing, coloring, nm)


def load_presentation(
    spec: str, coupons: Mapping[str, CouponSpec] | None = None
) -> FramedLinkPresentation:
    """Resolve a CLI-style diagram argument: a file path, ``builtin:NAME``, a builtin name, or ``empty``."""
    s = spec.strip()
    if s.startswith("builtin:"):
        return builtin(s[len("builtin:") :])
    path = Path(s)
    if path.exists() and path.is_file():
        d = parse_diagram(path.read_text(), coupons)
        return FramedLinkPresentation(d, {}, {}, path.stem)
    try:
        return builtin(s)
    except KeyError:
        pass
    if "\n" in s or "/" in s:
        return FramedLinkPresentation(parse_diagram(s, coupons), {}, {}, None)
    raise DiagramError(f"cannot resolve diagram {spec!r}: not a file or builtin")
