"""Command-line interface: ``qinv <subcommand> ...``.

Exit status: 0 on success, 1 when a computation fails (divisibility or
integrality shortfall, non-homology-sphere input to a periodicity scan),
2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .diagram import (
    BUILTIN_NAMES,
    SURGERY,
    DiagramError,
    FramedLinkPresentation,
    linking_matrix,
    load_coupons,
    load_presentation,
)
from .exactring import CyclotomicInteger, LaurentPoly
from .liedata import InvalidRootOfUnity, alcove_colors, cartan_datum, validate_r
from .invariant import (
    InvariantError,
    Ring,
    divisibility_certificate,
    evaluate_J,
    F_value,
    projective_invariant,
    specialized,
    tau,
    tqft_dimension,
)

DIAGRAM_HELP = (
    "diagram source: a file in the slice format, builtin:NAME, a bare builtin such as "
    "'unknot(-1)', or 'empty'. Builtins: " + ", ".join(BUILTIN_NAMES) + ". "
    "File format: '#' comments, optional 'top: + -' header, one slice per line with "
    "tokens id, x+, x-, cupl, cupr, capl, capr, coupon:NAME."
)
COUPON_HELP = (
    "JSON file mapping coupon NAME to {\"domain\": [[n, \"+\"], ...], \"codomain\": [...], "
    "\"entries\": rows}; an entry is an int, a list of r-1 coefficients, or {\"r\": r, \"coeffs\": [...]}"
)


class UsageError(Exception):
    pass


def _parse_map(text: str | None, flag: str) -> dict[str, int]:
    out: dict[str, int] = {}
    if not text:
        return out
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise UsageError(f"{flag}: expected NAME=INT, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = int(v)
        except ValueError:
            raise UsageError(f"{flag}: {v!r} is not an integer") from None
    return out


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{flag}: expected comma-separated integers, got {text!r}") from None


def _add_diagram_args(p: argparse.ArgumentParser, need_r: bool = True) -> None:
    p.add_argument("--diagram", required=True, help=DIAGRAM_HELP)
    p.add_argument("--coupons", help=COUPON_HELP)
    p.add_argument("--colors", help="colors of components, e.g. C1=1,C2=0")
    p.add_argument("--framing", help="framings overriding the blackboard framing, e.g. C1=-1")
    p.add_argument("--surgery", help="components forming the surgery link, e.g. C1,C2")
    if need_r:
        p.add_argument("--r", type=int, required=True, help="odd prime r (root of unity order)")
    else:
        p.add_argument("--r", type=int, help="specialize at xi_r instead of computing over Z[v,1/v]")
    p.add_argument("--algebra", default="sl2", help="only sl2 is supported for evaluation")
    p.add_argument("--format", choices=("json", "table"), default="json")


def _add_workers(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--workers", type=int, default=None, help="processes for the color sum (default: all cores)"
    )


def _presentation(args) -> FramedLinkPresentation:
    if args.algebra.lower() not in ("sl2", "a1"):
        raise UsageError(f"--algebra: evaluation supports sl2 only, got {args.algebra!r}")
    coupons = None
    if args.coupons:
        try:
            coupons = load_coupons(args.coupons, getattr(args, "r", None))
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"--coupons: {exc}") from None
    try:
        p = load_presentation(args.diagram, coupons)
    except KeyError as exc:
        raise UsageError(f"--diagram: {exc.args[0]}") from None
    except DiagramError as exc:
        raise UsageError(f"--diagram: {exc}") from None
    names = set(p.info().names)
    colors = _parse_map(args.colors, "--colors")
    framing = _parse_map(args.framing, "--framing")
    surgery = [s.strip() for s in (args.surgery or "").split(",") if s.strip()]
    for flag, keys in (("--colors", colors), ("--framing", framing), ("--surgery", surgery)):
        bad = [k for k in keys if k not in names]
        if bad:
            raise UsageError(f"{flag}: unknown component(s) {', '.join(bad)}; diagram has {sorted(names)}")
    coloring = {**colors, **{s: SURGERY for s in surgery}}
    return p.with_updates(framing=framing, coloring=coloring)


def _validate_r(r: int) -> None:
    try:
        validate_r(cartan_datum("sl2"), r)
    except InvalidRootOfUnity as exc:
        raise UsageError(f"--r: {exc}") from None


def _emit(args, obj, table: str) -> None:
    if getattr(args, "format", "json") == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(table)


def _workers(args) -> int:
    w = args.workers if args.workers is not None else (os.cpu_count() or 1)
    if w < 1:
        raise UsageError("--workers: must be at least 1")
    return w


# ---------------------------------------------------------------------------
# subcommands


def cmd_alcove(args) -> int:
    try:
        datum = cartan_datum(args.algebra)
    except KeyError as exc:
        raise UsageError(f"--algebra: {exc.args[0]}") from None
    try:
        cols = alcove_colors(datum, args.r)
    except InvalidRootOfUnity as exc:
        raise UsageError(f"--r: {exc}") from None
    fmt = lambda mu: ",".join(map(str, mu))
    if args.format == "json":
        print(json.dumps({"algebra": datum.name, "r": args.r, "colors": [list(m) for m in cols]}))
    else:
        for mu in cols:
            print(fmt(mu))
    return 0


def _nonsurgery_colors(p: FramedLinkPresentation) -> dict:
    return {k: v for k, v in p.coloring.items() if v != SURGERY}


def cmd_jpoly(args) -> int:
    p = _presentation(args)
    if p.surgery_components:
        raise UsageError("--surgery: jpoly evaluates a fully colored graph; drop --surgery")
    if args.r is not None:
        _validate_r(args.r)
        ring = specialized(args.r)
    else:
        ring = Ring("symbolic")
    val = evaluate_J(p, None, ring)
    if isinstance(val, LaurentPoly):
        obj = {"poly": val.to_json()}
        text = str(val)
    elif isinstance(val, CyclotomicInteger):
        obj = val.to_json()
        obj["coeffs"] = [str(c) for c in val.coeffs]
        text = str(val)
    else:
        rows, cols = val.shape
        obj = {
            "rows": rows,
            "cols": cols,
            "entries": [[i, j, str(x)] for (i, j), x in sorted(val.entries.items())],
        }
        text = "\n".join(f"[{i},{j}] {x}" for (i, j), x in sorted(val.entries.items()))
    _emit(args, obj, text)
    return 0


def cmd_fvalue(args) -> int:
    p = _presentation(args)
    _validate_r(args.r)
    F = F_value(p, args.r, workers=_workers(args))
    obj = {"r": args.r, "coeffs": [str(c) for c in F.coeffs], "m": len(p.surgery_components)}
    _emit(args, obj, str(F))
    return 0


def _scalar_table(res, label: str) -> str:
    v = res.value
    kap = " * kappa" if v.e else ""
    return (
        f"{label} = {v.c}{kap}\n"
        f"m = {res.m}, sigma+ = {res.sigma_plus}, sigma- = {res.sigma_minus}, b1 = {res.betti1}\n"
        f"(xi-1)-valuation of F: {res.actual} (required {res.required})"
    )


def cmd_tau(args) -> int:
    p = _presentation(args)
    _validate_r(args.r)
    res = tau(p, args.r, args.weight, workers=_workers(args))
    _emit(args, res.to_json(), _scalar_table(res, "tau"))
    return 0


def cmd_projective(args) -> int:
    p = _presentation(args)
    _validate_r(args.r)
    res = projective_invariant(p, args.r, args.weight, workers=_workers(args))
    _emit(args, res.to_json(), _scalar_table(res, "eta*tau"))
    return 0


def cmd_divisibility(args) -> int:
    p = _presentation(args)
    _validate_r(args.r)
    cert = divisibility_certificate(p, args.r, workers=_workers(args))
    actual = "inf" if cert.actual == float("inf") else cert.actual
    obj = {"r": args.r, "required": cert.required, "actual": actual, "pass": cert.passed}
    _emit(args, obj, f"required {cert.required}, actual {actual}: {'pass' if cert.passed else 'FAIL'}")
    return 0 if cert.passed else 1


def cmd_tqftdim(args) -> int:
    _validate_r(args.r)
    marks = []
    for item in (args.marks or "").split(","):
        item = item.strip()
        if not item:
            continue
        try:
            n, s = item.split(":")
            marks.append((int(n), 1 if s == "+" else -1 if s == "-" else int("x")))
        except ValueError:
            raise UsageError(f"--marks: expected n:+ or n:-, got {item!r}") from None
    try:
        dim = tqft_dimension(args.genus, marks, args.r)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, {"r": args.r, "genus": args.genus, "dimension": dim}, str(dim))
    return 0


def cmd_periodicity(args) -> int:
    from .periodicity import NotHomologySphere, periodicity_scan

    rs = _parse_int_list(args.rs, "--rs")
    for r in rs:
        _validate_r(r)
    try:
        p = load_presentation(args.manifold)
    except (KeyError, DiagramError) as exc:
        raise UsageError(f"--manifold: {exc}") from None
    try:
        rep = periodicity_scan(p, rs, args.weight, workers=_workers(args))
    except NotHomologySphere as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        print(json.dumps(rep.to_json(), indent=2))
    elif args.format == "table":
        print(rep.table())
    else:
        print(json.dumps(rep.to_json(), indent=2))
        print(rep.table())
    return 0


def cmd_verify(args) -> int:
    if args.suite == "degree":
        from .analysis import degree_bound_check

        p = _presentation(args) if args.diagram else None
        if p is None:
            raise UsageError("--diagram: required for the degree suite")
        rep = degree_bound_check(p, args.max_color, args.order)
        rows = rep.rows()
        obj = {
            "max_color": args.max_color,
            "order": args.order,
            "rows": [{"i": i, "measured": m, "bound": b, "ok": ok} for i, m, b, ok in rows],
            "ok": rep.ok,
        }
        table = "\n".join(f"h^{i}: degree {m} <= {b}: {'ok' if ok else 'FAIL'}" for i, m, b, ok in rows)
        _emit(args, obj, table)
        return 0 if rep.ok else 1
    if args.suite == "weights":
        from .analysis import ChordDiagram, casimir_eigenvalue, weight_sl2

        rows = []
        for n in range(args.max_color + 1):
            w = weight_sl2(ChordDiagram(0, 1, (((0, 0), (0, 1)),)), n).get(0, 0, 0)
            expect = (2 * n + 1) * casimir_eigenvalue(n)
            rows.append({"n": n, "self_chord": str(w), "expected": str(expect), "ok": w == expect})
            ident = weight_sl2(ChordDiagram(1), n)
            rows[-1]["chordless_identity"] = all(
                ident.get(i, i, 0) == 1 for i in range(2 * n + 1)
            ) and len(ident.entries) == 2 * n + 1
        ok = all(r["ok"] and r["chordless_identity"] for r in rows)
        table = "\n".join(
            f"n={r['n']}: self-chord {r['self_chord']} (expected {r['expected']}), "
            f"chordless identity {r['chordless_identity']}"
            for r in rows
        )
        _emit(args, {"rows": rows, "ok": ok}, table)
        return 0 if ok else 1
    raise UsageError(f"--suite: unknown suite {args.suite!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qinv",
        description="Exact quantum invariants of colored ribbon graphs and surgery 3-manifolds (sl2, odd prime r).",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("alcove", help="list alcove colors (root coordinates)")
    p.add_argument("--algebra", default="sl2", help="sl2, sl3, sl4, so5/sp4, g2 or a Cartan type A1..G2")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.set_defaults(func=cmd_alcove)

    p = sub.add_parser("jpoly", help="J of a fully colored ribbon graph")
    _add_diagram_args(p, need_r=False)
    p.set_defaults(func=cmd_jpoly)

    for name, fn, helptext in (
        ("fvalue", cmd_fvalue, "the color sum F_(L, Omega) in Z[xi]"),
        ("tau", cmd_tau, "the invariant tau(M) as c * kappa^e"),
        ("projective", cmd_projective, "eta * tau(M)"),
        ("divisibility", cmd_divisibility, "(xi-1)-divisibility of F against the guaranteed exponent"),
    ):
        p = sub.add_parser(name, help=helptext)
        _add_diagram_args(p)
        _add_workers(p)
        if name in ("tau", "projective"):
            p.add_argument("--weight", type=int, default=0, help="weight w of the extended manifold")
        p.set_defaults(func=fn)

    p = sub.add_parser("tqftdim", help="dimension of the state space of a marked surface")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--marks", help="marked points as n:+ or n:-, comma separated")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.set_defaults(func=cmd_tqftdim)

    p = sub.add_parser("periodicity", help="congruence obstruction to r-periodicity")
    p.add_argument("--manifold", required=True, help=DIAGRAM_HELP)
    p.add_argument("--rs", required=True, help="comma-separated odd primes")
    p.add_argument("--weight", type=int, default=0)
    p.add_argument("--format", choices=("json", "table", "both"), default="both")
    _add_workers(p)
    p.set_defaults(func=cmd_periodicity)

    p = sub.add_parser("verify", help="self-checks: degree bounds or the chord weight system")
    p.add_argument("--suite", choices=("degree", "weights"), required=True)
    p.add_argument("--diagram", help=DIAGRAM_HELP)
    p.add_argument("--coupons", help=COUPON_HELP)
    p.add_argument("--colors")
    p.add_argument("--framing")
    p.add_argument("--surgery")
    p.add_argument("--algebra", default="sl2")
    p.add_argument("--max-color", type=int, default=4, dest="max_color")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--format", choices=("json", "table"), default="table")
    p.set_defaults(func=cmd_verify, r=None)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qinv {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (DiagramError, InvalidRootOfUnity) as exc:
        print(f"qinv {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (InvariantError, ArithmeticError) as exc:
        print(f"qinv {args.command}: computation failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
