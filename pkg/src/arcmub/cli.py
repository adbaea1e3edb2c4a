"""Command-line surface: construction, searches, reports, certificates.

Exit codes: 0 success, 1 a verification check ran and failed, 2 usage or
parse errors.  Every emitted artifact embeds the tool version, the field or
plane description, the seed and the worker count, so a run can be replayed
bit for bit; the census payload itself is independent of worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any

from . import __version__
from .arcs import (
    Arc,
    build_oval_certificate,
    canonical_conic,
    canonical_conic_coeffs,
    classify_oval_detail,
    conic_eval,
    conic_is_proper,
    conic_solutions,
    is_arc,
    lagrange_coeffs,
    opoly_hyperoval,
    pointed_conic,
    verify_oval_certificate,
)
from .cyclotomic import weil_survey
from .errors import ArcmubError, ParseError, VerificationFailed
from .galois import field_new, parse_field_desc
from .mub import (
    MubSet,
    analogy_report,
    char2_failure_demo,
    load_mub_json,
    mub_fixture_d2,
    save_mub_json,
    verify_mub_set,
    wf_mub_set,
)
from .plane import (
    builtin_plane,
    find_desargues_violation,
    hall_frame,
    hall_plane,
    load_plane,
    pg2,
    save_plane,
    standard_frame,
    verify_desargues_certificate,
    verify_plane_axioms,
)
from .search import census_with_classes, opoly_search, search_ovals
from .ternary import extract_ternary_ring, ptr_properties

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


def _meta(args, extra: dict | None = None) -> dict:
    meta = {
        "tool_version": __version__,
        "seed": getattr(args, "seed", None),
        "workers": getattr(args, "workers", 1),
    }
    if extra:
        meta.update(extra)
    return meta


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        out = json.dumps(payload, indent=2, sort_keys=True)
    else:
        out = "\n".join(text_lines)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)


def _field_from_args(args):
    if args.p is None:
        raise ParseError("--p is required for this subcommand")
    n = args.n if args.n is not None else 1
    modulus = [int(c) for c in args.modulus.split(",")] if args.modulus else None
    return field_new(args.p, n, modulus)


def _plane_from_args(args):
    if getattr(args, "infile", None):
        with open(args.infile, "r", encoding="utf-8") as fh:
            return load_plane(fh, checked=not getattr(args, "unchecked", False))
    if getattr(args, "plane", None) == "hall-9" or getattr(args, "hall", False):
        return hall_plane()
    return pg2(_field_from_args(args))


def _ints(text: str) -> list[int]:
    return [int(tok) for tok in text.replace(",", " ").split()]


# -- subcommand handlers -----------------------------------------------------------


def cmd_field(args) -> int:
    F = _field_from_args(args)
    payload = {
        "field": F.describe(),
        "order": F.order,
        "generator": F.generator,
        "elements": [F.poly_str(a) for a in range(min(F.order, 64))],
        "meta": _meta(args),
    }
    lines = [
        F.describe(),
        f"order {F.order}, multiplicative generator index {F.generator}",
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_weil(args) -> int:
    F = _field_from_args(args)
    sv = weil_survey(F)
    q = F.order
    lines = [f"quadratic character sums over {F.describe()} (|sum|^2 table, rows = m)"]
    for m in range(q):
        lines.append(" ".join(f"{int(v):>4d}" for v in sv.table[m]))
    if F.p == 2:
        pattern = sv.char2_row_pattern()
        lines.append(f"rows m!=0: nonzero entries per row = {pattern} (each exactly one)")
    else:
        lines.append(
            f"rows m!=0 uniformly equal to q = {q}: {'yes' if sv.odd_rows_uniform else 'NO'}"
        )
    if sv.alarms:
        lines.append(f"ALARM: {sv.alarms} non-rational magnitudes")
    payload = {
        "field": F.describe(),
        "table": sv.table.tolist(),
        "alarms": sv.alarms,
        "odd_rows_uniform": sv.odd_rows_uniform if F.p != 2 else None,
        "char2_row_pattern": sv.char2_row_pattern() if F.p == 2 else None,
        "meta": _meta(args),
    }
    _emit(args, payload, lines)
    return EXIT_VERIFY_FAILED if sv.alarms else EXIT_OK


def cmd_conic(args) -> int:
    F = _field_from_args(args)
    P = pg2(F)
    if args.coeffs:
        coeffs = _ints(args.coeffs)
        if len(coeffs) != 6:
            raise ParseError("--coeffs needs 6 entries c11,c12,c13,c22,c23,c33")
        sols = conic_solutions(F, coeffs, P)
        proper = conic_is_proper(F, coeffs)
        chk = is_arc(P, sols, method="incidence")
        payload = {
            "field": F.describe(),
            "coeffs": coeffs,
            "proper": proper,
            "points": list(sols),
            "is_arc": bool(chk),
            "meta": _meta(args),
        }
        lines = [
            f"conic {coeffs} over {F.describe()}: proper={proper}",
            f"{len(sols)} points, arc={bool(chk)}",
            "points: " + " ".join(map(str, sols)),
        ]
        _emit(args, payload, lines)
        return EXIT_OK
    arc = canonical_conic(F, P)
    coeffs = list(canonical_conic_coeffs(F))
    payload = {
        "field": F.describe(),
        "coeffs": coeffs,
        "points": list(arc.points),
        "size": len(arc),
        "meta": _meta(args),
    }
    lines = [
        f"canonical conic over {F.describe()}: {len(arc)} points (q+1 = {F.order + 1})",
        "points: " + " ".join(map(str, arc.points)),
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_oval_census(args) -> int:
    P = _plane_from_args(args)
    mode = "exhaustive" if args.mode == "exhaustive" else "randomized"
    rep = census_with_classes(
        P,
        mode=mode,
        budget=args.budget,
        seed=args.seed,
        workers=args.workers,
        allow_long=args.long,
    )
    r = rep.result
    payload = {
        "census": rep.census_body(),
        "meta": _meta(args, {"backend": r.backend, "plane": P.name}),
    }
    lines = [f"plane {P.name} (order {r.order}), mode {r.mode}"]
    lines.append(f"arcs by size: {r.arc_counts}")
    lines.append(f"complete arcs by size: {r.complete_counts}")
    lines.append(f"ovals (size d+1 = {r.order + 1}): {r.n_ovals}")
    if r.n_hyperovals or r.order % 2 == 0:
        lines.append(f"hyperovals (size d+2): {r.n_hyperovals}")
    if rep.class_counts is not None:
        lines.append(f"classes: {rep.class_counts}")
    if r.outcome != "ok":
        lines.append(f"outcome: {r.outcome}")
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_classify(args) -> int:
    F = _field_from_args(args)
    P = pg2(F)
    if args.opoly:
        coeffs = _ints(args.opoly)
        hyper = opoly_hyperoval(F, coeffs, P)
        per_drop = []
        for drop in hyper.points:
            oval = [p for p in hyper.points if p != drop]
            per_drop.append(classify_oval_detail(P, oval).oval_class.value)
        classes = sorted(set(per_drop))
        payload = {
            "field": F.describe(),
            "opoly_coeffs": coeffs,
            "hyperoval": list(hyper.points),
            "oval_classes": per_drop,
            "distinct_classes": classes,
            "meta": _meta(args),
        }
        lines = [
            f"o-polynomial {coeffs} over {F.describe()} gives a {len(hyper)}-point hyperoval",
            f"classes of its {len(per_drop)} ovals: {classes}",
        ]
        _emit(args, payload, lines)
        return EXIT_OK
    if not args.points:
        raise ParseError("classify needs --points or --opoly")
    pts = _ints(args.points)
    detail = classify_oval_detail(P, pts)
    cert = build_oval_certificate(P, pts, seed=args.seed, workers=args.workers)
    lines = [
        f"oval {pts} in {P.name}: class {detail.oval_class.value}",
    ]
    if detail.nucleus is not None:
        lines.append(f"nucleus: {detail.nucleus}")
    _emit(args, cert, lines)
    return EXIT_OK


def cmd_plane(args) -> int:
    if args.action == "build":
        P = hall_plane() if args.hall else pg2(_field_from_args(args))
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                save_plane(P, fh)
            print(f"wrote {P.name} to {args.out}")
        else:
            save_plane(P, sys.stdout)
        return EXIT_OK
    if args.action == "verify":
        if not args.infile:
            raise ParseError("plane verify needs --in")
        with open(args.infile, "r", encoding="utf-8") as fh:
            P = load_plane(fh, checked=False)
        rep = verify_plane_axioms(P)
        payload = {
            "plane": P.name,
            "order": P.order,
            "checks": [
                {"name": c.name, "passed": c.passed, "witness": c.witness} for c in rep.checks
            ],
            "all_pass": rep.all_pass,
            "meta": _meta(args),
        }
        _emit(args, payload, rep.lines_of_text())
        return EXIT_OK if rep.all_pass else EXIT_VERIFY_FAILED
    raise ParseError(f"unknown plane action {args.action!r}")


def cmd_ptr(args) -> int:
    P = _plane_from_args(args)
    if args.quad:
        quad = tuple(_ints(args.quad))
        if len(quad) != 4:
            raise ParseError("--quad needs 4 point indices o,x,y,i")
    elif P.name == "hall-9":
        quad = hall_frame(P)
    elif P.points is not None:
        quad = standard_frame(P)
    else:
        raise ParseError("imported planes need an explicit --quad frame")
    ring = extract_ternary_ring(P, quad)
    props = ptr_properties(ring)
    payload = {
        "plane": P.name,
        "frame": list(quad),
        "properties": props.__dict__,
        "field_profile": props.field_profile,
        "meta": _meta(args),
    }
    lines = [
        f"ternary ring of {P.name} at frame {list(quad)} (axioms verified)",
        f"linear={props.linear} add_assoc={props.add_associative} add_comm={props.add_commutative}",
        f"mul_assoc={props.mul_associative} mul_comm={props.mul_commutative}",
        f"left_dist={props.left_distributive} right_dist={props.right_distributive}",
        f"full field profile: {'yes' if props.field_profile else 'no'}",
    ]
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_desargues(args) -> int:
    P = _plane_from_args(args)
    mode = "sample" if args.mode == "random" else "enumerate"
    cert = find_desargues_violation(P, budget=args.budget, seed=args.seed, mode=mode)
    if cert is None:
        scope = "exhaustive" if (args.budget is None and mode == "enumerate") else f"within budget {args.budget}"
        payload = {
            "type": "desargues_search",
            "plane": P.name,
            "violation": None,
            "scope": scope,
            "meta": _meta(args),
        }
        _emit(args, payload, [f"no violation found in {P.name} ({scope})"])
        return EXIT_OK
    cert["meta"] = _meta(args)
    verify_desargues_certificate(P, cert)
    _emit(
        args,
        cert,
        [
            f"violation in {P.name}: center {cert['center']}, "
            f"triangles {cert['triangle1']} / {cert['triangle2']}",
            f"axis points {cert['axis_points']} are not collinear (re-verified)",
        ],
    )
    return EXIT_OK


def cmd_mub(args) -> int:
    if args.infile:
        with open(args.infile, "r", encoding="utf-8") as fh:
            S = load_mub_json(fh)
        rep = verify_mub_set(S)
        _emit(
            args,
            {"d": S.d, "n_bases": rep.n_bases, "all_pass": rep.all_pass, "meta": _meta(args)},
            rep.lines_of_text(),
        )
        return EXIT_OK if rep.all_pass else EXIT_VERIFY_FAILED
    if args.order == 2:
        S = mub_fixture_d2()
    else:
        F = _field_from_args(args)
        if F.p == 2:
            rep2 = char2_failure_demo(F)
            payload = {
                "field": F.describe(),
                "zero_witness": rep2.zero_witness,
                "n_zero_pairs": rep2.n_zero_pairs,
                "survey_consistent": rep2.survey_consistent,
                "meta": _meta(args),
            }
            _emit(args, payload, rep2.lines_of_text())
            return EXIT_OK
        S = wf_mub_set(F)
    if args.emit_set:
        target = args.out or "-"
        if target == "-":
            save_mub_json(S, sys.stdout)
            print()
        else:
            with open(target, "w", encoding="utf-8") as fh:
                save_mub_json(S, fh)
        return EXIT_OK
    rep = verify_mub_set(S)
    payload = {
        "d": S.d,
        "n_bases": rep.n_bases,
        "bound": S.d + 1,
        "all_pass": rep.all_pass,
        "provenance": S.provenance,
        "meta": _meta(args),
    }
    _emit(args, payload, rep.lines_of_text())
    return EXIT_OK if rep.all_pass else EXIT_VERIFY_FAILED


def cmd_analogy(args) -> int:
    d = args.order
    if d is None:
        raise ParseError("--order is required")
    if args.plane == "hall-9":
        P = hall_plane()
    else:
        p, n = _prime_power(d)
        P = pg2(field_new(p, n))
    S = None
    if d == 2:
        S = mub_fixture_d2()
    else:
        try:
            p, n = _prime_power(d)
            F = field_new(p, n)
            if F.p != 2:
                S = wf_mub_set(F)
        except ParseError:
            S = None
    census = search_ovals(
        P,
        mode="exhaustive" if args.mode == "exhaustive" else "randomized",
        budget=args.budget,
        seed=args.seed,
        workers=args.workers,
        allow_long=args.long,
    )
    rep = analogy_report(d, P, S, census=census)
    payload = {
        "d": d,
        "plane": P.name,
        "max_arc_with_tangents": rep.max_arc_with_tangents,
        "bound": rep.theoretical_bound,
        "mub_bases": rep.mub_bases,
        "mub_verified": rep.mub_verified,
        "match": rep.match,
        "triangle_exists": rep.triangle_exists,
        "three_basis_subset_ok": rep.three_basis_subset_ok,
        "meta": _meta(args, {"census_mode": census.mode}),
    }
    _emit(args, payload, rep.lines_of_text())
    return EXIT_OK


def _prime_power(q: int) -> tuple[int, int]:
    p = next((r for r in range(2, q + 1) if q % r == 0), q)
    n, t = 0, q
    while t % p == 0:
        t //= p
        n += 1
    if t != 1 or n == 0:
        raise ParseError(f"{q} is not a prime power")
    return p, n


def cmd_reproduce_table(args) -> int:
    cells: dict[str, dict[int, dict[str, Any]]] = {
        "ordinary conic": {},
        "pointed-conic": {},
        "irregular oval": {},
    }
    for n, q in ((1, 2), (2, 4), (3, 8)):
        F = field_new(2, n)
        P = pg2(F)
        rep = census_with_classes(P, seed=args.seed, workers=args.workers)
        cc = rep.class_counts or {}
        cells["ordinary conic"][n] = {
            "answer": "yes" if cc.get("conic") else "no",
            "count": cc.get("conic", 0),
            "scope": "exhaustive",
        }
        cells["pointed-conic"][n] = {
            "answer": "yes" if cc.get("pointed_conic") else "no",
            "count": cc.get("pointed_conic", 0),
            "scope": "exhaustive",
        }
        cells["irregular oval"][n] = {
            "answer": "yes" if cc.get("irregular") else "no",
            "count": cc.get("irregular", 0),
            "scope": "exhaustive",
        }
    # n = 4: constructive witnesses for the first two rows
    F16 = field_new(2, 4)
    P16 = pg2(F16)
    conic16 = canonical_conic(F16, P16)
    cls = classify_oval_detail(P16, conic16.points).oval_class.value
    cells["ordinary conic"][4] = {"answer": "yes" if cls == "conic" else "no", "scope": "constructed"}
    pc16 = pointed_conic(F16, conic16, conic16.points[0])
    cls = classify_oval_detail(P16, pc16.points).oval_class.value
    cells["pointed-conic"][4] = {
        "answer": "yes" if cls == "pointed_conic" else "no",
        "scope": "constructed",
    }
    if args.long:
        budget = args.budget if args.budget is not None else 50_000_000
        outcome = opoly_search(F16, want="irregular", node_budget=budget)
        if outcome.found_values is not None:
            coeffs = lagrange_coeffs(F16, outcome.found_values)
            hyper = opoly_hyperoval(F16, coeffs, P16)
            oval = [p for p in hyper.points][1:]
            cls = classify_oval_detail(P16, oval).oval_class.value
            cells["irregular oval"][4] = {
                "answer": "yes" if cls == "irregular" else "no",
                "scope": "o-polynomial search",
                "opoly_coeffs": coeffs,
                "witness": build_oval_certificate(P16, oval, seed=args.seed, workers=args.workers),
            }
        else:
            cells["irregular oval"][4] = {
                "answer": "inconclusive",
                "scope": f"budget exhausted ({outcome.nodes} nodes)",
            }
    else:
        cells["irregular oval"][4] = {"answer": "inconclusive", "scope": "long mode required"}

    header = f"{'':>16s} |" + "".join(f"{f'n={n}':>14s}" for n in (1, 2, 3, 4))
    lines = [header, "-" * len(header)]
    for row in ("ordinary conic", "pointed-conic", "irregular oval"):
        entries = "".join(f"{cells[row][n]['answer']:>14s}" for n in (1, 2, 3, 4))
        lines.append(f"{row:>16s} |{entries}")
    lines.append("")
    for row in ("ordinary conic", "pointed-conic", "irregular oval"):
        for n in (1, 2, 3, 4):
            cell = cells[row][n]
            extra = f" [{cell['scope']}]"
            cnt = f" count={cell['count']}" if "count" in cell else ""
            lines.append(f"  {row} @ n={n}: {cell['answer']}{cnt}{extra}")
    payload = {
        "rows": {row: {str(n): cells[row][n] for n in (1, 2, 3, 4)} for row in cells},
        "meta": _meta(args),
    }
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_verify_cert(args) -> int:
    if not args.infile:
        raise ParseError("verify-cert needs --in")
    try:
        with open(args.infile, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from exc
    if isinstance(obj, dict) and "bases" in obj and "type" not in obj:
        S = MubSet.from_json_dict(obj)
        rep = verify_mub_set(S)
        print("\n".join(rep.lines_of_text()))
        return EXIT_OK if rep.all_pass else EXIT_VERIFY_FAILED
    if not isinstance(obj, dict) or "type" not in obj:
        raise ParseError("certificate lacks a type field")
    P = _resolve_cert_plane(obj, args)
    if obj["type"] == "oval":
        verify_oval_certificate(P, obj)
        print(f"oval certificate verifies in {P.name}")
        return EXIT_OK
    if obj["type"] == "desargues_violation":
        verify_desargues_certificate(P, obj)
        print(f"desargues violation certificate verifies in {P.name}")
        return EXIT_OK
    raise ParseError(f"unknown certificate type {obj['type']!r}")


def _resolve_cert_plane(obj: dict, args):
    if getattr(args, "plane_file", None):
        with open(args.plane_file, "r", encoding="utf-8") as fh:
            return load_plane(fh)
    name = obj.get("plane")
    if not name:
        raise ParseError("certificate lacks a plane name; pass --plane-file")
    try:
        return builtin_plane(str(name))
    except ValueError as exc:
        raise ParseError(f"{exc}; pass --plane-file for imported planes") from exc


# -- parser ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="arcmub",
        description="exact computations with finite planes, arcs/ovals, character sums and MUBs",
    )
    ap.add_argument("--version", action="version", version=f"arcmub {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, plane_source=False):
        sp.add_argument("--p", type=int, help="prime characteristic")
        sp.add_argument("--n", "--k", dest="n", type=int, help="extension degree")
        sp.add_argument("--modulus", help="comma-separated modulus coefficients, low degree first")
        sp.add_argument("--order", type=int, help="plane order / dimension")
        sp.add_argument("--in", dest="infile", help="input file")
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--mode", choices=["exhaustive", "random"], default="exhaustive")
        sp.add_argument("--budget", type=int)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument(
            "--workers",
            type=int,
            default=int(os.environ.get("ARCMUB_WORKERS", "1")),
        )
        sp.add_argument("--long", action="store_true", help="allow long-running searches")
        sp.add_argument("--format", choices=["json", "text"], default="text")
        if plane_source:
            sp.add_argument("--plane", choices=["pg2", "hall-9"], default="pg2")
            sp.add_argument("--hall", action="store_true", help="shorthand for --plane hall-9")
            sp.add_argument("--unchecked", action="store_true", help="skip axiom check on load")

    sp = sub.add_parser("field", help="construct a field and print its description")
    common(sp)
    sp.set_defaults(func=cmd_field)

    sp = sub.add_parser("weil", help="survey the quadratic character sums of a field")
    common(sp)
    sp.add_argument("--survey", action="store_true", help="(default) full |sum|^2 table")
    sp.set_defaults(func=cmd_weil)

    sp = sub.add_parser("conic", help="canonical conic or solutions of given coefficients")
    common(sp)
    sp.add_argument("--coeffs", help="6 coefficients c11,c12,c13,c22,c23,c33")
    sp.set_defaults(func=cmd_conic)

    sp = sub.add_parser("oval-census", help="count and classify ovals of a plane")
    common(sp, plane_source=True)
    sp.set_defaults(func=cmd_oval_census)

    sp = sub.add_parser("classify", help="classify an oval or an o-polynomial hyperoval")
    common(sp)
    sp.add_argument("--points", help="point indices of the oval")
    sp.add_argument("--opoly", help="o-polynomial coefficients, low degree first")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("plane", help="build or verify a plane incidence file")
    sp.add_argument("action", choices=["build", "verify"])
    common(sp, plane_source=True)
    sp.set_defaults(func=cmd_plane)

    sp = sub.add_parser("ptr", help="extract a planar ternary ring and profile it")
    common(sp, plane_source=True)
    sp.add_argument("--quad", help="frame as 4 point indices o,x,y,i")
    sp.set_defaults(func=cmd_ptr)

    sp = sub.add_parser("desargues", help="search for a Desargues violation")
    common(sp, plane_source=True)
    sp.set_defaults(func=cmd_desargues)

    sp = sub.add_parser("mub", help="construct or verify mutually unbiased bases")
    common(sp)
    sp.add_argument("--verify", action="store_true", help="(default) verify the set")
    sp.add_argument("--emit-set", action="store_true", help="write the set as JSON")
    sp.set_defaults(func=cmd_mub)

    sp = sub.add_parser("analogy", help="arc-size vs basis-count cardinality report")
    common(sp, plane_source=True)
    sp.set_defaults(func=cmd_analogy)

    sp = sub.add_parser("reproduce-table", help="oval-class grid over extension degrees 1..4")
    common(sp)
    sp.set_defaults(func=cmd_reproduce_table)

    sp = sub.add_parser("verify-cert", help="re-verify a certificate or MUB set file")
    common(sp)
    sp.add_argument("--plane-file", help="incidence file for certificates on imported planes")
    sp.set_defaults(func=cmd_verify_cert)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    except ArcmubError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY_FAILED


if __name__ == "__main__":
    sys.exit(main())
