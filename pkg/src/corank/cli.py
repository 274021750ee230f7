"""Command-line front door: every pipeline as a batch command.

Subcommands: sigma-table, certify, corank2, betti, psi, twist-apply.
Global flags --format {text,json} and --no-timestamp; JSON output is
byte-stable for fixed inputs once the timestamp is suppressed.

Exit codes: 0 success / obstruction confirmed, 1 negative verdict
(WITNESS_FOUND, failed table match, false certificate), 2 parse or usage
errors, 3 INCONCLUSIVE co-rank analysis.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .freegroup import exponent_sums, format_word, parse_word
from .manifold import (CertificationError, betti, brute_force_surjection_search,
                       certify_corank_one_mapping_torus, corank2_obstruction,
                       handle_attachment_presentation, read_presentation)
from .spform import (SeparatingTwistSpec, bits, catalog_specs, certify_non_extension,
                     enumerate_psi, fn_add, fn_const, parse_sigma_polynomial,
                     separating_twist_catalog, sigma_separating)
from .surface import (apply_twist_word, attaching_word, curve, parse_twist_word,
                      standard_separating_curve, standard_twists_genus2)

EXIT_OK = 0
EXIT_VERDICT_FALSE = 1
EXIT_PARSE = 2
EXIT_INCONCLUSIVE = 3


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        if not args.no_timestamp:
            payload = dict(payload, timestamp=time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()))
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def cmd_sigma_table(args) -> int:
    psi = enumerate_psi(2)
    catalog = separating_twist_catalog(args.table)
    rows = []
    lines = []
    all_match = True
    total = fn_const(0, psi)
    for name, spec, poly in catalog:
        computed = sigma_separating(spec, psi)
        printed = parse_sigma_polynomial(poly, psi)
        match = computed == printed
        all_match &= match
        total = fn_add(total, computed)
        table_str = "".join(map(str, computed.table))
        rows.append({"name": name, "polynomial": poly, "table": table_str,
                     "match": match})
        lines.append(f"{name:9s} {'MATCH' if match else 'MISMATCH'}  {table_str}  {poly}")
    sum_one = total.is_constant_one
    lines.append(f"sum {'=' if sum_one else '!='} constant 1")
    ok = all_match and sum_one
    _emit(args, {"command": "sigma-table", "rows": rows,
                 "sum_is_constant_one": sum_one, "all_match": all_match},
          lines)
    return EXIT_OK if ok else EXIT_VERDICT_FALSE


def _parse_twist_spec_file(path: str) -> tuple[tuple[SeparatingTwistSpec, int], ...]:
    """Tokens name[^exp] over the bundled catalog, or raw pairs abits,bbits[^exp]."""
    by_name = {name: spec for name, spec, _ in separating_twist_catalog()}
    with open(path) as fh:
        text = fh.read()
    word = []
    for tok in text.split():
        if tok.startswith("#"):
            break
        head, sep, tail = tok.partition("^")
        exp = int(tail) if sep else 1
        if "," in head:
            a_bits, b_bits = head.split(",")
            spec = SeparatingTwistSpec(bits(a_bits), bits(b_bits))
        elif head in by_name:
            spec = by_name[head]
        else:
            raise ValueError(f"unknown twist token {tok!r}")
        if exp != 0:
            word.append((spec, exp))
    if not word:
        raise ValueError("empty twist word")
    return tuple(word)


def cmd_certify(args) -> int:
    word = _parse_twist_spec_file(args.wordspec)
    if args.power % 2 == 0:
        raise ValueError("--power must be odd")
    psi = enumerate_psi(2)
    cert = certify_non_extension(word, psi)
    payload: dict = {"command": "certify", "non_extension": cert.to_json()}
    lines = [f"sigma table: {''.join(map(str, cert.sigma.table))}",
             f"non-extension verdict: {cert.verdict}"]
    code = EXIT_OK if cert.verdict else EXIT_VERDICT_FALSE
    if cert.verdict:
        try:
            mt = certify_corank_one_mapping_torus(word, genus=2, power=args.power)
        except CertificationError as exc:
            lines.append(f"certification failed: {exc}")
            payload["error"] = str(exc)
            code = EXIT_VERDICT_FALSE
        else:
            payload["mapping_torus"] = mt.to_json()
            lines.append(f"betti of the mapping torus: {mt.betti}")
            lines.append(f"conclusion: {mt.conclusion}")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
        lines.append(f"wrote {args.out}")
    _emit(args, payload, lines)
    return code


def cmd_corank2(args) -> int:
    if args.bundled_w:
        w = attaching_word()
    else:
        with open(args.word_file) as fh:
            w = parse_word(fh.read(), rank=4)
    pres = handle_attachment_presentation(standard_separating_curve().word, w)
    b = betti(pres)
    report = corank2_obstruction(w, bound=args.brute_bound or 4)
    payload: dict = {"command": "corank2", "betti": b, "report": report.to_json()}
    lines = [f"betti of the handle presentation: {b}",
             f"cases: {len(report.cases)}",
             f"conclusion: {report.conclusion.kind}"]
    if report.conclusion.params:
        lines.append(f"witness: {report.conclusion.params}")
    if args.brute_bound:
        witnesses = brute_force_surjection_search(w, args.brute_bound)
        payload["brute_force"] = {"bound": args.brute_bound,
                                  "witnesses": [list(p) for p in witnesses]}
        lines.append(f"brute force bound {args.brute_bound}: {len(witnesses)} witnesses")
    _emit(args, payload, lines)
    if report.conclusion.kind == "NO_EPIMORPHISM":
        return EXIT_OK
    if report.conclusion.kind == "WITNESS_FOUND":
        return EXIT_VERDICT_FALSE
    return EXIT_INCONCLUSIVE


def cmd_betti(args) -> int:
    pres = read_presentation(args.presentation)
    b = betti(pres)
    _emit(args, {"command": "betti", "generators": list(pres.names), "betti": b},
          [f"betti: {b}"])
    return EXIT_OK


def cmd_psi(args) -> int:
    psi = enumerate_psi(args.genus)
    forms = ["".join(map(str, f.basis_values)) for f in psi.forms]
    lines = [f"|Psi| = {len(psi)}"] + forms
    _emit(args, {"command": "psi", "genus": args.genus, "count": len(psi),
                 "forms": forms}, lines)
    return EXIT_OK


def cmd_twist_apply(args) -> int:
    tw = parse_twist_word(args.twists)
    if args.curve is None:
        c = standard_separating_curve()
    else:
        c = curve("input", parse_word(args.curve, rank=4))
    image = apply_twist_word(tw, c, standard_twists_genus2())
    _emit(args, {"command": "twist-apply", "word": format_word(image.word),
                 "homology": list(image.homology)},
          [f"word: {format_word(image.word)}",
           f"homology: {image.homology}"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--no-timestamp", action="store_true",
                        help="omit the timestamp field from JSON output")

    parser = argparse.ArgumentParser(
        prog="corank",
        description="co-rank obstruction computations for surface bundles "
                    "and two-handle 3-manifolds")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sigma-table", parents=[common],
                       help="check the bundled twist obstruction table")
    p.add_argument("--table", default=None, help="alternate catalog file")
    p.set_defaults(func=cmd_sigma_table)

    p = sub.add_parser("certify", parents=[common],
                       help="certify a separating-twist word")
    p.add_argument("wordspec", help="file of twist tokens, e.g. 'gamma1 gamma2^3'")
    p.add_argument("--power", type=int, default=1, help="odd power of the word")
    p.add_argument("--out", default=None, help="write certificate JSON here")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("corank2", parents=[common],
                       help="rank-2 epimorphism obstruction for a relator word")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--bundled-w", action="store_true",
                     help="use the bundled attaching word")
    src.add_argument("--word-file", default=None, help="file with a word over a,b,c,d")
    p.add_argument("--brute-bound", type=int, default=None,
                   help="also run the brute-force box search at this bound")
    p.set_defaults(func=cmd_corank2)

    p = sub.add_parser("betti", parents=[common],
                       help="first Betti number of a presentation file")
    p.add_argument("presentation")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("psi", parents=[common], help="enumerate Arf-zero forms")
    p.add_argument("--genus", type=int, required=True)
    p.set_defaults(func=cmd_psi)

    p = sub.add_parser("twist-apply", parents=[common],
                       help="apply a twist word to a curve")
    p.add_argument("--twists", required=True,
                   help="e.g. 'alpha^-1 (alpha epsilon gamma^2 beta^-1 delta^-1)^3'")
    p.add_argument("--curve", default=None,
                   help="curve word over a,b,c,d (default: the separating commutator)")
    p.set_defaults(func=cmd_twist_apply)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
