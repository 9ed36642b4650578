"""Command-line front end: ``hyperjump analyze|oracle|ring-info --input FILE``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .engine import JumpReport, analyze
from .kernel import TruncatedPoly, format_rational
from .lattice import ArrangementError, ArrangementInput, building_set, cone, parse_arrangement
from .oracle import AffineData, oracle_jumping_numbers
from .ring import build_presentation, graded_quotient_dims, minimal_non_nested

EXIT_OK = 0
EXIT_DISAGREEMENT = 1
EXIT_INPUT = 2


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str
    building_set: str = "full"
    with_oracle: bool = False
    output_format: str = "table"
    emit_diagnostics: bool = False


class InputError(Exception):
    pass


def load_input(path: str) -> ArrangementInput:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return parse_arrangement(text)
    except ArrangementError as exc:
        raise InputError(f"{path}: {exc}") from exc


def dump(document: dict) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def _pairs(items) -> str:
    return ",".join(f"({format_rational(c)},{m})" for c, m in items) or "none"


def _numbers(items) -> str:
    return ", ".join(format_rational(c) for c in items) or "none"


# ---------------------------------------------------------------------------
# analyze


def report_document(report: JumpReport, diagnostics: bool = False) -> dict:
    cands = []
    for r in report.candidates:
        entry = {
            "c": format_rational(r.c),
            "S_c": [list(label) for label in r.s_c],
            "verdict": r.verdict,
            "oracle": r.oracle,
        }
        if r.c == 1:
            entry["note"] = "trivially jumping"
        if diagnostics:
            entry["criterion"] = r.criterion
        cands.append(entry)
    return {
        "n": report.n,
        "d": report.d,
        "a0": report.a0,
        "building_set": report.building_set,
        "inner_building_set": report.inner_building_set,
        "jumping_numbers": [format_rational(c) for c in report.jumping_numbers],
        "inner_multiplicities": [[format_rational(c), m] for c, m in report.inner_multiplicities],
        "spectrum": [[format_rational(c), m] for c, m in report.spectrum_part],
        "candidates": cands,
        "oracle_agreement": report.oracle_agreement,
    }


def report_table(report: JumpReport, diagnostics: bool = False) -> str:
    lines = [
        f"n={report.n} d={report.d} a0={report.a0} building set: {report.building_set}"
        + (f" (inner multiplicities on {report.inner_building_set})"
           if report.inner_building_set != report.building_set else ""),
        f"{'c':>8}  {'verdict':<8}{'oracle':<8}S_c",
    ]
    for r in report.candidates:
        oracle = "-" if r.oracle is None else ("yes" if r.oracle else "no")
        verdict = "yes" if r.verdict else "no"
        s_c = " ".join("{" + ",".join(map(str, label)) + "}" for label in r.s_c)
        note = "  (trivially jumping)" if r.c == 1 else ""
        lines.append(f"{format_rational(r.c):>8}  {verdict:<8}{oracle:<8}{s_c}{note}")
        if diagnostics and r.criterion is not None:
            lines.append(f"{'':>10}criterion: {r.criterion}")
    lines.append(
        f"jumping numbers in (0,1): {_numbers(report.jumping_numbers)}; "
        f"spectrum part: {_pairs(report.spectrum_part)}"
    )
    checked = [r for r in report.candidates if r.oracle is not None]
    if checked:
        agree = sum(r.oracle == r.verdict for r in checked)
        word = "agree" if agree == len(checked) else "DISAGREE"
        lines.append(f"oracle: {word} on {agree}/{len(checked)} candidates")
    return "\n".join(lines) + "\n"


def cmd_analyze(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    a = load_input(config.input_path)
    report = analyze(a, config.building_set, config.with_oracle, config.emit_diagnostics)
    if config.output_format == "json":
        out.write(dump(report_document(report, config.emit_diagnostics)))
    else:
        out.write(report_table(report, config.emit_diagnostics))
    return EXIT_DISAGREEMENT if report.oracle_agreement is False else EXIT_OK


# ---------------------------------------------------------------------------
# oracle


def _witness_document(p: TruncatedPoly) -> dict:
    terms = sorted(p.terms.items(), reverse=True)
    return {"terms": [[list(e), format_rational(c)] for e, c in terms]}


def cmd_oracle(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    a = load_input(config.input_path)
    data = AffineData.build(a)
    jumps = [c for c in oracle_jumping_numbers(data) if c < 1]
    doc: dict = {
        "degree_bound": data.degree_bound,
        "jumping_numbers": [format_rational(c) for c in jumps],
    }
    if config.emit_diagnostics:
        doc["witnesses"] = [
            {"c": format_rational(c), **_witness_document(data.witness(c))} for c in jumps
        ]
    if config.output_format == "json":
        out.write(dump(doc))
        return EXIT_OK
    lines = [f"degree bound: {data.degree_bound}",
             f"jumping numbers in (0,1): {_numbers(jumps)}"]
    if config.emit_diagnostics:
        names = [f"x{i}" for i in range(data.nvars)]
        for c in jumps:
            lines.append(f"  witness at {format_rational(c)}: {data.witness(c).to_string(names)}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# ring-info


def ring_document(a: ArrangementInput, kind: str) -> dict:
    g = building_set(cone(a), kind)
    p = build_presentation(g)
    dims = graded_quotient_dims(p)
    members = [
        {"name": g.name(i), "hyperplanes": list(g.label(i)), "dim": g.delta(i),
         "codim": g.r(i), "s": g.s(i) if i else None}
        for i in range(len(g.members))
    ]
    return {
        "building_set": g.kind,
        "variables": len(g.members),
        "members": members,
        "minimal_non_nested": [[g.name(i) for i in h] for h in minimal_non_nested(g)],
        "generators": [
            {"type": gen.kind, "support": [g.name(i) for i in gen.support],
             "degree": gen.degree}
            | ({"w": g.name(gen.w), "exponent": gen.exponent} if gen.kind == 2 else {})
            for gen in p.generators
        ],
        "quotient_dims": dims,
        "top_degree": p.top_degree,
        "top_quotient_dim": dims[-1],
    }


def cmd_ring_info(config: RunConfig, out=None) -> int:
    out = out or sys.stdout
    doc = ring_document(load_input(config.input_path), config.building_set)
    if config.output_format == "json":
        out.write(dump(doc))
        return EXIT_OK
    lines = [f"building set ({doc['building_set']}, {doc['variables']} variables):"]
    for m in doc["members"]:
        lines.append(f"  {m['name']:<14} dim {m['dim']}  codim {m['codim']}  s {m['s'] if m['s'] is not None else '-'}")
    non_nested = doc["minimal_non_nested"]
    lines.append(f"minimal non-nested families: {len(non_nested)}")
    for h in non_nested:
        lines.append("  {" + ", ".join(h) + "}")
    counts: dict[tuple[int, int], int] = {}
    for gen in doc["generators"]:
        key = (gen["type"], gen["degree"])
        counts[key] = counts.get(key, 0) + 1
    lines.append(f"generators of I: {len(doc['generators'])}")
    for (kind, deg), k in sorted(counts.items()):
        lines.append(f"  type {kind}, degree {deg}: {k}")
    lines.append("quotient dimension by degree: " + " ".join(map(str, doc["quotient_dims"])))
    lines.append(f"quotient dimension at degree {doc['top_degree']}: {doc['top_quotient_dim']}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------


COMMANDS = {"analyze": cmd_analyze, "oracle": cmd_oracle, "ring-info": cmd_ring_info}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperjump",
        description="Jumping numbers and inner jumping multiplicities of central hyperplane arrangements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("analyze", "decide jumping numbers in (0,1) and the spectrum part on (0,1]"),
        ("oracle", "jumping numbers from the affine ideal-membership check only"),
        ("ring-info", "building set, generators of I and graded quotient dimensions"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", required=True, metavar="PATH", help="arrangement JSON ('-' for stdin)")
        p.add_argument("--format", choices=["table", "json"], default="table")
        if name != "oracle":
            p.add_argument("--building-set", choices=["full", "minimal"], default="full")
        if name == "analyze":
            p.add_argument("--oracle", action="store_true", help="cross-check every candidate")
        if name != "ring-info":
            p.add_argument("--diagnostics", action="store_true",
                           help="criterion polynomials (analyze) or witnesses (oracle)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        input_path=args.input,
        building_set=getattr(args, "building_set", "full"),
        with_oracle=getattr(args, "oracle", False),
        output_format=args.format,
        emit_diagnostics=getattr(args, "diagnostics", False),
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    config = config_from_args(args)
    try:
        return COMMANDS[config.command](config)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
