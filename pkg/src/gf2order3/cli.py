"""Command line: make families, classify generator files, verify reports."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .classifier import ClassificationReport, ClassifyConfig, census, classify, verify_report
from .errors import CapExceeded, InvariantViolation, PreconditionError, RecoveryFailed
from .families import CaseTag, FamilySpec, make_family
from .group import DEFAULT_CLOSURE_CAP
from .gf2 import read_matrices, write_matrices

EXIT_OK = 0
EXIT_HYPOTHESES = 1
EXIT_CAP = 2
EXIT_INVARIANT = 3

_TAGS = {t.value.lower(): t for t in CaseTag}


def _spec_from_args(args) -> FamilySpec:
    tag = _TAGS[args.family.lower()]
    if tag is CaseTag.TRANSVECTION_TV:
        return FamilySpec.transvection(args.dim)
    if tag is CaseTag.FROBENIUS_7_3:
        return FamilySpec.frobenius()
    if tag is CaseTag.ALT7_IN_GL4:
        return FamilySpec.alt7()
    if tag is CaseTag.SYMPLECTIC:
        return FamilySpec.symplectic(args.dim)
    if tag is CaseTag.ORTHOGONAL:
        return FamilySpec.orthogonal(args.dim, args.sign)
    if tag is CaseTag.ALTERNATING:
        return FamilySpec.alternating(args.omega, args.quotiented)
    if tag is CaseTag.F4_REFLECTION:
        return FamilySpec.f4_reflection(args.f4_dim)
    if tag is CaseTag.F4_UNITARY:
        return FamilySpec.f4_unitary(args.f4_dim)
    if tag is CaseTag.DEGENERATE_SYMPLECTIC:
        return FamilySpec.degenerate_symplectic(args.dim)
    if tag is CaseTag.FIXED_BLOCK:
        return FamilySpec.fixed_block()
    return FamilySpec.swapped_blocks()


def _read_generators(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return read_matrices(text)


def _config(args) -> ClassifyConfig:
    return ClassifyConfig(max_closure=args.max_closure, seed_index=args.seed_index)


def _cmd_make(args) -> int:
    fam = make_family(_spec_from_args(args))
    gens = [fam.seed] + [g for g in fam.generators if g != fam.seed]
    text = write_matrices(gens)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_classify(args) -> int:
    gens = _read_generators(args.generators)
    report = classify(gens, config=_config(args))
    if args.report_out:
        Path(args.report_out).write_text(report.to_json())
    sys.stdout.write(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_OK if report.classified else EXIT_HYPOTHESES


def _cmd_verify(args) -> int:
    report = ClassificationReport.from_json(Path(args.report).read_text())
    findings = verify_report(report, _read_generators(args.generators))
    if args.format == "json":
        payload = [{"name": f.name, "ok": f.ok, "detail": f.detail} for f in findings]
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        for f in findings:
            sys.stdout.write(f"{'PASS' if f.ok else 'FAIL'} {f.name}{' ' + f.detail if f.detail else ''}\n")
    return EXIT_OK if all(f.ok for f in findings) else EXIT_HYPOTHESES


def _cmd_census(args) -> int:
    out = census(_read_generators(args.generators), config=_config(args))
    sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gf2order3", description="Groups over GF(2) generated by order-3 elements.")
    sub = p.add_subparsers(dest="command", required=True)

    mk = sub.add_parser("make", help="emit generators of a family")
    mk.add_argument("family", choices=sorted(_TAGS), type=str.lower)
    mk.add_argument("--dim", type=int, default=6)
    mk.add_argument("--sign", type=int, choices=(1, -1), default=1)
    mk.add_argument("--omega", type=int, default=7)
    mk.add_argument("--quotiented", action="store_true")
    mk.add_argument("--f4-dim", type=int, default=3)
    mk.add_argument("-o", "--output")
    mk.set_defaults(func=_cmd_make)

    def common(sp):
        sp.add_argument("generators", help="generator file, '-' for stdin")
        sp.add_argument("--max-closure", type=int, default=DEFAULT_CLOSURE_CAP)
        sp.add_argument("--seed-index", type=int, default=0)
        sp.add_argument("--format", choices=("text", "json"), default="text")

    cl = sub.add_parser("classify", help="run the classification pipeline")
    common(cl)
    cl.add_argument("--report-out")
    cl.set_defaults(func=_cmd_classify)

    ve = sub.add_parser("verify", help="re-check a saved report against generators")
    ve.add_argument("report")
    ve.add_argument("generators")
    ve.add_argument("--format", choices=("text", "json"), default="text")
    ve.set_defaults(func=_cmd_verify)

    ce = sub.add_parser("census", help="geometry and spread statistics only")
    common(ce)
    ce.set_defaults(func=_cmd_census)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InvariantViolation, RecoveryFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESES


if __name__ == "__main__":
    sys.exit(main())
