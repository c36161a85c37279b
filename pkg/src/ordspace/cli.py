"""Command-line front end.

Exit codes: 0 verified / quotient space, 1 refuted / not a quotient space,
2 undecided, 3 usage or input error, 4 oracle disagreement.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .f2core import BoundExceeded, echelonize
from .quotients import (
    NECESSARY_ONLY,
    NOT_QUOTIENT_SPACE,
    QUOTIENT_SPACE,
    QuotientVerdict,
    brute_force_decide,
    decide_general,
    kernel_subgroup,
)
from .spaces import (
    OracleConfig,
    SpaceError,
    SpaceFileError,
    fans_by_level,
    load_space,
    parse_character,
    parse_element,
    stability_index,
    verify_axioms,
)
from .structure import StructureError, connected_components, decompose
from .witt import (
    format_form,
    in_ideal_power,
    lam_b_equivalence,
    parse_form,
    signature_vector,
)

EXIT_OK, EXIT_REFUTED, EXIT_UNDECIDED, EXIT_INPUT, EXIT_DISAGREE = 0, 1, 2, 3, 4
STATUS_EXIT = {QUOTIENT_SPACE: EXIT_OK, NOT_QUOTIENT_SPACE: EXIT_REFUTED, NECESSARY_ONLY: EXIT_UNDECIDED}


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    digest: str = ""
    lines: list[str] = field(default_factory=list)
    exit_code: int = EXIT_OK

    def text(self) -> str:
        head = [f"command: {self.command}"]
        if self.digest:
            head.append(f"input: sha256:{self.digest}")
        return "\n".join(head + self.lines) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _load(report: RunReport, path: str):
    text = _read(path)
    report.digest = _digest(text)
    return load_space(text)


def _verdict_lines(report: RunReport, verdict: QuotientVerdict) -> None:
    report.lines += verdict.report().splitlines()
    report.exit_code = STATUS_EXIT[verdict.status]


def _oracle(report: RunReport, verdict: QuotientVerdict, S, G0, config: OracleConfig) -> None:
    try:
        value = brute_force_decide(S, G0, config)
    except BoundExceeded as exc:
        report.lines.append(f"oracle: skipped ({exc})")
        return
    checked = verdict.with_oracle(value)
    report.lines.append(f"oracle: {'space' if value else 'not a space'} "
                        f"({'agrees' if checked.consistent else 'DISAGREES'})")
    if not checked.consistent:
        report.exit_code = EXIT_DISAGREE


# --- subcommands ------------------------------------------------------------------------


def cmd_verify(args, report, config):
    S = _load(report, args.file)
    report.lines.append(f"|X| = {S.n}, |G| = 2^{S.dim}")
    verdict = verify_axioms(S, config)
    if verdict.is_space:
        report.lines.append("verdict: space of orderings")
    else:
        report.lines.append(f"verdict: not a space of orderings (axiom {verdict.axiom})")
        report.lines.append(f"witness: {verdict.detail}")
        report.exit_code = EXIT_REFUTED


def cmd_fans(args, report, config):
    S = _load(report, args.file)
    levels = fans_by_level(S)
    for k, fans in enumerate(levels):
        if k < 2:
            continue
        report.lines.append(f"fans of size {1 << k}: {len(fans)}")
        for v in sorted(fans, key=lambda m: S.label_set(m)):
            report.lines.append("  {" + " ".join(S.label_set(v)) + "}")
    if len(levels) < 3:
        report.lines.append("no fans with 4 or more orderings")


def cmd_stab(args, report, config):
    S = _load(report, args.file)
    report.lines.append(f"stability index: {stability_index(S)}")


def cmd_components(args, report, config):
    S = _load(report, args.file)
    comps = connected_components(S)
    report.lines.append(f"connected components: {len(comps)}")
    for c in comps:
        report.lines.append("  {" + " ".join(S.label_set(c)) + "}")


def cmd_decompose(args, report, config):
    S = _load(report, args.file)
    try:
        tree = decompose(S)
    except StructureError as exc:
        report.lines.append(f"no decomposition: {exc}")
        report.exit_code = EXIT_REFUTED
        return
    report.lines += tree.outline().splitlines()


def _subgroup_from_args(S, args):
    if args.gammas:
        gammas = [parse_character(S, w) for w in args.gammas]
        for w, g in zip(args.gammas, gammas):
            if g & 1:
                raise SpaceError(f"{w} takes the value -1 at -1")
        return kernel_subgroup(S, gammas)
    elems = [parse_element(S, w) for w in args.subgroup]
    return echelonize([S.minus_one, *elems], S.n)


def cmd_quotient(args, report, config):
    S = _load(report, args.file)
    G0 = _subgroup_from_args(S, args)
    index = S.dim - G0.rank
    report.lines.append(f"|X| = {S.n}, |G| = 2^{S.dim}, (G:G0) = 2^{index}")
    verdict = decide_general(S, G0)
    _verdict_lines(report, verdict)
    if args.oracle:
        _oracle(report, verdict, S, G0, config)


def cmd_witt(args, report, config):
    S = _load(report, args.file)
    phi = parse_form(S, args.form)
    sig = signature_vector(S, phi)
    report.lines.append(f"form: {format_form(S, phi)}")
    report.lines.append("signature: " + " ".join(f"{lbl}={s}" for lbl, s in zip(S.labels, sig)))
    member = in_ideal_power(S, phi, args.power)
    report.lines.append(f"in I^{args.power}: {'yes' if member else 'no'}")
    report.exit_code = EXIT_OK if member else EXIT_REFUTED


def cmd_lamb(args, report, config):
    S = _load(report, args.file)
    ok = lam_b_equivalence(S, args.power)
    report.lines.append(f"sgn = 0 mod 2^{args.power} everywhere iff in I^{args.power}: "
                        f"{'holds' if ok else 'fails'}")
    report.exit_code = EXIT_OK if ok else EXIT_REFUTED


def cmd_qx(args, report, config):
    from .qx import QxError, build_from_text, decide_qx_quotient, dump_model

    text = _read(args.model)
    report.digest = _digest(text)
    try:
        model = build_from_text(text, config)
    except QxError as exc:
        raise UsageError(str(exc)) from None
    report.lines.append(f"|X|={model.space.n}, |H|={model.space.order} "
                        f"(|A|={len(model.A)}, |B|={len(model.B)}, m={model.m})")
    report.lines.append(f"oracle: {'passed' if model.oracle_checked else 'skipped (dim H above bound)'}")
    if args.qx_command == "build":
        if args.out:
            Path(args.out).write_text(dump_model(model))
            report.lines.append(f"written: {args.out}")
        else:
            report.lines += dump_model(model).rstrip("\n").splitlines()
        return
    S = model.space
    G0 = _subgroup_from_args(S, args)
    verdict = decide_qx_quotient(model, G0)
    _verdict_lines(report, verdict)
    if args.oracle:
        _oracle(report, verdict, S, G0, config)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ordspace", description="Spaces of orderings and their quotients.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)
    for name, helptext in (("verify", "check the axioms"), ("fans", "list fans of size >= 4"),
                           ("stab", "stability index"), ("components", "connected components"),
                           ("decompose", "direct sums and group extensions")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file")

    def quotient_args(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--gammas", nargs="+", metavar="WORD", help="sigma-words generating chi(G/G0)")
        g.add_argument("--subgroup", nargs="+", metavar="WORD", help="g-words generating G0 with -1")
        p.add_argument("--oracle", action="store_true", help="cross-check with the axiom oracle")

    p = sub.add_parser("quotient", help="decide a quotient structure")
    p.add_argument("file")
    quotient_args(p)
    p = sub.add_parser("witt", help="signature and I^n membership of a form")
    p.add_argument("file")
    p.add_argument("--form", required=True)
    p.add_argument("--power", type=int, required=True)
    p = sub.add_parser("lamb", help="compare I^n with the signature congruence")
    p.add_argument("file")
    p.add_argument("--power", type=int, required=True)
    qx = sub.add_parser("qx", help="finite models of Q(x)")
    qsub = qx.add_subparsers(dest="qx_command", parser_class=_Parser, required=True)
    p = qsub.add_parser("build", help="build a model and print it")
    p.add_argument("model")
    p.add_argument("--out", help="write the space file and sites here")
    p = qsub.add_parser("quotient", help="decide a quotient of a model")
    p.add_argument("model")
    quotient_args(p)
    return parser


COMMANDS = {"verify": cmd_verify, "fans": cmd_fans, "stab": cmd_stab, "components": cmd_components,
            "decompose": cmd_decompose, "quotient": cmd_quotient, "witt": cmd_witt,
            "lamb": cmd_lamb, "qx": cmd_qx}


def run(argv: Sequence[str]) -> RunReport:
    report = RunReport(" ".join(argv))
    try:
        args = build_parser().parse_args(list(argv))
        if getattr(args, "power", 1) < 1:
            raise UsageError("--power must be at least 1")
        config = OracleConfig.from_env()
        COMMANDS[args.command](args, report, config)
    except UsageError as exc:
        report.lines.append(f"error: {exc}")
        report.exit_code = EXIT_INPUT
    except (SpaceFileError, SpaceError, BoundExceeded, ValueError) as exc:
        report.lines.append(f"error: {exc}")
        report.exit_code = EXIT_INPUT
    return report


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if list(argv) in ([], ["-h"], ["--help"]):
        print(build_parser().format_help(), end="")
        return EXIT_OK if argv else EXIT_INPUT
    report = run(argv)
    out = sys.stdout if report.exit_code != EXIT_INPUT else sys.stderr
    out.write(report.text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
