"""Command-line interface.

Exit codes: 0 success, 1 selftest failure, 2 input/parse error,
3 oracle verdict unknown, 4 engine cannot handle the system.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import gadgets as gd
from .ctl import FormulaError, expand, format_formula, parse_formula
from .ocp import OcpError, format_ocp, is_unit_step, parse_ocp
from .oracle import DEFAULT_MAX_CEILING, TruthValue3, eval3
from .quotient import DEFAULT_MAX_STATES, UnsupportedSystemError, bound_params, check, label

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNKNOWN, EXIT_UNSUPPORTED = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, msg: str, code: int = EXIT_INPUT):
        super().__init__(msg)
        self.code = code


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}") from None


def _max_ceiling_default() -> int:
    env = os.environ.get("OCMC_MAX_CEILING")
    if env is None:
        return DEFAULT_MAX_CEILING
    try:
        return int(env)
    except ValueError:
        raise CliError(f"OCMC_MAX_CEILING must be an integer, got {env!r}") from None


def _load_system(args):
    try:
        return parse_ocp(_read(args.system))
    except OcpError as e:
        raise CliError(f"{args.system}: {e}") from None


def _load_formula(args):
    if args.formula is not None:
        text, origin = args.formula, "--formula"
    else:
        path = args.formula_file or "-"
        text, origin = _read(path), path
    text = " ".join(line.split("#", 1)[0] for line in text.splitlines())
    try:
        return parse_formula(text)
    except FormulaError as e:
        raise CliError(f"{origin}: {e}") from None


def _parse_state(text: str):
    loc, sep, counter = text.rpartition(":")
    if not sep or not loc:
        raise CliError(f"state must look like location:counter, got {text!r}")
    try:
        n = int(counter, 10)
    except ValueError:
        raise CliError(f"bad counter in state {text!r}") from None
    if n < 0:
        raise CliError("counter must be non-negative")
    return loc, n


def _choose_engine(args, ocp, formula) -> str:
    if args.engine == "quotient":
        if not is_unit_step(ocp):
            raise CliError(
                "the quotient engine needs counter effects in {-1, 0, +1}; rerun with --engine oracle",
                EXIT_UNSUPPORTED,
            )
        return "quotient"
    if args.engine == "oracle":
        return "oracle"
    if not is_unit_step(ocp):
        return "oracle"
    bp = bound_params(ocp, expand(formula))
    return "quotient" if len(ocp.locations) * bp.width <= args.max_states else "oracle"


def _oracle_verdict(ocp, formula, loc, n, ceiling, max_ceiling) -> TruthValue3:
    c = n if ceiling is None else ceiling
    if c < n:
        raise CliError(f"--ceiling {c} is below the counter {n}")
    while True:
        v = eval3(ocp, formula, loc, n, c)
        if v.definite or c >= max_ceiling:
            return v
        c = min(max(2 * c, c + 1), max_ceiling)


def cmd_check(args) -> int:
    ocp = _load_system(args)
    formula = _load_formula(args)
    loc, n = _parse_state(args.state)
    if loc not in ocp.locations:
        raise CliError(f"unknown location {loc!r}")
    engine = _choose_engine(args, ocp, formula)
    if engine == "quotient":
        try:
            result = check(ocp, formula, loc, n, args.max_states)
        except UnsupportedSystemError as e:
            raise CliError(str(e), EXIT_UNSUPPORTED) from None
        verdict = "true" if result else "false"
    else:
        max_c = args.max_ceiling if args.max_ceiling is not None else _max_ceiling_default()
        v = _oracle_verdict(ocp, formula, loc, n, args.ceiling, max(max_c, n))
        if not v.definite:
            raise CliError(f"oracle verdict unknown at ceiling {max(max_c, n)}", EXIT_UNKNOWN)
        verdict = v.value
    if args.format == "json":
        print(json.dumps({"state": args.state, "engine": engine, "result": verdict == "true"}))
    else:
        print(verdict)
    return EXIT_OK


def cmd_oracle(args) -> int:
    ocp = _load_system(args)
    formula = _load_formula(args)
    loc, n = _parse_state(args.state)
    if loc not in ocp.locations:
        raise CliError(f"unknown location {loc!r}")
    max_c = args.max_ceiling if args.max_ceiling is not None else _max_ceiling_default()
    v = _oracle_verdict(ocp, formula, loc, n, args.ceiling, max(max_c, n))
    print(v.value)
    return EXIT_OK if v.definite else EXIT_UNKNOWN


def cmd_label(args) -> int:
    ocp = _load_system(args)
    formula = _load_formula(args)
    try:
        lab = label(ocp, formula, args.max_states)
    except UnsupportedSystemError as e:
        raise CliError(str(e), EXIT_UNSUPPORTED) from None
    print(json.dumps(lab.to_json(), sort_keys=True))
    return EXIT_OK


def cmd_gen_fixed_ocn(args) -> int:
    sys.stdout.write(format_ocp(gd.fixed_ocn()))
    return EXIT_OK


def _positive(text: str) -> int:
    try:
        i = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if i < 1:
        raise argparse.ArgumentTypeError("index must be >= 1")
    return i


def cmd_gen_divformula(args) -> int:
    print(format_formula(gd.div_formula(args.i)))
    return EXIT_OK


def cmd_gen_bitformula(args) -> int:
    print(format_formula(gd.bit_formula(args.i)))
    return EXIT_OK


def cmd_qbf2ctl(args) -> int:
    try:
        alpha = gd.parse_qbf(_read(args.qbf))
    except (gd.GadgetError, ValueError) as e:
        raise CliError(f"{args.qbf}: {e}") from None
    print(format_formula(gd.qbf_to_ctl(alpha)))
    return EXIT_OK


def _load_crr(text: str, m: int, origin: str) -> gd.CrrFormula:
    try:
        return gd.parse_crr(text, m)
    except (FormulaError, gd.GadgetError) as e:
        raise CliError(f"{origin}: {e}") from None


def cmd_crr2ocn(args) -> int:
    F = _load_crr(args.formula if args.formula is not None else _read(args.formula_file or "-"), args.m, "formula")
    ocp, gin, gout = gd.build_ocn_of_formula(gd.eliminate_negations(F))
    print(f"# in: {gin}")
    print(f"# out: {gout}")
    print(f"# formula: {format_formula(gd.fixed_ef_formula())}")
    sys.stdout.write(format_ocp(ocp))
    return EXIT_OK


def cmd_compose(args) -> int:
    F = _load_crr(args.formula, args.m, "--formula")
    G = _load_crr(args.g, args.m, "--g") if args.g else None
    try:
        A = gd.parse_nfa(_read(args.nfa))
    except gd.GadgetError as e:
        raise CliError(f"{args.nfa}: {e}") from None
    ocp, start, phi = gd.compose_serialized(F, A, G)
    print(f"# start: {start}")
    print(f"# formula: {format_formula(phi)}")
    sys.stdout.write(format_ocp(ocp))
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all(seed=args.seed)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ocmc", description="CTL model checking for one-counter processes")
    sub = p.add_subparsers(dest="command", required=True)

    def system_args(sp, with_state=True):
        sp.add_argument("--system", required=True, help="OCP file ('-' for stdin)")
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--formula", help="CTL formula text")
        g.add_argument("--formula-file", help="file holding the formula (default: stdin)")
        if with_state:
            sp.add_argument("--state", required=True, help="location:counter, counter in decimal")
        sp.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES,
                        help="largest quotient the exact engine may build")

    def oracle_args(sp):
        sp.add_argument("--ceiling", type=int, help="initial counter ceiling (default: the counter)")
        sp.add_argument("--max-ceiling", type=int,
                        help=f"largest ceiling tried (default $OCMC_MAX_CEILING or {DEFAULT_MAX_CEILING})")

    sp = sub.add_parser("check", help="decide location:counter |= formula")
    system_args(sp)
    sp.add_argument("--engine", choices=("auto", "quotient", "oracle"), default="auto")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    oracle_args(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("label", help="satisfaction sets per location (JSON)")
    system_args(sp, with_state=False)
    sp.set_defaults(func=cmd_label)

    sp = sub.add_parser("oracle", help="three-valued truncation oracle")
    system_args(sp)
    oracle_args(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("gen-fixed-ocn", help="print the fixed hardness net")
    sp.set_defaults(func=cmd_gen_fixed_ocn)

    for name, func, what in (
        ("gen-divformula", cmd_gen_divformula, "divisibility by 2^i"),
        ("gen-bitformula", cmd_gen_bitformula, "bit i"),
    ):
        sp = sub.add_parser(name, help=f"formula for {what} on the fixed net")
        sp.add_argument("i", type=_positive)
        sp.set_defaults(func=func)

    sp = sub.add_parser("qbf2ctl", help="encode a QBF as a formula over the fixed net")
    sp.add_argument("qbf", nargs="?", default="-", help="QBF file (default: stdin)")
    sp.set_defaults(func=cmd_qbf2ctl)

    sp = sub.add_parser("crr2ocn", help="net for a Boolean formula over CRR variables x<i>_<r>")
    sp.add_argument("--m", type=_positive, required=True, help="number of primes")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--formula")
    g.add_argument("--formula-file")
    sp.set_defaults(func=cmd_crr2ocn)

    sp = sub.add_parser("compose-serialized", help="net checking that a serialized word is accepted by an NFA")
    sp.add_argument("--m", type=_positive, required=True)
    sp.add_argument("--formula", required=True, help="F over x<i>_<r>")
    sp.add_argument("--g", help="G over x<i>_<r> (default: the 2^m detector)")
    sp.add_argument("--nfa", required=True, help="NFA file")
    sp.set_defaults(func=cmd_compose)

    sp = sub.add_parser("selftest", help="run the acceptance suites")
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", "unset") is None:
        from .acceptance import DEFAULT_SEED

        args.seed = DEFAULT_SEED
    try:
        return args.func(args)
    except CliError as e:
        print(f"ocmc: error: {e}", file=sys.stderr)
        return e.code
    except (OcpError, gd.GadgetError) as e:
        print(f"ocmc: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
