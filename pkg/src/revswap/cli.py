"""Command-line entry point: ``revswap <verb> ...``.

Exit codes: 0 success, 1 usage or input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import Circuit, ContractError, NotReversibleError, Order, ParseError, complexity, invert, simulate
from .formats import format_circuit, format_spec, read_circuit, read_spec
from .oracle import UnsupportedWidthError, build_distances, exhaustive_benchmark, optimal_circuit
from .reduction import reduce
from .synthesis import GateCapExceeded, SynthOptions, VerificationError, synthesize

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class VerifyFailed(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _checked(c: Circuit, spec) -> Circuit:
    if simulate(c) != spec:
        raise VerifyFailed(f"circuit does not realize {spec}")
    return c


def _synth_options(args) -> SynthOptions:
    algorithm = {"1": "alg1", "2": "alg2", "random": "random"}[getattr(args, "algorithm", "1")]
    return SynthOptions(algorithm=algorithm, direction=args.direction, fallback=args.fallback,
                        restarts=getattr(args, "restarts", 1), seed=getattr(args, "seed", 0))


def cmd_synth(args) -> int:
    spec = read_spec(args.spec)
    result = synthesize(spec, _synth_options(args))
    circuit = result.circuit
    if args.reduce:
        circuit, report = reduce(circuit, spec)
        _note(f"reduction: {report}")
    circuit = _checked(circuit, spec).with_order(Order(args.order))
    _emit(format_circuit(circuit), args.output)
    _note(f"gates: {len(circuit)}")
    _note(f"complexity C(f): {complexity(spec)}")
    _note("verified: yes")
    return EXIT_OK


def cmd_reduce(args) -> int:
    circuit = read_circuit(args.circuit)
    spec = read_spec(args.spec)
    if circuit.width != spec.width or simulate(circuit) != spec:
        raise UsageError("circuit does not realize the specification; nothing reduced")
    reduced, report = reduce(circuit, spec)
    _emit(format_circuit(_checked(reduced, spec)), args.output)
    _note(str(report))
    return EXIT_OK


def cmd_simulate(args) -> int:
    _emit(format_spec(simulate(read_circuit(args.circuit))), args.output)
    return EXIT_OK


def cmd_invert(args) -> int:
    _emit(format_spec(invert(read_spec(args.spec))), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    circuit = read_circuit(args.circuit)
    spec = read_spec(args.spec)
    if circuit.width != spec.width:
        raise UsageError(f"width mismatch: circuit {circuit.width}, specification {spec.width}")
    got = simulate(circuit)
    if got != spec:
        bad = [i for i in range(len(spec)) if got[i] != spec[i]]
        print(f"FAIL: {len(bad)} of {len(spec)} rows differ, first at input {bad[0]} "
              f"(got {got[bad[0]]}, want {spec[bad[0]]})")
        return EXIT_VERIFY
    print("PASS")
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = read_spec(args.spec)
    table = build_distances(spec.width)
    circuit = _checked(optimal_circuit(spec, table), spec).with_order(Order(args.order))
    _emit(format_circuit(circuit), args.output)
    _note(f"optimal gates: {len(circuit)}")
    return EXIT_OK


def cmd_bench(args) -> int:
    stats = exhaustive_benchmark(args.n, _synth_options(args), reduce=args.reduce)
    _emit(stats.to_csv(), args.output)
    _note(json.dumps(stats.summary(), indent=2))
    return EXIT_OK


def _add_synth_flags(p, full: bool) -> None:
    if full:
        p.add_argument("--algorithm", choices=["1", "2", "random"], default="1")
        p.add_argument("--restarts", type=int, default=1, help="random strategy restarts")
        p.add_argument("--seed", type=int, default=0, help="random strategy seed (unsigned 64-bit)")
    p.add_argument("--direction", choices=["output", "input"], default="output")
    p.add_argument("--fallback", choices=["lowest", "highest", "nearest"], default="lowest",
                   help="step-3 choice when every candidate is already placed")
    p.add_argument("--reduce", action="store_true", help="run the reduction pipeline")


def _order_flag(p) -> None:
    p.add_argument("--order", choices=[o.value for o in Order], default=Order.INPUT_TO_OUTPUT.value)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="revswap", description="Toffoli network synthesis by swapping bit strings.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("synth", help="synthesize a circuit for a specification")
    p.add_argument("spec")
    _add_synth_flags(p, full=True)
    _order_flag(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("reduce", help="minimize a circuit that realizes a specification")
    p.add_argument("circuit")
    p.add_argument("spec")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("simulate", help="print the permutation a circuit computes")
    p.add_argument("circuit")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("invert", help="print the inverse specification")
    p.add_argument("spec")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("verify", help="check a circuit against a specification")
    p.add_argument("circuit")
    p.add_argument("spec")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact minimum circuit (up to 3 lines)")
    p.add_argument("spec")
    _order_flag(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="CSV over every function on n lines")
    p.add_argument("--n", type=int, required=True, help="line count, 1..3")
    _add_synth_flags(p, full=False)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (VerifyFailed, VerificationError) as exc:
        _note(f"verification failed: {exc}")
        return EXIT_VERIFY
    except NotReversibleError as exc:
        msg = str(exc)
        _note(f"error: {msg}" if msg.startswith("not reversible") else f"error: not reversible: {msg}")
        return EXIT_USAGE
    except (UsageError, ParseError, ContractError, UnsupportedWidthError, OSError, ValueError) as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE
    except GateCapExceeded as exc:
        _note(f"error: {exc}")
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
