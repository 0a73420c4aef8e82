"""Command-line front end.

Results go to stdout, one digit string per line; traces and benchmark
lines go to stderr so output stays pipeline-composable.  Exit codes:
0 success, 1 usage error, 2 contract/corruption error (malformed digit
strings, division by zero, codec corruption).
"""

import argparse
import sys
import time

import numpy as np

from . import accel, adder, arith, automaton, convert, core, fibcodec, signed
from .core import ContractError
from .signed import SignedZeck


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="zeckarith",
                description="Arithmetic on Zeckendorf (Fibonacci-base) integers")
    sub = p.add_subparsers(dest="cmd", required=True)

    def op(name, helptext, operands=2):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--dec", action="store_true",
                        help="operands are decimal instead of digit strings")
        for i in range(operands):
            sp.add_argument(f"x{i}", metavar="ab"[i] if operands == 2 else "x")
        return sp

    sp = op("add", "signed addition")
    sp.add_argument("--trace", action="store_true", help="print pass traces to stderr")
    sp = op("sub", "signed subtraction")
    sp.add_argument("--trace", action="store_true", help="print pass traces to stderr")
    sp = op("mul", "multiplication")
    sp.add_argument("--method", choices=("fenwick", "binary"), default="fenwick")
    op("divrem", "division with remainder: prints q then r")
    op("sqrtrem", "floor square root with remainder: prints s then r", operands=1)

    sp = sub.add_parser("tozeck", help="convert binary (or decimal with --dec)")
    sp.add_argument("--dec", action="store_true")
    sp.add_argument("x")
    sp = sub.add_parser("tobin", help="convert Zeckendorf (or decimal with --dec)")
    sp.add_argument("--dec", action="store_true")
    sp.add_argument("x")

    sp = sub.add_parser("validate", help="diagnose a digit string")
    sp.add_argument("x")

    sp = sub.add_parser("trace", help="run add/sub and print the pass traces")
    sp.add_argument("op", choices=("add", "sub"))
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--dec", action="store_true")

    sp = sub.add_parser("bench", help="time a pass; lines go to stderr")
    sp.add_argument("--pass", dest="pass_id", required=True,
                    choices=automaton.PASS_IDS)
    sp.add_argument("--digits", type=int, required=True)
    sp.add_argument("--trials", type=int, default=3)
    sp.add_argument("--prefix", action="store_true",
                    help="run by parallel-prefix composition")
    sp.add_argument("--chunk", type=int, default=64)

    sp = sub.add_parser("codec", help="Fibonacci-code file codec")
    sp.add_argument("direction", choices=("encode", "decode"))
    sp.add_argument("infile")
    sp.add_argument("outfile")
    return p


def _parse_operand(text: str, dec: bool) -> SignedZeck:
    if dec:
        return SignedZeck.from_int(int(text))
    return signed.parse_signed(text)


def _unsigned_operand(text: str, dec: bool, what: str) -> np.ndarray:
    v = _parse_operand(text, dec)
    if v.negative:
        raise ContractError(f"{what} takes non-negative operands")
    return v.magnitude


def _print_traces(traces) -> None:
    for t in traces:
        for line in t.lines():
            print(line, file=sys.stderr)


def _cmd_addsub(args, flip: bool) -> int:
    a = _parse_operand(args.x0, args.dec)
    b = _parse_operand(args.x1, args.dec)
    if flip:
        b = SignedZeck.make(not b.negative, b.magnitude)
    if getattr(args, "trace", False):
        res, traces = signed.add_signed_traced(a, b)
        _print_traces(traces)
    else:
        res = signed.add_signed(a, b)
    print(res)
    return 0


def _cmd_bench(args) -> int:
    rng = np.random.default_rng(0xF1B)
    n = args.digits
    s = automaton.random_pass_input(args.pass_id, n, rng)
    t = automaton.compile_pass(args.pass_id)
    feed = s[::-1] if t.direction == "RL" else s
    for _ in range(args.trials):
        t0 = time.perf_counter_ns()
        if args.prefix:
            run = automaton.prefix(t, feed, args.chunk)
        else:
            run = automaton.scan(t, feed)
        dt = time.perf_counter_ns() - t0
        rep = automaton.cost_report(run)
        height = rep.tree_height or 0
        print(
            f"pass={args.pass_id} n={n} placements={rep.placements} "
            f"firings={rep.firings} height={height} "
            f"ns_per_digit={dt / max(1, n):.1f}",
            file=sys.stderr,
        )
    print(f"backend={accel.backend_name()}", file=sys.stderr)
    return 0


def _cmd_validate(args) -> int:
    try:
        d = core.parse_digits(args.x)
    except ValueError:
        print("malformed digit string")
        return 2
    if d.max() > 1:
        print("non-canonical: digit out of range")
        return 2
    if np.any((d[1:] == 1) & (d[:-1] == 1)):
        print("non-canonical: adjacent ones")
        return 2
    if d.size > 1 and d[0] == 0:
        print("non-canonical: leading zero")
        return 2
    print("canonical")
    return 0


def _cmd_codec(args) -> int:
    if args.direction == "encode":
        with open(args.infile) as fh:
            values = [int(line) for line in fh.read().split()]
        stream = fibcodec.encode_stream(values)
        with open(args.outfile, "wb") as fh:
            fh.write(stream.to_bytes())
    else:
        with open(args.infile, "rb") as fh:
            stream = fibcodec.CodeStream.from_bytes(fh.read())
        values = fibcodec.decode_stream(stream)
        with open(args.outfile, "w") as fh:
            fh.writelines(f"{v}\n" for v in values)
    return 0


def _dispatch(args) -> int:
    if args.cmd == "add":
        return _cmd_addsub(args, flip=False)
    if args.cmd == "sub":
        return _cmd_addsub(args, flip=True)
    if args.cmd == "trace":
        args.x0, args.x1, args.trace = args.a, args.b, True
        return _cmd_addsub(args, flip=args.op == "sub")
    if args.cmd == "mul":
        a = _unsigned_operand(args.x0, args.dec, "mul")
        b = _unsigned_operand(args.x1, args.dec, "mul")
        fn = arith.mul_fenwick if args.method == "fenwick" else arith.mul_binary
        print(core.zeck_to_string(fn(a, b)))
        return 0
    if args.cmd == "divrem":
        x = _unsigned_operand(args.x0, args.dec, "divrem")
        d = _unsigned_operand(args.x1, args.dec, "divrem")
        q, r = arith.divrem(x, d)
        print(core.zeck_to_string(q))
        print(core.zeck_to_string(r))
        return 0
    if args.cmd == "sqrtrem":
        x = _unsigned_operand(args.x0, args.dec, "sqrtrem")
        s, r = arith.sqrt_rem(x)
        print(core.zeck_to_string(s))
        print(core.zeck_to_string(r))
        return 0
    if args.cmd == "tozeck":
        if args.dec:
            bits = convert.int_to_bits(int(args.x))
        else:
            bits = convert.parse_bits(args.x)
        print(core.zeck_to_string(convert.binary_to_zeck(bits)))
        return 0
    if args.cmd == "tobin":
        if args.dec:
            z = core.greedy_zeckendorf(int(args.x))
        else:
            z = core.parse_zeck(args.x)
        print(convert.bits_to_string(convert.zeck_to_binary(z)))
        return 0
    if args.cmd == "validate":
        return _cmd_validate(args)
    if args.cmd == "bench":
        return _cmd_bench(args)
    if args.cmd == "codec":
        return _cmd_codec(args)
    raise AssertionError(args.cmd)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except ZeroDivisionError:
        print("error: division by zero", file=sys.stderr)
        return 2
    except fibcodec.CorruptStreamError as exc:
        print(f"error: corrupt stream: {exc}", file=sys.stderr)
        return 2
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
