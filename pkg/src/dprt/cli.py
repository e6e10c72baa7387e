"""Command-line front end.

Exit codes: 0 success, 1 bad input or configuration, 2 a validity or
verification failure (invalid sinogram, simulator mismatch, failed check).
"""

import argparse
import sys

from . import io as dio
from ._validation import InvalidRadonArray, WidthViolation
from .core import forward_dprt, inverse_dprt
from .cost import METHODS, cycle_model, pareto_csv, pareto_front, resource_model, rows_to_csv
from .sim import run_fdprt, run_ifdprt, run_isfdprt, run_sfdprt
from .strips import strip_dprt, strip_idprt
from .verify import CHECKS, format_matrix, run_suite

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVALID = 2

SIM_METHODS = ("sfdprt", "fdprt", "isfdprt", "ifdprt")


class CheckFailed(Exception):
    """A result did not match its reference."""


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _need_h(args, method):
    if method in ("sfdprt", "isfdprt", "strips") and args.H is None:
        raise ValueError(f"method {method!r} needs -H")


def cmd_forward(args):
    img = dio.read_pgm(args.input, bits=args.bits)
    if args.method == "strips":
        _need_h(args, "strips")
        r = strip_dprt(img, args.H)
    else:
        r = forward_dprt(img)
    dio.write_sinogram(args.out, r, binary=args.binary)
    return EXIT_OK


def cmd_inverse(args):
    r = dio.read_sinogram(args.input)
    if args.method == "strips":
        _need_h(args, "strips")
        img = strip_idprt(r, args.H)
    else:
        img = inverse_dprt(r)
    dio.write_pgm(args.out, img, binary=not args.ascii)
    return EXIT_OK


def _phase_csv(report):
    lines = ["phase,cycles"]
    lines += [f"{p},{c}" for p, c in report.phases.items()]
    lines.append(f"total,{report.total}")
    return "\n".join(lines) + "\n"


def cmd_simulate(args):
    method = args.method
    _need_h(args, method)
    if method in ("sfdprt", "fdprt"):
        src = dio.read_pgm(args.input, bits=args.bits)
        ref = forward_dprt(src)
        out, rep = run_sfdprt(src, args.H) if method == "sfdprt" else run_fdprt(src)
    else:
        src = dio.read_sinogram(args.input)
        ref = inverse_dprt(src)
        if method == "isfdprt":
            out, rep = run_isfdprt(src, args.H, use_mem_in=args.use_mem_in)
        else:
            out, rep = run_ifdprt(src)
    matches = out == ref
    h = args.H if method in ("sfdprt", "isfdprt") else None
    expected = cycle_model(method, rep.n, rep.bits, h, rep.use_mem_in)
    doc = rep.to_dict()
    doc["cycles"]["closed_form"] = expected
    doc["resources"] = resource_model(method, rep.n, rep.bits, h).to_dict()
    doc["verification"] = {
        "matches_reference": matches,
        "matches_closed_form": rep.total == expected,
    }
    if args.trace:
        dio.write_trace(args.trace, rep.trace)
    if args.out:
        if method in ("sfdprt", "fdprt"):
            dio.write_sinogram(args.out, out)
        else:
            dio.write_pgm(args.out, out)
    _emit(_phase_csv(rep) if args.format == "csv" else dio.dump_report(doc), args.report)
    if not matches:
        raise CheckFailed("simulated output differs from the reference transform")
    if rep.total != expected:
        raise CheckFailed(f"simulated {rep.total} cycles, closed form gives {expected}")
    return EXIT_OK


def cmd_cost(args):
    method = args.method
    scalable = method in ("sfdprt", "isfdprt")
    _need_h(args, method)
    h = args.H if scalable else None
    cycles = cycle_model(method, args.N, args.bits, h, args.use_mem_in)
    res = resource_model(method, args.N, args.bits, h)
    if args.format == "csv":
        row = {
            "method": method,
            "H": "" if h is None else h,
            "K": "" if h is None else -(-args.N // h),
            "cycles": cycles,
            "flipflops": res.total_flipflops,
            "adders": res.one_bit_additions,
            "ram_bits": res.ram_bits,
            "muxes": "" if res.mux_count is None else res.mux_count,
        }
        text = rows_to_csv([row])
    else:
        doc = {
            "method": method,
            "configuration": {"N": args.N, "B": args.bits, "H": h, "use_mem_in": args.use_mem_in},
            "cycles": {"total": cycles},
            "resources": res.to_dict(),
        }
        text = dio.dump_report(doc)
    _emit(text, args.out)
    return EXIT_OK


def cmd_pareto(args):
    if args.format == "json":
        pts = pareto_front(args.N, args.bits, inverse=args.inverse)
        doc = {
            "N": args.N,
            "B": args.bits,
            "method": "isfdprt" if args.inverse else "sfdprt",
            "front": [
                {"H": p.h, "K": p.k, "cycles": p.cycles, "resources": p.resources.to_dict()}
                for p in pts
            ],
        }
        text = dio.dump_report(doc)
    else:
        text = pareto_csv(args.N, args.bits, inverse=args.inverse)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args):
    results = run_suite(
        args.N, bits=args.bits, policy=args.policy, seed=args.seed, fault=args.inject_fault
    )
    _emit(format_matrix(results), args.out)
    if not all(r.passed for r in results):
        raise CheckFailed("verification failed")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors, so exit 1 rather than argparse's 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(
        prog="dprt",
        description="Exact discrete periodic Radon transform: transforms, simulators, cost models.",
    )
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("forward", help="PGM image -> sinogram file")
    f.add_argument("--in", dest="input", required=True)
    f.add_argument("--out", required=True)
    f.add_argument("--bits", type=int)
    f.add_argument("--method", choices=("direct", "strips"), default="direct")
    f.add_argument("-H", type=int)
    f.add_argument("--binary", action="store_true", help="write the binary sinogram variant")
    f.set_defaults(func=cmd_forward)

    i = sub.add_parser("inverse", help="sinogram file -> PGM image")
    i.add_argument("--in", dest="input", required=True)
    i.add_argument("--out", required=True)
    i.add_argument("--method", choices=("direct", "strips"), default="direct")
    i.add_argument("-H", type=int)
    i.add_argument("--ascii", action="store_true", help="write plain (P2) PGM")
    i.set_defaults(func=cmd_inverse)

    s = sub.add_parser("simulate", help="run a cycle-level architecture model")
    s.add_argument("--method", choices=SIM_METHODS, required=True)
    s.add_argument("--in", dest="input", required=True, help="PGM (forward) or sinogram (inverse)")
    s.add_argument("--bits", type=int)
    s.add_argument("-H", type=int)
    s.add_argument("--use-mem-in", action="store_true")
    s.add_argument("--out", help="where to write the transform result")
    s.add_argument("--report", help="report path (default: stdout)")
    s.add_argument("--trace", help="per-cycle trace path")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("cost", help="closed-form cycles and resources")
    c.add_argument("--method", choices=METHODS, required=True)
    c.add_argument("-N", type=int, required=True)
    c.add_argument("--bits", type=int, default=8)
    c.add_argument("-H", type=int)
    c.add_argument("--use-mem-in", action="store_true")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.add_argument("--out")
    c.set_defaults(func=cmd_cost)

    pa = sub.add_parser("pareto", help="strip heights on the Pareto front")
    pa.add_argument("-N", type=int, required=True)
    pa.add_argument("--bits", type=int, default=8)
    pa.add_argument("--inverse", action="store_true", help="cost the inverse architecture")
    pa.add_argument("--format", choices=("json", "csv"), default="csv")
    pa.add_argument("--out")
    pa.set_defaults(func=cmd_pareto)

    v = sub.add_parser("verify", help="run the invariant suite on random images")
    v.add_argument("-N", type=int, nargs="+", default=[3, 5, 7])
    v.add_argument("--bits", type=int, default=8)
    v.add_argument("--policy", choices=("front", "all"), default="front")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out")
    v.add_argument("--inject-fault", choices=CHECKS, help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidRadonArray, CheckFailed, WidthViolation) as exc:
        print(f"dprt: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ValueError, TypeError, OSError) as exc:
        print(f"dprt: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
