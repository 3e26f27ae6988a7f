"""dofctl: command-line front end."""

import argparse
import json
import os
import sys as _sys
from pathlib import Path

from ..errors import BudgetExceeded, DofError, InternalError, InvalidSystem, ParseError
from ..freemod import DEFAULT_BUDGET, budget_scope
from ..resolution import two_sided_complex
from ..system import (
    groebner_completion,
    is_doubly_weakly_involutive,
    is_homogeneous,
    is_weakly_involutive,
    symbol,
)
from .dsl import emit_system, parse_system
from .report import DEFAULT_ORACLE_N, METHODS, analyze, emit_report, resolution_report

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3, 4


def load_system(path, keep_zero_rows=False):
    p = Path(path)
    try:
        data = p.read_bytes()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    fmt = "json" if p.suffix == ".json" else "dsl"
    return parse_system(data, format=fmt, allow_zero_rows=keep_zero_rows)


def _budget(args):
    if args.budget_gb is not None:
        return args.budget_gb
    env = os.environ.get("DOFCTL_BUDGET_GB")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InvalidSystem(f"DOFCTL_BUDGET_GB must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


def _methods(values):
    if not values:
        return ("ext", "graded", "brst")
    out = []
    for v in values:
        for part in v.split(","):
            part = part.strip()
            if part == "all":
                out.extend(METHODS)
            elif part in METHODS:
                out.append(part)
            else:
                raise argparse.ArgumentTypeError(f"unknown method {part!r}")
    return tuple(dict.fromkeys(out))


def cmd_analyze(args, out):
    sys = load_system(args.file, args.keep_zero_rows)
    rep = analyze(sys, methods=_methods(args.method), oracle_N=args.oracle_N, conjugate=args.conjugate,
                  budget=_budget(args))
    out.write(emit_report(rep, "text" if args.text else "json"))


def cmd_check(args, out):
    sys = load_system(args.file, args.keep_zero_rows)
    with budget_scope(_budget(args)):
        flags = {
            "homogeneous": is_homogeneous(sys),
            "weakly_involutive": is_weakly_involutive(sys),
            "doubly_weakly_involutive": is_doubly_weakly_involutive(sys),
        }
    out.write((json.dumps(flags, indent=2) + "\n").encode())


def cmd_complete(args, out):
    sys = load_system(args.file, args.keep_zero_rows)
    with budget_scope(_budget(args)):
        comp = groebner_completion(sys)
    out.write(emit_system(comp).encode())


def cmd_resolve(args, out):
    sys = load_system(args.file, args.keep_zero_rows)
    with budget_scope(_budget(args)):
        target = sys
        if not is_homogeneous(sys):
            if is_doubly_weakly_involutive(sys):
                target = symbol(sys)
            else:
                comp = groebner_completion(sys)
                if not is_doubly_weakly_involutive(comp):
                    raise InvalidSystem("system is not homogeneous and no doubly weakly involutive form was found")
                target = symbol(comp)
        cx = two_sided_complex(target)
    out.write((json.dumps(resolution_report(cx), indent=2) + "\n").encode())


def build_parser():
    p = argparse.ArgumentParser(prog="dofctl", description="Count degrees of freedom of linear PDE systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file")
        sp.add_argument("--keep-zero-rows", action="store_true", help="accept identically zero equations")
        sp.add_argument("--budget-gb", type=int, default=None, help="cap on Groebner S-pair reductions")

    a = sub.add_parser("analyze", help="compute the degree of freedom")
    common(a)
    a.add_argument("--method", action="append", help="ext, graded, brst, oracle or all (repeatable, comma list)")
    a.add_argument("--oracle-N", type=int, default=DEFAULT_ORACLE_N)
    a.add_argument("--conjugate", action="store_true")
    fmt = a.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON report (default)")
    fmt.add_argument("--text", action="store_true", help="human-readable summary")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("check-involutive", help="weak and double weak involutivity flags")
    common(c)
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("complete", help="emit the Groebner completion as a .dofsys document")
    common(g)
    g.set_defaults(func=cmd_complete)

    r = sub.add_parser("resolve", help="emit the Betti tables of the two-sided complex")
    common(r)
    r.set_defaults(func=cmd_resolve)
    return p


def main(argv=None, stdout=None, stderr=None):
    out = stdout or _sys.stdout.buffer
    err = stderr or _sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args, out)
    except argparse.ArgumentTypeError as exc:
        err.write(f"dofctl: error: {exc}\n")
        return EXIT_INVALID
    except ParseError as exc:
        err.write(f"dofctl: parse error: {exc}\n")
        return EXIT_PARSE
    except InvalidSystem as exc:
        err.write(f"dofctl: invalid system: {exc}\n")
        return EXIT_INVALID
    except BudgetExceeded as exc:
        err.write(f"dofctl: budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (InternalError, DofError) as exc:
        err.write(f"dofctl: internal error: {exc}\n")
        return EXIT_INTERNAL
    except Exception as exc:  # anything unexpected is an internal failure
        err.write(f"dofctl: internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL
    return EXIT_OK

