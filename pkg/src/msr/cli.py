"""Command line entry point ``msr``.

Exit status: 0 when every query passes, 1 when some query reports false
or a violation, 2 on parse or engine errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .dsl import DslError, builtin_names, builtin_source, exit_code, format_text, parse, run, to_json
from .dsl.runner import SCHEMA
from .errors import MsrError
from .plectic import check_higher_jacobi


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(results, name: str, as_json: bool) -> int:
    print(to_json(results, name) if as_json else format_text(results))
    return exit_code(results)


def _run_source(src: str, name: str, args) -> int:
    try:
        sc = parse(src, args.order)
    except DslError as exc:
        print(f"{name}:{exc.line}:{exc.col}: {exc.message}", file=sys.stderr)
        return 2
    return _emit(run(sc), name, args.json)


def cmd_run(args) -> int:
    try:
        src = _read(args.file)
    except OSError as exc:
        print(f"msr: {exc}", file=sys.stderr)
        return 2
    return _run_source(src, args.file, args)


def cmd_builtin(args) -> int:
    if args.list or args.name is None:
        print("\n".join(builtin_names()))
        return 0
    try:
        src = builtin_source(args.name)
    except MsrError as exc:
        print(f"msr: {exc}", file=sys.stderr)
        return 2
    if args.source:
        sys.stdout.write(src)
        return 0
    return _run_source(src, args.name, args)


def cmd_check_jacobi(args) -> int:
    try:
        sc = parse(_read(args.file), args.order)
    except OSError as exc:
        print(f"msr: {exc}", file=sys.stderr)
        return 2
    except DslError as exc:
        print(f"{args.file}:{exc.line}:{exc.col}: {exc.message}", file=sys.stderr)
        return 2
    env = sc.env
    try:
        if env.plectic is None:
            raise MsrError("scenario declares no plectic structure")
        sample = env.observables()
        if not sample:
            raise MsrError("scenario declares no observables to sample")
        rep = check_higher_jacobi(env.plectic, sample, args.arity, trials=args.trials, seed=args.seed)
    except (MsrError, ValueError) as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps({"schema": SCHEMA, "scenario": args.file, "jacobi": rep.as_dict()},
                         indent=2, sort_keys=True, default=str))
    else:
        status = "holds" if rep.holds else "VIOLATED"
        print(f"higher Jacobi up to arity {args.arity}: {status} ({rep.checked} identities checked, "
              f"{len(rep.violations)} violations)")
        for v in rep.violations[:10]:
            print(f"  {v}")
    return 0 if rep.holds else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="msr", description="Run reduction scenarios for multisymplectic observables.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="emit the JSON verdict document")
        sp.add_argument("--order", choices=("grevlex", "lex"), default="grevlex", help="monomial order")

    r = sub.add_parser("run", help="run the queries of a scenario file")
    r.add_argument("file", help="scenario file, or - for stdin")
    common(r)
    r.set_defaults(func=cmd_run)

    b = sub.add_parser("builtin", help="run or print a shipped scenario")
    b.add_argument("name", nargs="?")
    b.add_argument("--list", action="store_true", help="list shipped scenarios")
    b.add_argument("--source", action="store_true", help="print the scenario text instead of running it")
    common(b)
    b.set_defaults(func=cmd_builtin)

    j = sub.add_parser("check-jacobi", help="spot-check the higher Jacobi identities on declared observables")
    j.add_argument("file")
    j.add_argument("--arity", type=int, required=True)
    j.add_argument("--trials", type=int, default=20)
    j.add_argument("--seed", type=int, default=0)
    common(j)
    j.set_defaults(func=cmd_check_jacobi)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
