"""Command-line front end.

Usage::

    nonadd integrate FILE [--engine rl|bs|gould] [--set A] [--budget BUDGET] [--tol X] [--seed N] [--json]
    nonadd variation FILE [--set E]
    nonadd properties FILE
    nonadd atoms FILE
    nonadd verify [--profile P ...] [--seed N] [--count N] [--scenario FILE ...] [--no-corpus] [--report OUT]
    nonadd replay REPORT
    nonadd trace FILE [--engine gould|rl] [--csv OUT] [--steps N]

Exit codes: 0 value (or success), 2 divergent, 3 unknown, 1 invalid input or
I/O failure, 4 unsupported measure family or ground.

Set literals (``--set`` and the ``set``/``sets`` options of scenario files)::

    all | empty | evens | odds
    finite:[e0,e1,...]              an explicit finite set
    mod:<k>:<r>                     n = r (mod k)
    tail:<k>                        n >= k
    upset:N=<int>;prefix=<bits>;p=<int>;R={r0,r1,...}

An ``upset`` literal lists membership bits for ``0..N-1`` in ``prefix`` (padded
with zeros up to ``N``) and from ``N`` on contains the ``n`` with
``n mod p`` in ``R``.  On a finite ground every literal is intersected with
``{0..n-1}``.

Budgets are ``depth=<int>,chains=<int>,arity=<int>`` with omitted keys at
their defaults; ``NONADD_BUDGET`` supplies the default budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import verify as V
from .integrals import (
    DIVERGENT,
    UNKNOWN,
    VALUE,
    Budget,
    _partial_sums,
    birkhoff_simple,
    gould_integrate,
    rl_integrate,
)
from .measures import UnsupportedFamily, UnsupportedGround, atoms, check_properties, variation
from .numeric import scalar_str
from .scenario import ScenarioError, load_scenario
from .setalg import SetAlgError, parse_set

EXIT_OK, EXIT_ERROR, EXIT_DIVERGENT, EXIT_UNKNOWN, EXIT_UNSUPPORTED = 0, 1, 2, 3, 4
STATUS_EXIT = {VALUE: EXIT_OK, DIVERGENT: EXIT_DIVERGENT, UNKNOWN: EXIT_UNKNOWN}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would read as "divergent"
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _load(path: str):
    return load_scenario(path)


def _set_arg(sf, text: str | None, key: str = "set"):
    if text is not None:
        return parse_set(text, sf.ground)
    return sf.set_option(key)


def _budget(args, sf=None) -> Budget:
    if args.budget:
        return Budget.parse(args.budget)
    if sf is not None and "budget" in sf.options:
        return Budget.parse(sf.options["budget"])
    return Budget.from_env()


def _seed(args, sf) -> int:
    return args.seed if args.seed is not None else int(sf.options.get("seed", 0))


def _tol(args, sf) -> float:
    return args.tol if args.tol is not None else float(sf.options.get("tol", 1e-9))


def _run_engine(engine: str, sf, A, args):
    f, m = sf.function, sf.measure
    if engine == "rl":
        return rl_integrate(f, m, A)
    if A is not None:
        f = f.chi(A)
    if engine == "bs":
        return birkhoff_simple(f, m)
    return gould_integrate(f, m, _budget(args, sf), seed=_seed(args, sf), tol=_tol(args, sf))


def cmd_integrate(args, out) -> int:
    sf = _load(args.file)
    A = _set_arg(sf, args.set)
    _budget(args, sf)  # reject a malformed budget for every engine
    verdict = _run_engine(args.engine, sf, A, args)
    if args.json:
        out.write(dumps(verdict.to_json()))
    else:
        value = "-" if verdict.value is None else "[" + ", ".join(scalar_str(x) for x in verdict.value) + "]"
        line = f"{verdict.engine} {verdict.status} {value}"
        if verdict.radius:
            line += f" +/- {verdict.radius:.3g}"
        if verdict.status == DIVERGENT and verdict.certificate:
            line += f" (certificate of {len(verdict.certificate)} steps)"
        out.write(line + "\n")
    return STATUS_EXIT[verdict.status]


def cmd_variation(args, out) -> int:
    sf = _load(args.file)
    E = _set_arg(sf, args.set)
    out.write(dumps(variation(sf.measure, E).to_json()))
    return EXIT_OK


def cmd_properties(args, out) -> int:
    sf = _load(args.file)
    out.write(dumps(check_properties(sf.measure).to_json()))
    return EXIT_OK


def cmd_atoms(args, out) -> int:
    sf = _load(args.file)
    g = sf.ground
    out.write(dumps({"atoms": [g.literal(A) for A in atoms(sf.measure)]}))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    profiles = args.profile or list(V.DEFAULT_PROFILES)
    for p in profiles:
        V.Profile.parse(p)
    theorems = args.theorem or list(V.THEOREMS)
    unknown = [t for t in theorems if t not in V.CHECKS]
    if unknown:
        raise UsageError(f"unknown theorem id(s): {', '.join(unknown)}")
    extra = [V.file_scenario(p) for p in args.scenario or ()]
    reports = V.run_all(profiles, args.seed or 0, args.count, not args.no_corpus, theorems, extra)
    failures = 0
    for r in reports:
        failures += len(r.failures)
        out.write(f"{r.theorem:<26} pass {r.passes:>4}  fail {len(r.failures):>3}  skip {len(r.skips):>4}\n")
    doc = {
        "profiles": profiles,
        "seed": args.seed or 0,
        "count": args.count,
        "corpus": not args.no_corpus,
        "theorems": [r.to_json() for r in reports],
    }
    if args.report:
        Path(args.report).write_text(dumps(doc))
    out.write(f"{'ok' if not failures else 'FAILED'}: {failures} failure(s)\n")
    return EXIT_OK if not failures else EXIT_ERROR


def cmd_replay(args, out) -> int:
    doc = json.loads(Path(args.report).read_text())
    mismatches = 0
    for rep in doc["theorems"]:
        for failure in rep["failures"]:
            res = V.replay(failure)
            mismatches += not res.reproduced
            tag = "reproduced" if res.reproduced else res.message
            out.write(f"{rep['theorem']} {failure['profile']} seed={failure['seed']} "
                      f"index={failure['index']}: {tag}\n")
    return EXIT_OK if not mismatches else EXIT_ERROR


def cmd_trace(args, out) -> int:
    sf = _load(args.file)
    f, m = sf.function, sf.measure
    if args.engine == "gould":
        verdict = gould_integrate(f, m, _budget(args, sf), seed=_seed(args, sf), tol=_tol(args, sf))
        steps = [(s.k_blocks, s.sigma, s.radius) for s in verdict.certificate]
        status = verdict.status
    else:
        if m.ground.is_finite:
            count = m.ground.n
        else:
            count = args.steps
        partial = _partial_sums(f, m, None, count)
        steps = [(k + 1, s.sigma, s.radius) for k, s in enumerate(partial)]
        status = rl_integrate(f, m).status
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["step", "k_blocks"] + [f"sigma_{i}" for i in range(f.dim)] + ["radius"])
    for i, (k, sigma, radius) in enumerate(steps):
        writer.writerow([i, k] + [scalar_str(x) for x in sigma] + [repr(float(radius))])
    if args.csv:
        Path(args.csv).write_text(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return STATUS_EXIT[status]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nonadd", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("integrate", help="integrate the scenario's function")
    p.add_argument("file")
    p.add_argument("--engine", choices=("rl", "bs", "gould"), default="rl")
    p.add_argument("--set", help="integrate over this set instead of the whole ground")
    p.add_argument("--budget", help="probe budget, e.g. depth=12,chains=64,arity=8")
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--json", action="store_true", help="print the full verdict as JSON")
    p.set_defaults(run=cmd_integrate)

    p = sub.add_parser("variation", help="variation of the measure on a set")
    p.add_argument("file")
    p.add_argument("--set")
    p.set_defaults(run=cmd_variation)

    p = sub.add_parser("properties", help="property lattice report")
    p.add_argument("file")
    p.set_defaults(run=cmd_properties)

    p = sub.add_parser("atoms", help="atoms of a measure on a finite ground")
    p.add_argument("file")
    p.set_defaults(run=cmd_atoms)

    p = sub.add_parser("verify", help="run the seeded theorem suite")
    p.add_argument("--profile", action="append", help="scenario profile (repeatable)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--theorem", action="append", help="restrict to a theorem id (repeatable)")
    p.add_argument("--scenario", action="append", help="also check this scenario file (repeatable)")
    p.add_argument("--no-corpus", action="store_true", help="skip the shipped scenario corpus")
    p.add_argument("--report", help="write the JSON report here")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("replay", help="rerun the failures recorded in a verify report")
    p.add_argument("report")
    p.set_defaults(run=cmd_replay)

    p = sub.add_parser("trace", help="sigma values along a refinement chain, as CSV")
    p.add_argument("file")
    p.add_argument("--engine", choices=("gould", "rl"), default="gould")
    p.add_argument("--csv", help="write here instead of stdout")
    p.add_argument("--steps", type=int, default=32, help="partial sums shown for the rl engine")
    p.add_argument("--budget")
    p.add_argument("--tol", type=float)
    p.add_argument("--seed", type=int)
    p.set_defaults(run=cmd_trace)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.run(args, out)
    except UsageError as exc:
        print(f"nonadd: error: {exc}", file=sys.stderr)
    except (UnsupportedFamily, UnsupportedGround) as exc:
        print(f"nonadd: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ScenarioError as exc:
        print(f"nonadd: invalid scenario: {exc}", file=sys.stderr)
    except (SetAlgError, ValueError, KeyError) as exc:
        print(f"nonadd: invalid input: {exc}", file=sys.stderr)
    except OSError as exc:
        print(f"nonadd: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
