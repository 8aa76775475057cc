"""Command line entry point: ``jlbk {build,verify,flow,compare}``.

Exit codes: 0 all checks pass, 1 some check failed, 2 input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .algebra import InputError
from .checks import Check, Context, VerificationReport, run_suite, thread_count
from .dynamics import trajectory
from .io import dumps, kahler_dump, load_element, load_spec, trajectory_csv
from .kahler import build_kahler
from .representation import cyclic_point
from .uniqueness import (
    RECIPES,
    CyclicityError,
    find_iso,
    intertwining_residual,
    rebase,
    verify_iso_representation,
)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jlbk", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--spec", required=True, help="problem spec JSON")
        sp.add_argument("--rank-cutoff", type=float, default=None,
                        help="relative singular-value cutoff (default from spec, 1e-9)")
        sp.add_argument("--out", default=None, help="write output here instead of stdout")

    b = sub.add_parser("build", help="emit the Kahler structure dump")
    common(b)

    v = sub.add_parser("verify", help="run the verification suite")
    common(v)
    v.add_argument("--tol", type=float, default=None, help="check tolerance (default from spec)")
    v.add_argument("--seed", type=int, default=None, help="seed (default from spec)")
    v.add_argument("--only", action="append", default=None, metavar="CHECK",
                   help="run only this group or check; repeatable or comma separated")
    v.add_argument("--no-timestamp", action="store_true")

    f = sub.add_parser("flow", help="trajectory of observables along a Hamiltonian flow")
    common(f)
    f.add_argument("--hamiltonian", required=True, help="element file of the generator")
    f.add_argument("--observable", action="append", required=True,
                   help="element file; repeat for more columns")
    f.add_argument("--t0", type=float, default=0.0)
    f.add_argument("--t1", type=float, required=True)
    f.add_argument("--steps", type=int, default=100, help="number of intervals")

    c = sub.add_parser("compare", help="rebase the structure and verify the isomorphism")
    common(c)
    c.add_argument("--rebase", choices=RECIPES, default="orthogonal-mix")
    c.add_argument("--seed", type=int, default=None)
    c.add_argument("--tol", type=float, default=None)
    c.add_argument("--no-timestamp", action="store_true")
    return p


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _print_summary(report: VerificationReport) -> None:
    for c in report.checks:
        mark = "PASS" if c.passed else "FAIL"
        print(f"[{mark}] {c.name}: {c.value:.3e} {c.comparison} {c.threshold:.1e}", file=sys.stderr)
    s = report.summary()
    print(f"{s['passed']}/{s['total']} checks passed", file=sys.stderr)


def cmd_build(args, spec) -> int:
    K = build_kahler(spec.state, rank_cutoff=args.rank_cutoff or spec.rank_cutoff)
    _emit(dumps(kahler_dump(K)), args.out)
    return 0


def cmd_verify(args, spec) -> int:
    ctx = Context(spec.algebra, spec.state,
                  seed=spec.seed if args.seed is None else args.seed,
                  tol=spec.check_tol if args.tol is None else args.tol,
                  rank_cutoff=args.rank_cutoff or spec.rank_cutoff)
    try:
        report = run_suite(ctx, args.only, threads=thread_count())
    except KeyError as exc:
        print(f"jlbk: unknown check name {exc.args[0]!r}", file=sys.stderr)
        return 2
    _emit(dumps(report.to_dict(timestamp=not args.no_timestamp)), args.out)
    _print_summary(report)
    return 0 if report.passed else 1


def cmd_flow(args, spec) -> int:
    if args.steps < 1:
        raise InputError("--steps must be at least 1")
    K = build_kahler(spec.state, rank_cutoff=args.rank_cutoff or spec.rank_cutoff)
    _, h = load_element(args.hamiltonian, spec.algebra)
    obs = {}
    for path in args.observable:
        label, b = load_element(path, spec.algebra)
        if label in obs:
            raise InputError(f"duplicate observable label {label!r}")
        obs[label] = b
    grid = np.linspace(args.t0, args.t1, args.steps + 1)
    res = trajectory(K, h, cyclic_point(K), grid, obs)
    _emit(trajectory_csv(res.times, res.observables), args.out)
    return 0


def cmd_compare(args, spec) -> int:
    seed = spec.seed if args.seed is None else args.seed
    tol = max(spec.check_tol if args.tol is None else args.tol, 1e-8)
    K = build_kahler(spec.state, rank_cutoff=args.rank_cutoff or spec.rank_cutoff)
    K2 = rebase(K, args.rebase, seed)
    iso = find_iso(K, K2)
    checks = [Check(f"uniqueness.{k}", v, tol) for k, v in iso.residuals().items()]
    checks += [
        Check("uniqueness.solve", iso.solve_residual, tol),
        Check("uniqueness.f_transport", verify_iso_representation(iso, 100, seed), tol),
        Check("uniqueness.action_intertwining", intertwining_residual(iso), tol),
    ]
    report = VerificationReport(sorted(checks, key=lambda c: c.name), {
        "seed": seed, "rebase": args.rebase, "tolerances": {"check_tol": tol},
        "blocks": list(spec.algebra.block_dims), "m": K.m})
    doc = report.to_dict(timestamp=not args.no_timestamp)
    doc["U"] = [[float(x) for x in row] for row in iso.U]
    _emit(dumps(doc), args.out)
    _print_summary(report)
    return 0 if report.passed else 1


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "flow": cmd_flow, "compare": cmd_compare}


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        spec = load_spec(args.spec)
        return COMMANDS[args.command](args, spec)
    except InputError as exc:
        print(f"jlbk: input error: {exc}", file=sys.stderr)
        return 2
    except CyclicityError as exc:
        print(f"jlbk: cyclicity failure: {exc}", file=sys.stderr)
        return 1


run_command = main
