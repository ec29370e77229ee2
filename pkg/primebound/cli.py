import argparse
import sys
import time
from fractions import Fraction
from typing import NamedTuple

from primebound.ap.audit import classical_audit
from primebound.ap.chebyshev import ap_statistics, partial_summation_check
from primebound.arith.factorization import set_trial_division_bound
from primebound.bounds.audit import consistency_audit
from primebound.bounds.theorem1 import C_zero, Theorem1Inputs, eps_sweep
from primebound.bounds.theorem4 import C_one, C_one_per_l, x_four, x_three
from primebound.bounds.trace import theorem1_pipeline_trace
from primebound.constants import EXIT_BUDGET, EXIT_FAILURE, EXIT_OK, EXIT_USAGE
from primebound.errors import (
    AuditFailure,
    BudgetExceededError,
    ConfigError,
    PreconditionError,
)
from primebound.forms.ledger import ScanLedger
from primebound.forms.scans import SCAN_MODES, multiperfect_scan, quasiperfect_scan
from primebound.forms.search import kishore_search, theorem4_sweep
from primebound.reporting import console
from primebound.reporting.config import load_config
from primebound.reporting.manifest import RunManifest, digest
from primebound.reporting.render import dumps, dumps_line
from primebound.sieve.basis import PrimeBasis
from primebound.sieve.empirical import sift_count
from primebound.sieve.large_sieve import B_of, V_of, big_G, large_sieve_bound
from primebound.sieve.residues import residue_system_theorem1, residue_system_theorem4
from primebound.sieve.verification import order_equivalence_check, soundness_sweep

# Global flags and the configuration keys they override.
GLOBAL_FLAGS = {
    "workers": int,
    "seed": int,
    "segment_size": int,
    "sigma_table_budget": int,
    "node_budget": int,
    "sift_budget": int,
    "trial_division_bound": int,
    "audit_limit": int,
    "manifest_dir": str,
}


class Output(NamedTuple):
    """A single JSON document, or JSON Lines records when lines is set."""

    payload: object
    lines: bool = False
    passed: bool = True


def _basis(text):
    return PrimeBasis.parse(text)


def _ratio(text):
    try:
        ratio = Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise PreconditionError("invalid ratio {!r}, expected N/D".format(text)) from e
    return ratio


def _interval(text):
    """'START:LENGTH' or 'LENGTH' (starting at 1)."""
    start, sep, length = text.partition(":")
    if not sep:
        start, length = "1", text
    try:
        return int(start), float(length)
    except ValueError as e:
        raise PreconditionError(
            "invalid interval {!r}, expected START:LENGTH".format(text)
        ) from e


def _theorem1_inputs(args):
    return Theorem1Inputs(args.n, args.d, args.s, _basis(args.primes), args.eps)


def _bound_thm1(args, config):
    inputs = _theorem1_inputs(args)
    header = {
        "n": inputs.n,
        "d": inputs.d,
        "s": inputs.s,
        "primes": str(inputs.basis),
    }
    if args.eps_sweep:
        return Output({**header, **eps_sweep(inputs)})

    result = C_zero(inputs)
    for warning in result.warnings:
        console.warn(warning)
    return Output({**header, "epsilon": inputs.epsilon, **result.to_dict()})


def _bound_C1(args, config):
    basis = _basis(args.primes)
    per_l = []
    for l, value in C_one_per_l(basis).items():
        entry = {"l": l, **value.to_dict(), "x3": x_three(l).to_dict()}
        if args.theorem == "thm4":
            entry["x4"] = x_four(l).to_dict()
        per_l.append(entry)
    return Output(
        {
            "theorem": args.theorem,
            "primes": str(basis),
            **C_one(basis).to_dict(),
            "per_l": per_l,
        }
    )


def _bound_trace(args, config):
    inputs = _theorem1_inputs(args)
    return Output(theorem1_pipeline_trace(inputs, args.l, args.q0_ln))


def _audit_constants(args, config):
    report = consistency_audit()
    for clause in report.checks:
        if clause.passed:
            console.ok("({}) {}".format(clause.key, clause.description))
        else:
            console.fail("({}) {}".format(clause.key, clause.description))
    return Output(report.to_dict(), passed=report.passed)


def _ap_stats(args, config):
    stats = ap_statistics(args.x, args.k, args.a).to_dict()
    if args.x > 2:
        check = partial_summation_check(2, args.x, args.k, args.a)
        stats["partial_summation"] = {
            "lhs": check.lhs,
            "rhs": check.rhs,
            "relative_error": check.relative_error,
        }
    return Output(stats)


def _ap_audit(args, config):
    report = classical_audit(
        args.z,
        limit=config["audit_limit"],
        max_modulus=args.max_modulus,
        workers=config["workers"],
    )
    return Output(report.to_dict(), passed=report.passed)


def _sieve_verify(args, config):
    if args.construction == "theorem1":
        U = PrimeBasis.parse(args.U).primes if args.U.strip() else ()
        system = residue_system_theorem1(args.l, U, args.z)
    else:
        system = residue_system_theorem4(args.l, args.z)
    w = args.z if args.w is None else args.w
    start, X = _interval(args.interval)

    empirical = sift_count(
        start,
        X,
        system.restrict(w),
        budget=config["sift_budget"],
        workers=config["workers"],
    )
    report = large_sieve_bound(
        X, w, system, node_budget=config["node_budget"], empirical=empirical
    )
    payload = {
        "construction": args.construction,
        "l": args.l,
        "z": system.z,
        "start": start,
        "classes": {p: list(residues) for p, residues in system.items()},
        **report.to_dict(),
        "B": B_of(system),
        "V": V_of(system),
    }
    if args.exact:
        payload["G_exact"] = big_G(
            system.restrict(w), w, config["node_budget"], exact=True
        )
        payload["V_exact"] = V_of(system, exact=True)
    if not report.holds:
        console.fail("sift count {} exceeds the bound {:g}".format(empirical, report.bound))
    return Output(payload, passed=report.holds)


def _sieve_sweep(args, config):
    seed = config["seed"] if args.seed is None else args.seed
    report = soundness_sweep(
        args.trials,
        seed,
        args.max_x,
        workers=config["workers"],
        lower_bound_trials=args.lower_bound_trials,
    )
    return Output({"seed": seed, **report.to_dict()}, passed=report.ok)


def _sieve_orders(args, config):
    result = order_equivalence_check(args.limit)
    return Output(result, passed=result["ok"])


def _ledger(args):
    return ScanLedger(args.ledger) if args.ledger else None


def _search_quasiperfect(args, config):
    limit = config["scan_limit"] if args.limit is None else args.limit
    spot_checks = config["spot_checks"] if args.spot_checks is None else args.spot_checks
    result = quasiperfect_scan(
        limit,
        mode=args.mode,
        spot_checks=spot_checks,
        seed=config["seed"],
        segment_size=config["segment_size"],
        workers=config["workers"],
        ledger=_ledger(args),
        verify=args.verify,
        budget=config["sigma_table_budget"],
    )
    records = [{"N": n, "sigma": 2 * n + 1} for n in result.found]
    records.append({"summary": {**result.stats, "count": len(result.found)}})
    return Output(records, lines=True)


def _search_multiperfect(args, config):
    limit = config["scan_limit"] if args.limit is None else args.limit
    target = _ratio(args.ratio)
    result = multiperfect_scan(
        limit,
        target,
        segment_size=config["segment_size"],
        workers=config["workers"],
        ledger=_ledger(args),
        verify=args.verify,
        budget=config["sigma_table_budget"],
    )
    records = [{"N": n, "abundancy": target} for n in result.found]
    records.append({"summary": {**result.stats, "count": len(result.found)}})
    return Output(records, lines=True)


def _search_kishore(args, config):
    limit = config["kishore_limit"] if args.limit is None else args.limit
    result = kishore_search(limit, budget=config["sigma_table_budget"])
    records = list(result.pop("found"))
    for report in records:
        if not report["form"]:
            console.warn(
                "pair ({}, {}) satisfies the equation without m = 2A², n = B²".format(
                    report["m"], report["n"]
                )
            )
    records.append({"summary": {**result, "count": len(records)}})
    return Output(records, lines=True, passed=all(r["form"] for r in records[:-1]))


def _search_theorem4(args, config):
    limit = config["scan_limit"] if args.limit is None else args.limit
    result = theorem4_sweep(limit, _basis(args.primes), budget=config["sigma_table_budget"])
    records = list(result.pop("passing"))
    records.append({"summary": {**result, "count": len(records)}})
    return Output(records, lines=True, passed=result["ok"])


def _replay(args, config):
    manifest = RunManifest.read(args.manifest)
    code, text = _execute(manifest.argv, manifest.config, record=False)
    actual = digest(text)
    match = actual == manifest.outputs and code == manifest.exit_code
    if not match:
        console.fail("replay of {} does not reproduce its output".format(args.manifest))
    return Output(
        {
            "manifest": args.manifest,
            "subcommand": manifest.subcommand,
            "expected": manifest.outputs,
            "actual": actual,
            "exit_code": code,
            "match": match,
        },
        passed=match,
    )


def _add_theorem1_flags(parser):
    parser.add_argument("--n", type=int, required=True, help="Numerator of the abundancy n/d.")
    parser.add_argument("--d", type=int, required=True, help="Denominator of the abundancy n/d.")
    parser.add_argument("--s", type=int, required=True, help="Number of unconstrained primes.")
    parser.add_argument("--primes", required=True, help="Prime basis, e.g. 3,5.")
    parser.add_argument("--eps", type=float, default=1.0, help="ε of L(ε, n).")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="primebound",
        description="Explicit smallest-prime-factor bounds for special numbers.",
    )
    parser.add_argument("--config", help="key=value configuration file.")
    parser.add_argument("--verbose", action="store_true", default=None)
    for flag, kind in GLOBAL_FLAGS.items():
        parser.add_argument("--" + flag.replace("_", "-"), dest=flag, type=kind)

    groups = parser.add_subparsers(dest="group", required=True)

    bound = groups.add_parser("bound", help="Bound magnitudes in log space.")
    bound_commands = bound.add_subparsers(dest="command", required=True)
    thm1 = bound_commands.add_parser("thm1", help="C0 of the n/d-perfect bound.")
    _add_theorem1_flags(thm1)
    thm1.add_argument("--eps-sweep", action="store_true", help="Evaluate C0 over a grid of ε.")
    thm1.set_defaults(handler=_bound_thm1)
    for theorem in ("thm2", "thm3", "thm4"):
        sub = bound_commands.add_parser(theorem, help="C1 for the prime basis.")
        sub.add_argument("--primes", required=True)
        sub.set_defaults(handler=_bound_C1, theorem=theorem)
    trace = bound_commands.add_parser("trace", help="Intermediate values of the C0 chain.")
    _add_theorem1_flags(trace)
    trace.add_argument("--l", type=int, required=True)
    trace.add_argument("--q0-ln", type=float, required=True, help="log q0.")
    trace.set_defaults(handler=_bound_trace)

    audit = groups.add_parser("audit", help="Constant consistency audit.")
    audit_commands = audit.add_subparsers(dest="command", required=True)
    audit_commands.add_parser("constants").set_defaults(handler=_audit_constants)

    ap = groups.add_parser("ap", help="Primes in arithmetic progressions.")
    ap_commands = ap.add_subparsers(dest="command", required=True)
    stats = ap_commands.add_parser("stats", help="θ, ψ and Mertens statistics.")
    stats.add_argument("--x", type=float, required=True)
    stats.add_argument("--k", type=int, default=1)
    stats.add_argument("--a", type=int, default=0)
    stats.set_defaults(handler=_ap_stats)
    ap_audit = ap_commands.add_parser("audit", help="Classical explicit inequalities.")
    ap_audit.add_argument("--z", type=int, required=True)
    ap_audit.add_argument("--max-modulus", type=int, default=100)
    ap_audit.set_defaults(handler=_ap_audit)

    sieve = groups.add_parser("sieve", help="Large sieve checks.")
    sieve_commands = sieve.add_subparsers(dest="command", required=True)
    verify = sieve_commands.add_parser("verify", help="Large sieve bound against a sift count.")
    verify.add_argument("--construction", choices=("theorem1", "theorem4"), default="theorem1")
    verify.add_argument("--l", type=int, required=True)
    verify.add_argument("--U", default="", help="Primes r ≡ 1 mod l, e.g. 7,13.")
    verify.add_argument("--z", type=float, required=True)
    verify.add_argument("--w", type=float, help="Sieve level (default z).")
    verify.add_argument("--interval", default="1:100", help="START:LENGTH.")
    verify.add_argument("--exact", action="store_true", help="Also report exact G and V.")
    verify.set_defaults(handler=_sieve_verify)
    sweep = sieve_commands.add_parser("sweep", help="Randomised soundness sweep.")
    sweep.add_argument("--trials", type=int, default=500)
    sweep.add_argument("--seed", type=int)
    sweep.add_argument("--max-x", type=int, default=10**6)
    sweep.add_argument("--lower-bound-trials", type=int, default=200)
    sweep.set_defaults(handler=_sieve_sweep)
    orders = sieve_commands.add_parser("orders", help="Order/divisibility equivalence.")
    orders.add_argument("--limit", type=int, default=10**4)
    orders.set_defaults(handler=_sieve_orders)

    search = groups.add_parser("search", help="Special-number scans.")
    search_commands = search.add_subparsers(dest="command", required=True)
    quasi = search_commands.add_parser("quasiperfect", help="σ(N) = 2N+1.")
    quasi.add_argument("--limit", type=int)
    quasi.add_argument("--mode", choices=SCAN_MODES, default="odd_square")
    quasi.add_argument("--spot-checks", type=int)
    multi = search_commands.add_parser("multiperfect", help="σ(N)/N = N/D.")
    multi.add_argument("--ratio", required=True)
    multi.add_argument("--limit", type=int)
    for sub, handler in ((quasi, _search_quasiperfect), (multi, _search_multiperfect)):
        sub.add_argument("--ledger", help="Resumable segment ledger file.")
        sub.add_argument("--verify", action="store_true", help="Recheck ledger segments.")
        sub.set_defaults(handler=handler)
    kishore = search_commands.add_parser("kishore", help="σ(m)σ(n) = (m+n)² pairs.")
    kishore.add_argument("--limit", type=int)
    kishore.set_defaults(handler=_search_kishore)
    theorem4 = search_commands.add_parser("theorem4", help="Odd-square hypothesis sweep.")
    theorem4.add_argument("--limit", type=int)
    theorem4.add_argument("--primes", required=True)
    theorem4.set_defaults(handler=_search_theorem4)

    replay = groups.add_parser("replay", help="Re-run a manifest and compare outputs.")
    replay.add_argument("manifest")
    replay.set_defaults(handler=_replay, command=None)

    return parser


def _render(output):
    if output.lines:
        return "".join(dumps_line(record) + "\n" for record in output.payload)
    return dumps(output.payload) + "\n"


def _subcommand(args):
    return " ".join(part for part in (args.group, args.command) if part)


def _execute(argv, config_override=None, record=True):
    """Run argv; return (exit code, stdout text) without writing to stdout."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return (EXIT_USAGE if e.code else EXIT_OK), ""

    started = time.time()
    try:
        overrides = {key: getattr(args, key) for key in GLOBAL_FLAGS}
        overrides["verbose"] = args.verbose
        if config_override:
            overrides = {**config_override, **{k: v for k, v in overrides.items() if v is not None}}
        config = load_config(args.config, overrides)
        console.set_verbose(config["verbose"])
        console.print_config(config)
        set_trial_division_bound(config["trial_division_bound"])

        output = args.handler(args, config)
        text = _render(output)
        code = EXIT_OK if output.passed else EXIT_FAILURE
    except (PreconditionError, ConfigError) as e:
        console.fail(str(e))
        return EXIT_USAGE, ""
    except BudgetExceededError as e:
        console.fail(str(e))
        return EXIT_BUDGET, ""
    except AuditFailure as e:
        console.fail(str(e))
        return EXIT_FAILURE, ""

    if record and config["manifest_dir"] and args.group != "replay":
        parameters = {
            key: value
            for key, value in vars(args).items()
            if key not in ("handler", "group", "command") and key not in GLOBAL_FLAGS
        }
        manifest = RunManifest(
            subcommand=_subcommand(args),
            argv=list(argv),
            parameters=parameters,
            config=config,
            outputs=digest(text),
            records=len(output.payload) if output.lines else 1,
            exit_code=code,
            wall_time=time.time() - started,
        )
        path = manifest.write(config["manifest_dir"])
        console.info("manifest written to {}".format(path))
    return code, text


def dispatch(argv=None):
    """Run one subcommand, print its JSON to stdout and return the exit code."""
    argv = sys.argv[1:] if argv is None else list(argv)
    code, text = _execute(argv)
    sys.stdout.write(text)
    sys.stdout.flush()
    return code


def main():
    sys.exit(dispatch())
