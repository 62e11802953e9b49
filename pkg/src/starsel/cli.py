"""Command-line front end.

Every command writes exactly one JSON document to stdout. Exit status is 0 on
success, 1 when a check finds violations or a separation search comes up
empty, and 2 on usage or input errors.
"""

import argparse
import sys
from pathlib import Path

from starsel import bits
from starsel.errors import StarselError
from starsel.principles import Principle, evaluate
from starsel.search import (Budget, enumerate_instances, find_separation,
                            initial_segments_instance, random_instances, save_separation)
from starsel.setcore import (Intensional, dumps, instance_to_dict, load_instance)
from starsel.predicate import parse_predicate
from starsel.theorems import (HULL_THEOREMS, THEOREMS, check_theorem, default_workers,
                              get_theorem)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _principle(text):
    try:
        return Principle.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _theorem(text):
    try:
        return get_theorem(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read_instance(path):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return load_instance(data)


def _corpus(theorem, args):
    """Instances a theorem is checked on, matched to the theorem's setting."""
    if theorem.covers_only:
        a_mode, b_mode = "covers", "cover"
    elif theorem.id in HULL_THEOREMS:
        a_mode, b_mode = "any", "extensional"
    else:
        a_mode, b_mode = "any", "mixed"
    if args.corpus == "exhaustive":
        if b_mode == "mixed":
            b_mode = "extensional"
        b = Budget(max_n=args.max_n, max_A_size=1, max_horizon=2, max_instances=args.trials)
        return enumerate_instances(b, a_mode=a_mode, b_mode=b_mode)
    b = Budget(max_n=args.max_n, max_A_size=3, max_horizon=2, max_B_size=2,
               max_instances=args.trials or 500, seed=args.seed)
    return random_instances(b, a_mode=a_mode, b_mode=b_mode)


def cmd_eval(args):
    principle = _principle(args.principle)
    inst = _read_instance(args.instance)
    if args.horizon is not None:
        inst = inst.with_(horizon=args.horizon).validate()
    result = evaluate(principle, inst)
    if args.verbose:
        print(f"{principle.value}: {result.verdict} "
              f"({result.sequences_checked} sequences checked)", file=args.err)
        if result.holds:
            for fid, fam, sel in result.witness.rounds:
                print(f"  family {fid} {bits.format_family(fam)} -> {sel}", file=args.err)
            print(f"  produced {bits.format_family(result.witness.produced)}", file=args.err)
    return result.to_json(), EXIT_OK, f"{principle.value}: {result.verdict}"


def cmd_check(args):
    if args.max_n > 3 and args.corpus == "exhaustive":
        raise UsageError("--corpus exhaustive needs --max-n <= 3")
    theorems = list(THEOREMS.values()) if args.all else [_theorem(args.theorem)]
    workers = default_workers()
    reports = []
    for theorem in theorems:
        report = check_theorem(theorem, _corpus(theorem, args), workers=workers)
        reports.append(report)
        if args.verbose:
            state = "ok" if report.passed else f"{len(report.violations)} violations"
            print(f"{theorem.id}: {report.checked} checked, {state}", file=args.err)
    failed = [r.theorem for r in reports if not r.passed]
    verdict = "violations in " + ", ".join(failed) if failed else "no violations"
    status = EXIT_FAIL if failed else EXIT_OK
    if args.all:
        return ({"reports": [r.to_json() for r in reports], "corpus": args.corpus,
                 "seed": args.seed}, status, verdict)
    return reports[0].to_json(), status, verdict


def cmd_find_separation(args):
    left, right = _principle(args.left), _principle(args.right)
    if args.max_n > 3:
        raise UsageError("--max-n must be at most 3 for the exhaustive sweep")
    b = Budget(max_n=args.max_n, max_A_size=args.max_A_size, max_horizon=args.horizon,
               min_horizon=args.horizon, seed=args.seed)
    result = find_separation(left, right, b, random_trials=args.trials)
    if not result.to_json()["found"]:
        return result.to_json(), EXIT_FAIL, f"{left.value} vs {right.value}: not found"
    if args.out:
        save_separation(result, args.out)
    if args.verbose:
        print(f"separation at {result.source} index {result.index}", file=args.err)
    return result.to_json(), EXIT_OK, f"{left.value} vs {right.value}: found"


def cmd_validate(args):
    inst = _read_instance(args.instance)
    return instance_to_dict(inst), EXIT_OK, "valid"


def cmd_paper_instance(args):
    if args.name != "initial-segments":
        raise UsageError(f"unknown paper instance {args.name!r}; valid names: initial-segments")
    if not 1 <= args.n <= bits.MAX_N:
        raise UsageError(f"--n must be in 1..{bits.MAX_N}")
    try:
        b_spec = Intensional(parse_predicate(args.b, {"U"}, set()))
    except StarselError as exc:
        raise UsageError(f"bad --b predicate: {exc}") from None
    inst = initial_segments_instance(args.n, b_spec, horizon=args.horizon)
    return instance_to_dict(inst), EXIT_OK, f"initial-segments n={args.n}"


def build_parser():
    parser = argparse.ArgumentParser(prog="starsel",
                                     description="Finite checker for star selection principles.")
    parser.add_argument("--quiet", action="store_true", help="print only the verdict line")
    parser.add_argument("--verbose", action="store_true",
                        help="human-readable details on stderr")
    # The same flags are accepted after the subcommand name.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)
    common.add_argument("--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common],
                       help="evaluate one principle on an instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--principle", required=True)
    p.add_argument("--horizon", type=int, help="override the instance horizon")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check", parents=[common], help="check theorems on a generated corpus")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--theorem")
    group.add_argument("--all", action="store_true")
    p.add_argument("--corpus", choices=("exhaustive", "random"), default="random")
    p.add_argument("--trials", type=int,
                   help="corpus size (random default 500; exhaustive default: the full sweep)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-n", type=int, default=3)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("find-separation", parents=[common],
                       help="search for an instance separating two principles")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--max-A-size", type=int, default=1, dest="max_A_size")
    p.add_argument("--horizon", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=0, help="random instances after the sweep")
    p.add_argument("--out", help="write the instance here plus a .verdict.json sidecar")
    p.set_defaults(func=cmd_find_separation)

    p = sub.add_parser("validate", parents=[common],
                       help="validate and canonicalize an instance file")
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("paper-instance", parents=[common], help="emit a built-in instance")
    p.add_argument("--name", default="initial-segments")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--b", default="nonempty_members", help="predicate for collection B")
    p.add_argument("--horizon", type=int, default=1)
    p.set_defaults(func=cmd_paper_instance)
    return parser


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    for name in ("trials", "horizon", "n", "max_n", "max_A_size"):
        value = getattr(args, name, None)
        floor = 0 if args.command == "find-separation" and name == "trials" else 1
        if value is not None and value < floor:
            print(f"starsel: error: --{name.replace('_', '-')} must be at least {floor}",
                  file=stderr)
            return EXIT_USAGE
    args.err = stderr
    try:
        doc, status, verdict = args.func(args)
    except (UsageError, StarselError, ValueError) as exc:
        print(f"starsel: error: {exc}", file=stderr)
        return EXIT_USAGE
    if args.quiet:
        stdout.write(verdict + "\n")
    else:
        stdout.write(dumps(doc))
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
