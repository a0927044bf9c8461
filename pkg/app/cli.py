"""
Command-line front end

    validate <file>
    report <target> [--seed-spec SPEC] [--json | --text] [--output FILE]
    check [<target> ...] [--seed-spec SPEC] [--fuzz N] [--free-basis FILE] [--jobs N]
    export <catalog name> <file>

A target is "catalog:<name>", "catalog:all" or a path to an algebra file.
Exit codes: 0 success, 1 validation or check failure, 2 usage or parse error.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from app.algebra import validate
from app.catalog import catalog_names, fuzz_target, get_entry
from app.config import DEFAULT_FUZZ_COUNT, DEFAULT_SEED_SPEC
from app.errors import AlgebraFileError, CatalogError, ConsistencyError, NotADerivation
from app.logger import log_error, log_info, save_report
from app.models import CheckSummary
from app.propositions import check_algebra, run_pipeline
from app.serialization import (
    CATALOG_PREFIX,
    build_diff_algebra,
    load_algebra,
    load_seed_file,
    resolve_target,
    save_algebra,
    seed_derivations,
)
from app.transform import build_report, render_text

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _error(message: str):
    print(f"error: {message}", file=sys.stderr)


def cmd_validate(args) -> int:
    try:
        alg = load_algebra(args.file)
    except AlgebraFileError as e:
        _error(str(e))
        return EXIT_USAGE
    verdict = validate(alg)
    if verdict["valid"]:
        print(f"{args.file}: valid algebra of dimension {alg.dim}")
        return EXIT_OK
    if verdict["violation"] == "associativity":
        names = ", ".join(verdict["names"])
        print(f"{args.file}: associativity fails on ({names}) at indices {verdict['triple']}")
    else:
        print(f"{args.file}: unit law fails on basis element {verdict['name']}")
    print(json.dumps(verdict, indent=2))
    return EXIT_FAILURE


def cmd_report(args) -> int:
    try:
        label, alg = resolve_target(args.target)
    except (AlgebraFileError, CatalogError) as e:
        _error(str(e))
        return EXIT_USAGE
    verdict = validate(alg)
    if not verdict["valid"]:
        _error(f"{label} is not a valid algebra: {json.dumps(verdict)}")
        return EXIT_FAILURE
    try:
        da = build_diff_algebra(alg, args.seed_spec)
    except AlgebraFileError as e:
        _error(str(e))
        return EXIT_USAGE
    except (NotADerivation, ConsistencyError) as e:
        _error(str(e))
        return EXIT_FAILURE

    pr = run_pipeline(da)
    if not pr.complete:
        for failure in pr.failures():
            _error(f"[{failure['proposition']}] {failure['description']}: {failure['witness']}")
        return EXIT_FAILURE
    report = build_report(pr, label, args.seed_spec)
    text = render_text(report) if args.text else report.model_dump_json(indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        log_info("Report written", {"target": label, "path": args.output})
    else:
        sys.stdout.write(text)
    save_report(report.model_dump(mode="json"), label)
    return EXIT_OK if pr.passed else EXIT_FAILURE


def _expand_targets(targets: Sequence[str]) -> List[str]:
    out = []
    for t in targets:
        if t == f"{CATALOG_PREFIX}all":
            out.extend(f"{CATALOG_PREFIX}{name}" for name in catalog_names())
        else:
            out.append(t)
    return out


def _run_check(job: Tuple[str, Optional[int], str, Optional[str]]) -> Tuple[CheckSummary, bool]:
    """One check job: (target, fuzz seed or None, seed spec, free-basis file) -> (summary, usage error)"""
    target, fuzz_seed, seed_spec, free_basis_file = job
    if fuzz_seed is not None:
        target, alg, seed_spec = fuzz_target(fuzz_seed)
    try:
        if fuzz_seed is None:
            target, alg = resolve_target(target)
        free_basis = None
        if free_basis_file is not None:
            free_basis = seed_derivations(alg, load_seed_file(free_basis_file))
        return check_algebra(target, alg, seed_spec, free_basis=free_basis), False
    except (AlgebraFileError, CatalogError) as e:
        log_error("Check could not start", str(e), {"target": target, "seed_spec": seed_spec})
        return CheckSummary(target=target, passed=False, error=str(e)), True
    except (NotADerivation, ConsistencyError) as e:
        log_error("Check could not run", str(e), {"target": target, "fuzz_seed": fuzz_seed})
        return CheckSummary(target=target, passed=False, error=str(e)), False


def cmd_check(args) -> int:
    targets = _expand_targets(args.targets)
    if not targets and not args.fuzz:
        _error("nothing to check: give a target or --fuzz N")
        return EXIT_USAGE
    if args.free_basis and len(targets) != 1:
        _error("--free-basis needs exactly one target")
        return EXIT_USAGE
    try:
        for t in targets:
            resolve_target(t)
        if args.free_basis:
            load_seed_file(args.free_basis)
    except (AlgebraFileError, CatalogError) as e:
        _error(str(e))
        return EXIT_USAGE

    jobs = [(t, None, args.seed_spec, args.free_basis) for t in targets]
    jobs.extend(("", seed, DEFAULT_SEED_SPEC, None) for seed in range(1, (args.fuzz or 0) + 1))

    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_run_check, jobs))
    else:
        outcomes = [_run_check(job) for job in jobs]

    failed = 0
    usage = False
    for s, usage_error in outcomes:
        usage = usage or usage_error
        if s.passed:
            print(f"PASS {s.target} ({len(s.results)} checks)")
            continue
        failed += 1
        print(f"FAIL {s.target}" + (f": {s.error}" if s.error else ""))
        for r in s.results:
            if not r.passed:
                print(f"  [{r.proposition}] {r.description}: {json.dumps(r.witness, default=str)}")
    print(f"{len(outcomes) - failed}/{len(outcomes)} targets passed")
    if usage:
        return EXIT_USAGE
    return EXIT_OK if failed == 0 else EXIT_FAILURE


def cmd_export(args) -> int:
    name = args.name[len(CATALOG_PREFIX):] if args.name.startswith(CATALOG_PREFIX) else args.name
    try:
        entry = get_entry(name)
    except CatalogError as e:
        _error(str(e))
        return EXIT_USAGE
    save_algebra(entry.algebra, args.file)
    print(f"wrote {name} to {args.file}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diffalg",
        description="Derivations, covectors and reflexivity of finite-dimensional algebras over Q",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse an algebra file and check the algebra axioms")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", help="run the duality pipeline and print a report")
    p.add_argument("target", help="catalog:<name> or an algebra file")
    p.add_argument("--seed-spec", default=DEFAULT_SEED_SPEC,
                   help="full-der | inner:<basis name> | derivations:PATH | constants:PATH")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON output (default)")
    fmt.add_argument("--text", action="store_true", help="human-readable output")
    p.add_argument("--output", "-o", help="write the report to a file instead of stdout")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("check", help="run the proposition suite")
    p.add_argument("targets", nargs="*", help="catalog:<name>, catalog:all or algebra files")
    p.add_argument("--seed-spec", default=DEFAULT_SEED_SPEC)
    p.add_argument("--fuzz", type=int, default=0, metavar="N",
                   help=f"also check random algebras for seeds 1..N (e.g. {DEFAULT_FUZZ_COUNT})")
    p.add_argument("--free-basis", metavar="FILE", help="seed file whose derivations form a claimed free basis")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("export", help="write a catalog algebra to a file")
    p.add_argument("name")
    p.add_argument("file")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
