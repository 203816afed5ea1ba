"""Command-line interface: solve, bench, verify, tree, parse.

Output contract: the first stdout line echoes the effective
configuration; human-readable results follow on stdout; progress and
timings go to stderr; machine-readable reports are written via
--format/--out.  Reports never embed wall-clock values unless --times
is given, so identical invocations are byte-identical for any
--workers value.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 size or limit
refusal, 4 proven-invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import bench as bench_mod
from . import claims as claims_mod
from .errors import (
    BudgetExceededError,
    DegreeViolationError,
    InstanceNotFoundError,
    InvalidInstanceError,
    InvalidKError,
    InvalidOptimumError,
    InvalidPrefixError,
    InvalidSizeError,
    InvalidTourError,
    PreconditionError,
    PrefixLimitError,
    SizeRefusedError,
    TsplibParseError,
    UnsupportedFormatError,
)
from .heuristics import DEFAULT_PREFIX_LIMIT, MODE_PATH, MODE_TOUR, KrnnConfig, krnn
from .instance import Instance
from .spanning import prim_mst, tour_spanning_trees, tree4
from .tsplib import parse_file

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_SIZE = 3
EXIT_VIOLATION = 4

_PARSE_ERRORS = (
    TsplibParseError,
    UnsupportedFormatError,
    InvalidInstanceError,
    InstanceNotFoundError,
    InvalidTourError,
    InvalidOptimumError,
)
_SIZE_ERRORS = (
    SizeRefusedError,
    PrefixLimitError,
    InvalidKError,
    InvalidSizeError,
    InvalidPrefixError,
    BudgetExceededError,
)

CLAIM_ALIASES = {
    "mst-bound": "mst_bound",
    "ratio": "theorem4_ratio",
    "conjecture": "conjecture_k",
}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on bad usage by default; this CLI reserves 2
    for parse errors and uses 1 for usage."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _default_workers() -> int:
    return os.cpu_count() or 1


def _config_line(command: str, pairs: list[tuple[str, object]]) -> str:
    """Effective configuration echo.  Every field that can affect
    results appears here; --workers is results-neutral by the
    determinism contract and is echoed on stderr instead, keeping
    stdout byte-identical across worker counts."""
    body = " ".join(f"{k}={v}" for k, v in pairs)
    return f"# config command={command} {body}"


def _echo_workers(args) -> None:
    workers = getattr(args, "workers", None)
    if workers is not None:
        print(f"# workers={workers}", file=sys.stderr)


def _data_dir(args) -> Path:
    if getattr(args, "data_dir", None):
        return Path(args.data_dir)
    return bench_mod.default_data_dir()


def _load_instance(ref: str, data_dir: Path) -> Instance:
    """`ref` is a .tsp path or a registry instance name."""
    p = Path(ref)
    if p.is_file():
        return parse_file(p)
    name = bench_mod.resolve_name(ref)
    path = data_dir / f"{name}.tsp"
    if not path.is_file():
        raise InstanceNotFoundError(f"{name}: no file at {path}")
    return parse_file(path)


def _write_out(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")


def _mode(flag: str) -> str:
    return MODE_TOUR if flag == "tour" else MODE_PATH


# -- solve -------------------------------------------------------------------


def _cmd_solve(args) -> int:
    instance = _load_instance(args.instance, _data_dir(args))
    print(
        _config_line(
            "solve",
            [
                ("instance", args.instance),
                ("k", args.k),
                ("mode", args.mode),
                ("prefix_limit", args.prefix_limit),
            ],
        )
    )
    _echo_workers(args)
    start = time.monotonic()
    result = krnn(
        instance,
        KrnnConfig(
            k=args.k, mode=_mode(args.mode), workers=args.workers,
            prefix_limit=args.prefix_limit,
        ),
    )
    elapsed = time.monotonic() - start
    best = result.best
    print(f"instance {instance.name} n={instance.n}")
    print(f"cost {best.cost}")
    print("order " + " ".join(str(v) for v in best.order))
    print("prefix " + " ".join(str(v) for v in result.best_prefix))
    print(f"candidates {result.candidates_evaluated}")
    print(f"time {elapsed:.3f}s", file=sys.stderr)
    if args.format == "json" or args.out:
        doc = {
            "schema_version": bench_mod.SCHEMA_VERSION,
            "generated_at": bench_mod.generated_at_stamp(),
            "command": "solve",
            "instance": instance.name,
            "n": instance.n,
            "k": args.k,
            "mode": args.mode,
            "cost": best.cost,
            "order": list(best.order),
            "prefix": list(result.best_prefix),
            "candidates_evaluated": result.candidates_evaluated,
        }
        _write_out(args, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


# -- bench -------------------------------------------------------------------


def _cmd_bench(args) -> int:
    ks = sorted({int(x) for x in args.k.split(",") if x})
    if not ks or any(k < 1 for k in ks):
        raise PreconditionError(f"bad k list {args.k!r}")
    if args.only:
        names = [bench_mod.resolve_name(x) for x in args.only.split(",") if x]
    else:
        names = bench_mod.desk_scale_names(args.max_n)
    print(
        _config_line(
            "bench",
            [
                ("only", ",".join(sorted(names))),
                ("k", ",".join(map(str, ks))),
                ("max_n", args.max_n),
                ("budget_secs", args.budget_secs),
                ("format", args.format),
                ("times", args.times),
            ],
        )
    )
    _echo_workers(args)
    records = bench_mod.run_benchmark(
        names,
        ks=ks,
        data_dir=_data_dir(args),
        budget_secs=args.budget_secs,
        workers=args.workers,
        prefix_limit=args.prefix_limit,
        progress=lambda line: print(line, file=sys.stderr),
    )
    text = bench_mod.emit_report(records, args.format, include_times=args.times)
    print(text, end="")
    _write_out(args, text)
    divergent = [r.name for r in records if r.divergent]
    skipped = [r.name for r in records if r.status != "ok"]
    if divergent:
        print("divergent (>1% of optimum from published): " + " ".join(sorted(set(divergent))), file=sys.stderr)
    if skipped:
        print("not run: " + " ".join(sorted(set(skipped))), file=sys.stderr)
    return EXIT_OK


# -- verify ------------------------------------------------------------------


def _verify_instance_claim(args, claim: str, data_dir: Path):
    instance = _load_instance(args.instance, data_dir)
    label = args.instance
    if claim == "theorem1":
        return claims_mod.check_theorem1(instance, label=label)
    if claim == "theorem2":
        return claims_mod.check_theorem2(instance, label=label)
    if claim == "theorem3":
        return claims_mod.check_theorem3(instance, label=label)
    if claim == "mst_bound":
        entry = bench_mod.REGISTRY.get(instance.name)
        if entry is None:
            raise PreconditionError(
                f"no registry optimum for {instance.name!r}; mst_bound needs one"
            )
        return claims_mod.check_mst_bound(instance, entry.optimum, label=label)
    # theorem4_ratio / conjecture_k
    entry = bench_mod.REGISTRY.get(instance.name)
    if entry is None:
        raise PreconditionError(
            f"no registry optimum for {instance.name!r}; ratio checks need one"
        )
    return claims_mod.check_ratio_bound(
        instance, entry.optimum, k=args.k, label=label, workers=args.workers
    )


def _verify_batch_claim(args, claim: str):
    n_default = {
        "lemma1": 4,
        "lemma2": 5,
        "theorem1": 12,
        "theorem2": 12,
        "theorem3": 50,
        "mst_bound": 9,
        "theorem4_ratio": 12,
        "conjecture_k": 12,
    }[claim]
    n = args.n if args.n else n_default
    kind = args.kind
    metric = claim == "lemma2"
    plan = claims_mod.TrialPlan(kind, n, args.trials, args.seed, metric_required=metric)
    w = args.workers
    if claim == "lemma1":
        return claims_mod.check_lemma1(plan, workers=w)
    if claim == "lemma2":
        return claims_mod.check_lemma2(plan, workers=w)
    if claim == "theorem1":
        return claims_mod.check_theorem1_batch(plan, workers=w)
    if claim == "theorem2":
        return claims_mod.check_theorem2_batch(plan, workers=w)
    if claim == "theorem3":
        return claims_mod.check_theorem3_batch(plan, workers=w)
    if claim == "mst_bound":
        return claims_mod.check_mst_bound_batch(plan, workers=w)
    return claims_mod.check_ratio_bound_batch(plan, k=args.k, workers=w)


def _cmd_verify(args) -> int:
    claim = CLAIM_ALIASES.get(args.claim, args.claim)
    if claim not in claims_mod.CLAIM_IDS:
        raise PreconditionError(
            f"unknown claim {args.claim!r}; expected one of {claims_mod.CLAIM_IDS}"
        )
    print(
        _config_line(
            "verify",
            [
                ("claim", claim),
                ("instance", args.instance or "-"),
                ("trials", args.trials),
                ("n", args.n or "-"),
                ("seed", args.seed),
                ("kind", args.kind),
                ("k", args.k),
                ("format", args.format),
            ],
        )
    )
    _echo_workers(args)
    data_dir = _data_dir(args)
    if args.instance:
        verdict = _verify_instance_claim(args, claim, data_dir)
    else:
        verdict = _verify_batch_claim(args, claim)
    worst = "-" if verdict.worst_ratio is None else f"{verdict.worst_ratio:.6f}"
    print(
        f"claim {verdict.claim_id}: trials={verdict.trials} "
        f"violations={verdict.violations} worst_ratio={worst}"
    )
    for key in sorted(verdict.details):
        print(f"  {key}={verdict.details[key]}")
    if verdict.counterexamples:
        print(f"  counterexamples_archived={len(verdict.counterexamples)}")
    doc = {
        "schema_version": bench_mod.SCHEMA_VERSION,
        "generated_at": bench_mod.generated_at_stamp(),
        "claim": verdict.to_dict(),
    }
    if args.format == "json" or args.out:
        _write_out(args, json.dumps(doc, indent=2) + "\n")
    # the 1.25 tree bound is proven for plane points only; outside that
    # regime a theorem3 violation is a report, not a bug
    in_proven_regime = verdict.details.get("proven_bound", True)
    if claim in claims_mod.PROVEN_CLAIM_IDS and verdict.violations > 0 and in_proven_regime:
        print(f"proven bound violated: {claim} — this is a bug", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


# -- tree --------------------------------------------------------------------


def _print_tree(tag: str, tree) -> None:
    print(f"{tag} weight={tree.total_weight} max_degree={tree.max_degree}")
    print(f"{tag} edges " + " ".join(f"{u}-{v}" for u, v in tree.edges))


def _cmd_tree(args) -> int:
    instance = _load_instance(args.instance, _data_dir(args))
    print(
        _config_line(
            "tree",
            [("instance", args.instance), ("stage", args.stage), ("k", args.k)],
        )
    )
    print(f"instance {instance.name} n={instance.n}")
    mst = prim_mst(instance)
    if args.stage == "mst":
        _print_tree("mst", mst)
        return EXIT_OK
    if args.stage == "tree4":
        t4 = tree4(instance, mst)
        _print_tree("mst", mst)
        _print_tree("tree4", t4)
        print(f"ratio {t4.total_weight / mst.total_weight:.6f} (bound 1.25)")
        return EXIT_OK
    # tour-trees
    result = krnn(instance, KrnnConfig(k=args.k, mode=MODE_TOUR, workers=args.workers))
    tour = result.best
    trees = tour_spanning_trees(instance, tour)
    weights = [t.total_weight for t in trees]
    print(f"tour cost={tour.cost} (k={args.k})")
    print(f"trees {len(trees)} min={min(weights)} max={max(weights)}")
    total = sum(weights)
    print(
        f"weight_sum {total} == (n-1)*tour_cost {(instance.n - 1) * tour.cost}: "
        f"{total == (instance.n - 1) * tour.cost}"
    )
    return EXIT_OK


# -- parse -------------------------------------------------------------------


def _cmd_parse(args) -> int:
    instance = _load_instance(args.instance, _data_dir(args))
    print(_config_line("parse", [("instance", args.instance)]))
    print(f"name {instance.name}")
    print(f"n {instance.n}")
    print(f"kind {instance.distance_tag or 'explicit'}")
    print(f"integral {instance.integral}")
    print(f"w(0,1) {instance.dist(0, 1)}")
    print(f"w(0,n-1) {instance.dist(0, instance.n - 1)}")
    return EXIT_OK


# -- parser wiring -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="krnn", description="k-repeated-nearest-neighbor TSP toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, with_workers=True):
        p.add_argument("--data-dir", default=None, help="TSPLIB directory (default: $KRNN_DATA_DIR or repo data/tsplib)")
        p.add_argument("--format", default="md", choices=["csv", "json", "md"], help="report format")
        p.add_argument("--out", default=None, help="write the report to this file")
        if with_workers:
            p.add_argument("--workers", type=int, default=_default_workers(), help="parallel workers")
        p.add_argument("--prefix-limit", type=int, default=DEFAULT_PREFIX_LIMIT, help="max enumerated prefixes")

    p = sub.add_parser("solve", help="run k-RNN on one instance")
    p.add_argument("instance", help=".tsp path or registry name")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--mode", default="tour", choices=["tour", "path"])
    common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("bench", help="reproduce the 48-instance benchmark")
    p.add_argument("--only", default=None, help="comma-separated instance names")
    p.add_argument("--max-n", type=int, default=bench_mod.DESK_SCALE_MAX_N, help="size cutoff when --only is absent")
    p.add_argument("--k", default="1,2", help="comma-separated k values")
    p.add_argument("--budget-secs", type=float, default=None, help="per-(instance,k) time budget")
    p.add_argument("--times", action="store_true", help="include wall times in reports (breaks byte-stability)")
    common(p)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("verify", help="check a claimed guarantee empirically")
    p.add_argument("claim", help="lemma1|lemma2|theorem1|theorem2|theorem3|mst_bound|ratio|conjecture")
    p.add_argument("--instance", default=None, help="single-instance mode: .tsp path or registry name")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--n", type=int, default=None, help="generated-instance size (default per claim)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", default="euclidean-uniform",
                   choices=list(claims_mod.METRIC_KINDS) + ["arbitrary-nonnegative"])
    p.add_argument("--k", type=int, default=2, help="prefix length for ratio checks")
    common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("tree", help="spanning-tree constructions")
    p.add_argument("instance", help=".tsp path or registry name")
    p.add_argument("--stage", default="mst", choices=["mst", "tree4", "tour-trees"])
    p.add_argument("--k", type=int, default=2, help="k for the tour-trees tour")
    common(p)
    p.set_defaults(func=_cmd_tree)

    p = sub.add_parser("parse", help="parse and summarize an instance file")
    p.add_argument("instance", help=".tsp path or registry name")
    common(p, with_workers=False)
    p.set_defaults(func=_cmd_parse)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DegreeViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except _SIZE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except _PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (PreconditionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
