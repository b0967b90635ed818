"""Command-line interface.

Every command is a thin adapter over the library: it loads inputs, calls one
or two core functions, and prints what they return.  Exit status is 0 on
success, 1 on a domain error (bad document, broken invariant, infeasible
request) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from . import aggregate as agg
from . import reference as R
from .catalog import builtin_catalog, catalog_to_csv, load_catalog, op_name, parse_op_name
from .cluster import (
    LINKAGES,
    METRICS,
    agglomerate,
    compare_with_fixture,
    dendrogram_to_csv,
    dendrogram_to_text,
    parse_partition,
    partition_after,
    partition_to_csv,
    partition_to_text,
    rand_index,
)
from .diff import diff_generations, records_to_csv, records_to_text
from .errors import MorphcastError
from .forecast import (
    apply_operations,
    comparison_csv,
    comparison_svg,
    comparison_text,
    compute_forecast,
    expert_forecast,
    forecast_to_csv,
    forecast_to_text,
    knapsack_instance,
    mckp_instance,
)
from .ledger import ledger_to_csv, ledger_to_text, report_ledger
from .model import (
    GENERATION_IDS,
    builtin_generation,
    builtin_generations,
    leaf_map,
    load_system,
    render_tree,
    serialize_system,
)
from .rank import METHODS as RANK_METHODS
from .rank import dominance_inversions, layers_to_csv, layers_to_text, rank_operations
from .solve import (
    MODES,
    CoverInstance,
    KnapsackInstance,
    MckpInstance,
    load_instance,
    selection_to_csv,
    selection_to_dict,
    selection_to_text,
    solve,
)


class UsageError(Exception):
    """Raised for argument combinations argparse cannot check by itself."""


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _catalog(args):
    path = getattr(args, "catalog", None)
    return load_catalog(_read(path)) if path else builtin_catalog()


def _system(token):
    """A generation id (S1..S4, S~4) or a path to a system document."""
    key = token.strip().upper().replace("~", "")
    if key in GENERATION_IDS:
        return builtin_generation(key)
    return load_system(token)


def _partition(spec, catalog):
    if spec in (None, "published"):
        return R.PUBLISHED_OMEGA
    if spec == "cluster":
        d = agglomerate(catalog)
        return partition_after(d, len(catalog) - len(R.PUBLISHED_OMEGA))
    if ";" in spec or "," in spec or spec.strip().lstrip("Φ").isdigit():
        return parse_partition(spec)
    return parse_partition(_read(spec))


def _ids(text):
    return [parse_op_name(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]


def _need_format(args, allowed):
    if args.format not in allowed:
        raise UsageError(
            f"{args.command}: format {args.format!r} not supported here; "
            f"choose from {', '.join(allowed)}"
        )


# --- commands --------------------------------------------------------------------


def cmd_fixtures(args):
    catalog = builtin_catalog()
    if args.show:
        _need_format(args, ("text", "dot", "json"))
        system = _system(args.show)
        return serialize_system(system) if args.format == "json" else render_tree(system, args.format)
    if args.format == "csv":
        return catalog_to_csv(catalog)
    _need_format(args, ("text", "csv"))
    lines = ["generations:"]
    for system in builtin_generations():
        lines.append(f"  {system.id}: {system.name} ({len(leaf_map(system))} leaves)")
    lines.append(f"catalog: {len(catalog)} operations, criteria "
                 + ", ".join(c.id for c in catalog.criteria))
    for op in catalog:
        lines.append(f"  {op.name:<4} r={op.priority} c={catalog.profit(op.id)} "
                     f"a={op.resource}  {op.summary}")
    return "\n".join(lines) + "\n"


def cmd_diff(args):
    _need_format(args, ("text", "csv"))
    records = diff_generations(_system(args.source), _system(args.target))
    return records_to_csv(records) if args.format == "csv" else records_to_text(records)


def cmd_rank(args):
    _need_format(args, ("text", "csv"))
    catalog = _catalog(args)
    layers = rank_operations(catalog, args.method)
    if args.format == "csv":
        return layers_to_csv(layers)
    out = layers_to_text(layers)
    inv = dominance_inversions(catalog, layers)
    out += f"dominance inversions: {len(inv)}\n"
    return out


def cmd_cluster(args):
    _need_format(args, ("text", "csv"))
    catalog = _catalog(args)
    if args.compare:
        rows = compare_with_fixture(catalog, R.PUBLISHED_OMEGA, args.steps)
        if args.format == "csv":
            return "metric,linkage,rand_index\n" + "".join(
                f"{m},{link},{ri:.4f}\n" for ri, m, link in rows
            )
        return "".join(f"{m:<5} {link:<9} rand index {ri:.4f}\n" for ri, m, link in rows)
    d = agglomerate(catalog, args.metric, args.linkage)
    part = partition_after(d, args.steps)
    if args.format == "csv":
        return dendrogram_to_csv(d) + "\n" + partition_to_csv(part)
    out = "merges:\n" + dendrogram_to_text(d)
    out += f"\npartition after {args.steps} steps ({len(part)} clusters):\n"
    out += partition_to_text(part)
    if catalog == builtin_catalog():
        out += f"\nrand index vs published partition: {rand_index(part, R.PUBLISHED_OMEGA):.4f}\n"
    return out


def cmd_solve(args):
    _need_format(args, ("text", "csv", "json"))
    if args.instance:
        inst = load_instance(_read(args.instance))
        expected = {"knapsack": KnapsackInstance, "mckp": MckpInstance, "cover": CoverInstance}
        if not isinstance(inst, expected[args.problem]):
            raise UsageError(f"{args.instance} does not hold a {args.problem} instance")
    else:
        catalog = _catalog(args)
        if args.problem == "knapsack":
            inst = knapsack_instance(catalog, R.HAT_BUDGET if args.budget is None else args.budget)
        elif args.problem == "mckp":
            inst = mckp_instance(catalog, _partition(args.partition, catalog),
                                 R.BAR_BUDGET if args.budget is None else args.budget, args.skippable)
        else:
            b = R.TABLE4_BUDGET if args.budget is None else args.budget
            inst = agg.deletion_instance(agg.table4_candidates(), b)
    sel = solve(inst, args.mode)
    name = op_name if not args.instance else str
    if args.format == "json":
        return json.dumps(selection_to_dict(sel), indent=2) + "\n"
    if args.format == "csv":
        return selection_to_csv(inst, sel, name)
    return selection_to_text(sel, name)


def _forecast(args, catalog):
    if args.method == "expert":
        ids = _ids(args.ops) if args.ops else R.EXPERT
        return expert_forecast(ids, catalog)
    if args.method == "knapsack":
        b = R.HAT_BUDGET if args.budget is None else args.budget
        return compute_forecast(catalog, "knapsack", b, mode=args.mode,
                                enforce_precedence=args.precedence)
    b = R.BAR_BUDGET if args.budget is None else args.budget
    return compute_forecast(catalog, "mckp", b, partition=_partition(args.partition, catalog),
                            mode=args.mode, skippable=args.skippable)


def cmd_forecast(args):
    _need_format(args, ("text", "csv", "dot", "json"))
    catalog = _catalog(args)
    f = _forecast(args, catalog)
    if args.format in ("dot", "json") or args.apply:
        tree = apply_operations(_system(args.base), f, catalog, overlay=args.overlay == "base")
        if args.format == "json":
            return serialize_system(tree)
        if args.format == "dot":
            return render_tree(tree, "dot")
        return forecast_to_text(f) + "\n" + render_tree(tree, "text")
    if args.format == "csv":
        return forecast_to_csv(f, catalog)
    return forecast_to_text(f)


def _trio(args, catalog):
    trio = R.published_forecasts(catalog)
    if args.computed:
        trio[1] = compute_forecast(catalog, "knapsack", R.HAT_BUDGET)
        trio[2] = compute_forecast(catalog, "mckp", R.BAR_BUDGET, partition=R.PUBLISHED_OMEGA)
    return trio


def cmd_compare(args):
    _need_format(args, ("text", "csv", "svg"))
    forecasts = _trio(args, builtin_catalog())
    return {"text": comparison_text, "csv": comparison_csv, "svg": comparison_svg}[args.format](
        forecasts
    )


def cmd_aggregate(args):
    _need_format(args, ("text", "csv", "dot"))
    catalog = builtin_catalog()
    forecasts = _trio(args, catalog)
    policy = args.kernel
    if policy not in agg.KERNEL_POLICIES:
        policy = _ids(policy)
    kern = agg.kernel(forecasts, policy)
    if args.suggest:
        return agg.candidates_to_csv(agg.suggest_candidates(forecasts, kern, catalog))
    if args.candidates:
        candidates = agg.load_candidates_csv(_read(args.candidates))
    else:
        candidates = agg.table3_candidates() if args.strategy == "extend" else agg.table4_candidates()
    b = R.TABLE3_BUDGET if args.budget is None else args.budget
    if args.strategy == "extend":
        result = agg.extend_kernel(kern, candidates, b, args.mode, catalog)
    else:
        result = agg.compress_superstructure(agg.superstructure(forecasts), candidates, b,
                                             args.mode, catalog)
    if args.format == "csv":
        return forecast_to_csv(result, catalog)
    if args.format == "dot":
        return render_tree(apply_operations(builtin_generation("S3"), result, catalog), "dot")
    return agg.aggregated_to_text(result)


def cmd_render(args):
    _need_format(args, ("text", "dot", "json"))
    system = _system(args.system)
    return serialize_system(system) if args.format == "json" else render_tree(system, args.format)


def cmd_ledger(args):
    _need_format(args, ("text", "csv"))
    entries = report_ledger(_catalog(args) if args.catalog else None)
    return ledger_to_csv(entries) if args.format == "csv" else ledger_to_text(entries)


# --- parser ---------------------------------------------------------------------------

FORMATS = ("text", "csv", "dot", "graph-description", "svg", "json")


def _nonneg(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="morphcast",
        description="Forecast the next generation of a modular system from its history.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", default="text", choices=FORMATS,
                        help="output format (default: text)")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")
    with_catalog = argparse.ArgumentParser(add_help=False)
    with_catalog.add_argument("--catalog", help="catalog document (default: built-in)")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("fixtures", parents=[common], help="list or show the built-in corpus")
    s.add_argument("--list", action="store_true", help="list generations and operations (default)")
    s.add_argument("--show", metavar="GEN", help="render one generation (S1..S4)")
    s.set_defaults(func=cmd_fixtures)

    s = sub.add_parser("diff", parents=[common], help="typed changes between two generations")
    s.add_argument("--from", dest="source", required=True, metavar="GEN_OR_FILE")
    s.add_argument("--to", dest="target", required=True, metavar="GEN_OR_FILE")
    s.set_defaults(func=cmd_diff)

    s = sub.add_parser("rank", parents=[common, with_catalog], help="priority layers")
    s.add_argument("--method", default="peeling", choices=RANK_METHODS)
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("cluster", parents=[common, with_catalog], help="agglomerative clustering")
    s.add_argument("--metric", default="L1", choices=METRICS)
    s.add_argument("--linkage", default="single", choices=LINKAGES)
    s.add_argument("--steps", type=_nonneg, default=9, help="merges to apply (default 9)")
    s.add_argument("--compare", action="store_true",
                   help="Rand index of every metric/linkage pair against the published partition")
    s.set_defaults(func=cmd_cluster)

    s = sub.add_parser("solve", parents=[common, with_catalog], help="run one solver")
    s.add_argument("problem", choices=("knapsack", "mckp", "cover"))
    s.add_argument("--instance", help="instance document (default: built-in data)")
    s.add_argument("--budget", type=_nonneg, help="budget or cover threshold")
    s.add_argument("--mode", default="exact", choices=MODES)
    s.add_argument("--partition", help="mckp groups: published, cluster, '1,3;2;...' or a file")
    s.add_argument("--skippable", action="store_true", help="mckp: a group may stay empty")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("forecast", parents=[common, with_catalog], help="build one forecast")
    s.add_argument("method", choices=("knapsack", "mckp", "expert"))
    s.add_argument("--budget", type=_nonneg)
    s.add_argument("--mode", default="exact", choices=MODES)
    s.add_argument("--partition", help="mckp groups: published, cluster, '1,3;2;...' or a file")
    s.add_argument("--skippable", action="store_true", help="mckp: a group may stay empty")
    s.add_argument("--precedence", action="store_true", help="knapsack: honour precedence")
    s.add_argument("--ops", help="expert: comma-separated operation ids (default: published set)")
    s.add_argument("--apply", action="store_true", help="also print the resulting structure")
    s.add_argument("--base", default="S3", help="base generation for --apply (default S3)")
    s.add_argument("--overlay", choices=("base",),
                   help="'base': patch the whole base tree instead of listing contributions")
    s.set_defaults(func=cmd_forecast)

    s = sub.add_parser("compare", parents=[common], help="profit/resource comparison of forecasts")
    s.add_argument("--computed", action="store_true",
                   help="use recomputed knapsack and MCKP forecasts instead of the published sets")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("aggregate", parents=[common], help="combine the three forecasts")
    s.add_argument("strategy", choices=("extend", "compress"))
    s.add_argument("--kernel", default="intersection",
                   help="intersection, majority, or comma-separated ids")
    s.add_argument("--budget", type=_nonneg, help="budget or threshold (default 8)")
    s.add_argument("--mode", default="exact", choices=MODES)
    s.add_argument("--candidates", help="CSV table with columns id,priority,weight")
    s.add_argument("--suggest", action="store_true",
                   help="print superstructure minus kernel as a candidate table")
    s.add_argument("--computed", action="store_true",
                   help="aggregate recomputed forecasts instead of the published sets")
    s.set_defaults(func=cmd_aggregate)

    s = sub.add_parser("render", parents=[common], help="render a system tree")
    s.add_argument("system", metavar="GEN_OR_FILE")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("ledger", parents=[common, with_catalog],
                       help="published results next to recomputed ones")
    s.set_defaults(func=cmd_ledger)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run the command, write its document; return the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format == "graph-description":
        args.format = "dot"
    try:
        text = args.func(args)
    except UsageError as exc:
        print(f"morphcast: usage error: {exc}", file=stderr)
        return 2
    except (MorphcastError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"morphcast: error: {msg}", file=stderr)
        return 1
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
