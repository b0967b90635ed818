from __future__ import annotations

import io
import subprocess
import sys

import pytest

from morphcast.aggregate import (
    candidates_to_csv,
    extend_kernel,
    kernel,
    suggest_candidates,
    table3_candidates,
)
from morphcast.catalog import serialize_catalog
from morphcast.cli import run
from morphcast.cluster import agglomerate, dendrogram_to_csv, partition_after, partition_to_csv
from morphcast.diff import diff_generations, records_to_csv
from morphcast.forecast import (
    apply_operations,
    comparison_csv,
    comparison_svg,
    compute_forecast,
    expert_forecast,
    forecast_to_csv,
)
from morphcast.ledger import ledger_to_csv, report_ledger
from morphcast.model import builtin_generation, render_tree
from morphcast.rank import layers_to_csv, rank_operations
from morphcast.reference import EXPERT, PUBLISHED_OMEGA, PUBLISHED_SUBSTRUCTURE, published_forecasts


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def ok(*argv):
    code, out, err = cli(*argv)
    assert code == 0, err
    return out


# --- spec examples ----------------------------------------------------------------


def test_fixtures_list():
    out = ok("fixtures", "--list")
    for gid in ("S1", "S2", "S3", "S4"):
        assert f"{gid}:" in out
    assert "17 operations" in out
    assert sum(line.lstrip().startswith("Φ") for line in out.splitlines()) == 17


def test_forecast_greedy_csv():
    out = ok("forecast", "knapsack", "--budget", "16", "--mode", "greedy", "--format", "csv")
    ops = [line.split(",")[0] for line in out.splitlines()[1:-1]]
    assert ops == ["Φ1", "Φ2", "Φ3", "Φ4", "Φ5", "Φ9", "Φ12"]
    assert out.splitlines()[-1] == "total,19,16"


def test_diff_s1_s2():
    out = ok("diff", "--from", "S1", "--to", "S2", "--format", "csv")
    rows = out.splitlines()[1:]
    assert len(rows) == 3 and all(r.endswith(",O7") for r in rows)


# --- exit codes -------------------------------------------------------------------


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["forecast"],
    ["forecast", "knapsack", "--budget", "-1"],
    ["forecast", "knapsack", "--unknown-flag"],
    ["diff", "--from", "S1"],
    ["rank", "--format", "svg"],
])
def test_usage_errors(argv, capsys):
    code, _, _ = cli(*argv)
    assert code == 2


@pytest.mark.parametrize("argv, needle", [
    (["forecast", "expert", "--ops", "1,99"], "Φ99"),
    (["aggregate", "extend", "--kernel", "majority"], "Φ15"),
    (["aggregate", "compress", "--budget", "100"], "threshold"),
    (["diff", "--from", "S1", "--to", "/nonexistent.json"], ""),
    (["forecast", "mckp", "--budget", "17", "--partition", "1,2;2"], ""),
])
def test_domain_errors(argv, needle):
    code, out, err = cli(*argv)
    assert code == 1 and out == ""
    assert err.startswith("morphcast: error:") and needle in err


def test_help_exits_zero(capsys):
    assert cli("--help")[0] == 0


# --- thin adapter: CLI output equals the core rendering ----------------------------


def test_adapter_forecast(catalog):
    f = compute_forecast(catalog, "knapsack", 16)
    assert ok("forecast", "knapsack", "--budget", "16", "--format", "csv") == \
        forecast_to_csv(f, catalog)


def test_adapter_mckp(catalog):
    f = compute_forecast(catalog, "mckp", 17, PUBLISHED_OMEGA)
    assert ok("forecast", "mckp", "--budget", "17", "--partition", "published", "--format", "csv") == \
        forecast_to_csv(f, catalog)


def test_adapter_expert_apply(catalog, s3):
    f = expert_forecast(EXPERT, catalog)
    out = ok("forecast", "expert", "--apply", "--format", "dot")
    assert render_tree(apply_operations(s3, f, catalog), "dot") in out


def test_adapter_diff(generations):
    recs = diff_generations(generations["S2"], generations["S3"])
    assert ok("diff", "--from", "S2", "--to", "S3", "--format", "csv") == records_to_csv(recs)


def test_adapter_rank(catalog):
    assert ok("rank", "--method", "fixture", "--format", "csv") == \
        layers_to_csv(rank_operations(catalog, "fixture"))


def test_adapter_cluster(catalog):
    d = agglomerate(catalog)
    out = ok("cluster", "--format", "csv")
    assert partition_to_csv(partition_after(d, 9)) in out or dendrogram_to_csv(d) in out


def test_adapter_compare(catalog):
    trio = published_forecasts(catalog)
    assert ok("compare", "--format", "csv") == comparison_csv(trio)
    assert ok("compare", "--format", "svg") == comparison_svg(trio)


def test_adapter_aggregate(catalog):
    res = extend_kernel(PUBLISHED_SUBSTRUCTURE, table3_candidates(), 8, catalog=catalog)
    out = ok("aggregate", "extend", "--kernel", "2,5,6", "--format", "csv")
    assert forecast_to_csv(res, catalog) == out


def test_adapter_ledger():
    assert ok("ledger", "--format", "csv") == ledger_to_csv(report_ledger())


def test_adapter_render():
    assert ok("render", "S3", "--format", "dot") == render_tree(builtin_generation("S3"), "dot")


# --- files and determinism ----------------------------------------------------------


def test_output_file(tmp_path):
    target = tmp_path / "ledger.csv"
    assert ok("ledger", "--format", "csv", "-o", str(target)) == ""
    assert target.read_text(encoding="utf-8") == ledger_to_csv(report_ledger())


def test_custom_catalog_file(tmp_path, catalog):
    path = tmp_path / "catalog.json"
    path.write_text(serialize_catalog(catalog), encoding="utf-8")
    assert ok("forecast", "knapsack", "--budget", "16", "--catalog", str(path)) == \
        ok("forecast", "knapsack", "--budget", "16")


def test_candidates_file(tmp_path, catalog):
    trio = published_forecasts(catalog)
    suggested = suggest_candidates(trio, kernel(trio), catalog)
    text = ok("aggregate", "extend", "--suggest", "--format", "csv")
    assert text == candidates_to_csv(suggested)
    path = tmp_path / "cands.csv"
    path.write_text(text, encoding="utf-8")
    res = extend_kernel(kernel(trio), suggested, 8, catalog=catalog)
    assert ok("aggregate", "extend", "--candidates", str(path), "--format", "csv") == \
        forecast_to_csv(res, catalog)


ALL_COMMANDS = [
    ["fixtures"],
    ["fixtures", "--show", "S4", "--format", "dot"],
    ["diff", "--from", "S3", "--to", "S4"],
    ["rank"],
    ["cluster", "--compare"],
    ["solve", "knapsack", "--budget", "16"],
    ["solve", "mckp", "--budget", "17", "--partition", "published"],
    ["solve", "cover", "--budget", "8"],
    ["forecast", "mckp", "--budget", "17", "--partition", "cluster"],
    ["forecast", "expert", "--apply", "--overlay", "base"],
    ["compare", "--computed"],
    ["aggregate", "compress", "--format", "csv"],
    ["render", "S1"],
    ["ledger"],
]


@pytest.mark.parametrize("argv", ALL_COMMANDS, ids=lambda a: " ".join(a))
def test_deterministic(argv):
    first = ok(*argv)
    assert first
    assert ok(*argv) == first


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "morphcast", "diff", "--from", "S1", "--to", "S2", "--format", "csv"],
        capture_output=True, text=True, encoding="utf-8", check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == ok("diff", "--from", "S1", "--to", "S2", "--format", "csv")
