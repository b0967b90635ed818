"""Discrepancy ledger: published results next to recomputed ones.

Each entry pairs a printed result of the source study with the value this
package computes from the same inputs, plus the difference.  The entries only
make sense for the bundled corpus; any other catalog yields an empty ledger.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from . import reference as R
from .aggregate import (
    compress_superstructure,
    extend_kernel,
    substructure,
    table3_candidates,
    table4_candidates,
)
from .catalog import Catalog, builtin_catalog, op_name
from .forecast import compute_forecast, dominates, pareto_front


@dataclass(frozen=True)
class LedgerEntry:
    key: str
    item: str
    published: str
    derived: str
    delta: str


def _ids(ids) -> str:
    return "{" + ", ".join(op_name(i) for i in sorted(ids)) + "}"


def _signed(n) -> str:
    return f"{n:+d}"


def report_ledger(catalog: Catalog | None = None) -> list[LedgerEntry]:
    """Ledger entries for the bundled corpus (empty for any other catalog)."""
    builtin = builtin_catalog()
    if catalog is not None and catalog != builtin:
        return []
    cat = builtin
    expert, hat_p, bar_p = R.published_forecasts(cat)
    hat = compute_forecast(cat, "knapsack", R.HAT_BUDGET)
    bar = compute_forecast(cat, "mckp", R.BAR_BUDGET, R.PUBLISHED_OMEGA)
    sub = substructure([expert, hat_p, bar_p])
    theta1 = extend_kernel(R.PUBLISHED_SUBSTRUCTURE, table3_candidates(), R.TABLE3_BUDGET, catalog=cat)
    theta2 = compress_superstructure(R.PUBLISHED_SUPERSTRUCTURE, table4_candidates(),
                                     R.TABLE4_BUDGET, catalog=cat)
    front = pareto_front([expert, hat_p, bar_p])
    bar_status = "Pareto-efficient" if bar_p in front else (
        "dominated by " + ", ".join(
            f"{f.label} {f.totals}" for f in (expert, hat_p) if dominates(f, bar_p)
        )
    )
    px, py = R.PUBLISHED_BAR_PLOT_POINT
    return [
        LedgerEntry(
            "knapsack", f"knapsack forecast Φ̂ (b={R.HAT_BUDGET})",
            f"{_ids(R.PUBLISHED_HAT)} profit {R.PUBLISHED_HAT_PROFIT}",
            f"{_ids(hat.operations)} profit {hat.profit} (exact optimum)",
            _signed(hat.profit - R.PUBLISHED_HAT_PROFIT),
        ),
        LedgerEntry(
            "mckp", f"multiple-choice forecast Φ̄ (b={R.BAR_BUDGET})",
            f"{_ids(R.PUBLISHED_BAR)} profit {R.PUBLISHED_BAR_PROFIT}",
            f"{_ids(bar.operations)} profit {bar.profit} (exact optimum)",
            _signed(bar.profit - R.PUBLISHED_BAR_PROFIT),
        ),
        LedgerEntry(
            "substructure", "substructure of Φ̃, Φ̂, Φ̄",
            _ids(R.PUBLISHED_SUBSTRUCTURE),
            f"{_ids(sub)} (intersection of the printed sets)",
            f"-{_ids(R.PUBLISHED_SUBSTRUCTURE - sub)} +{_ids(sub - R.PUBLISHED_SUBSTRUCTURE)}",
        ),
        LedgerEntry(
            "theta-i", f"strategy I additions (b={R.TABLE3_BUDGET})",
            f"{_ids(R.PUBLISHED_THETA_I_ADDED)} profit {R.PUBLISHED_THETA_I_PROFIT}",
            f"{_ids(theta1.decided)} profit {theta1.objective} (exact optimum)",
            _signed(theta1.objective - R.PUBLISHED_THETA_I_PROFIT),
        ),
        LedgerEntry(
            "theta-ii", f"strategy II deletions (b={R.TABLE4_BUDGET})",
            f"{_ids(R.PUBLISHED_THETA_II_DELETED)} cost {R.PUBLISHED_THETA_II_COST}",
            f"{_ids(theta2.decided)} cost {theta2.objective} (exact optimum)",
            _signed(theta2.objective - R.PUBLISHED_THETA_II_COST),
        ),
        LedgerEntry(
            "plot-point", "plotted (profit, resource) of Φ̄",
            f"({px}, {py})",
            f"({bar_p.profit}, {bar_p.resource}) from c = 4 - r",
            f"profit {_signed(bar_p.profit - px)}, resource {_signed(bar_p.resource - py)}",
        ),
        LedgerEntry(
            "pareto", "Pareto status of Φ̄",
            "Pareto-efficient",
            bar_status,
            "status differs" if bar_p not in front else "none",
        ),
        LedgerEntry(
            "figure-labels", "leaf labels in the aggregated-forecast figures",
            "X/X1 and Z/Z1",
            "no such labels in any generation or operation; read as M/M1 and K/K1",
            "relabelled",
        ),
    ]


LEDGER_COLUMNS = ("key", "item", "published", "derived", "delta")


def ledger_to_csv(entries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(LEDGER_COLUMNS)
    for e in entries:
        w.writerow([e.key, e.item, e.published, e.derived, e.delta])
    return buf.getvalue()


def ledger_to_text(entries) -> str:
    blocks = []
    for e in entries:
        blocks.append(
            f"[{e.key}] {e.item}\n  published: {e.published}\n  derived:   {e.derived}\n  delta:     {e.delta}\n"
        )
    return "\n".join(blocks)
