"""Combining three forecasts: extend the kernel, or compress the union.

Also prints the ledger of published results that the recomputation does
not reproduce.

Run: python3 demos/03_aggregation.py
"""

from __future__ import annotations

from morphcast.aggregate import (
    aggregated_to_text,
    compress_superstructure,
    extend_kernel,
    substructure,
    superstructure,
    table3_candidates,
    table4_candidates,
)
from morphcast.catalog import op_name
from morphcast.ledger import ledger_to_text, report_ledger
from morphcast.reference import PUBLISHED_SUBSTRUCTURE, published_forecasts


def _names(ids):
    return "{" + ", ".join(op_name(i) for i in sorted(ids)) + "}"


def main():
    trio = published_forecasts()
    print("intersection:", _names(substructure(trio)))
    print("union:       ", _names(superstructure(trio)))

    # Strategy I starts from the published kernel so the candidate table
    # stays disjoint from it.
    print()
    print(aggregated_to_text(extend_kernel(PUBLISHED_SUBSTRUCTURE, table3_candidates(), 8)))
    print()
    print(aggregated_to_text(compress_superstructure(superstructure(trio), table4_candidates(), 8)))

    print("\nPublished vs recomputed:\n")
    print(ledger_to_text(report_ledger()))


if __name__ == "__main__":
    main()
