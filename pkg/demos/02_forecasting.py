"""From a catalog of improvement operations to a forecast structure.

Ranks the operations, clusters them, solves the knapsack and the
multiple-choice knapsack, then compares the results on the profit/resource
plane.

Run: python3 demos/02_forecasting.py
"""

from __future__ import annotations

from morphcast.catalog import builtin_catalog
from morphcast.cluster import agglomerate, partition_after, partition_to_text, rand_index
from morphcast.forecast import (
    apply_operations,
    comparison_text,
    compute_forecast,
    expert_forecast,
    forecast_to_text,
)
from morphcast.model import builtin_generation, render_tree
from morphcast.rank import layers_to_text, rank_operations
from morphcast.reference import EXPERT, PUBLISHED_OMEGA


def main():
    catalog = builtin_catalog()
    s3 = builtin_generation("S3")

    print("Priority layers by dominance peeling:")
    print(layers_to_text(rank_operations(catalog, "peeling")))

    part = partition_after(agglomerate(catalog), 9)
    print("\nClusters after nine single-linkage merges:")
    print(partition_to_text(part))
    print(f"Rand index against the published grouping: {rand_index(part, PUBLISHED_OMEGA):.4f}")

    expert = expert_forecast(EXPERT, catalog)
    hat = compute_forecast(catalog, "knapsack", budget=16)
    bar = compute_forecast(catalog, "mckp", budget=17, partition=PUBLISHED_OMEGA)
    for f in (hat, bar):
        print()
        print(forecast_to_text(f))

    print("Structure contributed by the knapsack forecast on top of S3:")
    print(render_tree(apply_operations(s3, hat, catalog), "text"))

    print("Comparison:")
    print(comparison_text([expert, hat, bar]))


if __name__ == "__main__":
    main()
