"""Published results for the bundled ZigBee corpus, kept verbatim.

These are the sets and numbers as printed in the source study.  Several of
them disagree with what the study's own formulas produce; the discrepancy
ledger (:mod:`morphcast.ledger`) sets each one against the recomputed value.
"""

from __future__ import annotations

from .cluster import Partition

# direct expert forecast of the next generation
EXPERT = frozenset({1, 2, 3, 5, 7, 9, 10, 13, 14, 15, 16, 17})

# knapsack forecast as printed (b = 16)
PUBLISHED_HAT = frozenset({1, 2, 4, 5, 6, 7, 8, 9})
HAT_BUDGET = 16
PUBLISHED_HAT_PROFIT = 16

# multiple-choice forecast as printed (b = 17)
PUBLISHED_BAR = frozenset({2, 4, 5, 6, 7, 9, 11, 15})
BAR_BUDGET = 17
PUBLISHED_BAR_PROFIT = 14

# clustering of the 17 operations into 8 groups, used as the MCKP partition
PUBLISHED_OMEGA = Partition((
    frozenset({1, 3, 6, 8, 16}),
    frozenset({2}),
    frozenset({4}),
    frozenset({5, 14, 17}),
    frozenset({7}),
    frozenset({9, 10, 12}),
    frozenset({11, 13}),
    frozenset({15}),
))

PUBLISHED_SUBSTRUCTURE = frozenset({2, 5, 6})
PUBLISHED_SUPERSTRUCTURE = frozenset(range(1, 18)) - {12}

# strategy I (kernel extension): candidates as (id, priority, weight), b = 8
TABLE3 = ((10, 1, 2), (13, 3, 3), (17, 3, 3), (3, 1, 3), (15, 2, 3))
TABLE3_BUDGET = 8
PUBLISHED_THETA_I_ADDED = frozenset({10, 13, 15})
PUBLISHED_THETA_I_PROFIT = 6

# strategy II (superstructure compression): candidates as (id, priority, amount), b = 8
TABLE4 = ((10, 1, 2), (13, 3, 3), (7, 4, 3), (8, 2, 3), (14, 2, 3), (3, 1, 3), (17, 3, 3))
TABLE4_BUDGET = 8
PUBLISHED_THETA_II_DELETED = frozenset({7, 8, 13, 17})
PUBLISHED_THETA_II_COST = 4

# approximate plotted (profit, resource) of the multiple-choice forecast in the
# forecast comparison chart
PUBLISHED_BAR_PLOT_POINT = (18, 17)


def published_forecasts(catalog=None):
    """The three published forecasts (expert, knapsack, multiple choice) as
    :class:`~morphcast.forecast.Forecast` objects with catalog totals."""
    from .catalog import builtin_catalog
    from .forecast import Forecast, expert_forecast

    catalog = builtin_catalog() if catalog is None else catalog
    return [
        expert_forecast(EXPERT, catalog),
        Forecast.from_catalog(catalog, PUBLISHED_HAT, "knapsack", id="published-hat", label="Φ̂"),
        Forecast.from_catalog(catalog, PUBLISHED_BAR, "mckp", id="published-bar", label="Φ̄"),
    ]
