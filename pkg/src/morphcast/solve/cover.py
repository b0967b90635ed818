"""Min-cost cover: reach a total amount at least the threshold as cheaply as possible."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..errors import SolverLimitError
from ._masks import lex_min_mask, mask_members, subset_sums
from .instances import (
    DEFAULT_CELL_CAP,
    GREEDY,
    OPTIMAL,
    CoverInstance,
    infeasible,
    make_selection,
)

BRUTEFORCE_MAX_ITEMS = 24
_INF = np.iinfo(np.int64).max // 4


def _selection(instance, chosen, status):
    by_id = {it.id: it for it in instance.items}
    return make_selection(by_id, chosen, status, "cost", "amount")


def mincover_greedy(instance: CoverInstance):
    """Take items by ascending cost/amount (ties: lower id) until covered."""
    if instance.threshold == 0:
        return _selection(instance, [], GREEDY)
    order = sorted(instance.items, key=lambda it: (Fraction(it.cost, it.amount), it.id))
    chosen, amount = [], 0
    for it in order:
        chosen.append(it.id)
        amount += it.amount
        if amount >= instance.threshold:
            return _selection(instance, chosen, GREEDY)
    return infeasible()


def mincover_exact(instance: CoverInstance, cell_cap: int = DEFAULT_CELL_CAP):
    """Optimal cover by dynamic programming over (item suffix, remaining need).

    ``cost[i, t]`` is the cheapest way for items ``i..`` to supply at least
    ``t`` more units.  Reconstruction mirrors the knapsack solver: stop when
    nothing is needed and nothing cheaper remains, otherwise take the lowest
    id that stays on an optimal path.
    """
    items = sorted(instance.items, key=lambda it: it.id)
    n, b = len(items), instance.threshold
    if n * (b + 1) > cell_cap:
        raise SolverLimitError(f"cover DP needs {n * (b + 1)} cells, cap is {cell_cap}")
    need = np.arange(b + 1)
    cost = np.full((n + 1, b + 1), _INF, dtype=np.int64)
    cost[n, 0] = 0
    for i in range(n - 1, -1, -1):
        nxt = cost[i + 1]
        rest = nxt[np.maximum(need - items[i].amount, 0)]
        take = np.where(rest >= _INF, _INF, rest + items[i].cost)
        cost[i] = np.minimum(nxt, take)
    if cost[0, b] >= _INF:
        return infeasible()

    chosen = []
    target, t, start = int(cost[0, b]), b, 0
    while not (t == 0 and target == 0):
        for j in range(start, n):
            it = items[j]
            t2 = max(t - it.amount, 0)
            if cost[j + 1, t2] < _INF and it.cost + cost[j + 1, t2] == target:
                chosen.append(it.id)
                target -= it.cost
                t = t2
                start = j + 1
                break
        else:  # pragma: no cover - the table guarantees a witness
            raise AssertionError("cover reconstruction lost its witness")
    return _selection(instance, chosen, OPTIMAL)


def mincover_bruteforce(instance: CoverInstance, max_items: int = BRUTEFORCE_MAX_ITEMS):
    """Enumerate all 2^n subsets; same tie-break as :func:`mincover_exact`."""
    items = sorted(instance.items, key=lambda it: it.id)
    n = len(items)
    if n > max_items:
        raise SolverLimitError(f"brute force handles at most {max_items} items, got {n}")
    amounts = subset_sums(it.amount for it in items)
    costs = subset_sums(it.cost for it in items)
    masks = np.arange(1 << n, dtype=np.int64)
    feasible = amounts >= instance.threshold
    if not feasible.any():
        return infeasible()
    low = costs[feasible].min()
    winner = lex_min_mask(masks[feasible & (costs == low)])
    return _selection(instance, mask_members(winner, [it.id for it in items]), OPTIMAL)


def mincover_solve(instance: CoverInstance, mode: str = "exact"):
    try:
        solver = {"greedy": mincover_greedy, "exact": mincover_exact,
                  "bruteforce": mincover_bruteforce}[mode]
    except KeyError:
        raise ValueError(f"unknown mode {mode!r}") from None
    return solver(instance)
