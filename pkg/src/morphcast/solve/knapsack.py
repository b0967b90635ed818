"""0/1 knapsack: ratio greedy, exact dynamic program, brute-force oracle.

Among optimal selections, every exact mode returns the one whose sorted id
tuple is lexicographically smallest.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..errors import SolverLimitError
from ._masks import lex_min_mask, mask_members, subset_sums
from .instances import (
    DEFAULT_CELL_CAP,
    GREEDY,
    OPTIMAL,
    KnapsackInstance,
    make_selection,
)

BRUTEFORCE_MAX_ITEMS = 24
PRECEDENCE_MAX_ITEMS = 40


def _selection(instance, chosen, status):
    by_id = {it.id: it for it in instance.items}
    return make_selection(by_id, chosen, status, "profit", "weight")


def _predecessors(instance):
    preds = {}
    for pred, succ in instance.precedence:
        preds.setdefault(succ, set()).add(pred)
    return preds


def knapsack_greedy(instance: KnapsackInstance):
    """Scan items by decreasing profit/weight (ties: lower id) and take each
    one that still fits.

    With precedence pairs, an item is only taken once all its predecessors
    are in; scans repeat until nothing more can be added.
    """
    order = sorted(instance.items, key=lambda it: (-Fraction(it.profit, it.weight), it.id))
    preds = _predecessors(instance)
    chosen: list = []
    taken = set()
    room = instance.budget
    changed = True
    while changed:
        changed = False
        for it in order:
            if it.id in taken or it.weight > room:
                continue
            if not preds.get(it.id, set()) <= taken:
                continue
            chosen.append(it.id)
            taken.add(it.id)
            room -= it.weight
            changed = bool(preds)
    return _selection(instance, chosen, GREEDY)


def knapsack_exact(instance: KnapsackInstance, cell_cap: int = DEFAULT_CELL_CAP):
    """Optimal selection by dynamic programming over (item suffix, capacity).

    The table ``best[i, w]`` holds the best profit from items ``i..`` with
    capacity ``w``; the lexicographically smallest optimum is then read off
    by taking, at each step, the lowest-id item that keeps the remaining
    target reachable, and stopping as soon as the remaining target is zero.

    Raises
    ------
    SolverLimitError
        If ``n * (budget + 1)`` exceeds ``cell_cap``.
    """
    if instance.precedence:
        return _knapsack_precedence_search(instance)
    items = sorted(instance.items, key=lambda it: it.id)
    n, b = len(items), instance.budget
    if n * (b + 1) > cell_cap:
        raise SolverLimitError(f"knapsack DP needs {n * (b + 1)} cells, cap is {cell_cap}")
    best = np.zeros((n + 1, b + 1), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        nxt = best[i + 1]
        row = nxt.copy()
        a, c = items[i].weight, items[i].profit
        if a <= b:
            np.maximum(row[a:], nxt[: b + 1 - a] + c, out=row[a:])
        best[i] = row

    chosen = []
    target, room, start = int(best[0, b]), b, 0
    while target != 0:
        for j in range(start, n):
            a, c = items[j].weight, items[j].profit
            if a <= room and c + best[j + 1, room - a] == target:
                chosen.append(items[j].id)
                target -= c
                room -= a
                start = j + 1
                break
        else:  # pragma: no cover - the table guarantees a witness
            raise AssertionError("knapsack reconstruction lost its witness")
    return _selection(instance, chosen, OPTIMAL)


def _knapsack_precedence_search(instance):
    items = sorted(instance.items, key=lambda it: it.id)
    n = len(items)
    if n > PRECEDENCE_MAX_ITEMS:
        raise SolverLimitError(
            f"precedence-constrained search handles at most {PRECEDENCE_MAX_ITEMS} items"
        )
    preds = _predecessors(instance)
    pos_tail = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        pos_tail[i] = pos_tail[i + 1] + max(items[i].profit, 0)
    best_key = [None]

    def closed(ids):
        s = set(ids)
        return all(preds.get(i, set()) <= s for i in s)

    def visit(i, room, value, chosen):
        if best_key[0] is not None and value + pos_tail[i] < -best_key[0][0]:
            return
        if i == n:
            if closed(chosen):
                key = (-value, tuple(chosen))
                if best_key[0] is None or key < best_key[0]:
                    best_key[0] = key
            return
        it = items[i]
        if it.weight <= room:
            chosen.append(it.id)
            visit(i + 1, room - it.weight, value + it.profit, chosen)
            chosen.pop()
        visit(i + 1, room, value, chosen)

    visit(0, instance.budget, 0, [])
    return _selection(instance, best_key[0][1], OPTIMAL)


def knapsack_bruteforce(instance: KnapsackInstance, max_items: int = BRUTEFORCE_MAX_ITEMS):
    """Enumerate all 2^n subsets; same tie-break as :func:`knapsack_exact`."""
    items = sorted(instance.items, key=lambda it: it.id)
    n = len(items)
    if n > max_items:
        raise SolverLimitError(f"brute force handles at most {max_items} items, got {n}")
    weights = subset_sums(it.weight for it in items)
    profits = subset_sums(it.profit for it in items)
    masks = np.arange(1 << n, dtype=np.int64)
    feasible = weights <= instance.budget
    index = {it.id: k for k, it in enumerate(items)}
    for pred, succ in instance.precedence:
        feasible &= ~((masks >> index[succ] & 1 == 1) & (masks >> index[pred] & 1 == 0))
    top = profits[feasible].max()
    winner = lex_min_mask(masks[feasible & (profits == top)])
    ids = [it.id for it in items]
    return _selection(instance, mask_members(winner, ids), OPTIMAL)


def solve_knapsack(instance: KnapsackInstance, mode: str = "exact"):
    try:
        solver = {"greedy": knapsack_greedy, "exact": knapsack_exact,
                  "bruteforce": knapsack_bruteforce}[mode]
    except KeyError:
        raise ValueError(f"unknown mode {mode!r}") from None
    return solver(instance)
