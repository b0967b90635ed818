"""Multiple-choice knapsack: one item from every group within a budget."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from ..errors import SolverLimitError
from .instances import (
    DEFAULT_CELL_CAP,
    GREEDY,
    OPTIMAL,
    MckpInstance,
    infeasible,
    make_selection,
)

BRUTEFORCE_MAX_COMBINATIONS = 10**6
_NEG = np.iinfo(np.int64).min // 4


def _selection(instance, chosen, status):
    by_id = {it.id: it for g in instance.groups for it in g}
    return make_selection(by_id, chosen, status, "profit", "weight")


def _best_profit(groups, capacity, skippable):
    """Max profit with one item per group (or none, if skippable) and weight <= capacity."""
    if capacity < 0:
        return _NEG
    cur = np.zeros(capacity + 1, dtype=np.int64)
    for group in groups:
        new = cur.copy() if skippable else np.full(capacity + 1, _NEG, dtype=np.int64)
        for it in group:
            if it.weight <= capacity:
                shifted = cur[: capacity + 1 - it.weight] + it.profit
                shifted[cur[: capacity + 1 - it.weight] <= _NEG] = _NEG
                np.maximum(new[it.weight:], shifted, out=new[it.weight:])
        cur = new
    return int(cur[capacity])


def mckp_exact(instance: MckpInstance, cell_cap: int = DEFAULT_CELL_CAP):
    """Optimal selection by a group-by-group dynamic program.

    The lexicographically smallest optimum is built element by element: the
    next id is the smallest candidate ``x`` for which the other open groups,
    restricted to ids above ``x``, can still complete the optimal profit.
    """
    groups = instance.groups
    b = instance.budget
    cells = sum(len(g) for g in groups) * (b + 1)
    if cells > cell_cap:
        raise SolverLimitError(f"MCKP DP needs {cells} cells, cap is {cell_cap}")
    target = _best_profit(groups, b, instance.skippable)
    if target <= _NEG:
        return infeasible()

    open_groups = list(range(len(groups)))
    room = b
    last = None
    chosen = []
    while open_groups:
        if instance.skippable and target == 0:
            break
        candidates = sorted(
            ((it, g) for g in open_groups for it in groups[g] if last is None or it.id > last),
            key=lambda pair: pair[0].id,
        )
        for it, g in candidates:
            if it.weight > room:
                continue
            rest = [
                [o for o in groups[h] if o.id > it.id] for h in open_groups if h != g
            ]
            tail = _best_profit(rest, room - it.weight, instance.skippable)
            if tail > _NEG and it.profit + tail == target:
                chosen.append(it.id)
                target -= it.profit
                room -= it.weight
                last = it.id
                open_groups.remove(g)
                break
        else:  # pragma: no cover - the DP guarantees a witness
            raise AssertionError("MCKP reconstruction lost its witness")
    return _selection(instance, chosen, OPTIMAL)


def mckp_bruteforce(instance: MckpInstance, max_combinations: int = BRUTEFORCE_MAX_COMBINATIONS):
    """Enumerate every one-per-group combination; same tie-break as exact."""
    options = [list(g) + ([None] if instance.skippable else []) for g in instance.groups]
    count = math.prod(len(o) for o in options)
    if count > max_combinations:
        raise SolverLimitError(f"{count} combinations exceed the cap of {max_combinations}")
    best = None
    for combo in itertools.product(*options):
        picked = [it for it in combo if it is not None]
        if sum(it.weight for it in picked) > instance.budget:
            continue
        key = (-sum(it.profit for it in picked), tuple(sorted(it.id for it in picked)))
        if best is None or key < best:
            best = key
    if best is None:
        return infeasible()
    return _selection(instance, best[1], OPTIMAL)


def mckp_greedy(instance: MckpInstance):
    """Incremental upgrade heuristic.

    Start from the lightest item of each group (ties: higher profit, lower
    id), or from nothing in skippable mode.  Then repeatedly apply the
    profitable swap with the best extra-profit / extra-weight ratio that
    still fits; swaps that do not add weight go first.  Ties: lower group
    index, then lower id.
    """
    groups = instance.groups
    if instance.skippable:
        current = [None] * len(groups)
    else:
        current = [min(g, key=lambda it: (it.weight, -it.profit, it.id)) for g in groups]
    load = sum(it.weight for it in current if it is not None)
    if load > instance.budget:
        return infeasible()

    def p(it):
        return 0 if it is None else it.profit

    def w(it):
        return 0 if it is None else it.weight

    while True:
        best_key, best_move = None, None
        for gi, g in enumerate(groups):
            cur = current[gi]
            for it in g:
                dp = it.profit - p(cur)
                dw = it.weight - w(cur)
                if dp <= 0 or load + dw > instance.budget:
                    continue
                if dw <= 0:
                    key = (0, -dp, Fraction(0), gi, it.id)
                else:
                    key = (1, 0, -Fraction(dp, dw), gi, it.id)
                if best_key is None or key < best_key:
                    best_key, best_move = key, (gi, it)
        if best_move is None:
            break
        gi, it = best_move
        load += it.weight - w(current[gi])
        current[gi] = it
    chosen = [it.id for it in current if it is not None]
    return _selection(instance, chosen, GREEDY)


def mckp_solve(instance: MckpInstance, mode: str = "exact"):
    try:
        solver = {"greedy": mckp_greedy, "exact": mckp_exact, "bruteforce": mckp_bruteforce}[mode]
    except KeyError:
        raise ValueError(f"unknown mode {mode!r}") from None
    return solver(instance)
