"""Knapsack-family solvers, each with a greedy, an exact and a brute-force mode."""

from .cover import mincover_bruteforce, mincover_exact, mincover_greedy, mincover_solve
from .instances import (
    GREEDY,
    INFEASIBLE,
    OPTIMAL,
    CoverInstance,
    CoverItem,
    Item,
    KnapsackInstance,
    MckpInstance,
    Selection,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    selection_to_csv,
    selection_to_dict,
    selection_to_text,
)
from .knapsack import knapsack_bruteforce, knapsack_exact, knapsack_greedy, solve_knapsack
from .mckp import mckp_bruteforce, mckp_exact, mckp_greedy, mckp_solve

MODES = ("greedy", "exact", "bruteforce")


def solve(instance, mode: str = "exact") -> Selection:
    """Dispatch on the instance type."""
    if isinstance(instance, MckpInstance):
        return mckp_solve(instance, mode)
    if isinstance(instance, CoverInstance):
        return mincover_solve(instance, mode)
    return solve_knapsack(instance, mode)


__all__ = [
    "CoverInstance", "CoverItem", "GREEDY", "INFEASIBLE", "Item", "KnapsackInstance",
    "MODES", "MckpInstance", "OPTIMAL", "Selection", "instance_from_dict",
    "instance_to_dict", "knapsack_bruteforce", "knapsack_exact", "knapsack_greedy",
    "load_instance", "mckp_bruteforce", "mckp_exact", "mckp_greedy", "mckp_solve",
    "mincover_bruteforce", "mincover_exact", "mincover_greedy", "mincover_solve",
    "selection_to_csv", "selection_to_dict", "selection_to_text", "solve", "solve_knapsack",
]
