"""The eleven acceptance criteria, one test each, each under its time budget.

Every test prints ``criterion N: PASS|FAIL`` with its runtime; the lines are
also collected and repeated in the terminal summary (see conftest.py).
"""

from __future__ import annotations

import itertools
import math
import random
import time
from contextlib import contextmanager

import numpy as np

import oracles
from morphcast.aggregate import (
    compress_superstructure,
    extend_kernel,
    substructure,
    superstructure,
    table3_candidates,
    table4_candidates,
)
from morphcast.catalog import builtin_catalog
from morphcast.cluster import agglomerate, partition_after, rand_index
from morphcast.diff import diff_generations
from morphcast.forecast import (
    Forecast,
    apply_operations,
    compute_forecast,
    dominates,
    expert_forecast,
    knapsack_instance,
    mckp_instance,
    pareto_front,
)
from morphcast.ledger import report_ledger
from morphcast.model import builtin_generations, outline
from morphcast.rank import Verdict, dominance, dominance_inversions, rank_operations
from morphcast.reference import (
    PUBLISHED_BAR,
    PUBLISHED_BAR_PROFIT,
    PUBLISHED_HAT,
    PUBLISHED_HAT_PROFIT,
    PUBLISHED_OMEGA,
    PUBLISHED_SUBSTRUCTURE,
    PUBLISHED_SUPERSTRUCTURE,
    PUBLISHED_THETA_I_PROFIT,
    PUBLISHED_THETA_II_COST,
    TABLE3,
    TABLE4,
    published_forecasts,
)
from morphcast.solve import (
    CoverInstance,
    CoverItem,
    Item,
    KnapsackInstance,
    MckpInstance,
    knapsack_exact,
    solve,
)
from test_catalog import RESOURCES, TABLE2
from test_forecast import FIG8, FIG9, _freeze

RESULTS: dict[int, str] = {}


@contextmanager
def criterion(number, title, limit):
    start = time.perf_counter()
    verdict = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"
        verdict = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        line = f"criterion {number:>2}: {verdict} ({elapsed:.2f}s < {limit}s)  {title}"
        RESULTS[number] = line
        print("\n" + line)


# --- literal fixtures -----------------------------------------------------------------

GENERATIONS = {
    "S1": {"A": {"A1"}, "B": {"B1"}, "C": {"G": {"G1"}, "H": {"H1"}},
           "D": {"D1"}, "E": {"E1"}, "F": {"F1"}},
    "S2": {"A": {"A1"}, "B": {"B1"}, "I": {"I1"}, "C": {"G": {"G1"}, "H": {"H1"}},
           "D": {"D1"}, "E": {"E1"}, "K": {"K1"}, "F": {"F1"}, "L": {"L1"}},
    "S3": {"A'": {"M": {"M1"}, "N": {"N1"}}, "B": {"B2"}, "I": {"I1"},
           "C'": {"G": {"G1"}, "H": {"H1"}, "Q": {"Q1"}, "P": {"P1"}},
           "D": {"D2"}, "E": {"E2"}, "K": {"K1"}, "F'": {"R": {"R1"}, "T": {"T1"}}, "L": {"L1"}},
    "S4": {"A'": {"M": {"M1"}, "N": {"N1"}}, "B": {"B1", "B2"}, "I": {"I1"},
           "C''": {"G": {"G1"}, "H": {"H1"}, "Q": {"Q1"}, "V": {"V1", "V2"}},
           "D": {"D2"}, "E": {"E3"}, "K": {"K1"}, "F''": {"U": {"U1", "U2"}},
           "L": {"L1"}, "W": {"W1"}},
}

TABLE1 = {
    ("S1", "S2"): {"O7": 3},
    ("S2", "S3"): {"O1": 3, "O5": 6},
    ("S3", "S4"): {"O3": 1, "O1": 1, "O7": 1, "O5": 2},
}
TABLE1_ROWS = {
    ("S1", "S2"): {(("I",), "O7"), (("K",), "O7"), (("L",), "O7")},
    ("S2", "S3"): {(("B",), "O1"), (("D",), "O1"), (("E",), "O1"),
                   (("C", "Q"), "O5"), (("C", "P"), "O5"), (("A", "M"), "O5"),
                   (("A", "N"), "O5"), (("F", "R"), "O5"), (("F", "T"), "O5")},
    ("S3", "S4"): {(("B",), "O3"), (("E",), "O1"), (("W",), "O7"),
                   (("C", "V"), "O5"), (("F", "U"), "O5")},
}


# --- 1 ----------------------------------------------------------------------------------


def test_criterion_01_fixture_fidelity():
    with criterion(1, "fixture fidelity (generations, Table 2)", 1.0):
        gens = {s.id: s for s in builtin_generations()}
        assert list(gens) == ["S1", "S2", "S3", "S4"]
        for gid, expected in GENERATIONS.items():
            assert outline(gens[gid]) == _freeze(expected), gid
        cat = builtin_catalog()
        assert len(cat) == 17
        matrix = cat.estimates_matrix()
        assert matrix.size == 136
        assert np.array_equal(matrix, np.array([row[:8] for row in TABLE2]))
        assert [op.priority for op in cat] == [row[8] for row in TABLE2]
        assert [op.resource for op in cat] == RESOURCES


# --- 2 ----------------------------------------------------------------------------------


def test_criterion_02_diff_regression():
    with criterion(2, "diff regression against Table 1", 1.0):
        gens = {s.id: s for s in builtin_generations()}
        for (a, b), counts in TABLE1.items():
            recs = diff_generations(gens[a], gens[b])
            coded = [r for r in recs if r.type_code]
            got = {}
            for r in coded:
                got[r.type_code] = got.get(r.type_code, 0) + 1
            assert got == counts, (a, b, got)
            assert {(r.path, r.type_code) for r in coded} == TABLE1_ROWS[(a, b)]


# --- 3 ----------------------------------------------------------------------------------


def _random_knapsack(rng):
    n = rng.randint(1, 15)
    rows = [(i, rng.randint(-3, 20), rng.randint(1, 12)) for i in range(1, n + 1)]
    return rows, rng.randint(0, 6 * n)


def _random_mckp(rng):
    total = rng.randint(1, 15)
    sizes = []
    while total > 0:
        k = rng.randint(1, min(4, total))
        sizes.append(k)
        total -= k
    ids = iter(range(1, 16))
    groups = [[(next(ids), rng.randint(0, 20), rng.randint(1, 12)) for _ in range(k)] for k in sizes]
    return groups, rng.randint(0, 8 * len(groups)), rng.random() < 0.5


def _random_cover(rng):
    n = rng.randint(1, 15)
    rows = [(i, rng.randint(0, 10), rng.randint(1, 12)) for i in range(1, n + 1)]
    return rows, rng.randint(0, 7 * n)


def test_criterion_03_oracle_equivalence():
    with criterion(3, "exact = brute force on 500 random instances", 30.0):
        rng = random.Random(20101)
        for k in range(500):
            kind = k % 3
            if kind == 0:
                rows, b = _random_knapsack(rng)
                sel = solve(KnapsackInstance([Item(*r) for r in rows], b), "exact")
                assert (sel.value, sel.chosen) == oracles.knapsack(rows, b), (rows, b)
            elif kind == 1:
                groups, b, skip = _random_mckp(rng)
                inst = MckpInstance([[Item(*r) for r in g] for g in groups], b, skip)
                sel = solve(inst, "exact")
                expected = oracles.mckp(groups, b, skip)
                if expected is None:
                    assert not sel.feasible
                else:
                    assert sel.feasible and (sel.value, sel.chosen) == expected, (groups, b)
            else:
                rows, t = _random_cover(rng)
                sel = solve(CoverInstance([CoverItem(*r) for r in rows], t), "exact")
                expected = oracles.cover(rows, t)
                if expected is None:
                    assert not sel.feasible
                else:
                    assert sel.feasible and (sel.value, sel.chosen) == expected, (rows, t)


# --- 4 ----------------------------------------------------------------------------------


def _desk_bruteforce(profits, weights, ids):
    """Every subset of the 17 operations at once, vectorized over 2^17 masks."""
    n = len(ids)
    masks = np.arange(1 << n, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n)) & 1
    return masks, bits @ np.array(profits), bits @ np.array(weights)


def _lex_smallest(masks, ids):
    tuples = [tuple(ids[j] for j in range(len(ids)) if m >> j & 1) for m in masks]
    return min(tuples)


def test_criterion_04_knapsack_desk_scale():
    with criterion(4, "knapsack: DP = 2^17 brute force for b = 0..30", 10.0):
        cat = builtin_catalog()
        ids = list(cat.ids())
        masks, profit, weight = _desk_bruteforce(
            [cat.profit(i) for i in ids], [cat.resource(i) for i in ids], ids)
        for b in range(31):
            feasible = weight <= b
            best = profit[feasible].max()
            tied = masks[feasible & (profit == best)]
            sel = knapsack_exact(knapsack_instance(cat, b))
            assert sel.value == best, b
            assert sel.chosen == _lex_smallest(tied, ids), b
        f16 = compute_forecast(cat, "knapsack", 16)
        assert f16.profit >= 19
        witness = expert_forecast([1, 2, 3, 4, 5, 9, 12], cat)
        assert witness.totals == (19, 16)
        assert expert_forecast(PUBLISHED_HAT, cat).profit == PUBLISHED_HAT_PROFIT == 16
        entry = {e.key: e for e in report_ledger()}["knapsack"]
        assert "profit 16" in entry.published and f"profit {f16.profit}" in entry.derived


# --- 5 ----------------------------------------------------------------------------------


def test_criterion_05_mckp_desk_scale():
    with criterion(5, "MCKP: 90 cluster combinations at b=17", 1.0):
        cat = builtin_catalog()
        clusters = [sorted(c) for c in PUBLISHED_OMEGA.clusters]
        combos = list(itertools.product(*clusters))
        assert len(combos) == 90
        best = None
        for pick in combos:
            ids = tuple(sorted(pick))
            if sum(cat.resource(i) for i in ids) > 17:
                continue
            key = (-sum(cat.profit(i) for i in ids), ids)
            best = key if best is None or key < best else best
        assert best == (-16, (1, 2, 4, 5, 7, 9, 11, 15))
        sel = solve(mckp_instance(cat, PUBLISHED_OMEGA, 17), "exact")
        assert (sel.value, sel.chosen) == (16, best[1])
        assert expert_forecast(PUBLISHED_BAR, cat).profit == PUBLISHED_BAR_PROFIT == 14
        entry = {e.key: e for e in report_ledger()}["mckp"]
        assert "profit 14" in entry.published and "profit 16" in entry.derived


# --- 6 ----------------------------------------------------------------------------------


def test_criterion_06_structure_application():
    with criterion(6, "Fig 8 and Fig 9 reproduced from the published sets", 1.0):
        cat = builtin_catalog()
        s3 = {s.id: s for s in builtin_generations()}["S3"]
        fig8 = apply_operations(s3, expert_forecast(PUBLISHED_HAT, cat, "Φ̂"), cat)
        fig9 = apply_operations(s3, expert_forecast(PUBLISHED_BAR, cat, "Φ̄"), cat)
        assert outline(fig8) == _freeze(FIG8)
        assert outline(fig9) == _freeze(FIG9)


# --- 7 ----------------------------------------------------------------------------------


def test_criterion_07_set_algebra():
    with criterion(7, "superstructure and substructure of the three forecasts", 1.0):
        trio = published_forecasts()
        assert superstructure(trio) == PUBLISHED_SUPERSTRUCTURE == frozenset(range(1, 18)) - {12}
        assert substructure(trio) == {2, 5, 7, 9}
        entry = {e.key: e for e in report_ledger()}["substructure"]
        assert "Φ6" in entry.published and substructure(trio) != PUBLISHED_SUBSTRUCTURE


# --- 8 ----------------------------------------------------------------------------------


def test_criterion_08_aggregation_optimality():
    with criterion(8, "strategy I / II optimal on Tables 3 and 4", 1.0):
        add = extend_kernel(PUBLISHED_SUBSTRUCTURE, table3_candidates(), 8)
        assert (add.objective, add.decided) == (8, {3, 10, 15})
        assert oracles.knapsack([(i, 4 - r, w) for i, r, w in TABLE3], 8) == (8, (3, 10, 15))
        assert add.objective >= PUBLISHED_THETA_I_PROFIT
        drop = compress_superstructure(PUBLISHED_SUPERSTRUCTURE, table4_candidates(), 8)
        assert (drop.objective, drop.decided) == (2, {7, 13, 17})
        assert oracles.cover([(i, 4 - r, w) for i, r, w in TABLE4], 8) == (2, (7, 13, 17))
        assert drop.objective <= PUBLISHED_THETA_II_COST


# --- 9 ----------------------------------------------------------------------------------


def test_criterion_09_ranking_consistency():
    with criterion(9, "dominance never inverts priority (136 pairs)", 1.0):
        cat = builtin_catalog()
        pairs = list(itertools.combinations(cat.ids(), 2))
        assert len(pairs) == 136
        fixture = rank_operations(cat, "fixture")
        peeled = rank_operations(cat, "peeling")
        for layers in (fixture, peeled):
            for a, b in pairs:
                v = dominance(cat.estimates(a), cat.estimates(b))
                if v is Verdict.DOMINATES:
                    assert layers.priority(a) <= layers.priority(b)
                elif v is Verdict.DOMINATED:
                    assert layers.priority(b) <= layers.priority(a)
            assert dominance_inversions(cat, layers) == []
        assert dominance(cat.estimates(8), cat.estimates(7)) is Verdict.DOMINATES
        assert (cat.get(8).priority, cat.get(7).priority) == (2, 4)


# --- 10 ---------------------------------------------------------------------------------


def test_criterion_10_clustering_structure():
    with criterion(10, "16 merges, 8 clusters after 9 steps, Rand index reported", 1.0):
        d = agglomerate(builtin_catalog())
        assert len(d.merges) == 16
        part = partition_after(d, 9)
        assert len(part) == 8
        ri = rand_index(part, PUBLISHED_OMEGA)
        assert 0.0 <= ri <= 1.0
        print(f"\nRand index vs published partition (L1, single linkage): {ri:.4f}")


# --- 11 ---------------------------------------------------------------------------------


def test_criterion_11_pareto():
    with criterion(11, "Pareto front on 200 random lists and the built-in trio", 5.0):
        rng = random.Random(4242)
        for _ in range(200):
            pts = [(rng.randint(0, 30), rng.randint(0, 40)) for _ in range(rng.randint(0, 15))]
            fs = [Forecast(str(k), str(k), frozenset(), "expert", p, r)
                  for k, (p, r) in enumerate(pts)]
            front = pareto_front(fs)
            kept = {f.id for f in front}
            assert all(not any(dominates(g, f) for g in fs) for f in front)
            assert all(any(dominates(g, f) for g in front) for f in fs if f.id not in kept)
            assert kept == {str(k) for k in range(len(pts))} - {str(k) for k in oracles.dominated(pts)}
        expert, hat, bar = published_forecasts()
        front = pareto_front([expert, hat, bar])
        assert expert in front and hat in front and bar not in front
        assert not math.isclose(bar.profit, 18)
        entry = {e.key: e for e in report_ledger()}["pareto"]
        assert "dominated" in entry.derived and entry.published == "Pareto-efficient"
