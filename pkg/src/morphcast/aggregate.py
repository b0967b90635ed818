"""Aggregating preliminary forecasts into one.

Strategy I grows a kernel (operations the forecasts agree on) with additions
picked by a 0/1 knapsack.  Strategy II starts from the union of all forecasts
and removes a cheapest set of operations whose weights reach a threshold.
Candidate tables are input data: the costs and weights they carry are the
table's own, not the catalog's resource vector.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass

from . import reference
from .catalog import Catalog, builtin_catalog, op_name, parse_op_name, profit_from_priority
from .errors import FormatError, InfeasibleError, InvariantError
from .forecast import Forecast
from .solve import CoverInstance, CoverItem, Item, KnapsackInstance, solve

KERNEL_POLICIES = ("intersection", "majority")


def _op_set(f):
    return frozenset(f.operations) if isinstance(f, Forecast) else frozenset(f)


def _need_two(forecasts):
    sets = [_op_set(f) for f in forecasts]
    if len(sets) < 2:
        raise ValueError("aggregation needs at least two forecasts")
    return sets


def substructure(forecasts) -> frozenset[int]:
    """Operations present in every forecast."""
    sets = _need_two(forecasts)
    return frozenset.intersection(*sets)


def superstructure(forecasts) -> frozenset[int]:
    """Operations present in at least one forecast."""
    sets = _need_two(forecasts)
    return frozenset.union(*sets)


def kernel(forecasts, policy="intersection") -> frozenset[int]:
    """Kernel by policy: ``"intersection"``, ``"majority"`` (in at least
    ceil(k/2) of k forecasts) or an explicit iterable of ids."""
    if not isinstance(policy, str):
        return frozenset(parse_op_name(i) for i in policy)
    sets = _need_two(forecasts)
    if policy == "intersection":
        return frozenset.intersection(*sets)
    if policy == "majority":
        need = math.ceil(len(sets) / 2)
        counts = Counter(i for s in sets for i in s)
        return frozenset(i for i, n in counts.items() if n >= need)
    raise ValueError(f"unknown kernel policy {policy!r}; choose from {KERNEL_POLICIES}")


@dataclass(frozen=True)
class Candidate:
    """An operation offered for addition or deletion.

    ``weight`` is the table's cost estimate (the Υ1 column): a knapsack
    weight in strategy I and a cover amount in strategy II.
    """

    op_id: int
    priority: int
    weight: int

    def __post_init__(self):
        if self.weight < 1:
            raise InvariantError(f"candidate {op_name(self.op_id)}: weight must be >= 1")


def table3_candidates() -> list[Candidate]:
    return [Candidate(*row) for row in reference.TABLE3]


def table4_candidates() -> list[Candidate]:
    return [Candidate(*row) for row in reference.TABLE4]


@dataclass(frozen=True)
class AggregatedForecast(Forecast):
    """A forecast produced by strategy I or II.

    ``decision_vector`` holds one 0/1 entry per candidate, in candidate order;
    ``objective`` is the solver's value (profit added for I, cost of the
    deletions for II) and ``load`` its weight or amount.
    """

    strategy: str = "I"
    candidates: tuple[Candidate, ...] = ()
    decision_vector: tuple[int, ...] = ()
    objective: int = 0
    load: int = 0
    status: str = ""

    @property
    def decided(self) -> frozenset[int]:
        return frozenset(c.op_id for c, x in zip(self.candidates, self.decision_vector) if x)


def _check_unique(candidates):
    ids = [c.op_id for c in candidates]
    if len(set(ids)) != len(ids):
        raise InvariantError("candidate ids must be unique")


def _build(catalog, operations, strategy, candidates, chosen, sel):
    base = Forecast.from_catalog(
        catalog, operations, "aggregated",
        id=f"theta-{strategy.lower()}", label=f"Θ^{strategy}",
    )
    return AggregatedForecast(
        **base.__dict__,
        strategy=strategy,
        candidates=tuple(candidates),
        decision_vector=tuple(int(c.op_id in chosen) for c in candidates),
        objective=sel.value,
        load=sel.weight,
        status=sel.status,
    )


def addition_instance(candidates, budget: int, max_rank: int = 4) -> KnapsackInstance:
    """Knapsack over candidates: profit ``max_rank - priority``, weight from the table."""
    items = [Item(c.op_id, profit_from_priority(c.priority, max_rank), c.weight) for c in candidates]
    return KnapsackInstance(items, budget)


def deletion_instance(candidates, threshold: int, max_rank: int = 4) -> CoverInstance:
    """Cover over candidates: cost ``max_rank - priority``, amount from the table."""
    items = [CoverItem(c.op_id, profit_from_priority(c.priority, max_rank), c.weight)
             for c in candidates]
    return CoverInstance(items, threshold)


def extend_kernel(kernel_ids, candidates, budget: int, mode: str = "exact",
                  catalog: Catalog | None = None, max_rank: int = 4) -> AggregatedForecast:
    """Strategy I: kernel plus a knapsack-optimal subset of the candidates.

    Parameters
    ----------
    kernel_ids : iterable of int
        Operations kept unconditionally.
    candidates : sequence of Candidate
        Disjoint from the kernel.  Profit is ``max_rank - priority``, weight
        the candidate's ``weight``.
    budget : int
        Knapsack capacity.
    mode : str
        Solver mode (``greedy``, ``exact`` or ``bruteforce``).
    """
    catalog = builtin_catalog() if catalog is None else catalog
    kernel_ids = frozenset(kernel_ids)
    candidates = list(candidates)
    _check_unique(candidates)
    overlap = sorted(kernel_ids & {c.op_id for c in candidates})
    if overlap:
        raise InvariantError(
            "addition candidates overlap the kernel: " + ", ".join(op_name(i) for i in overlap)
        )
    sel = solve(addition_instance(candidates, budget, max_rank), mode)
    chosen = set(sel.chosen)
    return _build(catalog, kernel_ids | chosen, "I", candidates, chosen, sel)


def compress_superstructure(super_ids, candidates, threshold: int, mode: str = "exact",
                            catalog: Catalog | None = None, max_rank: int = 4) -> AggregatedForecast:
    """Strategy II: drop a min-cost candidate subset whose weights reach ``threshold``.

    Cost of deleting a candidate is ``max_rank - priority``, so low-value
    operations are cheap to drop.

    Raises
    ------
    InfeasibleError
        When the candidates' total weight is below ``threshold``.
    """
    catalog = builtin_catalog() if catalog is None else catalog
    super_ids = frozenset(super_ids)
    candidates = list(candidates)
    _check_unique(candidates)
    stray = sorted({c.op_id for c in candidates} - super_ids)
    if stray:
        raise InvariantError(
            "deletion candidates outside the superstructure: " + ", ".join(op_name(i) for i in stray)
        )
    total = sum(c.weight for c in candidates)
    if total < threshold:
        raise InfeasibleError(f"candidate weights sum to {total}, below the threshold {threshold}")
    sel = solve(deletion_instance(candidates, threshold, max_rank), mode)
    if not sel.feasible:  # pragma: no cover - guarded by the total check above
        raise InfeasibleError("no deletion set reaches the threshold")
    chosen = set(sel.chosen)
    return _build(catalog, super_ids - chosen, "II", candidates, chosen, sel)


def suggest_candidates(forecasts, kernel_ids, catalog: Catalog | None = None) -> list[Candidate]:
    """Starting point for a candidate table: superstructure minus kernel,
    with the catalog priority and the first criterion estimate as weight."""
    catalog = builtin_catalog() if catalog is None else catalog
    pool = sorted(superstructure(forecasts) - frozenset(kernel_ids))
    return [Candidate(i, catalog.get(i).priority, catalog.estimates(i)[0]) for i in pool]


# --- candidate tables ---------------------------------------------------------

CANDIDATE_COLUMNS = ("id", "priority", "weight")


def load_candidates_csv(text: str) -> list[Candidate]:
    """Read an ``id,priority,weight`` table; ids may be written ``Φ7`` or ``7``."""
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if any(cell.strip() for cell in r)]
    if not rows:
        raise FormatError("candidate table is empty")
    header = tuple(cell.strip().lower() for cell in rows[0])
    if header != CANDIDATE_COLUMNS:
        raise FormatError(f"candidate table header must be {','.join(CANDIDATE_COLUMNS)}", line=1)
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 3:
            raise FormatError(f"expected 3 columns, got {len(row)}", line=lineno)
        try:
            out.append(Candidate(parse_op_name(row[0]), int(row[1]), int(row[2])))
        except ValueError as exc:
            raise FormatError(str(exc), line=lineno) from None
    return out


def candidates_to_csv(candidates) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CANDIDATE_COLUMNS)
    for c in candidates:
        w.writerow([op_name(c.op_id), c.priority, c.weight])
    return buf.getvalue()


def aggregated_to_text(result: AggregatedForecast) -> str:
    verb = "added" if result.strategy == "I" else "deleted"
    vector = "(" + ", ".join(f"x{k}={x}" for k, x in enumerate(result.decision_vector, 1)) + ")"
    what = "profit" if result.strategy == "I" else "cost"
    lines = [
        f"{result.label} (strategy {result.strategy})",
        f"candidates: {', '.join(op_name(c.op_id) for c in result.candidates)}",
        f"decision:   {vector}",
        f"{verb}: {{{', '.join(op_name(i) for i in sorted(result.decided))}}}  "
        f"{what}={result.objective} weight={result.load}",
        f"operations: {{{result.names()}}}",
        f"totals: profit={result.profit} resource={result.resource}",
    ]
    return "\n".join(lines) + "\n"
