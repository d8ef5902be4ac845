"""Depth-first subset search engines shared by the solver and the exact oracles.

All engines walk elements in ascending id order and rely on downward closure
of the feasible-set family: once a partial set is infeasible or over budget,
no superset can recover, so the whole branch is pruned.
"""

from __future__ import annotations

from typing import Iterator, Mapping

from .core import BCInstance, CapExceededError


def max_profit_solution_ids(instance: BCInstance) -> frozenset[int]:
    """Exact maximum-profit feasible set within the budget.

    Branch and bound: include/exclude per element with suffix-profit bounds.
    Ties keep the first optimum found in ascending-id, include-first order.
    """
    ids = instance.sorted_ids()
    n = len(ids)
    costs = [instance.cost_of[i] for i in ids]
    profits = [instance.profit_of[i] for i in ids]
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + profits[i]
    cursor = instance.constraint.cursor()
    budget = instance.budget
    best_ids: list[int] = []
    best_profit = -1
    chosen: list[int] = []

    def walk(idx: int, cost: int, profit: int) -> None:
        nonlocal best_profit, best_ids
        if profit > best_profit:
            best_profit = profit
            best_ids = list(chosen)
        if idx == n or profit + suffix[idx] <= best_profit:
            return
        eid = ids[idx]
        if cost + costs[idx] <= budget and cursor.try_push(eid):
            chosen.append(eid)
            walk(idx + 1, cost + costs[idx], profit + profits[idx])
            chosen.pop()
            cursor.pop()
        walk(idx + 1, cost, profit)

    walk(0, 0, 0)
    return frozenset(best_ids)


def max_weight_feasible_ids(instance: BCInstance, weight: Mapping[int, int]) -> frozenset[int]:
    """Exact maximum-weight feasible set, ignoring the budget.

    Only strictly positive weights can help (the family is downward closed),
    so the search is confined to them.  Weights are integers; rational
    multipliers are cleared to a common denominator by the caller.
    """
    ids = sorted((i for i in instance.cost_of if weight[i] > 0),
                 key=lambda i: (-weight[i], i))
    n = len(ids)
    weights = [weight[i] for i in ids]
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + weights[i]
    cursor = instance.constraint.cursor()
    best_ids: list[int] = []
    best_weight = 0
    chosen: list[int] = []

    def walk(idx: int, acc: int) -> None:
        nonlocal best_weight, best_ids
        if acc > best_weight:
            best_weight = acc
            best_ids = list(chosen)
        if idx == n or acc + suffix[idx] <= best_weight:
            return
        eid = ids[idx]
        if cursor.try_push(eid):
            chosen.append(eid)
            walk(idx + 1, acc + weights[idx])
            chosen.pop()
            cursor.pop()
        walk(idx + 1, acc)

    walk(0, 0)
    return frozenset(best_ids)


def feasible_subsets_within_budget(
    instance: BCInstance,
    pool: list[int],
    max_size: int,
    cap: int | None = None,
) -> list[tuple[int, ...]]:
    """All feasible, budget-respecting subsets of ``pool`` up to ``max_size``.

    Returned sorted by (size, ids) so callers can process candidates in
    canonical size-then-lexicographic order.  Raises CapExceededError when
    more than ``cap`` subsets would be collected.
    """
    pool = sorted(pool)
    n = len(pool)
    costs = [instance.cost_of[i] for i in pool]
    cursor = instance.constraint.cursor()
    budget = instance.budget
    out: list[tuple[int, ...]] = [()]
    chosen: list[int] = []

    def walk(idx: int, cost: int) -> None:
        if len(chosen) == max_size:
            return
        for j in range(idx, n):
            nc = cost + costs[j]
            if nc > budget or not cursor.try_push(pool[j]):
                continue
            chosen.append(pool[j])
            out.append(tuple(chosen))
            if cap is not None and len(out) > cap:
                raise CapExceededError(
                    f"subset enumeration exceeded the configured cap of {cap}")
            walk(j + 1, nc)
            chosen.pop()
            cursor.pop()

    if max_size > 0:
        walk(0, 0)
    out.sort(key=lambda t: (len(t), t))
    return out


def iter_feasible_sets(instance: BCInstance, max_size: int | None = None) -> Iterator[frozenset[int]]:
    """Yield every feasible set (budget ignored), smallest-id-first DFS order."""
    ids = instance.sorted_ids()
    n = len(ids)
    limit = n if max_size is None else min(max_size, n)
    cursor = instance.constraint.cursor()
    chosen: list[int] = []

    def walk(idx: int) -> Iterator[frozenset[int]]:
        yield frozenset(chosen)
        if len(chosen) == limit:
            return
        for j in range(idx, n):
            if cursor.try_push(ids[j]):
                chosen.append(ids[j])
                yield from walk(j + 1)
                chosen.pop()
                cursor.pop()

    yield from walk(0)
