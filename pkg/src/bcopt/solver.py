"""The approximation scheme: enumerate profitable skeletons, extend, keep the best.

``eptas`` enumerates the feasible subsets F of the representative set (up to
cardinality floor(1/eps)), solves the residual low-profit instance next to
each F, and returns the most profitable extended solution.  ``solve`` is the
public entry point: it runs ``eptas`` at eps/8, which turns the scheme's
(1 - 8 eps) guarantee into the advertised (1 - eps).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

from .core import BCInstance, Epsilon, InfeasibleSetError, Solution, is_solution, preprocess_discard
from .classes import small_profit_pool
from .constraints import residual_constraint
from .enumeration import feasible_subsets_within_budget
from .lagrange import LagrangeConfig, approx_opt, declared_gamma, non_profitable_solver
from .repset import rep_set

DEFAULT_SUBSET_CAP = 10**7


@dataclass(frozen=True)
class SolveConfig:
    alpha_mode: str = "lagrangian"
    subset_cap: int = DEFAULT_SUBSET_CAP
    branch_budget: int = 10**6
    swap_roles: bool = False
    threads: int = 1
    lagrange: LagrangeConfig = field(default_factory=LagrangeConfig)


@dataclass(frozen=True)
class ResidualInstance:
    """The low-profit subproblem next to a fixed skeleton F.

    Elements are the small-profit pool minus F, the constraint is the parent
    constraint with F committed, and the budget is what F left over.
    """

    parent: BCInstance
    skeleton: frozenset[int]
    instance: BCInstance

    @property
    def budget(self) -> int:
        return self.instance.budget


@dataclass
class SolveStats:
    """Run metadata surfaced through the CLI and the benchmark harness."""

    alpha: int = 0
    gamma: Fraction = Fraction(2)
    rep_size: int = 0
    enumerated: int = 0
    incumbent_profits: list[int] = field(default_factory=list)
    ms_total: float = 0.0


def residual_instance(instance: BCInstance, alpha: int, epsilon: Epsilon,
                      skeleton) -> ResidualInstance:
    """Residual instance of a skeleton F: small-profit pool, contracted constraint.

    F must be a solution of the parent instance, so the leftover budget is
    never negative.
    """
    skeleton = frozenset(skeleton)
    if not is_solution(instance, skeleton):
        raise InfeasibleSetError(f"skeleton {sorted(skeleton)} is not a solution")
    pool = small_profit_pool(instance, alpha, epsilon)
    return _build_residual(instance, pool, skeleton)


def eptas(instance: BCInstance, epsilon: Epsilon, config: SolveConfig | None = None) -> Solution:
    """Best extended solution over all profitable skeletons; profit within
    (1 - 8 eps) of the optimum."""
    return eptas_detailed(instance, epsilon, config)[0]


def solve(instance: BCInstance, epsilon: Epsilon, config: SolveConfig | None = None) -> Solution:
    """Public entry point: run the scheme at eps/8 for a (1 - eps) guarantee."""
    return solve_detailed(instance, epsilon, config)[0]


def solve_detailed(instance: BCInstance, epsilon: Epsilon,
                   config: SolveConfig | None = None) -> tuple[Solution, SolveStats]:
    return eptas_detailed(instance, epsilon.scaled_down(8), config)


def eptas_detailed(instance: BCInstance, epsilon: Epsilon,
                   config: SolveConfig | None = None) -> tuple[Solution, SolveStats]:
    config = config or SolveConfig()
    start = time.perf_counter()
    working = preprocess_discard(instance)
    stats = SolveStats(gamma=declared_gamma(config.alpha_mode))

    alpha = approx_opt(working, config.lagrange, mode=config.alpha_mode)
    rep = rep_set(
        working, epsilon, config.alpha_mode,
        lagrange_config=config.lagrange, swap_roles=config.swap_roles,
        branch_budget=config.branch_budget, threads=config.threads, alpha=alpha,
    )
    stats.alpha = alpha
    stats.rep_size = rep.size

    pool = small_profit_pool(working, alpha, epsilon)
    skeleton_cap = epsilon.inverse_floor()
    candidates = feasible_subsets_within_budget(
        working, sorted(rep.elements), skeleton_cap, cap=config.subset_cap,
    )
    stats.enumerated = len(candidates)

    best = Solution.empty()
    stats.incumbent_profits.append(best.total_profit)
    for skeleton_ids in candidates:
        skeleton = frozenset(skeleton_ids)
        residual = _build_residual(working, pool, skeleton)
        extension = non_profitable_solver(residual.instance, config.lagrange)
        combined_ids = skeleton | extension.id_set
        profit = working.total_profit(combined_ids)
        if profit > best.total_profit:
            best = Solution.build(working, combined_ids)
            stats.incumbent_profits.append(profit)

    # Re-validate against the original, unpreprocessed instance.
    final = Solution.build(instance, best.element_ids)
    stats.ms_total = (time.perf_counter() - start) * 1000.0
    return final, stats


def _build_residual(instance: BCInstance, pool: frozenset[int],
                    skeleton: frozenset[int]) -> ResidualInstance:
    remaining = pool - skeleton
    constraint = residual_constraint(instance.constraint, skeleton).restrict(remaining)
    # Edges incident to the skeleton are deleted by the residual matching, so
    # the element list shrinks with the constraint's ground; the dropped
    # elements could never extend the skeleton anyway.
    alive = remaining & constraint.element_ids()
    elements = tuple(e for e in instance.elements if e.id in alive)
    inner = BCInstance(elements, constraint, instance.budget - instance.total_cost(skeleton))
    return ResidualInstance(instance, skeleton, inner)
