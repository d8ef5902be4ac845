"""Constraint types: graph matchings and two-matroid intersections.

Both feasible-set families are downward closed, which the solver relies on
for pruning.  Residual constraints fix a feasible skeleton F and describe
what may still be added next to it.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .core import BCError, InfeasibleSetError, UnknownElementError
from .matroids import LambdaMatroid, MatroidOracle


class Constraint:
    """Common interface of the two constraint kinds."""

    def element_ids(self) -> frozenset[int]:
        raise NotImplementedError

    def is_feasible(self, subset: Iterable[int]) -> bool:
        raise NotImplementedError

    def validate(self, element_ids: set[int]) -> list[str]:
        """Structural problems relative to an instance's element ids."""
        raise NotImplementedError

    def restrict(self, keep: Iterable[int]) -> "Constraint":
        """The same constraint on the sub-ground-set ``keep``."""
        raise NotImplementedError

    def cursor(self) -> "FeasibilityCursor":
        raise NotImplementedError


class Matching(Constraint):
    """Elements are edges of a graph; feasible sets are vertex-disjoint edge sets."""

    def __init__(self, vertex_count: int, edges: Mapping[int, tuple[int, int]]):
        if vertex_count < 0:
            raise BCError("vertex_count must be non-negative")
        self.vertex_count = vertex_count
        self.edges = {int(eid): (int(u), int(v)) for eid, (u, v) in edges.items()}

    def element_ids(self) -> frozenset[int]:
        return frozenset(self.edges)

    def is_feasible(self, subset: Iterable[int]) -> bool:
        used: set[int] = set()
        for eid in subset:
            if eid not in self.edges:
                raise UnknownElementError(eid)
            u, v = self.edges[eid]
            if u in used or v in used or u == v:
                return False
            used.add(u)
            used.add(v)
        return True

    def validate(self, element_ids: set[int]) -> list[str]:
        problems = []
        for eid, (u, v) in sorted(self.edges.items()):
            if eid not in element_ids:
                problems.append(f"dangling id {eid}: constraint edge has no element")
            if u == v:
                problems.append(f"self-loop at edge {eid}")
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                problems.append(f"edge {eid} endpoint out of range")
        for eid in sorted(element_ids - set(self.edges)):
            problems.append(f"element {eid} has no edge in the matching constraint")
        return problems

    def restrict(self, keep: Iterable[int]) -> "Matching":
        keep = set(keep)
        return Matching(self.vertex_count, {e: uv for e, uv in self.edges.items() if e in keep})

    def cursor(self) -> "MatchingCursor":
        return MatchingCursor(self)


class MatroidIntersection(Constraint):
    """Feasible sets are the common independent sets of two matroid oracles."""

    def __init__(self, oracle1: MatroidOracle, oracle2: MatroidOracle):
        self.oracle1 = oracle1
        self.oracle2 = oracle2

    def element_ids(self) -> frozenset[int]:
        return self.oracle1.ground_ids | self.oracle2.ground_ids

    def is_feasible(self, subset: Iterable[int]) -> bool:
        s = frozenset(subset)
        return self.oracle1.is_independent(s) and self.oracle2.is_independent(s)

    def validate(self, element_ids: set[int]) -> list[str]:
        problems = []
        if self.oracle1.ground_ids != self.oracle2.ground_ids:
            problems.append("matroid oracles have different ground sets")
        for eid in sorted(self.element_ids() - element_ids):
            problems.append(f"dangling id {eid}: oracle ground id has no element")
        for eid in sorted(element_ids - (self.oracle1.ground_ids & self.oracle2.ground_ids)):
            problems.append(f"element {eid} missing from an oracle ground set")
        return problems

    def restrict(self, keep: Iterable[int]) -> "MatroidIntersection":
        keep = frozenset(keep)
        return MatroidIntersection(
            _restricted_oracle(self.oracle1, keep),
            _restricted_oracle(self.oracle2, keep),
        )

    def cursor(self) -> "IntersectionCursor":
        return IntersectionCursor(self)


def _restricted_oracle(base: MatroidOracle, keep: frozenset[int]) -> MatroidOracle:
    ground = base.ground_ids & keep
    return LambdaMatroid(ground, base.is_independent)


def _contracted_oracle(base: MatroidOracle, fixed: frozenset[int]) -> MatroidOracle:
    ground = base.ground_ids - fixed
    return LambdaMatroid(ground, lambda s: base.is_independent(s | fixed))


def is_feasible(constraint: Constraint, subset: Iterable[int]) -> bool:
    return constraint.is_feasible(subset)


def is_bounded_feasible(constraint: Constraint, subset: Iterable[int], q: int) -> bool:
    """Feasible and of cardinality at most q."""
    if q < 0:
        raise BCError("q must be non-negative")
    s = frozenset(subset)
    return len(s) <= q and constraint.is_feasible(s)


def residual_constraint(constraint: Constraint, fixed: Iterable[int]) -> Constraint:
    """The constraint left after committing to the feasible set ``fixed``.

    Feasible sets of the result are exactly the A disjoint from ``fixed``
    with A | fixed feasible in the original constraint.  For a matching this
    deletes the fixed edges and everything touching their endpoints; for an
    intersection each oracle is contracted by the fixed set.
    """
    fixed = frozenset(fixed)
    if not constraint.is_feasible(fixed):
        raise InfeasibleSetError(f"residual skeleton {sorted(fixed)} is not feasible")
    if isinstance(constraint, Matching):
        blocked = {v for eid in fixed for v in constraint.edges[eid]}
        surviving = {
            eid: uv
            for eid, uv in constraint.edges.items()
            if eid not in fixed and uv[0] not in blocked and uv[1] not in blocked
        }
        return Matching(constraint.vertex_count, surviving)
    if isinstance(constraint, MatroidIntersection):
        return MatroidIntersection(
            _contracted_oracle(constraint.oracle1, fixed),
            _contracted_oracle(constraint.oracle2, fixed),
        )
    raise BCError(f"unsupported constraint type {type(constraint).__name__}")


class FeasibilityCursor:
    """Incremental feasibility state for depth-first subset search.

    ``try_push`` adds an element iff the grown set stays feasible; ``pop``
    undoes the most recent successful push.
    """

    def try_push(self, eid: int) -> bool:
        raise NotImplementedError

    def pop(self) -> None:
        raise NotImplementedError


class MatchingCursor(FeasibilityCursor):
    def __init__(self, matching: Matching):
        self._edges = matching.edges
        self._used: set[int] = set()
        self._stack: list[tuple[int, int]] = []

    def try_push(self, eid: int) -> bool:
        u, v = self._edges[eid]
        if u == v or u in self._used or v in self._used:
            return False
        self._used.add(u)
        self._used.add(v)
        self._stack.append((u, v))
        return True

    def pop(self) -> None:
        u, v = self._stack.pop()
        self._used.discard(u)
        self._used.discard(v)


class IntersectionCursor(FeasibilityCursor):
    def __init__(self, intersection: MatroidIntersection):
        self._o1 = intersection.oracle1
        self._o2 = intersection.oracle2
        self._current: list[int] = []

    def try_push(self, eid: int) -> bool:
        grown = frozenset(self._current) | {eid}
        if not (self._o1.is_independent(grown) and self._o2.is_independent(grown)):
            return False
        self._current.append(eid)
        return True

    def pop(self) -> None:
        self._current.pop()
