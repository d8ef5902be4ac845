"""Profit classes: everything derived from epsilon and the optimum estimate.

Elements whose profit is large relative to the estimate ``alpha`` are binned
into geometric classes; two elements of the same class have profits within a
factor (1 - epsilon) of each other.  All interval boundaries are exact
fractions, so membership at a boundary is decided exactly.

The class-index range is parameterized by the estimator quality ``gamma``
(alpha is guaranteed to be within [OPT/gamma, OPT]).  With gamma = 2 the
range is [1, floor(log_{1-eps}(eps/2)) + 1] and the class count is at most
3/eps^2; larger gamma widens the range at both ends so that every profitable
element still lands in exactly one class.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import BCInstance, Element, Epsilon, InvalidParameterError


def q_of(epsilon: Epsilon) -> int:
    """Cardinality cap q(eps) = ceil(eps^(-1/eps)).

    Exact when 1/eps is an integer.  Otherwise the exponent is rounded up
    first, which can only enlarge the result; q appears solely as an upper
    cap (set sizes, recursion depth), so over-approximation is sound.
    """
    num, den = epsilon.numerator, epsilon.denominator
    if num == 1:
        return den**den
    exponent = -(-den // num)  # ceil(1/eps)
    power_num = den**exponent
    power_den = num**exponent
    return -(-power_num // power_den)  # ceil


@dataclass(frozen=True)
class ClassLayout:
    """Index range and exact boundaries of the profit classes for one (eps, alpha)."""

    epsilon: Epsilon
    alpha: int
    gamma: Fraction = Fraction(2)
    r_lo: int = field(init=False)
    r_hi: int = field(init=False)
    # boundaries[k] = (1 - eps)^(r_lo - 1 + k), strictly decreasing
    boundaries: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.alpha <= 0:
            raise InvalidParameterError("alpha must be positive")
        if self.gamma < 2:
            raise InvalidParameterError("gamma must be at least 2")
        eps = self.epsilon.fraction
        base = self.epsilon.one_minus

        # r_hi = floor(log_{1-eps}(eps/gamma)) + 1: smallest exponent whose
        # power drops strictly below eps/gamma.
        low_target = eps / self.gamma
        power = Fraction(1)
        r_hi = 0
        while power >= low_target:
            r_hi += 1
            power *= base

        # r_lo = 1 - ceil(log_{1/(1-eps)}(gamma/2)): widen upward until the
        # class ceiling reaches gamma/2.  With gamma = 2 this is exactly 1.
        high_target = self.gamma / 2
        power = Fraction(1)
        widen = 0
        while power < high_target:
            widen += 1
            power /= base
        r_lo = 1 - widen

        object.__setattr__(self, "r_lo", r_lo)
        object.__setattr__(self, "r_hi", r_hi)
        bounds = []
        power = base ** (r_lo - 1)
        for _ in range(r_lo - 1, r_hi + 1):
            bounds.append(power)
            power *= base
        object.__setattr__(self, "boundaries", tuple(bounds))

        if self.gamma == 2:
            # class count <= 3 / eps^2, exact integer comparison
            n, d = self.epsilon.numerator, self.epsilon.denominator
            assert self.class_count * n * n <= 3 * d * d, "class-count bound violated"

    @property
    def class_count(self) -> int:
        return self.r_hi - self.r_lo + 1

    @property
    def index_range(self) -> range:
        return range(self.r_lo, self.r_hi + 1)

    def power(self, r: int) -> Fraction:
        """(1 - eps)^r for r in [r_lo - 1, r_hi]."""
        return self.boundaries[r - (self.r_lo - 1)]


def class_index(element: Element, layout: ClassLayout) -> int | None:
    """The unique class r with p(e) / (2 alpha) in ((1-eps)^r, (1-eps)^(r-1)], or None."""
    ratio = Fraction(element.profit, 2 * layout.alpha)
    bounds = layout.boundaries
    if ratio > bounds[0] or ratio <= bounds[-1]:
        return None
    # binary search: smallest r with (1-eps)^r < ratio over the decreasing list
    lo, hi = 1, len(bounds) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if bounds[mid] < ratio:
            hi = mid
        else:
            lo = mid + 1
    return layout.r_lo - 1 + lo


def class_partition(instance: BCInstance, layout: ClassLayout) -> dict[int, frozenset[int]]:
    """Pairwise-disjoint profit classes, keyed by class index.

    Only non-empty classes are materialized; the full index range lives on
    the layout.  Elements whose ratio falls outside every interval are simply
    absent (they can still enter solutions through the residual stage).
    """
    buckets: dict[int, set[int]] = {}
    for e in instance.elements:
        r = class_index(e, layout)
        if r is not None:
            buckets.setdefault(r, set()).add(e.id)
    return {r: frozenset(ids) for r, ids in buckets.items()}


def small_profit_pool(instance: BCInstance, alpha: int, epsilon: Epsilon) -> frozenset[int]:
    """Elements with p(e) <= 2 * eps * alpha; the pool the residual stage may use."""
    if alpha < 0:
        raise InvalidParameterError("alpha must be non-negative")
    num, den = epsilon.numerator, epsilon.denominator
    return frozenset(e.id for e in instance.elements if e.profit * den <= 2 * num * alpha)
