"""Shared builders and the seeded corpora used across the suite."""

from __future__ import annotations

import random

import pytest

from bcopt.core import BCInstance, Element
from bcopt.cli import generate_instance
from bcopt.constraints import Matching, MatroidIntersection
from bcopt.matroids import GraphicMatroid, PartitionMatroid, UniformMatroid
from bcopt import oracle


def make_elements(costs, profits=None):
    profits = profits if profits is not None else costs
    return tuple(Element(i, c, p) for i, (c, p) in enumerate(zip(costs, profits)))


def free_constraint(ids):
    """No structural restriction: two full-rank uniform matroids."""
    ids = frozenset(ids)
    return MatroidIntersection(UniformMatroid(ids, len(ids)), UniformMatroid(ids, len(ids)))


def free_instance(costs, profits=None, budget=10**9):
    elements = make_elements(costs, profits)
    return BCInstance(elements, free_constraint(e.id for e in elements), budget)


def path_matching(n_edges, costs=None, profits=None, budget=10**9):
    """Path v0 - v1 - ... - v_n: edge i joins (i, i+1)."""
    costs = costs if costs is not None else [1] * n_edges
    elements = make_elements(costs, profits)
    edges = {i: (i, i + 1) for i in range(n_edges)}
    return BCInstance(elements, Matching(n_edges + 1, edges), budget)


def triangle_matching(costs=(1, 2, 3), profits=None, budget=10**9):
    elements = make_elements(list(costs), profits)
    edges = {0: (0, 1), 1: (1, 2), 2: (2, 0)}
    return BCInstance(elements, Matching(3, edges), budget)


def random_matroid(rng: random.Random, ids: frozenset[int]):
    kind = rng.choice(["uniform", "partition", "graphic"])
    n = len(ids)
    if kind == "uniform" or n == 0:
        return UniformMatroid(ids, rng.randint(0, max(1, n)))
    if kind == "partition":
        order = sorted(ids)
        rng.shuffle(order)
        k = rng.randint(1, min(3, n))
        blocks = [order[i::k] for i in range(k)]
        caps = [rng.randint(1, max(1, len(b))) for b in blocks]
        return PartitionMatroid(ids, [frozenset(b) for b in blocks], caps)
    vertices = rng.randint(2, n + 2)
    edges = {}
    for eid in sorted(ids):
        u = rng.randrange(vertices)
        v = rng.randrange(vertices)
        edges[eid] = (u, v)  # self-loops possible: dependent singletons
    return GraphicMatroid(vertices, edges)


# --- seeded corpora -------------------------------------------------------

def build_main_corpus():
    """200 instances, half matching, half matroid intersection, |E| in [6, 14]."""
    corpus = []
    for i in range(100):
        size = 6 + i % 9
        corpus.append((f"match-{i:03d}", generate_instance(i, size, "matching")))
    for i in range(100):
        size = 6 + i % 9
        corpus.append(
            (f"inter-{i:03d}", generate_instance(1000 + i, size, "matroid-intersection"))
        )
    return corpus


def build_npsolver_corpus():
    """100 instances with |E| <= 16 for the low-profit solver contract."""
    corpus = []
    for i in range(100):
        kind = "matching" if i % 2 == 0 else "matroid-intersection"
        size = 4 + i % 13
        corpus.append((f"np-{i:03d}", generate_instance(2000 + i, size, kind)))
    return corpus


@pytest.fixture(scope="session")
def main_corpus():
    return build_main_corpus()


@pytest.fixture(scope="session")
def npsolver_corpus():
    return build_npsolver_corpus()


@pytest.fixture(scope="session")
def opt_cache():
    """Memoized brute-force optima, shared across acceptance criteria."""
    cache: dict[int, int] = {}

    def lookup(instance: BCInstance) -> int:
        key = id(instance)
        if key not in cache:
            cache[key] = oracle.brute_force_opt(instance).total_profit
        return cache[key]

    return lookup
