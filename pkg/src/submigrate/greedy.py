"""Greedy maximization over a matroid intersection with a value oracle.

The loop follows the classic matroid-greedy schema exactly: at every
iteration the full candidate pool is scanned for the element whose addition
yields the highest oracle value (not the highest marginal, which matters when
the oracle is noisy), the winner is accepted if it keeps the selection
independent and discarded otherwise, and the loop runs until the pool is
empty.  Ties are broken toward the smallest ground-set element index.

Oracles may be plain callables ``z(frozenset) -> float``.  Oracles that
additionally expose ``value_with(element)`` / ``commit(element)`` are driven
through that incremental interface, which avoids rebuilding candidate sets in
the hot scan (the experiment harness uses this).
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Callable, List

from .matroid import MatroidFamily


@dataclass
class GreedyTrace:
    """What the greedy loop did: accepted elements in order, discarded
    elements, per-acceptance marginal gains, and the oracle query count."""

    selected: List[int] = field(default_factory=list)
    rejected: List[int] = field(default_factory=list)
    marginal_gains: List[float] = field(default_factory=list)
    oracle_calls: int = 0
    value: float = 0.0


class _CallableAdapter:
    """Drives a plain set-valued oracle through the incremental interface."""

    def __init__(self, oracle: Callable[[frozenset], float]):
        self._oracle = oracle
        self._S: frozenset[int] = frozenset()
        self.calls = 0

    def value_with(self, e: int) -> float:
        self.calls += 1
        return self._oracle(self._S | {e})

    def commit(self, e: int) -> None:
        self._S = self._S | {e}

    def base_value(self) -> float:
        self.calls += 1
        return self._oracle(self._S)


class _IndependenceTracker:
    """Incremental per-block counts so each feasibility check is O(P)."""

    def __init__(self, family: MatroidFamily):
        self._matroids = family.matroids
        self._counts = [dict() for _ in family.matroids]

    def can_add(self, e: int) -> bool:
        for m, counts in zip(self._matroids, self._counts):
            b = m.block_of[e]
            if counts.get(b, 0) + 1 > m.caps[b]:
                return False
        return True

    def add(self, e: int) -> None:
        for m, counts in zip(self._matroids, self._counts):
            b = m.block_of[e]
            counts[b] = counts.get(b, 0) + 1


def _wrap_oracle(oracle):
    if hasattr(oracle, "value_with") and hasattr(oracle, "commit"):
        return oracle
    return _CallableAdapter(oracle)


def greedy_maximize(oracle, family: MatroidFamily, lazy: bool = False) -> GreedyTrace:
    """Run the greedy loop and return its trace.

    ``oracle`` maps selections to values; it is queried on the current
    selection plus one candidate.  The returned selection is independent in
    every matroid of the family.  ``lazy=True`` enables a CELF-style stale-gain
    shortcut; it assumes exact submodularity and is kept out of the reference
    path because sampling noise breaks the lazy bound.
    """
    if lazy:
        return _lazy_greedy(oracle, family)

    drv = _wrap_oracle(oracle)
    tracker = _IndependenceTracker(family)
    trace = GreedyTrace()

    current = oracle_base(drv)
    pool = list(range(len(family.ground)))
    while pool:
        best_e = -1
        best_v = -float("inf")
        for e in pool:
            v = drv.value_with(e)
            # strict > keeps the smallest element index on ties
            if v > best_v:
                best_v = v
                best_e = e
        pool.remove(best_e)
        if not tracker.can_add(best_e):
            trace.rejected.append(best_e)
            continue
        tracker.add(best_e)
        drv.commit(best_e)
        trace.selected.append(best_e)
        trace.marginal_gains.append(best_v - current)
        current = best_v

    trace.value = current
    trace.oracle_calls = getattr(drv, "calls", 0)
    return trace


def oracle_base(drv) -> float:
    """Base value for incremental oracles that start from the empty set."""
    base = getattr(drv, "base_value", None)
    if base is not None:
        return base()
    return 0.0


def _lazy_greedy(oracle, family: MatroidFamily) -> GreedyTrace:
    drv = _wrap_oracle(oracle)
    tracker = _IndependenceTracker(family)
    trace = GreedyTrace()

    current = oracle_base(drv)
    # heap of (-stale_marginal, element, iteration the gain was computed at);
    # marginals (not absolute values) keep stale and fresh entries comparable
    heap = []
    for e in range(len(family.ground)):
        heap.append((current - drv.value_with(e), e, 0))
    heapq.heapify(heap)

    t = 0
    while heap:
        neg_g, e, stamp = heapq.heappop(heap)
        if stamp < t:
            heapq.heappush(heap, (current - drv.value_with(e), e, t))
            continue
        if not tracker.can_add(e):
            trace.rejected.append(e)
            continue
        tracker.add(e)
        drv.commit(e)
        trace.selected.append(e)
        trace.marginal_gains.append(-neg_g)
        current = current - neg_g
        t += 1

    trace.value = current
    trace.oracle_calls = getattr(drv, "calls", 0)
    return trace


def theorem1_ratio(P: int, epsilon: float, k: int) -> float:
    """Worst-case value ratio guaranteed for greedy under P matroid
    constraints with an epsilon-approximately submodular oracle and largest
    common independent set of size k: 1 / (P + 1 + 4*eps/(1-eps) * k)."""
    if not 0.0 <= epsilon < 1.0:
        raise ValueError("epsilon must satisfy 0 <= epsilon < 1")
    if P < 1 or k < 1:
        raise ValueError("P and k must be at least 1")
    return 1.0 / (P + 1 + 4.0 * epsilon / (1.0 - epsilon) * k)


def max_independent_size(family: MatroidFamily, brute_force_limit: int = 20) -> int:
    """Size of the largest set independent in every matroid of the family.

    For matching families this is min(#agents, total capacity).  Otherwise a
    branch-and-bound search is exact up to ``brute_force_limit`` elements;
    beyond that the minimum of the per-matroid full-ground-set ranks is
    returned, which is only an upper bound.
    """
    if family.matching_info is not None:
        n_agents, total_cap = family.matching_info
        return min(n_agents, total_cap)

    n = len(family.ground)
    if n > brute_force_limit:
        full = list(range(n))
        return min(m.rank(full) for m in family.matroids)

    matroids = family.matroids
    best = 0

    def extend(start: int, counts: list[dict], size: int) -> None:
        nonlocal best
        best = max(best, size)
        if size + (n - start) <= best:
            return
        for e in range(start, n):
            ok = True
            for m, c in zip(matroids, counts):
                b = m.block_of[e]
                if c.get(b, 0) + 1 > m.caps[b]:
                    ok = False
                    break
            if not ok:
                continue
            for m, c in zip(matroids, counts):
                b = m.block_of[e]
                c[b] = c.get(b, 0) + 1
            extend(e + 1, counts, size + 1)
            for m, c in zip(matroids, counts):
                b = m.block_of[e]
                c[b] -= 1

    extend(0, [dict() for _ in matroids], 0)
    return best
