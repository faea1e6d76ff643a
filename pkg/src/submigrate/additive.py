"""Exact maximizer of the additive (solo-probability) surrogate objective.

The constraint structure is a degree-constrained bipartite matching, so
expanding each locality into capacity-many slots turns the problem into a
rectangular assignment problem, which scipy solves exactly; the LP relaxation
of the corresponding ILP is integral, so nothing is lost versus an ILP
solver.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import linear_sum_assignment

from .models import solo_probability
from .scenario import Scenario


@dataclass(frozen=True)
class AdditiveInstance:
    """Solo-probability weights w[i][l] plus per-locality capacities."""

    weights: np.ndarray  # shape (n_agents, n_localities)
    capacities: Tuple[int, ...]
    agent_ids: Tuple[int, ...]
    locality_ids: Tuple[int, ...]

    def __post_init__(self):
        w = np.asarray(self.weights)
        if w.ndim != 2 or w.shape != (len(self.agent_ids), len(self.locality_ids)):
            raise ValueError("weights must be (n_agents, n_localities)")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and nonnegative")
        if any(c < 0 for c in self.capacities):
            raise ValueError("capacities must be nonnegative")


def build_additive_instance(scenario: Scenario) -> AdditiveInstance:
    agent_ids = tuple(a.id for a in scenario.agents)
    locality_ids = tuple(l.id for l in scenario.localities)
    w = np.array([[solo_probability(a, l, scenario) for l in locality_ids]
                  for a in agent_ids])
    caps = tuple(l.capacity for l in scenario.localities)
    return AdditiveInstance(weights=w, capacities=caps,
                            agent_ids=agent_ids, locality_ids=locality_ids)


def solve_additive(instance: AdditiveInstance) -> List[Tuple[int, int]]:
    """Feasible matching maximizing the summed weights, as (agent_id,
    locality_id) pairs.  Agents whose best available weight is 0 stay
    unmatched (a zero-weight pair never improves the objective)."""
    n = len(instance.agent_ids)
    slots_loc: List[int] = []
    for col, cap in enumerate(instance.capacities):
        slots_loc.extend([col] * cap)
    if n == 0 or not slots_loc:
        return []
    cost = np.asarray(instance.weights)[:, slots_loc]
    rows, cols = linear_sum_assignment(cost, maximize=True)
    matching = []
    for r, c in zip(rows, cols):
        if cost[r, c] > 0.0:
            matching.append((instance.agent_ids[r], instance.locality_ids[slots_loc[c]]))
    matching.sort()
    return matching


def additive_value(instance: AdditiveInstance, matching: Sequence[Tuple[int, int]]) -> float:
    a_idx = {a: i for i, a in enumerate(instance.agent_ids)}
    l_idx = {l: j for j, l in enumerate(instance.locality_ids)}
    return float(sum(instance.weights[a_idx[a], l_idx[l]] for a, l in matching))
