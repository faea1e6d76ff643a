"""Seeded Monte Carlo estimators for the three employment models.

Every per-group estimate is seeded from (master seed, canonical group key,
sorted agent ids), so a group's estimate does not depend on when or where it
is computed.  Identical (matching, scenario, seed) inputs give bit-identical
estimates.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ._kernels import batch_matching_sizes
from .models import GroupKey, decompose_matching
from .scenario import Matching, Scenario, check_matching

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class EstimatorConfig:
    samples: int = 1000
    seed: int = 0
    exact_cutoff: int = 7

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be at least 1")


def group_rng(seed: int, key: GroupKey, agents: Sequence[int]) -> np.random.Generator:
    """Generator for one (group, agent set) substream."""
    if len(key) == 2:
        entropy = [seed & _MASK64, 1, key[0], key[1], *agents]
    else:
        entropy = [seed & _MASK64, 2, key[0], *agents]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _apply_correction(counts: np.ndarray, correction) -> np.ndarray:
    if correction.kind == "cap":
        return np.minimum(counts, correction.cap).astype(float)
    table = np.asarray(correction.values, dtype=float)
    return table[np.clip(counts, 0, len(table) - 1)]


def simulate_correction_group(rng: np.random.Generator, probs: Sequence[float],
                              correction, samples: int) -> float:
    p = np.asarray(probs, dtype=float)
    counts = (rng.random((samples, len(p))) < p).sum(axis=1)
    return float(_apply_correction(counts, correction).mean())


def sample_first_success(rng: np.random.Generator, p: np.ndarray, cap: int,
                         shape: Tuple[int, ...]) -> np.ndarray:
    """Index of each agent's first successful application, capped at cap
    (the cap value meaning she never succeeds within the available jobs)."""
    u = 1.0 - rng.random(shape)  # in (0, 1]
    safe = np.clip(p, 1e-300, 1.0 - 1e-16)
    raw = np.floor(np.log(u) / np.log1p(-safe)) + 1.0
    # clamp in float space before the int cast so p ~ 0 cannot overflow
    c = np.minimum(raw, float(cap)).astype(np.int64)
    c = np.where(p >= 1.0, 1, c)
    c = np.where(p <= 0.0, cap, c)
    return c


def simulate_interview_group(rng: np.random.Generator, probs: Sequence[float],
                             jobs: int, samples: int) -> float:
    n = len(probs)
    if n == 0 or jobs == 0:
        return 0.0
    p = np.asarray(probs, dtype=float)
    order = rng.permuted(np.tile(np.arange(n), (samples, 1)), axis=1)
    c = sample_first_success(rng, p, jobs + 1, (samples, n))
    avail = np.full(samples, jobs, dtype=np.int64)
    employed = 0
    rows = np.arange(samples)
    for pos in range(n):
        cvals = c[rows, order[:, pos]]
        hired = cvals <= avail
        avail -= hired
        employed += int(hired.sum())
    return employed / samples


def simulate_coordination_group(rng: np.random.Generator,
                                prob_rows: Sequence[Sequence[float]],
                                samples: int) -> float:
    n = len(prob_rows)
    if n == 0:
        return 0.0
    p = np.asarray(prob_rows, dtype=float)
    m = p.shape[1]
    if m == 0:
        return 0.0
    edges = rng.random((samples, n, m)) < p
    weights = (1 << np.arange(m, dtype=np.int64))
    masks = (edges * weights).sum(axis=2)
    return float(batch_matching_sizes(masks, m).mean())


def estimate_group(key: GroupKey, agents: Sequence[int], scenario: Scenario,
                   cfg: EstimatorConfig) -> float:
    """Monte Carlo expected employment of one group."""
    rng = group_rng(cfg.seed, key, agents)
    if scenario.model == "correction":
        lid, prof = key
        probs = [scenario.agent_by_id(a).prob_at(lid) for a in agents]
        return simulate_correction_group(rng, probs, scenario.correction_at(lid, prof),
                                         cfg.samples)
    if scenario.model == "interview":
        lid, prof = key
        probs = [scenario.agent_by_id(a).prob_at(lid) for a in agents]
        return simulate_interview_group(rng, probs, scenario.jobs_at(lid, prof),
                                        cfg.samples)
    if scenario.model == "coordination":
        (lid,) = key
        rows = [scenario.job_probs(a, lid) for a in agents]
        return simulate_coordination_group(rng, rows, cfg.samples)
    raise ValueError(f"unknown model {scenario.model!r}")


def model_expected_mc(matching: Matching, scenario: Scenario,
                      cfg: EstimatorConfig) -> float:
    """Monte Carlo estimate of the expected employment of a full matching."""
    check_matching(matching, scenario)
    total = 0.0
    for key, agents in decompose_matching(matching, scenario).items():
        total += estimate_group(key, agents, scenario, cfg)
    return total
