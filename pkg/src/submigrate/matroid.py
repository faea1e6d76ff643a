"""Partition matroids over a ground set of agent-locality pairs.

The matching constraints (each agent in at most one locality, each locality
below its capacity) are the intersection of two partition matroids over the
bipartite ground set.  Only independence oracles are needed at optimization
time; rank and span are exposed for testing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence, Tuple

Pair = Tuple[int, int]


class GroundSet:
    """Dense, order-stable indexing of (agent_id, locality_id) pairs.

    Elements are ordered lexicographically by (agent_id, locality_id); all
    deterministic tie-breaking downstream relies on this order.
    """

    def __init__(self, pairs: Iterable[Pair]):
        ordered = sorted((int(a), int(l)) for a, l in pairs)
        if any(a < 0 or l < 0 for a, l in ordered):
            raise ValueError("agent and locality ids must be nonnegative")
        if len(set(ordered)) != len(ordered):
            raise ValueError("duplicate agent-locality pairs in ground set")
        self._pairs: tuple[Pair, ...] = tuple(ordered)
        self._index = {p: i for i, p in enumerate(self._pairs)}

    def __len__(self) -> int:
        return len(self._pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self._pairs)

    @property
    def pairs(self) -> tuple[Pair, ...]:
        return self._pairs

    def index(self, pair: Pair) -> int:
        return self._index[pair]

    def __contains__(self, pair: Pair) -> bool:
        return pair in self._index

    def pair(self, idx: int) -> Pair:
        return self._pairs[idx]


@dataclass(frozen=True)
class PartitionMatroid:
    """Blocks of a partitioned ground set with per-block cardinality caps.

    A set S is independent iff |S ∩ block_i| <= caps[i] for every block i.
    Caps of 0 are allowed; elements in such blocks are never selectable.
    """

    block_of: tuple[int, ...]
    caps: tuple[int, ...]

    def __post_init__(self):
        if any(b < 0 or b >= len(self.caps) for b in self.block_of):
            raise ValueError("block index out of range")
        if any(c < 0 for c in self.caps):
            raise ValueError("caps must be nonnegative")

    @property
    def n_elements(self) -> int:
        return len(self.block_of)

    def _block_counts(self, S: Iterable[int]) -> dict[int, int]:
        counts: dict[int, int] = {}
        for e in S:
            if e < 0 or e >= len(self.block_of):
                raise IndexError(f"element index {e} out of range")
            b = self.block_of[e]
            counts[b] = counts.get(b, 0) + 1
        return counts

    def is_independent(self, S: Iterable[int]) -> bool:
        counts = self._block_counts(S)
        return all(c <= self.caps[b] for b, c in counts.items())

    def rank(self, S: Iterable[int]) -> int:
        counts = self._block_counts(S)
        return sum(min(c, self.caps[b]) for b, c in counts.items())

    def span(self, S: Iterable[int]) -> frozenset[int]:
        S = frozenset(S)
        counts = self._block_counts(S)
        saturated = {b for b, c in counts.items() if c >= self.caps[b]}
        saturated |= {b for b, cap in enumerate(self.caps) if cap == 0}
        extra = {e for e in range(len(self.block_of)) if self.block_of[e] in saturated}
        return S | extra


@dataclass(frozen=True)
class MatroidFamily:
    """Several partition matroids sharing one ground set.

    Intersection independence means independence in every member matroid.
    ``matching_info``, when present, records (n_agents, total_capacity) for
    families built by :func:`build_matching_matroids`, which makes the size
    of the largest common independent set available in closed form.
    """

    ground: GroundSet
    matroids: tuple[PartitionMatroid, ...]
    matching_info: Optional[tuple[int, int]] = field(default=None)

    def __post_init__(self):
        n = len(self.ground)
        if not self.matroids:
            raise ValueError("family must contain at least one matroid")
        if any(m.n_elements != n for m in self.matroids):
            raise ValueError("all matroids must share the ground set")

    @property
    def P(self) -> int:
        return len(self.matroids)

    def is_independent(self, S: Iterable[int]) -> bool:
        S = list(S)
        return all(m.is_independent(S) for m in self.matroids)


def build_matching_matroids(scenario, allowed_pairs: Optional[Iterable[Pair]] = None) -> MatroidFamily:
    """Matching constraints of a scenario as a family of two partition matroids.

    Matroid 1 blocks the ground set by agent with cap 1; matroid 2 blocks by
    locality with cap q_l.  Sets independent in both are exactly the feasible
    matchings.  ``allowed_pairs`` restricts the ground set (incompatible pairs
    removed); the default is the complete bipartite ground set.
    """
    agent_ids = [a.id for a in scenario.agents]
    locality_ids = [l.id for l in scenario.localities]
    if not agent_ids or not locality_ids:
        raise ValueError("scenario must have at least one agent and one locality")
    caps_by_loc = {l.id: l.capacity for l in scenario.localities}

    if allowed_pairs is None:
        pairs = [(a, l) for a in agent_ids for l in locality_ids]
    else:
        pairs = list(allowed_pairs)
        known_a, known_l = set(agent_ids), set(locality_ids)
        for a, l in pairs:
            if a not in known_a or l not in known_l:
                raise ValueError(f"pair ({a}, {l}) not in scenario")
    ground = GroundSet(pairs)

    a_blocks = sorted({a for a, _ in ground})
    l_blocks = sorted({l for _, l in ground})
    a_block_index = {a: i for i, a in enumerate(a_blocks)}
    l_block_index = {l: i for i, l in enumerate(l_blocks)}

    by_agent = PartitionMatroid(
        block_of=tuple(a_block_index[a] for a, _ in ground),
        caps=tuple(1 for _ in a_blocks),
    )
    by_locality = PartitionMatroid(
        block_of=tuple(l_block_index[l] for _, l in ground),
        caps=tuple(caps_by_loc[l] for l in l_blocks),
    )
    info = (len(agent_ids), sum(caps_by_loc.values()))
    return MatroidFamily(ground=ground, matroids=(by_agent, by_locality), matching_info=info)
