from itertools import chain, combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from submigrate.matroid import GroundSet, MatroidFamily, PartitionMatroid, build_matching_matroids
from submigrate.scenario import Agent, Locality, Scenario


def powerset(items):
    items = list(items)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def make_scenario(n_agents, caps):
    agents = [Agent(id=i, profession=0, p=0.5) for i in range(n_agents)]
    localities = [Locality(id=l, capacity=c, jobs={0: c}) for l, c in enumerate(caps)]
    return Scenario(model="interview", agents=agents, localities=localities)


def feasible_by_counting(pairs, caps):
    """Independence oracle straight from the matching definition."""
    agent_deg = {}
    loc_deg = {}
    for a, l in pairs:
        agent_deg[a] = agent_deg.get(a, 0) + 1
        loc_deg[l] = loc_deg.get(l, 0) + 1
    return (all(d <= 1 for d in agent_deg.values())
            and all(loc_deg.get(l, 0) <= c for l, c in enumerate(caps)))


class TestGroundSet:
    def test_lexicographic_and_bijective(self):
        gs = GroundSet([(1, 0), (0, 1), (0, 0)])
        assert gs.pairs == ((0, 0), (0, 1), (1, 0))
        for i, p in enumerate(gs):
            assert gs.index(p) == i
            assert gs.pair(i) == p

    def test_rejects_duplicates(self):
        with pytest.raises(ValueError):
            GroundSet([(0, 0), (0, 0)])


class TestMatchingMatroids:
    def test_cap_one_block(self):
        family = build_matching_matroids(make_scenario(2, [1]))
        both = [family.ground.index((0, 0)), family.ground.index((1, 0))]
        assert not family.is_independent(both)
        assert family.is_independent(both[:1])
        assert family.is_independent(both[1:])

    def test_one_locality_per_agent(self):
        family = build_matching_matroids(make_scenario(1, [1, 1]))
        both = [family.ground.index((0, 0)), family.ground.index((0, 1))]
        assert not family.is_independent(both)

    def test_intersection_counts_matchings(self):
        # 3 agents, localities with caps (2, 1): enumerate all 2^6 subsets
        caps = [2, 1]
        family = build_matching_matroids(make_scenario(3, caps))
        count = 0
        for subset in powerset(range(len(family.ground))):
            pairs = [family.ground.pair(e) for e in subset]
            expected = feasible_by_counting(pairs, caps)
            assert family.is_independent(subset) == expected
            count += expected
        assert count == 19

    def test_empty_set_independent(self):
        family = build_matching_matroids(make_scenario(3, [2, 1]))
        assert family.is_independent([])

    def test_rejects_empty_scenario(self):
        agents = [Agent(id=0, profession=0, p=0.5)]
        with pytest.raises(ValueError):
            build_matching_matroids(
                Scenario(model="interview", agents=agents, localities=[]))

    def test_allowed_pairs_restrict_ground_set(self):
        family = build_matching_matroids(make_scenario(2, [1, 1]),
                                         allowed_pairs=[(0, 0), (1, 1)])
        assert len(family.ground) == 2
        assert family.is_independent([0, 1])

    def test_zero_cap_block(self):
        family = build_matching_matroids(make_scenario(1, [0]))
        assert not family.is_independent([0])
        assert family.is_independent([])

    def test_out_of_range_element(self):
        family = build_matching_matroids(make_scenario(1, [1]))
        with pytest.raises(IndexError):
            family.is_independent([5])


class TestRankSpan:
    m = PartitionMatroid(block_of=(0, 0, 0, 0, 0, 1, 1, 2), caps=(2, 1, 0))

    def test_rank_examples(self):
        assert self.m.rank([]) == 0
        assert self.m.rank([0, 1, 2, 3, 4]) == 2  # one block, cap 2, five elements
        assert self.m.rank([0, 5, 7]) == 2

    def test_span_empty_set_covers_cap_zero_blocks(self):
        assert self.m.span([]) == {7}

    def test_span_saturated_block(self):
        m = PartitionMatroid(block_of=(0, 0, 0), caps=(1,))
        assert m.span([0]) == {0, 1, 2}

    @given(st.sets(st.integers(0, 7), max_size=8))
    def test_rank_is_largest_independent_subset(self, S):
        brute = max(len(T) for T in powerset(S) if self.m.is_independent(T))
        assert self.m.rank(S) == brute

    @given(st.sets(st.integers(0, 7), max_size=8))
    def test_span_definitional(self, S):
        r = self.m.rank(S)
        expected = set(S) | {x for x in range(8) if self.m.rank(set(S) | {x}) == r}
        assert self.m.span(S) == expected

    @given(st.sets(st.integers(0, 7), max_size=8))
    def test_span_contains_set_and_preserves_rank(self, S):
        sp = self.m.span(S)
        assert sp >= set(S)
        assert self.m.rank(sp) == self.m.rank(S)


def small_families():
    yield build_matching_matroids(make_scenario(3, [2, 1]))
    yield build_matching_matroids(make_scenario(2, [1, 1, 2]))
    yield build_matching_matroids(make_scenario(5, [2]))


class TestMatroidAxioms:
    def test_intersection_is_hereditary(self):
        # the exchange axiom does not survive intersection, but downward
        # closure does
        for family in small_families():
            n = len(family.ground)
            if n > 10:
                continue
            ind_set = {frozenset(S) for S in powerset(range(n))
                       if family.is_independent(S)}
            for S in ind_set:
                for T in powerset(S):
                    assert frozenset(T) in ind_set

    def test_each_matroid_satisfies_hereditary_and_exchange(self):
        for family in small_families():
            n = len(family.ground)
            if n > 10:
                continue
            for m in family.matroids:
                independents = [frozenset(S) for S in powerset(range(n))
                                if m.is_independent(S)]
                ind_set = set(independents)
                for S in independents:
                    for T in powerset(S):
                        assert frozenset(T) in ind_set
                for S in independents:
                    for T in independents:
                        if len(S) == len(T) + 1:
                            assert any(T | {x} in ind_set for x in S - T)

    def test_rank_monotone_and_submodular(self):
        for family in small_families():
            n = len(family.ground)
            if n > 10:
                continue
            for m in family.matroids:
                subsets = [frozenset(S) for S in powerset(range(n))]
                rank = {S: m.rank(S) for S in subsets}
                for T in subsets:
                    for x in set(range(n)) - T:
                        assert rank[T | {x}] >= rank[T]
                        for S in map(frozenset, powerset(T)):
                            assert (rank[S | {x}] - rank[S]
                                    >= rank[T | {x}] - rank[T])
