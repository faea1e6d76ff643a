import numpy as np
import pytest

from submigrate.additive import (
    AdditiveInstance,
    additive_value,
    build_additive_instance,
    solve_additive,
)
from submigrate.greedy import greedy_maximize
from submigrate.matroid import build_matching_matroids
from submigrate.scenario import Agent, Locality, Scenario


def instance(weights, caps):
    w = np.asarray(weights, dtype=float)
    return AdditiveInstance(weights=w, capacities=tuple(caps),
                            agent_ids=tuple(range(w.shape[0])),
                            locality_ids=tuple(range(w.shape[1])))


def brute_force_best(weights, caps):
    """Exhaustive search over all feasible matchings."""
    w = np.asarray(weights)
    n, L = w.shape
    best = 0.0

    def extend(i, value, load):
        nonlocal best
        if i == n:
            best = max(best, value)
            return
        extend(i + 1, value, load)
        for l in range(L):
            if load[l] < caps[l]:
                load[l] += 1
                extend(i + 1, value + w[i, l], load)
                load[l] -= 1

    extend(0, 0.0, [0] * L)
    return best


class TestSolveAdditive:
    def test_picks_argmax_locality(self):
        m = solve_additive(instance([[0.2, 0.9]], [1, 1]))
        assert m == [(0, 1)]

    def test_capacity_binds(self):
        m = solve_additive(instance([[0.8], [0.6]], [1]))
        assert m == [(0, 0)]

    def test_zero_weights_leave_agents_unmatched(self):
        m = solve_additive(instance([[0.0, 0.0]], [1, 1]))
        assert m == []

    def test_zero_capacity(self):
        assert solve_additive(instance([[0.9]], [0])) == []

    def test_matches_brute_force_on_random_instances(self):
        rng = np.random.default_rng(21)
        for _ in range(120):
            n = int(rng.integers(1, 7))
            L = int(rng.integers(1, 4))
            w = rng.random((n, L))
            caps = [int(rng.integers(0, 3)) for _ in range(L)]
            inst = instance(w, caps)
            m = solve_additive(inst)
            assert additive_value(inst, m) == pytest.approx(
                brute_force_best(w, caps), abs=1e-9)
            # feasibility
            assert len({a for a, _ in m}) == len(m)
            for l, cap in enumerate(caps):
                assert sum(1 for _, ll in m if ll == l) <= cap

    def test_rejects_negative_weights(self):
        with pytest.raises(ValueError):
            instance([[-0.1]], [1])


class TestAgainstGreedy:
    def test_additive_optimum_dominates_greedy_on_additive_objective(self):
        rng = np.random.default_rng(33)
        for _ in range(20):
            n = int(rng.integers(1, 5))
            L = int(rng.integers(1, 4))
            ps = rng.random(n)
            caps = [int(rng.integers(0, 3)) for _ in range(L)]
            scenario = Scenario(
                model="interview",
                agents=[Agent(id=i, profession=0, p=float(p)) for i, p in enumerate(ps)],
                localities=[Locality(id=l, capacity=c, jobs={0: c})
                            for l, c in enumerate(caps)],
            )
            inst = build_additive_instance(scenario)
            family = build_matching_matroids(scenario)

            def z(S):
                return sum(inst.weights[a, l] for a, l in
                           (family.ground.pair(e) for e in S))

            trace = greedy_maximize(z, family)
            opt = additive_value(inst, solve_additive(inst))
            assert trace.value <= opt + 1e-9


class TestBuildInstance:
    def test_weights_are_solo_probabilities(self):
        scenario = Scenario(
            model="interview",
            agents=[Agent(id=0, profession=0, p=0.5)],
            localities=[Locality(id=0, capacity=1, jobs={0: 2})],
        )
        inst = build_additive_instance(scenario)
        assert inst.weights[0, 0] == pytest.approx(0.75)  # 1 - 0.5^2
