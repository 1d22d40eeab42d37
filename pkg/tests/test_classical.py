import numpy as np
import pytest
from hypothesis import given, strategies as st

from qpsim.classical import (
    ClassicalAgent,
    Clip,
    LearningParams,
    WeightedClipGraph,
    action,
    hop_probabilities,
    invasion_graph,
    percept,
    update_weights,
    walk,
)

P0, P1, A0, A1 = percept(0), percept(1), action(0), action(1)


def graph_with(h00, h01, h10=1.0, h11=1.0):
    return WeightedClipGraph((P0, P1, A0, A1), {(P0, A0): h00, (P0, A1): h01, (P1, A0): h10, (P1, A1): h11})


class TestHopProbabilities:
    def test_symmetric(self):
        assert hop_probabilities(invasion_graph(), P0) == {A0: 0.5, A1: 0.5}

    def test_weighted(self):
        probs = hop_probabilities(graph_with(3, 1), P0)
        assert probs[A0] == pytest.approx(0.75, abs=1e-12)
        assert probs[A1] == pytest.approx(0.25, abs=1e-12)

    def test_single_edge(self):
        g = WeightedClipGraph((P0, A0), {(P0, A0): 2.5})
        assert hop_probabilities(g, P0) == {A0: 1.0}

    def test_no_outgoing_edges(self):
        with pytest.raises(ValueError):
            hop_probabilities(invasion_graph(), A0)

    @given(st.lists(st.floats(1, 100), min_size=2, max_size=2), st.floats(1, 100))
    def test_scale_invariant(self, ws, c):
        g1 = graph_with(ws[0], ws[1])
        g2 = graph_with(ws[0] * c, ws[1] * c)
        a, b = hop_probabilities(g1, P0), hop_probabilities(g2, P0)
        assert sum(a.values()) == pytest.approx(1, abs=1e-12)
        assert a[A0] == pytest.approx(b[A0], abs=1e-12)


class TestWalk:
    def test_one_hop_on_toy_graph(self):
        rng = np.random.default_rng(0)
        act, path = walk(invasion_graph(), P0, rng)
        assert act in (A0, A1)
        assert path == ((P0, act),)

    def test_monte_carlo_frequency(self):
        # oracle: hop_probabilities gives 0.75 for (3, 1)
        g = graph_with(3, 1)
        rng = np.random.default_rng(12345)
        hits = sum(walk(g, P0, rng)[0] == A0 for _ in range(100_000))
        assert abs(hits / 100_000 - 0.75) < 0.005

    def test_deterministic_multi_hop(self):
        g = WeightedClipGraph((P0, P1, A1), {(P0, P1): 1.0, (P1, A1): 4.0})
        for seed in range(5):
            assert walk(g, P0, np.random.default_rng(seed)) == (A1, ((P0, P1), (P1, A1)))

    def test_non_absorption(self):
        g = WeightedClipGraph((P0, P1, A0), {(P0, P1): 1.0, (P1, P0): 1.0, (P0, A0): 1.0})
        g = g.with_weights({(P0, P1): 1e12, (P1, P0): 1.0, (P0, A0): 1.0})
        with pytest.raises(RuntimeError, match="not absorbed"):
            walk(g, P0, np.random.default_rng(0), max_hops=50)

    def test_must_start_on_percept(self):
        with pytest.raises(ValueError):
            walk(invasion_graph(), A0, np.random.default_rng(0))


class TestUpdate:
    def test_reward_without_damping(self):
        g = update_weights(invasion_graph(), [(P0, A0)], True, LearningParams(0.0, 1.0))
        assert g.weights[(P0, A0)] == 2.0
        assert g.weights[(P0, A1)] == 1.0

    def test_damping_unrewarded(self):
        g = update_weights(graph_with(3, 1), [(P0, A0)], False, LearningParams(0.5, 1.0))
        assert g.weights[(P0, A0)] == 2.0

    @pytest.mark.parametrize("damping", [0.0, 0.3, 1.0])
    def test_fixed_point(self, damping):
        g = update_weights(invasion_graph(), [(P0, A0)], False, LearningParams(damping, 1.0))
        assert all(h == 1.0 for h in g.weights.values())

    def test_original_graph_untouched(self):
        g = invasion_graph()
        update_weights(g, [(P0, A0)], True, LearningParams(0.0, 1.0))
        assert g.weights[(P0, A0)] == 1.0

    def test_n_rewards_add_exactly(self):
        g = invasion_graph(h0=1.0)
        for _ in range(37):
            g = update_weights(g, [(P0, A0)], True, LearningParams(0.0, 0.25))
        assert g.weights[(P0, A0)] == 1.0 + 37 * 0.25

    @given(st.lists(st.tuples(st.booleans(), st.integers(0, 3)), max_size=60),
           st.floats(0, 1), st.floats(0, 5))
    def test_weights_stay_above_one(self, steps, damping, reward):
        edges = [(P0, A0), (P0, A1), (P1, A0), (P1, A1)]
        g = invasion_graph()
        params = LearningParams(damping, reward)
        for rewarded, e in steps:
            g = update_weights(g, [edges[e]], rewarded, params)
        assert min(g.weights.values()) >= 1.0 - 1e-12

    def test_geometric_convergence(self):
        params = LearningParams(0.2, 1.0)
        g = graph_with(9, 1)
        gaps = []
        for _ in range(20):
            g = update_weights(g, [(P1, A1)], False, params)
            gaps.append(g.weights[(P0, A0)] - 1.0)
        ratios = np.array(gaps[1:]) / np.array(gaps[:-1])
        assert np.allclose(ratios, 0.8, atol=1e-12)
        assert np.all(np.diff(gaps) < 0)

    def test_params_validated(self):
        with pytest.raises(ValueError):
            LearningParams(1.5, 1.0)
        with pytest.raises(ValueError):
            LearningParams(0.1, -1.0)


class TestGraph:
    def test_text_round_trip(self):
        g = graph_with(3.5, 1.0, 2.25, 1.0)
        back = WeightedClipGraph.from_text(g.to_text())
        assert back.weights == g.weights
        assert set(back.clips) == set(g.clips)

    def test_text_parse_errors(self):
        with pytest.raises(ValueError, match="line 2"):
            WeightedClipGraph.from_text("p0 a0 1\np0 a1\n")
        with pytest.raises(ValueError):
            WeightedClipGraph.from_text("x0 a0 1\n")

    def test_weight_floor(self):
        with pytest.raises(ValueError):
            graph_with(0.5, 1)

    def test_toy_topology(self):
        g = invasion_graph(3)
        for a, b in g.weights:
            assert a.kind == "p" and b.kind == "a"
        assert len(g.weights) == 9

    def test_clip_labels(self):
        assert str(Clip.parse("a12")) == "a12"


def test_agent_probabilities_follow_weights():
    agent = ClassicalAgent(2, params=LearningParams(0.0, 1.0))
    rng = np.random.default_rng(0)
    d = agent.deliberate(0, rng)
    assert np.allclose(d.probabilities, [0.5, 0.5])
    agent.learn(d, True)
    assert agent.action_probabilities(0)[d.action] == pytest.approx(2 / 3)
