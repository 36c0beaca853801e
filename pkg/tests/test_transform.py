import itertools

import pytest

from pcmmap import (
    Circuit,
    CircuitError,
    EmptyCircuitError,
    InfeasibleEvidenceError,
    InvalidVariableError,
    Leaf,
    OverPruneError,
    Product,
    Sum,
    check_decomposable,
    check_smooth,
    cleanup,
    condition,
    detect_q_deterministic,
    prune_edges,
    random_circuit,
    split,
)


class TestCleanup:
    def test_fixpoint_on_clean_circuit(self, f1):
        out = cleanup(f1)
        assert out.nodes == f1.nodes and out.root == f1.root

    def test_single_child_sum_chain_folds_weights(self):
        c = Circuit(
            [Leaf(0, 1), Sum((0,), (0.5,)), Sum((1,), (1.0,))], 2, 1
        )
        out = cleanup(c)
        assert out.num_nodes == 2
        root = out.nodes[out.root]
        assert isinstance(root, Sum) and root.weights == (0.5,)

    def test_unreachable_nodes_removed(self):
        c = Circuit([Leaf(0, 1), Leaf(0, 0), Sum((0,), (1.0,))], 2, 1)
        out = cleanup(c)
        assert out.num_nodes == 1
        assert isinstance(out.nodes[0], Leaf)


class TestCondition:
    def test_f1_on_x1_equals_joint(self, f1):
        out = condition(f1, {1: 1})
        assert out.evaluate_marginal({0: 1}) == pytest.approx(0.42)
        assert out.evaluate_marginal({0: 0}) == pytest.approx(0.08)

    def test_f1_on_x0_mass(self, f1):
        out = condition(f1, {0: 1})
        assert out.evaluate_marginal({}) == pytest.approx(0.6)

    def test_empty_evidence_is_identity(self, f1):
        out = condition(f1, {})
        assert out.nodes == f1.nodes

    def test_infeasible_evidence_raises(self):
        c = Circuit([Leaf(0, 1)], 0, 1)
        with pytest.raises(InfeasibleEvidenceError):
            condition(c, {0: 0})

    def test_validation(self, f1):
        with pytest.raises(InvalidVariableError):
            condition(f1, {9: 1})
        with pytest.raises(CircuitError):
            condition(f1, {0: 5})

    def test_matches_direct_evaluation_on_random_circuits(self):
        for seed in range(20):
            c = random_circuit(6, seed)
            out = condition(c, {0: 1, 3: 0})
            for bits in itertools.product((0, 1), repeat=3):
                q = dict(zip((1, 2, 4), bits))
                expect = c.evaluate_marginal({**q, 0: 1, 3: 0})
                assert out.evaluate_marginal(q) == pytest.approx(expect, rel=1e-12, abs=1e-300)


class TestPruneEdges:
    def test_f1_prune_low_edge_preserves_winner(self, f1):
        # edge root->n7 (ordinal 1) carries the X0=0 branch
        out = prune_edges(f1, [(8, 1)])
        assert out.evaluate_marginal({0: 1}) == pytest.approx(0.6)
        assert out.evaluate_marginal({}) == pytest.approx(0.6)

    def test_empty_prune_set_is_identity(self, f1):
        assert prune_edges(f1, []) is f1

    def test_pruning_all_root_edges_raises(self, f1):
        with pytest.raises(OverPruneError):
            prune_edges(f1, [(8, 0), (8, 1)])

    def test_rejects_non_sum_edges_and_duplicates(self, f1):
        with pytest.raises(CircuitError):
            prune_edges(f1, [(6, 0)])  # product edge
        with pytest.raises(CircuitError):
            prune_edges(f1, [(8, 0), (8, 0)])
        with pytest.raises(CircuitError):
            prune_edges(f1, [(8, 7)])  # no such ordinal

    def test_pruned_probabilities_never_increase(self):
        for seed in range(20):
            c = random_circuit(5, seed)
            root = c.nodes[c.root]
            prunable = isinstance(root, Sum) and len(root.children) > 1
            out = prune_edges(c, [(c.root, 0)]) if prunable else c
            for bits in itertools.product((0, 1), repeat=5):
                q = dict(enumerate(bits))
                assert out.evaluate_marginal(q) <= c.evaluate_marginal(q) + 1e-15


class TestSplit:
    def test_preserves_distribution(self, f1):
        out = split(f1, 0)
        for bits in itertools.product((0, 1), repeat=2):
            x = dict(enumerate(bits))
            assert out.evaluate_marginal(x) == pytest.approx(f1.evaluate_marginal(x), rel=1e-12)

    def test_new_root_is_qdet(self, f1):
        out = split(f1, 1)
        info = detect_q_deterministic(out, [1])
        assert info.is_qdet[out.root]

    def test_f2_branch_masses(self, f2):
        out = split(f2, 0)
        root = out.nodes[out.root]
        assert isinstance(root, Sum)
        masses = sorted(
            w * float(out.node_values({})[c]) for c, w in zip(root.children, root.weights)
        )
        assert masses == [pytest.approx(0.45), pytest.approx(0.55)]

    def test_repeat_split_is_stable(self, f1):
        once = split(f1, 0)
        twice = split(once, 0)
        for bits in itertools.product((0, 1), repeat=2):
            x = dict(enumerate(bits))
            assert twice.evaluate_marginal(x) == pytest.approx(f1.evaluate_marginal(x), rel=1e-12)

    def test_out_of_range_variable(self, f1):
        with pytest.raises(InvalidVariableError):
            split(f1, 4)

    def test_variable_missing_from_scope_gets_fresh_root(self):
        c = Circuit([Leaf(0, 1), Leaf(0, 0), Sum((0, 1), (0.3, 0.7))], 2, 2)
        out = split(c, 1)
        assert out.scope_vars() == frozenset({0, 1})
        assert detect_q_deterministic(out, [1]).is_qdet[out.root]
        # full-assignment values are preserved (partial marginals change:
        # the variable was implicitly marginalized before, now it is in scope)
        for bits in itertools.product((0, 1), repeat=2):
            x = dict(enumerate(bits))
            assert out.evaluate_marginal(x) == pytest.approx(
                c.evaluate_marginal(x), rel=1e-12
            )

    def test_transforms_preserve_structural_properties(self):
        for seed in range(15):
            c = random_circuit(6, seed)
            for out in (split(c, 2), condition(c, {1: 0}), cleanup(c)):
                assert check_smooth(out) == (True, None)
                assert check_decomposable(out) == (True, None)

    def test_split_on_both_values_dead_raises(self):
        # impossible by construction on a live circuit; force via conditioning
        c = Circuit([Leaf(0, 1), Leaf(1, 1), Product((0, 1))], 2, 2)
        with pytest.raises((EmptyCircuitError, InfeasibleEvidenceError)):
            split(condition(c, {0: 0}), 0)
