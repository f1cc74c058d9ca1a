import logging

import networkx as nx
import pytest

from app.core.config import settings
from app.core.errors import BudgetExceededError, InvalidInputError
from app.core.expr import (
    ExtExpr,
    eval_classic,
    eval_ext,
    is_safe_classic,
    random_classic_expr,
    random_ext_expr,
)
from app.core.graph import (
    Graph,
    LabeledGraph,
    PartialLabeling,
    gen_clique,
    gen_cycle,
    gen_path,
    permute,
    random_graph,
    to_networkx,
)
from app.core.oracle import brute_labeled_iso
from app.core.synthesis import (
    GADGET_D_EDGES,
    build_synth_table,
    extended_width,
    gadget_graph,
    gadget_reduce,
    graph_iso,
    labeled_iso,
    synthesize,
)


def _shuffled(rng, lg: LabeledGraph) -> LabeledGraph:
    perm = list(range(lg.n))
    rng.shuffle(perm)
    labels = [0] * lg.n
    for v, image in enumerate(perm):
        labels[image] = lg.labels[v]
    return LabeledGraph(permute(lg.graph, perm), lg.k, tuple(labels))


def _random_labeled(rng, n, k) -> LabeledGraph:
    return LabeledGraph(random_graph(rng, n), k, tuple(rng.randint(1, k) for _ in range(n)))


class TestLabeledIso:
    def test_returns_valid_bijection(self, rng):
        for _ in range(30):
            a = _random_labeled(rng, rng.randint(1, 7), 2)
            b = _shuffled(rng, a)
            mapping = labeled_iso(a, b)
            assert mapping is not None
            assert sorted(mapping) == list(range(a.n))
            assert all(a.labels[v] == b.labels[mapping[v]] for v in range(a.n))
            assert all(b.graph.has_edge(mapping[u], mapping[v]) for u, v in a.graph.edges)

    def test_labels_distinguish(self):
        a = LabeledGraph(gen_path(3), 2, (1, 2, 1))
        b = LabeledGraph(gen_path(3), 2, (2, 1, 1))
        assert labeled_iso(a, b) is None

    def test_agrees_with_brute_force(self, rng):
        for _ in range(60):
            n = rng.randint(1, 5)
            a = _random_labeled(rng, n, 2)
            b = _random_labeled(rng, n, 2) if rng.random() < 0.5 else _shuffled(rng, a)
            assert (labeled_iso(a, b) is not None) == brute_labeled_iso(a, b)

    def test_regular_graphs_refinement_cannot_split(self):
        # 색 정제로 구분되지 않는 쌍: C_6 과 두 개의 삼각형
        two_triangles = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        assert graph_iso(gen_cycle(6), two_triangles) is None
        assert graph_iso(gen_cycle(6), permute(gen_cycle(6), [3, 1, 5, 0, 2, 4])) is not None

    def test_empty_graphs(self):
        assert graph_iso(Graph(0), Graph(0)) == ()


class TestGadget:
    def test_d_is_the_expected_small_graph(self):
        d = Graph(6, GADGET_D_EDGES)
        assert d.num_edges == 10
        assert d.degree_sequence() == [5, 3, 3, 3, 3, 3]

    def test_vertex_count(self):
        lg = LabeledGraph(gen_path(3), 2, (1, 2, 1))
        layout = gadget_graph(lg, 2)
        n, q = 3, 2
        assert layout.graph.n == n + 6 + 5 * q + q * (n + 2) + q
        assert len(layout.apexes) == q
        assert all(len(clique) == n + 2 for clique in layout.cliques)

    def test_apex_wiring(self):
        lg = LabeledGraph(gen_path(3), 2, (1, 2, 1))
        layout = gadget_graph(lg, 2)
        g = layout.graph
        assert set(g.neighbors(layout.apexes[0])) == {0, 2, layout.junctions[0]}
        assert set(g.neighbors(layout.apexes[1])) == {1, layout.junctions[1]}

    def test_chain_shorter_than_alphabet_rejected(self):
        with pytest.raises(InvalidInputError):
            gadget_graph(LabeledGraph(gen_path(2), 3, (1, 3)), 2)

    def test_mismatched_inputs_rejected(self):
        with pytest.raises(InvalidInputError):
            gadget_reduce(
                LabeledGraph(gen_path(2), 2, (1, 2)), LabeledGraph(gen_path(3), 2, (1, 2, 1))
            )

    def test_preserves_isomorphism(self, rng):
        for _ in range(50):
            n = rng.randint(1, 4)
            k = rng.randint(1, 2)
            a = _random_labeled(rng, n, k)
            b = _shuffled(rng, a) if rng.random() < 0.5 else _random_labeled(rng, n, k)
            expected = brute_labeled_iso(a, b)
            inst = gadget_reduce(a, b)
            assert inst.q == k and inst.n == n
            assert (graph_iso(inst.g_prime, inst.h_prime) is not None) == expected

    def test_networkx_cross_check(self):
        a = LabeledGraph(gen_path(3), 2, (1, 2, 1))
        b = LabeledGraph(gen_path(3), 2, (2, 1, 1))
        inst = gadget_reduce(a, b)
        assert not nx.is_isomorphic(to_networkx(inst.g_prime), to_networkx(inst.h_prime))
        same = gadget_reduce(a, LabeledGraph(gen_path(3), 2, (1, 2, 1)))
        assert nx.is_isomorphic(to_networkx(same.g_prime), to_networkx(same.h_prime))


def _assert_synthesizes(g: Graph, k: int) -> None:
    table = build_synth_table(g, k)
    found = table.first_full()
    assert found is not None
    labeling, node = found
    assert labeling.is_full()
    expected = LabeledGraph(g, k, labeling.values)
    assert labeled_iso(eval_ext(ExtExpr(k, node)), expected) is not None


class TestSynthesis:
    @pytest.mark.parametrize("n", range(1, 6))
    def test_cliques(self, n):
        _assert_synthesizes(gen_clique(n), 2)

    def test_four_cycle(self):
        _assert_synthesizes(gen_cycle(4), 2)

    def test_round_trip_on_k4(self):
        expr = synthesize(gen_clique(4), 2)
        assert expr is not None
        assert graph_iso(eval_ext(expr).graph, gen_clique(4)) is not None

    def test_path_needs_one_label_with_copies(self):
        assert extended_width(gen_path(4), 2) == 1

    def test_width_one_without_copy_step(self):
        settings.synth_beta_max_k = 0
        assert synthesize(gen_path(4), 1) is None
        assert extended_width(gen_clique(3), 2) == 1

    def test_table_status(self):
        table = build_synth_table(gen_path(2), 1)
        assert table.status(PartialLabeling((1, 0))) == "expression"
        assert table.status(PartialLabeling((1, 1))) == "expression"
        assert table.filled() == 3

    def test_graphs_from_random_expressions(self, rng):
        for _ in range(25):
            expr = random_ext_expr(rng, 2, max_vertices=5, max_depth=4, max_copies=1)
            g = eval_ext(expr).graph
            found = synthesize(g, 2)
            assert found is not None
            assert graph_iso(eval_ext(found).graph, g) is not None

    def test_empty_graph_rejected(self):
        with pytest.raises(InvalidInputError):
            synthesize(Graph(0), 2)

    def test_table_budget(self):
        settings.table_budget = 50
        with pytest.raises(BudgetExceededError):
            synthesize(gen_clique(4), 2)

    def test_graphs_from_classic_expressions(self, rng):
        checked = 0
        for _ in range(400):
            expr = random_classic_expr(rng, 2, max_vertices=5)
            if not is_safe_classic(expr):
                continue
            g = eval_classic(expr).graph
            found = synthesize(g, 2)
            assert found is not None
            assert graph_iso(eval_ext(found).graph, g) is not None
            checked += 1
            if checked == 60:
                break
        assert checked >= 40

    def test_capped_beta_search_warns(self, caplog):
        settings.synth_max_s_classes = 0
        logger = logging.getLogger("homcount.synthesis")
        logger.addHandler(caplog.handler)
        try:
            assert synthesize(gen_path(4), 1) is None
        finally:
            logger.removeHandler(caplog.handler)
        assert any(
            record.levelno == logging.WARNING and "S-classes" in record.getMessage()
            for record in caplog.records
        )


@pytest.mark.slow
class TestLargerSweeps:
    def test_gadget_preserves_isomorphism_up_to_six_vertices(self, rng):
        for _ in range(40):
            n = rng.randint(5, 6)
            k = rng.randint(1, 3)
            a = _random_labeled(rng, n, k)
            b = _shuffled(rng, a) if rng.random() < 0.5 else _random_labeled(rng, n, k)
            expected = brute_labeled_iso(a, b)
            inst = gadget_reduce(a, b)
            assert (graph_iso(inst.g_prime, inst.h_prime) is not None) == expected
