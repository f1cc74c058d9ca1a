import math

import networkx as nx
import pytest

from app.core.errors import BudgetExceededError, InvalidInputError
from app.core.graph import (
    Graph,
    LabeledGraph,
    PartialLabeling,
    blowup,
    complement,
    connected_components,
    disjoint_union,
    gen_clique,
    gen_cycle,
    gen_hypercube,
    gen_kneser,
    gen_path,
    induced_labeled_subgraph,
    induced_subgraph,
    is_bipartite,
    kneser_vertices,
    permute,
    random_graph,
    subdivide_clique,
    to_networkx,
)


class TestGraph:
    def test_edges_are_normalized(self):
        g = Graph(3, [(2, 0), (1, 2)])
        assert g.edge_list() == [(0, 2), (1, 2)]
        assert g.has_edge(2, 0) and g.has_edge(0, 2)

    @pytest.mark.parametrize(
        "n, edges",
        [(2, [(0, 0)]), (2, [(0, 2)]), (3, [(0, 1), (1, 0)]), (-1, [])],
    )
    def test_invalid_graphs_rejected(self, n, edges):
        with pytest.raises(InvalidInputError):
            Graph(n, edges)

    def test_adjacency_and_degrees(self):
        g = gen_path(4)
        assert g.adjacency[1] == 0b101
        assert g.degree_sequence() == [2, 2, 1, 1]
        assert g.max_degree() == 2
        assert g.is_independent(0b1010)
        assert not g.is_independent(0b0110)

    def test_labeled_graph_validates_labels(self):
        with pytest.raises(InvalidInputError):
            LabeledGraph(gen_path(2), 2, (1, 3))
        with pytest.raises(InvalidInputError):
            LabeledGraph(gen_path(2), 2, (1,))

    def test_relabel(self):
        lg = LabeledGraph(gen_path(3), 2, (1, 2, 1))
        assert lg.relabel((2, 2)).labels == (2, 2, 2)
        assert lg.label_counts() == {1: 2, 2: 1}


class TestPartialLabeling:
    def test_code_uses_vertex_zero_as_least_significant_digit(self):
        labeling = PartialLabeling((2, 0, 1))
        assert labeling.code(2) == 2 + 0 * 3 + 1 * 9
        assert PartialLabeling.from_code(11, 3, 2) == labeling

    def test_support(self):
        labeling = PartialLabeling((0, 1, 0, 2))
        assert labeling.support == frozenset({1, 3})
        assert labeling.support_mask == 0b1010
        assert not labeling.is_full()

    def test_label_above_alphabet_rejected(self):
        with pytest.raises(InvalidInputError):
            PartialLabeling((3,)).code(2)


class TestGenerators:
    def test_clique_path_cycle(self):
        assert gen_clique(4).num_edges == 6
        assert gen_path(1).num_edges == 0
        assert gen_cycle(5).degree_sequence() == [2] * 5
        with pytest.raises(InvalidInputError):
            gen_cycle(2)

    def test_hypercube_two(self):
        g = gen_hypercube(2)
        assert (g.n, g.num_edges) == (4, 4)

    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_hypercube_matches_networkx(self, n):
        assert nx.is_isomorphic(to_networkx(gen_hypercube(n)), nx.hypercube_graph(n))

    def test_hypercube_dimension_guard(self):
        with pytest.raises(BudgetExceededError):
            gen_hypercube(21)
        with pytest.raises(BudgetExceededError):
            gen_hypercube(-1)

    def test_kneser_petersen(self, petersen):
        assert (petersen.n, petersen.num_edges) == (10, 15)
        assert nx.is_isomorphic(to_networkx(petersen), nx.petersen_graph())

    def test_kneser_colex_order(self):
        assert kneser_vertices(4, 2)[:3] == [(1, 2), (1, 3), (2, 3)]

    def test_kneser_edge_cases(self):
        assert gen_kneser(3, 4).n == 0
        assert gen_kneser(4, 2).num_edges == 3
        with pytest.raises(InvalidInputError):
            gen_kneser(0, 1)

    def test_subdivide_clique_layout(self):
        sub = subdivide_clique(3, gen_path(2))
        g = sub.graph
        assert g.n == 3 + 3 * 2
        assert sub.hub_vertices == (0, 1, 2)
        assert sub.copies[(0, 1)] == (3, 4)
        assert g.has_edge(3, 4)
        # 클리크 정점끼리는 인접하지 않는다
        assert all(not g.has_edge(i, j) for i in range(3) for j in range(3) if i != j)
        assert all(g.has_edge(0, t) and g.has_edge(1, t) for t in sub.copies[(0, 1)])

    def test_blowup(self):
        b = blowup(gen_path(2), 2)
        assert b.n == 4
        assert b.num_edges == 1 + 1 + 4
        assert b.has_edge(0, 1) and b.has_edge(1, 3)

    @pytest.mark.parametrize("n", range(1, 7))
    def test_hypercube_is_regular_and_bipartite(self, n):
        g = gen_hypercube(n)
        assert g.degree_sequence() == [n] * 2**n
        assert is_bipartite(g)

    def test_blowup_sizes(self, rng):
        for _ in range(40):
            g = random_graph(rng, rng.randint(1, 8))
            k = rng.randint(1, 3)
            b = blowup(g, k)
            assert b.n == k * g.n
            assert b.num_edges == g.n * math.comb(k, 2) + g.num_edges * k * k

    def test_subdivide_clique_sizes(self, rng):
        for _ in range(40):
            n = rng.randint(1, 8)
            u = random_graph(rng, rng.randint(1, 4))
            g = subdivide_clique(n, u).graph
            pairs = math.comb(n, 2)
            assert g.n == n + pairs * u.n
            assert g.num_edges == pairs * (u.num_edges + 2 * u.n)


class TestUtilities:
    def test_induced_subgraph_preserves_order(self):
        g = gen_cycle(5)
        sub = induced_subgraph(g, [4, 0, 1])
        assert sub.edge_list() == [(0, 1), (0, 2)]

    def test_disjoint_union_and_components(self):
        g = disjoint_union(gen_path(2), gen_cycle(3))
        assert g.n == 5
        assert connected_components(g) == [frozenset({0, 1}), frozenset({2, 3, 4})]

    def test_permute_is_isomorphic(self, rng):
        g = random_graph(rng, 6)
        perm = list(range(6))
        rng.shuffle(perm)
        assert nx.is_isomorphic(to_networkx(g), to_networkx(permute(g, perm)))

    def test_complement_and_bipartite(self):
        assert complement(gen_clique(3)).num_edges == 0
        assert is_bipartite(gen_cycle(4))
        assert not is_bipartite(gen_cycle(5))

    def test_induced_labeled_subgraph_keeps_labels(self):
        lg = LabeledGraph(gen_path(4), 2, (1, 2, 2, 1))
        sub = induced_labeled_subgraph(lg, [3, 1, 2])
        assert sub.labels == (2, 2, 1)
        assert sub.graph.edge_list() == [(0, 1), (1, 2)]

    def test_induced_subgraph_on_every_vertex_is_identity(self, rng):
        for _ in range(20):
            g = random_graph(rng, rng.randint(1, 7))
            assert induced_subgraph(g, range(g.n)) == g
