import pytest

from app.core import special
from app.core.config import settings
from app.core.errors import BudgetExceededError, DivisibilityError, InvalidInputError
from app.core.expr import eval_ext, hypercube_expr
from app.core.graph import (
    Graph,
    disjoint_union,
    gen_clique,
    gen_cycle,
    gen_kneser,
    gen_path,
    mask_to_vertices,
    random_connected_graph,
    random_graph,
    subdivide_clique,
)
from app.core.homcount import expression_hom_counter
from app.core.oracle import (
    brute_hom,
    brute_hom_consistent_with_split,
    count_hom_bounded_degree,
)
from app.core.special import (
    KneserInstance,
    SubdividedInstance,
    count_consistent_with_split,
    count_hom_by_components,
    count_hom_kneser,
    count_hom_subdivided,
    per_split_counts,
)

SUBDIVISIONS = [gen_clique(1), gen_clique(2), gen_path(3)]


class TestSubdivided:
    def test_edge_into_subdivided_edge(self):
        assert count_hom_subdivided(SubdividedInstance(gen_clique(2), 2, gen_clique(1))) == 4

    def test_single_vertex(self):
        # K_3 을 K_1 로 세분하면 정점 6 개
        assert count_hom_subdivided(SubdividedInstance(gen_clique(1), 3, gen_clique(1))) == 6

    def test_empty_source(self):
        assert count_hom_subdivided(SubdividedInstance(Graph(0), 3, gen_clique(1))) == 1

    def test_invalid_parameters(self):
        with pytest.raises(InvalidInputError):
            SubdividedInstance(gen_clique(2), 0, gen_clique(1))
        with pytest.raises(InvalidInputError):
            SubdividedInstance(gen_clique(2), 2, Graph(0))

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("u_index", range(len(SUBDIVISIONS)))
    def test_matches_brute_force(self, rng, n, u_index):
        u = SUBDIVISIONS[u_index]
        target = subdivide_clique(n, u).graph
        for _ in range(8):
            g = random_connected_graph(rng, rng.randint(1, 4))
            assert count_hom_subdivided(SubdividedInstance(g, n, u)) == brute_hom(g, target)

    def test_disconnected_source_multiplies(self):
        g = disjoint_union(gen_path(2), gen_path(3))
        target = subdivide_clique(3, gen_clique(2)).graph
        assert count_hom_subdivided(SubdividedInstance(g, 3, gen_clique(2))) == brute_hom(g, target)

    def test_per_split_counts(self, rng):
        g = random_connected_graph(rng, 4)
        inst = SubdividedInstance(g, 3, gen_path(3))
        sub = subdivide_clique(3, gen_path(3))
        counts = per_split_counts(inst)
        assert sum(counts.values()) == count_hom_subdivided(inst)
        for a_mask, value in counts.items():
            assert value == brute_hom_consistent_with_split(
                g, sub.graph, sub.hub_vertices, mask_to_vertices(a_mask)
            )

    def test_dependent_split_is_zero(self):
        assert count_consistent_with_split(gen_clique(2), [0, 1], 3, gen_clique(1)) == 0

    def test_expression_counter_for_u(self, rng):
        expr = hypercube_expr(2)
        u = eval_ext(expr).graph
        counter = expression_hom_counter(expr)
        for _ in range(5):
            g = random_connected_graph(rng, rng.randint(1, 4))
            fast = count_hom_subdivided(SubdividedInstance(g, 2, u, counter))
            assert fast == count_hom_subdivided(SubdividedInstance(g, 2, u))

    def test_work_budget(self):
        settings.budget = 16
        with pytest.raises(BudgetExceededError):
            count_hom_subdivided(SubdividedInstance(gen_path(4), 3, gen_clique(1)))

    @pytest.mark.slow
    def test_larger_sources(self, rng):
        for n in (2, 3):
            for u in SUBDIVISIONS:
                target = subdivide_clique(n, u).graph
                g = random_connected_graph(rng, 6)
                assert count_hom_subdivided(SubdividedInstance(g, n, u)) == brute_hom(g, target)

    @pytest.mark.slow
    def test_random_sources_up_to_six_vertices(self, rng):
        for n in (2, 3, 4):
            for u in SUBDIVISIONS:
                target = subdivide_clique(n, u).graph
                for _ in range(4):
                    g = random_connected_graph(rng, rng.randint(5, 6))
                    expected = count_hom_bounded_degree(g, target)
                    assert count_hom_subdivided(SubdividedInstance(g, n, u)) == expected


class TestKneser:
    def test_edge_into_petersen(self):
        assert count_hom_kneser(KneserInstance(gen_clique(2), 5, 2)) == 30

    def test_k_one_is_coloring(self):
        assert count_hom_kneser(KneserInstance(gen_cycle(5), 3, 1)) == 30

    @pytest.mark.parametrize("n, k", [(4, 2), (5, 2)])
    def test_matches_brute_force(self, rng, n, k):
        target = gen_kneser(n, k)
        for _ in range(10):
            g = random_graph(rng, rng.randint(1, 5))
            assert count_hom_kneser(KneserInstance(g, n, k)) == brute_hom(g, target)

    def test_blowup_budget(self):
        settings.partition_max_ground = 4
        with pytest.raises(BudgetExceededError):
            count_hom_kneser(KneserInstance(gen_path(3), 5, 2))

    def test_divisibility_violation_reported(self, monkeypatch):
        monkeypatch.setattr(special, "count_colorings", lambda g, n: 7)
        with pytest.raises(DivisibilityError) as info:
            count_hom_kneser(KneserInstance(gen_clique(2), 5, 2))
        assert info.value.details == {"colorings": 7, "divisor": 4}

    def test_invalid_parameters(self):
        with pytest.raises(InvalidInputError):
            KneserInstance(gen_clique(2), 0, 2)


class TestComponents:
    def test_product_over_components(self):
        g = disjoint_union(gen_clique(2), gen_clique(3))
        h = gen_clique(3)
        assert count_hom_by_components(g, lambda c: brute_hom(c, h)) == brute_hom(g, h)
