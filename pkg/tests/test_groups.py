"""Group models: axioms, word metrics, balls, parsing, budgets."""

import threading

import pytest

from propertyo import (
    BudgetExceededError,
    DirectProduct,
    FreeAbelian,
    FreeGroup,
    Heisenberg,
    ModelMismatchError,
    parse_group,
)

import oracles

MODEL_DESCRIPTORS = [
    "free:1",
    "free:2",
    "free:3",
    "abelian:1",
    "abelian:2",
    "abelian:3",
    "heisenberg",
    "cyclic:1",
    "cyclic:2",
    "cyclic:5",
    "cyclic:7",
    "product:abelian:1,cyclic:3",
    "product:cyclic:2,cyclic:5",
]


@pytest.fixture(params=MODEL_DESCRIPTORS)
def model(request):
    return parse_group(request.param)


class TestAxioms:
    def test_identity_is_neutral(self, model):
        e = model.identity
        for x in model.ball(3):
            assert x * e == x
            assert e * x == x

    def test_inverses(self, model):
        e = model.identity
        for x in model.ball(3):
            assert x * ~x == e
            assert ~x * x == e

    def test_associativity(self, model):
        small = sorted(model.ball(2), key=model.sort_key)
        for x in small:
            for y in small:
                for z in small:
                    assert (x * y) * z == x * (y * z)

    def test_generating_set_symmetric_without_identity(self, model):
        gens = set(model.generators)
        assert model.identity not in gens
        assert {~g for g in gens} == gens


class TestWordMetric:
    def test_word_length_zero_iff_identity(self, model):
        for x in model.ball(3):
            assert (model.word_length(x) == 0) == (x == model.identity)

    def test_distance_is_left_invariant(self, model):
        pts = sorted(model.ball(2), key=model.sort_key)
        for g in pts:
            for x in pts:
                for y in pts:
                    assert model.distance(g * x, g * y) == model.distance(x, y)

    def test_triangle_inequality(self, model):
        pts = sorted(model.ball(2), key=model.sort_key)
        for x in pts:
            for y in pts:
                for z in pts:
                    assert model.distance(x, z) <= model.distance(x, y) + model.distance(y, z)

    def test_distance_symmetric_and_zero_on_diagonal(self, model):
        pts = sorted(model.ball(2), key=model.sort_key)
        for x in pts:
            assert model.distance(x, x) == 0
            for y in pts:
                assert model.distance(x, y) == model.distance(y, x)

    def test_word_length_agrees_with_bfs(self, model):
        dist = oracles.bfs_distances(
            model._id_value(),
            [g.value for g in model.generators],
            model._mul_values,
            3,
        )
        for x in model.ball(3):
            assert model.word_length(x) == dist[x.value]


class TestSpotChecks:
    def test_free_group_examples(self):
        f2 = parse_group("free:2")
        assert str(f2.parse_element("a.b") * f2.parse_element("B.a")) == "a.a"
        assert str(~f2.parse_element("a.B")) == "b.A"
        assert f2.word_length(f2.parse_element("a.b.A")) == 3
        assert f2.distance(f2.parse_element("a"), f2.parse_element("b")) == 2

    def test_abelian_examples(self):
        z2 = parse_group("abelian:2")
        assert z2.vector((1, 2)) * z2.vector((3, -1)) == z2.vector((4, 1))
        assert z2.word_length(z2.vector((3, -2))) == 5
        z3 = parse_group("abelian:3")
        assert ~z3.vector((2, 0, -1)) == z3.vector((-2, 0, 1))

    def test_heisenberg_against_matrix_oracle(self):
        h = parse_group("heisenberg")
        triples = [t.value for t in h.ball(3)]
        for a in triples:
            for b in triples:
                assert h._mul_values(a, b) == oracles.heis_mul(a, b)
            assert h._inv_value(a) == oracles.heis_inv(a)

    def test_heisenberg_examples(self):
        h = parse_group("heisenberg")
        assert h.triple(1, 0, 0) * h.triple(0, 1, 0) == h.triple(1, 1, 1)
        assert ~h.triple(1, 1, 1) == h.triple(-1, -1, 0)
        assert h.word_length(h.triple(0, 0, 1)) == 4
        assert h.distance(h.identity, h.triple(0, 0, 1)) == 4

    def test_free_reduction_matches_oracle(self):
        import random

        f2 = parse_group("free:2")
        rng = random.Random(7)
        for _ in range(300):
            letters = [rng.choice([1, -1, 2, -2]) for _ in range(rng.randint(0, 12))]
            assert f2.word(letters).value == oracles.free_reduce(letters)

    def test_mixed_model_operands_rejected(self):
        f2 = parse_group("free:2")
        z1 = parse_group("abelian:1")
        with pytest.raises(ModelMismatchError):
            f2.multiply(f2.identity, z1.identity)
        with pytest.raises(ModelMismatchError):
            z1.word_length(f2.identity)


class TestBalls:
    def test_ball_zero_is_identity_and_nested(self, model):
        assert model.ball(0) == frozenset([model.identity])
        for n in range(3):
            assert model.ball(n) <= model.ball(n + 1)

    def test_ball_is_exactly_the_word_length_sublevel(self, model):
        for n in range(4):
            for x in model.ball(4):
                assert (x in model.ball(n)) == (model.word_length(x) <= n)

    def test_free2_first_ball(self):
        f2 = parse_group("free:2")
        assert {str(x) for x in f2.ball(1)} == {"e", "a", "A", "b", "B"}

    def test_free_ball_closed_form(self):
        for k in (2, 3):
            fk = parse_group(f"free:{k}")
            for n in range(6 if k == 2 else 4):
                assert len(fk.ball(n)) == oracles.free_ball_size(k, n)

    def test_abelian2_ball_closed_form(self):
        z2 = parse_group("abelian:2")
        for n in range(8):
            assert len(z2.ball(n)) == oracles.z2_ball_size(n)
        assert len(z2.ball(2)) == 13

    def test_cyclic_ball_saturates(self):
        c5 = parse_group("cyclic:5")
        assert len(c5.ball(2)) == 5
        assert c5.ball(2) == c5.ball(9) == c5.all_elements()

    def test_ball_matches_independent_bfs(self, model):
        got = {x.value for x in model.ball(3)}
        expected = oracles.bfs_ball_values(
            model._id_value(),
            [g.value for g in model.generators],
            model._mul_values,
            3,
        )
        assert got == expected

    def test_polynomial_growth_slope(self):
        import math

        for desc, degree in (("abelian:1", 1), ("abelian:2", 2), ("heisenberg", 4)):
            m = parse_group(desc)
            for n in range(1, 8):
                assert math.log(len(m.ball(n))) <= degree * math.log(2 * n + 1)

    def test_budget_guard(self):
        f2 = parse_group("free:2", element_budget=100)
        f2.ball(2)
        with pytest.raises(BudgetExceededError):
            f2.ball(5)

    def test_concurrent_ball_readers(self):
        h = parse_group("heisenberg")
        results = []

        def reader():
            results.append(h.ball(4))

        threads = [threading.Thread(target=reader) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(results) == 8
        assert all(r == results[0] for r in results)


class TestProducts:
    def test_componentwise_operations(self):
        p = parse_group("product:abelian:1,cyclic:3")
        z1, c3 = p.factors
        x = p.pack(z1.vector([2]), c3.residue(1))
        y = p.pack(z1.vector([-1]), c3.residue(2))
        assert x * y == p.pack(z1.vector([1]), c3.residue(0))
        assert ~x == p.pack(z1.vector([-2]), c3.residue(2))

    def test_word_length_is_sum_of_component_lengths(self):
        p = parse_group("product:abelian:1,cyclic:5")
        z1, c5 = p.factors
        for x in p.ball(4):
            expected = z1.word_length(z1.element(x.value[0])) + c5.word_length(
                c5.element(x.value[1])
            )
            assert p.word_length(x) == expected

    def test_finite_product_enumerates(self):
        p = parse_group("product:cyclic:2,cyclic:5")
        assert p.is_finite
        assert len(p.all_elements()) == 10

    def test_nested_product_descriptor(self):
        p = parse_group("product:(product:cyclic:2,cyclic:3),abelian:1")
        assert p.is_finite is False
        inner = p.factors[0]
        assert isinstance(inner, DirectProduct)
        assert len(inner.all_elements()) == 6


class TestParsing:
    @pytest.mark.parametrize(
        "desc,cls",
        [
            ("free:2", FreeGroup),
            ("abelian:3", FreeAbelian),
            ("heisenberg", Heisenberg),
            ("product:abelian:1,cyclic:2", DirectProduct),
        ],
    )
    def test_descriptor_dispatch(self, desc, cls):
        assert isinstance(parse_group(desc), cls)

    def test_bad_descriptors(self):
        for bad in ("free", "free:0", "abelian:x", "cyclic:-3", "product:free:2", "nope:1"):
            with pytest.raises(ValueError):
                parse_group(bad)

    def test_element_round_trip(self, model):
        for x in model.ball(3):
            assert model.parse_element(str(x)) == x

    def test_free_parsing(self):
        f2 = parse_group("free:2")
        assert f2.parse_element("e") == f2.identity
        assert f2.parse_element("a.A.b") == f2.parse_element("b")
        with pytest.raises(ValueError):
            f2.parse_element("a.c")  # rank 2 has no generator c
        with pytest.raises(ValueError):
            f2.parse_element("a,b")

    def test_vector_parsing(self):
        z1 = parse_group("abelian:1")
        assert z1.parse_element("3") == z1.parse_element("(3)") == z1.vector([3])
        z2 = parse_group("abelian:2")
        assert z2.parse_element("(3,-2)") == z2.vector((3, -2))
        with pytest.raises(ValueError):
            z2.parse_element("(1,2,3)")

    def test_cyclic_parsing_reduces_mod_m(self):
        c7 = parse_group("cyclic:7")
        assert c7.parse_element("-1") == c7.residue(6)
        assert c7.parse_element("9") == c7.residue(2)
