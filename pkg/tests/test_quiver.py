import itertools

import pytest
from hypothesis import given, strategies as st

from gentlex import fixtures
from gentlex.quiver import (
    QuiverError,
    allowed_paths,
    compose,
    has_full_relation_cycle,
    has_oriented_cycle,
    make_quiver,
    parse_quiver,
    serialize_quiver,
    validate_gentle,
)


class TestParsing:
    def test_round_trip(self):
        q = fixtures.delta1()
        assert parse_quiver(serialize_quiver(q)) == q

    def test_comments_and_blank_lines(self):
        q = parse_quiver("# A2\nvertex 1\n\nvertex 2\narrow a 1 2  # the arrow\n")
        assert q.vertices == ("1", "2")

    @pytest.mark.parametrize(
        "text, fragment",
        [
            ("vertex 1\nvertex 1\n", "line 2: duplicate"),
            ("vertex 1\narrow a 1 2\n", "line 2: unknown vertex"),
            ("vertex 1\narrow a 1 1\nrel a b\n", "line 3: relation references unknown arrow"),
            ("vertex 1\nvertex 2\nvertex 3\narrow a 1 2\narrow b 3 1\nrel a b\n", "line 6: relation a b is not composable"),
            ("vertex\n", "line 1: syntax error"),
        ],
    )
    def test_errors_carry_line_numbers(self, text, fragment):
        with pytest.raises(QuiverError, match=fragment):
            parse_quiver(text)


class TestValidation:
    def test_annulus_fixtures_are_gentle(self):
        for q in (fixtures.delta1(), fixtures.delta2()):
            assert validate_gentle(q).ok
            assert not has_full_relation_cycle(q)

    def test_degree_violation(self):
        q = make_quiver([1, 2], [("a", 1, 2), ("b", 1, 2), ("c", 1, 2)])
        rep = validate_gentle(q)
        assert not rep.ok
        assert any("source of 3" in v for v in rep.violations)

    def test_two_allowed_successors(self):
        q = make_quiver([1, 2, 3, 4], [("a", 1, 2), ("b", 2, 3), ("c", 2, 4)])
        assert any("allowed successors" in v for v in validate_gentle(q).violations)

    def test_all_allowed_cycle_is_flagged(self):
        q = make_quiver([1], [("a", 1, 1)])
        assert any(v.startswith("all-allowed cycle") for v in validate_gentle(q).violations)

    def test_loop_with_square_relation(self):
        q = fixtures.loop_square_zero()
        assert validate_gentle(q).ok
        assert has_full_relation_cycle(q)

    def test_oriented_cycles(self):
        assert has_oriented_cycle(fixtures.delta2())
        assert not has_oriented_cycle(fixtures.delta1())


class TestPathAlgebra:
    def test_dimensions(self, A2, A3, KR):
        assert A2.dim == 3
        assert A3.dim == 6
        assert KR.dim == 4

    def test_delta1_paths_respect_relation(self, D1):
        q = D1.quiver
        assert [p.arrows for p in allowed_paths(q, "g1", "g3")] == [("a", "b")]
        assert [p.arrows for p in allowed_paths(q, "g5", "g3")] == [("e", "d")]
        # e d is allowed, c d is not
        assert D1.parse_path("e d").arrows == ("e", "d")
        with pytest.raises(QuiverError):
            D1.parse_path("c d")

    def test_composition_typing(self, A2):
        a = A2.element("a")
        with pytest.raises(ValueError):
            compose(a, a)
        assert compose(A2.identity("1"), a) == a
        assert compose(a, A2.identity("2")) == a

    def test_unit_inverse(self, A3):
        x = A3.identity("1").scale(3)
        assert compose(x, x.inverse()) == A3.identity("1")
        with pytest.raises(ZeroDivisionError):
            A3.zero("1", "1").inverse()


def _paths_by_brute_force(q, length_cap=6):
    # every arrow word of bounded length that is composable and avoids relations
    out = {(v, v, ()) for v in q.vertices}
    for n in range(1, length_cap + 1):
        for word in itertools.product(q.arrows, repeat=n):
            if any(x.target != y.source or q.is_relation(x.name, y.name) for x, y in zip(word, word[1:])):
                continue
            out.add((word[0].source, word[-1].target, tuple(a.name for a in word)))
    return out


@pytest.mark.parametrize("name", ["a2", "a3", "kronecker", "delta1", "delta2"])
def test_path_basis_matches_brute_force(name):
    q = fixtures.NAMED[name]()
    alg = q.with_prime()
    ours = {(p.source, p.target, p.arrows) for p in alg.paths}
    assert ours == _paths_by_brute_force(q)


@given(st.sampled_from(["a3", "delta1", "delta2"]), st.data())
def test_multiplication_is_associative(name, data):
    alg = fixtures.NAMED[name]().with_prime()
    x = data.draw(st.sampled_from(alg.paths))
    ys = [p for p in alg.paths if p.source == x.target]
    y = data.draw(st.sampled_from(ys))
    zs = [p for p in alg.paths if p.source == y.target]
    z = data.draw(st.sampled_from(zs))
    X, Y, Z = (alg.element(p) for p in (x, y, z))
    assert compose(compose(X, Y), Z) == compose(X, compose(Y, Z))
