import itertools

import pytest
from hypothesis import given, settings, strategies as st

from gentlex import fixtures
from gentlex.combinatorics import (
    OrderedDissection,
    PreconditionError,
    can_complete,
    cut_collection,
    cut_vertex,
    dual_flags,
    enumerate_gentle,
    exists_full_exceptional,
    find_incompletable_fixture,
    gen_surface_quiver,
    induced_collection_quiver,
    is_exceptional_dissection,
    koszul_dual_quiver,
    linear_extensions,
)
from gentlex.quiver import connected_components, has_full_relation_cycle, has_oriented_cycle, make_quiver
from gentlex.ribbon import is_loop_arc, surface_invariants

CORPUS = [q for n, m in [(2, 2), (3, 3), (3, 4), (4, 4)] for q in enumerate_gentle(n, m)]
ACYCLIC = [q for q in CORPUS if not has_oriented_cycle(q)]


def reachability_extensions(q):
    # oracle: filter all permutations by "u reaches v implies u before v"
    reach = {v: {v} for v in q.vertices}
    changed = True
    while changed:
        changed = False
        for a in q.arrows:
            new = reach[a.target] - reach[a.source]
            if new:
                reach[a.source] |= new
                changed = True
    out = []
    for perm in itertools.permutations(sorted(q.vertices)):
        pos = {v: i for i, v in enumerate(perm)}
        if all(pos[u] <= pos[v] for u in q.vertices for v in reach[u]):
            out.append(perm)
    return out


class TestExceptionalDissection:
    def test_annulus_examples(self):
        assert is_exceptional_dissection(fixtures.delta1())
        assert not is_exceptional_dissection(fixtures.delta2())
        assert is_exceptional_dissection(fixtures.a2())

    def test_punctured_rejected(self):
        with pytest.raises(PreconditionError):
            is_exceptional_dissection(fixtures.loop_square_zero())


class TestLinearExtensions:
    def test_small(self):
        assert list(linear_extensions(fixtures.a2())) == [("1", "2")]
        assert list(linear_extensions(fixtures.kronecker())) == [("1", "2")]

    def test_delta1_first_and_count(self):
        q = fixtures.delta1()
        exts = list(linear_extensions(q))
        assert exts[0] == ("g1", "g2", "g5", "g4", "g3")
        assert exts == reachability_extensions(q)

    def test_cap(self):
        assert len(list(linear_extensions(fixtures.delta1(), cap=2))) == 2

    def test_cycle_rejected(self):
        with pytest.raises(PreconditionError):
            list(linear_extensions(fixtures.delta2()))

    @settings(max_examples=30)
    @given(st.sampled_from(ACYCLIC))
    def test_matches_oracle_on_corpus(self, q):
        exts = list(linear_extensions(q))
        assert exts == reachability_extensions(q)
        for e in exts:
            OrderedDissection(q, e)

    def test_ordered_dissection_rejects_bad_order(self):
        with pytest.raises(PreconditionError):
            OrderedDissection(fixtures.a2(), ("2", "1"))


class TestExistence:
    def test_same_surface_same_answer(self):
        assert exists_full_exceptional(fixtures.delta1()).value
        assert exists_full_exceptional(fixtures.delta2()).value

    def test_punctures(self):
        d = exists_full_exceptional(fixtures.loop_square_zero())
        assert (d.value, d.reason) == (False, "punctures")

    def test_signature_2_3(self):
        found = list(enumerate_gentle(2, 3))
        assert found
        for q in found:
            d = exists_full_exceptional(q)
            assert (d.value, d.reason) == (False, "T(1,1,1)")

    def test_depends_only_on_invariants(self):
        seen = {}
        for q in CORPUS:
            key = surface_invariants(q).as_tuple()
            val = bool(exists_full_exceptional(q))
            assert seen.setdefault(key, val) == val


class TestInducedCollection:
    def test_full_subset_is_identity(self):
        q = fixtures.delta1()
        r = induced_collection_quiver(q, q.vertices)
        assert set(r.arrows) == set(q.arrows)
        assert set(r.relations) == set(q.relations)

    def test_contraction(self):
        r = induced_collection_quiver(fixtures.delta1(), ["g1", "g3"])
        assert [(a.source, a.target) for a in r.arrows] == [("g1", "g3")]
        assert r.relations == ()

    def test_singleton(self):
        r = induced_collection_quiver(fixtures.delta1(), ["g2"])
        assert r.vertices == ("g2",) and r.arrows == ()

    def test_unknown_vertex(self):
        with pytest.raises(ValueError):
            induced_collection_quiver(fixtures.delta1(), ["zz"])


class TestCut:
    def test_cut_gamma3_is_a_disk(self):
        r = cut_vertex(fixtures.delta1(), "g3").quiver
        assert r.vertices == ("g1", "g2", "g4", "g5")
        assert {a.name for a in r.arrows} == {"a", "c", "e"}
        assert r.relations == ()
        assert surface_invariants(r).as_tuple() == (0, 1, 5, 5, 0)

    def test_cut_gamma4_composite(self):
        res = cut_vertex(fixtures.delta1(), "g4")
        r = res.quiver
        assert r.vertices == ("g1", "g2", "g3", "g5")
        assert {(a.name, a.source, a.target) for a in r.arrows} == {
            ("a", "g1", "g2"), ("b", "g2", "g3"), ("[cd]", "g1", "g3")
        }
        assert r.relations == ()
        assert res.provenance["[cd]"] == ("c", "d")

    def test_cut_source_of_genus_one_quiver(self):
        r = cut_vertex(gen_surface_quiver("T(g,1,2)", 1), "3").quiver
        assert r == fixtures.make_quiver([1, 2], [("x1", 2, 1), ("y1", 2, 1)])
        assert surface_invariants(r).as_tuple()[:3] == (0, 2, 2)

    def test_loop_arc_rejected(self):
        q = next(enumerate_gentle(2, 3))
        with pytest.raises(PreconditionError):
            cut_vertex(q, "1")

    def test_collection_examples(self):
        q = fixtures.delta1()
        r = cut_collection(q, ["g3", "g4"])
        assert len(r.vertices) == 3
        assert r == cut_collection(q, ["g4", "g3"])
        assert cut_collection(q, []) == q
        assert cut_collection(q, q.vertices).vertices == ()

    def test_collection_precondition(self):
        with pytest.raises(PreconditionError):
            cut_collection(fixtures.delta2(), ["g1", "g3", "g4"])

    @pytest.mark.parametrize("g", [1, 2, 3])
    def test_generated_cuts_are_connected(self, g):
        q = gen_surface_quiver("T(g,1,2)", g)
        for v in q.vertices:
            assert len(connected_components(cut_vertex(q, v).quiver)) == 1

    def test_order_independence_on_corpus(self):
        checked = 0
        for q in CORPUS + [fixtures.delta1(), fixtures.delta2(), gen_surface_quiver("T(g,2,2)", 2)]:
            for u, v in itertools.combinations(q.vertices, 2):
                try:
                    a = cut_collection(q, [u, v])
                except PreconditionError:
                    continue
                assert a == cut_collection(q, [v, u])
                checked += 1
        assert checked > 1000

    def test_euler_bookkeeping(self):
        # chi rises by one; the discarded one-o disks account for the lost o-points
        for q in CORPUS:
            inv = surface_invariants(q)
            for v in q.vertices:
                if is_loop_arc(q, v):
                    continue
                r = cut_vertex(q, v).quiver
                comps = connected_components(r)
                lost = inv.circ - sum(2 * len(c.vertices) - len(c.arrows) for c in comps)
                assert lost in (0, 1, 2)
                chi = sum(len(c.vertices) - len(c.arrows) for c in comps)
                assert chi + lost == inv.chi + 1

    def test_cut_of_exceptional_is_exceptional(self):
        for q in ACYCLIC:
            for v in q.vertices:
                if not is_loop_arc(q, v):
                    assert not has_oriented_cycle(cut_vertex(q, v).quiver)


class TestCompletion:
    def test_delta1_singletons(self):
        q = fixtures.delta1()
        for v in q.vertices:
            assert can_complete(q, [v]) == (True, [])

    def test_empty_subset(self):
        assert can_complete(fixtures.delta1(), [])[0]

    def test_searched_fixture(self):
        q, v = find_incompletable_fixture()
        assert (len(q.vertices), len(q.arrows)) == (3, 4)
        ok, bad = can_complete(q, [v])
        assert not ok
        assert bad[0].startswith("T(1,1,1)")

    def test_requires_existence(self):
        with pytest.raises(PreconditionError):
            can_complete(next(enumerate_gentle(2, 3)), [])


class TestKoszul:
    def test_a2(self):
        d = koszul_dual_quiver(fixtures.a2())
        assert [(a.source, a.target) for a in d.arrows] == [("2", "1")]
        assert d.relations == ()

    def test_delta1(self):
        d = koszul_dual_quiver(fixtures.delta1())
        assert set(d.relations) == {("b", "a"), ("d", "e")}
        assert not d.is_relation("d", "c")

    @settings(max_examples=30)
    @given(st.sampled_from(CORPUS))
    def test_involution(self, q):
        dd = koszul_dual_quiver(koszul_dual_quiver(q))
        assert dd.vertices == q.vertices
        assert set(dd.arrows) == set(q.arrows)
        assert set(dd.relations) == set(q.relations)

    def test_flags_mark_cycles(self):
        q = make_quiver([1, 2], [("a", 1, 2), ("b", 2, 1)], [("a", "b")])
        flags = dual_flags(koszul_dual_quiver(q))
        assert flags["full_relation_cycle"] is False
        assert flags["all_allowed_cycle"] is False
        q = make_quiver([1, 2], [("a", 1, 2), ("b", 2, 1)], [("a", "b"), ("b", "a")])
        assert dual_flags(koszul_dual_quiver(q))["all_allowed_cycle"] is True


def test_gen_surface_quiver_validation():
    with pytest.raises(ValueError):
        gen_surface_quiver("T(g,1,2)", 0)
    with pytest.raises(ValueError):
        gen_surface_quiver("T(g,3,3)", 1)
    q = gen_surface_quiver("T(2,1,2)", 2)
    assert (len(q.vertices), len(q.arrows)) == (5, 8)
    assert is_exceptional_dissection(q)
