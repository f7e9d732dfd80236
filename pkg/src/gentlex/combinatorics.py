"""Quiver-level combinatorics of exceptional dissections: order, cuts, completion."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .fixtures import gen_surface_quiver
from .quiver import (
    Arrow,
    GentleQuiver,
    QuiverError,
    connected_components,
    has_full_relation_cycle,
    has_oriented_cycle,
    validate_gentle,
)
from .ribbon import build_fans, classify_quiver, is_loop_arc, surface_invariants

__all__ = [
    "CutResult",
    "Decision",
    "OrderedDissection",
    "can_complete",
    "cut_collection",
    "cut_vertex",
    "enumerate_gentle",
    "exists_full_exceptional",
    "find_incompletable_fixture",
    "gen_surface_quiver",
    "induced_collection_quiver",
    "is_exceptional_dissection",
    "koszul_dual_quiver",
    "linear_extensions",
]


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class OrderedDissection:
    quiver: GentleQuiver
    order: tuple[str, ...]

    def __post_init__(self):
        if sorted(self.order) != sorted(self.quiver.vertices):
            raise PreconditionError("order is not a permutation of the vertices")
        pos = {v: i for i, v in enumerate(self.order)}
        for a in self.quiver.arrows:
            if pos[a.source] >= pos[a.target]:
                raise PreconditionError(f"arrow {a.name} violates the order")


@dataclass(frozen=True)
class CutResult:
    quiver: GentleQuiver
    provenance: dict  # new arrow name -> tuple of original arrow names


@dataclass(frozen=True)
class Decision:
    value: bool
    reason: str | None = None

    def __bool__(self):
        return self.value


def is_exceptional_dissection(q: GentleQuiver) -> bool:
    if has_full_relation_cycle(q):
        raise PreconditionError("surface has punctures")
    return not has_oriented_cycle(q)


def linear_extensions(q: GentleQuiver, cap: int | None = None) -> Iterator[tuple[str, ...]]:
    """Vertex orders in which every arrow points forward, lexicographic by vertex id."""
    if has_oriented_cycle(q):
        raise PreconditionError("quiver has an oriented cycle")
    preds = {v: {a.source for a in q.in_arrows[v]} for v in q.vertices}
    n = len(q.vertices)
    count = 0
    order: list[str] = []
    placed: set[str] = set()

    def rec():
        nonlocal count
        if cap is not None and count >= cap:
            return
        if len(order) == n:
            count += 1
            yield tuple(order)
            return
        for v in sorted(q.vertices):
            if v in placed or not preds[v] <= placed:
                continue
            order.append(v)
            placed.add(v)
            yield from rec()
            order.pop()
            placed.discard(v)
            if cap is not None and count >= cap:
                return

    yield from rec()


def exists_full_exceptional(q: GentleQuiver) -> Decision:
    if has_full_relation_cycle(q):
        return Decision(False, "punctures")
    inv = surface_invariants(q)
    if inv.boundaries == 1 and inv.circ == 1:
        return Decision(False, f"T({inv.genus},1,1)")
    return Decision(True)


def _check_subset(q: GentleQuiver, subset: Iterable[str]) -> list[str]:
    out = []
    for v in subset:
        q.vertex_index(v)
        if v not in out:
            out.append(v)
    return out


def induced_collection_quiver(q: GentleQuiver, subset: Iterable[str]) -> GentleQuiver:
    """Quiver of a sub-collection: fans restricted to the chosen arcs.

    Consecutive chosen ends in a fan are joined by an arrow (named by the
    concatenation of the skipped fan arrows); ``xy`` is a relation iff ``x``
    and ``y`` touch different ends of the middle arc.
    """
    subset = _check_subset(q, subset)
    if not subset:
        raise PreconditionError("subset must be non-empty")
    chosen = set(subset)
    arrows: list[Arrow] = []
    ends_of: dict[str, tuple] = {}
    for fan in build_fans(q):
        idx = [i for i, e in enumerate(fan.ends) if e.vertex in chosen]
        for i, j in zip(idx, idx[1:]):
            names = fan.arrows[i:j]
            name = names[0] if len(names) == 1 else "[" + "".join(names) + "]"
            arrows.append(Arrow(name, fan.ends[i].vertex, fan.ends[j].vertex))
            ends_of[name] = (fan.ends[i], fan.ends[j])
    # keep the input order of arrows where possible
    order = {a.name: k for k, a in enumerate(q.arrows)}
    arrows.sort(key=lambda a: (order.get(a.name, len(order)), a.name))
    rels = []
    for x in arrows:
        for y in arrows:
            if x.target == y.source and ends_of[x.name][1] != ends_of[y.name][0]:
                rels.append((x.name, y.name))
    verts = tuple(v for v in q.vertices if v in chosen)
    return GentleQuiver(verts, tuple(arrows), tuple(rels))


def _bracket(parts: tuple[str, ...]) -> str:
    return parts[0] if len(parts) == 1 else "[" + "".join(parts) + "]"


def cut_vertex(q: GentleQuiver, v: str, provenance: dict | None = None) -> CutResult:
    """Cut the surface along arc ``v`` and read off the new quiver.

    Arrows avoiding ``v`` survive; each relation ``c1 c2`` through ``v``
    becomes a composite arrow ``[c1c2]``.
    """
    q.vertex_index(v)
    if is_loop_arc(q, v):
        raise PreconditionError(f"arc {v} is a loop")
    prov = {a.name: (a.name,) for a in q.arrows}
    if provenance:
        prov.update({k: tuple(t) for k, t in provenance.items() if k in prov})
    kept = [a for a in q.arrows if a.source != v and a.target != v]
    new_arrows = list(kept)
    new_prov = {a.name: prov[a.name] for a in kept}
    composite: dict[tuple[str, str], str] = {}
    for c1 in q.in_arrows[v]:
        for c2 in q.out_arrows[v]:
            if q.is_relation(c1.name, c2.name):
                parts = prov[c1.name] + prov[c2.name]
                name = _bracket(parts)
                composite[(c1.name, c2.name)] = name
                new_arrows.append(Arrow(name, c1.source, c2.target))
                new_prov[name] = parts
    # each new arrow X runs along the arrows first(X) ... last(X) of q; XY is a
    # relation iff last(X) first(Y) is.  This reproduces the surviving old
    # relations, c0[c1c2] and [c1c2]c3, and also covers [c1c2][c3c4].
    span = {a.name: (a.name, a.name) for a in kept}
    span.update({name: (c1, c2) for (c1, c2), name in composite.items()})
    rels = []
    for x in new_arrows:
        for y in new_arrows:
            if x.target == y.source and q.is_relation(span[x.name][1], span[y.name][0]):
                rels.append((x.name, y.name))
    verts = tuple(w for w in q.vertices if w != v)
    out = GentleQuiver(verts, tuple(new_arrows), tuple(rels))
    rep = validate_gentle(out)
    if not rep.ok:
        raise QuiverError("cut produced a non-gentle quiver: " + "; ".join(rep.violations))
    return CutResult(out, new_prov)


def _check_collection(q: GentleQuiver, subset: list[str]) -> None:
    if not subset:
        return
    problems = [f"{v} is a loop arc" for v in subset if is_loop_arc(q, v)]
    if has_oriented_cycle(induced_collection_quiver(q, subset)):
        problems.append("induced collection quiver has an oriented cycle")
    if problems:
        raise PreconditionError("not an exceptional collection: " + "; ".join(problems))


def cut_collection(q: GentleQuiver, subset: Iterable[str]) -> GentleQuiver:
    subset = _check_subset(q, subset)
    _check_collection(q, subset)
    return canonical_form(_cut_many(q, subset).quiver)


def canonical_form(q: GentleQuiver) -> GentleQuiver:
    """Same presentation with arrows and relations sorted by name."""
    return GentleQuiver(q.vertices, tuple(sorted(q.arrows, key=lambda a: a.name)), tuple(sorted(q.relations)))


def _cut_many(q: GentleQuiver, subset: list[str]) -> CutResult:
    prov = {a.name: (a.name,) for a in q.arrows}
    cur = q
    for v in subset:
        res = cut_vertex(cur, v, prov)
        cur, prov = res.quiver, res.provenance
    return CutResult(cur, prov)


def can_complete(q: GentleQuiver, subset: Iterable[str]) -> tuple[bool, list[str]]:
    """Whether the collection extends to a full exceptional sequence.

    Returns the verdict and the offending components (as "T(g,1,1)" tags with
    their vertex lists).  The collection must be a subset of the dissection's
    own vertices; arbitrary arc collections are not modelled.
    """
    subset = _check_subset(q, subset)
    if not exists_full_exceptional(q):
        raise PreconditionError("the algebra has no full exceptional sequence")
    cut = cut_collection(q, subset)
    bad = []
    for comp in connected_components(cut):
        tag = classify_quiver(comp)
        if tag is not None and tag.endswith(",1,1)"):
            bad.append(f"{tag}:{','.join(comp.vertices)}")
    return (not bad), bad


def koszul_dual_quiver(q: GentleQuiver) -> GentleQuiver:
    """Opposite quiver with the complementary set of quadratic relations."""
    rels = []
    for a, b in q.composable_pairs():
        if not q.is_relation(a.name, b.name):
            rels.append((b.name, a.name))
    return GentleQuiver(
        q.vertices,
        tuple(Arrow(a.name, a.target, a.source) for a in q.arrows),
        tuple(rels),
    )


def dual_flags(q: GentleQuiver) -> dict:
    """Cycle flags of a presentation (used for Koszul duals, which may be infinite)."""
    rep = validate_gentle(q)
    return {
        "all_allowed_cycle": any(v.startswith("all-allowed cycle") for v in rep.violations),
        "full_relation_cycle": has_full_relation_cycle(q),
    }


@lru_cache(maxsize=None)
def _local_relation_choices(n_in: tuple, n_out: tuple) -> list[list[tuple[str, str]]]:
    """Relation sets at one vertex satisfying the local gentle conditions."""
    pairs = [(a, b) for a in n_in for b in n_out]
    out = []
    for mask in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if mask >> k & 1}
        ok = True
        for a in n_in:
            r = sum((a, b) in rel for b in n_out)
            if r > 1 or len(n_out) - r > 1:
                ok = False
        for b in n_out:
            r = sum((a, b) in rel for a in n_in)
            if r > 1 or len(n_in) - r > 1:
                ok = False
        if ok:
            out.append(sorted(rel))
    return out


def enumerate_gentle(n_vertices: int, n_arrows: int, connected: bool = True,
                     finite_gldim: bool = True) -> Iterator[GentleQuiver]:
    """All gentle finite dimensional presentations on vertices 1..n with arrows a1..am.

    Arrow lists are enumerated as multisets of (source, target) pairs, so
    presentations differing only by arrow renaming appear once.
    """
    from itertools import combinations_with_replacement, product

    verts = [str(i) for i in range(1, n_vertices + 1)]
    ends = [(s, t) for s in verts for t in verts]
    for choice in combinations_with_replacement(ends, n_arrows):
        arrows = [Arrow(f"a{k + 1}", s, t) for k, (s, t) in enumerate(choice)]
        outdeg = {v: sum(a.source == v for a in arrows) for v in verts}
        indeg = {v: sum(a.target == v for a in arrows) for v in verts}
        if any(outdeg[v] > 2 or indeg[v] > 2 for v in verts):
            continue
        local = []
        for v in verts:
            ins = [a.name for a in arrows if a.target == v]
            outs = [a.name for a in arrows if a.source == v]
            local.append(_local_relation_choices(tuple(ins), tuple(outs)))
        for rels in product(*local):
            q = GentleQuiver(tuple(verts), tuple(arrows), tuple(r for part in rels for r in part))
            if not validate_gentle(q).ok:
                continue
            if finite_gldim and has_full_relation_cycle(q):
                continue
            if connected and len(connected_components(q)) != 1:
                continue
            yield q


def find_incompletable_fixture(n_vertices: int = 3, n_arrows: int = 4):
    """First presentation with a non-loop vertex whose cut is connected with signature (2, 3).

    Returns (quiver, vertex) or None.  Used to exhibit a collection that cannot
    be completed to a full exceptional sequence.
    """
    for q in enumerate_gentle(n_vertices, n_arrows):
        if not exists_full_exceptional(q):
            continue
        for v in q.vertices:
            if is_loop_arc(q, v):
                continue
            cut = cut_vertex(q, v).quiver
            comps = connected_components(cut)
            if len(comps) == 1 and (len(cut.vertices), len(cut.arrows)) == (2, 3):
                return q, v
    return None
