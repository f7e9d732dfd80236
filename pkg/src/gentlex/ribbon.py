"""Reconstruct the dissected marked surface encoded by a gentle quiver.

Every vertex is an arc with two ends.  An arrow ``a: u -> v`` says that the
end of ``v`` directly follows the end of ``u`` anticlockwise around a shared
o-point, so maximal chains of arrows linked by allowed compositions are the
fans around the o-points.  Closing each fan with one boundary-gap token gives
a rotation system; its faces are the polygons of the dissection.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from functools import lru_cache

from .quiver import GentleQuiver, QuiverError, validate_gentle

ENDS = ("A", "B")


class SurfaceError(RuntimeError):
    """Internal inconsistency in the reconstructed surface (signals a bug)."""


@dataclass(frozen=True, order=True)
class ArcEnd:
    vertex: str
    end: str

    def other(self) -> "ArcEnd":
        return ArcEnd(self.vertex, "B" if self.end == "A" else "A")

    def __str__(self):
        return f"{self.vertex}.{self.end}"


@dataclass(frozen=True)
class Fan:
    index: int
    ends: tuple[ArcEnd, ...]
    arrows: tuple[str, ...]


@dataclass(frozen=True)
class SurfaceInvariants:
    genus: int
    boundaries: int
    circ: int
    bullet: int
    punctures: int
    chi: int

    def as_tuple(self):
        return (self.genus, self.boundaries, self.circ, self.bullet, self.punctures)

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class FaceData:
    faces: tuple[tuple[ArcEnd | str, ...], ...]
    gap_faces: int
    gapless_faces: int
    gap_successor: dict
    boundary_cycles: tuple[tuple[int, ...], ...]


def assign_ends(q: GentleQuiver) -> tuple[dict[str, tuple[ArcEnd, ArcEnd]], list[ArcEnd]]:
    """Attach each arrow to one end of its source and one end of its target.

    Composable ``a`` then ``b`` meet at the same end of the middle arc iff
    ``ab`` is not a relation; two incoming (or two outgoing) arrows use
    distinct ends.
    """
    src_end: dict[str, str] = {}
    tgt_end: dict[str, str] = {}
    for v in q.vertices:
        # slots: ("in", arrow) for arrows ending at v, ("out", arrow) for arrows leaving v
        slots = [("in", a.name) for a in q.in_arrows[v]] + [("out", a.name) for a in q.out_arrows[v]]
        constraints: dict = {s: [] for s in slots}

        def link(s, t, same):
            constraints[s].append((t, same))
            constraints[t].append((s, same))

        ins = [s for s in slots if s[0] == "in"]
        outs = [s for s in slots if s[0] == "out"]
        if len(ins) == 2:
            link(ins[0], ins[1], False)
        if len(outs) == 2:
            link(outs[0], outs[1], False)
        for si in ins:
            for so in outs:
                link(si, so, not q.is_relation(si[1], so[1]))
        colour: dict = {}
        for s in slots:
            if s in colour:
                continue
            colour[s] = 0
            stack = [s]
            while stack:
                cur = stack.pop()
                for nb, same in constraints[cur]:
                    want = colour[cur] if same else 1 - colour[cur]
                    if nb in colour:
                        if colour[nb] != want:
                            raise SurfaceError(f"inconsistent end assignment at vertex {v}")
                    else:
                        colour[nb] = want
                        stack.append(nb)
        for (kind, name), c in colour.items():
            (tgt_end if kind == "in" else src_end)[name] = ENDS[c]
    attach = {
        a.name: (ArcEnd(a.source, src_end[a.name]), ArcEnd(a.target, tgt_end[a.name]))
        for a in q.arrows
    }
    ends = [ArcEnd(v, e) for v in q.vertices for e in ENDS]
    return attach, ends


def build_fans(q: GentleQuiver) -> list[Fan]:
    """Maximal chains of arc ends linked by arrows, in anticlockwise order."""
    attach, ends = assign_ends(q)
    nxt: dict[ArcEnd, tuple[ArcEnd, str]] = {}
    has_prev: set[ArcEnd] = set()
    for name, (s, t) in attach.items():
        if s in nxt or t in has_prev:
            raise SurfaceError(f"end used twice by arrow {name}")
        nxt[s] = (t, name)
        has_prev.add(t)
    fans: list[Fan] = []
    placed: set[ArcEnd] = set()
    for start in ends:
        if start in has_prev or start in placed:
            continue
        chain, arrows = [start], []
        cur = start
        while cur in nxt:
            cur, name = nxt[cur]
            chain.append(cur)
            arrows.append(name)
        placed.update(chain)
        fans.append(Fan(len(fans), tuple(chain), tuple(arrows)))
    if len(placed) != len(ends):
        raise QuiverError("cyclic fan: the algebra is infinite dimensional")
    return fans


def trace_faces(q: GentleQuiver) -> FaceData:
    """Trace the polygons of the rotation system closed by boundary gaps.

    Each gap-face starts right after the gap at some fan ``f2`` and ends at
    the gap of a fan ``f``; the boundary then runs from ``f`` to ``f2``, which
    defines the gap-successor permutation whose cycles are the boundary
    components.
    """
    fans = build_fans(q)
    fan_of: dict[ArcEnd, int] = {}
    pos: dict[ArcEnd, int] = {}
    for f in fans:
        for i, e in enumerate(f.ends):
            fan_of[e] = f.index
            pos[e] = i

    def step(x: ArcEnd):
        # across the arc, then rotate to the next token at the far o-point
        y = x.other()
        f = fans[fan_of[y]]
        i = pos[y]
        if i + 1 < len(f.ends):
            return f.ends[i + 1]
        return ("gap", f.index)

    faces = []
    visited: set[ArcEnd] = set()
    succ: dict[int, int] = {}
    for f in fans:
        x = f.ends[0]
        face = [x]
        visited.add(x)
        while True:
            nx = step(x)
            if isinstance(nx, tuple):
                if nx[1] in succ:
                    raise SurfaceError("boundary gap reached twice")
                succ[nx[1]] = f.index
                face.append(f"gap{nx[1]}")
                break
            if nx in visited:
                raise SurfaceError("face trace revisited a corner before reaching a gap")
            visited.add(nx)
            face.append(nx)
            x = nx
        faces.append(tuple(face))
    gap_faces = len(faces)
    gapless = 0
    for f in fans:
        for e in f.ends:
            if e in visited:
                continue
            face = []
            x = e
            while x not in visited:
                visited.add(x)
                face.append(x)
                x = step(x)
                if isinstance(x, tuple):
                    raise SurfaceError("gap met on a puncture face")
            faces.append(tuple(face))
            gapless += 1
    cycles = []
    seen: set[int] = set()
    for f in fans:
        if f.index in seen:
            continue
        cyc = []
        cur = f.index
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            cur = succ[cur]
        cycles.append(tuple(cyc))
    return FaceData(tuple(faces), gap_faces, gapless, succ, tuple(cycles))


@lru_cache(maxsize=512)
def surface_invariants(q: GentleQuiver) -> SurfaceInvariants:
    rep = validate_gentle(q)
    if not rep.ok:
        raise QuiverError("not a finite dimensional gentle quiver: " + "; ".join(rep.violations))
    chi = len(q.vertices) - len(q.arrows)
    fans = build_fans(q)
    fd = trace_faces(q)
    circ = len(fans)
    b = len(fd.boundary_cycles)
    punct = fd.gapless_faces
    twice_g = 2 - b - punct - chi
    if twice_g < 0 or twice_g % 2:
        raise SurfaceError(f"non-integral or negative genus (2g = {twice_g})")
    inv = SurfaceInvariants(twice_g // 2, b, circ, fd.gap_faces, punct, chi)
    if inv.circ != inv.bullet or inv.circ != 2 * len(q.vertices) - len(q.arrows):
        raise SurfaceError(f"marked point count mismatch: {inv}")
    # one gap per o-point, one gap-face per gap
    if sum(len(c) for c in fd.boundary_cycles) != circ:
        raise SurfaceError("boundary cycles do not cover the o-points")
    return inv


SPECIAL_KINDS = ("T(g,1,1)", "T(g,1,2)", "T(g,2,2)")


def _signature_kind(n0: int, n1: int):
    if n0 % 2 == 0 and n0 >= 2 and n1 == 2 * n0 - 1:
        return "T(g,1,1)", n0 // 2
    if n0 % 2 == 1 and n0 >= 3 and n1 == 2 * (n0 - 1):
        return "T(g,1,2)", (n0 - 1) // 2
    if n0 % 2 == 0 and n0 >= 4 and n1 == 2 * n0 - 2:
        return "T(g,2,2)", (n0 - 2) // 2
    return None, None


def classify_special(inv: SurfaceInvariants, signature: tuple[int, int] | None = None) -> str | None:
    """Return "T(g,b,m)" with g filled in for the three special surfaces, else None.

    When the quiver signature (|Q0|, |Q1|) is given it is cross-checked
    against the numerical characterisation of the special surfaces.
    """
    if inv.punctures:
        raise ValueError("classify_special requires an unpunctured surface")
    g = inv.genus
    kind = None
    if g >= 1 and inv.boundaries == 1 and inv.circ == 1:
        kind = "T(g,1,1)"
    elif g >= 1 and inv.boundaries == 1 and inv.circ == 2:
        kind = "T(g,1,2)"
    elif g >= 1 and inv.boundaries == 2 and inv.circ == 2:
        kind = "T(g,2,2)"
    if signature is not None:
        sig_kind, sig_g = _signature_kind(*signature)
        if sig_kind != kind or (kind is not None and sig_g != g):
            raise SurfaceError(f"signature {signature} disagrees with invariants {inv}")
    if kind is None:
        return None
    return kind.replace("g", str(g), 1)


def classify_quiver(q: GentleQuiver) -> str | None:
    return classify_special(surface_invariants(q), (len(q.vertices), len(q.arrows)))


def is_loop_arc(q: GentleQuiver, v: str) -> bool:
    """True iff both ends of arc ``v`` sit at the same o-point."""
    q.vertex_index(v)
    for f in build_fans(q):
        tags = [e for e in f.ends if e.vertex == v]
        if len(tags) == 2:
            return True
    return False
