"""Small named quivers used by tests, the CLI, and documentation."""

from __future__ import annotations

from .quiver import GentleQuiver, make_quiver


def a2() -> GentleQuiver:
    return make_quiver([1, 2], [("a", 1, 2)])


def a3() -> GentleQuiver:
    return make_quiver([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])


def linear_an(n: int) -> GentleQuiver:
    return make_quiver(range(1, n + 1), [(f"a{i}", i, i + 1) for i in range(1, n)])


def kronecker() -> GentleQuiver:
    return make_quiver([1, 2], [("a", 1, 2), ("b", 1, 2)])


def loop_square_zero() -> GentleQuiver:
    """k[a]/(a^2): one vertex, one loop, relation a a."""
    return make_quiver([1], [("a", 1, 1)], [("a", "a")])


def delta1() -> GentleQuiver:
    """Quiver of the exceptional dissection of the annulus with five o-points."""
    return make_quiver(
        ["g1", "g2", "g3", "g4", "g5"],
        [("a", "g1", "g2"), ("b", "g2", "g3"), ("c", "g1", "g4"), ("d", "g4", "g3"), ("e", "g5", "g4")],
        [("c", "d")],
    )


def delta2() -> GentleQuiver:
    """Second dissection of the same annulus; its quiver has an oriented cycle."""
    return make_quiver(
        ["g1", "g2", "g3", "g4", "g5"],
        [("p", "g4", "g3"), ("q", "g5", "g4"), ("r", "g1", "g2"), ("s", "g3", "g1"), ("t", "g1", "g4")],
        [("s", "t"), ("t", "p")],
    )


def gen_surface_quiver(kind: str, g: int) -> GentleQuiver:
    """Laddered double-arrow quiver of an exceptional dissection on T(g,1,2) or T(g,2,2).

    Vertices 1..2g+1 (resp. 1..2g+2); arrows x_i, y_i : i+1 -> i; consecutive
    blocks are related top-to-top and bottom-to-bottom.
    """
    if g < 1:
        raise ValueError("genus must be at least 1")
    kinds = {"T(g,1,2)": 2 * g + 1, "T(g,2,2)": 2 * g + 2}
    key = kind.replace(str(g), "g", 1) if kind not in kinds else kind
    if key not in kinds:
        raise ValueError(f"unknown surface kind {kind!r}")
    n = kinds[key]
    arrows = []
    for i in range(1, n):
        arrows.append((f"x{i}", i + 1, i))
        arrows.append((f"y{i}", i + 1, i))
    rels = []
    for i in range(1, n - 1):
        rels.append((f"x{i + 1}", f"x{i}"))
        rels.append((f"y{i + 1}", f"y{i}"))
    return make_quiver(range(1, n + 1), arrows, rels)


NAMED = {
    "a2": a2,
    "a3": a3,
    "kronecker": kronecker,
    "loop": loop_square_zero,
    "delta1": delta1,
    "delta2": delta2,
}
