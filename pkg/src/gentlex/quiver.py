"""Gentle quivers with length-two monomial relations and their path algebras.

Paths compose left to right: for arrows ``a: u -> v`` and ``b: v -> w`` the
path ``ab`` runs from ``u`` to ``w``.  A path is *allowed* when it contains no
relation pair as a consecutive subword; allowed paths form a basis of kQ/I.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

from .field import DEFAULT_PRIME, check_prime, inv


class QuiverError(ValueError):
    """Malformed quiver data (syntax, unknown or duplicate identifiers)."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class GentleQuiver:
    """A finite quiver with a set of length-two relations.

    Only referential integrity is enforced at construction; gentleness is
    checked separately by :func:`validate_gentle`.
    """

    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    relations: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple(self.arrows))
        object.__setattr__(self, "relations", tuple(tuple(r) for r in self.relations))
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise QuiverError(f"duplicate identifier {v!r}")
            seen.add(v)
        verts = set(self.vertices)
        names = set()
        for a in self.arrows:
            if a.name in seen or a.name in names:
                raise QuiverError(f"duplicate identifier {a.name!r}")
            names.add(a.name)
            for end in (a.source, a.target):
                if end not in verts:
                    raise QuiverError(f"arrow {a.name!r} uses unknown vertex {end!r}")
        rels = set()
        for a, b in self.relations:
            for x in (a, b):
                if x not in names:
                    raise QuiverError(f"relation references unknown arrow {x!r}")
            if self.arrow(a).target != self.arrow(b).source:
                raise QuiverError(f"relation {a} {b} is not composable")
            if (a, b) in rels:
                raise QuiverError(f"duplicate relation {a} {b}")
            rels.add((a, b))

    # -- lookups ---------------------------------------------------------

    @cached_property
    def _arrow_map(self) -> dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    @cached_property
    def relation_set(self) -> frozenset[tuple[str, str]]:
        return frozenset(self.relations)

    def arrow(self, name: str) -> Arrow:
        try:
            return self._arrow_map[name]
        except KeyError:
            raise QuiverError(f"unknown arrow {name!r}") from None

    def has_vertex(self, v: str) -> bool:
        return v in self._vertex_index

    @cached_property
    def _vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def vertex_index(self, v: str) -> int:
        try:
            return self._vertex_index[v]
        except KeyError:
            raise QuiverError(f"unknown vertex {v!r}") from None

    @cached_property
    def out_arrows(self) -> dict[str, tuple[Arrow, ...]]:
        out = defaultdict(list)
        for a in self.arrows:
            out[a.source].append(a)
        return {v: tuple(out[v]) for v in self.vertices}

    @cached_property
    def in_arrows(self) -> dict[str, tuple[Arrow, ...]]:
        inc = defaultdict(list)
        for a in self.arrows:
            inc[a.target].append(a)
        return {v: tuple(inc[v]) for v in self.vertices}

    def is_relation(self, a: str, b: str) -> bool:
        return (a, b) in self.relation_set

    def composable_pairs(self) -> Iterator[tuple[Arrow, Arrow]]:
        for a in self.arrows:
            for b in self.out_arrows[a.target]:
                yield a, b

    def allowed_successors(self, a: str) -> list[Arrow]:
        t = self.arrow(a).target
        return [b for b in self.out_arrows[t] if not self.is_relation(a, b.name)]

    def __len__(self):
        return len(self.vertices)

    def with_prime(self, p: int = DEFAULT_PRIME) -> "PathAlgebra":
        return PathAlgebra(self, p)


# -- text format ------------------------------------------------------------


def parse_quiver(text: str) -> GentleQuiver:
    """Parse the line-based ``.gq`` format (vertex / arrow / rel lines)."""
    vertices: list[str] = []
    arrows: list[Arrow] = []
    relations: list[tuple[str, str]] = []
    known_vertices: set[str] = set()
    ids: set[str] = set()
    arrow_map: dict[str, Arrow] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kind = tok[0]
        if kind == "vertex" and len(tok) == 2:
            if tok[1] in ids:
                raise QuiverError(f"line {lineno}: duplicate identifier {tok[1]!r}")
            ids.add(tok[1])
            known_vertices.add(tok[1])
            vertices.append(tok[1])
        elif kind == "arrow" and len(tok) == 4:
            name, s, t = tok[1:]
            if name in ids:
                raise QuiverError(f"line {lineno}: duplicate identifier {name!r}")
            for v in (s, t):
                if v not in known_vertices:
                    raise QuiverError(f"line {lineno}: unknown vertex {v!r}")
            ids.add(name)
            arrow_map[name] = Arrow(name, s, t)
            arrows.append(arrow_map[name])
        elif kind == "rel" and len(tok) == 3:
            a, b = tok[1:]
            for x in (a, b):
                if x not in arrow_map:
                    raise QuiverError(f"line {lineno}: relation references unknown arrow {x!r}")
            if arrow_map[a].target != arrow_map[b].source:
                raise QuiverError(f"line {lineno}: relation {a} {b} is not composable")
            relations.append((a, b))
        else:
            raise QuiverError(f"line {lineno}: syntax error: {raw.strip()!r}")
    try:
        return GentleQuiver(tuple(vertices), tuple(arrows), tuple(relations))
    except QuiverError as exc:
        raise QuiverError(f"{exc}") from None


def serialize_quiver(q: GentleQuiver) -> str:
    lines = [f"vertex {v}" for v in q.vertices]
    lines += [f"arrow {a.name} {a.source} {a.target}" for a in q.arrows]
    lines += [f"rel {a} {b}" for a, b in q.relations]
    return "\n".join(lines) + "\n"


def load_quiver(path) -> GentleQuiver:
    with open(path, encoding="utf-8") as fh:
        return parse_quiver(fh.read())


def make_quiver(vertices: Iterable, arrows: Iterable, relations: Iterable = ()) -> GentleQuiver:
    """Convenience constructor: arrows as (name, source, target) triples."""
    return GentleQuiver(
        tuple(str(v) for v in vertices),
        tuple(Arrow(str(n), str(s), str(t)) for n, s, t in arrows),
        tuple((str(a), str(b)) for a, b in relations),
    )


# -- gentleness ---------------------------------------------------------------


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def _find_cycles(q: GentleQuiver, step_ok) -> list[list[str]]:
    """Closed walks a1..am (each arrow at most once) with step_ok(ai, ai+1) cyclically.

    In a gentle quiver every arrow has at most one successor of each kind, so
    such cycles are the cycles of a partial function on arrows.
    """
    succ: dict[str, list[str]] = {}
    for a in q.arrows:
        succ[a.name] = [b.name for b in q.out_arrows[a.target] if step_ok(a.name, b.name)]
    cycles = []
    seen_cycles = set()
    for start in q.arrows:
        # depth-first over simple arrow walks back to start
        stack = [(start.name, [start.name])]
        while stack:
            cur, walk = stack.pop()
            for nxt in succ[cur]:
                if nxt == start.name:
                    key = frozenset(walk)
                    if key not in seen_cycles:
                        seen_cycles.add(key)
                        cycles.append(list(walk))
                elif nxt not in walk and len(walk) < len(q.arrows):
                    stack.append((nxt, walk + [nxt]))
    return cycles


def validate_gentle(q: GentleQuiver) -> ValidationReport:
    """Report every violated gentle condition (violations are data, not errors)."""
    rep = ValidationReport()
    for v in q.vertices:
        if len(q.out_arrows[v]) > 2:
            rep.violations.append(f"vertex {v} is the source of {len(q.out_arrows[v])} arrows")
        if len(q.in_arrows[v]) > 2:
            rep.violations.append(f"vertex {v} is the target of {len(q.in_arrows[v])} arrows")
    for a in q.arrows:
        succ = q.out_arrows[a.target]
        allowed = [b.name for b in succ if not q.is_relation(a.name, b.name)]
        related = [b.name for b in succ if q.is_relation(a.name, b.name)]
        if len(allowed) > 1:
            rep.violations.append(f"arrow {a.name} has allowed successors {allowed}")
        if len(related) > 1:
            rep.violations.append(f"arrow {a.name} has related successors {related}")
        pred = q.in_arrows[a.source]
        allowed = [c.name for c in pred if not q.is_relation(c.name, a.name)]
        related = [c.name for c in pred if q.is_relation(c.name, a.name)]
        if len(allowed) > 1:
            rep.violations.append(f"arrow {a.name} has allowed predecessors {allowed}")
        if len(related) > 1:
            rep.violations.append(f"arrow {a.name} has related predecessors {related}")
    for cyc in _find_cycles(q, lambda a, b: not q.is_relation(a, b)):
        rep.violations.append("all-allowed cycle " + " ".join(cyc))
    return rep


def is_gentle(q: GentleQuiver) -> bool:
    return validate_gentle(q).ok


def has_full_relation_cycle(q: GentleQuiver) -> bool:
    """True iff some oriented cycle has every cyclically consecutive pair in I.

    For gentle algebras this is equivalent to infinite global dimension.
    """
    return bool(_find_cycles(q, q.is_relation))


def has_oriented_cycle(q: GentleQuiver) -> bool:
    state = {v: 0 for v in q.vertices}

    def visit(v):
        state[v] = 1
        for a in q.out_arrows[v]:
            if state[a.target] == 1:
                return True
            if state[a.target] == 0 and visit(a.target):
                return True
        state[v] = 2
        return False

    return any(state[v] == 0 and visit(v) for v in q.vertices)


def opposite_quiver(q: GentleQuiver) -> GentleQuiver:
    return GentleQuiver(
        q.vertices,
        tuple(Arrow(a.name, a.target, a.source) for a in q.arrows),
        tuple((b, a) for a, b in q.relations),
    )


def connected_components(q: GentleQuiver) -> list[GentleQuiver]:
    """Weakly connected components, as full subquivers in stored order."""
    parent = {v: v for v in q.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a in q.arrows:
        ra, rb = find(a.source), find(a.target)
        if ra != rb:
            parent[rb] = ra
    groups: dict[str, list[str]] = {}
    for v in q.vertices:
        groups.setdefault(find(v), []).append(v)
    comps = []
    for verts in groups.values():
        vs = set(verts)
        arrows = tuple(a for a in q.arrows if a.source in vs)
        names = {a.name for a in arrows}
        rels = tuple(r for r in q.relations if r[0] in names)
        comps.append(GentleQuiver(tuple(verts), arrows, rels))
    return comps


# -- paths and the path algebra ---------------------------------------------


@dataclass(frozen=True)
class Path:
    source: str
    target: str
    arrows: tuple[str, ...] = ()

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def __len__(self):
        return len(self.arrows)

    def __str__(self):
        return f"e_{self.source}" if self.is_trivial else "".join(self.arrows)


def _enumerate_paths(q: GentleQuiver, limit: int | None = None) -> list[Path]:
    paths = [Path(v, v) for v in q.vertices]
    frontier = [Path(a.source, a.target, (a.name,)) for a in q.arrows]
    bound = limit if limit is not None else 4 * max(1, len(q.arrows)) + 4
    length = 1
    while frontier:
        if length > bound:
            raise QuiverError("algebra is infinite dimensional (all-allowed cycle)")
        paths.extend(frontier)
        nxt = []
        for p in frontier:
            for b in q.allowed_successors(p.arrows[-1]):
                nxt.append(Path(p.source, b.target, p.arrows + (b.name,)))
        frontier = nxt
        length += 1
    return paths


def _path_sort_key(q: GentleQuiver, p: Path):
    arrow_pos = {a.name: i for i, a in enumerate(q.arrows)}
    return (len(p), q.vertex_index(p.source), tuple(arrow_pos[x] for x in p.arrows))


def allowed_paths(q: GentleQuiver, v: str, w: str) -> list[Path]:
    """All allowed paths from v to w, ordered by length then arrow ids."""
    q.vertex_index(v)
    q.vertex_index(w)
    out = [p for p in _enumerate_paths(q) if p.source == v and p.target == w]
    return sorted(out, key=lambda p: (len(p), p.arrows))


class PathAlgebra:
    """The finite dimensional algebra kQ/I over F_p with an indexed path basis."""

    def __init__(self, quiver: GentleQuiver, p: int = DEFAULT_PRIME):
        self.quiver = quiver
        self.p = check_prime(p)
        paths = sorted(_enumerate_paths(quiver), key=lambda x: _path_sort_key(quiver, x))
        self.paths: tuple[Path, ...] = tuple(paths)
        self.index = {pa: i for i, pa in enumerate(self.paths)}
        self._trivial = {v: self.index[Path(v, v)] for v in quiver.vertices}
        between = defaultdict(list)
        for i, pa in enumerate(self.paths):
            between[(pa.source, pa.target)].append(i)
        self._between = {k: tuple(v) for k, v in between.items()}
        # multiplication table restricted to composable pairs
        self._mul: dict[tuple[int, int], int] = {}
        for i, x in enumerate(self.paths):
            for j in self.from_vertex(x.target):
                y = self.paths[j]
                if x.is_trivial:
                    self._mul[(i, j)] = j
                elif y.is_trivial:
                    self._mul[(i, j)] = i
                elif quiver.is_relation(x.arrows[-1], y.arrows[0]):
                    continue
                else:
                    self._mul[(i, j)] = self.index[Path(x.source, y.target, x.arrows + y.arrows)]

    @property
    def dim(self) -> int:
        return len(self.paths)

    def between(self, v: str, w: str) -> tuple[int, ...]:
        return self._between.get((v, w), ())

    def from_vertex(self, v: str) -> list[int]:
        return [i for w in self.quiver.vertices for i in self.between(v, w)]

    def to_vertex(self, w: str) -> list[int]:
        return [i for v in self.quiver.vertices for i in self.between(v, w)]

    def trivial_index(self, v: str) -> int:
        return self._trivial[v]

    def mul_index(self, i: int, j: int) -> int | None:
        return self._mul.get((i, j))

    # element constructors
    def zero(self, v: str, w: str) -> "PathVector":
        return PathVector(self, v, w, {})

    def identity(self, v: str) -> "PathVector":
        return PathVector(self, v, v, {self._trivial[v]: 1})

    def element(self, path: Path | str, coeff: int = 1) -> "PathVector":
        if isinstance(path, str):
            path = self.parse_path(path)
        return PathVector(self, path.source, path.target, {self.index[path]: coeff % self.p})

    def parse_path(self, text: str) -> Path:
        """``e_v`` for a trivial path, else whitespace or comma separated arrows."""
        if text.startswith("e_") and self.quiver.has_vertex(text[2:]):
            return Path(text[2:], text[2:])
        names = text.replace(",", " ").split()
        if len(names) == 1 and names[0] not in self.quiver._arrow_map:
            raise QuiverError(f"unknown arrow {names[0]!r}")
        arrows = [self.quiver.arrow(n) for n in names]
        pa = Path(arrows[0].source, arrows[-1].target, tuple(names))
        if pa not in self.index:
            raise QuiverError(f"{text!r} is not an allowed path")
        return pa


class PathVector:
    """A linear combination of parallel allowed paths (source -> target)."""

    __slots__ = ("alg", "source", "target", "terms")

    def __init__(self, alg: PathAlgebra, source: str, target: str, terms: dict[int, int]):
        self.alg = alg
        self.source = source
        self.target = target
        p = alg.p
        self.terms = {k: c % p for k, c in terms.items() if c % p}

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check_parallel(self, other):
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("path vectors are not parallel")

    def __add__(self, other: "PathVector") -> "PathVector":
        self._check_parallel(other)
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t.get(k, 0) + c
        return PathVector(self.alg, self.source, self.target, t)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int) -> "PathVector":
        return PathVector(self.alg, self.source, self.target, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "PathVector") -> "PathVector":
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, PathVector):
            return NotImplemented
        return (self.source, self.target, self.terms) == (other.source, other.target, other.terms)

    def __hash__(self):
        return hash((self.source, self.target, frozenset(self.terms.items())))

    def trivial_coefficient(self) -> int:
        if self.source != self.target:
            return 0
        return self.terms.get(self.alg.trivial_index(self.source), 0)

    def items(self) -> list[tuple[Path, int]]:
        return [(self.alg.paths[k], c) for k, c in sorted(self.terms.items())]

    def inverse(self) -> "PathVector":
        """Inverse of a unit c*e_v + r in the local ring e_v A e_v."""
        c = self.trivial_coefficient()
        if not c:
            raise ZeroDivisionError("path vector is not invertible")
        p = self.alg.p
        ci = inv(c, p)
        e = self.alg.identity(self.source)
        # x = c(e + n) with n nilpotent: x^-1 = c^-1 sum (-n)^k
        n = self.scale(ci) - e
        result = e
        power = e
        for _ in range(self.alg.dim + 1):
            power = compose(power, -n)
            if power.is_zero():
                break
            result = result + power
        return result.scale(ci)

    def __repr__(self):
        if not self.terms:
            return f"0[{self.source}->{self.target}]"
        parts = []
        for pa, c in self.items():
            parts.append(f"{c}*{pa}" if c != 1 else str(pa))
        return " + ".join(parts)


def compose(x: PathVector, y: PathVector) -> PathVector:
    """Bilinear concatenation ``xy``; concatenations through a relation vanish."""
    if x.target != y.source:
        raise ValueError(f"cannot compose {x.source}->{x.target} with {y.source}->{y.target}")
    alg = x.alg
    out: dict[int, int] = {}
    for i, a in x.terms.items():
        for j, b in y.terms.items():
            k = alg._mul.get((i, j))
            if k is not None:
                out[k] = out.get(k, 0) + a * b
    return PathVector(alg, x.source, y.target, out)
