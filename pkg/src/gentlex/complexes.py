"""Bounded complexes of projectives over a gentle algebra, up to homotopy.

A complex stores, per degree ``d``, the vertices of its indecomposable
projective summands and a sparse differential ``D_d`` whose entry ``(i, j)``
is a path vector from the vertex of summand ``i`` in degree ``d`` to the
vertex of summand ``j`` in degree ``d+1``.  Maps compose left to right, so
``d^2 = 0`` reads ``D_d D_{d+1} = 0`` as a product of path matrices.

Conventions:

* ``X[n]_d = X_{d+n}`` with differential ``(-1)^n D``.
* Hom complex: ``delta(F)_d = D^X_{d-1} F_d - (-1)^m F_d D^Y_{d+m}`` for a
  degree ``m`` cochain ``F``; ``Hom(X, Y[n])`` is its degree-0 cohomology
  computed against ``Y[n]``.
* ``cone(f)_d = Y_d + X_{d+1}`` with rows ``[D^Y, 0]`` and ``[F, -D^X]``.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .field import extend_basis, nullspace, rank
from .quiver import Path, PathAlgebra, PathVector, QuiverError

Entry = dict  # (i, j) -> PathVector


class ComplexError(ValueError):
    pass


class ProjComplex:
    """A bounded complex of finitely generated projective modules."""

    __slots__ = ("alg", "terms", "diff", "_key", "__weakref__")

    def __init__(self, alg: PathAlgebra, terms: dict, diff: dict | None = None, check: bool = True):
        self.alg = alg
        self.terms: dict[int, tuple[str, ...]] = {
            int(d): tuple(vs) for d, vs in sorted(terms.items()) if len(vs)
        }
        self.diff: dict[int, dict[tuple[int, int], PathVector]] = {}
        for d, block in (diff or {}).items():
            d = int(d)
            kept = {ij: u for ij, u in block.items() if not u.is_zero()}
            if kept:
                self.diff[d] = kept
        self._key = None
        if check:
            self.check()

    # basic access
    def term(self, d: int) -> tuple[str, ...]:
        return self.terms.get(d, ())

    def block(self, d: int) -> dict:
        return self.diff.get(d, {})

    @property
    def degrees(self) -> list[int]:
        return sorted(self.terms)

    @property
    def dmin(self) -> int:
        if not self.terms:
            raise ComplexError("zero complex has no support")
        return min(self.terms)

    @property
    def dmax(self) -> int:
        if not self.terms:
            raise ComplexError("zero complex has no support")
        return max(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def size(self) -> int:
        return sum(len(v) for v in self.terms.values())

    def check(self) -> None:
        q = self.alg.quiver
        for d, vs in self.terms.items():
            for v in vs:
                if not q.has_vertex(v):
                    raise QuiverError(f"unknown vertex {v!r}")
        for d, block in self.diff.items():
            src, tgt = self.term(d), self.term(d + 1)
            for (i, j), u in block.items():
                if i >= len(src) or j >= len(tgt):
                    raise ComplexError(f"differential entry ({i},{j}) out of range in degree {d}")
                if (u.source, u.target) != (src[i], tgt[j]):
                    raise ComplexError(f"differential entry ({i},{j}) in degree {d} has the wrong type")
        for d in self.diff:
            if not _is_zero_block(_matmul(self.block(d), self.block(d + 1), self.alg)):
                raise ComplexError(f"d^2 != 0 at degree {d}")

    def d_squared_zero(self) -> bool:
        return all(_is_zero_block(_matmul(self.block(d), self.block(d + 1), self.alg)) for d in self.diff)

    # structural operations
    def shift(self, n: int) -> "ProjComplex":
        if n == 0:
            return self
        sign = -1 if n % 2 else 1
        terms = {d - n: vs for d, vs in self.terms.items()}
        diff = {d - n: {ij: u.scale(sign) for ij, u in b.items()} for d, b in self.diff.items()}
        return ProjComplex(self.alg, terms, diff, check=False)

    def key(self):
        """Hashable structural fingerprint (exact equality of presentations)."""
        if self._key is None:
            self._key = (
                tuple(self.terms.items()),
                tuple(
                    (d, tuple(sorted((ij, tuple(sorted(u.terms.items()))) for ij, u in b.items())))
                    for d, b in sorted(self.diff.items())
                ),
            )
        return self._key

    def __eq__(self, other):
        if not isinstance(other, ProjComplex):
            return NotImplemented
        return self.alg is other.alg and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def summand_multiset(self) -> tuple:
        return tuple((d, tuple(sorted(vs))) for d, vs in sorted(self.terms.items()))

    def k0_class(self) -> tuple[int, ...]:
        """Alternating sum of summand vertices, as a vector indexed by vertex order."""
        q = self.alg.quiver
        vec = [0] * len(q.vertices)
        for d, vs in self.terms.items():
            for v in vs:
                vec[q.vertex_index(v)] += -1 if d % 2 else 1
        return tuple(vec)

    # serialization
    def to_json(self) -> dict:
        out_terms = {str(d): list(vs) for d, vs in self.terms.items()}
        out_diff = {}
        for d, b in self.diff.items():
            rows = [[[] for _ in self.term(d + 1)] for _ in self.term(d)]
            for (i, j), u in b.items():
                rows[i][j] = [[_path_json(pa), int(c)] for pa, c in u.items()]
            out_diff[str(d)] = rows
        return {"terms": out_terms, "diff": out_diff}

    @classmethod
    def from_json(cls, alg: PathAlgebra, data: dict) -> "ProjComplex":
        terms = {int(d): [str(v) for v in vs] for d, vs in data.get("terms", {}).items()}
        diff = {}
        for d, rows in data.get("diff", {}).items():
            d = int(d)
            src, tgt = terms.get(d, []), terms.get(d + 1, [])
            if len(rows) != len(src) or any(len(r) != len(tgt) for r in rows):
                raise ComplexError(f"differential in degree {d} has the wrong shape")
            block = {}
            for i, row in enumerate(rows):
                for j, entry in enumerate(row):
                    u = alg.zero(src[i], tgt[j])
                    for path, c in _entry_pairs(entry):
                        pa = _parse_json_path(alg, path)
                        if (pa.source, pa.target) != (src[i], tgt[j]):
                            raise ComplexError(f"entry ({i},{j}) in degree {d} has the wrong endpoints")
                        u = u + alg.element(pa, int(c))
                    block[(i, j)] = u
            diff[d] = block
        return cls(alg, terms, diff)

    def __repr__(self):
        if not self.terms:
            return "ProjComplex(0)"
        parts = [f"{d}:{'+'.join(vs)}" for d, vs in self.terms.items()]
        return f"ProjComplex({' '.join(parts)}; {sum(len(b) for b in self.diff.values())} maps)"


def _path_json(pa: Path):
    return f"e_{pa.source}" if pa.is_trivial else list(pa.arrows)


def _is_pair(entry) -> bool:
    if not (isinstance(entry, (list, tuple)) and len(entry) == 2):
        return False
    head, c = entry
    if isinstance(c, bool) or not isinstance(c, int):
        return False
    return isinstance(head, str) or (isinstance(head, list) and all(isinstance(x, str) for x in head))


def _entry_pairs(entry):
    if not entry:
        return []
    if _is_pair(entry):
        return [entry]
    if all(_is_pair(e) for e in entry):
        return list(entry)
    raise ComplexError(f"malformed differential entry {entry!r}")


def _parse_json_path(alg: PathAlgebra, path) -> Path:
    if isinstance(path, list):
        path = " ".join(path)
    return alg.parse_path(path)


def _matmul(A: dict, B: dict, alg: PathAlgebra) -> dict:
    """Product of sparse path matrices (left-to-right composition)."""
    by_row: dict[int, list] = {}
    for (k, j), v in B.items():
        by_row.setdefault(k, []).append((j, v))
    out: dict = {}
    for (i, k), u in A.items():
        for j, v in by_row.get(k, ()):
            w = u * v
            out[(i, j)] = out[(i, j)] + w if (i, j) in out else w
    return out


def _is_zero_block(block: dict) -> bool:
    return all(u.is_zero() for u in block.values())


def zero_complex(alg: PathAlgebra) -> ProjComplex:
    return ProjComplex(alg, {}, {}, check=False)


def projective_stalk(alg: PathAlgebra, v: str, degree: int = 0) -> ProjComplex:
    alg.quiver.vertex_index(v)
    return ProjComplex(alg, {degree: (v,)}, {}, check=False)


def direct_sum(parts: Sequence[ProjComplex]) -> ProjComplex:
    parts = list(parts)
    if not parts:
        raise ComplexError("empty direct sum needs an algebra; use zero_complex")
    alg = parts[0].alg
    terms: dict[int, list[str]] = {}
    diff: dict[int, dict] = {}
    offsets = _sum_offsets(parts)
    for k, X in enumerate(parts):
        for d, vs in X.terms.items():
            terms.setdefault(d, []).extend(vs)
        for d, b in X.diff.items():
            tgt = diff.setdefault(d, {})
            oi, oj = offsets[k].get(d, 0), offsets[k].get(d + 1, 0)
            for (i, j), u in b.items():
                tgt[(i + oi, j + oj)] = u
    return ProjComplex(alg, terms, diff, check=False)


def _sum_offsets(parts: Sequence[ProjComplex]) -> list[dict[int, int]]:
    running: dict[int, int] = {}
    out = []
    for X in parts:
        out.append(dict(running))
        for d, vs in X.terms.items():
            running[d] = running.get(d, 0) + len(vs)
    return out


@dataclass
class ChainMap:
    """A degree-0 map ``source -> target[shift]``; ``blocks[d][(i, j)]`` maps
    ``source_d[i]`` to ``target_{d+shift}[j]``."""

    source: ProjComplex
    target: ProjComplex
    shift: int
    blocks: dict = field(default_factory=dict)

    def shifted_target(self) -> ProjComplex:
        return self.target.shift(self.shift)

    def is_closed(self) -> bool:
        X, Y = self.source, self.shifted_target()
        alg = X.alg
        for d in set(X.terms) | {d - 1 for d in X.terms}:
            lhs = _matmul(X.block(d), self.blocks.get(d + 1, {}), alg)
            rhs = _matmul(self.blocks.get(d, {}), Y.block(d), alg)
            for ij in set(lhs) | set(rhs):
                a = lhs.get(ij)
                b = rhs.get(ij)
                diffv = a - b if a is not None and b is not None else (a if a is not None else -b)
                if not diffv.is_zero():
                    return False
        return True

    def as_degree_zero(self) -> "ChainMap":
        """The same matrices viewed as a map ``source[-shift] -> target``."""
        if self.shift == 0:
            return self
        # source[-n] in degree e is source_{e-n}, which f sends to target_e
        blocks = {d + self.shift: dict(b) for d, b in self.blocks.items()}
        return ChainMap(self.source.shift(-self.shift), self.target, 0, blocks)

    def scale(self, c: int) -> "ChainMap":
        return ChainMap(self.source, self.target, self.shift,
                        {d: {ij: u.scale(c) for ij, u in b.items()} for d, b in self.blocks.items()})

    def __add__(self, other: "ChainMap") -> "ChainMap":
        blocks = {d: dict(b) for d, b in self.blocks.items()}
        for d, b in other.blocks.items():
            tgt = blocks.setdefault(d, {})
            for ij, u in b.items():
                tgt[ij] = tgt[ij] + u if ij in tgt else u
        return ChainMap(self.source, self.target, self.shift, blocks)

    def is_zero(self) -> bool:
        return all(u.is_zero() for b in self.blocks.values() for u in b.values())


def identity_map(X: ProjComplex) -> ChainMap:
    blocks = {d: {(i, i): X.alg.identity(v) for i, v in enumerate(vs)} for d, vs in X.terms.items()}
    return ChainMap(X, X, 0, blocks)


def zero_map(X: ProjComplex, Y: ProjComplex, shift: int = 0) -> ChainMap:
    return ChainMap(X, Y, shift, {})


# --- Hom complexes --------------------------------------------------------


class _Cochains:
    """Coordinates of degree ``m`` cochains X -> Y (maps X_d -> Y_{d+m})."""

    def __init__(self, X: ProjComplex, Y: ProjComplex, m: int):
        alg = X.alg
        self.m = m
        self.pos: dict[tuple[int, int, int], tuple[int, dict[int, int]]] = {}
        self.basis: list[tuple[int, int, int, int]] = []  # (d, i, j, path index)
        for d in X.degrees:
            ys = Y.term(d + m)
            for i, xv in enumerate(X.term(d)):
                for j, yv in enumerate(ys):
                    paths = alg.between(xv, yv)
                    if not paths:
                        continue
                    self.pos[(d, i, j)] = (len(self.basis), {k: t for t, k in enumerate(paths)})
                    for k in paths:
                        self.basis.append((d, i, j, k))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coord(self, d, i, j, k) -> int:
        off, loc = self.pos[(d, i, j)]
        return off + loc[k]


def _delta_matrix(X: ProjComplex, Y: ProjComplex, src: _Cochains, tgt: _Cochains) -> np.ndarray:
    """Rows are the images of the basis cochains of ``src`` in ``tgt`` coordinates."""
    alg = X.alg
    p = alg.p
    mul = alg._mul
    m = src.m
    M = np.zeros((src.dim, tgt.dim), dtype=np.int64)
    if not src.dim or not tgt.dim:
        return M
    sign = 1 if m % 2 else -1  # -(-1)^m
    # column-indexed view of D^X_{d-1} and row-indexed view of D^Y
    xcols: dict[int, dict[int, list]] = {}
    for d, b in X.diff.items():
        for (i2, i), u in b.items():
            xcols.setdefault(d, {}).setdefault(i, []).append((i2, u))
    yrows: dict[int, dict[int, list]] = {}
    for d, b in Y.diff.items():
        for (j, j2), u in b.items():
            yrows.setdefault(d, {}).setdefault(j, []).append((j2, u))
    for s, (d, i, j, k) in enumerate(src.basis):
        for i2, u in xcols.get(d - 1, {}).get(i, ()):
            for t, c in u.terms.items():
                r = mul.get((t, k))
                if r is not None:
                    col = tgt.coord(d - 1, i2, j, r)
                    M[s, col] = (M[s, col] + c) % p
        for j2, u in yrows.get(d + m, {}).get(j, ()):
            for t, c in u.terms.items():
                r = mul.get((k, t))
                if r is not None:
                    col = tgt.coord(d, i, j2, r)
                    M[s, col] = (M[s, col] + sign * c) % p
    return M


@dataclass
class HomSpace:
    shift: int
    basis: list
    dim: int


_CACHE: "weakref.WeakKeyDictionary[PathAlgebra, dict]" = weakref.WeakKeyDictionary()


def _cache(alg: PathAlgebra) -> dict:
    c = _CACHE.get(alg)
    if c is None:
        c = {}
        _CACHE[alg] = c
    return c


def clear_cache() -> None:
    _CACHE.clear()


def _hom_data(X: ProjComplex, Y: ProjComplex, ell: int):
    Ys = Y.shift(ell)
    c0 = _Cochains(X, Ys, 0)
    if c0.dim == 0:
        return c0, None, None
    cm = _Cochains(X, Ys, -1)
    c1 = _Cochains(X, Ys, 1)
    d0 = _delta_matrix(X, Ys, c0, c1)
    dm = _delta_matrix(X, Ys, cm, c0)
    return c0, d0, dm


def hom_dim(X: ProjComplex, Y: ProjComplex, ell: int = 0) -> int:
    if X.is_zero() or Y.is_zero():
        return 0
    if not (Y.dmin - X.dmax <= ell <= Y.dmax - X.dmin):
        return 0
    cache = _cache(X.alg)
    ck = ("dim", X.key(), Y.key(), ell)
    if ck in cache:
        return cache[ck]
    c0, d0, dm = _hom_data(X, Y, ell)
    if d0 is None:
        val = 0
    else:
        p = X.alg.p
        val = c0.dim - rank(d0, p) - rank(dm, p)
    cache[ck] = val
    return val


def hom_basis(X: ProjComplex, Y: ProjComplex, ell: int = 0) -> HomSpace:
    """Basis of Hom(X, Y[ell]) in the homotopy category, as closed chain maps."""
    if X.is_zero() or Y.is_zero() or not (Y.dmin - X.dmax <= ell <= Y.dmax - X.dmin):
        return HomSpace(ell, [], 0)
    cache = _cache(X.alg)
    ck = ("basis", X.key(), Y.key(), ell)
    if ck in cache:
        vecs = cache[ck]
    else:
        p = X.alg.p
        c0, d0, dm = _hom_data(X, Y, ell)
        if d0 is None:
            vecs = []
        else:
            Z = nullspace(d0.T, p) if d0.shape[1] else np.eye(c0.dim, dtype=np.int64)
            chosen = extend_basis(dm, Z, p)
            vecs = [(c0, Z[k]) for k in chosen]
        cache[ck] = vecs
        cache[("dim", X.key(), Y.key(), ell)] = len(vecs)
    basis = [_vector_to_map(X, Y, ell, c0, vec) for c0, vec in vecs]
    return HomSpace(ell, basis, len(basis))


def _vector_to_map(X, Y, ell, cochains: _Cochains, vec) -> ChainMap:
    alg = X.alg
    blocks: dict[int, dict] = {}
    for s in np.nonzero(vec)[0]:
        d, i, j, k = cochains.basis[s]
        u = PathVector(alg, X.term(d)[i], Y.term(d + ell)[j], {k: int(vec[s])})
        b = blocks.setdefault(d, {})
        b[(i, j)] = b[(i, j)] + u if (i, j) in b else u
    return ChainMap(X, Y, ell, blocks)


def hom_window(X: ProjComplex, Y: ProjComplex) -> range:
    if X.is_zero() or Y.is_zero():
        return range(0)
    return range(Y.dmin - X.dmax, Y.dmax - X.dmin + 1)


def hom_dims(X: ProjComplex, Y: ProjComplex) -> dict[int, int]:
    """Nonzero dimensions of Hom(X, Y[ell]) over the support window."""
    out = {}
    for ell in hom_window(X, Y):
        n = hom_dim(X, Y, ell)
        if n:
            out[ell] = n
    return out


def hom_all(X: ProjComplex, Y: ProjComplex) -> list[tuple[int, HomSpace]]:
    out = []
    for ell in hom_window(X, Y):
        if hom_dim(X, Y, ell):
            out.append((ell, hom_basis(X, Y, ell)))
    return out


def euler_form(X: ProjComplex, Y: ProjComplex) -> int:
    return sum((-1) ** (ell % 2) * n for ell, n in hom_dims(X, Y).items())


# --- cones and minimal models --------------------------------------------


def cone(f: ChainMap) -> ProjComplex:
    if f.shift != 0:
        f = f.as_degree_zero()
    if not f.is_closed():
        raise ComplexError("cone of a non-closed map")
    X, Y = f.source, f.target
    alg = X.alg
    degs = set(Y.terms) | {d - 1 for d in X.terms}
    terms = {d: list(Y.term(d)) + list(X.term(d + 1)) for d in degs}
    diff: dict[int, dict] = {}
    for d in degs:
        ny0, ny1 = len(Y.term(d)), len(Y.term(d + 1))
        b: dict = {}
        for ij, u in Y.block(d).items():
            b[ij] = u
        for (i, j), u in f.blocks.get(d + 1, {}).items():
            b[(ny0 + i, j)] = u
        for (i, j), u in X.block(d + 1).items():
            b[(ny0 + i, ny1 + j)] = -u
        diff[d] = b
    return ProjComplex(alg, terms, diff)


def minimalize(X: ProjComplex) -> ProjComplex:
    """Gaussian elimination of unit entries until the differential is radical.

    Pivots are taken in degree order, then row-major within a degree.
    """
    alg = X.alg
    terms = {d: list(vs) for d, vs in X.terms.items()}
    diff = {d: dict(b) for d, b in X.diff.items()}
    degs = sorted(terms)
    di = 0
    while di < len(degs):
        d = degs[di]
        piv = None
        for (r, c) in sorted(diff.get(d, {})):
            if diff[d][(r, c)].trivial_coefficient():
                piv = (r, c)
                break
        if piv is None:
            di += 1
            continue
        r, c = piv
        D = diff[d]
        phi_inv = D[(r, c)].inverse()
        col_c = [(i, u) for (i, j), u in D.items() if j == c and i != r]
        row_r = [(j, u) for (i, j), u in D.items() if i == r and j != c]
        for i, u in col_c:
            left = u * phi_inv
            for j, v in row_r:
                w = left * v
                if w.is_zero():
                    continue
                D[(i, j)] = D[(i, j)] - w if (i, j) in D else -w
        diff[d] = {(_drop(i, r), _drop(j, c)): u for (i, j), u in D.items() if i != r and j != c}
        if d - 1 in diff:
            diff[d - 1] = {(i, _drop(j, r)): u for (i, j), u in diff[d - 1].items() if j != r}
        if d + 1 in diff:
            diff[d + 1] = {(_drop(i, c), j): u for (i, j), u in diff[d + 1].items() if i != c}
        del terms[d][r]
        del terms[d + 1][c]
    return ProjComplex(alg, terms, diff, check=False)


def _drop(i: int, k: int) -> int:
    return i - 1 if i > k else i


def is_minimal(X: ProjComplex) -> bool:
    return not any(u.trivial_coefficient() for b in X.diff.values() for u in b.values())


def is_contractible(X: ProjComplex) -> bool:
    return minimalize(X).is_zero()


# --- isomorphism and exceptionality ---------------------------------------

ISOMORPHIC = "isomorphic"
NOT_ISOMORPHIC = "not_isomorphic"
UNDETERMINED = "undetermined"


def iso_test(X: ProjComplex, Y: ProjComplex, trials: int = 20, seed: int = 0) -> str:
    mX, mY = minimalize(X), minimalize(Y)
    if mX.summand_multiset() != mY.summand_multiset():
        return NOT_ISOMORPHIC
    if mX.is_zero():
        return ISOMORPHIC
    if mX == mY:
        return ISOMORPHIC
    ref = hom_dims(mX, mX)
    for A, B in ((mY, mY), (mX, mY), (mY, mX)):
        if hom_dims(A, B) != ref:
            return NOT_ISOMORPHIC
    H = hom_basis(mX, mY, 0)
    if H.dim == 0:
        return NOT_ISOMORPHIC
    rng = np.random.default_rng(seed)
    p = X.alg.p
    for _ in range(trials):
        coeffs = rng.integers(1, p, size=H.dim)
        f = H.basis[0].scale(int(coeffs[0]))
        for c, g in zip(coeffs[1:], H.basis[1:]):
            f = f + g.scale(int(c))
        if is_contractible(cone(f)):
            return ISOMORPHIC
    return UNDETERMINED


def is_exceptional_object(X: ProjComplex) -> bool:
    if X.is_zero():
        raise ComplexError("the zero complex is not a valid exceptional candidate")
    return hom_dims(X, X) == {0: 1}


def is_exceptional_sequence(seq: Sequence[ProjComplex]) -> bool:
    for X in seq:
        if not is_exceptional_object(X):
            return False
    for i in range(len(seq)):
        for j in range(i):
            if hom_dims(seq[i], seq[j]):
                return False
    return True


def is_presilting(seq: Sequence[ProjComplex]) -> bool:
    for X in seq:
        for Y in seq:
            if any(ell > 0 for ell in hom_dims(X, Y)):
                return False
    return True
