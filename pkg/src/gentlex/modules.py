"""Finite dimensional left modules, projective resolutions and the Nakayama functor.

A left module stores a vector space ``M_v`` per vertex; arrow ``a: u -> w``
acts as a matrix ``M_w -> M_u`` (column vectors), so the path ``ab`` acts by
``A @ B`` and a relation ``(a, b)`` reads ``A @ B = 0``.

* ``P_w = A e_w`` has basis at ``x`` the paths ``x -> w``.
* ``I_v = D(e_v A)`` has basis at ``u`` the duals of paths ``v -> u``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complexes import ProjComplex, minimalize
from .field import extend_basis, nullspace
from .quiver import PathAlgebra, PathVector, has_full_relation_cycle


class ResolutionError(RuntimeError):
    pass


@dataclass
class ModuleRep:
    alg: PathAlgebra
    dims: dict
    mats: dict = field(default_factory=dict)

    def __post_init__(self):
        q = self.alg.quiver
        p = self.alg.p
        for v in q.vertices:
            self.dims.setdefault(v, 0)
        for a in q.arrows:
            shape = (self.dims[a.source], self.dims[a.target])
            M = self.mats.get(a.name)
            M = np.zeros(shape, dtype=np.int64) if M is None else np.asarray(M, dtype=np.int64) % p
            if M.shape != shape:
                raise ValueError(f"arrow {a.name} matrix has shape {M.shape}, expected {shape}")
            self.mats[a.name] = M
        for a, b in q.relations:
            if ((self.mats[a] @ self.mats[b]) % p).any():
                raise ValueError(f"relation {a}{b} does not act by zero")

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.alg.quiver.vertices)

    def path_action(self, path_index: int) -> np.ndarray:
        pa = self.alg.paths[path_index]
        out = np.eye(self.dims[pa.target], dtype=np.int64)
        for name in reversed(pa.arrows):
            out = (self.mats[name] @ out) % self.alg.p
        return out


def projective_module(alg: PathAlgebra, w: str) -> ModuleRep:
    basis = {x: list(alg.between(x, w)) for x in alg.quiver.vertices}
    mats = {}
    for a in alg.quiver.arrows:
        ai = alg.index[_arrow_path(alg, a.name)]
        M = np.zeros((len(basis[a.source]), len(basis[a.target])), dtype=np.int64)
        pos = {k: r for r, k in enumerate(basis[a.source])}
        for col, q in enumerate(basis[a.target]):
            r = alg.mul_index(ai, q)
            if r is not None:
                M[pos[r], col] = 1
        mats[a.name] = M
    return ModuleRep(alg, {x: len(b) for x, b in basis.items()}, mats)


def injective_module(alg: PathAlgebra, v: str) -> ModuleRep:
    """D(e_v A): arrow ``a`` sends ``p*`` to ``p'*`` whenever ``p = p' a``."""
    basis = {u: list(alg.between(v, u)) for u in alg.quiver.vertices}
    mats = {}
    for a in alg.quiver.arrows:
        ai = alg.index[_arrow_path(alg, a.name)]
        M = np.zeros((len(basis[a.source]), len(basis[a.target])), dtype=np.int64)
        pos = {k: c for c, k in enumerate(basis[a.target])}
        for r, y in enumerate(basis[a.source]):
            k = alg.mul_index(y, ai)
            if k is not None:
                M[r, pos[k]] = 1
        mats[a.name] = M
    return ModuleRep(alg, {u: len(b) for u, b in basis.items()}, mats)


def _arrow_path(alg: PathAlgebra, name: str):
    return alg.parse_path(name)


def _direct_sum(alg: PathAlgebra, mods: list[ModuleRep]) -> ModuleRep:
    q = alg.quiver
    dims = {v: sum(m.dims[v] for m in mods) for v in q.vertices}
    mats = {}
    for a in q.arrows:
        M = np.zeros((dims[a.source], dims[a.target]), dtype=np.int64)
        r = c = 0
        for m in mods:
            h, w = m.mats[a.name].shape
            M[r:r + h, c:c + w] = m.mats[a.name]
            r += h
            c += w
        mats[a.name] = M
    return ModuleRep(alg, dims, mats)


def _dual_map_matrices(alg: PathAlgebra, u: PathVector) -> dict[str, np.ndarray]:
    """Per-vertex matrices of nu(u): I_v -> I_w for u in e_v A e_w.

    ``q*`` goes to ``y*`` whenever ``q = t y`` for a term ``t`` of ``u``.
    """
    v, w = u.source, u.target
    out = {}
    for x in alg.quiver.vertices:
        src = list(alg.between(v, x))
        tgt = list(alg.between(w, x))
        M = np.zeros((len(tgt), len(src)), dtype=np.int64)
        pos = {k: c for c, k in enumerate(src)}
        for t, c in u.terms.items():
            for r, y in enumerate(tgt):
                k = alg.mul_index(t, y)
                if k is not None:
                    M[r, pos[k]] += c
        out[x] = M % alg.p
    return out


def _projective_map_matrices(alg: PathAlgebra, u: PathVector) -> dict[str, np.ndarray]:
    """Per-vertex matrices of right multiplication by u: P_v -> P_w."""
    v, w = u.source, u.target
    out = {}
    for x in alg.quiver.vertices:
        src = list(alg.between(x, v))
        tgt = list(alg.between(x, w))
        M = np.zeros((len(tgt), len(src)), dtype=np.int64)
        pos = {k: r for r, k in enumerate(tgt)}
        for col, y in enumerate(src):
            for t, c in u.terms.items():
                k = alg.mul_index(y, t)
                if k is not None:
                    M[pos[k], col] += c
        out[x] = M % alg.p
    return out


@dataclass
class ModuleComplex:
    """Bounded complex of modules; ``diff[d][x]`` maps ``terms[d]_x -> terms[d+1]_x``."""

    alg: PathAlgebra
    terms: dict  # degree -> ModuleRep
    diff: dict  # degree -> {vertex: matrix}


def _block_matrices(alg, srcs, tgts, entries, per_entry):
    """Assemble per-vertex block matrices of a map between direct sums."""
    q = alg.quiver
    out = {}
    for x in q.vertices:
        rs = [m.dims[x] for m in tgts]
        cs = [m.dims[x] for m in srcs]
        M = np.zeros((sum(rs), sum(cs)), dtype=np.int64)
        out[x] = (M, np.cumsum([0] + rs), np.cumsum([0] + cs))
    for (i, j), u in entries.items():
        mats = per_entry(alg, u)
        for x, B in mats.items():
            M, ro, co = out[x]
            M[ro[j]:ro[j + 1], co[i]:co[i + 1]] += B
    return {x: t[0] % alg.p for x, t in out.items()}


def nakayama_module_complex(X: ProjComplex) -> ModuleComplex:
    """Apply nu termwise: P_v becomes I_v, a path map becomes its dual action."""
    alg = X.alg
    inj = {v: injective_module(alg, v) for v in alg.quiver.vertices}
    terms = {d: [inj[v] for v in vs] for d, vs in X.terms.items()}
    mods = {d: _direct_sum(alg, ms) for d, ms in terms.items()}
    diff = {}
    for d, block in X.diff.items():
        diff[d] = _block_matrices(alg, terms[d], terms.get(d + 1, []), block, _dual_map_matrices)
    return ModuleComplex(alg, mods, diff)


def stalk_module_complex(m: ModuleRep, degree: int = 0) -> ModuleComplex:
    return ModuleComplex(m.alg, {degree: m}, {})


def resolve(N: ModuleComplex, minimal: bool = True) -> ProjComplex:
    """A complex of projectives quasi-isomorphic to ``N``.

    Works downward from the top degree, maintaining ``C^k = N^k + P^{k+1}``
    with ``delta(n, x) = (d_N n + pi x, -d_P x)``: at each step the new
    projective summands are the generators of ``ker delta`` modulo its radical
    and the image of ``N^{k-1}``, so the cone of ``pi`` ends up acyclic.
    """
    alg = N.alg
    q = alg.quiver
    p = alg.p
    verts = q.vertices
    if has_full_relation_cycle(q):
        raise ResolutionError("infinite global dimension")
    proj_mod = {w: projective_module(alg, w) for w in verts}
    nz = [d for d, m in N.terms.items() if m.total_dim]
    if not nz:
        return ProjComplex(alg, {}, {}, check=False)
    top, bottom = max(nz), min(nz)
    zero_mod = ModuleRep(alg, {})

    def nmod(k):
        return N.terms.get(k, zero_mod)

    def ndiff(k):
        if k in N.diff:
            return N.diff[k]
        return {x: np.zeros((nmod(k + 1).dims[x], nmod(k).dims[x]), dtype=np.int64) for x in verts}

    P_terms: dict[int, list[str]] = {}
    P_diff: dict[int, dict] = {}
    # columns [pi; -d_P] of the summands of P^{k+1} inside C^{k+1}, per vertex
    lower = {x: np.zeros((nmod(top + 1).dims[x], 0), dtype=np.int64) for x in verts}
    p_next: list[str] = []
    guard = alg.dim + len(verts)
    k = top
    while k >= bottom or p_next:
        if bottom - k > guard:
            raise ResolutionError("resolution did not terminate; infinite global dimension?")
        Nk = nmod(k)
        Ck = _direct_sum(alg, [Nk] + [proj_mod[w] for w in p_next])
        n_up = nmod(k + 1).dims
        dN = ndiff(k)
        Z = {}
        for x in verts:
            n = Ck.dims[x]
            low = lower[x]
            rows_p = low.shape[0] - n_up[x]
            delta = np.block([
                [dN[x], low[: n_up[x]]],
                [np.zeros((rows_p, Nk.dims[x]), dtype=np.int64), low[n_up[x]:]],
            ]) % p if n else np.zeros((low.shape[0], 0), dtype=np.int64)
            if n == 0:
                Z[x] = np.zeros((0, 0), dtype=np.int64)
            elif delta.shape[0] == 0:
                Z[x] = np.eye(n, dtype=np.int64)
            else:
                Z[x] = nullspace(delta, p)
        dNm = ndiff(k - 1)
        gens: list[tuple[str, np.ndarray]] = []
        for x in verts:
            if Z[x].shape[0] == 0:
                continue
            n = Ck.dims[x]
            sub = []
            for a in q.out_arrows[x]:
                # a: x -> w acts C_w -> C_x; these span rad Z at x
                Zw = Z[a.target]
                if Zw.shape[0]:
                    sub.append(((Ck.mats[a.name] @ Zw.T) % p).T)
            img = dNm[x]
            if img.shape[1]:
                pad = np.zeros((img.shape[1], n), dtype=np.int64)
                pad[:, : Nk.dims[x]] = img.T
                sub.append(pad)
            S = np.concatenate(sub, axis=0) if sub else np.zeros((0, n), dtype=np.int64)
            for idx in extend_basis(S, Z[x], p):
                gens.append((x, Z[x][idx] % p))
        cols: dict[str, list] = {x: [] for x in verts}
        actions: dict[int, np.ndarray] = {}
        block = {}
        for s, (u, z) in enumerate(gens):
            for y in verts:
                for t in alg.between(y, u):
                    if t not in actions:
                        actions[t] = Ck.path_action(t)
                    cols[y].append((actions[t] @ z) % p)
            # d_P(e_u) = -z_P, read summand by summand
            off = Nk.dims[u]
            for j, w in enumerate(p_next):
                paths = alg.between(u, w)
                seg = z[off: off + len(paths)]
                off += len(paths)
                if seg.any():
                    block[(s, j)] = PathVector(alg, u, w, {t: -int(c) for t, c in zip(paths, seg) if c})
        if gens:
            P_terms[k] = [u for u, _ in gens]
            if block:
                P_diff[k] = block
        lower = {
            y: np.stack(cols[y], axis=1) % p if cols[y] else np.zeros((Ck.dims[y], 0), dtype=np.int64)
            for y in verts
        }
        p_next = [u for u, _ in gens]
        k -= 1
    out = ProjComplex(alg, P_terms, P_diff)
    return minimalize(out) if minimal else out


def projective_resolution(m: ModuleRep) -> ProjComplex:
    return resolve(stalk_module_complex(m, 0))


def nakayama(X: ProjComplex) -> ProjComplex:
    """The Serre functor on perfect complexes: nu termwise, then resolve."""
    return resolve(nakayama_module_complex(X))
