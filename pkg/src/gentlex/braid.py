"""Braid group action on full exceptional sequences by mutation."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .complexes import (
    ISOMORPHIC,
    NOT_ISOMORPHIC,
    UNDETERMINED,
    ChainMap,
    ProjComplex,
    cone,
    direct_sum,
    hom_all,
    hom_dims,
    is_exceptional_sequence,
    is_presilting,
    iso_test,
    minimalize,
    projective_stalk,
    _sum_offsets,
)
from .modules import nakayama
from .quiver import GentleQuiver, PathAlgebra, has_oriented_cycle


class MutationError(ValueError):
    pass


class BraidInvariantError(AssertionError):
    """A structural identity that must hold failed; signals a bug."""


@dataclass(frozen=True)
class ExceptionalSequence:
    objects: tuple
    full: bool = False

    @classmethod
    def of(cls, objects: Iterable[ProjComplex], validate: bool = True) -> "ExceptionalSequence":
        objs = tuple(objects)
        if not objs:
            raise MutationError("empty sequence")
        if validate and not is_exceptional_sequence(objs):
            raise MutationError("not an exceptional sequence")
        n = len(objs[0].alg.quiver.vertices)
        return cls(objs, full=len(objs) == n)

    @property
    def alg(self) -> PathAlgebra:
        return self.objects[0].alg

    def __len__(self):
        return len(self.objects)

    def __getitem__(self, i):
        return self.objects[i]

    def __iter__(self):
        return iter(self.objects)

    def to_json(self) -> list:
        return [X.to_json() for X in self.objects]


@dataclass(frozen=True)
class BraidWord:
    letters: tuple[tuple[int, int], ...] = ()

    @classmethod
    def parse(cls, text: str) -> "BraidWord":
        letters = []
        for tok in text.replace(",", " ").split():
            k = int(tok)
            if k == 0:
                raise ValueError("generator index 0 is not allowed")
            letters.append((abs(k), 1 if k > 0 else -1))
        return cls(tuple(letters))

    def inverse(self) -> "BraidWord":
        return BraidWord(tuple((i, -s) for i, s in reversed(self.letters)))

    def check_range(self, n: int) -> None:
        for i, _ in self.letters:
            if not 1 <= i <= n - 1:
                raise MutationError(f"generator index {i} out of range for length {n}")

    def __add__(self, other: "BraidWord") -> "BraidWord":
        return BraidWord(self.letters + other.letters)

    def __str__(self):
        return " ".join(str(i * s) for i, s in self.letters)


def _as_word(w) -> BraidWord:
    if isinstance(w, BraidWord):
        return w
    if isinstance(w, str):
        return BraidWord.parse(w)
    return BraidWord(tuple((abs(int(k)), 1 if int(k) > 0 else -1) for k in w))


def omega0(n: int) -> BraidWord:
    """sigma_1 (sigma_2 sigma_1) ... (sigma_{n-1} ... sigma_1)."""
    letters = []
    for top in range(1, n):
        letters.extend((i, 1) for i in range(top, 0, -1))
    return BraidWord(tuple(letters))


def seed_sequence(q: GentleQuiver, extension: Sequence[str] | None = None, p: int | None = None,
                  alg: PathAlgebra | None = None) -> ExceptionalSequence:
    if has_oriented_cycle(q):
        raise MutationError("quiver has an oriented cycle; supply complexes explicitly")
    if alg is None:
        alg = q.with_prime(p) if p is not None else q.with_prime()
    if extension is None:
        from .combinatorics import linear_extensions

        extension = next(linear_extensions(q))
    extension = list(extension)
    pos = {v: i for i, v in enumerate(extension)}
    if sorted(extension) != sorted(q.vertices):
        raise MutationError("extension must list every vertex once")
    for a in q.arrows:
        if pos[a.source] >= pos[a.target]:
            raise MutationError(f"arrow {a.name} violates the order")
    return ExceptionalSequence.of(projective_stalk(alg, v, 0) for v in extension)


def _check_pair(X, Y, check):
    if check and not is_exceptional_sequence([X, Y]):
        raise MutationError("not an exceptional pair")


def right_mutation(X: ProjComplex, Y: ProjComplex, check: bool = True) -> ProjComplex:
    """R_Y X: shift by -1 of the cone of the coevaluation X -> sum of Y[l]."""
    _check_pair(X, Y, check)
    homs = [(ell, g) for ell, H in hom_all(X, Y) for g in H.basis]
    if not homs:
        return X
    targets = [Y.shift(ell) for ell, _ in homs]
    T = direct_sum(targets)
    offs = _sum_offsets(targets)
    blocks: dict = {}
    for k, (ell, g) in enumerate(homs):
        for d, b in g.blocks.items():
            o = offs[k].get(d, 0)
            tgt = blocks.setdefault(d, {})
            for (i, j), u in b.items():
                tgt[(i, j + o)] = u
    u = ChainMap(X, T, 0, blocks)
    return minimalize(cone(u).shift(-1))


def left_mutation(X: ProjComplex, Y: ProjComplex, check: bool = True) -> ProjComplex:
    """L_X Y: cone of the evaluation sum of X[-m] -> Y."""
    _check_pair(X, Y, check)
    homs = [g.as_degree_zero() for _, H in hom_all(X, Y) for g in H.basis]
    if not homs:
        return Y
    sources = [g.source for g in homs]
    S = direct_sum(sources)
    offs = _sum_offsets(sources)
    blocks: dict = {}
    for k, g in enumerate(homs):
        for d, b in g.blocks.items():
            o = offs[k].get(d, 0)
            tgt = blocks.setdefault(d, {})
            for (i, j), u in b.items():
                tgt[(i + o, j)] = u
    ev = ChainMap(S, Y, 0, blocks)
    return minimalize(cone(ev))


def apply_generator(seq: Sequence[ProjComplex], i: int, sign: int, check: bool = True) -> list:
    objs = list(seq)
    if not 1 <= i <= len(objs) - 1:
        raise MutationError(f"generator index {i} out of range for length {len(objs)}")
    X, Y = objs[i - 1], objs[i]
    if sign > 0:
        objs[i - 1], objs[i] = Y, right_mutation(X, Y, check=False)
    else:
        objs[i - 1], objs[i] = left_mutation(X, Y, check=False), X
    return objs


def apply_word(seq: ExceptionalSequence, word, check: bool = True) -> ExceptionalSequence:
    """Apply generators left to right; every intermediate sequence is revalidated."""
    w = _as_word(word)
    w.check_range(len(seq))
    objs = list(seq.objects)
    for i, s in w.letters:
        objs = apply_generator(objs, i, s, check=False)
        if check and not is_exceptional_sequence(objs):
            raise BraidInvariantError(f"sequence stopped being exceptional after generator {i * s}")
    return ExceptionalSequence(tuple(objs), full=seq.full)


def componentwise_iso(A: Sequence[ProjComplex], B: Sequence[ProjComplex], trials: int = 20, seed: int = 0) -> list[str]:
    if len(A) != len(B):
        return [NOT_ISOMORPHIC]
    return [iso_test(x, y, trials=trials, seed=seed) for x, y in zip(A, B)]


def summarize(verdicts: Sequence[str]) -> str:
    if all(v == ISOMORPHIC for v in verdicts):
        return ISOMORPHIC
    if any(v == NOT_ISOMORPHIC for v in verdicts):
        return NOT_ISOMORPHIC
    return UNDETERMINED


def right_dual_formula(seq: Sequence[ProjComplex]) -> list:
    """(X_n, R^1 X_{n-1}, ..., R^{n-1} X_1) with R^{n-i} X_i = R_{X_n} ... R_{X_{i+1}} X_i."""
    objs = list(seq)
    n = len(objs)
    out = []
    for i in range(n - 1, -1, -1):
        Z = objs[i]
        for j in range(i + 1, n):
            Z = right_mutation(Z, objs[j], check=False)
        out.append(Z)
    return out


def left_dual_formula(seq: Sequence[ProjComplex]) -> list:
    """(L^{n-1} X_n, ..., X_1) with L^{i-1} X_i = L_{X_1} ... L_{X_{i-1}} X_i."""
    objs = list(seq)
    n = len(objs)
    out = []
    for i in range(n - 1, -1, -1):
        Z = objs[i]
        for j in range(i - 1, -1, -1):
            Z = left_mutation(objs[j], Z, check=False)
        out.append(Z)
    return out


def _dual(seq, word, formula, trials, seed, cross_check):
    via_word = apply_word(seq, word)
    if cross_check:
        verdicts = componentwise_iso(via_word.objects, formula(seq.objects), trials, seed)
        if summarize(verdicts) != ISOMORPHIC:
            raise BraidInvariantError(f"dual via the braid word disagrees with the formula: {verdicts}")
    return via_word


def right_dual(seq: ExceptionalSequence, trials: int = 20, seed: int = 0, cross_check: bool = True) -> ExceptionalSequence:
    return _dual(seq, omega0(len(seq)), right_dual_formula, trials, seed, cross_check)


def left_dual(seq: ExceptionalSequence, trials: int = 20, seed: int = 0, cross_check: bool = True) -> ExceptionalSequence:
    return _dual(seq, omega0(len(seq)).inverse(), left_dual_formula, trials, seed, cross_check)


@dataclass
class SerreReport:
    components: list
    last_component: str
    passed: bool
    undetermined: bool

    def to_dict(self):
        return {
            "components": self.components,
            "last_component": self.last_component,
            "passed": self.passed,
            "undetermined": self.undetermined,
        }


def serre_check(seq: ExceptionalSequence, trials: int = 20, seed: int = 0) -> SerreReport:
    """Compare nu(X_i) with the i-th term of the double left dual."""
    L1 = left_dual(seq, trials, seed)
    L2 = left_dual(L1, trials, seed)
    nus = [nakayama(X) for X in seq]
    verdicts = componentwise_iso(nus, L2.objects, trials, seed)
    # L^{n-1} X_n is the first term of the left dual
    last = iso_test(L1.objects[0], nus[-1], trials=trials, seed=seed)
    allv = verdicts + [last]
    return SerreReport(
        components=verdicts,
        last_component=last,
        passed=all(v == ISOMORPHIC for v in allv),
        undetermined=any(v == UNDETERMINED for v in allv),
    )


def presilting_shift(seq: Sequence[ProjComplex]) -> list[int]:
    objs = list(seq)
    a = 0
    for i in range(len(objs)):
        for j in range(i + 1, len(objs)):
            pos = [ell for ell in hom_dims(objs[i], objs[j]) if ell > 0]
            if pos:
                a = max(a, max(pos))
    shifts = [i * a for i in range(len(objs))]
    if not is_presilting([X.shift(s) for X, s in zip(objs, shifts)]):
        raise BraidInvariantError("computed shifts are not pre-silting")
    return shifts


def normalize_shift(X: ProjComplex) -> ProjComplex:
    X = minimalize(X)
    if X.is_zero():
        raise MutationError("cannot normalize the zero complex")
    return X.shift(X.dmin)


def canonical_key(seq: Sequence[ProjComplex]):
    comps = [normalize_shift(X) for X in seq]
    summands = tuple(c.summand_multiset() for c in comps)
    homs = tuple(tuple(sorted(hom_dims(a, b).items())) for a in comps for b in comps)
    return (summands, homs)


def k0_matrix(seq: Sequence[ProjComplex]) -> np.ndarray:
    return np.array([X.k0_class() for X in seq], dtype=np.int64)


def k0_unimodular(seq: Sequence[ProjComplex]) -> bool:
    M = k0_matrix(seq)
    if M.shape[0] != M.shape[1]:
        return False
    return abs(round(np.linalg.det(M.astype(float)))) == 1


@dataclass
class OrbitReport:
    closed: bool
    size: int
    elements: list = field(default_factory=list)
    quarantined: int = 0
    edges: int = 0
    seed: int = 0

    def to_dict(self, with_elements: bool = False):
        out = {"closed": self.closed, "size": self.size, "quarantined": self.quarantined,
               "edges": self.edges, "seed": self.seed}
        if with_elements:
            out["elements"] = [[X.to_json() for X in s] for s in self.elements]
        return out


def orbit_explore(seed_seq: ExceptionalSequence, max_nodes: int = 100, rng_seed: int = 0,
                  trials: int = 20) -> OrbitReport:
    """Breadth-first closure under sigma_i and its inverse, up to shifts."""
    n = len(seed_seq)
    start = tuple(normalize_shift(X) for X in seed_seq)
    nodes = [start]
    buckets = {canonical_key(start): [0]}
    queue = deque([0])
    quarantined = 0
    edges = 0
    while queue:
        idx = queue.popleft()
        cur = nodes[idx]
        for i in range(1, n):
            for s in (1, -1):
                nxt = tuple(normalize_shift(X) for X in apply_generator(cur, i, s, check=False))
                if not is_exceptional_sequence(nxt):
                    raise BraidInvariantError("mutation left the set of exceptional sequences")
                edges += 1
                key = canonical_key(nxt)
                bucket = buckets.setdefault(key, [])
                seen = False
                unsure = False
                for other in bucket:
                    verdict = summarize(componentwise_iso(nodes[other], nxt, trials, rng_seed))
                    if verdict == ISOMORPHIC:
                        seen = True
                        break
                    if verdict == UNDETERMINED:
                        unsure = True
                if seen:
                    continue
                if unsure:
                    quarantined += 1
                    continue
                if len(nodes) >= max_nodes:
                    return OrbitReport(False, len(nodes), list(nodes), quarantined, edges, rng_seed)
                bucket.append(len(nodes))
                nodes.append(nxt)
                queue.append(len(nodes) - 1)
    return OrbitReport(True, len(nodes), list(nodes), quarantined, edges, rng_seed)
