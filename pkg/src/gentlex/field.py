"""Dense linear algebra over a prime field F_p.

Matrices are numpy int64 arrays with entries in [0, p).  The prime must be
below 2**31 so that products of two reduced entries fit in int64.
"""

from __future__ import annotations

import numpy as np

DEFAULT_PRIME = 32003


def check_prime(p: int) -> int:
    if p < 2 or p >= 2**31:
        raise ValueError(f"field prime must lie in [2, 2**31), got {p}")
    if p > 2 and p % 2 == 0:
        raise ValueError(f"{p} is not prime")
    d = 3
    while d * d <= p:
        if p % d == 0:
            raise ValueError(f"{p} is not prime")
        d += 2
    return p


def inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod p")
    return pow(a, p - 2, p)


def as_matrix(M, p: int, shape=None) -> np.ndarray:
    A = np.asarray(M, dtype=np.int64)
    if shape is not None:
        A = A.reshape(shape)
    return A % p


def rref(M, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``M`` over F_p.

    Returns the reduced matrix and its pivot columns.  Pivots are chosen as
    the first nonzero entry in each column, scanning columns left to right,
    so the result is deterministic.
    """
    R = as_matrix(M, p).copy()
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    m, n = R.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row >= m:
            break
        nz = np.nonzero(R[row:, col])[0]
        if nz.size == 0:
            continue
        r = row + int(nz[0])
        if r != row:
            R[[row, r]] = R[[r, row]]
        R[row] = (R[row] * inv(int(R[row, col]), p)) % p
        factors = R[:, col].copy()
        factors[row] = 0
        if factors.any():
            R = (R - np.outer(factors, R[row])) % p
        pivots.append(col)
        row += 1
    return R, pivots


def rank(M, p: int) -> int:
    A = as_matrix(M, p)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(M, p: int) -> np.ndarray:
    """Basis of {x : M x = 0}, returned as the rows of a (k, n) matrix."""
    A = as_matrix(M, p)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref(A, p)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-R[r, f]) % p
    return basis


def solve(A, b, p: int) -> np.ndarray | None:
    """One solution x of A x = b over F_p, or None when inconsistent."""
    A = as_matrix(A, p)
    b = as_matrix(b, p).reshape(-1)
    m, n = A.shape
    if m == 0:
        return np.zeros(n, dtype=np.int64)
    aug = np.concatenate([A, b[:, None]], axis=1)
    R, pivots = rref(aug, p)
    if n in pivots:
        return None
    x = np.zeros(n, dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = R[r, n]
    return x


def extend_basis(sub: np.ndarray, candidates: np.ndarray, p: int) -> list[int]:
    """Indices of rows of ``candidates`` that extend the row space of ``sub``.

    Candidates are scanned in order, so the choice is deterministic.
    """
    n = candidates.shape[1] if candidates.ndim == 2 else 0
    sub = as_matrix(sub, p).reshape(-1, n) if n else sub
    chosen: list[int] = []
    if candidates.shape[0] == 0:
        return chosen
    if sub.shape[0]:
        basis, piv = rref(sub, p)
        basis = basis[: len(piv)]
    else:
        basis, piv = np.zeros((0, n), dtype=np.int64), []
    for k in range(candidates.shape[0]):
        v = candidates[k] % p
        # reduce v against the current echelon basis
        for r, pc in enumerate(piv):
            if v[pc]:
                v = (v - v[pc] * basis[r]) % p
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            continue
        chosen.append(k)
        pc = int(nz[0])
        v = (v * inv(int(v[pc]), p)) % p
        # keep the basis reduced in column pc
        if basis.shape[0]:
            f = basis[:, pc].copy()
            basis = (basis - np.outer(f, v)) % p
        basis = np.vstack([basis, v[None, :]])
        piv = list(piv) + [pc]
    return chosen
