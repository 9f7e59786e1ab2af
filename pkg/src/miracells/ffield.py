"""Dense linear algebra over a prime field F_p on numpy int64 arrays.

Entries are kept reduced into [0, p).  With p < 2**31 every product fits in
int64 before reduction, which is all Gaussian elimination needs.
"""
from __future__ import annotations

import numpy as np

DEFAULT_P = 10007


def as_mod(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = as_mod(a, p).copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        others = np.nonzero(m[:, c])[0]
        for k in others:
            if k != r:
                m[k] = (m[k] - m[k, c] * m[r]) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Rows form a basis of {x : a x = 0}."""
    a = np.asarray(a)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row, pc in enumerate(pivots):
            basis[k, pc] = (-r[row, f]) % p
    return basis


def span_basis(vectors, p: int, dim: int) -> np.ndarray:
    """Row basis of the span of the given vectors (possibly empty)."""
    if dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    vs = np.asarray(vectors, dtype=np.int64).reshape(-1, dim)
    if vs.shape[0] == 0:
        return vs
    return rref(vs, p)[0]


def matpow(u, k: int, p: int) -> np.ndarray:
    n = u.shape[0]
    out = np.eye(n, dtype=np.int64)
    for _ in range(k):
        out = out @ u % p
    return out


def random_vector(rng: np.random.Generator, n: int, p: int) -> np.ndarray:
    return rng.integers(0, p, size=n, dtype=np.int64)


def inverse(a, p: int) -> np.ndarray:
    """Inverse of a square matrix mod p; raises ValueError if singular."""
    a = as_mod(a, p)
    n = a.shape[0]
    r, pivots = rref(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular mod p")
    return r[:, n:]


def random_invertible(rng: np.random.Generator, n: int, p: int) -> np.ndarray:
    while True:
        g = rng.integers(0, p, size=(n, n), dtype=np.int64)
        if rank(g, p) == n:
            return g
