"""Finite-field oracles for the combinatorics of Fl x Fl x V.

Everything here is exact arithmetic over F_p (numpy int64, see `ffield`).
The standard point of a colored permutation (w, beta) is

    F1_i = <e_1, ..., e_i>,   F2_j = <e_k : w(k) <= j>,   v = sum_{i in beta} e_i,

so the algebra preserving both flags is spanned by E_{i,i'} with i <= i' and
w(i) <= w(i').  Orbit dimensions, conormal samples and the F_q convolution
counts below are all computed from the subspaces themselves rather than from
that description, so they serve as independent checks of `rbperm`.
"""
from __future__ import annotations

import itertools
from collections import Counter
from functools import cache
from typing import Sequence

import numpy as np

from . import ffield
from .ffield import DEFAULT_P, nullspace, rank
from .rbperm import ColoredPermutation, enumerate_rb, is_valid, perm_inverse, sigma_of
from .young import Partition, conjugate, dominates, normalize, partitions, upsilon


# ---------------------------------------------------------------- nilpotent types

def _type_from_ranks(ranks: Sequence[int]) -> Partition:
    """ranks[j] = rank of u^j; returns the partition with #parts >= j = ranks[j-1] - ranks[j]."""
    counts = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))]
    return conjugate(normalize([c for c in counts if c]))


def _power_ranks(u: np.ndarray, p: int, image_of, base_dim: int) -> list[int]:
    n = u.shape[0]
    ranks = [base_dim]
    power = np.eye(n, dtype=np.int64)
    for _ in range(n):
        power = u @ power % p
        ranks.append(image_of(power))
    if ranks[-1] != 0:
        raise ValueError("matrix is not nilpotent on the given space")
    return ranks


def jordan_type(u, p: int = DEFAULT_P) -> Partition:
    u = ffield.as_mod(u, p)
    return _type_from_ranks(_power_ranks(u, p, lambda m: rank(m, p), u.shape[0]))


def krylov_basis(u, v, p: int = DEFAULT_P) -> np.ndarray:
    """Row basis of span{v, uv, u^2 v, ...}."""
    u = ffield.as_mod(u, p)
    n = u.shape[0]
    vecs = []
    x = ffield.as_mod(v, p)
    for _ in range(n):
        vecs.append(x)
        x = u @ x % p
    return ffield.span_basis(vecs, p, n)


def restricted_type(u, subspace_rows, p: int = DEFAULT_P) -> Partition:
    """Type of u on an invariant subspace given by row basis."""
    u = ffield.as_mod(u, p)
    s = np.asarray(subspace_rows, dtype=np.int64).reshape(-1, u.shape[0])
    dim = rank(s, p) if s.shape[0] else 0
    if dim == 0:
        return ()
    return _type_from_ranks(_power_ranks(u, p, lambda m: rank(m @ s.T % p, p), dim))


def induced_quotient_type(u, subspace_rows, p: int = DEFAULT_P) -> Partition:
    """Type of the map induced by u on V / S for an invariant subspace S."""
    u = ffield.as_mod(u, p)
    n = u.shape[0]
    s = np.asarray(subspace_rows, dtype=np.int64).reshape(-1, n)
    dim_s = rank(s, p) if s.shape[0] else 0

    def image(m):
        return rank(np.vstack([m.T, s]), p) - dim_s

    return _type_from_ranks(_power_ranks(u, p, image, n - dim_s))


def quotient_type(u, v, p: int = DEFAULT_P) -> Partition:
    return induced_quotient_type(u, krylov_basis(u, v, p), p)


def centralizer_basis(u, p: int = DEFAULT_P) -> list[np.ndarray]:
    u = ffield.as_mod(u, p)
    n = u.shape[0]
    eye = np.eye(n, dtype=np.int64)
    # row-major vec: vec(u z) = (u kron I) vec z, vec(z u) = (I kron u^T) vec z
    system = (np.kron(u, eye) - np.kron(eye, u.T)) % p
    return [z.reshape(n, n) for z in nullspace(system, p)]


def classify_nv(u, v, p: int = DEFAULT_P) -> tuple[Partition, Partition]:
    """(lambda, mu): types of u on Z(u)v and on V / Z(u)v."""
    u = ffield.as_mod(u, p)
    v = ffield.as_mod(v, p)
    n = u.shape[0]
    if n == 0:
        return (), ()
    jordan_type(u, p)
    orbit_span = ffield.span_basis([z @ v % p for z in centralizer_basis(u, p)], p, n)
    return restricted_type(u, orbit_span, p), induced_quotient_type(u, orbit_span, p)


def construct_nv(lam: Sequence[int], mu: Sequence[int], p: int = DEFAULT_P) -> tuple[np.ndarray, np.ndarray]:
    """Jordan basis e_{i,j} of type lam+mu with u e_{i,j} = e_{i,j-1} and v = sum_i e_{i,lam_i}."""
    nu, _ = upsilon(lam, mu)
    lam = list(lam) + [0] * (len(nu) - len(lam))
    n = sum(nu)
    u = np.zeros((n, n), dtype=np.int64)
    v = np.zeros(n, dtype=np.int64)
    start = 0
    for i, size in enumerate(nu):
        for j in range(1, size):
            u[start + j - 1, start + j] = 1
        if lam[i] > 0:
            v[start + lam[i] - 1] = 1
        start += size
    return u, v


# ---------------------------------------------------------------- standard point and orbits

def random_nilpotent_pair(n: int, p: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """A conjugate of a random Jordan form, and a vector with random zero pattern
    in the Jordan basis (so non-cyclic v show up often)."""
    shapes = list(partitions(n))
    nu = shapes[rng.integers(len(shapes))]
    j = np.zeros((n, n), dtype=np.int64)
    start = 0
    for size in nu:
        for k in range(1, size):
            j[start + k - 1, start + k] = 1
        start += size
    g = ffield.random_invertible(rng, n, p)
    u = g @ j % p @ ffield.inverse(g, p) % p
    coords = ffield.random_vector(rng, n, p) * rng.integers(0, 2, size=n)
    return u, g @ coords % p


def upsilon_consistent(u, v, p: int = DEFAULT_P) -> bool:
    """upsilon(classify_nv(u, v)) is (type of u, type of u on V / k[u]v)."""
    lam, mu = classify_nv(u, v, p)
    nu, theta = upsilon(lam, mu)
    return nu == jordan_type(u, p) and theta == quotient_type(u, v, p)


def standard_point(tw: ColoredPermutation, p: int = DEFAULT_P) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Ordered bases of F1 and F2 (rows) and the vector v."""
    w, beta = tw
    n = len(w)
    eye = np.eye(n, dtype=np.int64)
    winv = perm_inverse(w)
    f2 = np.array([eye[winv[j] - 1] for j in range(n)], dtype=np.int64).reshape(n, n)
    v = np.zeros(n, dtype=np.int64)
    for i in beta:
        v[i - 1] = 1
    return eye.copy(), f2, v % p


def _preserve_rows(flag_rows: np.ndarray, p: int, strict: bool) -> list[np.ndarray]:
    """Linear conditions on vec(a) (row-major) for a F_k in F_k (or F_{k-1} if strict)."""
    n = flag_rows.shape[0]
    rows = []
    for k in range(n):
        target = flag_rows[:k] if strict else flag_rows[:k + 1]
        ann = nullspace(target, p) if target.shape[0] else np.eye(n, dtype=np.int64)
        for y in ann:
            rows.append(np.kron(y, flag_rows[k]) % p)
    return rows


def orbit_dim(tw: ColoredPermutation, p: int = DEFAULT_P) -> int:
    """N^2 minus the dimension of {a : a preserves F1 and F2, a v = 0}."""
    f1, f2, v = standard_point(tw, p)
    n = len(tw.w)
    rows = _preserve_rows(f1, p, False) + _preserve_rows(f2, p, False)
    eye = np.eye(n, dtype=np.int64)
    rows += [np.kron(eye[r], v) for r in range(n)]
    # N^2 - nullity = rank of the stacked conditions
    return rank(np.array(rows), p)


@cache
def _conormal_kernel(tw: ColoredPermutation, p: int) -> np.ndarray:
    """Basis of {(u1, u2, v*) : u_k strictly preserve F_k, u1 + u2 + v (x) v* = 0}."""
    f1, f2, v = standard_point(tw, p)
    n = len(tw.w)
    nn = n * n
    total = 2 * nn + n
    rows = []
    for r in _preserve_rows(f1, p, True):
        rows.append(np.concatenate([r, np.zeros(nn + n, dtype=np.int64)]))
    for r in _preserve_rows(f2, p, True):
        rows.append(np.concatenate([np.zeros(nn, dtype=np.int64), r, np.zeros(n, dtype=np.int64)]))
    for i in range(n):
        for j in range(n):
            row = np.zeros(total, dtype=np.int64)
            row[i * n + j] = 1
            row[nn + i * n + j] = 1
            row[2 * nn + j] = v[i]
            rows.append(row % p)
    return nullspace(np.array(rows), p)


def conormal_dimension(tw: ColoredPermutation, p: int = DEFAULT_P) -> int:
    return _conormal_kernel(tw, p).shape[0]


def sample_conormal(tw: ColoredPermutation, p: int = DEFAULT_P, seed: int | np.random.Generator = 0) -> dict:
    """Uniform random point of the conormal fibre at the standard point."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    kernel = _conormal_kernel(tw, p)
    n = len(tw.w)
    nn = n * n
    if kernel.shape[0]:
        coeffs = rng.integers(0, p, size=kernel.shape[0], dtype=np.int64)
        x = coeffs @ kernel % p
    else:
        x = np.zeros(2 * nn + n, dtype=np.int64)
    u1 = x[:nn].reshape(n, n)
    u2 = x[nn:2 * nn].reshape(n, n)
    vstar = x[2 * nn:]
    _, _, v = standard_point(tw, p)
    assert not ((u1 + u2 + np.outer(v, vstar)) % p).any()
    check_conormal_table(tw, u1, u2, vstar, p)
    return {"tw": tw, "u1": u1, "u2": u2, "v": v, "v_star": vstar, "p": p}


def check_conormal_table(tw: ColoredPermutation, u1, u2, vstar, p: int = DEFAULT_P) -> None:
    """Assert the six linear constraint families of the conormal fibre at the standard point."""
    w, beta = tw
    n = len(w)
    for i in beta:
        assert vstar[i - 1] % p == 0, ("c_i != 0 on beta", tw)
    for i, j in itertools.product(range(1, n + 1), repeat=2):
        a, b, c = int(u1[i - 1, j - 1]), int(u2[i - 1, j - 1]), int(-vstar[j - 1])
        ib, jb = i in beta, j in beta
        if ib == jb:
            ok = (a + b) % p == 0
        elif not ib and jb:
            ok = a % p == 0 and b % p == 0
        elif w[i - 1] > w[j - 1]:
            ok = (a - c) % p == 0 and b % p == 0
        elif i > j:
            ok = a % p == 0 and (b - c) % p == 0
        else:
            ok = (a + b - c) % p == 0
        assert ok, ("conormal constraint violated", tw, i, j)


# ---------------------------------------------------------------- generic types on conormal fibres

def sample_triple(sample: dict) -> tuple[Partition, Partition, Partition]:
    """(type u1, type of u1 on V/k[u1]v, type u2) for one conormal sample.

    Also asserts that k[u1]v = k[u2]v and that u1, u2 induce maps of the same
    type on the quotient by it.
    """
    u1, u2, v, p = sample["u1"], sample["u2"], sample["v"], sample["p"]
    k1 = krylov_basis(u1, v, p)
    k2 = krylov_basis(u2, v, p)
    both = rank(np.vstack([k1, k2]), p) if k1.shape[0] + k2.shape[0] else 0
    assert both == k1.shape[0] == k2.shape[0], "k[u1]v != k[u2]v"
    theta = induced_quotient_type(u1, k1, p)
    assert theta == induced_quotient_type(u2, k1, p), "quotient types of u1, u2 differ"
    return jordan_type(u1, p), theta, jordan_type(u2, p)


def _pair_dominates(a, b) -> bool:
    return dominates(a[0], b[0]) and dominates(a[2], b[2])


def generic_maximum(triples) -> tuple[Partition, Partition, Partition]:
    """The observed type whose (nu, nu') dominates all others; incomparable maxima are fatal.

    Degenerate samples lie in the closure of the generic orbit, so their
    Jordan types are dominated.  theta can change size under degeneration and
    is not compared; it must be unique among the samples at the top.
    """
    distinct = set(triples)
    tops = {(t[0], t[2]) for t in distinct if not any(_pair_dominates(s, t) and (s[0], s[2]) != (t[0], t[2]) for s in distinct)}
    if len(tops) != 1:
        raise AssertionError(f"incomparable maximal types {sorted(tops)}")
    nu, nup = tops.pop()
    at_top = [t for t in distinct if (t[0], t[2]) == (nu, nup)]
    if len(at_top) != 1:
        raise AssertionError(f"several theta at the maximal type {at_top}")
    top = at_top[0]
    assert all(_pair_dominates(top, t) for t in distinct), f"no dominating type among {distinct}"
    return top


def empirical_triple(tw: ColoredPermutation, p: int = DEFAULT_P, trials: int = 20, seed: int = 0):
    rng = np.random.default_rng(seed)
    return generic_maximum(sample_triple(sample_conormal(tw, p, rng)) for _ in range(trials))


def conormal_parameter_rank(tw: ColoredPermutation, p: int = DEFAULT_P) -> int:
    """Dimension of the conormal fibre at the standard point, i.e. N^2 - orbit_dim."""
    return conormal_dimension(tw, p)


def image_dimension(tw: ColoredPermutation, p: int = DEFAULT_P, seed: int = 0, trials: int = 3) -> int:
    """Dimension of the image of the conormal variety in (u1, u2, v, v*)-space.

    The image is G times the conormal fibre L at the standard point, so its
    tangent space at a point x of L is g.x + L; the rank is taken at a few
    random points and maximized.
    """
    n = len(tw.w)
    nn = n * n
    kernel = _conormal_kernel(tw, p)
    fibre = [np.concatenate([k[:2 * nn], np.zeros(n, dtype=np.int64), k[2 * nn:]]) for k in kernel]
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(trials):
        s = sample_conormal(tw, p, rng)
        u1, u2, v, vstar = s["u1"], s["u2"], s["v"], s["v_star"]
        rows = list(fibre)
        for a in range(n):
            for b in range(n):
                x = np.zeros((n, n), dtype=np.int64)
                x[a, b] = 1
                rows.append(np.concatenate([
                    (x @ u1 - u1 @ x).ravel(), (x @ u2 - u2 @ x).ravel(), x @ v, -(vstar @ x),
                ]) % p)
        best = max(best, rank(np.array(rows), p))
    return best


# ---------------------------------------------------------------- contracting cocharacter

def cocharacter(tw: ColoredPermutation) -> tuple[int, ...]:
    """Weights k_i from peeling sigma-layers off beta and left-to-right-minima layers off its complement."""
    w, beta = tw
    n = len(w)
    k = [None] * n
    b = set(beta)
    g = set(range(1, n + 1)) - b
    r = 1
    while b or g:
        sig = {i for i in b if not any(j > i and w[j - 1] > w[i - 1] for j in b)}
        dl = {i for i in g if not any(j < i and w[j - 1] < w[i - 1] for j in g)}
        for i in sig:
            k[i - 1] = 1 - r
        for i in dl:
            k[i - 1] = r
        b -= sig
        g -= dl
        r += 1
    out = tuple(k)
    assert all(out[i - 1] == 0 for i in sigma_of(tw))
    return out


def fixed_point_vector(tw: ColoredPermutation, p: int = DEFAULT_P) -> np.ndarray:
    """v = sum over sigma(tw) of e_i; lies in the same orbit as the standard v and is fixed by the cocharacter."""
    v = np.zeros(len(tw.w), dtype=np.int64)
    for i in sigma_of(tw):
        v[i - 1] = 1
    return v


def normal_weights(tw: ColoredPermutation, p: int = DEFAULT_P) -> list[int]:
    """Cocharacter weights on the normal space to the B-orbit inside {F1} x Fl x V.

    B is the upper triangular Borel fixing the coordinate flag F1; the base
    point uses v = sum_{sigma} e_i so that it is fixed.  Normal weights are
    weights(gl/b2) + weights(V) - weights(b1) + weights(stabilizer in b1).
    Reported only; not asserted.
    """
    w, _ = tw
    n = len(w)
    k = cocharacter(tw)
    v = fixed_point_vector(tw, p)
    tangent = Counter(k[i] - k[j] for i in range(n) for j in range(n) if w[i] > w[j])
    tangent.update(k)
    borel = [(i, j) for i in range(n) for j in range(n) if i <= j]
    image = Counter(k[i] - k[j] for i, j in borel)
    for c in set(image):
        cells = [(i, j) for i, j in borel if k[i] - k[j] == c and w[i] <= w[j]]
        if cells:
            m = np.zeros((n, len(cells)), dtype=np.int64)
            for col, (i, j) in enumerate(cells):
                m[i, col] = v[j]
            image[c] -= len(cells) - rank(m, p)
    normal = tangent.copy()
    normal.subtract(image)
    assert all(x >= 0 for x in normal.values()), "orbit tangent weights exceed ambient weights"
    return sorted(normal.elements())


# ---------------------------------------------------------------- F_q convolution by enumeration

def _span(vectors, q: int, n: int) -> frozenset:
    pts = {tuple([0] * n)}
    for x in vectors:
        pts |= {tuple((a + c * b) % q for a, b in zip(y, x)) for y in pts for c in range(1, q)}
    return frozenset(pts)


def _dim(space: frozenset, q: int) -> int:
    d, size = 0, len(space)
    while size > 1:
        size //= q
        d += 1
    return d


@cache
def all_flags(n: int, q: int) -> tuple[tuple[frozenset, ...], ...]:
    """Complete flags of F_q^n as tuples (F_0, ..., F_n) of point sets."""
    vectors = list(itertools.product(range(q), repeat=n))
    zero = frozenset([tuple([0] * n)])
    flags = [(zero,)]
    for _ in range(n):
        nxt = set()
        for fl in flags:
            top = fl[-1]
            for x in vectors:
                if x not in top:
                    nxt.add(fl + (_span(list(top) + [x], q, n),))
        flags = sorted(nxt, key=lambda f: tuple(sorted(map(sorted, f))))
    return tuple(flags)


def orbit_label(f1, f2, v, q: int) -> ColoredPermutation:
    """The colored permutation of (F1, F2, v) from rank data and the submodule generated by v."""
    n = len(f1) - 1
    d = [[_dim(f1[i] & f2[j], q) for j in range(n + 1)] for i in range(n + 1)]
    w = [0] * n
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if d[i][j] - d[i - 1][j] - d[i][j - 1] + d[i - 1][j - 1] == 1:
                w[i - 1] = j
    w = tuple(w)
    # the invariant subspace generated by e_i is F1_i n F2_{w(i)}
    cells = {i: f1[i] & f2[w[i - 1]] for i in range(1, n + 1)}
    beta = set(range(1, n + 1))
    for k in range(n + 1):
        for b in itertools.combinations(range(1, n + 1), k):
            if is_valid(w, b) and v in _span([x for i in b for x in cells[i]], q, n):
                beta &= set(b)
    return ColoredPermutation(w, frozenset(beta))


def standard_point_fq(tw: ColoredPermutation, q: int):
    w, beta = tw
    n = len(w)
    eye = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    winv = perm_inverse(w)
    f1 = tuple(_span(eye[:i], q, n) for i in range(n + 1))
    f2 = tuple(_span([eye[winv[j] - 1] for j in range(i)], q, n) for i in range(n + 1))
    v = tuple(int(i + 1 in beta) for i in range(n))
    return f1, f2, v


def _adjacent(fa, fb, i: int) -> bool:
    """Relative position s_i: equal except in dimension i, where they differ."""
    return fa[i] != fb[i] and all(fa[j] == fb[j] for j in range(len(fa)) if j != i)


def fq_convolution(n: int, q: int, tw: ColoredPermutation, i: int, side: str) -> dict[ColoredPermutation, int]:
    """Expansion of T_tw * T_{s_i} (side="right") or T_{s_i} * T_tw (side="left") over F_q.

    The right action moves the first flag, the left action the second; with
    the coordinates of `standard_point` this matches the labelling in which
    tw s_i = (w s_i, s_i(beta)).  Coefficients are obtained by evaluating the
    convolution sum at the standard point of every orbit.
    """
    if n > 3 or q not in (2, 3):
        raise ValueError("brute force is limited to n <= 3 and q in {2, 3}")
    if side not in ("left", "right"):
        raise ValueError(side)
    flags = all_flags(n, q)
    out = {}
    for target in enumerate_rb(n):
        f1, f2, v = standard_point_fq(target, q)
        if side == "right":
            total = sum(1 for f in flags if _adjacent(f, f1, i) and orbit_label(f, f2, v, q) == tw)
        else:
            total = sum(1 for f in flags if _adjacent(f, f2, i) and orbit_label(f1, f, v, q) == tw)
        if total:
            out[target] = total
    return out


def fq_is_invariant(n: int, q: int, tw: ColoredPermutation, i: int, side: str) -> bool:
    """Evaluate the convolution at every point of X and check it is constant on orbits."""
    flags = all_flags(n, q)
    vectors = list(itertools.product(range(q), repeat=n))
    expected = fq_convolution(n, q, tw, i, side)
    for f1 in flags:
        for f2 in flags:
            for v in vectors:
                if side == "right":
                    val = sum(1 for f in flags if _adjacent(f, f1, i) and orbit_label(f, f2, v, q) == tw)
                else:
                    val = sum(1 for f in flags if _adjacent(f, f2, i) and orbit_label(f1, f, v, q) == tw)
                if val != expected.get(orbit_label(f1, f2, v, q), 0):
                    return False
    return True
