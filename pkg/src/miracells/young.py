"""Partitions, standard Young tableaux, Schensted insertion and classical RSK.

Partitions are plain tuples of positive integers in weakly decreasing order.
Reading past the end of a partition returns 0 (see `part`).  Tableaux are
tuples of row tuples.  The same shapes are used by every other module, so
nothing here is a class.

The two maps `upsilon` and `xi` translate between pairs of partitions
(lambda, mu) and interleaving pairs (nu, theta) where
nu_i >= theta_i >= nu_{i+1}.
"""
from __future__ import annotations

from bisect import bisect_right
from functools import cache
from math import factorial
from typing import Iterator, Sequence

Partition = tuple[int, ...]
Tableau = tuple[tuple[int, ...], ...]


def normalize(parts: Sequence[int]) -> Partition:
    """Drop zeros and check the weakly decreasing condition."""
    out = tuple(int(p) for p in parts if p != 0)
    if any(p < 0 for p in out):
        raise ValueError(f"negative part in {parts}")
    if any(out[i] < out[i + 1] for i in range(len(out) - 1)):
        raise ValueError(f"not weakly decreasing: {parts}")
    return out


def part(nu: Sequence[int], i: int) -> int:
    """1-based read with zero padding."""
    return nu[i - 1] if 1 <= i <= len(nu) else 0


def conjugate(nu: Sequence[int]) -> Partition:
    if not nu:
        return ()
    return tuple(sum(1 for p in nu if p >= j) for j in range(1, nu[0] + 1))


def partitions(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """All partitions of n in reverse lexicographic order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    """Dominance order a >= b (partial sums), sizes need not agree."""
    sa = sb = 0
    for i in range(max(len(a), len(b))):
        sa += part(a, i + 1)
        sb += part(b, i + 1)
        if sa < sb:
            return False
    return True


def interleaves(nu: Sequence[int], theta: Sequence[int]) -> bool:
    length = max(len(nu), len(theta)) + 1
    return all(part(nu, i) >= part(theta, i) >= part(nu, i + 1) for i in range(1, length + 1))


def upsilon(lam: Sequence[int], mu: Sequence[int]) -> tuple[Partition, Partition]:
    m = max(len(lam), len(mu))
    nu = tuple(part(lam, i) + part(mu, i) for i in range(1, m + 1))
    theta = tuple(part(lam, i + 1) + part(mu, i) for i in range(1, m + 1))
    return normalize(nu), normalize(theta)


def xi(nu: Sequence[int], theta: Sequence[int]) -> tuple[Partition, Partition]:
    """Inverse of `upsilon`; lambda_i = sum_{k>=i}(nu_k - theta_k), mu_i = sum_{k>=i}(theta_k - nu_{k+1})."""
    if not interleaves(nu, theta):
        raise ValueError(f"{tuple(theta)} does not interleave {tuple(nu)}")
    m = max(len(nu), len(theta))
    lam = [0] * (m + 1)
    mu = [0] * (m + 1)
    for i in range(m, 0, -1):
        lam[i - 1] = lam[i] + part(nu, i) - part(theta, i)
        mu[i - 1] = mu[i] + part(theta, i) - part(nu, i + 1)
    return normalize(lam[:m]), normalize(mu[:m])


def shape(tableau: Sequence[Sequence[int]]) -> Partition:
    return tuple(len(r) for r in tableau if r)


def row_insert(tableau: Sequence[Sequence[int]], x: int) -> tuple[Tableau, tuple[int, int]]:
    """Schensted row insertion.  Returns the new tableau and the 1-based (row, column) of the new cell."""
    rows = [list(r) for r in tableau]
    r = 0
    while True:
        if r == len(rows):
            rows.append([x])
            return tuple(map(tuple, rows)), (r + 1, 1)
        row = rows[r]
        if x in row:
            raise ValueError(f"{x} already in tableau")
        k = bisect_right(row, x)
        if k == len(row):
            row.append(x)
            return tuple(map(tuple, rows)), (r + 1, k + 1)
        row[k], x = x, row[k]
        r += 1


def add_cell(tableau: Sequence[Sequence[int]], cell: tuple[int, int], label: int) -> Tableau:
    rows = [list(r) for r in tableau]
    r, c = cell
    if r == len(rows) + 1:
        rows.append([])
    if len(rows[r - 1]) != c - 1:
        raise ValueError(f"cell {cell} is not an outer corner")
    rows[r - 1].append(label)
    return tuple(map(tuple, rows))


def classical_rsk(w: Sequence[int]) -> tuple[Tableau, Tableau]:
    """(P, Q) = (insertion, recording) tableaux of the word w."""
    p: Tableau = ()
    q: Tableau = ()
    for i, x in enumerate(w, start=1):
        p, cell = row_insert(p, x)
        q = add_cell(q, cell, i)
    return p, q


def remove_corner(tableau: Sequence[Sequence[int]], row: int) -> tuple[Tableau, int]:
    """Reverse bump starting from the last cell of `row` (1-based); returns the ejected first-row value."""
    rows = [list(r) for r in tableau]
    x = rows[row - 1].pop()
    for r in range(row - 2, -1, -1):
        cur = rows[r]
        k = bisect_right(cur, x) - 1
        cur[k], x = x, cur[k]
    return tuple(tuple(r) for r in rows if r), x


def inverse_classical_rsk(p: Tableau, q: Tableau) -> tuple[int, ...]:
    n = sum(map(len, q))
    pos = {v: i for i, row in enumerate(q) for v in row}
    word = [0] * n
    for k in range(n, 0, -1):
        p, word[k - 1] = remove_corner(p, pos[k] + 1)
    return tuple(word)


def is_standard(tableau: Sequence[Sequence[int]]) -> bool:
    rows = [tuple(r) for r in tableau]
    sh = [len(r) for r in rows]
    if any(s == 0 for s in sh) or any(sh[i] < sh[i + 1] for i in range(len(sh) - 1)):
        return False
    entries = sorted(x for r in rows for x in r)
    if entries != list(range(1, len(entries) + 1)):
        return False
    for r in rows:
        if any(r[j] >= r[j + 1] for j in range(len(r) - 1)):
            return False
    for i in range(len(rows) - 1):
        if any(rows[i][j] >= rows[i + 1][j] for j in range(len(rows[i + 1]))):
            return False
    return True


def enumerate_standard_tableaux(nu: Sequence[int]) -> list[Tableau]:
    """Standard fillings of `nu`, lexicographic in the sequence of rows chosen for 1, 2, ..., n."""
    nu = normalize(nu)
    n = sum(nu)
    out: list[Tableau] = []
    rows: list[list[int]] = [[] for _ in nu]

    def place(k: int) -> None:
        if k > n:
            out.append(tuple(tuple(r) for r in rows))
            return
        for r in range(len(nu)):
            if len(rows[r]) < nu[r] and (r == 0 or len(rows[r - 1]) > len(rows[r])):
                rows[r].append(k)
                place(k + 1)
                rows[r].pop()

    place(1)
    return out


@cache
def count_st(nu: Partition) -> int:
    """f_nu by the hook length formula."""
    nu = normalize(nu)
    conj = conjugate(nu)
    hooks = 1
    for i, p in enumerate(nu):
        for j in range(p):
            hooks *= (p - j - 1) + (conj[j] - i - 1) + 1
    return factorial(sum(nu)) // hooks


def row_of(tableau: Sequence[Sequence[int]], x: int) -> int:
    for i, r in enumerate(tableau, start=1):
        if x in r:
            return i
    raise KeyError(x)


def col_of(tableau: Sequence[Sequence[int]], x: int) -> int:
    for r in tableau:
        if x in r:
            return list(r).index(x) + 1
    raise KeyError(x)


def transpose(tableau: Sequence[Sequence[int]]) -> Tableau:
    if not tableau:
        return ()
    return tuple(tuple(r[j] for r in tableau if j < len(r)) for j in range(len(tableau[0])))


def interleaving_between(nu: Partition, nu_prime: Partition) -> Iterator[Partition]:
    """All theta interleaving both nu and nu_prime."""
    m = max(len(nu), len(nu_prime))
    bounds = [
        (max(part(nu, i + 1), part(nu_prime, i + 1)), min(part(nu, i), part(nu_prime, i)))
        for i in range(1, m + 1)
    ]

    def build(i: int, prev: int) -> Iterator[tuple[int, ...]]:
        if i == m:
            yield ()
            return
        lo, hi = bounds[i]
        for t in range(min(hi, prev), lo - 1, -1):
            for rest in build(i + 1, t):
                yield (t,) + rest

    if any(lo > hi for lo, hi in bounds):
        return
    for theta in build(0, max(hi for _, hi in bounds) if bounds else 0):
        yield normalize(theta)


def enumerate_cell_triples(n: int) -> list[tuple[Partition, Partition, Partition]]:
    out = []
    for nu in partitions(n):
        for nup in partitions(n):
            for theta in interleaving_between(nu, nup):
                out.append((nu, theta, nup))
    return out


def n_stat(nu: Sequence[int]) -> int:
    return sum(i * p for i, p in enumerate(nu))


def a_function(nu: Sequence[int], n: int) -> int:
    if sum(nu) != n:
        raise ValueError(f"|{tuple(nu)}| != {n}")
    return n * (n - 1) // 2 - n_stat(nu)


def evacuation(tableau: Sequence[Sequence[int]]) -> Tableau:
    """Schutzenberger evacuation by repeated jeu de taquin slides of the smallest entry."""
    cur = [list(r) for r in tableau]
    n = sum(map(len, cur))
    out = [[0] * len(r) for r in cur]
    for label in range(n, 0, -1):
        r = c = 0
        while True:
            right = cur[r][c + 1] if c + 1 < len(cur[r]) else None
            below = cur[r + 1][c] if r + 1 < len(cur) and c < len(cur[r + 1]) else None
            if right is None and below is None:
                break
            if below is None or (right is not None and right < below):
                cur[r][c] = right
                c += 1
            else:
                cur[r][c] = below
                r += 1
        cur[r].pop()
        if not cur[r]:
            cur.pop()
        out[r][c] = label
    return tuple(tuple(r) for r in out)
