import math
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from miracells import young
from miracells.young import (
    classical_rsk, conjugate, count_st, enumerate_cell_triples, enumerate_standard_tableaux,
    interleaves, inverse_classical_rsk, n_stat, a_function, partitions, row_insert, upsilon, xi,
)

partition_st = st.lists(st.integers(0, 6), max_size=6).map(lambda xs: young.normalize(sorted(xs, reverse=True)))


@pytest.mark.parametrize("nu, theta, expected", [
    ((3, 2), (2, 1), True),
    ((2,), (), True),
    ((3,), (1, 1), False),
])
def test_interleaves(nu, theta, expected):
    assert interleaves(nu, theta) is expected


@pytest.mark.parametrize("lam, mu, expected", [
    ((2, 1), (1, 1), ((3, 2), (2, 1))),
    ((), (), ((), ())),
    ((2,), (), ((2,), ())),
])
def test_upsilon(lam, mu, expected):
    assert upsilon(lam, mu) == expected


@pytest.mark.parametrize("nu, theta, expected", [
    ((3, 2), (2, 1), ((2, 1), (1, 1))),
    ((2,), (), ((2,), ())),
    ((1, 1), (1, 1), ((), (1, 1))),
])
def test_xi(nu, theta, expected):
    assert xi(nu, theta) == expected


def test_xi_rejects_non_interleaving():
    with pytest.raises(ValueError):
        xi((3,), (1, 1))


def test_upsilon_xi_inverse_exhaustive():
    for total in range(9):
        for a in range(total + 1):
            for lam in partitions(a):
                for mu in partitions(total - a):
                    nu, theta = upsilon(lam, mu)
                    assert interleaves(nu, theta)
                    assert xi(nu, theta) == (lam, mu)
    for m in range(9):
        for nu in partitions(m):
            for size in range(m + 1):
                for theta in partitions(size):
                    if interleaves(nu, theta):
                        assert upsilon(*xi(nu, theta)) == (nu, theta)


@given(partition_st, partition_st)
def test_conjugate_reverses_interleaving(nu, theta):
    assert conjugate(conjugate(nu)) == nu
    cn, ct = conjugate(nu), conjugate(theta)
    width = max(len(cn), len(ct))
    dual = all(young.part(cn, j) - 1 <= young.part(ct, j) <= young.part(cn, j) for j in range(1, width + 1))
    assert dual == interleaves(nu, theta)


@pytest.mark.parametrize("tableau, x, rows, cell", [
    (((1, 3, 6), (2, 5, 9), (7,)), 4, ((1, 3, 4), (2, 5, 6), (7, 9)), (3, 2)),
    ((), 3, ((3,),), (1, 1)),
    (((2,), (3,)), 1, ((1,), (2,), (3,)), (3, 1)),
])
def test_row_insert(tableau, x, rows, cell):
    assert row_insert(tableau, x) == (rows, cell)


@pytest.mark.parametrize("w, p, q", [
    ((1, 2, 3), ((1, 2, 3),), ((1, 2, 3),)),
    ((2, 1), ((1,), (2,)), ((1,), (2,))),
    ((2, 1, 3), ((1, 3), (2,)), ((1, 3), (2,))),
])
def test_classical_rsk_examples(w, p, q):
    assert classical_rsk(w) == (p, q)


@pytest.mark.parametrize("n", range(1, 8))
def test_classical_rsk_bijective(n):
    seen = set()
    for w in permutations(range(1, n + 1)):
        p, q = classical_rsk(w)
        assert young.shape(p) == young.shape(q)
        assert young.is_standard(p) and young.is_standard(q)
        assert inverse_classical_rsk(p, q) == w
        seen.add((p, q))
    assert len(seen) == math.factorial(n)
    assert sum(count_st(nu) ** 2 for nu in partitions(n)) == math.factorial(n)


@pytest.mark.parametrize("nu, count", [((2, 1), 2), ((3, 2), 5), ((6,), 1)])
def test_count_st_examples(nu, count):
    assert count_st(nu) == count
    assert len(enumerate_standard_tableaux(nu)) == count


def test_count_st_matches_enumeration():
    for m in range(9):
        for nu in partitions(m):
            tabs = enumerate_standard_tableaux(nu)
            assert len(tabs) == count_st(nu) == len(set(tabs))
            assert all(young.is_standard(t) and young.shape(t) == nu for t in tabs)
            row_words = [tuple(young.row_of(t, k) for k in range(1, m + 1)) for t in tabs]
            assert row_words == sorted(row_words)


@pytest.mark.parametrize("n, count", [(0, 1), (2, 7), (3, 16)])
def test_cell_triples(n, count):
    triples = enumerate_cell_triples(n)
    assert len(triples) == len(set(triples)) == count
    for nu, theta, nup in triples:
        assert sum(nu) == sum(nup) == n
        assert interleaves(nu, theta) and interleaves(nup, theta)


def test_n_stat_and_a_function():
    assert n_stat((5, 3, 2)) == 7
    assert a_function((5, 3, 2), 10) == 38
    assert a_function((1, 1, 1), 3) == 0
    for n in range(1, 7):
        assert a_function((n,), n) == n * (n - 1) // 2


def test_evacuation_is_involution():
    for m in range(7):
        for nu in partitions(m):
            for t in enumerate_standard_tableaux(nu):
                e = young.evacuation(t)
                assert young.shape(e) == nu and young.is_standard(e)
                assert young.evacuation(e) == t
