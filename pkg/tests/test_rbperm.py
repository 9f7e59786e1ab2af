from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from miracells import mrsk, rbperm, young
from miracells.rbperm import (
    beta_of, enumerate_rb, enumerate_rb_brute, fourier, inverse, is_valid, k_move, length, make, phi,
    sigma_of, star,
)


def tw_strategy(max_n=6):
    return st.integers(1, max_n).flatmap(lambda n: st.sampled_from(enumerate_rb(n)))


@pytest.mark.parametrize("w, beta, expected", [
    ((1, 2), {2}, False),
    ((2, 1), {2}, True),
    ((3, 1, 2), set(), True),
])
def test_is_valid(w, beta, expected):
    assert is_valid(w, beta) is expected


def test_sigma_and_beta_examples():
    assert sigma_of(make((1, 2), (1, 2))) == {2}
    assert sigma_of(make((2, 1), (1, 2))) == {1, 2}
    assert sigma_of(make((3, 1, 2))) == set()
    assert beta_of((1, 2), {2}) == {1, 2}
    assert beta_of((1, 2), {1}) == {1}
    assert beta_of((2, 3, 1), set()) == set()


def test_beta_of_rejects_non_decreasing():
    with pytest.raises(ValueError):
        beta_of((1, 2), {1, 2})


@pytest.mark.parametrize("n", range(7))
def test_sigma_beta_round_trip(n):
    for tw in enumerate_rb(n):
        sigma = sigma_of(tw)
        vals = [tw.w[i - 1] for i in sorted(sigma)]
        assert vals == sorted(vals, reverse=True)
        assert beta_of(tw.w, sigma) == tw.beta


def _decreasing_subsequences(w):
    count = 0
    n = len(w)
    for mask in range(1 << n):
        vals = [w[i] for i in range(n) if mask >> i & 1]
        count += vals == sorted(vals, reverse=True)
    return count


@pytest.mark.parametrize("n, size", [(0, 1), (1, 2), (2, 7), (3, 34)])
def test_enumerate_rb_sizes(n, size):
    assert len(enumerate_rb(n)) == size


@pytest.mark.parametrize("n", range(1, 6))
def test_enumerate_rb_matches_brute_force(n):
    rb = enumerate_rb(n)
    assert list(rb) == sorted(enumerate_rb_brute(n), key=rbperm.sort_key)
    assert len(rb) == sum(_decreasing_subsequences(w) for w in permutations(range(1, n + 1)))


@pytest.mark.parametrize("n", range(1, 7))
def test_rank_identity_as_cardinality(n):
    total = sum(young.count_st(nu) * young.count_st(nup) for nu, _, nup in young.enumerate_cell_triples(n))
    assert total == len(enumerate_rb(n))


def test_inverse_examples():
    assert inverse(make((2, 1), (1,))) == make((2, 1), (2,))
    assert inverse(make((1, 2, 3), (1, 3))) == make((1, 2, 3), (1, 3))


def test_length_examples():
    for n in range(5):
        for k in range(n + 1):
            assert length(rbperm.tw_k(n, k)) == k
    assert length(make((2, 1), (1, 2))) == 3
    for w in permutations(range(1, 5)):
        assert length(make(w)) == rbperm.coxeter_length(w)


@given(tw_strategy())
def test_inverse_and_fourier_involutions(tw):
    assert is_valid(*inverse(tw)) and inverse(inverse(tw)) == tw
    assert is_valid(*fourier(tw)) and fourier(fourier(tw)) == tw
    assert length(inverse(tw)) == length(tw)


@pytest.mark.parametrize("n", range(1, 6))
def test_length_inverse_exhaustive(n):
    assert all(length(inverse(tw)) == length(tw) for tw in enumerate_rb(n))


def test_phi_examples():
    assert phi(make((2, 1), (1, 2)), 1)
    assert not phi(make((2, 1), (1,)), 1)
    assert not phi(make((1, 2), (1,)), 1)
    assert not phi(make((1, 2)), 1)


def test_k_move_examples():
    assert k_move(make((3, 2, 1), (1,)), 1) == make((3, 2, 1), (1, 2))
    assert k_move(make((1, 3, 2)), 1) == make((3, 1, 2))
    assert k_move(make((1, 2, 3)), 1) is None


@pytest.mark.parametrize("n", range(3, 6))
def test_k_move_involution_exchanges_phi(n):
    for tw in enumerate_rb(n):
        for i in range(1, n - 1):
            y = k_move(tw, i)
            if y is None:
                continue
            assert is_valid(*y) and k_move(y, i) == tw
            assert all(a == b for j, (a, b) in enumerate(zip(tw.w, y.w), 1) if j not in (i, i + 1, i + 2))
            assert (tw.beta ^ y.beta) <= {i, i + 1, i + 2}
            if phi(tw, i) and not phi(tw, i + 1):
                assert phi(y, i + 1) and not phi(y, i)
            if phi(tw, i + 1) and not phi(tw, i):
                assert phi(y, i) and not phi(y, i + 1)


def test_k_move_rejects_bad_index():
    with pytest.raises(IndexError):
        k_move(make((1, 2, 3)), 2)


def test_fourier_examples():
    assert fourier(make((2, 1, 3), (2,))) == make((1, 3, 2), (1, 3))
    assert fourier(make((2, 1))) == make((2, 1), (1, 2))


def test_star_examples():
    assert star(make((1, 2), (1,)), 1) == make((2, 1), (2,))
    assert star(make((2, 1), (1,)), 1) == make((2, 1), (1, 2))
    assert star(make((2, 1), (1, 2)), 1) == make((2, 1), (1, 2))


@pytest.mark.parametrize("n", range(2, 6))
def test_star_raises_length_off_phi(n):
    for tw in enumerate_rb(n):
        for i in range(1, n):
            for side in ("right", "left"):
                y = star(tw, i, side)
                member = phi(tw, i) if side == "right" else phi(inverse(tw), i)
                assert (y == tw) if member else (length(y) == length(tw) + 1)


@pytest.mark.parametrize("n", range(2, 6))
def test_descent_lowering_move_exists(n):
    for tw in enumerate_rb(n):
        if tw.w == tuple(range(1, n + 1)):
            continue
        moves = []
        for i in range(1, n):
            if tw.w[i - 1] > tw.w[i]:
                moves.append(rbperm.right_mul_s(tw, i))
            vi, vj = tw.w.index(i), tw.w.index(i + 1)
            if vi > vj:
                moves.append(rbperm.left_mul_s(tw, i))
        assert any(is_valid(*y) and length(y) == length(tw) - 1 for y in moves), tw


def test_quadratic_relation_needs_corrected_case_two():
    # the literal "i+1 in sigma(tw s)" test breaks T_s^2 = (q-1) T_s + q already at N = 2
    tw = make((1, 2), (1,))
    assert rbperm.right_case(tw, 1) == 1
    assert rbperm.right_t_support(tw, 1) == [make((2, 1), (2,))]
    assert rbperm.right_t_support(tw, 1, verbatim=True) != rbperm.right_t_support(tw, 1)


def test_text_and_json_round_trip():
    tw = make((7, 2, 5, 1, 6, 9, 3, 8, 10, 4), (1, 2, 3, 4, 7))
    assert rbperm.from_text(rbperm.to_text(tw)) == tw
    assert rbperm.from_text("w=7,2,5,1,6,9,3,8,10,4; b=1,2,3,4,7") == tw
    assert rbperm.from_json(rbperm.to_json(tw)) == tw
    assert rbperm.to_json(make((2, 1, 3), (2,))) == {"w": [2, 1, 3], "beta": [2]}
    assert rbperm.from_text("w=2 1") == make((2, 1))


@pytest.mark.parametrize("text, message", [
    ("w=1 2; b=2", "invalid pair (i, j) = (1, 2)"),
    ("w=1 1", "not a permutation"),
    ("w=2 1; b=3", "outside 1..2"),
    ("w=2 1; b=x", "column 10"),
    ("b=1", "missing w"),
    ("w=1; c=1", "unknown field"),
])
def test_parse_errors(text, message):
    with pytest.raises(ValueError, match=message.replace("(", r"\(").replace(")", r"\)")):
        rbperm.from_text(text)


def test_worked_example_is_valid():
    tw = make((7, 2, 5, 1, 6, 9, 3, 8, 10, 4), (1, 2, 3, 4, 7))
    assert is_valid(*tw)
    assert mrsk.mirabolic_rsk(tw).nu == (5, 3, 2)
