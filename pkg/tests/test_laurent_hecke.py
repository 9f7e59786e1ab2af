import pytest
from hypothesis import given, strategies as st

from miracells import laurent_hecke as lh
from miracells import microlab, rbperm, young
from miracells.laurent_hecke import LaurentPoly, ONE, V, VINV, ZERO

polys = st.dictionaries(st.integers(-5, 5), st.integers(-20, 20), max_size=5).map(LaurentPoly)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a and a - a == ZERO


@given(polys, polys)
def test_bar_is_ring_involution(a, b):
    assert a.bar().bar() == a
    assert (a + b).bar() == a.bar() + b.bar()
    assert (a * b).bar() == a.bar() * b.bar()
    assert a.at_minus_v().at_minus_v() == a


@given(polys)
def test_json_round_trip(a):
    assert LaurentPoly.from_json(a.to_json()) == a


def test_unit_powers():
    assert VINV ** 3 == LaurentPoly.mono(-3)
    assert (-V) ** -2 == LaurentPoly.mono(-2)
    assert lh.minus_v_power(3) == LaurentPoly.mono(3, -1)
    with pytest.raises(ValueError):
        (V + 1) ** -1
    assert repr(V * V - 2 * VINV) == "v^2 - 2*v^-1"


def test_quadratic_relation_t_basis():
    q = V * V
    s = (2, 1)
    t = lh.t_right_mul_s({s: ONE}, 1)
    assert t == {s: q - 1, (1, 2): q}
    assert lh.t_right_mul_s({(1, 2): ONE}, 1) == {s: ONE}


def test_quadratic_relation_h_basis():
    s = (2, 1)
    assert lh.hecke_mul(lh.basis_h(s), lh.basis_h(s)) == {s: VINV - V, (1, 2): ONE}
    kl_s = lh.kl_basis_classical(2)[s]
    assert kl_s == {s: ONE, (1, 2): -VINV}
    square = lh.hecke_mul(kl_s, kl_s)
    assert square == lh.scale(kl_s, -(V + VINV))


def test_identity_is_unit():
    for w in lh.all_perms(3):
        x = {w: V + 2, (1, 2, 3): VINV}
        assert lh.hecke_mul(lh.basis_h((1, 2, 3)), x) == x == lh.hecke_mul(x, lh.basis_h((1, 2, 3)))


def test_hecke_mul_associative_n3():
    perms = lh.all_perms(3)
    for a in perms:
        for b in perms:
            for c in perms[::2]:
                ab = lh.hecke_mul(lh.basis_h(a), lh.basis_h(b))
                bc = lh.hecke_mul(lh.basis_h(b), lh.basis_h(c))
                assert lh.hecke_mul(ab, lh.basis_h(c)) == lh.hecke_mul(lh.basis_h(a), bc)


@pytest.mark.parametrize("n", range(1, 6))
def test_basis_conversions_compose_to_identity(n):
    kl = lh.kl_basis_classical(n)
    for w in lh.all_perms(n):
        h = {w: V + VINV}
        assert lh.t_to_h(lh.h_to_t(h)) == h
        assert lh.to_kl_basis(kl[w], kl, lh.perm_length) == {w: ONE}
        expansion = lh.to_kl_basis(h, kl, lh.perm_length)
        back = lh.combine(*((c, kl[y]) for y, c in expansion.items()))
        assert back == h


@pytest.mark.parametrize("n", range(1, 6))
def test_kl_basis_invariants(n):
    kl = lh.kl_basis_classical(n)
    assert len(kl) == len(lh.all_perms(n))
    assert kl[lh.identity(n)] == {lh.identity(n): ONE}
    for w, exp in kl.items():
        lh.check_kl_element(w, exp, lh.perm_length, lh.hecke_bar)


def test_kl_of_longest_element_n3():
    w0 = (3, 2, 1)
    exp = lh.kl_basis_classical(3)[w0]
    assert set(exp) == set(lh.all_perms(3))
    for y, c in exp.items():
        assert c == LaurentPoly.mono(-(3 - lh.perm_length(y)), (-1) ** (3 - lh.perm_length(y)))


def test_classical_positivity_and_parity_after_sign():
    for n in range(1, 6):
        for w, exp in lh.kl_basis_classical(n).items():
            for y, c in exp.items():
                d = lh.perm_length(w) - lh.perm_length(y)
                normalized = c.at_minus_v()
                assert all(x >= 0 for x in normalized.terms.values())
                assert all((k - d) % 2 == 0 for k in c.terms)


def test_fq_specialization_matches_t_basis():
    for n, q in ((2, 2), (2, 3), (3, 2)):
        for w in lh.all_perms(n):
            for i in range(1, n):
                brute = microlab.fq_convolution(n, q, rbperm.make(w), i, "right")
                formal = lh.t_right_mul_s({w: ONE}, i)
                assert brute == {rbperm.make(k): round(c.evaluate(q ** 0.5)) for k, c in formal.items()}


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("side", ["left", "right", "two_sided"])
def test_classical_cells_rsk_vs_kl(n, side):
    assert lh.same_partition(lh.classical_cells_rsk(n, side), lh.classical_cells_kl(n, side))


def test_classical_cell_sizes():
    assert sorted(len(c) for c in lh.classical_cells_rsk(2, "two_sided")) == [1, 1]
    assert sorted(len(c) for c in lh.classical_cells_rsk(3, "two_sided")) == [1, 1, 4]


@pytest.mark.parametrize("nu, rank", [((3,), 1), ((2, 1), 4), ((1, 1, 1), 1), ((2, 2), 4), ((3, 1), 9)])
def test_j_ring_rank(nu, rank):
    data = lh.j_ring(nu)
    assert len(data["cell"]) == rank
    assert data["max_degree"] <= data["a"] == young.n_stat(nu)


@pytest.mark.parametrize("n", range(1, 5))
def test_j_ring_matrix_units(n):
    for nu in young.partitions(n):
        assert lh.j_ring_matches_matrix_units(nu, "PQ")


def test_j_ring_orientation_matters():
    assert lh.j_ring_matches_matrix_units((2, 1), "PQ")
    assert not lh.j_ring_matches_matrix_units((2, 1), "QP")


def test_degree_bound_uses_n_of_nu():
    # the closed form N(N-1)/2 - n(nu) is smaller than the attained degree on (2, 1)
    data = lh.j_ring((2, 1))
    assert data["max_degree"] == 1 == young.n_stat((2, 1))
    assert young.a_function((2, 1), 3) == 2
    assert lh.j_ring((1, 1, 1))["max_degree"] == 3 > young.a_function((1, 1, 1), 3)


def test_element_json():
    out = lh.element_to_json({(2, 1): V, (1, 2): -VINV}, "H", lh.perm_text)
    assert out == {"basis": "H", "terms": {"1 2": {"-1": -1}, "2 1": {"1": 1}}}
