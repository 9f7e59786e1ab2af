"""Integer Laurent polynomials in v and the Hecke algebra of S_N.

Conventions: q = v^2, H_w = (-v)^(-l(w)) T_w, so that

    H_w H_s = H_{ws}                         if l(ws) > l(w)
    H_w H_s = H_{ws} + (v^-1 - v) H_w        otherwise,

and the Kazhdan-Lusztig generator is KL_s = H_s - v^-1.  KL basis elements
are bar-invariant with KL_w - H_w in sum_y v^-1 Z[v^-1] H_y.  With these
signs the coefficient of H_y in KL_w is (-1)^(l(w)-l(y)) times a polynomial
in v^-1 with nonnegative coefficients.

Hecke elements are plain dicts {permutation: LaurentPoly} in the H basis.
"""
from __future__ import annotations

from collections import defaultdict
from functools import cache
from itertools import permutations
from typing import Callable, Hashable, Iterable, Mapping

import networkx as nx

from .young import Partition, classical_rsk, count_st, n_stat, shape


class LaurentPoly:
    """Immutable integer Laurent polynomial in v, stored as {exponent: coefficient}."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        self.terms = {int(k): int(c) for k, c in (terms or {}).items() if c}
        self._hash = None

    @classmethod
    def mono(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @staticmethod
    def lift(x) -> "LaurentPoly":
        return x if isinstance(x, LaurentPoly) else LaurentPoly.const(x)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other) -> "LaurentPoly":
        other = LaurentPoly.lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-LaurentPoly.lift(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return LaurentPoly.lift(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = LaurentPoly.lift(other)
        out: dict[int, int] = {}
        for a, x in self.terms.items():
            for b, y in other.terms.items():
                out[a + b] = out.get(a + b, 0) + x * y
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted")
            (e, c), = self.terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials can be inverted")
            return LaurentPoly({-e * -k: c ** -k})
        out = LaurentPoly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def bar(self) -> "LaurentPoly":
        return LaurentPoly({-k: c for k, c in self.terms.items()})

    def at_minus_v(self) -> "LaurentPoly":
        """Substitute v -> -v."""
        return LaurentPoly({k: c * (-1) ** (k % 2) for k, c in self.terms.items()})

    def coeff(self, k: int) -> int:
        return self.terms.get(k, 0)

    def degree(self) -> int | None:
        return max(self.terms) if self.terms else None

    def min_degree(self) -> int | None:
        return min(self.terms) if self.terms else None

    def evaluate(self, v):
        return sum(c * v ** k for k, c in self.terms.items())

    def to_json(self) -> dict[str, int]:
        return {str(k): c for k, c in sorted(self.terms.items())}

    @classmethod
    def from_json(cls, obj: Mapping[str, int]) -> "LaurentPoly":
        return cls({int(k): int(c) for k, c in obj.items()})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            mon = "" if k == 0 else ("v" if k == 1 else f"v^{k}")
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
V = LaurentPoly.mono(1)
VINV = LaurentPoly.mono(-1)
MINUS_V = LaurentPoly.mono(1, -1)


def minus_v_power(k: int) -> LaurentPoly:
    """(-v)^k."""
    return LaurentPoly.mono(k, (-1) ** (k % 2))


# ---------------------------------------------------------------- sparse linear combinations

Element = dict


def add_term(acc: dict, key: Hashable, c: LaurentPoly) -> None:
    if not c:
        return
    new = acc[key] + c if key in acc else c
    if new:
        acc[key] = new
    else:
        acc.pop(key, None)


def combine(*pairs: tuple[LaurentPoly | int, Mapping]) -> dict:
    """sum of scalar * element."""
    acc: dict = {}
    for scalar, elem in pairs:
        scalar = LaurentPoly.lift(scalar)
        for k, c in elem.items():
            add_term(acc, k, scalar * c)
    return acc


def scale(elem: Mapping, scalar) -> dict:
    return combine((scalar, elem))


def elem_bar_coeffs(elem: Mapping) -> dict:
    return {k: c.bar() for k, c in elem.items()}


def to_kl_basis(elem: Mapping, kl: Mapping[Hashable, Mapping], length: Callable) -> dict:
    """Rewrite an H-basis element in a unitriangular basis {key: H-expansion}."""
    rest = dict(elem)
    out: dict = {}
    while rest:
        top = max(rest, key=length)
        c = rest[top]
        out[top] = c
        for k, p in kl[top].items():
            add_term(rest, k, -(c * p))
        assert top not in rest
    return out


# ---------------------------------------------------------------- symmetric group

def identity(n: int) -> tuple[int, ...]:
    return tuple(range(1, n + 1))


def perm_length(w) -> int:
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])


def swap_positions(w, i: int) -> tuple[int, ...]:
    w = list(w)
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def swap_values(w, i: int) -> tuple[int, ...]:
    return tuple(i + 1 if x == i else i if x == i + 1 else x for x in w)


def perm_inv(w) -> tuple[int, ...]:
    inv = [0] * len(w)
    for i, x in enumerate(w, start=1):
        inv[x - 1] = i
    return tuple(inv)


def reduced_word(w) -> list[int]:
    """Indices i_1..i_k with w = s_{i_1} ... s_{i_k} (right descents peeled off)."""
    word = []
    w = tuple(w)
    while True:
        for i in range(1, len(w)):
            if w[i - 1] > w[i]:
                word.append(i)
                w = swap_positions(w, i)
                break
        else:
            return word[::-1]


@cache
def all_perms(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(permutations(range(1, n + 1)))


# ---------------------------------------------------------------- Hecke algebra in the H basis

def h_right_mul_s(elem: Mapping, i: int) -> dict:
    acc: dict = {}
    for w, c in elem.items():
        ws = swap_positions(w, i)
        add_term(acc, ws, c)
        if w[i - 1] > w[i]:
            add_term(acc, w, c * (VINV - V))
    return acc


def h_left_mul_s(elem: Mapping, i: int) -> dict:
    acc: dict = {}
    for w, c in elem.items():
        sw = swap_values(w, i)
        add_term(acc, sw, c)
        winv = perm_inv(w)
        if winv[i - 1] > winv[i]:
            add_term(acc, w, c * (VINV - V))
    return acc


def kl_gen_right(elem: Mapping, i: int) -> dict:
    """elem * (H_s - v^-1)."""
    return combine((1, h_right_mul_s(elem, i)), (-VINV, elem))


def kl_gen_left(elem: Mapping, i: int) -> dict:
    return combine((1, h_left_mul_s(elem, i)), (-VINV, elem))


def hecke_mul(a: Mapping, b: Mapping) -> dict:
    """Product of two H-basis elements."""
    acc: dict = {}
    for w, c in b.items():
        r = dict(a)
        for i in reduced_word(w):
            r = h_right_mul_s(r, i)
        for k, p in r.items():
            add_term(acc, k, c * p)
    return acc


def basis_h(w) -> dict:
    return {tuple(w): ONE}


def h_to_t(elem: Mapping, length: Callable = perm_length) -> dict:
    """Coefficients with respect to T_w, using H_w = (-v)^(-l(w)) T_w."""
    return {w: c * minus_v_power(-length(w)) for w, c in elem.items()}


def t_to_h(elem: Mapping, length: Callable = perm_length) -> dict:
    return {w: c * minus_v_power(length(w)) for w, c in elem.items()}


def t_right_mul_s(elem: Mapping, i: int) -> dict:
    """T-basis: T_w T_s = T_ws or (q-1) T_w + q T_ws."""
    q = V * V
    acc: dict = {}
    for w, c in elem.items():
        ws = swap_positions(w, i)
        if w[i - 1] < w[i]:
            add_term(acc, ws, c)
        else:
            add_term(acc, w, c * (q - 1))
            add_term(acc, ws, c * q)
    return acc


@cache
def bar_of_h(w: tuple[int, ...]) -> dict:
    """bar(H_w) = bar(H_s1) ... bar(H_sk) with bar(H_s) = H_s + v - v^-1."""
    n = len(w)
    out = basis_h(identity(n))
    for i in reduced_word(w):
        out = combine((1, h_right_mul_s(out, i)), (V - VINV, out))
    return out


def hecke_bar(elem: Mapping) -> dict:
    acc: dict = {}
    for w, c in elem.items():
        for k, p in bar_of_h(w).items():
            add_term(acc, k, c.bar() * p)
    return acc


def _clear_nonnegative(prod: dict, leading, table: Mapping, length: Callable) -> dict:
    """Subtract bar-invariant multiples of lower KL elements until every non-leading coefficient lies in v^-1 Z[v^-1]."""
    while True:
        bad = [z for z, c in prod.items() if z != leading and c.degree() is not None and c.degree() >= 0]
        if not bad:
            return prod
        z = max(bad, key=length)
        c = prod[z]
        p = LaurentPoly({k: c.coeff(k) for k in range(0, c.degree() + 1)})
        p = p + LaurentPoly({-k: c.coeff(k) for k in range(1, c.degree() + 1)})
        prod = combine((1, prod), (-p, table[z]))


@cache
def kl_basis_classical(n: int) -> dict[tuple[int, ...], dict]:
    """{w: H-expansion of KL_w} for S_n, built by increasing length."""
    table: dict = {identity(n): basis_h(identity(n))}
    for w in sorted(all_perms(n), key=perm_length):
        if w in table:
            continue
        i = next(i for i in range(1, n) if w[i - 1] > w[i])
        x = swap_positions(w, i)
        prod = kl_gen_right(table[x], i)
        assert prod.get(w) == ONE
        table[w] = _clear_nonnegative(prod, w, table, perm_length)
    return table


def check_kl_element(w, expansion: Mapping, length: Callable, bar: Callable) -> None:
    assert expansion.get(w) == ONE, (w, "leading coefficient")
    for y, p in expansion.items():
        if y == w:
            continue
        assert length(y) < length(w), (w, y, "triangularity")
        assert p.degree() < 0, (w, y, "coefficient not in v^-1 Z[v^-1]")
        d = length(w) - length(y)
        for k, c in p.terms.items():
            assert (k - d) % 2 == 0, (w, y, "parity")
        assert all(c >= 0 for c in (p * (-1) ** d).terms.values()), (w, y, "sign-normalized positivity")
    assert bar(expansion) == dict(expansion), (w, "bar invariance")


def classical_product_kl(x, y, n: int) -> dict:
    """KL_x KL_y in the KL basis."""
    table = kl_basis_classical(n)
    return to_kl_basis(hecke_mul(table[x], table[y]), table, perm_length)


# ---------------------------------------------------------------- cells

def scc_partition(nodes: Iterable, edges: Iterable[tuple]) -> list[list]:
    """Strongly connected components, each sorted by node order, listed by first node."""
    nodes = list(nodes)
    order = {x: k for k, x in enumerate(nodes)}
    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    g.add_edges_from(edges)
    comps = [sorted(c, key=order.__getitem__) for c in nx.strongly_connected_components(g)]
    return sorted(comps, key=lambda c: order[c[0]])


def classical_cells_rsk(n: int, side: str) -> list[list[tuple[int, ...]]]:
    groups: dict = defaultdict(list)
    for w in all_perms(n):
        p, q = classical_rsk(w)
        key = {"two_sided": shape(p), "left": q, "right": p}[side]
        groups[key].append(w)
    return list(groups.values())


def classical_cells_kl(n: int, side: str) -> list[list[tuple[int, ...]]]:
    table = kl_basis_classical(n)
    edges = []
    for w in all_perms(n):
        for i in range(1, n):
            prods = []
            if side in ("left", "two_sided"):
                prods.append(to_kl_basis(kl_gen_left(table[w], i), table, perm_length))
            if side in ("right", "two_sided"):
                prods.append(to_kl_basis(kl_gen_right(table[w], i), table, perm_length))
            for prod in prods:
                edges += [(w, z) for z in prod]
    return scc_partition(all_perms(n), edges)


def same_partition(a: Iterable[Iterable], b: Iterable[Iterable]) -> bool:
    return {frozenset(x) for x in a} == {frozenset(x) for x in b}


# ---------------------------------------------------------------- asymptotic ring

def a_value(nu: Partition) -> int:
    """Lusztig's a-function on the two-sided cell of row-insertion shape nu: n(nu)."""
    return n_stat(nu)


def cell_of_shape(nu: Partition) -> list[tuple[int, ...]]:
    n = sum(nu)
    return [w for w in all_perms(n) if shape(classical_rsk(w)[0]) == tuple(nu)]


@cache
def j_ring(nu: Partition) -> dict:
    """Structure constants gamma and the degree data of the asymptotic ring J_nu.

    gamma_{w,y,z} is the coefficient of v^a in m_{w,y,z}(-v), where a = n(nu)
    is the largest degree that occurs; evaluating at -v absorbs the sign
    (-1)^a of the leading terms in this H-basis convention.
    """
    nu = tuple(nu)
    n = sum(nu)
    cell = cell_of_shape(nu)
    cset = set(cell)
    a = a_value(nu)
    gamma = {}
    max_deg = None
    for w in cell:
        for y in cell:
            prod = classical_product_kl(w, y, n)
            for z, m in prod.items():
                if z not in cset:
                    continue
                d = m.degree()
                max_deg = d if max_deg is None else max(max_deg, d)
                g = m.at_minus_v().coeff(a)
                if g:
                    gamma[(w, y, z)] = g
    assert max_deg is None or max_deg <= a, f"degree {max_deg} exceeds a = {a}"
    return {"nu": nu, "cell": cell, "a": a, "max_degree": max_deg, "gamma": gamma}


def j_ring_matches_matrix_units(nu: Partition, orientation: str = "PQ") -> bool:
    """Whether t_w -> e_{P(w),Q(w)} (orientation "PQ") or e_{Q(w),P(w)} ("QP")
    is an isomorphism J_nu -> Mat_{St(nu)}."""
    data = j_ring(tuple(nu))
    label = {}
    for w in data["cell"]:
        p, q = classical_rsk(w)
        label[w] = (p, q) if orientation == "PQ" else (q, p)
    assert len(set(label.values())) == count_st(tuple(nu)) ** 2
    back = {v: k for k, v in label.items()}
    got: dict = defaultdict(dict)
    for (w, y, z), g in data["gamma"].items():
        got[(w, y)][z] = g
    for w in data["cell"]:
        for y in data["cell"]:
            (a, b), (c, d) = label[w], label[y]
            expected = {back[(a, d)]: 1} if b == c else {}
            if got.get((w, y), {}) != expected:
                return False
    return True


# ---------------------------------------------------------------- serialization

def element_to_json(elem: Mapping, basis: str, key_text: Callable) -> dict:
    return {
        "basis": basis,
        "terms": {key_text(k): c.to_json() for k, c in sorted(elem.items(), key=lambda kv: key_text(kv[0]))},
    }


def perm_text(w) -> str:
    return " ".join(map(str, w))
