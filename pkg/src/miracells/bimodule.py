"""The Hecke bimodule on colored permutations.

Elements are dicts {ColoredPermutation: LaurentPoly}, in the T or H basis
(H_tw = (-v)^(-l(tw)) T_tw).  The right action of T_{s_i} follows the five
line table in `rbperm.right_case`; left actions are obtained by conjugating
with tw -> inverse(tw).

The KL basis KL_tw is built by increasing length from the bar-fixed
elements KL_{tw_k} = sum_{j<=k} (-v)^(j-k) H_{tw_j}.  The bar involution is
built independently of it, from the same base elements and the rule
bar(r h) = bar(r) bar(h).
"""
from __future__ import annotations

import random
from collections import Counter, defaultdict
from functools import cache
from typing import Iterable, Mapping

from . import mrsk, rbperm
from .laurent_hecke import (
    ONE,
    V,
    VINV,
    LaurentPoly,
    _clear_nonnegative,
    add_term,
    cell_of_shape,
    combine,
    kl_basis_classical,
    minus_v_power,
    n_stat,
    reduced_word,
    scc_partition,
    to_kl_basis,
)
from .rbperm import ColoredPermutation, enumerate_rb, fourier, inverse, length, phi, right_case
from .young import a_function, classical_rsk, count_st, enumerate_cell_triples

SIDES = ("right", "left")
Q = V * V


def invert_keys(r: Mapping) -> dict:
    return {inverse(tw): c for tw, c in r.items()}


def in_phi(tw: ColoredPermutation, i: int, side: str) -> bool:
    return phi(tw if side == "right" else inverse(tw), i)


# ---------------------------------------------------------------- generator actions

def act_T(r: Mapping, i: int, side: str = "right") -> dict:
    """r * T_{s_i} (right) or T_{s_i} * r (left), T basis."""
    if side == "left":
        return invert_keys(act_T(invert_keys(r), i, "right"))
    acc: dict = {}
    for tw, c in r.items():
        case = right_case(tw, i)
        ts = rbperm.right_mul_s(tw, i)
        tp = rbperm.toggle(tw, i + 1)
        if case == 1:
            add_term(acc, ts, c)
        elif case == 2:
            add_term(acc, ts, c)
            add_term(acc, rbperm.toggle(ts, i + 1), c)
        elif case == 3:
            add_term(acc, tp, c)
            add_term(acc, rbperm.right_mul_s(tp, i), c)
        elif case == 4:
            add_term(acc, tw, c * (Q - 1))
            add_term(acc, ts, c * Q)
        else:
            add_term(acc, tw, c * (Q - 2))
            add_term(acc, tp, c * (Q - 1))
            add_term(acc, ts, c * (Q - 1))
    return acc


def act_KLgen(r: Mapping, i: int, side: str = "right") -> dict:
    """r * KL_{s_i} (right) or KL_{s_i} * r (left), H basis."""
    if side == "left":
        return invert_keys(act_KLgen(invert_keys(r), i, "right"))
    acc: dict = {}
    for tw, c in r.items():
        case = right_case(tw, i)
        ts = rbperm.right_mul_s(tw, i)
        tp = rbperm.toggle(tw, i + 1)
        if case == 1:
            add_term(acc, ts, c)
            add_term(acc, tw, -c * VINV)
        elif case == 2:
            add_term(acc, ts, c)
            add_term(acc, rbperm.toggle(ts, i + 1), -c * VINV)
            add_term(acc, tw, -c * VINV)
        elif case == 3:
            add_term(acc, tp, c)
            add_term(acc, tw, -c * VINV)
            add_term(acc, rbperm.right_mul_s(tp, i), -c * VINV)
        elif case == 4:
            add_term(acc, ts, c)
            add_term(acc, tw, -c * V)
        else:
            add_term(acc, tw, c * (VINV - V))
            add_term(acc, tp, c * (1 - VINV * VINV))
            add_term(acc, ts, c * (1 - VINV * VINV))
    return acc


def t_to_h(r: Mapping) -> dict:
    return {tw: c * minus_v_power(length(tw)) for tw, c in r.items()}


def h_to_t(r: Mapping) -> dict:
    return {tw: c * minus_v_power(-length(tw)) for tw, c in r.items()}


def act_KLgen_via_T(r: Mapping, i: int, side: str = "right") -> dict:
    """Same as act_KLgen, computed as (-v)^-1 T_s - v^-1 in the T basis."""
    t = act_T(h_to_t(r), i, side)
    return combine((minus_v_power(-1), t_to_h(t)), (-VINV, r))


def act_H(r: Mapping, i: int, side: str = "right") -> dict:
    """Action of H_s = KL_s + v^-1."""
    return combine((1, act_KLgen(r, i, side)), (VINV, r))


def act_hecke(r: Mapping, h: Mapping, side: str = "right") -> dict:
    """r * h or h * r for a classical Hecke element h in the H basis."""
    acc: dict = {}
    for w, c in h.items():
        word = reduced_word(w)
        out = dict(r)
        for i in word if side == "right" else reversed(word):
            out = act_H(out, i, side)
        for tw, p in out.items():
            add_term(acc, tw, c * p)
    return acc


# ---------------------------------------------------------------- generation by star products

def base_elements(n: int) -> list[ColoredPermutation]:
    return [rbperm.tw_k(n, k) for k in range(n + 1)]


def base_kl(n: int, k: int) -> dict:
    return {rbperm.tw_k(n, j): minus_v_power(j - k) for j in range(k + 1)}


@cache
def predecessors(n: int) -> dict[ColoredPermutation, list[tuple[ColoredPermutation, int, str]]]:
    """tw -> [(tw', i, side)] with tw = tw' * s_i (or s_i * tw') of larger length."""
    out: dict = defaultdict(list)
    for tw in enumerate_rb(n):
        for i in range(1, n):
            for side in SIDES:
                if in_phi(tw, i, side):
                    continue
                target = rbperm.star(tw, i, side)
                if length(target) > length(tw):
                    out[target].append((tw, i, side))
    return dict(out)


def _choose(cands: list, order: str | int):
    if order == "first":
        return cands[0]
    if order == "last":
        return cands[-1]
    return random.Random(order).choice(cands)


def _levels(n: int) -> list[ColoredPermutation]:
    return sorted(enumerate_rb(n), key=length)


_INSTALLED: dict[int, dict] = {}


def install_kl_table(n: int, table: dict) -> None:
    """Use a precomputed (e.g. cached) table for the default order."""
    _INSTALLED[n] = table


def kl_basis_R(n: int, order: str | int = "first") -> dict[ColoredPermutation, dict]:
    """{tw: H-expansion of KL_tw}.  `order` picks which predecessor realizes each tw
    ("first", "last" or an integer seed); the result must not depend on it."""
    if order == "first" and n in _INSTALLED:
        return _INSTALLED[n]
    return _build_kl_basis_R(n, order)


@cache
def _build_kl_basis_R(n: int, order: str | int) -> dict[ColoredPermutation, dict]:
    table: dict = {}
    bases = set(base_elements(n))
    for k, tw in enumerate(base_elements(n)):
        table[tw] = base_kl(n, k)
    preds = predecessors(n)
    for tw in _levels(n):
        if tw in bases:
            continue
        if tw not in preds:
            raise AssertionError(f"{rbperm.to_text(tw)} is not reachable from the base elements")
        prev, i, side = _choose(preds[tw], order)
        prod = act_KLgen(table[prev], i, side)
        assert prod.get(tw) == ONE, (tw, prev, i, side)
        top = length(tw)
        assert all(length(z) < top for z in prod if z != tw), (tw, "product not triangular")
        table[tw] = _clear_nonnegative(prod, tw, table, length)
    return table


@cache
def bar_table(n: int, order: str | int = "first") -> dict[ColoredPermutation, dict]:
    """{tw: bar(H_tw)} in the H basis."""
    out: dict = {}
    for k, tw in enumerate(base_elements(n)):
        acc = base_kl(n, k)
        for j in range(k):
            acc = combine((1, acc), (-minus_v_power(k - j), out[rbperm.tw_k(n, j)]))
        out[tw] = acc
    preds = predecessors(n)
    for tw in _levels(n):
        if tw in out:
            continue
        prev, i, side = _choose(preds[tw], order)
        prod = act_KLgen({prev: ONE}, i, side)
        assert prod.get(tw) == ONE
        rest = {z: c for z, c in prod.items() if z != tw}
        assert all(z in out for z in rest), (tw, "lower terms not yet known")
        acc = act_KLgen(out[prev], i, side)
        for z, c in rest.items():
            acc = combine((1, acc), (-c.bar(), out[z]))
        out[tw] = acc
    return out


def bar_R(r: Mapping, n: int | None = None) -> dict:
    if not r:
        return {}
    n = n or len(next(iter(r)).w)
    table = bar_table(n)
    acc: dict = {}
    for tw, c in r.items():
        for z, p in table[tw].items():
            add_term(acc, z, c.bar() * p)
    return acc


def check_kl_table(n: int) -> None:
    """Leading term, triangularity, v^-1 Z[v^-1] coefficients, parity,
    sign-normalized positivity and bar invariance for every KL_tw."""
    for tw, exp in kl_basis_R(n).items():
        assert exp.get(tw) == ONE
        for y, p in exp.items():
            if y == tw:
                continue
            d = length(tw) - length(y)
            assert d > 0, (tw, y, "triangularity")
            assert p.degree() < 0, (tw, y, "coefficient not in v^-1 Z[v^-1]")
            assert all((k - d) % 2 == 0 for k in p.terms), (tw, y, "parity")
            assert all(c * (-1) ** d > 0 for c in p.terms.values()), (tw, y, "positivity")
        assert bar_R(exp, n) == exp, (tw, "bar invariance")


def literal_nonnegative_fraction(n: int) -> tuple[int, int]:
    """(#coefficients that are literally >= 0, #coefficients) over all P_{tw,y}."""
    good = total = 0
    for exp in kl_basis_R(n).values():
        for p in exp.values():
            for c in p.terms.values():
                total += 1
                good += c >= 0
    return good, total


# ---------------------------------------------------------------- mu and the W-graph

def mu(tw1: ColoredPermutation, tw2: ColoredPermutation) -> int:
    """Symmetric; for tw1 in the support of KL_tw2 (l(tw1) < l(tw2)) it is minus the
    v^-1 coefficient of P_{tw2,tw1}, so that mu(tw_0, tw_1) = 1."""
    if length(tw1) > length(tw2):
        tw1, tw2 = tw2, tw1
    if tw1 == tw2:
        return 0
    p = kl_basis_R(len(tw1.w))[tw2].get(tw1)
    return -p.coeff(-1) if p else 0


def labels(tw: ColoredPermutation) -> list[str]:
    n = len(tw.w)
    out = [f"sR{i}" for i in range(1, n) if in_phi(tw, i, "right")]
    return out + [f"sL{i}" for i in range(1, n) if in_phi(tw, i, "left")]


@cache
def w_graph(n: int) -> dict:
    """Vertices with descent labels and mu-edges; edge a -> b has l(a) < l(b)."""
    table = kl_basis_R(n)
    lab = {tw: labels(tw) for tw in enumerate_rb(n)}
    edges = []
    for b, exp in table.items():
        for a in exp:
            if a == b:
                continue
            m = mu(a, b)
            if m and set(lab[a]) != set(lab[b]):
                edges.append((a, b, m))
    edges.sort(key=lambda e: (rbperm.sort_key(e[0]), rbperm.sort_key(e[1])))
    return {"vertices": [(tw, lab[tw]) for tw in enumerate_rb(n)], "edges": edges}


def w_graph_json(n: int) -> dict:
    g = w_graph(n)
    return {
        "vertices": [{"tw": rbperm.to_text(tw), "labels": lab} for tw, lab in g["vertices"]],
        "edges": [{"a": rbperm.to_text(a), "b": rbperm.to_text(b), "mu": m} for a, b, m in g["edges"]],
    }


def graph_action(tw: ColoredPermutation, i: int, side: str) -> dict:
    """KL_tw * KL_s (or KL_s * KL_tw) in the KL basis, read off the W-graph."""
    n = len(tw.w)
    label = f"s{'R' if side == 'right' else 'L'}{i}"
    lab = dict(w_graph(n)["vertices"])
    if label in lab[tw]:
        return {tw: -(V + VINV)}
    out = {rbperm.star(tw, i, side): ONE}
    for a, b, m in w_graph(n)["edges"]:
        if b == tw and label in lab[a]:
            add_term(out, a, LaurentPoly.const(m))
    return out


def kl_product_gen(tw: ColoredPermutation, i: int, side: str) -> dict:
    n = len(tw.w)
    table = kl_basis_R(n)
    return to_kl_basis(act_KLgen(table[tw], i, side), table, length)


def graph_reproduces_action(n: int) -> list[tuple]:
    """(tw, i, side) where the W-graph prediction differs from the computed product."""
    bad = []
    for tw in enumerate_rb(n):
        for i in range(1, n):
            for side in SIDES:
                if graph_action(tw, i, side) != kl_product_gen(tw, i, side):
                    bad.append((tw, i, side))
    return bad


# ---------------------------------------------------------------- cells

@cache
def kl_cells(n: int, side: str = "bimodule") -> list[list[ColoredPermutation]]:
    sides = {"left": ("left",), "right": ("right",), "bimodule": SIDES}[side]
    edges = []
    for tw in enumerate_rb(n):
        for i in range(1, n):
            for sd in sides:
                edges += [(tw, z) for z in kl_product_gen(tw, i, sd)]
    return scc_partition(enumerate_rb(n), edges)


def _micro_side(side: str) -> str:
    return "two_sided" if side == "bimodule" else side


def cell_refinement_violations(n: int) -> list[str]:
    """Microlocal cells not inside a KL cell of the same side, and KL cells on
    which nu or nu' vary."""
    bad = []
    for side in ("left", "right", "bimodule"):
        where = {tw: k for k, cell in enumerate(kl_cells(n, side)) for tw in cell}
        for cell in mrsk.microlocal_cells(n, _micro_side(side)):
            if len({where[tw] for tw in cell}) != 1:
                bad.append(f"{side}: microlocal cell of {rbperm.to_text(cell[0])} is split")
    for cell in kl_cells(n, "bimodule"):
        outs = [mrsk.mirabolic_rsk(tw) for tw in cell]
        if len({(o.nu, o.nu_prime) for o in outs}) != 1:
            bad.append(f"nu/nu' vary on the KL cell of {rbperm.to_text(cell[0])}")
    return bad


def cells_coincide(n: int, side: str = "bimodule") -> bool:
    a = {frozenset(c) for c in kl_cells(n, side)}
    b = {frozenset(c) for c in mrsk.microlocal_cells(n, _micro_side(side))}
    return a == b


# ---------------------------------------------------------------- other checks

def rank_identity_check(n: int) -> dict:
    contributions = [
        {"triple": [list(x) for x in t], "f_nu_f_nu_prime": count_st(t[0]) * count_st(t[2])}
        for t in enumerate_cell_triples(n)
    ]
    total = sum(c["f_nu_f_nu_prime"] for c in contributions)
    size = len(enumerate_rb(n))
    return {"n": n, "rb_size": size, "sum": total, "holds": size == total, "contributions": contributions}


def bimodule_axiom_violations(n: int) -> list[tuple]:
    bad = []
    for tw in enumerate_rb(n):
        for i in range(1, n):
            for j in range(1, n):
                a = act_T(act_T({tw: ONE}, i, "left"), j, "right")
                b = act_T(act_T({tw: ONE}, j, "right"), i, "left")
                if a != b:
                    bad.append((tw, i, j))
    return bad


def hecke_relation_violations(n: int) -> list[tuple]:
    """Quadratic and braid relations of T_{s_i} acting on each side."""
    bad = []
    for side in SIDES:
        for tw in enumerate_rb(n):
            e = {tw: ONE}
            for i in range(1, n):
                lhs = act_T(act_T(e, i, side), i, side)
                rhs = combine((Q - 1, act_T(e, i, side)), (Q, e))
                if lhs != rhs:
                    bad.append(("quadratic", side, tw, i))
                if i + 1 < n:
                    x = act_T(act_T(act_T(e, i, side), i + 1, side), i, side)
                    y = act_T(act_T(act_T(e, i + 1, side), i, side), i + 1, side)
                    if x != y:
                        bad.append(("braid", side, tw, i))
    return bad


def anti_automorphism_violations(n: int) -> list[ColoredPermutation]:
    table = kl_basis_R(n)
    return [tw for tw in enumerate_rb(n) if invert_keys(table[tw]) != table[inverse(tw)]]


def fourier_violations(n: int) -> list[tuple]:
    """KL_tw -> KL_F(tw), extended linearly, must turn right or left
    multiplication by KL_{s_i} into multiplication by KL_{s_(N-i)}.  It is not
    a permutation of the H basis (it swaps tw_k and tw_(N-k)), so only
    KL-basis structure constants are compared."""
    bad = []
    for tw in enumerate_rb(n):
        ftw = fourier(tw)
        for i in range(1, n):
            for side in SIDES:
                a = {fourier(z): m for z, m in kl_product_gen(tw, i, side).items()}
                if a != kl_product_gen(ftw, n - i, side):
                    bad.append((tw, i, side))
    return bad


def classical_block_matches(n: int) -> bool:
    """KL_(w, empty) is the classical KL_w with empty decorations."""
    table = kl_basis_R(n)
    for w, exp in kl_basis_classical(n).items():
        lifted = {ColoredPermutation(y, frozenset()): p for y, p in exp.items()}
        if table[ColoredPermutation(w, frozenset())] != lifted:
            return False
    return True


# ---------------------------------------------------------------- asymptotic bimodule

def kl_product_classical(tw: ColoredPermutation, y: tuple, side: str) -> dict:
    """KL_tw * KL_y (right) or KL_y * KL_tw (left), in the KL basis of the bimodule."""
    n = len(tw.w)
    table = kl_basis_R(n)
    prod = act_hecke(table[tw], kl_basis_classical(n)[y], side)
    return to_kl_basis(prod, table, length)


ORIENTATIONS = (("T1T2", "PQ"), ("T2T1", "PQ"), ("T1T2", "QP"), ("T2T1", "QP"))


def asymptotic_bimodule(nu: Iterable[int], theta: Iterable[int]) -> dict:
    """Degree bound and the comparison with the regular J_nu bimodule for the
    diagonal cell (nu, theta, nu).  Nothing here is asserted."""
    nu, theta = tuple(nu), tuple(theta)
    n = sum(nu)
    micro = [tw for tw in enumerate_rb(n) if mrsk.mirabolic_rsk(tw).triple == (nu, theta, nu)]
    if not micro:
        raise ValueError(f"({nu}, {theta}, {nu}) is not a cell triple")
    kl_cell = next(c for c in kl_cells(n, "bimodule") if micro[0] in c)
    cell = sorted(kl_cell, key=rbperm.sort_key)
    cset = set(cell)
    ring = cell_of_shape(nu)
    a_true = n_stat(nu)
    a_complement = a_function(nu, n)
    max_deg = {"right": None, "left": None}
    gamma: dict = {"right": defaultdict(dict), "left": defaultdict(dict)}
    for side in SIDES:
        for tw in cell:
            for y in ring:
                for z, m in kl_product_classical(tw, y, side).items():
                    if z not in cset:
                        continue
                    d = m.degree()
                    cur = max_deg[side]
                    max_deg[side] = d if cur is None else max(cur, d)
                    g = m.at_minus_v().coeff(a_true)
                    if g:
                        gamma[side][(tw, y)][z] = g

    def bimodule_label(tw, orient):
        o = mrsk.mirabolic_rsk(tw)
        return (o.t1, o.t2) if orient == "T1T2" else (o.t2, o.t1)

    def ring_label(y, orient):
        p, q = classical_rsk(y)
        return (p, q) if orient == "PQ" else (q, p)

    conventions = []
    for bo, ro in ORIENTATIONS:
        lab = {tw: bimodule_label(tw, bo) for tw in cell}
        back = {v: k for k, v in lab.items()}
        ok = {"right": len(back) == len(cell), "left": len(back) == len(cell)}
        for side in SIDES:
            if not ok[side]:
                continue
            for tw in cell:
                for y in ring:
                    (a, b), (c, d) = lab[tw], ring_label(y, ro)
                    if side == "right":
                        target = (a, d) if b == c else None
                    else:
                        target = (c, b) if d == a else None
                    expected = {back[target]: 1} if target in back else {}
                    if target is not None and target not in back:
                        expected = {"missing": 1}
                    if gamma[side].get((tw, y), {}) != expected:
                        ok[side] = False
                        break
                if not ok[side]:
                    break
        conventions.append({"bimodule_labels": bo, "ring_labels": ro, "right": ok["right"], "left": ok["left"]})
    return {
        "triple": [list(nu), list(theta), list(nu)],
        "cell_size": len(cell),
        "microlocal_size": len(micro),
        "expected_size": count_st(nu) ** 2,
        "a_complement": a_complement,
        "a_n_nu": a_true,
        "max_degree_right": max_deg["right"],
        "max_degree_left": max_deg["left"],
        "within_a_complement": all(d is None or d <= a_complement for d in max_deg.values()),
        "within_a_n_nu": all(d is None or d <= a_true for d in max_deg.values()),
        "conventions": conventions,
        "regular_bimodule": any(c["right"] and c["left"] for c in conventions),
        "gamma": [
            {"side": side, "tw": rbperm.to_text(tw), "y": " ".join(map(str, y)), "z": rbperm.to_text(z), "gamma": g}
            for side in SIDES
            for (tw, y), row in sorted(gamma[side].items(), key=lambda kv: (rbperm.sort_key(kv[0][0]), kv[0][1]))
            for z, g in sorted(row.items(), key=lambda kv: rbperm.sort_key(kv[0]))
        ],
    }


def diagonal_triples(n: int) -> list[tuple]:
    return [(t[0], t[1]) for t in enumerate_cell_triples(n) if t[0] == t[2]]


def cell_size_multiset(n: int, nonempty_beta: bool) -> list[int]:
    return sorted(
        len(c) for c in kl_cells(n, "bimodule") if bool(next(iter(c)).beta) == nonempty_beta
    )


def length_histogram(n: int) -> Counter:
    return Counter(length(tw) for tw in enumerate_rb(n))
