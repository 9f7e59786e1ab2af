"""Verification suites behind `miracells verify` and `miracells report`.

A check is either an invariant (a proved statement or an internal
consistency condition; failures make the command exit nonzero) or a
conjecture (only reported).  Each check function returns (ok, detail).
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import bimodule, laurent_hecke, microlab, mrsk, rbperm, young
from .laurent_hecke import ONE
from .rbperm import ColoredPermutation, enumerate_rb

WORKED_EXAMPLE = rbperm.make((7, 2, 5, 1, 6, 9, 3, 8, 10, 4), (1, 2, 3, 4, 7))
FQ_CASES = ((2, 2), (2, 3), (3, 2))


@dataclass
class Check:
    suite: str
    name: str
    kind: str
    status: str
    detail: str = ""
    seconds: float = 0.0


@dataclass
class Report:
    suite: str
    n: int
    seed: int
    p: int
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks if c.kind == "invariant")

    def to_json(self, timings: bool = False) -> dict:
        checks = [asdict(c) for c in self.checks]
        if not timings:
            for c in checks:
                c.pop("seconds")
        return {"suite": self.suite, "n": self.n, "seed": self.seed, "p": self.p, "ok": self.ok, "checks": checks}


def _run(suite: str, name: str, kind: str, fn: Callable[[], tuple[bool, str]]) -> Check:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except AssertionError as exc:
        ok, detail = False, f"assertion: {exc}"
    good, bad = ("pass", "fail") if kind == "invariant" else ("holds", "fails")
    return Check(suite, name, kind, good if ok else bad, detail, round(time.perf_counter() - t0, 3))


def _first(items, fmt=str) -> str:
    items = list(items)
    return "" if not items else f"{len(items)} witness(es), first: {fmt(items[0])}"


# ---------------------------------------------------------------- individual checks

def check_worked_example() -> tuple[bool, str]:
    out = mrsk.mirabolic_rsk(WORKED_EXAMPLE)
    ok = (
        out.nu == (5, 3, 2) and out.theta == (5, 2, 1) and out.nu_prime == (5, 3, 2)
        and out.t1 == ((1, 3, 5, 6, 9), (2, 7, 8), (4, 10))
        and out.t2 == ((1, 3, 4, 8, 10), (2, 5, 6), (7, 9))
        and mrsk.rsk_via_embedding(WORKED_EXAMPLE) == out
    )
    return ok, f"nu={out.nu} theta={out.theta} nu'={out.nu_prime}"


def check_rsk_bijective(n: int) -> tuple[bool, str]:
    bad = []
    for m in range(1, n + 1):
        table = mrsk.rsk_table(m)
        report = bimodule.rank_identity_check(m)
        if len(table) != len(enumerate_rb(m)) or not report["holds"]:
            bad.append(m)
    return not bad, f"|RB_N| for N=1..{n}: {[len(enumerate_rb(m)) for m in range(1, n + 1)]}"


def check_rsk_oracle(n: int) -> tuple[bool, str]:
    bad = [tw for m in range(1, n + 1) for tw in enumerate_rb(m) if mrsk.rsk_via_embedding(tw) != mrsk.mirabolic_rsk(tw)]
    return not bad, _first(bad)


def check_inverse_rsk(n: int) -> tuple[bool, str]:
    bad = []
    for m in range(1, n + 1):
        for tw in enumerate_rb(m):
            out = mrsk.mirabolic_rsk(tw)
            if mrsk.inverse_rsk(out.triple, out.t1, out.t2) != tw:
                bad.append(tw)
    return not bad, _first(bad)


def check_young(n: int) -> tuple[bool, str]:
    for m in range(n + 1):
        for nu in young.partitions(m):
            assert young.conjugate(young.conjugate(nu)) == nu, nu
            tabs = young.enumerate_standard_tableaux(nu)
            assert len(tabs) == young.count_st(nu), nu
            for t in tabs:
                assert young.evacuation(young.evacuation(t)) == t, t
        for w in laurent_hecke.all_perms(m):
            p, q = young.classical_rsk(w)
            assert young.inverse_classical_rsk(p, q) == w, w
    for m in range(n + 1):
        for nu, theta, _ in young.enumerate_cell_triples(m):
            assert young.upsilon(*young.xi(nu, theta)) == (nu, theta), (nu, theta)
    return True, f"partitions, tableaux and RSK up to size {n}"


def check_rb(n: int) -> tuple[bool, str]:
    for m in range(1, n + 1):
        assert list(enumerate_rb(m)) == sorted(rbperm.enumerate_rb_brute(m), key=rbperm.sort_key)
        for tw in enumerate_rb(m):
            assert rbperm.length(tw) == rbperm.length(rbperm.inverse(tw)), tw
            assert rbperm.fourier(rbperm.fourier(tw)) == tw, tw
            for i in range(1, m - 1):
                y = rbperm.k_move(tw, i)
                if y is not None:
                    assert rbperm.k_move(y, i) == tw, (tw, i)
        for k in range(m + 1):
            assert rbperm.length(rbperm.tw_k(m, k)) == k
    return True, f"sizes {[len(enumerate_rb(m)) for m in range(1, n + 1)]}"


def check_classical_kl(n: int) -> tuple[bool, str]:
    for m in range(1, n + 1):
        for w, exp in laurent_hecke.kl_basis_classical(m).items():
            laurent_hecke.check_kl_element(w, exp, laurent_hecke.perm_length, laurent_hecke.hecke_bar)
    return True, f"S_1..S_{n}"


def check_classical_cells(n: int) -> tuple[bool, str]:
    bad = [
        (m, side) for m in range(1, n + 1) for side in ("left", "right", "two_sided")
        if not laurent_hecke.same_partition(laurent_hecke.classical_cells_rsk(m, side), laurent_hecke.classical_cells_kl(m, side))
    ]
    return not bad, _first(bad)


def check_j_rings(n: int) -> tuple[bool, str]:
    bad = [nu for nu in young.partitions(n) if not laurent_hecke.j_ring_matches_matrix_units(nu, "PQ")]
    return not bad, _first(bad) or "t_w -> e_{P(w),Q(w)}"


def check_fq(cases=FQ_CASES) -> tuple[bool, str]:
    bad = []
    for n, q in cases:
        for side in bimodule.SIDES:
            for tw in enumerate_rb(n):
                for i in range(1, n):
                    brute = microlab.fq_convolution(n, q, tw, i, side)
                    t_form = {k: c.evaluate(q ** 0.5) for k, c in bimodule.act_T({tw: ONE}, i, side).items()}
                    t_form = {k: round(x) for k, x in t_form.items() if round(x)}
                    # H-basis route: convert KL_s action back to T_s = -v (KL_s + v^-1)
                    h = bimodule.act_H(bimodule.t_to_h({tw: ONE}), i, side)
                    h_form = bimodule.h_to_t({k: c * laurent_hecke.MINUS_V for k, c in h.items()})
                    h_form = {k: round(c.evaluate(q ** 0.5)) for k, c in h_form.items()}
                    h_form = {k: x for k, x in h_form.items() if x}
                    if brute != t_form or brute != h_form:
                        bad.append((n, q, side, rbperm.to_text(tw), i))
    return not bad, _first(bad) or f"{len(cases)} (N, q) cases, both sides"


def check_tables_agree(n: int) -> tuple[bool, str]:
    bad = [
        (tw, i, side) for tw in enumerate_rb(n) for i in range(1, n) for side in bimodule.SIDES
        if bimodule.act_KLgen({tw: ONE}, i, side) != bimodule.act_KLgen_via_T({tw: ONE}, i, side)
    ]
    return not bad, _first(bad)


def check_module_relations(n: int) -> tuple[bool, str]:
    bad = bimodule.bimodule_axiom_violations(n) + bimodule.hecke_relation_violations(n)
    return not bad, _first(bad)


def check_kl_R(n: int) -> tuple[bool, str]:
    for m in range(1, n + 1):
        bimodule.check_kl_table(m)
    good, total = bimodule.literal_nonnegative_fraction(n)
    return True, f"sign-normalized positivity holds; literally nonnegative coefficients: {good}/{total}"


def check_bar(n: int) -> tuple[bool, str]:
    for tw in enumerate_rb(n):
        assert bimodule.bar_R(bimodule.bar_R({tw: ONE}, n), n) == {tw: ONE}, tw
    for k in range(n + 1):
        base = bimodule.base_kl(n, k)
        assert bimodule.bar_R(base, n) == base
    return True, "bar o bar = id; base elements fixed"


def check_order_independent(n: int, seed: int) -> tuple[bool, str]:
    ref = bimodule.kl_basis_R(n)
    ok = ref == bimodule.kl_basis_R(n, "last") == bimodule.kl_basis_R(n, seed)
    ok = ok and bimodule.bar_table(n) == bimodule.bar_table(n, "last") == bimodule.bar_table(n, seed)
    return ok, "first / last / seeded predecessor choices"


def check_w_graph(n: int) -> tuple[bool, str]:
    bad = bimodule.graph_reproduces_action(n)
    return not bad, _first(bad) or f"{len(bimodule.w_graph(n)['edges'])} edges"


def check_classical_block(n: int) -> tuple[bool, str]:
    return bimodule.classical_block_matches(n), "beta = empty block vs classical table"


def check_anti_automorphism(n: int) -> tuple[bool, str]:
    bad = bimodule.anti_automorphism_violations(n)
    return not bad, _first(bad, rbperm.to_text)


def check_cell_refinement(n: int) -> tuple[bool, str]:
    bad = []
    for m in range(1, n + 1):
        bad += bimodule.cell_refinement_violations(m)
    return not bad, _first(bad)


def check_cells_n3() -> tuple[bool, str]:
    micro = mrsk.microlocal_cells(3)
    kl = bimodule.kl_cells(3, "bimodule")
    nonempty = bimodule.cell_size_multiset(3, True)
    empty = bimodule.cell_size_multiset(3, False)
    ok = (
        len(micro) == 16 and len(kl) == 16
        and nonempty == [1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 4, 4, 4] and empty == [1, 1, 4]
        and laurent_hecke.same_partition(micro, kl)
    )
    return ok, f"{len(kl)} bimodule KL cells; sizes beta!=0 {nonempty}, beta=0 {empty}"


def conjecture_cells(n: int) -> tuple[bool, str]:
    bad = [(m, side) for m in range(1, n + 1) for side in ("left", "right", "bimodule") if not bimodule.cells_coincide(m, side)]
    return not bad, _first(bad) or f"KL cells = microlocal cells for N <= {n}"


def check_fourier_combinatorics(n: int) -> tuple[bool, str]:
    for m in range(1, n + 1):
        for tw in enumerate_rb(m):
            ftw = rbperm.fourier(tw)
            assert rbperm.fourier(ftw) == tw and rbperm.is_valid(*ftw)
            out, fout = mrsk.mirabolic_rsk(tw), mrsk.mirabolic_rsk(ftw)
            assert mrsk.fourier_image(out) == (fout.triple, fout.t1, fout.t2), tw
            assert mrsk.theta_star(tw) == fout.theta, tw
    return True, f"N <= {n}"


def check_fourier_cells(n: int) -> tuple[bool, str]:
    for m in range(1, n + 1):
        for cells in (mrsk.microlocal_cells(m), bimodule.kl_cells(m, "bimodule")):
            image = {frozenset(map(rbperm.fourier, c)) for c in cells}
            assert image == {frozenset(c) for c in cells}, m
        assert not bimodule.fourier_violations(m), m
    return True, f"cells permuted and KL structure constants compatible, N <= {n}"


def check_length_dim(n: int, p: int) -> tuple[bool, str]:
    bad = []
    for m in range(1, n + 1):
        dim = m * (m - 1) // 2
        bad += [tw for tw in enumerate_rb(m) if rbperm.length(tw) + dim != microlab.orbit_dim(tw, p)]
    return not bad, _first(bad, rbperm.to_text)


def check_classify(n: int, p: int) -> tuple[bool, str]:
    count = 0
    for total in range(n + 1):
        for a in range(total + 1):
            for lam in young.partitions(a):
                for mu in young.partitions(total - a):
                    u, v = microlab.construct_nv(lam, mu, p)
                    assert microlab.classify_nv(u, v, p) == (lam, mu), (lam, mu)
                    count += 1
    return True, f"{count} pairs (lambda, mu)"


def check_upsilon(n: int, p: int, seed: int, trials: int) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    bad = [
        m for m in range(1, n + 1) for _ in range(trials)
        if not microlab.upsilon_consistent(*microlab.random_nilpotent_pair(m, p, rng), p)
    ]
    return not bad, _first(bad) or f"{trials} random pairs per N <= {n}"


def check_monte_carlo(n: int, p: int, seed: int, trials: int = 20) -> tuple[bool, str]:
    bad = [
        tw for m in range(1, n + 1) for tw in enumerate_rb(m)
        if microlab.empirical_triple(tw, p, trials, seed) != mrsk.mirabolic_rsk(tw).triple
    ]
    return not bad, _first(bad, rbperm.to_text)


def report_image_dimension(n: int, p: int, seed: int) -> tuple[bool, str]:
    best: dict = {}
    for m in range(1, n + 1):
        for tw in enumerate_rb(m):
            t = mrsk.mirabolic_rsk(tw).triple
            best[t] = max(best.get(t, 0), microlab.image_dimension(tw, p, seed))
    bad = [(t, d) for t, d in best.items() if d != sum(t[0]) ** 2 - young.n_stat(t[0]) - young.n_stat(t[2])]
    return not bad, _first(bad) or f"dim Z^t = N^2 - n(nu) - n(nu') on {len(best)} triples"


def report_normal_weights(n: int, p: int) -> tuple[bool, str]:
    bad = [tw for m in range(1, n + 1) for tw in enumerate_rb(m) if min(microlab.normal_weights(tw, p), default=1) <= 0]
    return not bad, _first(bad, rbperm.to_text) or "all normal weights positive"


def asymptotic_reports(n: int) -> list[dict]:
    return [bimodule.asymptotic_bimodule(nu, theta) for nu, theta in bimodule.diagonal_triples(n)]


def conjecture_degree(reports: list[dict]) -> tuple[bool, str]:
    bad = [r["triple"] for r in reports if not r["within_a_complement"]]
    n_nu_ok = all(r["within_a_n_nu"] for r in reports)
    return not bad, f"bound with a = N(N-1)/2 - n(nu) fails on {len(bad)} of {len(reports)} cells; with a = n(nu) it {'holds' if n_nu_ok else 'fails'}"


def conjecture_regular(reports: list[dict]) -> tuple[bool, str]:
    bad = [r["triple"] for r in reports if not r["regular_bimodule"]]
    good = {
        (c["bimodule_labels"], c["ring_labels"]) for r in reports for c in r["conventions"] if c["left"] and c["right"]
    }
    common = [c for c in bimodule.ORIENTATIONS if all(
        any((x["bimodule_labels"], x["ring_labels"]) == c and x["left"] and x["right"] for x in r["conventions"]) for r in reports)]
    return not bad, _first(bad) or f"conventions valid on every cell: {common}; on some cell: {sorted(good)}"


# ---------------------------------------------------------------- suites

SUITES = ("young", "rb", "rsk", "hecke", "bimodule", "microlab", "cells", "fourier", "asymptotic")


def run_suite(suite: str, n: int, seed: int = 0, p: int = microlab.DEFAULT_P) -> Report:
    if suite == "all":
        rep = Report("all", n, seed, p)
        for s in SUITES:
            rep.checks += run_suite(s, n, seed, p).checks
        return rep
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    rep = Report(suite, n, seed, p)
    inv, conj = "invariant", "conjecture"
    small = min(n, 4)
    plan: list[tuple[str, str, Callable]] = []
    if suite == "young":
        plan = [("partitions, tableaux, RSK", inv, lambda: check_young(min(n, 6)))]
    elif suite == "rb":
        plan = [("enumeration, length, moves", inv, lambda: check_rb(min(n, 5)))]
    elif suite == "rsk":
        plan = [
            ("worked example N=10", inv, check_worked_example),
            ("injective + rank identity", inv, lambda: check_rsk_bijective(n)),
            ("embedding oracle", inv, lambda: check_rsk_oracle(n)),
            ("inverse RSK", inv, lambda: check_inverse_rsk(n)),
        ]
    elif suite == "hecke":
        plan = [
            ("classical KL basis", inv, lambda: check_classical_kl(small)),
            ("classical cells: RSK vs KL", inv, lambda: check_classical_cells(small)),
            ("J_nu matrix units", inv, lambda: check_j_rings(small)),
        ]
    elif suite == "bimodule":
        plan = [
            ("H table = converted T table", inv, lambda: check_tables_agree(small)),
            ("F_q convolution", inv, lambda: check_fq(tuple(c for c in FQ_CASES if c[0] <= n))),
            ("bimodule axiom + Hecke relations", inv, lambda: check_module_relations(small)),
            ("KL table invariants", inv, lambda: check_kl_R(small)),
            ("bar involution", inv, lambda: check_bar(small)),
            ("order independence", inv, lambda: check_order_independent(small, seed)),
            ("W-graph reproduces action", inv, lambda: check_w_graph(small)),
            ("classical block", inv, lambda: check_classical_block(small)),
            ("anti-automorphism", inv, lambda: check_anti_automorphism(small)),
        ]
    elif suite == "microlab":
        plan = [
            ("length + n = orbit dim", inv, lambda: check_length_dim(small, p)),
            ("classify o construct", inv, lambda: check_classify(min(n, 6), p)),
            ("upsilon consistency", inv, lambda: check_upsilon(min(n, 6), p, seed, 1000)),
            ("generic conormal types", inv, lambda: check_monte_carlo(min(n, 5), p, seed)),
            ("image dimension formula", conj, lambda: report_image_dimension(min(n, 3), p, seed)),
            ("normal weights positive", conj, lambda: report_normal_weights(small, p)),
        ]
    elif suite == "cells":
        plan = [("microlocal cells refine KL cells", inv, lambda: check_cell_refinement(small))]
        if n >= 3:
            plan.append(("N=3 cell census", inv, check_cells_n3))
        plan.append(("KL cells = microlocal cells", conj, lambda: conjecture_cells(small)))
    elif suite == "fourier":
        plan = [
            ("involution, tableaux, theta*", inv, lambda: check_fourier_combinatorics(min(n, 5))),
            ("cells and structure constants", inv, lambda: check_fourier_cells(small)),
        ]
    elif suite == "asymptotic":
        reports = []
        plan = [
            ("degree bound", conj, lambda: conjecture_degree(reports or reports.extend(asymptotic_reports(small)) or reports)),
            ("regular J-bimodule", conj, lambda: conjecture_regular(reports or reports.extend(asymptotic_reports(small)) or reports)),
        ]
    for name, kind, fn in plan:
        rep.checks.append(_run(suite, name, kind, fn))
    return rep


def conjecture_report(n: int) -> dict:
    """Consolidated statuses with witnesses."""
    cells = {}
    for side in ("left", "right", "bimodule"):
        kl = {frozenset(c) for c in bimodule.kl_cells(n, side)}
        micro = {frozenset(c) for c in mrsk.microlocal_cells(n, "two_sided" if side == "bimodule" else side)}
        witness = sorted((sorted(map(rbperm.to_text, c)) for c in kl ^ micro))[:3]
        cells[side] = {"status": "holds" if kl == micro else "fails", "witnesses": witness}
    reports = asymptotic_reports(n)
    return {
        "n": n,
        "kl_cells_equal_microlocal_cells": cells,
        "degree_bound": [
            {"triple": r["triple"], "a_complement": r["a_complement"], "a_n_nu": r["a_n_nu"],
             "max_degree": max(r["max_degree_left"] or 0, r["max_degree_right"] or 0),
             "status_complement": "holds" if r["within_a_complement"] else "fails",
             "status_n_nu": "holds" if r["within_a_n_nu"] else "fails"}
            for r in reports
        ],
        "regular_bimodule": [
            {"triple": r["triple"], "status": "holds" if r["regular_bimodule"] else "fails", "conventions": r["conventions"]}
            for r in reports
        ],
    }
