"""Mirabolic RSK: colored permutations -> (nu, theta, nu'), T1, T2.

The insertion algorithm keeps a tableau T and an auxiliary row r.  The row
starts out as N "@" symbols that are larger than every letter; here they are
the sentinels N+1, ..., 2N.  Sentinels only ever leave r from the left end of
its sentinel block, so they enter T in increasing order and behave like equal
symbols that never bump each other.  That ordering is asserted on every run.

`rsk_via_embedding` is a second, independent route: it builds a permutation
of {1..2N} from the enlarged colored permutation in RB_{3N} and runs classical
RSK on it.  Both routes must agree.
"""
from __future__ import annotations

from bisect import bisect_right
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import cache
from typing import Iterable, Sequence

from . import rbperm
from .rbperm import ColoredPermutation, enumerate_rb, fourier, is_valid
from .young import (
    Partition,
    Tableau,
    add_cell,
    classical_rsk,
    evacuation,
    is_standard,
    normalize,
    part,
    remove_corner,
    row_insert,
    row_of,
    shape,
)

Triple = tuple[Partition, Partition, Partition]


@dataclass(frozen=True)
class MirabolicOutput:
    nu: Partition
    theta: Partition
    nu_prime: Partition
    t1: Tableau
    t2: Tableau
    theta_star: Partition

    @property
    def triple(self) -> Triple:
        return self.nu, self.theta, self.nu_prime

    def key(self) -> tuple:
        """Everything except theta_star, which is determined by the rest."""
        return self.triple, self.t1, self.t2

    def to_json(self) -> dict:
        return {
            "nu": list(self.nu),
            "theta": list(self.theta),
            "nu_prime": list(self.nu_prime),
            "T1": [list(r) for r in self.t1],
            "T2": [list(r) for r in self.t2],
            "theta_star": list(self.theta_star),
        }


def _strip(tableau: Tableau, n: int) -> Tableau:
    return tuple(r for r in (tuple(x for x in row if x <= n) for row in tableau) if r)


def _run(tw: ColoredPermutation, trace: list | None = None) -> MirabolicOutput:
    w, beta = tw
    if not is_valid(w, beta):
        raise ValueError(f"invalid colored permutation {tw}")
    n = len(w)
    t: Tableau = ()
    rec: Tableau = ()
    r = list(range(n + 1, 2 * n + 1))
    next_sentinel = n + 1

    def insert(x: int) -> tuple[int, int]:
        nonlocal t, next_sentinel
        if x > n:
            assert x == next_sentinel, "sentinels must enter the tableau in increasing order"
            next_sentinel += 1
        t, cell = row_insert(t, x)
        return cell

    for i in range(1, n + 1):
        x = w[i - 1]
        if i not in beta:
            k = bisect_right(r, x)
            r[k], x = x, r[k]
        cell = insert(x)
        rec = add_cell(rec, cell, i)
        if trace is not None:
            trace.append({"step": i, "T": t, "r": tuple(r)})
    after_n = t
    flush = []
    for x in r:
        insert(x)
        if x <= n:
            flush.append(t)
    flush.append(t)
    if trace is not None:
        trace.append({"step": n + 1, "T": t, "r": (), "substates": flush})
    t2 = _strip(t, n)
    theta = shape(t)[1:]
    out = MirabolicOutput(shape(rec), theta, shape(t2), rec, t2, shape(_strip(after_n, n)))
    if trace is not None:
        trace.append({"step": n + 2, "T1": out.t1, "T2": out.t2})
    return out


@cache
def mirabolic_rsk(tw: ColoredPermutation) -> MirabolicOutput:
    return _run(ColoredPermutation(tuple(tw[0]), frozenset(tw[1])))


def mirabolic_rsk_trace(tw: ColoredPermutation) -> list[dict]:
    """States after each step.

    Step N+1 is the flush of r into T; its sub-states are taken after each
    letter and once more at the end.  Step N+2 holds the pair (T1, T2).
    """
    trace: list[dict] = []
    _run(tw, trace)
    return trace


def render_entry(x: int, n: int) -> str:
    return "@" if x > n else str(x)


def render_trace(trace: list[dict], n: int) -> list[str]:
    lines = []
    for state in trace:
        step = state["step"]
        if "T1" in state:
            lines.append(f"{step}. T1 = {_render(state['T1'], n)}   T2 = {_render(state['T2'], n)}")
        elif "substates" in state:
            subs = "  ".join(_render(s, n) for s in state["substates"])
            lines.append(f"{step}. {subs}")
        else:
            letters = [str(x) for x in state["r"] if x <= n]
            row = " ".join(letters + ["@ ..."])
            lines.append(f"{step}. T = {_render(state['T'], n)}   r = {row}")
    return lines


def _render(tableau: Tableau, n: int) -> str:
    return "/".join(" ".join(render_entry(x, n) for x in row) for row in tableau)


# ---------------------------------------------------------------- embedding oracle

def plus_embedding(tw: ColoredPermutation) -> ColoredPermutation:
    """The colored permutation of 3N letters used by the embedding route."""
    w, beta = tw
    n = len(w)
    wp = [0] * (3 * n)
    for i in range(1, 3 * n + 1):
        if i <= n:
            wp[i - 1] = i + 2 * n
        elif i <= 2 * n:
            wp[i - 1] = w[i - n - 1] + n
        else:
            wp[i - 1] = i - 2 * n
    return ColoredPermutation(tuple(wp), frozenset(b + n for b in beta))


def left_to_right_minima_layers(w: Sequence[int], positions: Iterable[int]) -> list[list[int]]:
    """Peel off positions with no earlier position of smaller value, repeatedly."""
    rest = sorted(positions)
    layers = []
    while rest:
        layer, best = [], None
        for i in rest:
            if best is None or w[i - 1] < best:
                layer.append(i)
                best = w[i - 1]
        layers.append(layer)
        rest = [i for i in rest if i not in layer]
    return layers


def rsk_via_embedding(tw: ColoredPermutation) -> MirabolicOutput:
    n = len(tw.w)
    wp, bp = plus_embedding(tw)
    layers = left_to_right_minima_layers(wp, set(range(1, 3 * n + 1)) - bp)
    w1 = {}
    for i in bp:
        if i > n:
            w1[i] = wp[i - 1]
    for layer in layers:
        for a, b in zip(layer, layer[1:]):
            if b > n:
                w1[b] = wp[a - 1]
    assert sorted(w1) == list(range(n + 1, 3 * n + 1)), "w'_1 must be defined on N+1..3N"
    assert sorted(w1.values()) == list(range(n + 1, 3 * n + 1)), "w'_1 must permute N+1..3N"
    word = [w1[i] - n for i in range(n + 1, 3 * n + 1)]
    p, q = classical_rsk(word)
    t1, t2 = _strip(q, n), _strip(p, n)
    theta = shape(q)[1:]
    nu, nup = shape(t1), shape(t2)
    return MirabolicOutput(nu, theta, nup, t1, t2, theta_star_formula(nu, theta, nup))


# ---------------------------------------------------------------- derived data

def theta_star_formula(nu: Partition, theta: Partition, nup: Partition) -> Partition:
    """theta*_i = min(nu_i, nu'_i) + max(nu_{i+1}, nu'_{i+1}) - theta_i."""
    m = max(len(nu), len(nup)) + 1
    return normalize([
        min(part(nu, i), part(nup, i)) + max(part(nu, i + 1), part(nup, i + 1)) - part(theta, i)
        for i in range(1, m + 1)
    ])


def theta_star(tw: ColoredPermutation) -> Partition:
    out = mirabolic_rsk(tw)
    via_formula = theta_star_formula(*out.triple)
    assert via_formula == out.theta_star, (tw, via_formula, out.theta_star)
    return out.theta_star


@cache
def rsk_table(n: int) -> dict[tuple, ColoredPermutation]:
    table = {}
    for tw in enumerate_rb(n):
        key = mirabolic_rsk(tw).key()
        if key in table:
            raise AssertionError(f"mirabolic RSK not injective: {tw} and {table[key]}")
        table[key] = tw
    return table


TABLE_LIMIT = 6


def inverse_rsk(triple: Triple, t1: Sequence[Sequence[int]], t2: Sequence[Sequence[int]]) -> ColoredPermutation:
    """The colored permutation with the given RSK data.

    Up to TABLE_LIMIT this is a lookup in the inverted forward table; beyond
    that the insertion steps are undone by `reverse_insertion`.
    """
    t1 = tuple(tuple(r) for r in t1)
    t2 = tuple(tuple(r) for r in t2)
    nu, theta, nup = (normalize(x) for x in triple)
    key = ((nu, theta, nup), t1, t2)
    n = sum(nu)
    tw = rsk_table(n).get(key) if n <= TABLE_LIMIT else reverse_insertion(*key)
    if tw is None:
        raise ValueError(f"not in the image of mirabolic RSK: {key}")
    return tw


def _strip_removals(final: Partition, n: int) -> Iterable[list[int]]:
    """Ways to remove a horizontal strip of n cells from `final` (cells per row)."""
    rows = len(final)

    def go(j: int, left: int, acc: list[int]):
        if j == rows:
            if left == 0:
                yield list(acc)
            return
        below = part(final, j + 2)
        for c in range(min(left, final[j] - below), -1, -1):
            acc.append(c)
            yield from go(j + 1, left - c, acc)
            acc.pop()

    yield from go(0, n, [])


def reverse_insertion(triple: Triple, t1: Tableau, t2: Tableau) -> ColoredPermutation | None:
    """Undo the flush and the N insertion steps; None if nothing maps to the data."""
    nu, theta, nup = triple
    n = sum(nu)
    if shape(t1) != nu or shape(t2) != nup or n != sum(nup):
        return None
    final = normalize((2 * n - sum(theta),) + tuple(theta))
    if any(part(final, j) < part(nup, j) for j in range(1, len(nup) + 1)):
        return None
    # sentinel cells form a horizontal strip, labelled left to right
    cells = sorted(((c, j) for j in range(len(final)) for c in range(part(nup, j + 1), final[j])))
    if len({c for c, _ in cells}) != len(cells):
        return None
    rows = [list(r) for r in t2] + [[] for _ in range(len(final) - len(t2))]
    for label, (c, j) in enumerate(cells, start=n + 1):
        rows[j].append(label)
    full = tuple(tuple(r) for r in rows)
    step_row = {x: j + 1 for j, row in enumerate(t1) for x in row}

    def undo_steps(t: Tableau, r: list[int], i: int, w: list[int], beta: set[int]):
        if i == 0:
            if not t and r == list(range(n + 1, 2 * n + 1)):
                yield tuple(w), frozenset(beta)
            return
        t_prev, x = remove_corner(t, step_row[i])
        if x <= n:
            w[i - 1] = x
            beta.add(i)
            yield from undo_steps(t_prev, r, i - 1, w, beta)
            beta.discard(i)
        k = bisect_right(r, x) - 1
        if k >= 0 and r[k] <= n and r[k] < x:
            w[i - 1] = r[k]
            yield from undo_steps(t_prev, r[:k] + [x] + r[k + 1:], i - 1, w, beta)

    for counts in _strip_removals(final, n):
        order = sorted((c, j) for j, cnt in enumerate(counts) for c in range(final[j] - cnt, final[j]))
        t, r = full, []
        for c, j in reversed(order):
            t, x = remove_corner(t, j + 1)
            r.append(x)
        r.reverse()
        if shape(t) != nu or any(r[k] >= r[k + 1] for k in range(n - 1)):
            continue
        for w, beta in undo_steps(t, r, n, [0] * n, set()):
            if sorted(w) != list(range(1, n + 1)) or not is_valid(w, beta):
                continue
            tw = ColoredPermutation(w, beta)
            if mirabolic_rsk(tw).key() == (triple, t1, t2):
                return tw
    return None


def microlocal_cells(n: int, side: str = "two_sided") -> list[list[ColoredPermutation]]:
    """RB_N grouped by t, (t, T1) or (t, T2); cells and members keep enumeration order."""
    groups: dict[tuple, list] = defaultdict(list)
    for tw in enumerate_rb(n):
        out = mirabolic_rsk(tw)
        if side == "two_sided":
            key = out.triple
        elif side == "left":
            key = (out.triple, out.t1)
        elif side == "right":
            key = (out.triple, out.t2)
        else:
            raise ValueError(side)
        groups[key].append(tw)
    return list(groups.values())


def k_orbit(tw: ColoredPermutation) -> frozenset[ColoredPermutation]:
    n = len(tw.w)
    seen = {tw}
    todo = deque([tw])
    while todo:
        x = todo.popleft()
        for i in range(1, n - 1):
            y = rbperm.k_move(x, i)
            if y is not None and y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


def phi_prime(tableau: Tableau, i: int) -> bool:
    n = sum(map(len, tableau))
    if not 1 <= i < n:
        raise IndexError(i)
    return row_of(tableau, i) < row_of(tableau, i + 1)


def swap_entries(tableau: Tableau, a: int, b: int) -> Tableau:
    return tuple(tuple(b if x == a else a if x == b else x for x in row) for row in tableau)


def _kprime_forward(tableau: Tableau, i: int) -> Tableau | None:
    r = [row_of(tableau, i + k) for k in range(3)]
    if r[2] <= r[0] < r[1]:
        return swap_entries(tableau, i + 1, i + 2)
    if r[0] < r[2] <= r[1]:
        return swap_entries(tableau, i, i + 1)
    return None


def kprime_move(tableau: Tableau, i: int) -> Tableau | None:
    n = sum(map(len, tableau))
    if not 1 <= i <= n - 2:
        raise IndexError(i)
    fwd = _kprime_forward(tableau, i)
    if fwd is not None:
        return fwd
    for cand in (swap_entries(tableau, i + 1, i + 2), swap_entries(tableau, i, i + 1)):
        if is_standard(cand) and _kprime_forward(cand, i) == tableau:
            return cand
    return None


def fourier_image(out: MirabolicOutput) -> tuple:
    """Predicted RSK data of fourier(tw): ((nu, theta*, nu'), evac T1, evac T2).

    The dual tableau of a flag under V -> V* is the Schutzenberger evacuation;
    shapes are unchanged.
    """
    return (out.nu, out.theta_star, out.nu_prime), evacuation(out.t1), evacuation(out.t2)
