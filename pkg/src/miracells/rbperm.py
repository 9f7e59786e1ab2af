"""Colored permutations: pairs (w, beta) indexing GL(V)-orbits on Fl x Fl x V.

w is a permutation in one-line notation with values 1..N, beta a frozenset of
positions.  The pair is valid when every position i outside beta and every j
inside beta satisfy i > j or w(i) > w(j).  Validity, the sigma <-> beta
translation, the length grading, the descent sets Phi_i, the three-letter
moves K_i, the Fourier involution and the Demazure-style star product live
here.  The right T-action case table (`right_case`) also lives here so that
`star` does not depend on the Hecke module.
"""
from __future__ import annotations

from functools import cache
from itertools import combinations, permutations
from typing import Iterable, NamedTuple, Sequence


class ColoredPermutation(NamedTuple):
    w: tuple[int, ...]
    beta: frozenset[int]

    @property
    def n(self) -> int:
        return len(self.w)

    def __str__(self) -> str:
        return to_text(self)


CP = ColoredPermutation


def make(w: Iterable[int], beta: Iterable[int] = ()) -> ColoredPermutation:
    return ColoredPermutation(tuple(w), frozenset(beta))


def is_valid(w: Sequence[int], beta: Iterable[int]) -> bool:
    n = len(w)
    beta = set(beta)
    if sorted(w) != list(range(1, n + 1)) or not beta <= set(range(1, n + 1)):
        return False
    for i in range(1, n + 1):
        if i in beta:
            continue
        for j in beta:
            if i < j and w[i - 1] < w[j - 1]:
                return False
    return True


def sigma_of(tw: ColoredPermutation) -> frozenset[int]:
    w, beta = tw
    return frozenset(
        i for i in beta
        if not any(j > i and w[j - 1] > w[i - 1] for j in beta)
    )


def beta_of(w: Sequence[int], sigma: Iterable[int]) -> frozenset[int]:
    sigma = sorted(sigma)
    for a, b in zip(sigma, sigma[1:]):
        if w[a - 1] < w[b - 1]:
            raise ValueError(f"{sigma} is not a decreasing subsequence of {tuple(w)}")
    return frozenset(
        i for i in range(1, len(w) + 1)
        if any(j >= i and w[j - 1] >= w[i - 1] for j in sigma)
    )


def _decreasing_position_sets(w: Sequence[int]) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = [()]

    def extend(prefix: tuple[int, ...]) -> None:
        last = prefix[-1]
        for j in range(last + 1, len(w) + 1):
            if w[j - 1] < w[last - 1]:
                out.append(prefix + (j,))
                extend(prefix + (j,))

    for i in range(1, len(w) + 1):
        out.append((i,))
        extend((i,))
    return out


@cache
def enumerate_rb(n: int) -> tuple[ColoredPermutation, ...]:
    """All valid pairs, lexicographic in (w, sorted beta)."""
    out = []
    for w in permutations(range(1, n + 1)):
        betas = sorted(tuple(sorted(beta_of(w, s))) for s in _decreasing_position_sets(w))
        out.extend(ColoredPermutation(w, frozenset(b)) for b in betas)
    return tuple(out)


def enumerate_rb_brute(n: int) -> list[ColoredPermutation]:
    """Filter of all (w, beta) by `is_valid`; used as an oracle."""
    out = []
    for w in permutations(range(1, n + 1)):
        for k in range(n + 1):
            for b in combinations(range(1, n + 1), k):
                if is_valid(w, b):
                    out.append(ColoredPermutation(w, frozenset(b)))
    return sorted(out, key=sort_key)


def sort_key(tw: ColoredPermutation) -> tuple:
    return tw.w, tuple(sorted(tw.beta))


def perm_inverse(w: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(w)
    for i, x in enumerate(w, start=1):
        inv[x - 1] = i
    return tuple(inv)


def inverse(tw: ColoredPermutation) -> ColoredPermutation:
    w, beta = tw
    return ColoredPermutation(perm_inverse(w), frozenset(w[i - 1] for i in beta))


def coxeter_length(w: Sequence[int]) -> int:
    return sum(1 for a, b in combinations(w, 2) if a > b)


def length(tw: ColoredPermutation) -> int:
    """l(w) + #{i : some i' in beta has i <= i' and w(i) <= w(i')}."""
    w, beta = tw
    covered = sum(
        1 for i in range(1, len(w) + 1)
        if any(i <= j and w[i - 1] <= w[j - 1] for j in beta)
    )
    return coxeter_length(w) + covered


def length_winv_variant(tw: ColoredPermutation) -> int:
    """The same count with the roles of positions and values exchanged."""
    return length(inverse(tw))


def swap(x: int, i: int) -> int:
    return i + 1 if x == i else i if x == i + 1 else x


def right_mul_s(tw: ColoredPermutation, i: int) -> ColoredPermutation:
    """tw s_i = (w s_i, s_i(beta))."""
    w = list(tw.w)
    w[i - 1], w[i] = w[i], w[i - 1]
    return ColoredPermutation(tuple(w), frozenset(swap(b, i) for b in tw.beta))


def left_mul_s(tw: ColoredPermutation, i: int) -> ColoredPermutation:
    """s_i tw = (s_i w, beta)."""
    return ColoredPermutation(tuple(swap(x, i) for x in tw.w), tw.beta)


def toggle(tw: ColoredPermutation, pos: int) -> ColoredPermutation:
    return ColoredPermutation(tw.w, tw.beta ^ {pos})


def phi(tw: ColoredPermutation, i: int) -> bool:
    w, beta = tw
    if not 1 <= i < len(w):
        raise IndexError(i)
    return w[i - 1] > w[i] and (beta & {i, i + 1}) != {i}


def right_case(tw: ColoredPermutation, i: int, verbatim: bool = False) -> int:
    """Which line of the right T_{s_i} action table applies (1..5).

    For an ascent, line 2 needs i in sigma(tw s) and the toggled element
    (tw s)' to be a valid colored permutation; `verbatim=True` instead tests
    i+1 in sigma(tw s), which breaks the quadratic relation (kept for tests).
    Line 4 is taken whenever a descent is not covered by lines 3 and 5.
    Both choices are checked against finite-field convolution counts in
    `tests/test_bimodule.py`.
    """
    w, beta = tw
    if not 1 <= i < len(w):
        raise IndexError(i)
    if w[i - 1] < w[i]:
        ts = right_mul_s(tw, i)
        if verbatim:
            return 2 if i + 1 in sigma_of(ts) else 1
        partner = toggle(ts, i + 1)
        return 2 if i in sigma_of(ts) and is_valid(*partner) else 1
    if beta & {i, i + 1} == {i}:
        return 3
    sigma = sigma_of(tw)
    if {i, i + 1} <= sigma:
        return 5
    return 4


def right_t_support(tw: ColoredPermutation, i: int, verbatim: bool = False) -> list[ColoredPermutation]:
    case = right_case(tw, i, verbatim)
    ts = right_mul_s(tw, i)
    if case == 1:
        return [ts]
    if case == 2:
        return [ts, toggle(ts, i + 1)]
    tp = toggle(tw, i + 1)
    if case == 3:
        return [tp, right_mul_s(tp, i)]
    if case == 4:
        return [tw, ts]
    return [tw, tp, ts]


def star(tw: ColoredPermutation, i: int, side: str = "right") -> ColoredPermutation:
    """l-maximal element in the support of T_tw T_s (or T_s T_tw)."""
    if side == "left":
        return inverse(star(inverse(tw), i, "right"))
    if side != "right":
        raise ValueError(side)
    if phi(tw, i):
        return tw
    supp = right_t_support(tw, i)
    lengths = sorted((length(x) for x in supp), reverse=True)
    assert len(lengths) == 1 or lengths[0] > lengths[1], (tw, i, supp)
    return max(supp, key=length)


# (w(i), w(i+1), w(i+2)) relative order pattern -> allowed beta n {i,i+1,i+2}
# (as offsets 0,1,2) and the partner rule.  Patterns are the ranks of the
# three values, e.g. (0, 2, 1) means w(i) < w(i+2) < w(i+1).
_KCASES = (
    ((0, 2, 1), (set(), {0}, {0, 2}, {0, 1, 2}), "s_i"),
    ((1, 2, 0), (set(), {2}, {0, 2}, {0, 1, 2}), "s_i+1"),
    ((2, 1, 0), ({0, 2},), "s_i+1"),
    ((1, 2, 0), ({0},), "s_i"),
    ((2, 1, 0), ({0},), "add"),
)


def _pattern(vals: Sequence[int]) -> tuple[int, ...]:
    order = sorted(vals)
    return tuple(order.index(x) for x in vals)


def _kcase_partner(tw: ColoredPermutation, i: int) -> ColoredPermutation | None:
    w, beta = tw
    pat = _pattern(w[i - 1:i + 2])
    local = {b - i for b in beta if i <= b <= i + 2}
    for p, allowed, rule in _KCASES:
        if pat != p or not any(local == set(a) for a in allowed):
            continue
        if rule == "s_i":
            return right_mul_s(tw, i)
        if rule == "s_i+1":
            return right_mul_s(tw, i + 1)
        return ColoredPermutation(w, beta | {i + 1})
    return None


def k_move(tw: ColoredPermutation, i: int) -> ColoredPermutation | None:
    """Partner of tw under the move K_i, or None when no case applies."""
    if not 1 <= i <= len(tw.w) - 2:
        raise IndexError(i)
    fwd = _kcase_partner(tw, i)
    if fwd is not None:
        return fwd
    # reverse direction: tw is the partner of some case
    candidates = [right_mul_s(tw, i), right_mul_s(tw, i + 1)]
    if i + 1 in tw.beta:
        candidates.append(ColoredPermutation(tw.w, tw.beta - {i + 1}))
    for c in candidates:
        if _kcase_partner(c, i) == tw:
            return c
    return None


def longest(n: int) -> tuple[int, ...]:
    return tuple(range(n, 0, -1))


def fourier(tw: ColoredPermutation) -> ColoredPermutation:
    """(w0 w w0, complement of w0(beta))."""
    w, beta = tw
    n = len(w)
    w2 = tuple(n + 1 - w[n - i] for i in range(1, n + 1))
    return ColoredPermutation(w2, frozenset(range(1, n + 1)) - {n + 1 - b for b in beta})


def tw_k(n: int, k: int) -> ColoredPermutation:
    return ColoredPermutation(tuple(range(1, n + 1)), frozenset(range(1, k + 1)))


def to_text(tw: ColoredPermutation) -> str:
    return "w=" + " ".join(map(str, tw.w)) + "; b=" + " ".join(map(str, sorted(tw.beta)))


def validate(w: Sequence[int], beta: Iterable[int]) -> None:
    """Raise ValueError describing the first reason (w, beta) is not in RB_N."""
    n = len(w)
    beta = set(beta)
    if sorted(w) != list(range(1, n + 1)):
        raise ValueError(f"w = {tuple(w)} is not a permutation of 1..{n}")
    outside = sorted(beta - set(range(1, n + 1)))
    if outside:
        raise ValueError(f"beta contains position {outside[0]} outside 1..{n}")
    for i in range(1, n + 1):
        if i in beta:
            continue
        for j in sorted(beta):
            if i < j and w[i - 1] < w[j - 1]:
                raise ValueError(
                    f"invalid pair (i, j) = ({i}, {j}): i is not in beta, j is, "
                    f"but i < j and w(i) = {w[i - 1]} < w(j) = {w[j - 1]}"
                )


def _parse_ints(field: str, text: str, offset: int) -> list[int]:
    out = []
    pos = offset
    text = text.replace(",", " ")
    for token in text.split():
        pos = text.index(token, pos - offset) + offset
        try:
            out.append(int(token))
        except ValueError:
            raise ValueError(f"{field}: expected an integer at column {pos + 1}, got {token!r}") from None
        pos += len(token)
    return out


def from_text(text: str) -> ColoredPermutation:
    """Parse "w=2 1 3; b=2" (commas also separate; b may be omitted or empty)."""
    fields = {}
    offset = 0
    for chunk in text.split(";"):
        if chunk.strip():
            if "=" not in chunk:
                raise ValueError(f"expected key=value at column {offset + 1}: {chunk.strip()!r}")
            key, value = chunk.split("=", 1)
            start = offset + len(key) + 1
            fields[key.strip()] = (value, start)
        offset += len(chunk) + 1
    if "w" not in fields:
        raise ValueError("missing w= field")
    unknown = set(fields) - {"w", "b"}
    if unknown:
        raise ValueError(f"unknown field {sorted(unknown)[0]!r}")
    w = _parse_ints("w", *fields["w"])
    beta = _parse_ints("b", *fields["b"]) if "b" in fields else []
    validate(w, beta)
    return make(w, beta)


def to_json(tw: ColoredPermutation) -> dict:
    return {"w": list(tw.w), "beta": sorted(tw.beta)}


def from_json(obj: dict) -> ColoredPermutation:
    w, beta = list(obj["w"]), list(obj.get("beta", ()))
    validate(w, beta)
    return make(w, beta)
