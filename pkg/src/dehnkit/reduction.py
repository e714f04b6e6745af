"""Positive-twist reduction of a transverse curve pair.

One reduction step finds a simple loop c, assembled from one arc of a and one
arc of b, whose positive twist strictly drops the crossing count with a. The
candidate pool enumerates every splice (crossing pair, either arc of each
curve, either side for the parallel copies) and keeps the first one that
passes the descent test; iterating lands in a terminal class in at most the
initial number of crossings.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import defaultdict
from fractions import Fraction
from itertools import groupby

from .calculus import PairClass, classify_pair
from .calculus import is_essential
from .errors import ComputationError, TerminalPairError, ValidationError
from .overlay import geometric_intersection_number
from .overlay import minimal_position as _joint_minimal_position
from .surface import EmbeddedCurve
from .twisting import TwistWord, apply_twist

__all__ = ["find_reduction_curve", "reduce_pair"]

TERMINAL_TAGS = ("disjoint", "one_point", "two_zero")


def _crossing_params(system, ci):
    """Annulus parameter of each crossing along curve ci (cyclic order only)."""
    params = {}
    order = system.crossing_order_along(ci)
    key = (lambda x: x.gap_i) if ci == 0 else (lambda x: x.gap_j)
    for g, grp in groupby(order, key=key):
        grp = list(grp)
        for r, x in enumerate(grp):
            params[x] = g + Fraction(r + 1, len(grp) + 1)
    return params


def _edge_radius(system):
    on_edge = defaultdict(list)
    for ci in (0, 1):
        for e, _d, p in system.events[ci]:
            on_edge[e].append(p)
    for e in on_edge:
        on_edge[e].sort()

    def radius(e, p):
        pts = on_edge[e]
        k = bisect_left(pts, p)
        lo = pts[k - 1] if k > 0 else Fraction(0)
        hi = pts[k + 1] if k + 1 < len(pts) else Fraction(1)
        return min(p - lo, hi - p) / 2

    return radius


def _arc_indices(n_events, th_from, th_to):
    """Event indices strictly inside the forward cyclic interval."""
    span = (th_to - th_from) % n_events
    out = []
    base = int(th_from) + 1
    for t in range(n_events):
        off = (Fraction(base + t) - th_from) % n_events
        if off < span:
            out.append((base + t) % n_events)
        else:
            break
    return out


def _candidate_events(system, radius, x, y, params_a, params_b, a_fwd, b_fwd, sa, sb):
    """Splice: parallel a-arc from x to y, then parallel b-arc from y to x."""
    chir = system.surface.chirality
    A, B = system.events[0], system.events[1]

    def copy(events, idxs, fwd, side):
        part = []
        for i in idxs:
            e, d, p = events[i]
            pos = p + side * d * chir * radius(e, p) / 2
            part.append((e, d, pos))
        if not fwd:
            part = [(e, -d, pos) for e, d, pos in reversed(part)]
        return part

    if a_fwd:
        a_part = copy(A, _arc_indices(len(A), params_a[x], params_a[y]), True, sa)
    else:
        a_part = copy(A, _arc_indices(len(A), params_a[y], params_a[x]), False, sa)
    if b_fwd:
        b_part = copy(B, _arc_indices(len(B), params_b[y], params_b[x]), True, sb)
    else:
        b_part = copy(B, _arc_indices(len(B), params_b[x], params_b[y]), False, sb)
    return tuple(a_part + b_part)


def _pair_priority(order_a):
    """Unordered crossing pairs, best surgery prospects first.

    Tier 0: adjacent along a with equal signs (splice one short arc of each).
    Tier 1: two apart with equal signs; when adjacent signs alternate this is
    the pair flanking the middle point of the alternating triple, and the
    splice through the far side is the curve that works there.
    Tier 2: everything else, as a safety net.
    """
    n = len(order_a)
    ranked = []
    for i in range(n):
        for d in range(1, n):
            j = (i + d) % n
            if j < i:
                continue
            x, y = order_a[i], order_a[j]
            dist = min(d, n - d)
            if dist == 1 and x.sign == y.sign:
                tier = 0
            elif dist == 2 and x.sign == y.sign:
                tier = 1
            else:
                tier = 2
            ranked.append((tier, i, d, x, y))
    ranked.sort(key=lambda r: r[:3])
    return [(x, y) for _, _, _, x, y in ranked]


def _reduction_step(a: EmbeddedCurve, b: EmbeddedCurve, avoid=()):
    """One strict-descent move: returns (c, twisted b, new count).

    Curves in `avoid` must stay untouched: a candidate is rejected unless it
    misses every one of them up to isotopy.
    """
    _, _, system = _joint_minimal_position(a, b)
    count = system.crossing_count(0, 1)
    order_a = system.crossing_order_along(0)
    params_a = _crossing_params(system, 0)
    params_b = _crossing_params(system, 1)
    radius = _edge_radius(system)
    surf = a.surface

    for x, y in _pair_priority(order_a):
        for a_fwd, b_fwd in ((True, False), (False, True), (True, True), (False, False)):
            for sa in (1, -1):
                for sb in (1, -1):
                    events = _candidate_events(
                        system, radius, x, y,
                        params_a, params_b, a_fwd, b_fwd, sa, sb,
                    )
                    if len(events) < 1:
                        continue
                    try:
                        c = EmbeddedCurve(surf, events, oriented=False)
                    except ValidationError:
                        continue
                    if not is_essential(c):
                        continue
                    if any(geometric_intersection_number(c, fr) for fr in avoid):
                        continue
                    twisted = apply_twist(c, 1, b)
                    new_count = geometric_intersection_number(a, twisted)
                    if new_count < count:
                        return c.renormalized(), twisted, new_count
    raise ComputationError("no splice candidate reduced the crossing count")


def find_reduction_curve(a: EmbeddedCurve, b: EmbeddedCurve, *, avoid=()) -> EmbeddedCurve:
    """A simple loop whose positive twist strictly reduces |b ∩ a|."""
    cls = classify_pair(a, b)
    if cls.tag in TERMINAL_TAGS:
        raise TerminalPairError(f"pair is terminal ({cls.tag})")
    c, _, _ = _reduction_step(a, b, avoid)
    return c


def reduce_pair(a: EmbeddedCurve, b: EmbeddedCurve, *, avoid=()):
    """Drive b to a terminal class against a using positive twists only.

    Returns (word, final b, PairClass); word length never exceeds the initial
    crossing count and every step strictly decreases it.
    """
    cls = classify_pair(a, b)
    letters = []
    b_cur = b
    bound = cls.count
    while cls.tag not in TERMINAL_TAGS:
        c, b_cur, new_count = _reduction_step(a, b_cur, avoid)
        letters.append((c, 1))
        if new_count >= cls.count:
            raise ComputationError("reduction step failed to descend")
        if len(letters) > bound:
            raise ComputationError("reduction exceeded the crossing bound")
        cls = classify_pair(a, b_cur)
    return TwistWord(tuple(letters)), b_cur, cls
