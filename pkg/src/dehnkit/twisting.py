"""Dehn-twist surgery on embedded curves, twist words, identity testing.

The twist D_a^n(b) is built literally: put the pair in minimal position, then
reroute every strand of b through an annulus neighbourhood of a as a spiral
winding |n| times. Spirals are realized with exact rational offsets near a's
edge events, so the result validates as an embedded curve; a final sweep
removes edge-crossing pairs the surgery left reducible.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby

from .calculus import is_essential
from .errors import ComputationError, PreconditionError
from .overlay import JointSystem, curves_isotopic, is_boundary_parallel
from .overlay import minimal_position as _joint_minimal_position
from .surface import EmbeddedCurve

__all__ = [
    "TWIST_SIGN",
    "TwistWord",
    "act_on_system",
    "apply_twist",
    "apply_word",
    "is_identity_on_system",
]

# Global handedness of a positive twist, calibrated on the square torus:
# a positive twist along (1,0) sends (0,1) to (1,1).
TWIST_SIGN = 1


def _drop_reducible_pairs(events: list) -> list:
    """Remove adjacent (e,d),(e,-d) event pairs nothing else blocks.

    Such a pair is a detour across edge e and back; it slides off whenever no
    other event of the curve sits between the two positions on e.
    """
    evs = list(events)
    changed = True
    while changed and len(evs) > 2:
        changed = False
        n = len(evs)
        for i in range(n):
            j = (i + 1) % n
            e1, d1, p1 = evs[i]
            e2, d2, p2 = evs[j]
            if e1 != e2 or d1 != -d2:
                continue
            lo, hi = min(p1, p2), max(p1, p2)
            blocked = any(
                e == e1 and lo < p < hi
                for t, (e, _d, p) in enumerate(evs)
                if t != i and t != j
            )
            if not blocked:
                for t in sorted((i, j), reverse=True):
                    del evs[t]
                changed = True
                break
    if len(evs) == 2 and evs[0][0] == evs[1][0] and evs[0][1] == -evs[1][1]:
        raise ComputationError("twist image collapsed to a trivial circle")
    return evs


def apply_twist(a: EmbeddedCurve, n: int, b: EmbeddedCurve) -> EmbeddedCurve:
    """Image of b under the n-th power of the twist along a."""
    if a.surface != b.surface:
        raise PreconditionError("curves live on different surfaces")
    if not is_essential(a) or not is_essential(b):
        raise PreconditionError("twisting needs essential curves")
    if n == 0:
        return b
    _, _, system = _joint_minimal_position(a, b)
    crossings = system.crossings_between(0, 1)
    if not crossings:
        return b

    surf = a.surface
    chir = surf.chirality
    A = system.events[0]
    B = system.events[1]
    m = len(A)
    nu = n * TWIST_SIGN * chir
    sigma = 1 if nu > 0 else -1
    wraps = abs(nu)

    # Annulus coordinate of each crossing: order along a, placed strictly
    # inside its gap. Only the cyclic order matters.
    theta = {}
    order_a = system.crossing_order_along(0)
    for g, grp in groupby(order_a, key=lambda x: x.gap_i):
        grp = list(grp)
        for r, x in enumerate(grp):
            theta[x] = g + Fraction(r + 1, len(grp) + 1)

    # Safe offset radius around each event of a: half the gap to the nearest
    # other marked point on the same edge in the joint frame.
    on_edge = defaultdict(list)
    for ci in (0, 1):
        for e, _d, p in system.events[ci]:
            on_edge[e].append(p)
    for e in on_edge:
        on_edge[e].sort()
    radius = []
    for e, _d, p in A:
        pts = on_edge[e]
        k = bisect_left(pts, p)
        lo = pts[k - 1] if k > 0 else Fraction(0)
        hi = pts[k + 1] if k + 1 < len(pts) else Fraction(1)
        radius.append(min(p - lo, hi - p) / 2)

    def spiral_block(x) -> list:
        # Strand of b at crossing x, rerouted to wind `wraps` times around a.
        mu = x.sign * chir  # +1: strand passes right-to-left across a
        se = mu * sigma  # sign of the strand's motion along a's direction
        g = x.gap_i
        th = theta[x]
        out = []
        for t in range(wraps * m):
            idx = (g + 1 + t) % m if se > 0 else (g - t) % m
            e, d, p = A[idx]
            w = t // m if mu > 0 else wraps - 1 - t // m
            phi = (sigma * (idx - th)) % m / m
            z = (phi + w) / wraps
            pos = p + d * chir * (2 * z - 1) * radius[idx]
            out.append((e, se * d, pos))
        return out

    by_gap = defaultdict(list)
    for x in system.crossing_order_along(1):
        if x in theta:  # only crossings with a (always true for a pair)
            by_gap[x.gap_j].append(x)

    events = []
    for g in range(len(B)):
        events.append(B[g])
        for x in by_gap.get(g, ()):
            events.extend(spiral_block(x))

    events = _drop_reducible_pairs(events)
    return EmbeddedCurve(surf, tuple(events), oriented=b.oriented).renormalized()


@dataclass(frozen=True)
class TwistWord:
    """Formal product of twist powers, applied left to right.

    Stored uncollapsed: a word may contain a letter and its inverse; semantic
    equality is is_identity_on_system against a filling system.
    """

    letters: tuple[tuple[EmbeddedCurve, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        surfaces = set()
        for c, k in self.letters:
            if not isinstance(k, int) or isinstance(k, bool) or k == 0:
                raise PreconditionError("twist exponents must be nonzero integers")
            if not is_essential(c):
                raise PreconditionError("twist curve is not essential")
            surfaces.add(c.surface)
        if len(surfaces) > 1:
            raise PreconditionError("twist letters live on different surfaces")

    @property
    def surface(self):
        return self.letters[0][0].surface if self.letters else None

    @property
    def is_positive(self) -> bool:
        return all(k > 0 for _, k in self.letters)

    @property
    def twist_count(self) -> int:
        return sum(abs(k) for _, k in self.letters)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((c, -k) for c, k in reversed(self.letters)))

    def __add__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)


def apply_word(w: TwistWord, c: EmbeddedCurve) -> EmbeddedCurve:
    if w.letters and w.surface != c.surface:
        raise PreconditionError("word and curve live on different surfaces")
    for curve, k in w.letters:
        c = apply_twist(curve, k, c)
    return c


def act_on_system(w: TwistWord, system) -> list:
    return [apply_word(w, c) for c in system]


def _system_fills(surface, curves) -> bool:
    """Complement of the non-peripheral members is discs and boundary collars."""
    kept = [c for c in curves if not is_boundary_parallel(c)]
    if not kept:
        return False
    joint = JointSystem(surface, kept)
    boundary = surface.boundary_edges
    for region in joint.regions:
        if region.is_disc:
            continue
        if region.is_annulus:
            touches = any(
                joint.dart_label(did)[0] == "B"
                and joint.dart_label(did)[1] in boundary
                for circuit in region.circuits
                for did in circuit
            )
            if touches:
                continue
        return False
    return True


def is_identity_on_system(w: TwistWord, filling) -> bool:
    """Does w fix every curve of a filling system, with orientation?"""
    filling = list(filling)
    if not filling:
        raise PreconditionError("empty curve system")
    surface = filling[0].surface
    if any(c.surface != surface for c in filling):
        raise PreconditionError("system curves live on different surfaces")
    if w.letters and w.surface != surface:
        raise PreconditionError("word acts on a different surface")
    if not _system_fills(surface, filling):
        raise PreconditionError("curve system does not fill the surface")
    for c in filling:
        src = c.with_orientation(True)
        if not curves_isotopic(apply_word(w, src), src):
            return False
    return True
