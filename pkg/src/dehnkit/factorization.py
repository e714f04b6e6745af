"""Positive factorization of twist words over a pants system.

The driver walks the interior pants curves in order. For each one it pulls
the curve back through the map built so far, drives the pullback to a
terminal class with positive twists, matches it back onto the pants curve
(through a connector when they ended up disjoint), and repairs orientation
with the six-letter involution word when needed. What remains after all
pants curves are fixed is a product of twists on the pants curves
themselves; its exponents are read off from how it moves each dual curve.
"""

from __future__ import annotations

from dataclasses import dataclass

from .calculus import (
    classify_pair,
    curves_isotopic,
    geometric_intersection,
    is_separating,
)
from .errors import BudgetExceededError, ComputationError, PreconditionError
from .overlay import JointSystem, connecting_curve
from .presets import PantsSystem
from .reduction import TERMINAL_TAGS, reduce_pair
from .surface import EmbeddedCurve
from .twisting import TwistWord, apply_twist, apply_word

__all__ = [
    "FactorizationResult",
    "factorize",
    "find_connector_curve",
    "fix_orientation",
    "match_curve",
    "solve_pants_exponents",
]


def find_connector_curve(a: EmbeddedCurve, a_prime: EmbeddedCurve,
                         *, budget: int = 800, avoid=()) -> EmbeddedCurve:
    """A simple loop crossing each of a, a_prime exactly once.

    The loop also misses every curve in `avoid`. It is routed through the
    complement of the joint arrangement of all the input curves, so the
    crossing counts hold by construction; the budget caps how many segment
    pairings the router tries before giving up.
    """
    if a.surface is not a_prime.surface and a.surface != a_prime.surface:
        raise PreconditionError("curves live on different surfaces")
    if is_separating(a) or is_separating(a_prime):
        raise PreconditionError("connector endpoints must be non-separating")
    cls = classify_pair(a, a_prime)
    if cls.tag not in ("disjoint", "two_zero"):
        raise PreconditionError(f"pair class {cls.tag} admits no connector step")

    system = JointSystem(a.surface, (a, a_prime, *avoid))
    c = connecting_curve(system, 0, 1, max_candidates=budget)
    if c is None:
        raise BudgetExceededError(
            "no connector routes through the joint complement", budget=budget
        )
    return c


def match_curve(a_prime: EmbeddedCurve, a: EmbeddedCurve,
                *, connector_budget: int = 800, avoid=()) -> TwistWord:
    """All-positive word of at most four letters sending a_prime onto a."""
    for c in (a_prime, a):
        if is_separating(c):
            raise PreconditionError("match_curve requires non-separating curves")
    if curves_isotopic(a_prime.with_orientation(False), a.with_orientation(False)):
        return TwistWord(())
    cls = classify_pair(a_prime, a)
    if cls.tag == "one_point":
        word = TwistWord(((a, 1), (a_prime, 1)))
    elif cls.tag in ("disjoint", "two_zero"):
        c = find_connector_curve(a, a_prime, budget=connector_budget, avoid=avoid)
        word = TwistWord(((c, 1), (a_prime, 1), (a, 1), (c, 1)))
    else:
        raise PreconditionError(f"pair class {cls.tag} is not terminal")
    image = apply_word(word, a_prime.with_orientation(False))
    if not curves_isotopic(image, a.with_orientation(False)):
        raise ComputationError("match word failed to align the curves")
    return word


def fix_orientation(a: EmbeddedCurve, partner: EmbeddedCurve) -> TwistWord:
    """Six positive letters reversing the orientations of both curves.

    The word is (D_a D_p D_a) squared; it fixes each curve setwise and acts
    as the hyperelliptic flip on the one-holed torus they span.
    """
    if geometric_intersection(a, partner) != 1:
        raise PreconditionError("orientation fix needs a partner crossing once")
    return TwistWord(((a, 1), (partner, 1), (a, 1), (a, 1), (partner, 1), (a, 1)))


@dataclass(frozen=True)
class FactorizationResult:
    """Outcome of factorize: f agrees with (pants twists) after (positive p)."""

    p: TwistWord
    q_exponents: tuple[int, ...]
    certificate: tuple[bool, ...]
    step_log: tuple[dict, ...]

    @property
    def verified(self) -> bool:
        return bool(self.certificate) and all(self.certificate)

    def to_json(self):
        return {
            "positive_letters": len(self.p),
            "q_exponents": list(self.q_exponents),
            "certificate": list(self.certificate),
            "step_log": list(self.step_log),
        }


def _orientation_partner(sys: PantsSystem, i: int, frozen):
    """A curve crossing pants curve i once and missing every frozen curve.

    Stored system curves are preferred; otherwise the partner is routed
    through the complement of pants curve i and the frozen curves.
    """
    a_i = sys.pants_curves[i]
    pool = []
    if i in sys.partners:
        pool.append(sys.partners[i])
    pool.extend(sys.dual_curves)
    pool.extend(sys.partners.values())
    pool.extend(sys.pants_curves)
    for cand in pool:
        if geometric_intersection(cand, a_i) != 1:
            continue
        if all(geometric_intersection(cand, fr) == 0 for fr in frozen):
            return cand
    system = JointSystem(sys.surface, (a_i, *frozen))
    return connecting_curve(system, 0)


def _filling_family(sys: PantsSystem):
    family = []
    seen = set()
    for c in (*sys.pants_curves, *sys.dual_curves, *sys.partners.values()):
        key = (c.canonical_key, c.surface.faces)
        if key not in seen:
            seen.add(key)
            family.append(c)
    return tuple(family)


def _exponents_from_images(sys: PantsSystem, pants_images, dual_images):
    """Shared arithmetic behind solve_pants_exponents.

    Takes precomputed images of the oriented interior pants curves and of
    their duals under the map being measured, so callers that already carry
    those images around do not transit the word again.
    """
    exps = []
    for i in range(sys.interior_count):
        a_i = sys.pants_curves[i]
        src = a_i.with_orientation(True)
        if not curves_isotopic(pants_images[i], src):
            raise PreconditionError("residual moves a pants curve")
        b_i = sys.dual_for(i).with_orientation(True)
        img = dual_images[i]
        base = geometric_intersection(a_i, b_i)
        k = geometric_intersection(img, b_i)
        if k % (base * base):
            raise ComputationError("residual is not in the pants-twist subgroup")
        m = k // (base * base)
        if m == 0:
            if not curves_isotopic(img, b_i):
                raise ComputationError("residual is not in the pants-twist subgroup")
            exps.append(0)
            continue
        if curves_isotopic(apply_twist(a_i, m, b_i), img):
            exps.append(m)
        elif curves_isotopic(apply_twist(a_i, -m, b_i), img):
            exps.append(-m)
        else:
            raise ComputationError("residual is not in the pants-twist subgroup")
    exps.extend(0 for _ in range(len(sys.pants_curves) - sys.interior_count))
    return tuple(exps)


def solve_pants_exponents(residual: TwistWord, sys: PantsSystem) -> tuple[int, ...]:
    """Exponents n_i with residual acting as the product of D_{a_i}^{n_i}.

    Each dual curve crosses exactly one pants curve, so the twist amount on
    that curve is |image crossings| / crossings^2, signed by an isotopy test.
    Boundary-parallel pants curves twist invisibly and report zero.
    """
    if residual.letters and residual.surface != sys.surface:
        raise PreconditionError("residual acts on a different surface")
    pants_images = [
        apply_word(residual, sys.pants_curves[i].with_orientation(True))
        for i in range(sys.interior_count)
    ]
    dual_images = [
        apply_word(residual, sys.dual_for(i).with_orientation(True))
        for i in range(sys.interior_count)
    ]
    return _exponents_from_images(sys, pants_images, dual_images)


def factorize(f: TwistWord, sys: PantsSystem) -> FactorizationResult:
    """Split f into pants twists following a positive word, with certificate.

    Walks interior pants curves in listed order; twists emitted for a later
    curve never touch an earlier one, so fixes persist. Images of a filling
    family are carried along one letter at a time, and the certificate
    compares each of them against the pants-twist word the leftover map has
    to equal: agreement on a filling family forces agreement everywhere.
    """
    if f.letters and f.surface != sys.surface:
        raise PreconditionError("word acts on a different surface")

    family = _filling_family(sys)
    tracked = tuple(c.with_orientation(True) for c in family)
    fam_index = {c.canonical_key: t for t, c in enumerate(family)}
    f_inv = f.inverse()
    # every tracked curve pulled back through f; from here on each emitted
    # letter is applied once per curve instead of re-walking the whole word
    images = [apply_word(f_inv, c) for c in tracked]

    p_word = TwistWord(())
    step_log = []
    for i in range(sys.interior_count):
        a_i = sys.pants_curves[i]
        frozen = sys.pants_curves[:i]
        src = a_i.with_orientation(True)
        b_i = images[i]
        k0 = geometric_intersection(a_i, b_i)

        reduce_word, b_term, _cls = reduce_pair(a_i, b_i, avoid=frozen)
        if is_separating(a_i):
            # homology pins separating curves: the terminal pullback must
            # already be the curve itself, and its orientation must agree
            if not curves_isotopic(b_term.with_orientation(False),
                                   a_i.with_orientation(False)):
                raise ComputationError(
                    "separating pants curve not recovered by reduction")
            match_word = TwistWord(())
        else:
            match_word = match_curve(b_term, a_i, avoid=frozen)

        image = apply_word(match_word, b_term)
        orient_word = TwistWord(())
        if not curves_isotopic(image, src):
            if not curves_isotopic(image, src.reverse()):
                raise ComputationError("matched curve is not the pants curve")
            partner = _orientation_partner(sys, i, frozen)
            if partner is None:
                raise ComputationError(
                    "orientation flip with no partner available")
            orient_word = fix_orientation(a_i, partner)

        h_i = reduce_word + match_word + orient_word
        if len(h_i) > k0 + 10:
            raise ComputationError("per-curve move budget exceeded")
        p_word = p_word + h_i
        for t in range(len(images)):
            if t != i:
                images[t] = apply_word(h_i, images[t])
        # the i-th image was just driven onto its pants curve; reuse that
        images[i] = apply_word(orient_word, image)
        step_log.append({
            "curve": i,
            "initial_crossings": k0,
            "reduce": len(reduce_word),
            "match": len(match_word),
            "orient": len(orient_word),
        })

    dual_images = [images[fam_index[sys.dual_for(i).canonical_key]]
                   for i in range(sys.interior_count)]
    s = _exponents_from_images(sys, images[:sys.interior_count], dual_images)
    q_exponents = tuple(-v for v in s)
    s_word = TwistWord(tuple(
        (sys.pants_curves[i], n) for i, n in enumerate(s) if n != 0))

    certificate = tuple(
        curves_isotopic(images[t], apply_word(s_word, tracked[t]))
        for t in range(len(tracked))
    )
    if not all(certificate):
        raise ComputationError("factorization certificate failed")
    return FactorizationResult(
        p=p_word,
        q_exponents=q_exponents,
        certificate=certificate,
        step_log=tuple(step_log),
    )
