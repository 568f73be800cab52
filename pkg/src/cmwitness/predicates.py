"""Hypothesis tests and membership predicates for the base ring S.

S = Z[x1, ..., xn] localized at (2, x1, ..., xn).  The predicates here
decide, with extractable witnesses:

* squarefreeness of an element of S,
* the coprimality hypothesis on a pair (f, g),
* the degree-four (non-square) hypothesis on f, g and f*g,
* membership in S^2 = {h^2 + 2a} and in S^{2,4} = {h^2 + 4a'}, which
  controls integral closedness of the quadric hypersurfaces,
* the product criterion deciding whether f*g lies in S^{2,4},
* the shape of the ideal (2, h1, h2) mod 2, which separates the
  Cohen-Macaulay and non-Cohen-Macaulay branches.

Height-one primes of S are (2) and the irreducible polynomials with
even constant term; every other irreducible is a unit, so valuations at
content primes other than 2 never matter.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    InternalVerificationError,
    MalformedSequenceError,
    UnsupportedError,
    ZeroInputError,
)
from .gcd import gcd_f2, gcd_many_q, gcd_q, is_ring_square
from .poly import (
    F2Poly,
    Poly,
    f2_divide_exact,
    half,
    is_even,
    lift_f2,
    partial_derivative,
    reduce_mod2,
    sqrt_f2,
)


@dataclass(frozen=True)
class S2Witness:
    """A decomposition input = h^2 + 2a."""

    h: Poly
    a: Poly

    def reexpand(self) -> Poly:
        return self.h * self.h + self.a.scale(2)


@dataclass(frozen=True)
class S2w4Witness:
    """A decomposition input = h^2 + 4a'."""

    h: Poly
    a_prime: Poly

    def reexpand(self) -> Poly:
        return self.h * self.h + self.a_prime.scale(4)


@dataclass(frozen=True)
class QShape:
    """Mod-2 shape of the ideal Q = (2, h1, h2): h1 = z*c, h2 = z*e."""

    z: F2Poly
    c: F2Poly
    e: F2Poly
    tag: str  # UnitIdeal | TwoGenerated | Grade3CI_NotTwoGen | Grade2Pd3


def is_squarefree(f: Poly) -> bool:
    """Squarefreeness in S.

    Two independent conditions: the 2-adic valuation of the integer
    content is at most one, and the primitive part has no repeated
    factor over Q (trivial joint gcd with all partial derivatives).
    """
    if f.is_zero():
        raise ZeroInputError("is_squarefree(0)")
    content = f.integer_content()
    if content % 4 == 0:
        return False
    pp = Poly(f.ring, {e: c // content for e, c in f.sorted_terms()})
    if pp.is_constant():
        return True
    seq = [pp] + [partial_derivative(pp, i) for i in range(f.ring.nvars)]
    return gcd_many_q(seq).is_constant()


def satisfies_A1(f: Poly, g: Poly) -> bool:
    """No common height-one prime: primitive gcd 1 and not both in 2S."""
    if f.is_zero() or g.is_zero():
        raise ZeroInputError("satisfies_A1 with a zero argument")
    if is_even(f) and is_even(g):
        return False
    return gcd_q(f, g) == f.ring.one()


def degree_four_check(f: Poly, g: Poly) -> bool:
    """Neither f, g nor f*g is a square in S.

    For an integer polynomial, being a square in S is equivalent to
    being a square in Q[vars] (compare irreducible multiplicities in
    the UFD Z[vars]; units of S are products of odd-constant
    irreducibles, which the valuation argument covers as well).  The
    Unsupported branch below is the contractual guard for unit inputs
    whose content behaves unexpectedly; it is unreachable for reduced
    inputs since a unit has odd content.
    """
    for p in (f, g, f * g):
        root = is_ring_square(p)
        if root is not None:
            if p.is_unit() and p.integer_content() % 2 == 0:
                raise UnsupportedError(
                    "unit input is a Q-square with even content"
                )
            return False
    return True


def decompose_S2(f: Poly) -> Optional[S2Witness]:
    """Witness f = h^2 + 2a, if the mod-2 reduction is a square."""
    r = sqrt_f2(reduce_mod2(f))
    if r is None:
        return None
    h = lift_f2(r)
    a = half(f - h * h)
    return S2Witness(h=h, a=a)


def in_S2wedge4(f: Poly) -> Optional[S2w4Witness]:
    """Witness f = h^2 + 4a', if one exists.

    The verdict does not depend on the chosen lift h: replacing h by
    h + 2t shifts a by -2(th + t^2), preserving parity.  That
    independence is re-asserted here on deterministic pseudo-random
    perturbations as a guard against lift bugs.
    """
    w = decompose_S2(f)
    if w is None:
        return None
    verdict = is_even(w.a)
    _assert_lift_independence(f, w, verdict)
    if not verdict:
        return None
    return S2w4Witness(h=w.h, a_prime=half(w.a))


def _assert_lift_independence(f: Poly, w: S2Witness, verdict: bool, trials: int = 10):
    ring = f.ring
    rng = random.Random(0)
    max_deg = max(w.h.total_degree(), 1)
    for _ in range(trials):
        terms = {}
        for _ in range(3):
            e = tuple(rng.randint(0, max_deg) for _ in range(ring.nvars))
            terms[e] = rng.randint(0, 2)
        t = Poly(ring, terms)
        h2 = w.h + t.scale(2)
        a2 = half(f - h2 * h2)
        if is_even(a2) != verdict:
            raise InternalVerificationError(
                "S^{2,4} membership verdict changed under lift perturbation"
            )


def product_in_S2wedge4(wf: S2Witness, wg: S2Witness) -> bool:
    """Whether f*g lies in S^{2,4}, from witnesses of the factors.

    With f = h1^2 + 2a and g = h2^2 + 2b one has
    f*g = (h1*h2)^2 + 2*(a*h2^2 + b*h1^2) + 4*a*b, so membership is
    the parity condition a*h2^2 + b*h1^2 in 2S.
    """
    mixed = wf.a * (wg.h * wg.h) + wg.a * (wf.h * wf.h)
    return is_even(mixed)


def ideal_Q_classify(h1: Poly, h2: Poly) -> QShape:
    """Classify the ideal (2, h1, h2) by its mod-2 factorization.

    Writing h1 = z*c and h2 = z*e with z the gcd mod 2:
    the ideal is the unit ideal when some hi is a unit; two-generated
    when c or e is a unit (then (2, h1, h2) = (2, z*gcd-complement));
    a grade-three complete intersection when z is a unit but neither
    c nor e is; and otherwise a grade-two ideal whose quotient has
    projective dimension three.
    """
    r1, r2 = reduce_mod2(h1), reduce_mod2(h2)
    if r1.is_zero() and r2.is_zero():
        # Q = (2): degenerate, principal hence two-generated.
        zero = F2Poly(h1.ring, ())
        return QShape(z=zero, c=zero, e=zero, tag="TwoGenerated")
    z = gcd_f2(r1, r2)
    c = f2_divide_exact(r1, z)
    e = f2_divide_exact(r2, z)
    if r1.is_unit() or r2.is_unit():
        tag = "UnitIdeal"
    elif c.is_unit() or e.is_unit():
        tag = "TwoGenerated"
    elif z.is_unit():
        tag = "Grade3CI_NotTwoGen"
    else:
        tag = "Grade2Pd3"
    return QShape(z=z, c=c, e=e, tag=tag)


def regular_sequence_certificate(seq: Sequence[Poly]) -> bool:
    """Certify that (2, c, e) is a regular sequence on S.

    2 is regular on the domain S; c is regular on S/2S iff its
    reduction is nonzero; and e is regular on S/(2, c) iff e avoids
    every associated prime of (c) mod 2, i.e. iff gcd_f2(c, e) is a
    unit (the associated primes are generated by the irreducible
    factors of c).
    """
    if len(seq) != 3:
        raise MalformedSequenceError("expected a sequence (2, c, e)")
    two, c, e = seq
    if not (two == two.ring.const(2)):
        raise MalformedSequenceError("sequence must start with the constant 2")
    cbar = reduce_mod2(c)
    ebar = reduce_mod2(e)
    if cbar.is_zero():
        return False
    return gcd_f2(cbar, ebar).is_unit()
