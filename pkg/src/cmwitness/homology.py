"""Finite free complexes over S with machine-checkable exactness evidence.

A complex is stored as a list of matrices over the polynomial ring,

    0 -> F_n --d_n--> ... --d_2--> F_1 --d_1--> F_0,

with d_i given in column convention: column j of d_i holds the
coordinates of the image of the j-th basis vector of F_i in the basis
of F_{i-1}.  Exactness in positive degrees is certified by the rank and
grade conditions of the acyclicity criterion for finite free complexes:

  (i)  rank(d_i) + rank(d_{i+1}) = dim F_i for i = 1..n, and
  (ii) the ideal of rank(d_i)-minors of d_i has grade >= i.

Ranks are generic ranks over the fraction field (Bareiss elimination);
grades are certified by explicit regular sequences inside the minor
ideals, validated by shape:

  * length 1: a nonzero element (S is a domain);
  * length 2: (2^j, w) with j >= 1 and w nonzero mod 2 -- regularity of
    w on S/2^j follows by induction on j because F_2[x1..xn] is a
    domain;
  * length 3: (2, c, e) via regular_sequence_certificate.

Membership of a witness element in the minor ideal is checked by exact
divisibility by one of the listed generators, which is sound (any
multiple of a generator lies in the ideal) and sufficient for every
witness constructed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import AlgebraDesc, KElement
from .errors import (
    InternalVerificationError,
    LiftInvalidError,
    MalformedSequenceError,
    MissingCertificateError,
    UnverifiedComplexError,
    WitnessMismatchError,
)
from .gcd import gcd_many_q
from .linalg import (
    DimensionMismatchError,
    PolyFraction,
    bareiss_rank,
    fraction_kernel,
    poly_det,
)
from .poly import BaseRing, Poly, divide_exact, is_even, reduce_mod2
from .predicates import S2Witness, regular_sequence_certificate

__all__ = [
    "FreeComplex",
    "GradeCertificate",
    "resolution_of_I",
    "resolution_of_S_mod_Q",
    "check_composition_zero",
    "be_exactness_check",
    "minor_ideal_generators",
    "pd_depth_report",
    "kernel_saturation_check",
]


@dataclass
class FreeComplex:
    """A finite complex of free S-modules in column convention.

    ``matrices[i]`` is d_{i+1} as a row-major rectangular list; the free
    ranks are read off the matrix shapes.  ``labels`` names the modules
    F_0 .. F_n for reports.  When ``augmented`` is true, d_1 is an
    augmentation whose *image* (not cokernel) is the module being
    resolved, so the resolution of that module has length n - 1.
    """

    matrices: List[List[List[Poly]]]
    labels: List[str]
    augmented: bool = False
    extras: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.labels) != len(self.matrices) + 1:
            raise DimensionMismatchError(
                "need one label per module: %d matrices require %d labels"
                % (len(self.matrices), len(self.matrices) + 1)
            )
        for idx, mat in enumerate(self.matrices):
            if not mat or not mat[0]:
                raise DimensionMismatchError("empty matrix at position %d" % idx)
            width = len(mat[0])
            if any(len(row) != width for row in mat):
                raise DimensionMismatchError("ragged matrix at position %d" % idx)

    def ranks(self) -> List[int]:
        """Free ranks of F_0 .. F_n."""
        out = [len(self.matrices[0])] if self.matrices else []
        for mat in self.matrices:
            out.append(len(mat[0]))
        return out

    def serialize(self) -> Dict[str, object]:
        return {
            "labels": list(self.labels),
            "augmented": self.augmented,
            "matrices": [
                [[str(entry) for entry in row] for row in mat]
                for mat in self.matrices
            ],
        }


@dataclass
class GradeCertificate:
    """Evidence that an ideal has grade at least ``len(witness)``.

    ``ideal_gens`` generate the ideal (here: the rank-size minors of a
    differential); ``witness`` is a regular sequence contained in the
    ideal.  ``validate`` checks containment and regularity and returns
    the certified lower bound.
    """

    ideal_gens: List[Poly]
    witness: List[Poly]

    @property
    def certified_grade_lower_bound(self) -> int:
        return len(self.witness)

    def validate(self) -> bool:
        if not self.witness:
            raise MalformedSequenceError("empty witness sequence certifies nothing")
        if len(self.witness) > 3:
            raise MalformedSequenceError(
                "witness sequences longer than 3 are not supported"
            )
        for w in self.witness:
            if not _in_ideal_by_divisibility(w, self.ideal_gens):
                return False
        return _is_regular_sequence(self.witness)


def _in_ideal_by_divisibility(elem: Poly, gens: Sequence[Poly]) -> bool:
    """True if ``elem`` is an exact multiple of one of ``gens``."""
    if elem.is_zero():
        return True
    for g in gens:
        if g.is_zero():
            continue
        try:
            divide_exact(elem, g)
            return True
        except Exception:
            continue
    return False


def _is_regular_sequence(witness: Sequence[Poly]) -> bool:
    """Validate a regular sequence by shape (lengths 1..3, see module doc)."""
    n = len(witness)
    if n == 1:
        return not witness[0].is_zero()
    if n == 2:
        first, second = witness
        const = first.constant_coeff()
        if not first.is_constant() or const <= 1 or const & (const - 1) != 0:
            raise MalformedSequenceError(
                "length-2 witnesses must start with a power of 2"
            )
        return not reduce_mod2(second).is_zero()
    first, c, e = witness
    if not (first.is_constant() and first.constant_coeff() == 2):
        raise MalformedSequenceError("length-3 witnesses must have the shape (2, c, e)")
    return regular_sequence_certificate([first, c, e])


# ---------------------------------------------------------------------------
# the two concrete complexes


def resolution_of_I(wf: S2Witness, wg: S2Witness) -> FreeComplex:
    """Augmented complex 0 -> S --psi^T--> S^3 --phi--> A = S^4 onto I.

    phi sends the standard basis to (2w, 2u, h2*w - h1*u), written in
    A-coordinates, so its image is the ideal I = (2, wu - h1*h2,
    h2*w - h1*u) A intersected with the displayed generators' span; the
    three multiplication identities verified below show the image is
    closed under multiplication by w, u and wu, i.e. really is I.
    Raises WitnessMismatch when the witnesses are degenerate (both h's
    even) or the excess term a*h2^2 + b*h1^2 is odd, in which case no
    element e with (wu)(wu - h1*h2) = -h1*h2(wu - h1*h2) + 4e exists.
    """
    ring = wf.h.ring
    if wg.h.ring is not ring:
        raise DimensionMismatchError("witnesses over different rings")
    h1, a = wf.h, wf.a
    h2, b = wg.h, wg.a
    if reduce_mod2(h1).is_zero() and reduce_mod2(h2).is_zero():
        raise WitnessMismatchError(
            "both residues vanish mod 2; the ideal I degenerates to (2)"
        )
    excess = a * h2 * h2 + b * h1 * h1
    if not is_even(excess):
        raise WitnessMismatchError(
            "a*h2^2 + b*h1^2 is odd, so the product has no square-mod-4 structure"
        )
    f = wf.reexpand()
    g = wg.reexpand()
    alg = AlgebraDesc(ring=ring, f=f, g=g, wf=wf, wg=wg)
    e = divide_exact(excess, ring.const(2)) + a * b

    two_w = alg.root_f().scale_poly(ring.const(2))
    two_u = alg.root_g().scale_poly(ring.const(2))
    mixed = alg.root_f().scale_poly(h2) - alg.root_g().scale_poly(h1)
    cross = alg.root_fg() - alg.scalar(h1 * h2)

    # the three generating identities that make the image an ideal
    checks = [
        (alg.root_f() * cross, two_u.scale_poly(a) - mixed.scale_poly(h1)),
        (alg.root_g() * cross, two_w.scale_poly(b) + mixed.scale_poly(h2)),
        (alg.root_fg() * cross, cross.scale_poly(-(h1 * h2)) + alg.scalar(ring.const(4) * e)),
    ]
    for got, want in checks:
        if got != want:
            raise InternalVerificationError(
                "generating identity for the resolution of I failed"
            )

    zero = ring.zero()
    phi = [
        [zero, zero, zero],
        [ring.const(2), zero, h2],
        [zero, ring.const(2), -h1],
        [zero, zero, zero],
    ]
    psi_t = [[-h2], [h1], [ring.const(2)]]
    cx = FreeComplex(
        matrices=[phi, psi_t],
        labels=["A = S^4 (image = I)", "S^3", "S"],
        augmented=True,
        extras={"e": e, "h1": h1, "h2": h2},
    )
    if not check_composition_zero(cx):
        raise InternalVerificationError("phi . psi^T is not zero")
    return cx


def resolution_of_S_mod_Q(z: Poly, c: Poly, e: Poly) -> FreeComplex:
    """Length-3 free resolution 0 -> S -> S^3 -> S^3 -> S of S/Q.

    Q = (2, z*c, z*e) with z the lifted gcd of the two residues and c, e
    the lifted cofactors.  The lift z must be odd somewhere mod 2
    (LiftInvalid otherwise): the resolution's exactness certificate
    needs z*c^2 nonzero mod 2.
    """
    ring = z.ring
    if reduce_mod2(z).is_zero():
        raise LiftInvalidError("lift of the residue gcd vanishes mod 2")
    two = ring.const(2)
    zero = ring.zero()
    psi = [[two, z * c, z * e]]
    phi = [
        [z * c, z * e, zero],
        [-two, zero, e],
        [zero, -two, -c],
    ]
    tail = [[-e], [c], [-two]]
    cx = FreeComplex(
        matrices=[psi, phi, tail],
        labels=["S (cokernel = S/Q)", "S^3", "S^3", "S"],
        augmented=False,
        extras={
            "syz2_generators": [[row[j] for row in phi] for j in range(3)],
            "syz2_relation": [-e, c, -two],
        },
    )
    if not check_composition_zero(cx):
        raise InternalVerificationError("resolution of S/Q does not compose to zero")
    return cx


# ---------------------------------------------------------------------------
# verification


def check_composition_zero(cx: FreeComplex) -> bool:
    """True iff every adjacent product d_i . d_{i+1} is the zero matrix."""
    for i in range(len(cx.matrices) - 1):
        left = cx.matrices[i]
        right = cx.matrices[i + 1]
        if len(right) != len(left[0]):
            raise DimensionMismatchError(
                "d_%d and d_%d are not composable" % (i + 1, i + 2)
            )
        for r in range(len(left)):
            for s in range(len(right[0])):
                acc = left[0][0].ring.zero()
                for k in range(len(right)):
                    acc = acc + left[r][k] * right[k][s]
                if not acc.is_zero():
                    return False
    return True


def minor_ideal_generators(mat: List[List[Poly]], size: int) -> List[Poly]:
    """All size x size minors of ``mat`` (the determinantal ideal I_size)."""
    nrows, ncols = len(mat), len(mat[0])
    if size <= 0 or size > min(nrows, ncols):
        raise DimensionMismatchError("minor size %d out of range" % size)
    out = []
    for rows in combinations(range(nrows), size):
        for cols in combinations(range(ncols), size):
            out.append(poly_det([[mat[r][c] for c in cols] for r in rows]))
    return out


def be_exactness_check(
    cx: FreeComplex, grades: Sequence[Optional[GradeCertificate]]
) -> bool:
    """Acyclicity criterion: rank additivity plus certified minor grades.

    ``grades[i]`` must certify grade >= i+1 for the ideal of
    rank-size minors of d_{i+1}; MissingCertificate when a slot is
    absent or the claimed bound is too small.  Returns False when a rank
    or certificate check fails, True when the complex is verified exact
    in positive degrees.
    """
    n = len(cx.matrices)
    if len(grades) < n:
        raise MissingCertificateError(
            "need %d grade certificates, got %d" % (n, len(grades))
        )
    ranks = [bareiss_rank(m) for m in cx.matrices]
    dims = cx.ranks()
    for i in range(1, n + 1):
        expected = ranks[i - 1] + (ranks[i] if i < n else 0)
        if expected != dims[i]:
            return False
    for i in range(1, n + 1):
        cert = grades[i - 1]
        if cert is None:
            raise MissingCertificateError("no grade certificate for position %d" % i)
        if cert.certified_grade_lower_bound < i:
            raise MissingCertificateError(
                "certificate at position %d only reaches grade %d"
                % (i, cert.certified_grade_lower_bound)
            )
        minors = minor_ideal_generators(cx.matrices[i - 1], ranks[i - 1])
        supplied = {p for p in cert.ideal_gens}
        if supplied != {p for p in minors}:
            raise MissingCertificateError(
                "certificate at position %d lists the wrong minor ideal" % i
            )
        if not cert.validate():
            return False
    return True


def standard_grade_certificates(cx: FreeComplex) -> List[GradeCertificate]:
    """Build the grade certificates for the two complexes made here.

    Witness recipes, one per homological position i:

      i=1: (m) for any nonzero minor m;
      i=2: (4, w) where 4 and w are exact multiples of minors with w
           nonzero mod 2 -- for both complexes 4 = 2*2 and w = z*c*c (or
           h1^2 / h2^2 for the augmented complex) divide listed minors;
      i=3: (2, c, e) via the explicit length-3 check.
    """
    ring = cx.matrices[0][0][0].ring
    ranks = [bareiss_rank(m) for m in cx.matrices]
    out: List[GradeCertificate] = []
    for i in range(1, len(cx.matrices) + 1):
        minors = minor_ideal_generators(cx.matrices[i - 1], ranks[i - 1])
        nonzero = [m for m in minors if not m.is_zero()]
        if i == 1:
            witness = [nonzero[0]]
        elif i == 2:
            odd_part = [m for m in nonzero if not reduce_mod2(m).is_zero()]
            if not odd_part:
                raise MissingCertificateError(
                    "no minor survives mod 2; cannot certify grade >= 2"
                )
            witness = [ring.const(4), odd_part[0]]
        else:
            rel = cx.extras.get("syz2_relation")
            if rel is None:
                raise MissingCertificateError(
                    "no length-3 witness available for this complex"
                )
            # tail column is [-e, c, -2]
            witness = [ring.const(2), rel[1], -rel[0]]
        out.append(GradeCertificate(ideal_gens=minors, witness=witness))
    return out


def pd_depth_report(cx: FreeComplex, verified: bool) -> Tuple[int, int]:
    """(pd bound, depth) for the module resolved by a verified complex.

    The projective dimension bound is the length of the resolution: the
    number of matrices, minus one when the complex is augmented (d_1
    then maps onto the module instead of presenting its cokernel).
    Depth is d - pd with d = dim S = number of variables + 1.
    """
    if not verified:
        raise UnverifiedComplexError(
            "refusing to report pd/depth for an unverified complex"
        )
    ring = cx.matrices[0][0][0].ring
    d = len(ring.variables) + 1
    pd_bound = len(cx.matrices) - (1 if cx.augmented else 0)
    return pd_bound, d - pd_bound


def kernel_saturation_check(cx: FreeComplex) -> bool:
    """Spot check that ker(d_1) is exactly the column span of d_2.

    Computes a generic kernel basis of d_1 over the fraction field,
    clears denominators and integer content in each basis vector, and
    checks the result lies in the S-column span of d_2 (for the rank-1
    tails here: is an exact S-multiple of the single column).  This
    guards against a d_2 that spans the right generic kernel but fails
    to saturate it in S.
    """
    if len(cx.matrices) < 2:
        raise DimensionMismatchError("need at least two differentials")
    d1, d2 = cx.matrices[0], cx.matrices[1]
    basis = fraction_kernel([[PolyFraction(p) for p in row] for row in d1])
    if len(d2[0]) != 1:
        raise DimensionMismatchError("saturation spot check expects a rank-1 tail")
    column = [row[0] for row in d2]
    for vec in basis:
        cleared = _clear_to_polys(vec)
        if not _is_s_multiple_of_column(cleared, column):
            return False
    return True


def _clear_to_polys(vec: Sequence[PolyFraction]) -> List[Poly]:
    """Scale a fraction vector to a content-free polynomial vector."""
    ring = vec[0].ring
    denom = ring.one()
    for entry in vec:
        denom = divide_exact(denom * entry.den, gcd_many_q([denom, entry.den]))
    polys = []
    for entry in vec:
        scaled = entry * PolyFraction(denom)
        if not scaled.is_polynomial():
            raise InternalVerificationError("denominator clearing failed")
        polys.append(scaled.as_poly())
    content = gcd_many_q(polys)
    return [divide_exact(p, content) for p in polys]


def _is_s_multiple_of_column(vec: Sequence[Poly], column: Sequence[Poly]) -> bool:
    """True if vec = s * column for some s in S (unit denominators allowed)."""
    ratio: Optional[PolyFraction] = None
    for v, c in zip(vec, column):
        if c.is_zero():
            if not v.is_zero():
                return False
            continue
        here = PolyFraction(v, c)
        if ratio is None:
            ratio = here
        elif ratio != here:
            return False
    if ratio is None:
        return all(v.is_zero() for v in vec)
    return ratio.is_in_S()
