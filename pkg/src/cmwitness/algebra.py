"""The rank-4 free S-algebra A = S[w, u] with w^2 = f, u^2 = g.

A is free over S on the basis (1, w, u, wu); its total fraction field K
is a degree-4 extension of Frac(S).  Every element this package needs
lives in (1/2^k)A, so a K-element is four integer polynomial
coordinates plus a denominator exponent k, kept in reduced form (k = 0
or some coordinate odd).

The module provides exact multiplication, membership in A (denominator
clearance in reduced form), verification of quadratic relations,
span-closure certification for claimed module generating sets of
overrings, ideal products, colon tests x * ideal inside a target, and a
brute-force bounded search for colon duals used as an independent
oracle: all elements x = p / 2^k with deg p <= D and x * ideal inside
the target, found by GF(2) linear algebra (one system for k = 1, a
two-stage lift for k = 2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    BoundTooLargeError,
    HypothesisViolationError,
    NotClosedError,
    WitnessMismatchError,
)
from .linalg import (
    PolyFraction,
    SpanNotFreeError,
    f2_nullspace,
    solve_fraction_system,
)
from .poly import BaseRing, F2Poly, Poly, half, is_even, reduce_mod2
from .predicates import (
    S2Witness,
    decompose_S2,
    degree_four_check,
    is_squarefree,
    satisfies_A1,
)

BASIS_NAMES = ("1", "w", "u", "w*u")


@dataclass(frozen=True)
class AlgebraDesc:
    """Descriptor of A = S[w, u]/(w^2 - f, u^2 - g).

    wf and wg are the decompositions f = h1^2 + 2a, g = h2^2 + 2b; they
    are present exactly when the mod-2 reduction of f resp. g is a
    square (which includes every case the classifier handles beyond the
    out-of-scope tag).
    """

    ring: BaseRing
    f: Poly
    g: Poly
    wf: Optional[S2Witness]
    wg: Optional[S2Witness]

    # -- element factories -------------------------------------------

    def element(self, coords: Sequence[Poly], denom_exp: int = 0) -> "KElement":
        return KElement.make(self, tuple(coords), denom_exp)

    def zero(self) -> "KElement":
        z = self.ring.zero()
        return self.element((z, z, z, z))

    def one(self) -> "KElement":
        z = self.ring.zero()
        return self.element((self.ring.one(), z, z, z))

    def scalar(self, p: Union[Poly, int]) -> "KElement":
        if isinstance(p, int):
            p = self.ring.const(p)
        z = self.ring.zero()
        return self.element((p, z, z, z))

    def root_f(self) -> "KElement":
        z = self.ring.zero()
        return self.element((z, self.ring.one(), z, z))

    def root_g(self) -> "KElement":
        z = self.ring.zero()
        return self.element((z, z, self.ring.one(), z))

    def root_fg(self) -> "KElement":
        z = self.ring.zero()
        return self.element((z, z, z, self.ring.one()))

    # -- witness accessors -------------------------------------------

    def h1(self) -> Poly:
        self._need_witnesses()
        return self.wf.h

    def a(self) -> Poly:
        self._need_witnesses()
        return self.wf.a

    def h2(self) -> Poly:
        self._need_witnesses()
        return self.wg.h

    def b(self) -> Poly:
        # The S2Witness field is named "a"; for g it plays the role of b.
        self._need_witnesses()
        return self.wg.a

    def _need_witnesses(self):
        if self.wf is None or self.wg is None:
            raise WitnessMismatchError("f or g has no S^2 decomposition")


def make_algebra(ring: BaseRing, f: Poly, g: Poly) -> AlgebraDesc:
    """Validate the standing hypotheses and build the descriptor.

    Checks, in order: f and g squarefree, the no-common-height-one-prime
    condition, and the degree-four condition (none of f, g, f*g a
    square in S).  Raises HypothesisViolationError naming the first
    predicate that fails.
    """
    if not is_squarefree(f):
        raise HypothesisViolationError("squarefree_f", f"f = {f} is not squarefree")
    if not is_squarefree(g):
        raise HypothesisViolationError("squarefree_g", f"g = {g} is not squarefree")
    if not satisfies_A1(f, g):
        raise HypothesisViolationError(
            "A1", "f and g share a height-one prime of S"
        )
    if not degree_four_check(f, g):
        raise HypothesisViolationError(
            "degree_four", "one of f, g, f*g is a square in S"
        )
    wf = decompose_S2(f)
    wg = decompose_S2(g)
    if wf is not None and not (wf.reexpand() == f):
        raise WitnessMismatchError("witness for f does not re-expand")
    if wg is not None and not (wg.reexpand() == g):
        raise WitnessMismatchError("witness for g does not re-expand")
    return AlgebraDesc(ring=ring, f=f, g=g, wf=wf, wg=wg)


class KElement:
    """(n0 + n1*w + n2*u + n3*w*u) / 2^k in reduced form."""

    __slots__ = ("algebra", "coords", "denom_exp", "_hash")

    def __init__(self, algebra: AlgebraDesc, coords: Tuple[Poly, ...], denom_exp: int):
        # Callers go through make(); direct construction assumes reduced.
        self.algebra = algebra
        self.coords = coords
        self.denom_exp = denom_exp
        self._hash = None

    @classmethod
    def make(
        cls, algebra: AlgebraDesc, coords: Tuple[Poly, ...], denom_exp: int
    ) -> "KElement":
        if len(coords) != 4:
            raise ValueError("a K-element has exactly 4 coordinates")
        if denom_exp < 0:
            raise ValueError("negative denominator exponent")
        while denom_exp > 0 and all(is_even(c) for c in coords):
            coords = tuple(half(c) for c in coords)
            denom_exp -= 1
        return cls(algebra, tuple(coords), denom_exp)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def _coerce(self, other):
        if isinstance(other, KElement):
            return other
        if isinstance(other, Poly):
            return self.algebra.scalar(other)
        if isinstance(other, int):
            return self.algebra.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        _check_same_algebra(self, other)
        k = max(self.denom_exp, other.denom_exp)
        sa = 2 ** (k - self.denom_exp)
        sb = 2 ** (k - other.denom_exp)
        coords = tuple(
            a.scale(sa) + b.scale(sb) for a, b in zip(self.coords, other.coords)
        )
        return KElement.make(self.algebra, coords, k)

    __radd__ = __add__

    def __neg__(self):
        return KElement(
            self.algebra, tuple(c.scale(-1) for c in self.coords), self.denom_exp
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return k_mul(self, other)

    __rmul__ = __mul__

    def scale_poly(self, p: Poly) -> "KElement":
        coords = tuple(c * p for c in self.coords)
        return KElement.make(self.algebra, coords, self.denom_exp)

    def half(self) -> "KElement":
        """Divide by 2 in K (the result need not lie in A)."""
        return KElement.make(self.algebra, self.coords, self.denom_exp + 1)

    def __eq__(self, other):
        if not isinstance(other, KElement):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.denom_exp == other.denom_exp
            and self.coords == other.coords
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.coords, self.denom_exp))
        return self._hash

    def serialize(self) -> dict:
        return {
            "coords": [str(c) for c in self.coords],
            "denom_exp": self.denom_exp,
        }

    def __repr__(self):
        return f"KElement({self})"

    def __str__(self):
        parts = []
        for c, name in zip(self.coords, BASIS_NAMES):
            if c.is_zero():
                continue
            parts.append(f"({c})" if name == "1" else f"({c})*{name}")
        body = " + ".join(parts) if parts else "0"
        if self.denom_exp:
            return f"[{body}] / 2^{self.denom_exp}"
        return body


def _check_same_algebra(a: KElement, b: KElement):
    if a.algebra != b.algebra:
        raise ValueError("operands belong to different algebras")


def k_mul(x: KElement, y: KElement) -> KElement:
    """Exact product in K using the structure constants of (1, w, u, wu).

    w*w = f, u*u = g, w*u = wu, w*wu = f*u, u*wu = g*w, wu*wu = f*g.
    """
    _check_same_algebra(x, y)
    alg = x.algebra
    f, g = alg.f, alg.g
    n0, n1, n2, n3 = x.coords
    m0, m1, m2, m3 = y.coords
    fg = f * g
    c0 = n0 * m0 + f * (n1 * m1) + g * (n2 * m2) + fg * (n3 * m3)
    c1 = n0 * m1 + n1 * m0 + g * (n2 * m3 + n3 * m2)
    c2 = n0 * m2 + n2 * m0 + f * (n1 * m3 + n3 * m1)
    c3 = n0 * m3 + n3 * m0 + n1 * m2 + n2 * m1
    return KElement.make(alg, (c0, c1, c2, c3), x.denom_exp + y.denom_exp)


def a_membership(x: KElement) -> bool:
    """x in A: the reduced form has denominator exponent 0."""
    return x.denom_exp == 0


def min_poly_check(x: KElement, coeffs: Sequence[Union[Poly, KElement]]) -> bool:
    """Verify the quadratic x^2 - c1*x - c0 = 0 with coeffs = [c1, c0]."""
    if len(coeffs) != 2:
        raise ValueError("expected coefficients [c1, c0]")
    c1, c0 = (x._coerce(c) for c in coeffs)
    return (k_mul(x, x) - k_mul(c1, x) - c0).is_zero()


@dataclass
class MultiplicationTable:
    """Closure certificate: coefficients of gens[i]*gens[j] in the gens."""

    gens: List[KElement]
    entries: Dict[Tuple[int, int], List[PolyFraction]]

    def entry(self, i: int, j: int) -> List[PolyFraction]:
        return self.entries[(min(i, j), max(i, j))]

    def all_in_S(self) -> bool:
        return all(
            fr.is_in_S() for row in self.entries.values() for fr in row
        )


def _gen_columns(gens: Sequence[KElement]) -> List[List[PolyFraction]]:
    cols = []
    for gch in gens:
        den = gch.algebra.ring.const(2 ** gch.denom_exp)
        cols.append([PolyFraction(c, den) for c in gch.coords])
    return cols


def span_closure_check(gens: Sequence[KElement]) -> MultiplicationTable:
    """Certify that the S-span of gens is closed under multiplication.

    Each product gens[i]*gens[j] is expressed in the basis (1, w, u, wu)
    over the fraction field and solved against the generator columns;
    the proposed generating sets are triangular in this basis, so the
    elimination never needs more than back-substitution.  A solution
    coefficient lies in S exactly when its reduced denominator is a
    unit (odd constant term).  Raises NotClosedError with the offending
    pair if some product is not an S-combination, SpanNotFreeError if
    the generators are linearly dependent over the fraction field.
    """
    gens = list(gens)
    if not gens or not (gens[0] == gens[0].algebra.one()):
        raise ValueError("gens[0] must be the unit element 1")
    if len(gens) > 4:
        raise SpanNotFreeError("more than 4 generators cannot be free in K")
    cols = _gen_columns(gens)
    entries: Dict[Tuple[int, int], List[PolyFraction]] = {}
    for i in range(len(gens)):
        for j in range(i, len(gens)):
            prod = k_mul(gens[i], gens[j])
            den = prod.algebra.ring.const(2 ** prod.denom_exp)
            target = [PolyFraction(c, den) for c in prod.coords]
            sol = solve_fraction_system(cols, target, require_unique=True)
            if sol is None:
                raise NotClosedError(
                    f"product of generators {i} and {j} is outside the span"
                )
            if not all(fr.is_in_S() for fr in sol):
                raise NotClosedError(
                    f"product of generators {i} and {j} needs coefficients outside S"
                )
            entries[(i, j)] = sol
    return MultiplicationTable(gens=gens, entries=entries)


def express_in_span(
    x: KElement, gens: Sequence[KElement]
) -> Optional[List[PolyFraction]]:
    """Coefficients of x over the gens in the fraction field, or None."""
    cols = _gen_columns(gens)
    den = x.algebra.ring.const(2 ** x.denom_exp)
    target = [PolyFraction(c, den) for c in x.coords]
    return solve_fraction_system(cols, target)


@dataclass
class IdealGens:
    """A finitely generated ideal of A, given by generators inside A."""

    algebra: AlgebraDesc
    gens: List[KElement]
    name: str = ""

    def __post_init__(self):
        for x in self.gens:
            if not a_membership(x):
                raise WitnessMismatchError(
                    "ideal generators must lie in A (denominator exponent 0)"
                )


def ideal_product(a: IdealGens, b: IdealGens) -> IdealGens:
    """All pairwise products, reduced, duplicates removed (stable order)."""
    if a.algebra != b.algebra:
        raise ValueError("ideals over different algebras")
    seen = []
    for x in a.gens:
        for y in b.gens:
            p = k_mul(x, y)
            if p not in seen:
                seen.append(p)
    name = f"{a.name}*{b.name}" if a.name and b.name else ""
    return IdealGens(algebra=a.algebra, gens=seen, name=name)


@dataclass
class MembershipOracle:
    """Decides membership of K-elements in a target S-algebra.

    kind "A": membership in A itself (denominator clearance).
    kind "colon": membership in (A : ideal) = {x : x*ideal in A}; with
    ideal = I this realizes R = I* in the non-CM case.
    """

    kind: str
    algebra: AlgebraDesc
    ideal: Optional[IdealGens] = None

    def contains(self, x: KElement) -> bool:
        if self.kind == "A":
            return a_membership(x)
        if self.kind == "colon":
            return all(a_membership(k_mul(x, g)) for g in self.ideal.gens)
        raise ValueError(f"unknown oracle kind {self.kind!r}")

    def describe(self) -> str:
        if self.kind == "A":
            return "A"
        gens = ", ".join(str(g) for g in self.ideal.gens)
        return f"(A : ({gens}))"


def a_oracle(algebra: AlgebraDesc) -> MembershipOracle:
    return MembershipOracle(kind="A", algebra=algebra)


def colon_oracle(ideal: IdealGens) -> MembershipOracle:
    return MembershipOracle(kind="colon", algebra=ideal.algebra, ideal=ideal)


def colon_membership(
    x: KElement, ideal: IdealGens, target: MembershipOracle
) -> bool:
    """x * ideal contained in the target algebra."""
    return all(target.contains(k_mul(x, g)) for g in ideal.gens)


# ---------------------------------------------------------------------------
# Bounded colon search


_MAX_UNKNOWNS = 3000


def _monomials_up_to(ring: BaseRing, degree: int):
    """All exponent tuples of total degree <= degree, ascending grlex."""
    out = []

    def rec(prefix, remaining, budget):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for d in range(budget + 1):
            rec(prefix + [d], remaining - 1, budget - d)

    rec([], ring.nvars, degree)
    out.sort(key=lambda e: (sum(e), e))
    return out


def _mul_matrix_mod2(g: KElement) -> List[List[F2Poly]]:
    """4x4 matrix of the mod-2 coordinates of basis_c * g."""
    alg = g.algebra
    basis = [alg.one(), alg.root_f(), alg.root_g(), alg.root_fg()]
    return [
        [reduce_mod2(c) for c in k_mul(b, g).coords]
        for b in basis
    ]


def bounded_colon_search(
    ideal: IdealGens,
    target: MembershipOracle,
    denom_bound: int,
    degree_bound: int,
) -> List[KElement]:
    """Brute-force dual: all x = p/2^k, deg p <= D, with x*ideal in target.

    Returns [1] followed by a basis of the space of genuinely fractional
    solutions; the S-span of the returned list within the degree bound
    is the full solution set (solutions with smaller denominators are
    included since the linear systems are nested).  k = 1 is a single
    GF(2) nullspace computation; k = 2 lifts the mod-2 solutions and
    solves the mod-4 correction layer, which is again GF(2)-linear in
    the lift multipliers and the correction coefficients.
    """
    if denom_bound not in (1, 2):
        raise BoundTooLargeError("denominator exponent bound must be 1 or 2")
    if degree_bound > 8:
        raise BoundTooLargeError("degree bound above 8 is not supported")
    alg = ideal.algebra
    if target.kind == "A":
        eff_gens = list(ideal.gens)
    else:
        eff_gens = []
        for x in ideal.gens:
            for y in target.ideal.gens:
                p = k_mul(x, y)
                if p not in eff_gens:
                    eff_gens.append(p)
    monos = _monomials_up_to(alg.ring, degree_bound)
    nmono = len(monos)
    nunk = 4 * nmono
    if nunk > _MAX_UNKNOWNS:
        raise BoundTooLargeError(f"{nunk} unknowns exceed the resource guard")
    mono_index = {m: i for i, m in enumerate(monos)}

    mats = [_mul_matrix_mod2(g) for g in eff_gens]

    def stage_rows(extra_cols: int = 0):
        """Equation rows of p * g = 0 mod 2 over the p-coefficients.

        Returns (row index map, list of bitmasks); unknown (c, m) sits
        at bit c*nmono + mono_index[m] + extra_cols.
        """
        rows: Dict[Tuple[int, int, Tuple[int, ...]], int] = {}
        for gi, mat in enumerate(mats):
            for c in range(4):
                for d in range(4):
                    entry = mat[c][d]
                    if entry.is_zero():
                        continue
                    for mi, m in enumerate(monos):
                        bit = extra_cols + c * nmono + mi
                        for mm in entry.sorted_monomials():
                            key = (gi, d, tuple(x + y for x, y in zip(m, mm)))
                            rows[key] = rows.get(key, 0) ^ (1 << bit)
        return [rows[k] for k in sorted(rows)]

    def mask_to_coords(mask: int, offset: int) -> Tuple[Poly, ...]:
        coords = []
        for c in range(4):
            terms = {}
            for mi, m in enumerate(monos):
                if (mask >> (offset + c * nmono + mi)) & 1:
                    terms[m] = 1
            coords.append(Poly(alg.ring, terms))
        return tuple(coords)

    eq1 = stage_rows()
    basis1 = f2_nullspace(eq1, nunk)
    if denom_bound == 1:
        out = [alg.one()]
        for mask in basis1:
            out.append(KElement.make(alg, mask_to_coords(mask, 0), 1))
        return out

    # Denominator 4: p = sum_i eps_i * b_i + 2q with the b_i the lifted
    # mod-2 solutions.  Then p*g = 2*(sum eps_i r_i + q*g) + 4*(...) with
    # r_i = (b_i * g)/2, so the mod-4 condition is the GF(2) system
    # sum eps_i r_i + q*g = 0 on the (eps, q) unknowns.
    lifts = [KElement(alg, mask_to_coords(mask, 0), 0) for mask in basis1]
    neps = len(lifts)
    rows2: Dict[Tuple[int, int, Tuple[int, ...]], int] = {}
    for gi, g in enumerate(eff_gens):
        for bi, b in enumerate(lifts):
            prod = k_mul(b, g)
            assert prod.denom_exp == 0
            for d in range(4):
                r = reduce_mod2(half(prod.coords[d]))
                for mm in r.sorted_monomials():
                    key = (gi, d, mm)
                    rows2[key] = rows2.get(key, 0) ^ (1 << bi)
    # q-part reuses the stage-1 matrix structure, shifted past the eps bits.
    for gi, mat in enumerate(mats):
        for c in range(4):
            for d in range(4):
                entry = mat[c][d]
                if entry.is_zero():
                    continue
                for mi, m in enumerate(monos):
                    bit = neps + c * nmono + mi
                    for mm in entry.sorted_monomials():
                        key = (gi, d, tuple(x + y for x, y in zip(m, mm)))
                        rows2[key] = rows2.get(key, 0) ^ (1 << bit)
    eq2 = [rows2[k] for k in sorted(rows2)]
    basis2 = f2_nullspace(eq2, neps + nunk)
    out = [alg.one()]
    for mask in basis2:
        pcoords = [alg.ring.zero()] * 4
        for bi, b in enumerate(lifts):
            if (mask >> bi) & 1:
                pcoords = [p + c for p, c in zip(pcoords, b.coords)]
        qcoords = mask_to_coords(mask, neps)
        pcoords = [p + q.scale(2) for p, q in zip(pcoords, qcoords)]
        x = KElement.make(alg, tuple(pcoords), 2)
        if not x.is_zero():
            out.append(x)
    return out
