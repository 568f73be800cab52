"""Exact linear algebra: polynomial fractions, Bareiss rank, GF(2) systems.

Three independent tools used throughout the package:

* PolyFraction / RationalMatrix: elements of the fraction field
  Q(x1, ..., xn), always kept reduced (numerator and denominator
  coprime, denominator with positive leading coefficient).  A fraction
  lies in the local ring S exactly when its reduced denominator is a
  unit of S, i.e. has odd constant coefficient.

* generic_rank: fraction-free Gaussian elimination (Bareiss) over the
  polynomial ring after clearing denominators row by row.  Entries stay
  polynomial because every intermediate entry is a minor of the cleared
  matrix, and each division by the previous pivot is exact.

* GF(2) linear systems with rows packed into Python integers, used by
  the bounded colon search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from .gcd import gcd_z
from .poly import (
    BaseRing,
    F2Poly,
    Poly,
    divide_exact,
    f2_divide_exact,
    is_unit_local,
)


class SpanNotFreeError(Exception):
    """A claimed free generating set is linearly dependent."""


class DimensionMismatchError(Exception):
    """Matrix shapes do not line up."""


class PolyFraction:
    """A reduced fraction of integer polynomials."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Poly] = None):
        if den is None:
            den = num.ring.one()
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = num.ring.one()
        else:
            g = gcd_z(num, den)
            if not (g == num.ring.one()):
                num = divide_exact(num, g)
                den = divide_exact(den, g)
            _, lc = den.lead()
            if lc < 0:
                num = num.scale(-1)
                den = den.scale(-1)
        self.num = num
        self.den = den

    @classmethod
    def from_int(cls, ring: BaseRing, n: int) -> "PolyFraction":
        return cls(ring.const(n))

    @property
    def ring(self) -> BaseRing:
        return self.num.ring

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_in_S(self) -> bool:
        """Membership in the local ring: reduced denominator is a unit."""
        return is_unit_local(self.den)

    def is_polynomial(self) -> bool:
        return self.den == self.den.ring.one()

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError(f"fraction {self} is not a polynomial")
        return self.num

    def _coerce(self, other):
        if isinstance(other, PolyFraction):
            return other
        if isinstance(other, Poly):
            return PolyFraction(other)
        if isinstance(other, int):
            return PolyFraction(self.ring.const(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return PolyFraction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return PolyFraction(self.num.scale(-1), self.den)

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
        return PolyFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return PolyFraction(self.num * other.den, self.den * other.num)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"PolyFraction({self})"

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"


@dataclass
class RationalMatrix:
    """A matrix over the fraction field, stored row-major."""

    entries: List[List[PolyFraction]]

    def __post_init__(self):
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise DimensionMismatchError("ragged rows")

    @classmethod
    def from_polys(cls, rows: Sequence[Sequence[Poly]]) -> "RationalMatrix":
        return cls([[PolyFraction(p) for p in row] for row in rows])

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0


MatrixElement = Union[Poly, F2Poly]


def _elem_divide(a: MatrixElement, b: MatrixElement) -> MatrixElement:
    if isinstance(a, F2Poly):
        return f2_divide_exact(a, b)
    return divide_exact(a, b)


def bareiss_rank(rows: Sequence[Sequence[MatrixElement]]) -> int:
    """Rank over the fraction field via fraction-free elimination.

    Works for entries in Z[vars] or GF(2)[vars]; both support exact
    multiplication, subtraction and exact division.  Pivots are chosen
    deterministically (first nonzero entry scanning down each column);
    columns with no pivot are skipped, which keeps every intermediate
    entry a minor of the input so the Bareiss division stays exact.
    """
    work = [list(r) for r in rows]
    if not work:
        return 0
    ncols = len(work[0])
    nrows = len(work)
    prev: Optional[MatrixElement] = None
    pivot_row = 0
    for col in range(ncols):
        if pivot_row >= nrows:
            break
        sel = None
        for r in range(pivot_row, nrows):
            if not work[r][col].is_zero():
                sel = r
                break
        if sel is None:
            continue
        work[pivot_row], work[sel] = work[sel], work[pivot_row]
        piv = work[pivot_row][col]
        for i in range(pivot_row + 1, nrows):
            for j in range(col + 1, ncols):
                num = piv * work[i][j] - work[i][col] * work[pivot_row][j]
                work[i][j] = _elem_divide(num, prev) if prev is not None else num
        prev = piv
        pivot_row += 1
    return pivot_row


def generic_rank(m: RationalMatrix) -> int:
    """Rank of a rational matrix as a matrix over the fraction field."""
    if not m.entries:
        return 0
    cleared: List[List[Poly]] = []
    for row in m.entries:
        den = row[0].ring.one() if row else None
        for fr in row:
            den = den * fr.den
        cleared.append([divide_exact(fr.num * den, fr.den) for fr in row])
    return bareiss_rank(cleared)


def solve_fraction_system(
    columns: Sequence[Sequence[PolyFraction]],
    target: Sequence[PolyFraction],
    require_unique: bool = False,
) -> Optional[List[PolyFraction]]:
    """Solve sum_j x_j * columns[j] = target over the fraction field.

    Returns the coefficient list, or None when the system is
    inconsistent.  With require_unique, raises SpanNotFreeError if the
    columns are linearly dependent (solution not unique).
    """
    ncols = len(columns)
    if ncols == 0:
        return [] if all(t.is_zero() for t in target) else None
    ring = columns[0][0].ring
    nrows = len(target)
    for col in columns:
        if len(col) != nrows:
            raise DimensionMismatchError("column length differs from target")
    zero = PolyFraction(ring.zero())
    # Augmented rows: [A | target], eliminate to reduced echelon form.
    aug = [[columns[j][i] for j in range(ncols)] + [target[i]] for i in range(nrows)]
    pivots: List[Tuple[int, int]] = []
    pivot_row = 0
    for col in range(ncols):
        sel = None
        for r in range(pivot_row, nrows):
            if not aug[r][col].is_zero():
                sel = r
                break
        if sel is None:
            continue
        aug[pivot_row], aug[sel] = aug[sel], aug[pivot_row]
        piv = aug[pivot_row][col]
        aug[pivot_row] = [e / piv for e in aug[pivot_row]]
        for r in range(nrows):
            if r != pivot_row and not aug[r][col].is_zero():
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[pivot_row])]
        pivots.append((pivot_row, col))
        pivot_row += 1
    for r in range(pivot_row, nrows):
        if not aug[r][ncols].is_zero():
            return None
    if require_unique and len(pivots) < ncols:
        raise SpanNotFreeError("generating set is linearly dependent")
    out = [zero] * ncols
    for r, c in pivots:
        out[c] = aug[r][ncols]
    return out


def poly_det(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Determinant by cofactor expansion; fine for the small matrices here."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionMismatchError("determinant of a non-square matrix")
    if n == 0:
        raise DimensionMismatchError("empty matrix")
    if n == 1:
        return rows[0][0]
    ring = rows[0][0].ring
    acc = ring.zero()
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = rows[0][j] * poly_det(minor)
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


def fraction_kernel(rows: Sequence[Sequence[PolyFraction]]) -> List[List[PolyFraction]]:
    """Basis of the right kernel of a matrix over the fraction field."""
    if not rows:
        return []
    ncols = len(rows[0])
    ring = rows[0][0].ring
    work = [list(r) for r in rows]
    nrows = len(work)
    pivots: List[Tuple[int, int]] = []
    pivot_row = 0
    for col in range(ncols):
        sel = None
        for r in range(pivot_row, nrows):
            if not work[r][col].is_zero():
                sel = r
                break
        if sel is None:
            continue
        work[pivot_row], work[sel] = work[sel], work[pivot_row]
        piv = work[pivot_row][col]
        work[pivot_row] = [e / piv for e in work[pivot_row]]
        for r in range(nrows):
            if r != pivot_row and not work[r][col].is_zero():
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[pivot_row])]
        pivots.append((pivot_row, col))
        pivot_row += 1
    pivot_cols = {c for _, c in pivots}
    zero = PolyFraction(ring.zero())
    one = PolyFraction(ring.one())
    out = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = [zero] * ncols
        vec[free] = one
        for r, c in pivots:
            vec[c] = -work[r][free]
        out.append(vec)
    return out


# ---------------------------------------------------------------------------
# GF(2) systems with bitmask rows


def f2_row_reduce(rows: List[int]) -> List[int]:
    """Reduced echelon basis of the span of bitmask rows.

    The pivot of a row is its lowest set bit; in the returned basis
    every pivot bit occurs in exactly one row, and rows are sorted by
    pivot.  This canonical form only depends on the span.
    """
    piv: dict = {}
    for row in rows:
        cur = row
        # One pass suffices: stored rows are mutually reduced, so
        # clearing one pivot bit never reintroduces another.
        for p, r in piv.items():
            if (cur >> p) & 1:
                cur ^= r
        if cur:
            low = (cur & -cur).bit_length() - 1
            for p in list(piv):
                if (piv[p] >> low) & 1:
                    piv[p] ^= cur
            piv[low] = cur
    return [piv[p] for p in sorted(piv)]


def f2_rank(rows: List[int]) -> int:
    return len(f2_row_reduce(rows))


def f2_in_span(basis: List[int], vec: int) -> bool:
    """Membership test against a reduced basis from f2_row_reduce."""
    cur = vec
    while cur:
        low = cur & -cur
        hit = None
        for b in basis:
            if (b & -b) == low:
                hit = b
                break
        if hit is None:
            return False
        cur ^= hit
    return True


def f2_spans_equal(rows_a: List[int], rows_b: List[int]) -> bool:
    return f2_row_reduce(rows_a) == f2_row_reduce(rows_b)


def f2_nullspace(eq_rows: List[int], nunknowns: int) -> List[int]:
    """Basis of the solution space of a homogeneous GF(2) system.

    Each equation row is a bitmask over unknowns 0..nunknowns-1.  One
    basis vector per free unknown, in increasing unknown order: the
    free unknown is set to 1 and each pivot unknown of a row containing
    it is forced to 1 (reduced rows contain no other pivots).
    """
    basis = f2_row_reduce(eq_rows)
    pivot_rows = [((b & -b).bit_length() - 1, b) for b in basis]
    pivot_set = {p for p, _ in pivot_rows}
    out = []
    for f in range(nunknowns):
        if f in pivot_set:
            continue
        vec = 1 << f
        for p, b in pivot_rows:
            if (b >> f) & 1:
                vec |= 1 << p
        out.append(vec)
    return out


def f2_solve(eq_rows: List[int], rhs: List[int], nunknowns: int) -> Optional[int]:
    """Particular solution of an inhomogeneous GF(2) system, or None.

    The right-hand side is carried as an extra augmented bit above all
    unknowns; a reduced row consisting of the augmented bit alone means
    the system is inconsistent.  Free unknowns are set to zero.
    """
    aug = [r | (rhs[i] << nunknowns) for i, r in enumerate(eq_rows)]
    basis = f2_row_reduce(aug)
    rhs_bit = 1 << nunknowns
    sol = 0
    for b in basis:
        low = (b & -b).bit_length() - 1
        if low >= nunknowns:
            return None
        if b & rhs_bit:
            sol |= 1 << low
    return sol
