"""Fraction-free linear algebra: Bareiss, fraction fields, GF(2) bitmasks."""

import random

import pytest
import sympy

from cmwitness.linalg import (
    DimensionMismatchError,
    PolyFraction,
    RationalMatrix,
    SpanNotFreeError,
    bareiss_rank,
    f2_in_span,
    f2_nullspace,
    f2_rank,
    f2_row_reduce,
    f2_solve,
    f2_spans_equal,
    fraction_kernel,
    generic_rank,
    poly_det,
    solve_fraction_system,
)
from cmwitness.poly import BaseRing, Poly, parse_poly

RING = BaseRing(("X", "Y"))
X, Y = RING.gens()
F = PolyFraction


def rand_poly(rng, max_terms=3, max_deg=2, max_coeff=5):
    terms = {}
    for _ in range(rng.randrange(max_terms + 1)):
        e = tuple(rng.randrange(max_deg + 1) for _ in RING.variables)
        c = rng.randrange(-max_coeff, max_coeff + 1)
        terms[e] = terms.get(e, 0) + c
    return Poly(RING, {e: c for e, c in terms.items() if c})


def test_fraction_reduction():
    a = F(X * X - Y * Y, X + Y)
    assert a.num == X - Y and a.den == RING.one()
    assert a.is_polynomial() and a.as_poly() == X - Y
    b = F(X.scale(2), RING.const(4))
    assert b.num == X and b.den == RING.const(2)
    assert not b.is_in_S()
    # An odd constant denominator is a unit of the local ring S.
    assert F(X, RING.const(3)).is_in_S()
    # Sign lives in the numerator.
    c = F(X, -Y)
    assert c.num == -X and c.den == Y


def test_fraction_arithmetic():
    half = F(RING.one(), RING.const(2))
    assert half + half == F(RING.one())
    assert F(X) * F(Y, X) == F(Y)
    assert F(X * Y) / F(Y) == F(X)
    assert F(X) - F(X) == F(RING.zero())
    assert (F(X, Y) + F(Y, X)) * F(X * Y) == F(X * X + Y * Y)
    with pytest.raises(ZeroDivisionError):
        F(X) / F(RING.zero())
    with pytest.raises(ZeroDivisionError):
        F(X, RING.zero())


def test_bareiss_rank_integers_vs_sympy():
    rng = random.Random(404)
    for _ in range(150):
        n, m = rng.randrange(1, 5), rng.randrange(1, 5)
        rows = [[rng.randrange(-6, 7) for _ in range(m)] for _ in range(n)]
        poly_rows = [[RING.const(v) for v in row] for row in rows]
        assert bareiss_rank(poly_rows) == sympy.Matrix(rows).rank()


def test_bareiss_rank_polynomials():
    assert bareiss_rank([[X, Y], [Y, X]]) == 2
    assert bareiss_rank([[X, Y], [X * X, X * Y]]) == 1
    assert bareiss_rank([[RING.zero(), RING.zero()]]) == 0
    assert bareiss_rank([[X + Y]]) == 1
    # Classic Bareiss stress: a matrix whose naive elimination needs
    # fractions but whose rank is clear.
    assert bareiss_rank([[RING.const(2), X], [X, RING.const(2)]]) == 2


def test_generic_rank_matches_bareiss():
    rng = random.Random(405)
    for _ in range(60):
        n, m = rng.randrange(1, 4), rng.randrange(1, 4)
        rows = [[rand_poly(rng) for _ in range(m)] for _ in range(n)]
        rm = RationalMatrix.from_polys(rows)
        assert generic_rank(rm) == bareiss_rank(rows)


def test_solve_fraction_system_unique():
    cols = [[F(RING.one()), F(RING.zero())], [F(X), F(RING.one())]]
    target = [F(Y + X.scale(3)), F(RING.const(3))]
    sol = solve_fraction_system(cols, target, require_unique=True)
    assert sol is not None
    assert sol[0] == F(Y) and sol[1] == F(RING.const(3))


def test_solve_fraction_system_inconsistent():
    cols = [[F(X)], [F(X.scale(2))]]
    assert solve_fraction_system(cols, [F(X)]) is not None
    cols2 = [[F(RING.zero())]]
    assert solve_fraction_system(cols2, [F(Y)]) is None


def test_solve_fraction_system_dependent():
    cols = [[F(X), F(Y)], [F(X.scale(2)), F(Y.scale(2))]]
    with pytest.raises(SpanNotFreeError):
        solve_fraction_system(cols, [F(X), F(Y)], require_unique=True)
    # Without the uniqueness demand a solution is still produced.
    sol = solve_fraction_system(cols, [F(X), F(Y)])
    assert sol is not None


def test_solve_random_roundtrip():
    rng = random.Random(406)
    solved = 0
    while solved < 100:
        ncols = rng.randrange(1, 4)
        nrows = rng.randrange(ncols, 5)
        cols = [
            [F(rand_poly(rng)) for _ in range(nrows)] for _ in range(ncols)
        ]
        coeffs = [F(rand_poly(rng)) for _ in range(ncols)]
        target = [
            sum((coeffs[j] * cols[j][i] for j in range(ncols)), F(RING.zero()))
            for i in range(nrows)
        ]
        sol = solve_fraction_system(cols, target)
        assert sol is not None
        for i in range(nrows):
            acc = F(RING.zero())
            for j in range(ncols):
                acc = acc + sol[j] * cols[j][i]
            assert acc == target[i]
        solved += 1


def test_poly_det():
    assert poly_det([[X]]) == X
    assert poly_det([[X, Y], [Y, X]]) == X * X - Y * Y
    assert poly_det([[X, Y], [X, Y]]).is_zero()
    m3 = [
        [RING.one(), X, Y],
        [RING.zero(), RING.one(), X],
        [RING.zero(), RING.zero(), RING.one()],
    ]
    assert poly_det(m3) == RING.one()
    with pytest.raises(DimensionMismatchError):
        poly_det([[X, Y]])
    with pytest.raises(DimensionMismatchError):
        poly_det([])


def test_poly_det_vs_sympy():
    rng = random.Random(407)
    sx, sy = sympy.symbols("X Y")

    def to_sympy(p):
        out = sympy.Integer(0)
        for (i, j), c in p.sorted_terms():
            out += c * sx**i * sy**j
        return out

    for _ in range(80):
        n = rng.randrange(1, 4)
        rows = [[rand_poly(rng) for _ in range(n)] for _ in range(n)]
        ours = to_sympy(poly_det(rows))
        theirs = sympy.Matrix([[to_sympy(e) for e in row] for row in rows]).det()
        assert sympy.expand(ours - theirs) == 0


def test_fraction_kernel():
    # Rank-1 matrix [[X, Y]] has kernel spanned by (-Y/X, 1) ~ (Y, -X).
    rows = [[F(X), F(Y)]]
    basis = fraction_kernel(rows)
    assert len(basis) == 1
    v = basis[0]
    assert (v[0] * F(X) + v[1] * F(Y)).is_zero()
    # Full-rank square matrix: trivial kernel.
    assert fraction_kernel([[F(X), F(Y)], [F(Y), F(X)]]) == []
    # Zero matrix: full kernel.
    z = F(RING.zero())
    assert len(fraction_kernel([[z, z]])) == 2


def test_fraction_kernel_random():
    rng = random.Random(408)
    for _ in range(60):
        n, m = rng.randrange(1, 4), rng.randrange(1, 4)
        rows = [[F(rand_poly(rng)) for _ in range(m)] for _ in range(n)]
        basis = fraction_kernel(rows)
        assert len(basis) == m - bareiss_rank([[e.num for e in row] for row in rows])
        for v in basis:
            for row in rows:
                acc = F(RING.zero())
                for e, x in zip(row, v):
                    acc = acc + e * x
                assert acc.is_zero()


def brute_force_solutions(eq_rows, nunknowns):
    sols = []
    for assign in range(1 << nunknowns):
        if all(bin(row & assign).count("1") % 2 == 0 for row in eq_rows):
            sols.append(assign)
    return sols


def test_f2_suite_random():
    # 400 random GF(2) systems: row-reduce/rank/nullspace/solve agree
    # with brute-force enumeration over all assignments.
    rng = random.Random(409)
    for _ in range(400):
        nunknowns = rng.randrange(1, 7)
        neq = rng.randrange(0, 5)
        eq_rows = [rng.randrange(1 << nunknowns) for _ in range(neq)]
        sols = brute_force_solutions(eq_rows, nunknowns)
        null = f2_nullspace(eq_rows, nunknowns)
        assert len(sols) == 1 << len(null)
        assert nunknowns - f2_rank(eq_rows) == len(null)
        for v in null:
            assert v in sols
        rhs = [rng.randrange(2) for _ in range(neq)]
        sol = f2_solve(eq_rows, rhs, nunknowns)
        particular = [
            assign
            for assign in range(1 << nunknowns)
            if all(
                bin(row & assign).count("1") % 2 == rhs[i]
                for i, row in enumerate(eq_rows)
            )
        ]
        if sol is None:
            assert particular == []
        else:
            assert sol in particular


def test_f2_span_helpers():
    basis = f2_row_reduce([0b110, 0b011])
    assert f2_in_span(basis, 0b101)
    assert not f2_in_span(basis, 0b100)
    assert f2_spans_equal([0b110, 0b011], [0b101, 0b011])
    assert not f2_spans_equal([0b110], [0b011])
    assert f2_rank([0b110, 0b011, 0b101]) == 2
