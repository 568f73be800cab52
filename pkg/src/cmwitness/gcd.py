"""Multivariate polynomial gcd and exact square detection.

The gcd kernel works on a recursive dense representation: a polynomial
in k variables is a dict {degree in the last variable: polynomial in the
first k-1 variables}, bottoming out at integers.  Gcds are computed by
the classical primitive-part recursion: split off the content with
respect to the last variable, recurse on contents, and run a
subresultant polynomial remainder sequence on the primitive parts.  All
divisions along the way are exact.

The same kernel runs over Z (mod=None) and over GF(2) (mod=2); the GF(2)
gcd is genuinely a separate computation, not a reduction of the integer
one, since gcds do not commute with reduction mod 2.
"""

from __future__ import annotations

import math
from typing import Dict, Optional, Union

from .poly import (
    BaseRing,
    Exponent,
    F2Poly,
    NotDivisibleError,
    Poly,
    grlex_key,
    lift_f2,
)


class BothZeroError(Exception):
    """gcd(0, 0) was requested."""


Rec = Union[int, Dict[int, "Rec"]]


def _rzero(k: int) -> Rec:
    return 0 if k == 0 else {}


def _ris_zero(a: Rec, k: int) -> bool:
    return a == 0 if k == 0 else not a


def _rnormal(d: Dict[int, Rec], k: int) -> Rec:
    # k >= 1; drop zero coefficients.
    return {i: c for i, c in d.items() if not _ris_zero(c, k - 1)}


def _to_rec(p_terms: Dict[Exponent, int], k: int, mod: Optional[int]) -> Rec:
    if k == 0:
        c = p_terms.get((), 0)
        return c % mod if mod else c
    buckets: Dict[int, Dict[Exponent, int]] = {}
    for e, c in p_terms.items():
        buckets.setdefault(e[-1], {})[e[:-1]] = c
    out = {i: _to_rec(sub, k - 1, mod) for i, sub in buckets.items()}
    return _rnormal(out, k)


def _from_rec(a: Rec, k: int) -> Dict[Exponent, int]:
    if k == 0:
        return {(): a} if a else {}
    out: Dict[Exponent, int] = {}
    for i, c in a.items():
        for e, v in _from_rec(c, k - 1).items():
            out[e + (i,)] = v
    return out


def _radd(a: Rec, b: Rec, k: int, mod: Optional[int]) -> Rec:
    if k == 0:
        s = a + b
        return s % mod if mod else s
    out = dict(a)
    for i, c in b.items():
        if i in out:
            out[i] = _radd(out[i], c, k - 1, mod)
        else:
            out[i] = c
    return _rnormal(out, k)


def _rneg(a: Rec, k: int, mod: Optional[int]) -> Rec:
    if k == 0:
        return (-a) % mod if mod else -a
    return {i: _rneg(c, k - 1, mod) for i, c in a.items()}


def _rsub(a: Rec, b: Rec, k: int, mod: Optional[int]) -> Rec:
    return _radd(a, _rneg(b, k, mod), k, mod)


def _rmul(a: Rec, b: Rec, k: int, mod: Optional[int]) -> Rec:
    if k == 0:
        p = a * b
        return p % mod if mod else p
    out: Dict[int, Rec] = {}
    for i, c in a.items():
        for j, d in b.items():
            t = _rmul(c, d, k - 1, mod)
            if i + j in out:
                out[i + j] = _radd(out[i + j], t, k - 1, mod)
            else:
                out[i + j] = t
    return _rnormal(out, k)


def _rdeg(a: Rec, k: int) -> int:
    # Degree in the main (last) variable; -1 for zero.
    if _ris_zero(a, k):
        return -1
    return max(a)


def _rlc(a: Rec, k: int) -> Rec:
    return a[max(a)]


def _rmul_ground(a: Rec, c: Rec, k: int, mod: Optional[int]) -> Rec:
    # Multiply a (level k) by a ground element c (level k-1).
    if _ris_zero(c, k - 1):
        return _rzero(k)
    out = {i: _rmul(coeff, c, k - 1, mod) for i, coeff in a.items()}
    return _rnormal(out, k)


def _rshift_mul(a: Rec, c: Rec, j: int, k: int, mod: Optional[int]) -> Rec:
    # a * c * x_k^j with c a ground element.
    out = {i + j: _rmul(coeff, c, k - 1, mod) for i, coeff in a.items()}
    return _rnormal(out, k)


def _rdivexact(a: Rec, b: Rec, k: int, mod: Optional[int]) -> Rec:
    """Exact division at level k; raises NotDivisibleError on failure."""
    if k == 0:
        if mod:
            if b % mod == 0:
                raise NotDivisibleError("division by zero mod 2")
            return a % mod
        if b == 0 or a % b != 0:
            raise NotDivisibleError("inexact integer division")
        return a // b
    if _ris_zero(b, k):
        raise NotDivisibleError("division by zero polynomial")
    quot: Dict[int, Rec] = {}
    rem = a
    db = _rdeg(b, k)
    lb = _rlc(b, k)
    while not _ris_zero(rem, k):
        dr = _rdeg(rem, k)
        if dr < db:
            raise NotDivisibleError("inexact polynomial division")
        qc = _rdivexact(_rlc(rem, k), lb, k - 1, mod)
        quot[dr - db] = qc
        rem = _rsub(rem, _rshift_mul(b, qc, dr - db, k, mod), k, mod)
    return _rnormal(quot, k)


def _rdiv_ground(a: Rec, c: Rec, k: int, mod: Optional[int]) -> Rec:
    out = {i: _rdivexact(coeff, c, k - 1, mod) for i, coeff in a.items()}
    return _rnormal(out, k)


def _rcontent(a: Rec, k: int, mod: Optional[int]) -> Rec:
    # Gcd of the coefficients of a with respect to the last variable.
    g = _rzero(k - 1)
    for i in sorted(a):
        g = _rgcd(g, a[i], k - 1, mod)
    return g


def _rprem(f: Rec, g: Rec, k: int, mod: Optional[int]) -> Rec:
    """Pseudo-remainder of f by g in the last variable.

    Classical prem: lc(g)^(deg f - deg g + 1) * f = q*g + prem(f, g),
    so every subtraction step stays inside the ground ring.
    """
    df, dg = _rdeg(f, k), _rdeg(g, k)
    if df < dg:
        return f
    lg = _rlc(g, k)
    n = df - dg + 1
    r = f
    while True:
        dr = _rdeg(r, k)
        if dr < dg or _ris_zero(r, k):
            break
        n -= 1
        lr = _rlc(r, k)
        r = _rsub(
            _rmul_ground(r, lg, k, mod),
            _rshift_mul(g, lr, dr - dg, k, mod),
            k,
            mod,
        )
    for _ in range(n):
        r = _rmul_ground(r, lg, k, mod)
    return r


def _rpow(a: Rec, n: int, k: int, mod: Optional[int]) -> Rec:
    out = _rone(k)
    for _ in range(n):
        out = _rmul(out, a, k, mod)
    return out


def _rone(k: int) -> Rec:
    return 1 if k == 0 else {0: _rone(k - 1)}


def _rgcd(a: Rec, b: Rec, k: int, mod: Optional[int]) -> Rec:
    if k == 0:
        if mod:
            return 1 if (a % mod or b % mod) else 0
        return math.gcd(a, b)
    if _ris_zero(a, k):
        return b
    if _ris_zero(b, k):
        return a
    ca = _rcontent(a, k, mod)
    cb = _rcontent(b, k, mod)
    pa = _rdiv_ground(a, ca, k, mod)
    pb = _rdiv_ground(b, cb, k, mod)
    cg = _rgcd(ca, cb, k - 1, mod)
    h = _subresultant_last(pa, pb, k, mod)
    if _rdeg(h, k) == 0:
        # Coprime primitive parts: the whole gcd is the content gcd.
        pg = {0: _rone(k - 1)}
    else:
        pg = _rdiv_ground(h, _rcontent(h, k, mod), k, mod)
    return _rmul_ground(pg, cg, k, mod)


def _subresultant_last(f: Rec, g: Rec, k: int, mod: Optional[int]) -> Rec:
    """Last nonzero element of the subresultant PRS of f and g.

    Brown's subresultant sequence: each pseudo-remainder is divided by a
    predicted ground factor, keeping coefficient growth polynomial while
    using only exact ground divisions.  The bookkeeping of the running
    factors b and c follows Brown's algorithm with c stored negated.
    """
    if _rdeg(f, k) < _rdeg(g, k):
        f, g = g, f
    m = _rdeg(g, k)
    d = _rdeg(f, k) - m
    sign = _rone(k - 1) if (d + 1) % 2 == 0 else _rneg(_rone(k - 1), k - 1, mod)
    h = _rmul_ground(_rprem(f, g, k, mod), sign, k, mod)
    lc = _rlc(g, k)
    c = _rneg(_rpow(lc, d, k - 1, mod), k - 1, mod)
    while not _ris_zero(h, k):
        dh = _rdeg(h, k)
        f, g, m, d = g, h, dh, m - dh
        b = _rneg(_rmul(lc, _rpow(c, d, k - 1, mod), k - 1, mod), k - 1, mod)
        h = _rprem(f, g, k, mod)
        h = _rdiv_ground(h, b, k, mod)
        lc = _rlc(g, k)
        if d > 1:
            c = _rdivexact(
                _rpow(_rneg(lc, k - 1, mod), d, k - 1, mod),
                _rpow(c, d - 1, k - 1, mod),
                k - 1,
                mod,
            )
        else:
            c = _rneg(lc, k - 1, mod)
    return g


def _normalize_sign(p: Poly) -> Poly:
    if p.is_zero():
        return p
    _, c = p.lead()
    return p.scale(-1) if c < 0 else p


def gcd_z(a: Poly, b: Poly) -> Poly:
    """Gcd in Z[variables], including the integer content.

    Normalized so the graded-lex leading coefficient is positive.
    """
    if a.ring != b.ring:
        raise ValueError("operands belong to different rings")
    if a.is_zero() and b.is_zero():
        raise BothZeroError("gcd(0, 0) is undefined")
    k = a.ring.nvars
    ra = _to_rec(dict(a.sorted_terms()), k, None)
    rb = _to_rec(dict(b.sorted_terms()), k, None)
    g = _rgcd(ra, rb, k, None)
    return _normalize_sign(Poly(a.ring, _from_rec(g, k)))


def gcd_q(a: Poly, b: Poly) -> Poly:
    """Primitive-part gcd over Q: the gcd in Q[variables], returned as a
    primitive integer polynomial with positive leading coefficient."""
    g = gcd_z(a, b)
    c = g.integer_content()
    if c > 1:
        g = Poly(g.ring, {e: cf // c for e, cf in g.sorted_terms()})
    return g


def gcd_many_q(polys) -> Poly:
    """Iterated gcd_q over a nonempty sequence, skipping leading zeros."""
    acc = None
    for p in polys:
        if acc is None:
            acc = p
        elif acc.is_zero() and p.is_zero():
            continue
        else:
            acc = gcd_q(acc, p)
    if acc is None:
        raise BothZeroError("gcd of an empty sequence")
    if acc.is_zero():
        raise BothZeroError("gcd(0, ..., 0) is undefined")
    c = acc.integer_content()
    if c > 1:
        acc = Poly(acc.ring, {e: cf // c for e, cf in acc.sorted_terms()})
    return _normalize_sign(acc)


def gcd_f2(a: F2Poly, b: F2Poly) -> F2Poly:
    """Gcd in GF(2)[variables), computed directly in characteristic two."""
    if a.ring != b.ring:
        raise ValueError("operands belong to different rings")
    if a.is_zero() and b.is_zero():
        raise BothZeroError("gcd(0, 0) is undefined")
    k = a.ring.nvars
    ra = _to_rec({e: 1 for e in a.monomials}, k, 2)
    rb = _to_rec({e: 1 for e in b.monomials}, k, 2)
    g = _rgcd(ra, rb, k, 2)
    return F2Poly(a.ring, _from_rec(g, k).keys())


# ---------------------------------------------------------------------------
# Exact squares


def integer_sqrt_exact(n: int) -> Optional[int]:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def poly_sqrt_z(p: Poly) -> Optional[Poly]:
    """Square root in Z[variables] if one exists, else None.

    Greedy extraction in descending graded lex order: the leading term
    of any root is forced, and after subtracting, each further root term
    is forced by dividing the remainder's leading term by twice the
    root's leading term.  Soundness is rechecked by squaring at the end.
    """
    if p.is_zero():
        return p.ring.zero()
    e, c = p.lead()
    if any(k % 2 for k in e) or c < 0:
        return None
    c0 = integer_sqrt_exact(c)
    if c0 is None:
        return None
    root = Poly(p.ring, {tuple(k // 2 for k in e): c0})
    lead2 = root.scale(2)
    e2, c2 = lead2.lead()
    while True:
        rem = p - root * root
        if rem.is_zero():
            break
        er, cr = rem.lead()
        et = _sub_exp(er, e2)
        if et is None or cr % c2 != 0 or grlex_key(er) >= grlex_key(e):
            return None
        root = root + Poly(p.ring, {et: cr // c2})
    return root if root * root == p else None


def _sub_exp(e1: Exponent, e2: Exponent) -> Optional[Exponent]:
    out = []
    for a, b in zip(e1, e2):
        if a < b:
            return None
        out.append(a - b)
    return tuple(out)


def is_ring_square(p: Poly) -> Optional[Poly]:
    """Decide whether p is the square of an element of S.

    For an integer polynomial this is equivalent to being a square in
    Q[variables]: a unit u of S with u = (p/q)^2 forces, by comparing
    irreducible factorizations in the UFD Z[variables], every
    irreducible (unit or not) to occur to even multiplicity.  In turn a
    Q[variables] square with integer coefficients is an integer
    polynomial square up to a perfect-square content.  Returns a root
    or None.
    """
    if p.is_zero():
        return p.ring.zero()
    content = p.integer_content()
    croot = integer_sqrt_exact(content)
    if croot is None:
        return None
    pp = Poly(p.ring, {e: c // content for e, c in p.sorted_terms()})
    root = poly_sqrt_z(pp)
    if root is None:
        return None
    return root.scale(croot)


def partial_derivative_joint_gcd(p: Poly) -> Poly:
    """gcd_q of p together with all of its partial derivatives."""
    from .poly import partial_derivative

    seq = [p]
    for i in range(p.ring.nvars):
        seq.append(partial_derivative(p, i))
    return gcd_many_q(seq)


def gcd_f2_lifted(a: Poly, b: Poly) -> F2Poly:
    """Convenience: gcd in GF(2) of the reductions of integer polys."""
    from .poly import reduce_mod2

    return gcd_f2(reduce_mod2(a), reduce_mod2(b))
