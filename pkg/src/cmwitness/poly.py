"""Sparse exact polynomial arithmetic over Z and over GF(2).

The ambient coefficient ring everywhere in this package is

    S = Z[x1, ..., xn] localized at the maximal ideal (2, x1, ..., xn),

an unramified regular local ring of mixed characteristic two.  An element
of S is represented by an integer polynomial; a polynomial is a unit of S
exactly when its constant coefficient is odd, so no fractions are needed
until linear algebra over the fraction field (see linalg.py).

A polynomial is stored as a dict mapping exponent tuples to nonzero
integer coefficients.  The monomial order used for leading terms,
canonical printing and exact division is graded lexicographic: compare
total degree first, then the exponent tuple lexicographically.

Residues mod 2 live in GF(2)[x1, ..., xn] and are stored as a frozenset
of exponent tuples (the monomials with coefficient 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Optional, Tuple

Exponent = Tuple[int, ...]


class PolyError(Exception):
    """Base class for errors raised by the polynomial layer."""


class PolyParseError(PolyError):
    """Syntax error while parsing a polynomial string."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariableError(PolyParseError):
    """A name in the input is not a variable of the ring."""


class NotDivisibleError(PolyError):
    """Exact division was requested but the quotient does not exist."""


@dataclass(frozen=True)
class BaseRing:
    """The ring S = Z[variables] localized at (2, variables).

    Only the ambient polynomial variables are recorded; the residual
    characteristic is always two.
    """

    variables: Tuple[str, ...]

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        for v in self.variables:
            if not v.isidentifier():
                raise ValueError(f"invalid variable name: {v!r}")

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def zero_exponent(self) -> Exponent:
        return (0,) * self.nvars

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, n: int) -> "Poly":
        if n == 0:
            return Poly(self, {})
        return Poly(self, {self.zero_exponent(): int(n)})

    def var(self, name: str) -> "Poly":
        i = self.variables.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self) -> Tuple["Poly", ...]:
        return tuple(self.var(v) for v in self.variables)

    def parse(self, text: str) -> "Poly":
        return parse_poly(text, self)


def grlex_key(e: Exponent) -> Tuple[int, Exponent]:
    """Sort key realizing the graded lexicographic order."""
    return (sum(e), e)


def _check_same_ring(a, b):
    if a.ring != b.ring:
        raise ValueError("operands belong to different rings")


class Poly:
    """An element of Z[variables], viewed inside the local ring S."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: BaseRing, terms: Dict[Exponent, int]):
        self.ring = ring
        # Canonical form: no zero coefficients, plain ints.
        self._terms = {e: int(c) for e, c in terms.items() if c != 0}
        self._hash: Optional[int] = None

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def sorted_terms(self) -> Iterator[Tuple[Exponent, int]]:
        """Terms in descending graded lex order (deterministic)."""
        for e in sorted(self._terms, key=grlex_key, reverse=True):
            yield e, self._terms[e]

    def coefficient(self, e: Exponent) -> int:
        return self._terms.get(tuple(e), 0)

    def constant_coeff(self) -> int:
        return self._terms.get(self.ring.zero_exponent(), 0)

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def lead(self) -> Tuple[Exponent, int]:
        """Leading (exponent, coefficient) under graded lex."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self._terms, key=grlex_key)
        return e, self._terms[e]

    def num_terms(self) -> int:
        return len(self._terms)

    def integer_content(self) -> int:
        """Nonnegative gcd of all coefficients (0 for the zero poly)."""
        g = 0
        for c in self._terms.values():
            g = _int_gcd(g, c)
        return g

    def is_unit(self) -> bool:
        """Unit of the local ring S: odd constant coefficient."""
        return self.constant_coeff() % 2 != 0

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self._terms)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        _check_same_ring(self, other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Poly(self.ring, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self._terms.items()})

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
        _check_same_ring(self, other)
        terms: Dict[Exponent, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return Poly(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def scale(self, n: int) -> "Poly":
        if n == 0:
            return self.ring.zero()
        return Poly(self.ring, {e: c * n for e, c in self._terms.items()})

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    # -- comparison ---------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({format_poly(self)})"

    def __str__(self):
        return format_poly(self)


def _int_gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _exp_sub(e1: Exponent, e2: Exponent) -> Optional[Exponent]:
    """Componentwise difference, or None when e2 does not divide e1."""
    out = []
    for a, b in zip(e1, e2):
        if a < b:
            return None
        out.append(a - b)
    return tuple(out)


def divide_exact(a: Poly, b: Poly) -> Poly:
    """Exact quotient a / b in Z[variables]; NotDivisibleError otherwise.

    Leading-term division under graded lex: when a = q*b the leading
    term of a is the product of the leading terms of q and b, so each
    round strips one term of q and the leading term of the remainder
    strictly decreases in a well-order.
    """
    _check_same_ring(a, b)
    if b.is_zero():
        raise NotDivisibleError("division by zero polynomial")
    quot: Dict[Exponent, int] = {}
    rem = a
    eb, cb = b.lead()
    while not rem.is_zero():
        er, cr = rem.lead()
        e = _exp_sub(er, eb)
        if e is None or cr % cb != 0:
            raise NotDivisibleError(
                f"{format_poly(a)} is not divisible by {format_poly(b)}"
            )
        q = cr // cb
        quot[e] = q
        rem = rem - Poly(a.ring, {e: q}) * b
    return Poly(a.ring, quot)


def is_divisible(a: Poly, b: Poly) -> bool:
    try:
        divide_exact(a, b)
        return True
    except NotDivisibleError:
        return False


def partial_derivative(p: Poly, index: int) -> Poly:
    """Formal partial derivative with respect to variables[index]."""
    terms: Dict[Exponent, int] = {}
    for e, c in p._terms.items():
        k = e[index]
        if k == 0:
            continue
        e2 = list(e)
        e2[index] = k - 1
        e2 = tuple(e2)
        terms[e2] = terms.get(e2, 0) + c * k
    return Poly(p.ring, terms)


def substitute_ints(p: Poly, assignment: Dict[str, int], target: BaseRing) -> Poly:
    """Evaluate some variables at integers, landing in the target ring.

    Every variable of p's ring must either appear in the assignment or
    be a variable of the target ring.
    """
    src = p.ring
    positions = []
    for i, v in enumerate(src.variables):
        if v in assignment:
            positions.append(("int", i, int(assignment[v])))
        else:
            positions.append(("var", i, target.variables.index(v)))
    terms: Dict[Exponent, int] = {}
    for e, c in p._terms.items():
        out_e = [0] * target.nvars
        coeff = c
        for kind, i, j in positions:
            if kind == "int":
                coeff *= j ** e[i]
            else:
                out_e[j] += e[i]
        key = tuple(out_e)
        s = terms.get(key, 0) + coeff
        if s:
            terms[key] = s
        else:
            terms.pop(key, None)
    return Poly(target, terms)


def is_unit_local(p: Poly) -> bool:
    """Membership in S^* for S = Z[x]_(2,x): odd constant coefficient."""
    return p.is_unit()


# ---------------------------------------------------------------------------
# GF(2) residues


class F2Poly:
    """An element of GF(2)[variables]: the set of monomials present."""

    __slots__ = ("ring", "monomials")

    def __init__(self, ring: BaseRing, monomials: Iterable[Exponent]):
        self.ring = ring
        self.monomials = frozenset(tuple(e) for e in monomials)

    def is_zero(self) -> bool:
        return not self.monomials

    def __bool__(self) -> bool:
        return bool(self.monomials)

    def is_one(self) -> bool:
        return self.monomials == {self.ring.zero_exponent()}

    def is_unit(self) -> bool:
        """Unit of the localized residue ring: constant term present."""
        return self.ring.zero_exponent() in self.monomials

    def constant_term(self) -> int:
        return 1 if self.ring.zero_exponent() in self.monomials else 0

    def total_degree(self) -> int:
        if not self.monomials:
            return -1
        return max(sum(e) for e in self.monomials)

    def lead(self) -> Exponent:
        if not self.monomials:
            raise ValueError("zero polynomial has no leading term")
        return max(self.monomials, key=grlex_key)

    def sorted_monomials(self) -> Iterator[Exponent]:
        return iter(sorted(self.monomials, key=grlex_key, reverse=True))

    def __add__(self, other):
        if not isinstance(other, F2Poly):
            return NotImplemented
        _check_same_ring(self, other)
        return F2Poly(self.ring, self.monomials ^ other.monomials)

    # Subtraction coincides with addition in characteristic two.
    __sub__ = __add__

    def __mul__(self, other):
        if not isinstance(other, F2Poly):
            return NotImplemented
        _check_same_ring(self, other)
        acc: Dict[Exponent, int] = {}
        for e1 in self.monomials:
            for e2 in other.monomials:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) ^ 1
        return F2Poly(self.ring, (e for e, c in acc.items() if c))

    def __pow__(self, n: int):
        out = F2Poly(self.ring, {self.ring.zero_exponent()})
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, F2Poly):
            return NotImplemented
        return self.ring == other.ring and self.monomials == other.monomials

    def __hash__(self):
        return hash((self.ring, self.monomials))

    def __repr__(self):
        return f"F2Poly({format_f2poly(self)})"

    def __str__(self):
        return format_f2poly(self)


def f2_zero(ring: BaseRing) -> F2Poly:
    return F2Poly(ring, ())


def f2_one(ring: BaseRing) -> F2Poly:
    return F2Poly(ring, (ring.zero_exponent(),))


def reduce_mod2(p: Poly) -> F2Poly:
    """Image of p in GF(2)[variables]: monomials with odd coefficient."""
    return F2Poly(p.ring, (e for e, c in p._terms.items() if c % 2))


def lift_f2(r: F2Poly) -> Poly:
    """Canonical lift with all coefficients 0 or 1."""
    return Poly(r.ring, {e: 1 for e in r.monomials})


def is_even(p: Poly) -> bool:
    """Membership in 2S: all coefficients even."""
    return reduce_mod2(p).is_zero()


def half(p: Poly) -> Poly:
    """Exact division by 2; NotDivisibleError when p has an odd coefficient."""
    if not is_even(p):
        raise NotDivisibleError("polynomial is not divisible by 2")
    return Poly(p.ring, {e: c // 2 for e, c in p._terms.items()})


def sqrt_f2(r: F2Poly) -> Optional[F2Poly]:
    """Square root in GF(2)[variables], or None.

    Squaring is the Frobenius endomorphism, so r is a square exactly
    when every exponent in every monomial is even, and the root is
    obtained by halving all exponents.
    """
    roots = []
    for e in r.monomials:
        if any(k % 2 for k in e):
            return None
        roots.append(tuple(k // 2 for k in e))
    return F2Poly(r.ring, roots)


def f2_divide_exact(a: F2Poly, b: F2Poly) -> F2Poly:
    """Exact quotient in GF(2)[variables]; NotDivisibleError otherwise."""
    _check_same_ring(a, b)
    if b.is_zero():
        raise NotDivisibleError("division by zero polynomial")
    quot = set()
    rem = a
    eb = b.lead()
    while not rem.is_zero():
        er = rem.lead()
        e = _exp_sub(er, eb)
        if e is None:
            raise NotDivisibleError(
                f"{format_f2poly(a)} is not divisible by {format_f2poly(b)} mod 2"
            )
        quot.add(e)
        rem = rem + F2Poly(a.ring, (e,)) * b
    return F2Poly(a.ring, quot)


def f2_is_divisible(a: F2Poly, b: F2Poly) -> bool:
    try:
        f2_divide_exact(a, b)
        return True
    except NotDivisibleError:
        return False


# ---------------------------------------------------------------------------
# Parsing


_TOKEN_KINDS = ("INT", "NAME", "OP", "END")


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("INT", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("NAME", text[i:j], i))
            i = j
            continue
        if ch in "+-*^()":
            tokens.append(("OP", ch, i))
            i += 1
            continue
        raise PolyParseError(f"unexpected character {ch!r}", i)
    tokens.append(("END", "", n))
    return tokens


class _Parser:
    """Recursive-descent parser for the polynomial expression grammar.

    expr   := ('+' | '-')? term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' INT)?
    base   := INT | NAME | '(' expr ')'
    """

    def __init__(self, text: str, ring: BaseRing):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.ring = ring

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str):
        kind, val, p = self.peek()
        if kind != "OP" or val != op:
            raise PolyParseError(f"expected {op!r}", p)
        return self.advance()

    def parse(self) -> Poly:
        p = self.parse_expr()
        kind, val, pos = self.peek()
        if kind != "END":
            raise PolyParseError(f"unexpected token {val!r}", pos)
        return p

    def parse_expr(self) -> Poly:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "OP" and val in "+-":
            self.advance()
            if val == "-":
                sign = -1
        acc = self.parse_term().scale(sign)
        while True:
            kind, val, _ = self.peek()
            if kind == "OP" and val in "+-":
                self.advance()
                t = self.parse_term()
                acc = acc + t if val == "+" else acc - t
            else:
                return acc

    def parse_term(self) -> Poly:
        acc = self.parse_factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "OP" and val == "*":
                self.advance()
                acc = acc * self.parse_factor()
            else:
                return acc

    def parse_factor(self) -> Poly:
        base = self.parse_base()
        kind, val, _ = self.peek()
        if kind == "OP" and val == "^":
            self.advance()
            k, v, p = self.peek()
            if k != "INT":
                raise PolyParseError("expected integer exponent", p)
            self.advance()
            return base ** int(v)
        return base

    def parse_base(self) -> Poly:
        kind, val, pos = self.advance()
        if kind == "INT":
            return self.ring.const(int(val))
        if kind == "NAME":
            if val not in self.ring.variables:
                raise UnknownVariableError(f"unknown variable {val!r}", pos)
            return self.ring.var(val)
        if kind == "OP" and val == "(":
            p = self.parse_expr()
            self.expect_op(")")
            return p
        raise PolyParseError(f"unexpected token {val!r}", pos)


def parse_poly(text: str, ring: BaseRing) -> Poly:
    """Parse a polynomial expression over the given ring."""
    return _Parser(text, ring).parse()


# ---------------------------------------------------------------------------
# Canonical printing


def _format_monomial(ring: BaseRing, e: Exponent) -> str:
    parts = []
    for name, k in zip(ring.variables, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    """Canonical string: descending graded lex, explicit '*' and '^'."""
    if p.is_zero():
        return "0"
    chunks = []
    for e, c in p.sorted_terms():
        mono = _format_monomial(p.ring, e)
        if not mono:
            chunks.append(str(c))
        elif c == 1:
            chunks.append(mono)
        elif c == -1:
            chunks.append(f"-{mono}")
        else:
            chunks.append(f"{c}*{mono}")
    out = chunks[0]
    for s in chunks[1:]:
        out += s if s.startswith("-") else "+" + s
    return out


def format_f2poly(r: F2Poly) -> str:
    """Canonical string for a GF(2) polynomial (coefficients are 1)."""
    if r.is_zero():
        return "0"
    chunks = []
    for e in r.sorted_monomials():
        mono = _format_monomial(r.ring, e)
        chunks.append(mono if mono else "1")
    return "+".join(chunks)
