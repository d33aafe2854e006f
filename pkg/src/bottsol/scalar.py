"""Exact sparse multivariate polynomial and rational-function arithmetic.

Every tensor entry in this package is a polynomial (or a quotient of two
polynomials) over a fixed, closed alphabet of named parameters with
arbitrary-precision rational coefficients:

    PARAMS = (alpha, beta, gamma, delta, a0, mu, mu1, mu2, mu3)

A polynomial is a map from exponent vectors (one non-negative integer per
parameter) to nonzero Fractions.  The empty map is the zero polynomial.
Because the representation is canonical, symbolic equality is plain map
equality and zero-testing is `not terms`.

Monomials are ordered graded-lexicographically with the parameter order
above, which makes printed forms and golden fixtures byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

PARAMS = ("alpha", "beta", "gamma", "delta", "a0", "mu", "mu1", "mu2", "mu3")
NVARS = len(PARAMS)
_INDEX = {name: i for i, name in enumerate(PARAMS)}

Exponent = tuple  # length-NVARS tuple of non-negative ints


class ScalarError(Exception):
    """Base class for kernel errors."""


class UnknownParameter(ScalarError):
    """A name outside the closed parameter alphabet was used."""


class UnboundParameter(ScalarError):
    """Numeric evaluation hit a parameter with no value."""


class DenominatorZero(ScalarError):
    """A denominator vanished (numerically or identically)."""


class ParseError(ScalarError):
    """Malformed coefficient expression."""


def _grlex_key(exp: Exponent):
    # Sort key so that sorted(..., reverse=True) lists the leading monomial first.
    return (sum(exp), exp)


class Poly:
    """Immutable sparse polynomial over PARAMS with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Exponent, Fraction] | None = None):
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return Poly()

    @staticmethod
    def const(value) -> "Poly":
        c = Fraction(value)
        if c == 0:
            return Poly()
        return Poly({(0,) * NVARS: c})

    @staticmethod
    def var(name: str) -> "Poly":
        if name not in _INDEX:
            raise UnknownParameter(f"{name!r} is not in the parameter alphabet {PARAMS}")
        exp = [0] * NVARS
        exp[_INDEX[name]] = 1
        return Poly({tuple(exp): Fraction(1)})

    # -- ring operations ---------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return NotImplemented

    def __add__(self, other) -> "Poly":
        other = Poly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = Poly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly._coerce(other) + (-self)

    def __mul__(self, other) -> "Poly":
        other = Poly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Poly.const(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        other = Poly._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ScalarError("not a constant polynomial")
        return next(iter(self.terms.values()), Fraction(0))

    def params(self) -> set:
        used = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    used.add(PARAMS[i])
        return used

    def degree_in(self, names: Iterable[str]) -> int:
        """Maximum joint degree of the given parameters over all terms."""
        idx = [_INDEX[n] for n in names]
        if not self.terms:
            return 0
        return max(sum(e[i] for i in idx) for e in self.terms)

    def leading(self) -> tuple:
        """(exponent, coefficient) of the grlex-leading term; zero poly -> ((0,..),0)."""
        if not self.terms:
            return ((0,) * NVARS, Fraction(0))
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def content(self) -> Fraction:
        """Positive rational c such that self/c has coprime integer coefficients."""
        if not self.terms:
            return Fraction(1)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator))
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def scaled(self, factor) -> "Poly":
        f = Fraction(factor)
        return Poly({e: c * f for e, c in self.terms.items()})

    def primitive(self) -> "Poly":
        """Divide out content and make the leading coefficient positive."""
        if not self.terms:
            return self
        p = self.scaled(1 / self.content())
        if p.leading()[1] < 0:
            p = -p
        return p

    def coefficient_of(self, name: str) -> "Poly":
        """Coefficient of the degree-1 part in `name` (the rest of each term)."""
        i = _INDEX[name]
        out = {}
        for e, c in self.terms.items():
            if e[i] == 1:
                reste = list(e)
                reste[i] = 0
                out[tuple(reste)] = out.get(tuple(reste), Fraction(0)) + c
        return Poly(out)

    def drop(self, names: Iterable[str]) -> "Poly":
        """Terms of self free of all the given parameters."""
        idx = [_INDEX[n] for n in names]
        return Poly({e: c for e, c in self.terms.items() if all(e[i] == 0 for i in idx)})

    # -- substitution / evaluation ------------------------------------------

    def substitute(self, bindings: Mapping[str, "RatFun | Poly | int | Fraction"]) -> "RatFun":
        """Simultaneous substitution; unbound parameters pass through."""
        binds = {}
        for name, value in bindings.items():
            if name not in _INDEX:
                raise UnknownParameter(f"{name!r} is not in the parameter alphabet {PARAMS}")
            binds[name] = RatFun.coerce(value)
        total = RatFun.zero()
        for e, c in self.terms.items():
            term = RatFun.from_poly(Poly.const(c))
            for i, k in enumerate(e):
                if not k:
                    continue
                name = PARAMS[i]
                base = binds.get(name, RatFun.from_poly(Poly.var(name)))
                term = term * base.pow(k)
            total = total + term
        return total

    def eval_at(self, point: Mapping[str, Fraction]) -> Fraction:
        """Exact value at a fully rational point."""
        missing = self.params() - set(point)
        if missing:
            raise UnboundParameter(f"no value for {sorted(missing)}")
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    term *= Fraction(point[PARAMS[i]]) ** k
            total += term
        return total

    # -- printing ------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                PARAMS[i] if k == 1 else f"{PARAMS[i]}^{k}"
                for i, k in enumerate(e)
                if k
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self})"


def poly_div_exact(num: Poly, den: Poly) -> Poly | None:
    """Return q with num == q*den, or None when den does not divide num."""
    if den.is_zero():
        return None
    if num.is_zero():
        return Poly.zero()
    lead_e, lead_c = den.leading()
    q: dict = {}
    rest = num
    while not rest.is_zero():
        e, c = rest.leading()
        qe = tuple(a - b for a, b in zip(e, lead_e))
        if any(k < 0 for k in qe):
            return None
        qc = c / lead_c
        q[qe] = q.get(qe, Fraction(0)) + qc
        rest = rest - Poly({qe: qc}) * den
    return Poly(q)


@dataclass(frozen=True)
class RatFun:
    """Quotient of two Polys, normalized enough that zero-testing is exact.

    Normalization: nonzero denominator, monic denominator (grlex leading
    coefficient 1), and syntactic cancellation when one side exactly divides
    the other.  Equality is decided by cross-multiplication, so the missing
    full multivariate gcd never affects correctness.
    """

    num: Poly
    den: Poly

    @staticmethod
    def make(num: Poly, den: Poly) -> "RatFun":
        if den.is_zero():
            raise DenominatorZero("identically zero denominator")
        if num.is_zero():
            return RatFun(Poly.zero(), Poly.const(1))
        q = poly_div_exact(num, den)
        if q is not None:
            num, den = q, Poly.const(1)
        else:
            q = poly_div_exact(den, num)
            if q is not None:
                num, den = Poly.const(1), q
        lead = den.leading()[1]
        return RatFun(num.scaled(1 / lead), den.scaled(1 / lead))

    @staticmethod
    def zero() -> "RatFun":
        return RatFun(Poly.zero(), Poly.const(1))

    @staticmethod
    def from_poly(p: Poly) -> "RatFun":
        return RatFun(p, Poly.const(1))

    @staticmethod
    def coerce(value) -> "RatFun":
        if isinstance(value, RatFun):
            return value
        if isinstance(value, Poly):
            return RatFun.from_poly(value)
        if isinstance(value, (int, Fraction)):
            return RatFun.from_poly(Poly.const(value))
        raise TypeError(f"cannot interpret {value!r} as a rational function")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> Poly:
        if not self.is_poly():
            raise ScalarError(f"{self} is not polynomial")
        return self.num.scaled(1 / self.den.constant_value())

    def __add__(self, other) -> "RatFun":
        other = RatFun.coerce(other)
        return RatFun.make(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFun":
        return RatFun(-self.num, self.den)

    def __sub__(self, other) -> "RatFun":
        return self + (-RatFun.coerce(other))

    def __rsub__(self, other) -> "RatFun":
        return RatFun.coerce(other) + (-self)

    def __mul__(self, other) -> "RatFun":
        other = RatFun.coerce(other)
        return RatFun.make(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFun":
        other = RatFun.coerce(other)
        if other.num.is_zero():
            raise DenominatorZero("division by the zero rational function")
        return RatFun.make(self.num * other.den, self.den * other.num)

    def pow(self, n: int) -> "RatFun":
        if n < 0:
            raise ValueError("use explicit division for negative powers")
        out = RatFun.from_poly(Poly.const(1))
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        try:
            other = RatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def substitute(self, bindings: Mapping[str, "RatFun | Poly | int | Fraction"]) -> "RatFun":
        den = self.den.substitute(bindings)
        if den.is_zero():
            raise DenominatorZero(f"substitution makes the denominator of {self} vanish")
        return self.num.substitute(bindings) / den

    def eval_at(self, point: Mapping[str, Fraction]) -> Fraction:
        den = self.den.eval_at(point)
        if den == 0:
            raise DenominatorZero(f"denominator of {self} vanishes at {dict(point)}")
        return self.num.eval_at(point) / den

    def params(self) -> set:
        return self.num.params() | self.den.params()

    def __str__(self) -> str:
        if self.is_poly():
            return str(self.as_poly())
        num = str(self.num)
        if len(self.num.terms) > 1:
            num = f"({num})"
        den = str(self.den)
        if len(self.den.terms) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RatFun({self})"


def poly_arith(a: Poly, b: Poly, kind: str) -> Poly:
    """Ring operation dispatch: kind in {'add','sub','mul'}."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown operation {kind!r}")


# --------------------------------------------------------------------------
# Expression grammar
#
#   expr   := term (('+'|'-') term)*
#   term   := factor (('*'|'/') factor)*
#   factor := '-' factor | atom ('^' uint)?
#   atom   := name | uint | '(' expr ')'
#
# Names are the nine parameters; 'eta' is admitted only when a numeric value
# for it is supplied (it is substituted during parsing, so it never reaches a
# Poly); e1/e2/e3 are admitted only through parse_vector.
# --------------------------------------------------------------------------

_BASIS = ("e1", "e2", "e3")


class _Tokens:
    def __init__(self, text: str):
        self.toks = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch in "+-*/^()":
                self.toks.append(ch)
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.toks.append(text[i:j])
                i = j
            elif ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.toks.append(text[i:j])
                i = j
            else:
                raise ParseError(f"unexpected character {ch!r} in {text!r}")
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def next(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of expression")
        self.pos += 1
        return tok


class _ExprParser:
    """Parses into RatFun over PARAMS extended by e1,e2,e3 tracked separately.

    A value is a map from basis exponent vector (3-tuple) to RatFun; pure
    scalars live at (0,0,0).  Products may not exceed total basis degree 1,
    which is exactly what connection/curvature table rows need.
    """

    def __init__(self, text: str, eta=None, vector=False):
        self.toks = _Tokens(text)
        self.eta = None if eta is None else Fraction(eta)
        self.vector = vector

    def parse(self):
        value = self._expr()
        if self.toks.peek() is not None:
            raise ParseError(f"trailing input at token {self.toks.peek()!r}")
        return value

    def _expr(self):
        value = self._term()
        while self.toks.peek() in ("+", "-"):
            op = self.toks.next()
            rhs = self._term()
            value = self._combine(value, rhs, 1 if op == "+" else -1)
        return value

    @staticmethod
    def _combine(a, b, sign):
        out = dict(a)
        for e, c in b.items():
            cur = out.get(e, RatFun.zero())
            out[e] = cur + (c if sign > 0 else -c)
        return {e: c for e, c in out.items() if not c.is_zero()}

    def _term(self):
        value = self._factor()
        while self.toks.peek() in ("*", "/"):
            op = self.toks.next()
            rhs = self._factor()
            value = self._mul(value, rhs, invert=(op == "/"))
        return value

    def _mul(self, a, b, invert=False):
        if invert:
            if list(b) not in ([], [(0, 0, 0)]):
                raise ParseError("division by a vector expression")
            scalar = b.get((0, 0, 0), RatFun.zero())
            if scalar.is_zero():
                raise DenominatorZero("division by zero in expression")
            return {e: c / scalar for e, c in a.items()}
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                if sum(e) > 1:
                    raise ParseError("product of basis vectors is not a vector")
                cur = out.get(e, RatFun.zero())
                out[e] = cur + c1 * c2
        return {e: c for e, c in out.items() if not c.is_zero()}

    def _factor(self):
        if self.toks.peek() == "-":
            self.toks.next()
            inner = self._factor()
            return {e: -c for e, c in inner.items()}
        value = self._atom()
        if self.toks.peek() == "^":
            self.toks.next()
            exp_tok = self.toks.next()
            if not exp_tok.isdigit():
                raise ParseError(f"exponent must be a non-negative integer, got {exp_tok!r}")
            n = int(exp_tok)
            out = {(0, 0, 0): RatFun.from_poly(Poly.const(1))}
            for _ in range(n):
                out = self._mul(out, value)
            return out
        return value

    def _atom(self):
        tok = self.toks.next()
        if tok == "(":
            inner = self._expr()
            if self.toks.next() != ")":
                raise ParseError("missing closing parenthesis")
            return inner
        if tok.isdigit():
            return {(0, 0, 0): RatFun.from_poly(Poly.const(int(tok)))}
        if tok in _BASIS:
            if not self.vector:
                raise ParseError(f"basis vector {tok} not allowed in a scalar expression")
            e = [0, 0, 0]
            e[_BASIS.index(tok)] = 1
            return {tuple(e): RatFun.from_poly(Poly.const(1))}
        if tok == "eta":
            if self.eta is None:
                raise ParseError("eta is only meaningful with an explicit sign (+1 or -1)")
            return {(0, 0, 0): RatFun.from_poly(Poly.const(self.eta))}
        if tok in _INDEX:
            return {(0, 0, 0): RatFun.from_poly(Poly.var(tok))}
        raise ParseError(f"unknown name {tok!r}")


def parse_ratfun(text: str, eta=None) -> RatFun:
    value = _ExprParser(text, eta=eta, vector=False).parse()
    return value.get((0, 0, 0), RatFun.zero())


def parse_poly(text: str, eta=None) -> Poly:
    r = parse_ratfun(text, eta=eta)
    if not r.is_poly():
        raise ParseError(f"{text!r} is not polynomial (denominator {r.den})")
    return r.as_poly()


def parse_vector(text: str, eta=None) -> tuple:
    """Parse 'a*e1 + b*e2 + c*e3' into a triple of Polys."""
    value = _ExprParser(text, eta=eta, vector=True).parse()
    comps = []
    scalar_part = value.get((0, 0, 0), RatFun.zero())
    if not scalar_part.is_zero():
        raise ParseError(f"{text!r} has a scalar part; vector rows must be pure vectors")
    for k in range(3):
        e = [0, 0, 0]
        e[k] = 1
        r = value.get(tuple(e), RatFun.zero())
        if not r.is_poly():
            raise ParseError(f"component {k + 1} of {text!r} is not polynomial")
        comps.append(r.as_poly())
    return tuple(comps)
