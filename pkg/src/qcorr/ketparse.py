"""Parser for bra-ket state expressions such as ``(|01> - |10>)/sqrt(2)``.

Grammar (whitespace is insignificant)::

    expr   := ["+" | "-"] term (("+" | "-") term)*
    term   := coeff? "*"? atom ("/" scalar)?
    atom   := ket | "(" expr ")"
    ket    := "|" digit+ ">"
    coeff  := scalar | "i" ("/" scalar)? | scalar "i"
    scalar := base ("/" base)?
    base   := number | "sqrt(" number ")"

Coefficients are accumulated exactly as Gaussian-rational combinations of
square roots and converted to floating point once, at the end.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NumericError, ParseError, ShapeError
from .state import PureState, QuditRegister

# squarefree radicand -> (real part, imaginary part)
_Terms = dict[int, tuple[Fraction, Fraction]]

_FACTOR_LIMIT = 10**12


def _squarefree_split(n: int) -> tuple[int, int] | None:
    """Write n = k**2 * r with r squarefree; None if n is too large to factor cheaply."""
    if n > _FACTOR_LIMIT:
        return None
    k, r, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            k *= p
        if n % p == 0:
            n //= p
            r *= p
        p += 1
    return k, r * n


class Surd:
    """Exact value sum_r (a_r + i b_r) sqrt(r) with rational a_r, b_r and squarefree r.

    Falls back to an inexact ``complex`` residue when a radicand cannot be
    factored; that residue is carried alongside and added at conversion time.
    """

    __slots__ = ("terms", "residue")

    def __init__(self, terms: _Terms | None = None, residue: complex = 0j):
        self.terms = {r: c for r, c in (terms or {}).items() if c[0] or c[1]}
        self.residue = residue

    @classmethod
    def rational(cls, q: Fraction) -> "Surd":
        return cls({1: (Fraction(q), Fraction(0))})

    @classmethod
    def imag_unit(cls) -> "Surd":
        return cls({1: (Fraction(0), Fraction(1))})

    @classmethod
    def sqrt(cls, q: Fraction) -> "Surd":
        q = Fraction(q)
        if q < 0:
            raise ValueError("negative radicand")
        # sqrt(p/q) = sqrt(p*q) / q
        split = _squarefree_split(q.numerator * q.denominator)
        if split is None:
            return cls(residue=complex(math.sqrt(q)))
        k, r = split
        return cls({r: (Fraction(k, q.denominator), Fraction(0))})

    def is_zero(self) -> bool:
        return not self.terms and self.residue == 0

    def is_monomial(self) -> bool:
        return len(self.terms) == 1 and self.residue == 0

    def __add__(self, other: "Surd") -> "Surd":
        out = dict(self.terms)
        for r, (a, b) in other.terms.items():
            a0, b0 = out.get(r, (Fraction(0), Fraction(0)))
            out[r] = (a0 + a, b0 + b)
        return Surd(out, self.residue + other.residue)

    def __neg__(self) -> "Surd":
        return Surd({r: (-a, -b) for r, (a, b) in self.terms.items()}, -self.residue)

    def __sub__(self, other: "Surd") -> "Surd":
        return self + (-other)

    def __mul__(self, other: "Surd") -> "Surd":
        out: _Terms = {}
        for r1, (a1, b1) in self.terms.items():
            for r2, (a2, b2) in other.terms.items():
                g = math.gcd(r1, r2)
                r = r1 * r2 // (g * g)
                re, im = (a1 * a2 - b1 * b2) * g, (a1 * b2 + a2 * b1) * g
                a0, b0 = out.get(r, (Fraction(0), Fraction(0)))
                out[r] = (a0 + re, b0 + im)
        residue = (
            self.residue * complex(other)
            + complex(Surd(self.terms)) * other.residue
        )
        return Surd(out, residue)

    def reciprocal(self) -> "Surd":
        """1/x for a monomial x = c*sqrt(r): equals conj(c)*sqrt(r) / (|c|^2 r)."""
        if self.is_zero():
            raise ZeroDivisionError("division by zero")
        if not self.is_monomial():
            return Surd(residue=1 / complex(self))
        ((r, (a, b)),) = self.terms.items()
        den = (a * a + b * b) * r
        return Surd({r: (a / den, -b / den)})

    def __truediv__(self, other: "Surd") -> "Surd":
        return self * other.reciprocal()

    def __complex__(self) -> complex:
        total = self.residue
        for r, (a, b) in self.terms.items():
            s = math.sqrt(r)
            total += complex(float(a) * s, float(b) * s)
        return total

    def __repr__(self):
        parts = [f"({a}+{b}i)*sqrt({r})" for r, (a, b) in sorted(self.terms.items())]
        if self.residue:
            parts.append(repr(self.residue))
        return " + ".join(parts) or "0"


# --------------------------------------------------------------------- AST


@dataclass(frozen=True)
class Ket:
    digits: str
    pos: int


@dataclass(frozen=True)
class Scaled:
    factor: Surd
    body: "Node"


@dataclass(frozen=True)
class Sum:
    terms: tuple[tuple[int, "Node"], ...]


Node = Ket | Scaled | Sum


# ---------------------------------------------------------------- tokenizer

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<ket>\|[0-9]+>)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<sqrt>sqrt\s*\()
  | (?P<i>i)
  | (?P<op>[-+*/()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos] == "|":
                raise ParseError("malformed ket literal", text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(_Tok(kind if kind != "op" else m.group(), m.group(), pos))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            what = self.tok.text or "end of input"
            raise ParseError(f"expected {kind!r}, found {what!r}", self.text, self.tok.pos)
        self.i += 1
        return self.toks[self.i - 1]

    def accept(self, kind: str) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.text, self.tok.pos)
        return node

    def expr(self) -> Node:
        sign = 1
        if self.accept("-"):
            sign = -1
        else:
            self.accept("+")
        terms = [(sign, self.term())]
        while self.tok.kind in ("+", "-"):
            sign = 1 if self.take(self.tok.kind).kind == "+" else -1
            terms.append((sign, self.term()))
        return terms[0][1] if len(terms) == 1 and terms[0][0] == 1 else Sum(tuple(terms))

    def term(self) -> Node:
        factor = None
        if self.tok.kind in ("number", "sqrt"):
            factor = self.scalar()
            if self.accept("i"):
                factor = factor * Surd.imag_unit()
        elif self.accept("i"):
            factor = Surd.imag_unit()
            if self.tok.kind == "/" and self.toks[self.i + 1].kind in ("number", "sqrt"):
                self.take("/")
                factor = factor / self.scalar()
        if factor is not None:
            self.accept("*")
        body = self.atom()
        if self.accept("/"):
            pos = self.tok.pos
            divisor = self.scalar()
            if divisor.is_zero():
                raise ParseError("division by zero", self.text, pos)
            body = Scaled(divisor.reciprocal(), body)
        return body if factor is None else Scaled(factor, body)

    def atom(self) -> Node:
        if self.tok.kind == "ket":
            tok = self.take("ket")
            return Ket(tok.text[1:-1], tok.pos)
        if self.accept("("):
            node = self.expr()
            self.take(")")
            return node
        what = self.tok.text or "end of input"
        raise ParseError(f"expected a ket or '(', found {what!r}", self.text, self.tok.pos)

    def scalar(self) -> Surd:
        value = self.base()
        if self.tok.kind == "/" and self.toks[self.i + 1].kind in ("number", "sqrt"):
            self.take("/")
            pos = self.tok.pos
            den = self.base()
            if den.is_zero():
                raise ParseError("division by zero", self.text, pos)
            value = value / den
        return value

    def base(self) -> Surd:
        if self.accept("sqrt"):
            value = Surd.sqrt(Fraction(self.take("number").text))
            self.take(")")
            return value
        return Surd.rational(Fraction(self.take("number").text))


def parse_ket_ast(text: str) -> Node:
    """Parse ``text`` into an expression tree without evaluating it."""
    return _Parser(text).parse()


def _collect(node: Node, scale: Surd, out: dict[str, Surd]):
    if isinstance(node, Ket):
        out[node.digits] = out.get(node.digits, Surd()) + scale
        return
    if isinstance(node, Scaled):
        _collect(node.body, scale * node.factor, out)
        return
    for sign, sub in node.terms:
        _collect(sub, scale if sign > 0 else -scale, out)


def _kets(node: Node):
    if isinstance(node, Ket):
        yield node
    elif isinstance(node, Scaled):
        yield from _kets(node.body)
    else:
        for _, sub in node.terms:
            yield from _kets(sub)


def exact_coefficients(text: str) -> dict[str, Surd]:
    """Unnormalized exact coefficient of every basis ket appearing in ``text``."""
    coeffs: dict[str, Surd] = {}
    _collect(parse_ket_ast(text), Surd.rational(Fraction(1)), coeffs)
    return coeffs


def parse_ket_expression(text: str, dims: Sequence[int] | QuditRegister | None = None) -> PureState:
    """Parse a ket expression into a normalized :class:`PureState`.

    If ``dims`` is omitted the register is taken to be qubits, one per digit
    of the first ket literal.
    """
    tree = parse_ket_ast(text)
    kets = list(_kets(tree))
    if dims is None:
        dims = (2,) * len(kets[0].digits)
    register = dims if isinstance(dims, QuditRegister) else QuditRegister(tuple(dims))
    for ket in kets:
        if len(ket.digits) != register.n_sites:
            raise ShapeError(
                f"ket |{ket.digits}> at position {ket.pos} has {len(ket.digits)} digits, "
                f"register has {register.n_sites} sites"
            )
        for offset, (ch, d) in enumerate(zip(ket.digits, register.dims)):
            if int(ch) >= d:
                raise ShapeError(
                    f"digit {ch} at position {ket.pos + 1 + offset} out of range for "
                    f"site {offset + 1} of dimension {d}"
                )
    coeffs: dict[str, Surd] = {}
    _collect(tree, Surd.rational(Fraction(1)), coeffs)
    amps = np.zeros(register.total_dim, dtype=np.complex128)
    for digits, c in coeffs.items():
        amps[np.ravel_multi_index(tuple(int(ch) for ch in digits), register.dims)] = complex(c)
    if not np.any(amps):
        raise NumericError(f"expression {text!r} evaluates to the zero vector")
    return PureState(register, amps)
