"""Symbolic order types: finite sums of omega powers and their reverses.

An expression is a finite left-to-right concatenation of terms, each one of

    FiniteTerm(m)            a block of m points,
    OrdinalTerm(e, c)        w^e * c   (c stacked copies of the ordinal w^e),
    ReversedTerm(e, c)       rev(w^e) * c  (the mirror image of w^e, c copies).

Exponents are themselves expressions, restricted to pure ordinals. The empty
term sequence denotes the empty order, written "0".

Supported simplifications are exactly the left-absorption laws of ordinal
addition and their mirror images:

    n + w^e*c        = w^e*c
    w^a*m + w^b*c    = w^b*c            when a < b
    rev(w^e)*c + n   = rev(w^e)*c
    rev(w^b)*c + rev(w^a)*m = rev(w^b)*c  when a < b

plus merging of adjacent same-polarity terms with equal exponents. Nothing
is ever simplified across an ordinal/reversed boundary (w + rev(w) stays as
written). Within this fragment, `normalize` is canonical: two expressions of
the same order type normalize identically.

Expression grammar (whitespace insignificant)::

    expr     := term ('+' term)*
    term     := 'rev(' pure ')' ['*' nat] | pure ['*' nat]
    pure     := 'w' ['^' exponent] | nat
    exponent := 'w' ['^' exponent] | nat | '(' expr ')'

so "w^2*3" reads as w^2 taken 3 times. A parenthesized exponent admits
compound exponents such as "w^(w+1)".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class UnsupportedForm(ValueError):
    """The expression falls outside the supported simplification fragment."""


class MixedPolarity(UnsupportedForm):
    """Product of an ordinal-like and a reversed-like expression."""


class UnsupportedSummandFamily(UnsupportedForm):
    """A generalized sum whose summand family has no evaluation rule."""


@dataclass(frozen=True)
class FiniteTerm:
    count: int

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("finite term needs a positive count")


@dataclass(frozen=True)
class OrdinalTerm:
    exponent: "OrderTypeExpr"
    coefficient: int

    def __post_init__(self):
        if self.coefficient < 1:
            raise ValueError("coefficient must be positive")
        if not self.exponent.is_pure_ordinal():
            raise UnsupportedForm("exponents must be pure ordinals")


@dataclass(frozen=True)
class ReversedTerm:
    exponent: "OrderTypeExpr"
    coefficient: int

    def __post_init__(self):
        if self.coefficient < 1:
            raise ValueError("coefficient must be positive")
        if not self.exponent.is_pure_ordinal():
            raise UnsupportedForm("exponents must be pure ordinals")


Term = Union[FiniteTerm, OrdinalTerm, ReversedTerm]


@dataclass(frozen=True)
class OrderTypeExpr:
    terms: tuple = ()

    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return all(isinstance(t, FiniteTerm) for t in self.terms)

    def is_pure_ordinal(self) -> bool:
        """No reversed terms anywhere (finite blocks allowed)."""
        return all(not isinstance(t, ReversedTerm) for t in self.terms)

    def is_pure_reversed(self) -> bool:
        return all(not isinstance(t, OrdinalTerm) for t in self.terms)

    def __str__(self) -> str:
        return to_string(self)


ZERO = OrderTypeExpr(())
EXP_ONE = OrderTypeExpr((FiniteTerm(1),))
W = OrderTypeExpr((OrdinalTerm(EXP_ONE, 1),))


def fin(m: int) -> OrderTypeExpr:
    """The finite order with m points; fin(0) is the empty order."""
    if m == 0:
        return ZERO
    return OrderTypeExpr((FiniteTerm(m),))


def _as_exponent(exp) -> OrderTypeExpr:
    if isinstance(exp, int):
        return fin(exp)
    return exp


def omega_power(exp, coefficient: int = 1) -> OrderTypeExpr:
    """w^exp * coefficient; exp may be an int or a pure-ordinal expression."""
    e = _as_exponent(exp)
    if e.is_zero():
        return fin(coefficient)
    return OrderTypeExpr((OrdinalTerm(e, coefficient),))


def omega(coefficient: int = 1) -> OrderTypeExpr:
    return omega_power(1, coefficient)


def omega_rev(exp=1, coefficient: int = 1) -> OrderTypeExpr:
    """rev(w^exp) * coefficient."""
    e = _as_exponent(exp)
    if e.is_zero():
        return fin(coefficient)
    return OrderTypeExpr((ReversedTerm(e, coefficient),))


# ---------------------------------------------------------------------------
# parsing and printing
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def fail(self, message: str):
        raise ExprSyntaxError(message, self.text, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str):
        if self.peek() != ch:
            self.fail(f"expected {ch!r}")
        self.pos += 1

    def try_eat(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            self.fail("expected a number")
        return int(self.text[start : self.pos])

    def ident(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
        return self.text[start : self.pos]

    def expr(self) -> list:
        terms = self.term()
        while self.try_eat("+"):
            terms.extend(self.term())
        return terms

    def term(self) -> list:
        ch = self.peek()
        if ch.isalpha():
            word_start = self.pos
            word = self.ident()
            if word == "rev":
                self.eat("(")
                kind, payload = self.pure()
                self.eat(")")
                coeff = self.coefficient()
                if coeff == 0:
                    return []
                if kind == "nat":
                    return [] if payload == 0 else [FiniteTerm(payload * coeff)]
                return [ReversedTerm(payload, coeff)]
            if word == "w":
                self.pos = word_start
            else:
                self.pos = word_start
                self.fail(f"unknown word {word!r}")
        kind, payload = self.pure()
        coeff = self.coefficient()
        if coeff == 0:
            return []
        if kind == "nat":
            return [] if payload == 0 else [FiniteTerm(payload * coeff)]
        return [OrdinalTerm(payload, coeff)]

    def pure(self):
        ch = self.peek()
        if ch == "w":
            self.pos += 1
            if self.try_eat("^"):
                return "w", self.exponent()
            return "w", EXP_ONE
        if ch.isdigit():
            return "nat", self.nat()
        self.fail("expected 'w' or a number")

    def exponent(self) -> OrderTypeExpr:
        ch = self.peek()
        if ch == "w":
            self.pos += 1
            if self.try_eat("^"):
                inner = self.exponent()
            else:
                inner = EXP_ONE
            return OrderTypeExpr((OrdinalTerm(inner, 1),))
        if ch.isdigit():
            return fin(self.nat())
        if ch == "(":
            self.pos += 1
            start = self.pos
            inner = OrderTypeExpr(tuple(self.expr()))
            self.eat(")")
            if not inner.is_pure_ordinal():
                self.pos = start
                self.fail("exponents must be pure ordinals")
            return inner
        self.fail("expected an exponent")

    def coefficient(self) -> int:
        if self.try_eat("*"):
            return self.nat()
        return 1


def parse(text: str) -> OrderTypeExpr:
    """Parse an expression string; returns it unnormalized."""
    parser = _Parser(text)
    terms = parser.expr()
    parser.skip_ws()
    if parser.pos != len(text):
        parser.fail("trailing characters")
    return OrderTypeExpr(tuple(terms))


def _exponent_str(e: OrderTypeExpr) -> str:
    if len(e.terms) == 1:
        t = e.terms[0]
        if isinstance(t, FiniteTerm):
            return str(t.count)
        if isinstance(t, OrdinalTerm) and t.coefficient == 1:
            return _pure_str(t)
    return f"({to_string(e)})"


def _pure_str(t: OrdinalTerm) -> str:
    if t.exponent == EXP_ONE:
        return "w"
    return f"w^{_exponent_str(t.exponent)}"


def _term_str(t: Term) -> str:
    if isinstance(t, FiniteTerm):
        return str(t.count)
    suffix = f"*{t.coefficient}" if t.coefficient > 1 else ""
    if isinstance(t, OrdinalTerm):
        return _pure_str(t) + suffix
    base = _pure_str(OrdinalTerm(t.exponent, 1))
    return f"rev({base})" + suffix


def to_string(e: OrderTypeExpr) -> str:
    if e.is_zero():
        return "0"
    return " + ".join(_term_str(t) for t in e.terms)


# ---------------------------------------------------------------------------
# normalization and comparison
# ---------------------------------------------------------------------------


def _term_exponent(t: Term) -> OrderTypeExpr:
    return ZERO if isinstance(t, FiniteTerm) else t.exponent


def cmp_pure(a: OrderTypeExpr, b: OrderTypeExpr) -> int:
    """Ordinal comparison of normalized pure-ordinal expressions: -1, 0, 1."""
    for ta, tb in zip(a.terms, b.terms):
        c = cmp_pure(_term_exponent(ta), _term_exponent(tb))
        if c:
            return c
        ca = ta.count if isinstance(ta, FiniteTerm) else ta.coefficient
        cb = tb.count if isinstance(tb, FiniteTerm) else tb.coefficient
        if ca != cb:
            return -1 if ca < cb else 1
    if len(a.terms) != len(b.terms):
        return -1 if len(a.terms) < len(b.terms) else 1
    return 0


def _merge_pass(terms: list) -> list:
    out: list = []
    for t in terms:
        if not out:
            out.append(t)
            continue
        prev = out[-1]
        if isinstance(prev, FiniteTerm) and isinstance(t, FiniteTerm):
            out[-1] = FiniteTerm(prev.count + t.count)
        elif isinstance(prev, FiniteTerm) and isinstance(t, OrdinalTerm):
            out[-1] = t
        elif isinstance(prev, ReversedTerm) and isinstance(t, FiniteTerm):
            pass
        elif isinstance(prev, OrdinalTerm) and isinstance(t, OrdinalTerm):
            c = cmp_pure(prev.exponent, t.exponent)
            if c == 0:
                out[-1] = OrdinalTerm(prev.exponent, prev.coefficient + t.coefficient)
            elif c < 0:
                out[-1] = t
            else:
                out.append(t)
        elif isinstance(prev, ReversedTerm) and isinstance(t, ReversedTerm):
            c = cmp_pure(prev.exponent, t.exponent)
            if c == 0:
                out[-1] = ReversedTerm(prev.exponent, prev.coefficient + t.coefficient)
            elif c > 0:
                pass
            else:
                out.append(t)
        else:
            # ordinal/reversed boundary in either orientation: never simplified
            out.append(t)
    return out


def normalize(e: OrderTypeExpr) -> OrderTypeExpr:
    """Canonical form within the fragment; idempotent, type-preserving."""
    terms: list = []
    for t in e.terms:
        if isinstance(t, FiniteTerm):
            terms.append(t)
            continue
        exp = normalize(t.exponent)
        if exp.is_zero():
            terms.append(FiniteTerm(t.coefficient))
        elif isinstance(t, OrdinalTerm):
            terms.append(OrdinalTerm(exp, t.coefficient))
        else:
            terms.append(ReversedTerm(exp, t.coefficient))
    while True:
        merged = _merge_pass(terms)
        if merged == terms:
            return OrderTypeExpr(tuple(merged))
        terms = merged


def reverse(e: OrderTypeExpr) -> OrderTypeExpr:
    """Mirror image: term order flipped, polarities swapped. An involution."""
    out = []
    for t in reversed(e.terms):
        if isinstance(t, FiniteTerm):
            out.append(t)
        elif isinstance(t, OrdinalTerm):
            out.append(ReversedTerm(t.exponent, t.coefficient))
        else:
            out.append(OrdinalTerm(t.exponent, t.coefficient))
    return OrderTypeExpr(tuple(out))


def add(*exprs: OrderTypeExpr) -> OrderTypeExpr:
    """Concatenation, then normalize."""
    terms: list = []
    for e in exprs:
        terms.extend(e.terms)
    return normalize(OrderTypeExpr(tuple(terms)))


def equal(a: OrderTypeExpr, b: OrderTypeExpr) -> bool:
    return normalize(a) == normalize(b)


# ---------------------------------------------------------------------------
# multiplication and finite powers
# ---------------------------------------------------------------------------


def _cnf_parts(e: OrderTypeExpr) -> list:
    # normalized pure ordinal -> [(exponent, coefficient)] in decreasing order
    parts = []
    for t in e.terms:
        if isinstance(t, FiniteTerm):
            parts.append((ZERO, t.count))
        else:
            parts.append((t.exponent, t.coefficient))
    return parts


def _from_cnf(parts: list) -> OrderTypeExpr:
    terms = []
    for exp, coeff in parts:
        if exp.is_zero():
            terms.append(FiniteTerm(coeff))
        else:
            terms.append(OrdinalTerm(exp, coeff))
    return normalize(OrderTypeExpr(tuple(terms)))


def _mul_pure(a: OrderTypeExpr, b: OrderTypeExpr) -> OrderTypeExpr:
    # both normalized pure ordinals, neither zero; result is a taken b times
    pa = _cnf_parts(a)
    pb = _cnf_parts(b)
    lead_exp, lead_coeff = pa[0]
    out = []
    for exp, coeff in pb:
        if exp.is_zero():
            out.append((lead_exp, lead_coeff * coeff))
            out.extend(pa[1:])
        else:
            out.append((add(lead_exp, exp), coeff))
    return _from_cnf(out)


def mul(a: OrderTypeExpr, b: OrderTypeExpr) -> OrderTypeExpr:
    """Ordinal product, a taken b times; both arguments of one polarity."""
    na, nb = normalize(a), normalize(b)
    if na.is_zero() or nb.is_zero():
        return ZERO
    if na.is_pure_ordinal() and nb.is_pure_ordinal():
        return _mul_pure(na, nb)
    if na.is_pure_reversed() and nb.is_pure_reversed():
        return reverse(_mul_pure(reverse(na), reverse(nb)))
    raise MixedPolarity(f"cannot multiply {na} by {nb}")


def pow_finite(e: OrderTypeExpr, k: int) -> OrderTypeExpr:
    """k-fold product of e with itself, k >= 1."""
    if k < 1:
        raise ValueError("exponent must be a positive integer")
    result = normalize(e)
    for _ in range(k - 1):
        result = mul(result, e)
    return result


# ---------------------------------------------------------------------------
# generalized sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SummandSpec:
    """Shape of a family of summands indexed by another order.

    kind "finite": every summand is a finite nonzero order (sizes may vary).
    kind "leading": every summand t satisfies w^e <= t < w^(e+1) for the one
        fixed exponent e (mirrored for reversed indices).
    kind "constant": every summand is the same expression.
    kind "increasing_powers": summands are omega powers w^(e_i) whose
        exponents are unbounded below `exponent`; only valid over index w.
    """

    kind: str
    exponent: OrderTypeExpr = ZERO
    value: OrderTypeExpr = ZERO

    @classmethod
    def finite(cls) -> "SummandSpec":
        return cls("finite")

    @classmethod
    def leading(cls, exponent) -> "SummandSpec":
        return cls("leading", exponent=_as_exponent(exponent))

    @classmethod
    def constant(cls, value: OrderTypeExpr) -> "SummandSpec":
        return cls("constant", value=value)

    @classmethod
    def increasing_powers(cls, limit_exponent) -> "SummandSpec":
        return cls("increasing_powers", exponent=_as_exponent(limit_exponent))


def _is_limit(e: OrderTypeExpr) -> bool:
    # normalized pure expression with no finite block at its open end
    if e.is_zero():
        return False
    if e.is_pure_ordinal():
        return not isinstance(e.terms[-1], FiniteTerm)
    return not isinstance(e.terms[0], FiniteTerm)


def sum_over(index: OrderTypeExpr, spec: SummandSpec) -> OrderTypeExpr:
    """Order type of a sum of `spec`-shaped summands laid out along `index`."""
    idx = normalize(index)
    if idx.is_zero():
        return ZERO

    if idx.is_finite():
        if spec.kind == "constant":
            n = idx.terms[0].count
            return add(*([spec.value] * n))
        raise UnsupportedSummandFamily(
            "a finite index needs constant summands to determine the sum"
        )

    if idx.is_pure_ordinal():
        if not _is_limit(idx):
            raise UnsupportedSummandFamily(
                f"index {idx} has a trailing finite block; the last summands "
                "are not determined by the family"
            )
        if spec.kind == "finite":
            return idx
        if spec.kind == "leading":
            return mul(omega_power(spec.exponent), idx)
        if spec.kind == "constant":
            v = normalize(spec.value)
            if v.is_zero():
                raise UnsupportedSummandFamily("summands must be nonzero")
            if v.is_finite():
                return idx
            if v.is_pure_ordinal():
                return mul(omega_power(v.terms[0].exponent), idx)
            raise UnsupportedSummandFamily(
                f"summand {v} does not match the ascending index {idx}"
            )
        if spec.kind == "increasing_powers":
            if idx != W:
                raise UnsupportedSummandFamily(
                    "increasing-power families are only summed along w"
                )
            return omega_power(spec.exponent)
        raise UnsupportedSummandFamily(f"unknown family kind {spec.kind!r}")

    if idx.is_pure_reversed():
        mirrored = spec
        if spec.kind == "constant":
            mirrored = SummandSpec.constant(reverse(spec.value))
        return reverse(sum_over(reverse(idx), mirrored))

    raise UnsupportedSummandFamily(f"index {idx} mixes polarities")
