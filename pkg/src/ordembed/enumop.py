"""Monotone enumeration operators on finite diagrams.

Every operator is a pure map from finite diagrams to finite diagrams: the
output of a larger input extends the output of a smaller one fact by fact,
and every output is again a strict total order. Output names are structured
over input names, so nothing in an output is unexplainable from the input.

Alongside `apply`, each operator carries a symbolic transfer function that
evaluates what the operator does to a whole order type, by running the
generalized-sum and product rules of `ordertype` (never a lookup table).

Operator identifiers (CLI surface)::

    lexsum | rad | interval | power
    copies:<k>:<inner> | hetero:<op1>,<op2>,... | selfpow:<k> | prod:<left>:<right>
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import ordertype
from .diagram import FiniteDiagram
from .names import Atom, Copy, ElementName, Pair, Tup, atom_value
from .ordertype import (
    OrderTypeExpr,
    SummandSpec,
    W,
    normalize,
    omega_power,
    sum_over,
)
from .presentation import Presentation


class NonAtomInput(ValueError):
    """The operator reads number values and accepts only atom-named inputs."""


class InputOutsideFragment(ValueError):
    """No symbolic transfer rule covers this input type."""


class BudgetExceeded(RuntimeError):
    """A stage output grew past the configured fact budget."""


POWER_WEIGHT_CAP = 13  # tuple block facts satisfy value(a) + sum(values) <= cap
MAX_STAGE_FACTS = 200_000


def _atoms_by_rank(diag: FiniteDiagram) -> list:
    for name in diag.ordered:
        if not isinstance(name, Atom):
            raise NonAtomInput(f"element {name.encode()} is not an atom")
    return list(diag.ordered)


class EnumOperator:
    """Base interface: a named, pure, monotone diagram map with a transfer."""

    name = "?"

    def apply(self, diag: FiniteDiagram) -> FiniteDiagram:
        raise NotImplementedError

    def transfer(self, expr: OrderTypeExpr) -> OrderTypeExpr:
        raise InputOutsideFragment(f"{self.name} has no transfer for {expr}")

    def _mirror_transfer(self, expr: OrderTypeExpr) -> OrderTypeExpr:
        return ordertype.reverse(self.transfer(ordertype.reverse(expr)))

    def __repr__(self) -> str:
        return f"<operator {self.name}>"


class LexSumOperator(EnumOperator):
    """Replace each input point a by a full copy of the input, ordered
    lexicographically: Pair(a, b) < Pair(a', b') iff a < a' or a = a', b < b'."""

    name = "lexsum"

    def apply(self, diag: FiniteDiagram) -> FiniteDiagram:
        seq = diag.ordered
        return FiniteDiagram(Pair(a, b) for a in seq for b in seq)

    def transfer(self, expr: OrderTypeExpr) -> OrderTypeExpr:
        t = normalize(expr)
        if t.is_zero():
            return t
        if t.is_pure_ordinal() or t.is_pure_reversed():
            # each point contributes a block of the input's own type
            return ordertype.mul(t, t)
        raise InputOutsideFragment(f"lexsum transfer needs one polarity, got {t}")


class RadiusOperator(EnumOperator):
    """Pair each element a with the elements whose value is at most a's radius.

    The radius of a is min(#elements <= a, #elements >= a); it can only grow
    as the diagram grows, so once a pair is out it stays out. Pairs are
    ordered lexicographically, both coordinates by the input order.
    """

    name = "rad"

    def apply(self, diag: FiniteDiagram) -> FiniteDiagram:
        seq = _atoms_by_rank(diag)
        n = len(seq)
        out = []
        for i, a in enumerate(seq):
            radius = min(i + 1, n - i)
            out.extend(Pair(a, d) for d in seq if d.value <= radius)
        return FiniteDiagram(out)

    def transfer(self, expr: OrderTypeExpr) -> OrderTypeExpr:
        t = normalize(expr)
        if t.is_pure_reversed() and not t.is_zero() and not t.is_finite():
            return self._mirror_transfer(t)
        if (
            len(t.terms) == 1
            and not t.is_finite()
            and t == ordertype.omega(t.terms[0].coefficient)
        ):
            k = t.terms[0].coefficient
            # lowest copy: finite radii, finite growing blocks; every other
            # copy: unbounded radii, blocks of the input's own type
            parts = [sum_over(W, SummandSpec.finite())]
            parts.extend(sum_over(W, SummandSpec.constant(t)) for _ in range(k - 1))
            return ordertype.add(*parts)
        raise InputOutsideFragment(f"rad transfer covers w*k and rev(w)*k, got {t}")


class IntervalOperator(EnumOperator):
    """Replace each element a by the interval it spans among smaller-valued
    elements: from the least b <= a to the greatest c >= a with values <= a's."""

    name = "interval"

    def apply(self, diag: FiniteDiagram) -> FiniteDiagram:
        seq = _atoms_by_rank(diag)
        out = []
        for i, a in enumerate(seq):
            # least element below a with value <= a's, greatest above; both
            # only ever move outward as the diagram grows
            lo = next(j for j in range(i + 1) if seq[j].value <= a.value)
            hi = next(j for j in range(len(seq) - 1, i - 1, -1)
                      if seq[j].value <= a.value)
            out.extend(Pair(a, seq[j]) for j in range(lo, hi + 1))
        return FiniteDiagram(out)

    def transfer(self, expr: OrderTypeExpr) -> OrderTypeExpr:
        t = normalize(expr)
        if t.is_pure_reversed() and not t.is_zero() and not t.is_finite():
            return self._mirror_transfer(t)
        if t == W:
            return sum_over(W, SummandSpec.finite())
        if (
            len(t.terms) == 1
            and not t.is_finite()
            and t == omega_power(t.terms[0].exponent)
        ):
            exp = t.terms[0].exponent
            if exp.is_finite() and len(exp.terms) == 1:
                n = exp.terms[0].count
                # within one copy of w^(n-1) almost every element spans an
                # interval of type w^(n-1)*k + smaller, so a copy sums to
                # w^(n-1) taken w^(n-1) times; then w-many copies follow
                inner = sum_over(omega_power(n - 1), SummandSpec.leading(n - 1))
                return sum_over(W, SummandSpec.constant(inner))
        raise InputOutsideFragment(f"interval transfer covers w^n and rev(w^n), got {t}")


class PowerOperator(EnumOperator):
    """Replace each element a by the block of all value(a)-length tuples over
    the current elements, the empty tuple when value(a) = 0.

    Blocks are ordered right-to-left lexicographically (rightmost component
    most significant), so a block realizes the input raised to the power
    value(a). Tuple facts are emitted only while value(a) plus the component
    values stays under a fixed weight cap: the predicate depends on the fact
    alone, so capped enumeration is still pure and monotone.
    """

    name = "power"

    def __init__(self, weight_cap: int = POWER_WEIGHT_CAP):
        self.weight_cap = weight_cap

    def _tuples(self, candidates, length: int, budget: int):
        # most significant component first, spent budget pruned as we go
        if length == 0:
            yield ()
            return
        for d in candidates:
            if d.value > budget:
                continue
            for rest in self._tuples(candidates, length - 1, budget - d.value):
                yield (d,) + rest

    def apply(self, diag: FiniteDiagram) -> FiniteDiagram:
        seq = _atoms_by_rank(diag)
        out = []
        for a in seq:
            length = a.value
            if length == 0:
                out.append(Tup(a, ()))
                continue
            budget = self.weight_cap - length
            if budget < 0:
                continue
            candidates = [d for d in seq if d.value <= budget]
            for combo in self._tuples(candidates, length, budget):
                # combo[0] is the most significant; store it rightmost
                out.append(Tup(a, tuple(reversed(combo))))
        return FiniteDiagram(out)

    def transfer(self, expr: OrderTypeExpr) -> OrderTypeExpr:
        t = normalize(expr)
        if t.is_pure_reversed() and not t.is_zero() and not t.is_finite():
            return self._mirror_transfer(t)
        if (
            len(t.terms) == 1
            and not t.is_finite()
            and t == omega_power(t.terms[0].exponent)
        ):
            exp = t.terms[0].exponent
            if exp.is_finite() and len(exp.terms) == 1:
                m = exp.terms[0].count
                # along any single chain the block exponents are unbounded,
                # so each chain contributes w^w; w^(m-1)-many chains follow
                chain = sum_over(W, SummandSpec.increasing_powers(W))
                if m == 1:
                    return chain
                return sum_over(omega_power(m - 1), SummandSpec.constant(chain))
        raise InputOutsideFragment(f"power transfer covers w^m and rev(w^m), got {t}")


class ConcatCopiesOperator(EnumOperator):
    """k tagged copies of an inner operator's output, laid end to end."""

    def __init__(self, k: int, inner: EnumOperator):
        if k < 1:
            raise ValueError("need at least one copy")
        self.k = k
        self.inner = inner
        self.name = f"copies:{k}:{inner.name}"

    def apply(self, diag: FiniteDiagram) -> FiniteDiagram:
        base = self.inner.apply(diag).ordered
        return FiniteDiagram(
            Copy(j, x) for j in range(self.k) for x in base
        )

    def transfer(self, expr: OrderTypeExpr) -> OrderTypeExpr:
        image = self.inner.transfer(expr)
        return ordertype.add(*([image] * self.k))


class ConcatHeteroOperator(EnumOperator):
    """Tagged outputs of several operators on the same input, laid end to end."""

    def __init__(self, ops):
        self.ops = tuple(ops)
        self.name = "hetero:" + ",".join(op.name for op in self.ops)

    def apply(self, diag: FiniteDiagram) -> FiniteDiagram:
        out = []
        for j, op in enumerate(self.ops):
            out.extend(Copy(j, x) for x in op.apply(diag).ordered)
        return FiniteDiagram(out)

    def transfer(self, expr: OrderTypeExpr) -> OrderTypeExpr:
        images = [op.transfer(expr) for op in self.ops]
        return ordertype.add(*images) if images else ordertype.ZERO


class SelfPowerOperator(EnumOperator):
    """All k-tuples over the input, rightmost component most significant."""

    def __init__(self, k: int, max_facts: int = MAX_STAGE_FACTS):
        if k < 1:
            raise ValueError("power must be positive")
        self.k = k
        self.max_facts = max_facts
        self.name = f"selfpow:{k}"

    def apply(self, diag: FiniteDiagram) -> FiniteDiagram:
        seq = diag.ordered
        if len(seq) ** self.k > self.max_facts:
            raise BudgetExceeded(
                f"{self.name} would emit {len(seq) ** self.k} tuples"
            )
        out = [
            Tup(combo[-1], tuple(reversed(combo[:-1])))
            for combo in itertools.product(seq, repeat=self.k)
        ]
        return FiniteDiagram(out)

    def transfer(self, expr: OrderTypeExpr) -> OrderTypeExpr:
        t = normalize(expr)
        if t.is_zero():
            return t
        if t.is_pure_ordinal() or t.is_pure_reversed():
            return ordertype.pow_finite(t, self.k)
        raise InputOutsideFragment(f"selfpow transfer needs one polarity, got {t}")


class ProductOperator(EnumOperator):
    """Pairs of a left and a right output, right coordinate most significant."""

    def __init__(self, left: EnumOperator, right: EnumOperator):
        self.left = left
        self.right = right
        self.name = f"prod:{left.name}:{right.name}"

    def apply(self, diag: FiniteDiagram) -> FiniteDiagram:
        lo = self.left.apply(diag).ordered
        ro = self.right.apply(diag).ordered
        return FiniteDiagram(Pair(x, y) for y in ro for x in lo)

    def transfer(self, expr: OrderTypeExpr) -> OrderTypeExpr:
        return ordertype.mul(self.left.transfer(expr), self.right.transfer(expr))


def op_lexsum() -> EnumOperator:
    return LexSumOperator()


def op_rad() -> EnumOperator:
    return RadiusOperator()


def op_interval() -> EnumOperator:
    return IntervalOperator()


def op_power(weight_cap: int = POWER_WEIGHT_CAP) -> EnumOperator:
    return PowerOperator(weight_cap)


def op_concat_copies(k: int, inner: EnumOperator) -> EnumOperator:
    return ConcatCopiesOperator(k, inner)


def op_concat_hetero(ops) -> EnumOperator:
    return ConcatHeteroOperator(ops)


def op_self_power(k: int) -> EnumOperator:
    return SelfPowerOperator(k)


def op_product(left: EnumOperator, right: EnumOperator) -> EnumOperator:
    return ProductOperator(left, right)


# ---------------------------------------------------------------------------
# operator identifiers
# ---------------------------------------------------------------------------


def parse_operator(spec: str) -> EnumOperator:
    """Build an operator from its identifier, e.g. 'copies:2:rad'."""
    tokens = spec.split(":")
    op, rest = _parse_tokens(tokens)
    if rest:
        raise ValueError(f"trailing tokens {':'.join(rest)!r} in operator {spec!r}")
    return op


def _parse_tokens(tokens: list):
    if not tokens:
        raise ValueError("empty operator identifier")
    head, rest = tokens[0], tokens[1:]
    if head == "lexsum":
        return op_lexsum(), rest
    if head == "rad":
        return op_rad(), rest
    if head == "interval":
        return op_interval(), rest
    if head == "power":
        return op_power(), rest
    if head == "selfpow":
        if not rest:
            raise ValueError("selfpow needs a power, e.g. selfpow:2")
        return op_self_power(int(rest[0])), rest[1:]
    if head == "copies":
        if len(rest) < 2:
            raise ValueError("copies needs a count and an inner operator")
        inner, remaining = _parse_tokens(rest[1:])
        return op_concat_copies(int(rest[0]), inner), remaining
    if head == "prod":
        left, remaining = _parse_tokens(rest)
        right, remaining = _parse_tokens(remaining)
        return op_product(left, right), remaining
    if head == "hetero":
        body = ":".join(rest)
        if not body:
            return op_concat_hetero([]), []
        ops = [parse_operator(piece) for piece in body.split(",")]
        return op_concat_hetero(ops), []
    raise ValueError(f"unknown operator {head!r}")


# ---------------------------------------------------------------------------
# streaming and symbolic transfer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StreamRun:
    """Checkpointed outputs of one operator over one presentation."""

    operator: str
    presentation: str
    stages: tuple
    diagrams: tuple

    def final(self) -> FiniteDiagram:
        return self.diagrams[-1]


def checkpoint_stages(s_max: int, every: int = 1) -> tuple:
    stages = list(range(0, s_max + 1, max(1, every)))
    if stages[-1] != s_max:
        stages.append(s_max)
    return tuple(stages)


def run_stream(op: EnumOperator, pres: Presentation, s_max: int, every: int = 1,
               max_facts: int = MAX_STAGE_FACTS) -> StreamRun:
    """Apply `op` to the presentation's prefixes at each checkpoint stage.

    Output s is exactly apply(prefix(s)): there is no hidden state, so the
    checkpointed sequence is inclusion-monotone whenever the operator is.
    """
    stages = checkpoint_stages(s_max, every)
    diagrams = []
    for s in stages:
        out = op.apply(pres.prefix(s))
        if len(out) > max_facts:
            raise BudgetExceeded(
                f"{op.name} produced {len(out)} elements at stage {s} "
                f"(budget {max_facts})"
            )
        diagrams.append(out)
    return StreamRun(op.name, pres.describe(), stages, tuple(diagrams))


def transfer_check(op: EnumOperator, expr: OrderTypeExpr) -> OrderTypeExpr:
    """Normalized symbolic image of `expr` under the operator's transfer."""
    try:
        return normalize(op.transfer(normalize(expr)))
    except ordertype.UnsupportedForm as exc:
        raise InputOutsideFragment(str(exc)) from exc
