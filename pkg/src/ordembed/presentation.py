"""Stage-driven presentations of linear orders.

A Presentation deterministically enumerates elements one insertion at a
time; `prefix(s)` is the diagram after the first s insertions. Every element
receives a fixed position key when it is created, so prefixes only ever
extend each other and every prefix is a strict total order.

Built-in targets place atom i by decoding its logical index: for w*n the
index splits as (copy, position) = (i mod n, i div n); for w^k it is the
k-fold Cantor unpairing read lexicographically; reversed targets mirror all
comparisons. Which atom is inserted at which stage is the schedule's
business and never affects an element's position.

Combinators build compound presentations: concatenation, the diagonal merge
of rows into a single copy of w, the recombination of several rows plus a
tail into a copy of w*2, and the three-part strict-growth layout.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from . import ordertype
from .diagram import FiniteDiagram
from .names import Atom, Copy, ElementName
from .ordertype import (
    EXP_ONE,
    FiniteTerm,
    OrderTypeExpr,
    OrdinalTerm,
    ReversedTerm,
    W,
    normalize,
)


class UnsupportedTargetType(ValueError):
    pass


SEEDED_BLOCK = 16


@dataclass(frozen=True)
class Schedule:
    """Insertion-order policy: standard | roundrobin | seeded | explicit."""

    kind: str = "standard"
    seed: int = 0
    explicit: tuple = ()

    @classmethod
    def parse(cls, text: str) -> "Schedule":
        if text in ("standard", "roundrobin"):
            return cls(kind=text)
        if text.startswith("seeded:"):
            return cls(kind="seeded", seed=int(text.split(":", 1)[1]))
        if text.startswith("explicit:"):
            values = tuple(int(v) for v in text.split(":", 1)[1].split(",") if v)
            return cls(kind="explicit", explicit=values)
        raise ValueError(f"unknown schedule {text!r}")

    def describe(self) -> str:
        if self.kind == "seeded":
            return f"seeded:{self.seed}"
        if self.kind == "explicit":
            return "explicit:" + ",".join(str(v) for v in self.explicit)
        return self.kind


def cantor_unpair(i: int) -> tuple[int, int]:
    w = (math.isqrt(8 * i + 1) - 1) // 2
    t = w * (w + 1) // 2
    y = i - t
    return w - y, y

def cantor_tuple(i: int, k: int) -> tuple:
    """Decode i into a k-tuple by iterated Cantor unpairing."""
    if k <= 1:
        return (i,)
    x, y = cantor_unpair(i)
    return (x,) + cantor_tuple(y, k - 1)


class Presentation:
    """A deterministic, monotone generator of growing finite diagrams."""

    def __init__(self, target: OrderTypeExpr, description: str, stream, total=None,
                 rank_fn=None):
        self.target = normalize(target)
        self.description = description
        self.total = total
        self._rank_fn = rank_fn
        self._stream = iter(stream)
        self._items: list = []
        self._exhausted = False

    def _ensure(self, n: int) -> None:
        while len(self._items) < n and not self._exhausted:
            try:
                self._items.append(next(self._stream))
            except StopIteration:
                self._exhausted = True

    def item(self, i: int):
        """The i-th insertion as (name, key), or None past the end."""
        self._ensure(i + 1)
        return self._items[i] if i < len(self._items) else None

    def prefix(self, stage: int) -> FiniteDiagram:
        """Diagram after the first `stage` insertions; monotone in `stage`."""
        self._ensure(stage)
        taken = self._items[: min(stage, len(self._items))]
        return FiniteDiagram(name for _, name in sorted(taken))

    def target_rank(self, name: ElementName) -> int:
        """Position of `name` in the limit order, for single-key targets."""
        if self._rank_fn is None:
            raise ValueError(f"{self.description} does not expose limit positions")
        return self._rank_fn(name)

    def describe(self) -> str:
        return self.description


# ---------------------------------------------------------------------------
# standard presentations
# ---------------------------------------------------------------------------


def _decode_family(target: OrderTypeExpr):
    t = normalize(target)
    if t.is_zero():
        return "finite", 0
    if len(t.terms) != 1:
        raise UnsupportedTargetType(f"no built-in presentation for {t}")
    term = t.terms[0]
    if isinstance(term, FiniteTerm):
        return "finite", term.count
    exp = term.exponent
    if exp == EXP_ONE:
        kind = "omega" if isinstance(term, OrdinalTerm) else "omega_rev"
        return kind, term.coefficient
    if exp.is_finite() and len(exp.terms) == 1 and term.coefficient == 1:
        k = exp.terms[0].count
        kind = "power" if isinstance(term, OrdinalTerm) else "power_rev"
        return kind, k
    raise UnsupportedTargetType(f"no built-in presentation for {t}")


def _schedule_order(schedule: Schedule, stride: int, offset: int):
    """Infinite iterator of logical indices, each exactly once."""
    if schedule.kind in ("standard", "roundrobin"):
        i = 0
        while True:
            yield i
            i += 1
    elif schedule.kind == "seeded":
        block = 0
        while True:
            indices = list(range(block * SEEDED_BLOCK, (block + 1) * SEEDED_BLOCK))
            random.Random(schedule.seed * 1_000_003 + block).shuffle(indices)
            yield from indices
            block += 1
    elif schedule.kind == "explicit":
        seen = set()
        for value in schedule.explicit:
            j, rem = divmod(value - offset, stride)
            if rem or j < 0:
                raise ValueError(
                    f"explicit atom {value} is not of the form {offset}+{stride}*i"
                )
            if j in seen:
                raise ValueError(f"explicit atom {value} listed twice")
            seen.add(j)
            yield j
        j = 0
        while True:
            if j not in seen:
                yield j
            j += 1
    else:
        raise ValueError(f"unknown schedule kind {schedule.kind!r}")


def std_presentation(target: OrderTypeExpr, schedule: Schedule = Schedule(),
                     stride: int = 1, offset: int = 0) -> Presentation:
    """Built-in presentation of w*n, rev(w)*n, w^k, rev(w^k), or a finite order.

    Atom names are offset + stride * i over logical indices i, so presentations
    with different strides/offsets have disjoint atom domains.
    """
    if stride < 1 or offset < 0:
        raise ValueError("stride must be >= 1 and offset >= 0")
    family, param = _decode_family(target)

    def key_of(j: int) -> tuple:
        if family == "finite":
            return (j,)
        if family == "omega":
            return (j % param, j // param)
        if family == "omega_rev":
            return (j % param, -(j // param))
        if family == "power":
            return cantor_tuple(j, param)
        return tuple(-x for x in cantor_tuple(j, param))

    total = param if family == "finite" else None

    def stream():
        emitted = 0
        for j in _schedule_order(schedule, stride, offset):
            if total is not None:
                if emitted >= total:
                    return
                if j >= total:
                    continue
            yield key_of(j), Atom(offset + stride * j)
            emitted += 1

    def rank_fn(name: ElementName) -> int:
        if not isinstance(name, Atom):
            raise ValueError(f"{name.encode()} is not an atom of this presentation")
        j, rem = divmod(name.value - offset, stride)
        if rem or j < 0:
            raise ValueError(f"{name.encode()} is not an atom of this presentation")
        return j

    extras = f",stride={stride},offset={offset}" if (stride, offset) != (1, 0) else ""
    description = f"std({target},{schedule.describe()}{extras})"
    # limit positions are only exposed for single-chain targets; for rev(w)
    # the rank counts from the top
    single_chain = family == "finite" or param == 1
    rank = rank_fn if single_chain else None
    return Presentation(target, description, stream(), total=total, rank_fn=rank)


# ---------------------------------------------------------------------------
# combinators
# ---------------------------------------------------------------------------


def _round_robin(parts: list):
    """Interleave the parts' insertion streams, one item per turn."""
    cursors = [0] * len(parts)
    alive = list(range(len(parts)))
    while alive:
        for idx in list(alive):
            item = parts[idx].item(cursors[idx])
            if item is None:
                alive.remove(idx)
                continue
            cursors[idx] += 1
            yield idx, item


def _no_collisions(stream):
    seen = set()
    for key, name in stream:
        if name in seen:
            raise ValueError(f"element name {name.encode()} occurs in two parts")
        seen.add(name)
        yield key, name


def concat_sum(parts, tag: bool = True) -> Presentation:
    """Concatenation p0 + p1 + ...; schedules interleave round-robin.

    With tag=True every element is wrapped as Copy(i, x) to force disjoint
    name spaces. With tag=False names pass through unchanged (required when
    the result feeds an atom-only operator); the parts must then have
    pairwise disjoint names, which is checked as elements arrive.
    """
    parts = list(parts)
    totals = [p.total for p in parts]
    total = sum(totals) if all(t is not None for t in totals) else None

    def stream():
        for idx, (key, name) in _round_robin(parts):
            if tag:
                yield (idx,) + key, Copy(idx, name)
            else:
                yield (idx,) + key, name

    inner = ";".join(p.describe() for p in parts)
    mode = "tagged" if tag else "raw"
    description = f"concat[{mode}]({inner})"
    target = ordertype.add(*[p.target for p in parts]) if parts else ordertype.ZERO
    source = stream() if tag else _no_collisions(stream())
    return Presentation(target, description, source, total=total)


def _require_rows(rows, expected: OrderTypeExpr, what: str) -> list:
    rows = list(rows)
    for row in rows:
        if not ordertype.equal(row.target, expected):
            raise ValueError(f"{what} {row.describe()} does not present {expected}")
    return rows


def interleave_merge(rows, part_size: int = 1) -> Presentation:
    """Single copy of w containing every row as a subordering.

    Each row is cut into consecutive finite parts of `part_size` elements;
    the parts are laid out along diagonals: all parts with row + part = d
    precede those with row + part = d + 1, and within a diagonal parts
    appear in row order.
    """
    rows = _require_rows(rows, W, "row")
    if part_size < 1:
        raise ValueError("part_size must be >= 1")

    def stream():
        for n, (key, name) in _round_robin(rows):
            p = rows[n].target_rank(name)
            i = p // part_size
            yield (n + i, n, p % part_size), name

    inner = ";".join(r.describe() for r in rows)
    description = f"interleave_merge(part_size={part_size};{inner})"
    return Presentation(W, description, _no_collisions(stream()))


def round_interleave(rows, part_size: int = 1) -> Presentation:
    """Single copy of w: round j lays down part j of every row, in row order."""
    rows = _require_rows(rows, W, "row")
    if part_size < 1:
        raise ValueError("part_size must be >= 1")

    def stream():
        for idx, (key, name) in _round_robin(rows):
            p = rows[idx].target_rank(name)
            yield (p // part_size, idx, p % part_size), name

    inner = ";".join(r.describe() for r in rows)
    description = f"round_interleave(part_size={part_size};{inner})"
    return Presentation(W, description, _no_collisions(stream()))


def partition_recombine(rows, tail: Presentation, part_size: int = 1,
                        mirror: bool = False) -> Presentation:
    """Copy of w*2: the rows recombined part-by-part, then the tail.

    Every row and the tail must present w with pairwise disjoint atoms. The
    first copy is sum_j (part_j of row 1 + ... + part_j of row r); since each
    round is finite the recombined prefix is again a copy of w. With
    mirror=True all inputs must present rev(w) and the whole layout is
    reflected, realizing rev(w*2).
    """
    expected = ordertype.reverse(W) if mirror else W
    rows = _require_rows(rows, expected, "row")
    if not rows:
        raise ValueError("need at least one row to recombine")
    _require_rows([tail], expected, "tail")
    if part_size < 1:
        raise ValueError("part_size must be >= 1")
    sign = -1 if mirror else 1

    def stream():
        for idx, (key, name) in _round_robin(rows + [tail]):
            if idx < len(rows):
                p = rows[idx].target_rank(name)
                fwd = (0, p // part_size, idx, p % part_size)
            else:
                fwd = (1, tail.target_rank(name), 0, 0)
            yield tuple(sign * x for x in fwd), name

    inner = ";".join(r.describe() for r in rows)
    description = (
        f"partition_recombine(part_size={part_size},mirror={mirror};"
        f"rows={inner};tail={tail.describe()})"
    )
    target = ordertype.reverse(ordertype.omega(2)) if mirror else ordertype.omega(2)
    return Presentation(target, description, _no_collisions(stream()))


def strict_growth_interleave(head: Presentation, row_b: Presentation,
                             row_c: Presentation, tail: Presentation,
                             part_size: int = 1, mirror: bool = False) -> Presentation:
    """Copy of w*3 laid out as head + sum_i(part_i of b + part_i of c) + tail.

    With mirror=True the inputs present rev(w) and the result is rev(w*3).
    """
    expected = ordertype.reverse(W) if mirror else W
    head, row_b, row_c, tail = _require_rows([head, row_b, row_c, tail],
                                             expected, "part")
    if part_size < 1:
        raise ValueError("part_size must be >= 1")
    sign = -1 if mirror else 1

    def stream():
        for idx, (key, name) in _round_robin([head, row_b, row_c, tail]):
            if idx == 0:
                fwd = (0, head.target_rank(name), 0, 0)
            elif idx in (1, 2):
                row = row_b if idx == 1 else row_c
                p = row.target_rank(name)
                fwd = (1, p // part_size, idx - 1, p % part_size)
            else:
                fwd = (2, tail.target_rank(name), 0, 0)
            yield tuple(sign * x for x in fwd), name

    description = (
        f"strict_growth(part_size={part_size},mirror={mirror};head={head.describe()};"
        f"b={row_b.describe()};c={row_c.describe()};tail={tail.describe()})"
    )
    target = ordertype.omega(3)
    if mirror:
        target = ordertype.reverse(target)
    return Presentation(target, description, _no_collisions(stream()))


# ---------------------------------------------------------------------------
# random test inputs
# ---------------------------------------------------------------------------


def random_finite_diagram(size: int, seed: int, value_span: int = 3) -> FiniteDiagram:
    """Total order on `size` atoms with seeded random names and positions.

    Names are drawn from range(value_span * size + 4) so that values stay
    small enough for the value-sensitive operators to be exercised cheaply.
    """
    rng = random.Random(seed)
    values = rng.sample(range(value_span * size + 4), size)
    names = [Atom(v) for v in values]
    rng.shuffle(names)
    return FiniteDiagram(names)


def random_extension(diag: FiniteDiagram, extra: int, seed: int,
                     value_span: int = 3) -> FiniteDiagram:
    """A random strict extension of `diag` by `extra` fresh atoms."""
    rng = random.Random(seed)
    used = {n.value for n in diag.ordered}
    pool = [v for v in range(value_span * (len(diag) + extra) + 8) if v not in used]
    fresh = rng.sample(pool, extra)
    seq = list(diag.ordered)
    for v in fresh:
        seq.insert(rng.randint(0, len(seq)), Atom(v))
    return FiniteDiagram(seq)
