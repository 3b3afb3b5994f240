"""Finite diagrams: finite sets of named elements under a strict total order.

A FiniteDiagram is immutable and stores its elements in ascending order.
Viewed as a set of facts it consists of one element fact per name and one
order fact per ordered pair; growth of a diagram means growth of that fact
set, which is what all monotonicity checks compare.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional

from .names import ElementName, canonical_key


class NotLinearError(ValueError):
    def __init__(self, reason: str, witness: tuple = ()):
        detail = f": {' , '.join(n.encode() for n in witness)}" if witness else ""
        super().__init__(f"not a strict total order ({reason}){detail}")
        self.reason = reason
        self.witness = witness


def linear_order_from_facts(
    elements: Iterable[ElementName], pairs: Iterable[tuple]
) -> tuple[Optional[list], str, tuple]:
    """Try to arrange `elements` into the unique chain generated by `pairs`.

    The pair set may be any generating set of the intended order; implied
    comparisons are recovered transitively. Returns (order, reason, witness)
    where order is None exactly when the facts do not determine a strict
    total order (missing comparison, cycle, or a reflexive/dangling pair).
    """
    names = list(dict.fromkeys(elements))
    present = set(names)
    succs: dict = {n: set() for n in names}
    indeg: dict = {n: 0 for n in names}
    for a, b in pairs:
        if a == b:
            return None, "reflexive order fact", (a,)
        if a not in present or b not in present:
            missing = a if a not in present else b
            return None, "order fact names an undeclared element", (missing,)
        if b not in succs[a]:
            succs[a].add(b)
            indeg[b] += 1
    order: list = []
    remaining = dict(indeg)
    ready = [n for n in names if remaining[n] == 0]
    while ready:
        if len(ready) > 1:
            ready.sort(key=canonical_key)
            return None, "incomparable elements", (ready[0], ready[1])
        current = ready.pop()
        order.append(current)
        del remaining[current]
        for nxt in succs[current]:
            remaining[nxt] -= 1
            if remaining[nxt] == 0:
                ready.append(nxt)
    if remaining:
        cyc = sorted(remaining, key=canonical_key)
        return None, "cycle in order facts", tuple(cyc[:2])
    return order, "", ()


class FiniteDiagram:
    """An immutable strict total order on finitely many named elements."""

    __slots__ = ("_seq", "_rank")

    def __init__(self, ordered: Iterable[ElementName]):
        seq = tuple(ordered)
        rank = {name: i for i, name in enumerate(seq)}
        if len(rank) != len(seq):
            raise NotLinearError("duplicate element")
        self._seq = seq
        self._rank = rank

    @classmethod
    def from_facts(cls, elements, pairs) -> "FiniteDiagram":
        order, reason, witness = linear_order_from_facts(elements, pairs)
        if order is None:
            raise NotLinearError(reason, witness)
        return cls(order)

    @property
    def ordered(self) -> tuple:
        return self._seq

    def names(self) -> frozenset:
        return frozenset(self._seq)

    def __len__(self) -> int:
        return len(self._seq)

    def __iter__(self) -> Iterator[ElementName]:
        return iter(self._seq)

    def __contains__(self, name: ElementName) -> bool:
        return name in self._rank

    def rank(self, name: ElementName) -> int:
        return self._rank[name]

    def less(self, a: ElementName, b: ElementName) -> bool:
        return self._rank[a] < self._rank[b]

    def interval_size(self, lower: ElementName, upper: ElementName) -> int:
        """Number of elements strictly between lower and upper."""
        return max(0, self._rank[upper] - self._rank[lower] - 1)

    def restrict(self, keep) -> "FiniteDiagram":
        keep = set(keep)
        return FiniteDiagram(n for n in self._seq if n in keep)

    def extends(self, sub: "FiniteDiagram") -> bool:
        """Fact-set inclusion: sub's elements and all its order facts hold here."""
        last = -1
        for name in sub._seq:
            r = self._rank.get(name)
            if r is None or r <= last:
                return False
            last = r
        return True

    def fact_set(self) -> frozenset:
        """Explicit fact view; quadratic, meant for small diagrams."""
        enc = [n.encode() for n in self._seq]
        facts = {("E", e) for e in enc}
        for i in range(len(enc)):
            for j in range(i + 1, len(enc)):
                facts.add(("L", enc[i], enc[j]))
        return frozenset(facts)

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteDiagram) and self._seq == other._seq

    def __hash__(self) -> int:
        return hash(self._seq)

    def __repr__(self) -> str:
        inner = " < ".join(n.encode() for n in self._seq[:8])
        if len(self._seq) > 8:
            inner += f" < ... ({len(self._seq)} elements)"
        return f"FiniteDiagram({inner})"


EMPTY_DIAGRAM = FiniteDiagram(())
