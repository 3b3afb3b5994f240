"""Element-name encoding and finite-diagram mechanics."""

import pytest

from ordembed.diagram import FiniteDiagram, NotLinearError, linear_order_from_facts
from ordembed.names import Atom, Copy, NameSyntaxError, Pair, Tup, parse_name


class TestNames:
    def test_encodings(self):
        assert Atom(5).encode() == "5"
        assert Pair(Atom(0), Atom(1)).encode() == "P(0,1)"
        assert Tup(Atom(2), (Atom(0), Atom(1))).encode() == "T(2,[0,1])"
        assert Tup(Atom(2), ()).encode() == "T(2,[])"
        assert Copy(3, Pair(Atom(0), Atom(1))).encode() == "C(3,P(0,1))"

    def test_roundtrip(self):
        names = [
            Atom(17),
            Pair(Atom(0), Pair(Atom(1), Atom(2))),
            Tup(Atom(1), (Atom(2), Atom(3), Atom(4))),
            Copy(0, Tup(Atom(9), ())),
        ]
        for name in names:
            assert parse_name(name.encode()) == name

    def test_parse_errors(self):
        for bad in ["", "P(1)", "T(1,[2)", "C(x,1)", "5x", "P(1,2))"]:
            with pytest.raises(NameSyntaxError):
                parse_name(bad)

    def test_injective_on_sample(self):
        names = [Atom(12), Pair(Atom(1), Atom(2)), Copy(1, Atom(2)),
                 Tup(Atom(1), (Atom(2),)), Tup(Atom(12), ())]
        encoded = {n.encode() for n in names}
        assert len(encoded) == len(names)


class TestFiniteDiagram:
    def test_order_queries(self):
        d = FiniteDiagram([Atom(2), Atom(0), Atom(1)])
        assert d.less(Atom(2), Atom(1))
        assert not d.less(Atom(1), Atom(2))
        assert d.rank(Atom(0)) == 1
        assert d.interval_size(Atom(2), Atom(1)) == 1
        assert len(d) == 3

    def test_duplicates_rejected(self):
        with pytest.raises(NotLinearError):
            FiniteDiagram([Atom(1), Atom(1)])

    def test_extends(self):
        small = FiniteDiagram([Atom(0), Atom(2)])
        big = FiniteDiagram([Atom(0), Atom(1), Atom(2)])
        flipped = FiniteDiagram([Atom(2), Atom(1), Atom(0)])
        assert big.extends(small)
        assert not small.extends(big)
        assert not flipped.extends(small)
        assert big.extends(big)

    def test_restrict(self):
        d = FiniteDiagram([Atom(i) for i in range(5)])
        r = d.restrict({Atom(1), Atom(3)})
        assert r.ordered == (Atom(1), Atom(3))

    def test_fact_set(self):
        d = FiniteDiagram([Atom(0), Atom(1)])
        assert d.fact_set() == frozenset(
            {("E", "0"), ("E", "1"), ("L", "0", "1")}
        )


class TestLinearFromFacts:
    def test_total_chain(self):
        elements = [Atom(0), Atom(1), Atom(2)]
        pairs = [(Atom(0), Atom(1)), (Atom(1), Atom(2))]
        order, reason, _ = linear_order_from_facts(elements, pairs)
        assert order == elements
        assert reason == ""

    def test_transitive_recovery(self):
        elements = [Atom(0), Atom(1), Atom(2)]
        pairs = [(Atom(0), Atom(1)), (Atom(1), Atom(2)), (Atom(0), Atom(2))]
        order, _, _ = linear_order_from_facts(elements, pairs)
        assert order == elements

    def test_missing_comparison(self):
        order, reason, witness = linear_order_from_facts(
            [Atom(0), Atom(1)], []
        )
        assert order is None
        assert reason == "incomparable elements"
        assert len(witness) == 2

    def test_cycle(self):
        order, reason, _ = linear_order_from_facts(
            [Atom(0), Atom(1)],
            [(Atom(0), Atom(1)), (Atom(1), Atom(0))],
        )
        assert order is None
        assert reason == "cycle in order facts"

    def test_reflexive(self):
        order, reason, _ = linear_order_from_facts(
            [Atom(0)], [(Atom(0), Atom(0))]
        )
        assert order is None
        assert reason == "reflexive order fact"
