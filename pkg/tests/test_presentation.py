"""Presentations: decode rules, monotone prefixes, combinators, schedules."""

import pytest

from ordembed import ordertype as ot
from ordembed.names import Atom, Copy
from ordembed.presentation import (
    Schedule,
    UnsupportedTargetType,
    cantor_tuple,
    concat_sum,
    interleave_merge,
    partition_recombine,
    random_extension,
    random_finite_diagram,
    round_interleave,
    std_presentation,
    strict_growth_interleave,
)


def atoms(diag):
    return [n.value for n in diag.ordered]


class TestStdPresentation:
    def test_omega_two_copies(self):
        p = std_presentation(ot.parse("w*2"))
        d = p.prefix(4)
        assert atoms(d) == [0, 2, 1, 3]
        # the even-valued copy sits entirely below the odd-valued copy
        assert d.less(Atom(0), Atom(2)) and d.less(Atom(1), Atom(3))
        assert d.less(Atom(2), Atom(1))

    def test_reversed_omega(self):
        p = std_presentation(ot.parse("rev(w)"))
        assert atoms(p.prefix(3)) == [2, 1, 0]

    def test_omega_squared_unpairing(self):
        p = std_presentation(ot.parse("w^2"))
        assert atoms(p.prefix(6)) == [0, 2, 5, 1, 4, 3]

    def test_omega_squared_embeds_by_key(self):
        # decoded positions embed order-preservingly at every stage
        p = std_presentation(ot.parse("w^2"))
        for s in (10, 50, 100):
            d = p.prefix(s)
            keys = [cantor_tuple(n.value, 2) for n in d.ordered]
            assert keys == sorted(keys)

    def test_finite_target_caps(self):
        p = std_presentation(ot.fin(3))
        assert atoms(p.prefix(2)) == [0, 1]
        assert atoms(p.prefix(10)) == [0, 1, 2]

    def test_prefix_monotone(self):
        p = std_presentation(ot.parse("w^2"), Schedule(kind="seeded", seed=9))
        previous = p.prefix(0)
        assert len(previous) == 0
        for s in range(1, 40):
            current = p.prefix(s)
            assert current.extends(previous)
            previous = current

    def test_strided_atoms(self):
        p = std_presentation(ot.parse("w"), stride=2, offset=1)
        assert atoms(p.prefix(4)) == [1, 3, 5, 7]
        assert p.target_rank(Atom(5)) == 2

    def test_seeded_schedule_reaches_everything(self):
        p = std_presentation(ot.parse("w"), Schedule(kind="seeded", seed=3))
        seen = {n.value for n in p.prefix(64).ordered}
        assert seen == set(range(64))

    def test_explicit_schedule(self):
        sched = Schedule(kind="explicit", explicit=(5, 0, 2))
        p = std_presentation(ot.parse("w"), sched)
        assert {n.value for n in p.prefix(3).ordered} == {5, 0, 2}
        assert {n.value for n in p.prefix(5).ordered} == {5, 0, 2, 1, 3}

    def test_schedule_content_independence(self):
        # any prefix under one schedule is contained in some prefix of the
        # other, with identical positions for the shared atoms
        a = std_presentation(ot.parse("w*2"))
        b = std_presentation(ot.parse("w*2"), Schedule(kind="seeded", seed=1))
        for s in range(1, 50):
            da = a.prefix(s)
            found = False
            for t in range(s, 50 * 4):
                if b.prefix(t).extends(da):
                    found = True
                    break
            assert found

    def test_unsupported_targets(self):
        with pytest.raises(UnsupportedTargetType):
            std_presentation(ot.parse("w^2*2"))
        with pytest.raises(UnsupportedTargetType):
            std_presentation(ot.parse("w + rev(w)"))
        with pytest.raises(UnsupportedTargetType):
            std_presentation(ot.parse("w^w"))

    def test_schedule_parse(self):
        assert Schedule.parse("standard").kind == "standard"
        assert Schedule.parse("seeded:42").seed == 42
        assert Schedule.parse("explicit:3,1,2").explicit == (3, 1, 2)
        with pytest.raises(ValueError):
            Schedule.parse("bogus")


class TestCombinators:
    def test_concat_tagged(self):
        p = concat_sum([std_presentation(ot.parse("w")),
                        std_presentation(ot.parse("w"))])
        d = p.prefix(4)
        assert d.ordered == (
            Copy(0, Atom(0)), Copy(0, Atom(1)), Copy(1, Atom(0)), Copy(1, Atom(1)),
        )
        assert ot.equal(p.target, ot.parse("w*2"))

    def test_concat_raw_disjoint(self):
        a = std_presentation(ot.parse("w"), stride=2, offset=0)
        b = std_presentation(ot.parse("w"), stride=2, offset=1)
        p = concat_sum([a, b], tag=False)
        d = p.prefix(6)
        values = atoms(d)
        assert values == [0, 2, 4, 1, 3, 5]

    def test_concat_raw_collision_detected(self):
        p = concat_sum([std_presentation(ot.parse("w")),
                        std_presentation(ot.parse("w"))], tag=False)
        with pytest.raises(ValueError):
            p.prefix(4)

    def test_concat_finite_parts(self):
        p = concat_sum([std_presentation(ot.fin(2)),
                        std_presentation(ot.fin(2))])
        assert len(p.prefix(10)) == 4

    def test_interleave_merge_diagonals(self):
        rows = [std_presentation(ot.parse("w"), stride=2, offset=r)
                for r in range(2)]
        p = interleave_merge(rows)
        d = p.prefix(8)
        # diagonal order: parts with row+part = d precede row+part = d+1
        expected = [0, 2, 1, 4, 3, 6, 5, 8]
        assert atoms(d) == expected
        assert ot.equal(p.target, ot.parse("w"))

    def test_interleave_merge_contains_rows(self):
        rows = [std_presentation(ot.parse("w"), stride=3, offset=r)
                for r in range(3)]
        p = interleave_merge(rows)
        d = p.prefix(30)
        for r, row in enumerate(rows):
            row_atoms = [n for n in d.ordered if n.value % 3 == r]
            positions = [row.target_rank(n) for n in row_atoms]
            assert positions == sorted(positions)

    def test_interleave_merge_single_row_identity(self):
        row = std_presentation(ot.parse("w"))
        p = interleave_merge([row])
        assert atoms(p.prefix(6)) == [0, 1, 2, 3, 4, 5]

    def test_partition_recombine_layout(self):
        rows = [std_presentation(ot.parse("w"), stride=3, offset=r)
                for r in range(2)]
        tail = std_presentation(ot.parse("w"), stride=3, offset=2)
        p = partition_recombine(rows, tail)
        d = p.prefix(9)
        recombined = [n.value for n in d.ordered if n.value % 3 != 2]
        tail_values = [n.value for n in d.ordered if n.value % 3 == 2]
        # all recombined elements below all tail elements
        boundary = d.rank(Atom(tail_values[0]))
        assert all(d.rank(Atom(v)) < boundary for v in recombined)
        # rounds alternate the rows: position 0 of each row, then position 1
        assert recombined == [0, 1, 3, 4, 6, 7]
        assert ot.equal(p.target, ot.parse("w*2"))

    def test_partition_recombine_part_size(self):
        rows = [std_presentation(ot.parse("w"), stride=3, offset=r)
                for r in range(2)]
        tail = std_presentation(ot.parse("w"), stride=3, offset=2)
        p = partition_recombine(rows, tail, part_size=2)
        d = p.prefix(12)
        recombined = [n.value for n in d.ordered if n.value % 3 != 2]
        # parts of two: row0's 0,3 then row1's 1,4 then row0's 6,9 ...
        assert recombined == [0, 3, 1, 4, 6, 9, 7, 10]

    def test_partition_recombine_mirror(self):
        rows = [std_presentation(ot.parse("rev(w)"), stride=3, offset=r)
                for r in range(2)]
        tail = std_presentation(ot.parse("rev(w)"), stride=3, offset=2)
        p = partition_recombine(rows, tail, mirror=True)
        assert ot.equal(p.target, ot.parse("rev(w)*2"))
        d = p.prefix(9)
        tail_values = [n.value for n in d.ordered if n.value % 3 == 2]
        other = [n.value for n in d.ordered if n.value % 3 != 2]
        assert all(
            d.less(Atom(t), Atom(o)) for t in tail_values for o in other
        )

    def test_round_interleave(self):
        rows = [std_presentation(ot.parse("w"), stride=2, offset=r)
                for r in range(2)]
        p = round_interleave(rows)
        assert atoms(p.prefix(6)) == [0, 1, 2, 3, 4, 5]

    def test_strict_growth_layout(self):
        head, b, c, tail = (
            std_presentation(ot.parse("w"), stride=4, offset=r)
            for r in range(4)
        )
        p = strict_growth_interleave(head, b, c, tail)
        d = p.prefix(16)
        regions = [n.value % 4 for n in d.ordered]
        # head region, then interleaved middle, then tail region
        head_top = max(i for i, r in enumerate(regions) if r == 0)
        middle = [i for i, r in enumerate(regions) if r in (1, 2)]
        tail_bottom = min(i for i, r in enumerate(regions) if r == 3)
        assert head_top < min(middle) and max(middle) < tail_bottom
        assert ot.equal(p.target, ot.parse("w*3"))

    def test_rows_must_present_omega(self):
        with pytest.raises(ValueError):
            interleave_merge([std_presentation(ot.parse("w*2"))])
        with pytest.raises(ValueError):
            partition_recombine(
                [std_presentation(ot.parse("w"))],
                std_presentation(ot.parse("rev(w)")),
            )


class TestRandomDiagrams:
    def test_deterministic(self):
        for seed in (0, 1, 7):
            assert random_finite_diagram(9, seed) == random_finite_diagram(9, seed)
        assert random_finite_diagram(9, 0) != random_finite_diagram(9, 1)

    def test_extension_contains_base(self):
        base = random_finite_diagram(8, 3)
        ext = random_extension(base, 4, 5)
        assert ext.extends(base)
        assert len(ext) == 12
