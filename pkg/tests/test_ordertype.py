"""Symbolic order-type arithmetic: parsing, normalization, and the identities."""

import pytest
from hypothesis import given, settings, strategies as st

from ordembed import ordertype as ot
from ordembed.analysis import truncation_iso_oracle
from ordembed.ordertype import (
    ExprSyntaxError,
    MixedPolarity,
    SummandSpec,
    UnsupportedSummandFamily,
    W,
)


def norm(text):
    return ot.normalize(ot.parse(text))


class TestParse:
    def test_multi_term(self):
        e = ot.parse("w^2*3 + w*2 + 5")
        assert str(e) == "w^2*3 + w*2 + 5"
        assert len(e.terms) == 3

    def test_reversed(self):
        e = ot.parse("rev(w^2)")
        assert str(e) == "rev(w^2)"
        assert e.is_pure_reversed()

    def test_zero(self):
        assert ot.parse("0").is_zero()
        assert ot.parse("0*5").is_zero()
        assert ot.parse("w*0").is_zero()

    def test_whitespace_insignificant(self):
        assert ot.parse(" w^2 * 3+w ") == ot.parse("w^2*3 + w")

    def test_compound_exponent(self):
        e = ot.parse("w^(w+1)")
        assert str(e) == "w^(w + 1)"
        assert ot.parse(str(e)) == e

    def test_nested_power_exponent(self):
        assert str(ot.parse("w^w^2")) == "w^w^2"

    def test_finite_products(self):
        assert ot.equal(ot.parse("3*4"), ot.parse("12"))

    def test_syntax_errors_carry_position(self):
        with pytest.raises(ExprSyntaxError):
            ot.parse("w^")
        with pytest.raises(ExprSyntaxError):
            ot.parse("rev(w")
        with pytest.raises(ExprSyntaxError):
            ot.parse("w + + w")
        with pytest.raises(ExprSyntaxError):
            ot.parse("q")

    def test_reversed_exponent_rejected(self):
        with pytest.raises(ExprSyntaxError):
            ot.parse("w^(rev(w))")

    def test_roundtrip(self):
        for text in ["0", "5", "w", "w*7", "w^2*3 + w*2 + 5", "rev(w^2)*3",
                     "w^(w+2)", "3 + rev(w) + w^3"]:
            e = ot.parse(text)
            assert ot.parse(str(e)) == e


class TestNormalize:
    def test_left_absorption(self):
        assert norm("w + w^2") == norm("w^2")
        assert norm("3 + w") == norm("w")
        assert norm("w^2*2 + w^3") == norm("w^3")

    def test_reversed_mirror_absorption(self):
        assert norm("rev(w^2) + rev(w)") == norm("rev(w^2)")
        assert norm("rev(w) + 3") == norm("rev(w)")

    def test_merging_equal_exponents(self):
        assert norm("w + w") == norm("w*2")
        assert norm("w^2*2 + w^2") == norm("w^2*3")
        assert norm("rev(w)*2 + rev(w)") == norm("rev(w)*3")
        assert norm("2 + 3") == norm("5")

    def test_no_absorption_across_polarity(self):
        assert str(norm("w + rev(w)")) == "w + rev(w)"
        assert str(norm("rev(w) + w")) == "rev(w) + w"

    def test_no_absorption_descending(self):
        assert str(norm("w^2 + w")) == "w^2 + w"
        assert str(norm("w + 3")) == "w + 3"
        assert str(norm("3 + rev(w)")) == "3 + rev(w)"

    def test_exponent_zero_is_finite(self):
        assert norm("w^0") == ot.fin(1)
        assert norm("w^0*4") == ot.fin(4)

    def test_idempotent(self):
        for text in ["w + w^2 + w", "rev(w^2) + rev(w) + 3", "w + rev(w) + w"]:
            once = norm(text)
            assert ot.normalize(once) == once


class TestReverse:
    def test_swaps_polarity(self):
        assert ot.reverse(ot.parse("w^2*3")) == ot.parse("rev(w^2)*3")

    def test_flips_order(self):
        assert ot.reverse(ot.parse("w*2 + 3")) == ot.parse("3 + rev(w)*2")

    def test_involution(self):
        for text in ["w^2*3 + w + 5", "rev(w) + w", "0", "w^(w+1)"]:
            e = ot.parse(text)
            assert ot.reverse(ot.reverse(e)) == e

    def test_commutes_with_normalize(self):
        for text in ["3 + w", "w + w^2", "rev(w^2) + rev(w)", "w + 3 + w",
                     "rev(w) + 4 + w^2"]:
            e = ot.parse(text)
            assert ot.normalize(ot.reverse(e)) == ot.reverse(ot.normalize(e))


class TestAddMul:
    def test_add_identity(self):
        e = ot.parse("w^2 + rev(w)")
        assert ot.add(ot.ZERO, e) == ot.normalize(e)
        assert ot.add(e, ot.ZERO) == ot.normalize(e)

    def test_add_absorbs(self):
        for n in range(1, 6):
            assert ot.add(W, ot.parse(f"w^2*{n}")) == ot.parse(f"w^2*{n}")
        assert ot.add(ot.parse("rev(w^2)*4"), ot.parse("rev(w)")) == \
            ot.parse("rev(w^2)*4")

    def test_add_associative(self):
        texts = ["w", "3", "w^2", "rev(w)", "w*2 + 1"]
        exprs = [ot.parse(t) for t in texts]
        for a in exprs:
            for b in exprs:
                for c in exprs:
                    assert ot.add(a, ot.add(b, c)) == ot.add(ot.add(a, b), c)

    def test_mul_identities(self):
        for n in range(1, 6):
            # n stacked copies of w, taken that many times over itself
            assert ot.mul(ot.omega(n), ot.omega(n)) == ot.parse(f"w^2*{n}")
            assert ot.mul(ot.omega(n), W) == ot.parse("w^2")
        e = ot.parse("w^3 + w")
        assert ot.mul(e, ot.fin(1)) == ot.normalize(e)

    def test_mul_powers(self):
        for n in range(2, 6):
            got = ot.mul(ot.omega_power(n - 1), ot.omega_power(n - 1))
            assert got == ot.omega_power(2 * n - 2)

    def test_mul_finite_distribution(self):
        # (w*2 + 1) * 3 = w*2+1 repeated; trailing block absorbed inward
        got = ot.mul(ot.parse("w*2 + 1"), ot.fin(3))
        assert got == ot.parse("w*6 + 1")

    def test_mul_reversed_pair(self):
        got = ot.mul(ot.parse("rev(w)"), ot.parse("rev(w)"))
        assert got == ot.parse("rev(w^2)")

    def test_mul_mixed_polarity_rejected(self):
        with pytest.raises(MixedPolarity):
            ot.mul(W, ot.parse("rev(w)"))
        with pytest.raises(MixedPolarity):
            ot.mul(ot.parse("w + rev(w)"), W)

    def test_pow_finite(self):
        assert ot.pow_finite(ot.omega_power(3), 2) == ot.omega_power(6)
        assert ot.pow_finite(ot.parse("rev(w^2)"), 2) == ot.parse("rev(w^4)")
        e = ot.parse("w^2 + w")
        assert ot.pow_finite(e, 1) == ot.normalize(e)
        with pytest.raises(ValueError):
            ot.pow_finite(W, 0)


class TestSumOver:
    def test_finite_summands_over_omega(self):
        assert ot.sum_over(W, SummandSpec.finite()) == W

    def test_constant_omega_summands(self):
        got = ot.sum_over(W, SummandSpec.constant(ot.omega(2)))
        assert got == ot.parse("w^2")

    def test_leading_family(self):
        for n in range(2, 6):
            got = ot.sum_over(W, SummandSpec.leading(n - 1))
            assert got == ot.omega_power(n)

    def test_finite_index_constant(self):
        got = ot.sum_over(ot.fin(3), SummandSpec.constant(ot.parse("w^2")))
        assert got == ot.parse("w^2*3")

    def test_reversed_mirror(self):
        got = ot.sum_over(ot.parse("rev(w)"),
                          SummandSpec.constant(ot.parse("rev(w)*2")))
        assert got == ot.parse("rev(w^2)")
        assert ot.sum_over(ot.parse("rev(w)"), SummandSpec.finite()) == \
            ot.parse("rev(w)")

    def test_increasing_powers(self):
        got = ot.sum_over(W, SummandSpec.increasing_powers(W))
        assert got == ot.parse("w^w")

    def test_unsupported_families(self):
        with pytest.raises(UnsupportedSummandFamily):
            ot.sum_over(ot.parse("w + 1"), SummandSpec.finite())
        with pytest.raises(UnsupportedSummandFamily):
            ot.sum_over(ot.fin(3), SummandSpec.finite())
        with pytest.raises(UnsupportedSummandFamily):
            ot.sum_over(W, SummandSpec.constant(ot.parse("rev(w)")))
        with pytest.raises(UnsupportedSummandFamily):
            ot.sum_over(ot.parse("w^2"), SummandSpec.increasing_powers(W))


class TestEqual:
    def test_absorption_pairs(self):
        assert ot.equal(ot.parse("w^2*3"), ot.parse("w + w^2*3"))
        assert not ot.equal(W, ot.parse("rev(w)"))
        assert not ot.equal(ot.parse("w*2"), W)


# -- property tests --------------------------------------------------------

_atoms = st.sampled_from(
    ["1", "2", "3", "w", "w*2", "w*3", "w^2", "w^2*2", "rev(w)",
     "rev(w)*2", "rev(w^2)"]
)
_exprs = st.lists(_atoms, min_size=1, max_size=3).map(" + ".join)


@settings(max_examples=200, deadline=None)
@given(_exprs)
def test_normalize_idempotent(text):
    e = ot.parse(text)
    once = ot.normalize(e)
    assert ot.normalize(once) == once


@settings(max_examples=200, deadline=None)
@given(_exprs)
def test_reverse_involution_and_commutation(text):
    e = ot.parse(text)
    assert ot.reverse(ot.reverse(e)) == e
    assert ot.normalize(ot.reverse(e)) == ot.reverse(ot.normalize(e))


@settings(max_examples=100, deadline=None)
@given(_exprs, _exprs)
def test_add_matches_concatenation_type(a, b):
    ea, eb = ot.parse(a), ot.parse(b)
    combined = ot.OrderTypeExpr(ea.terms + eb.terms)
    assert ot.add(ea, eb) == ot.normalize(combined)


@settings(max_examples=80, deadline=None)
@given(_exprs, _exprs)
def test_fragment_soundness_oracle(a, b):
    # symbolic equality agrees with the finite-sample oracle on this
    # fragment (exponents up to 2, at most three terms)
    ea, eb = ot.parse(a), ot.parse(b)
    assert ot.equal(ea, eb) == truncation_iso_oracle(ea, eb)
