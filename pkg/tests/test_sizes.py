import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ccbp.sizes import (
    DominanceError,
    MaterializationError,
    SymbolicSize,
    fits_in_bin,
    one_minus_power,
    power,
    sym,
    sym_add,
    sym_cmp,
    sym_sign,
    sym_sum,
    to_exact_rational,
)
from oracles import exact_value, random_terms

F = Fraction


class TestConstruction:
    def test_merge_of_one_minus_and_small(self):
        s = one_minus_power(3, 48) + power(3, 56)
        assert s.base == 1
        assert s.terms == ((-1, 48), (1, 56))

    def test_plain_rationals(self):
        s = sym(3, F(7, 20)) + sym(3, F(7, 20))
        assert s.base == F(7, 10) and s.terms == ()

    def test_coefficient_merge(self):
        s = power(3, 48) + power(3, 48)
        assert s.terms == ((2, 48),)

    def test_cancellation_drops_term(self):
        assert (power(3, 9) - power(3, 9)).terms == ()

    def test_exponent_zero_folds_into_base(self):
        assert sym(2, 0, [(3, 0)]) == sym(2, 3)

    def test_negative_exponent_rejected(self):
        with pytest.raises(ValueError):
            sym(3, 0, [(1, -1)])

    def test_radix_checked(self):
        with pytest.raises(ValueError):
            SymbolicSize(1)
        with pytest.raises(ValueError):
            sym_add(power(2, 3), power(3, 3))

    def test_immutable(self):
        s = power(3, 4)
        with pytest.raises(AttributeError):
            s.base = F(1)

    def test_json_round_trip(self):
        s = sym(5, F(1, 3), [(F(-7, 2), 10 ** 30), (4, 17)])
        assert SymbolicSize.from_json(s.to_json()) == s

    def test_coefficient_guard(self):
        with pytest.raises(DominanceError, match="dominance precondition"):
            sym_add(power(2, 5, 16), power(2, 5, 1))
        # unchecked addition is allowed to go past the bound
        assert sym_add(power(2, 5, 16), power(2, 5, 1), check=False).terms == ((17, 5),)


class TestSign:
    @pytest.mark.parametrize("value, expected", [
        (sym(3, 0, [(-1, 48), (1, 56)]), -1),
        (sym(3, F(1, 2), [(-1, 48)]), 1),
        (sym(3), 0),
        (sym(3, 1, [(-1, 48)]) - 1, -1),
        # terms a whole cluster apart
        (sym(2, 0, [(1, 10), (-36, 10 ** 12)]), 1),
        # a leading cluster that cancels exactly
        (sym(2, 0, [(1, 3), (-2, 4), (-1, 10 ** 9)]), -1),
    ])
    def test_examples(self, value, expected):
        assert sym_sign(value) == expected

    def test_huge_exponents(self):
        e = 8 * 2 ** 40
        assert sym_cmp(power(3, e), power(3, e + 8)) == 1
        assert sym_cmp(one_minus_power(3, e), one_minus_power(3, e + 8)) == -1

    def test_undecidable_raises(self):
        # a tiny leading coefficient immediately followed by a heavy tail
        crafted = sym(2, 0, [(F(1, 10 ** 40), 1), (-10 ** 40, 100)])
        with pytest.raises(DominanceError):
            sym_sign(crafted)


class TestCompare:
    def test_examples(self):
        assert sym_cmp(power(3, 48), power(3, 56)) == 1
        assert sym_cmp(one_minus_power(3, 48), one_minus_power(3, 56)) == -1
        assert sym_cmp(sym(3, F(7, 20)), sym(3, F(7, 20))) == 0

    def test_operators_compare_values(self):
        assert power(3, 2) < power(3, 1)
        assert sym(3, F(1, 9)) >= power(3, 2)
        assert sym(3, F(1, 9)) != power(3, 2)  # structural equality differs


class TestFits:
    def test_examples(self):
        assert fits_in_bin([one_minus_power(3, 48), power(3, 56)], 3)
        assert not fits_in_bin([one_minus_power(3, 56), power(3, 48)], 3)
        assert not fits_in_bin([power(3, 100)] * 4, 3)

    def test_exactly_full(self):
        assert fits_in_bin([sym(2, F(1, 2)), sym(2, F(1, 2))], 2)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            fits_in_bin([], 3)

    def test_monotone_under_removal(self):
        rng = random.Random(5)
        for _ in range(300):
            k = rng.randint(2, 5)
            sizes = [sym(k, F(rng.randint(1, 9), 10), random_terms(rng, k, 40, 2))
                     for _ in range(rng.randint(2, k + 1))]
            if any(to_exact_rational(x) <= 0 for x in sizes):
                continue
            if fits_in_bin(sizes, k):
                for i in range(len(sizes)):
                    rest = sizes[:i] + sizes[i + 1:]
                    assert fits_in_bin(rest, k)


class TestMaterialize:
    def test_examples(self):
        assert to_exact_rational(sym(3, F(1, 2))) == F(1, 2)
        assert to_exact_rational(power(3, 2)) == F(1, 9)
        assert to_exact_rational(one_minus_power(2, 4)) == F(15, 16)

    def test_too_large(self):
        with pytest.raises(MaterializationError, match="materialization too large"):
            to_exact_rational(power(2, 2 ** 13 + 1))


# property checks against plain big rationals

EXP = 2 ** 13


@st.composite
def sizes(draw, k=None):
    k = k or draw(st.integers(2, 6))
    bound = 4 * k * k
    base = F(draw(st.integers(-3, 3)), draw(st.integers(1, 4)))
    terms = draw(st.lists(st.tuples(
        st.fractions(min_value=-bound, max_value=bound, max_denominator=bound),
        st.integers(1, EXP)), max_size=4))
    return sym(k, base, terms)


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_add_is_commutative_and_exact(data):
    a = data.draw(sizes())
    b = data.draw(sizes(a.k))
    s = sym_add(a, b, check=False)
    assert s == sym_add(b, a, check=False)
    assert to_exact_rational(s) == to_exact_rational(a) + to_exact_rational(b)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_add_is_associative(data):
    a = data.draw(sizes())
    b, c = data.draw(sizes(a.k)), data.draw(sizes(a.k))
    left = sym_add(sym_add(a, b, check=False), c, check=False)
    right = sym_add(a, sym_add(b, c, check=False), check=False)
    assert left == right


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_compare_matches_rationals(data):
    a = data.draw(sizes())
    b = data.draw(sizes(a.k))
    x, y = to_exact_rational(a), to_exact_rational(b)
    assert sym_cmp(a, b) == (x > y) - (x < y)


def test_sum_of_many_matches_oracle():
    rng = random.Random(11)
    for _ in range(200):
        k = rng.randint(2, 5)
        parts = [(F(rng.randint(0, 3), 7), random_terms(rng, k, 300, 3)) for _ in range(4)]
        vals = [sym(k, b, t) for b, t in parts]
        expected = sum(exact_value(k, b, t) for b, t in parts)
        assert to_exact_rational(sym_sum(vals)) == expected
    assert sym_sum([], 3) == sym(3)
