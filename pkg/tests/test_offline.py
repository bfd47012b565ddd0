import random
from fractions import Fraction

import pytest

from ccbp.offline import TooManyItems, brute_force_opt, chunks, modified_ratio
from ccbp.sizes import power, sym
from oracles import opt_by_assignment

F = Fraction


def test_modified_ratio():
    assert modified_ratio(15, 8, 0, 2) == F(5, 2)
    assert modified_ratio(10, 11, 0, 1) == 1
    assert modified_ratio(3, 2, 1, 0) == 2
    with pytest.raises(ZeroDivisionError):
        modified_ratio(5, 2, 0, 2)


def test_chunks():
    assert chunks([1, 2, 3, 4, 5], 2) == [[1, 2], [3, 4], [5]]
    assert chunks([], 3) == []


@pytest.mark.parametrize("values, k, expected", [
    ([F(3, 10)] * 4, 2, 2),
    ([F(6, 10), F(6, 10), F(3, 10)], 2, 2),
    ([F(1, 4)] * 4, 3, 2),
    ([], 3, 0),
    ([F(1, 2)] * 3, 3, 2),
])
def test_examples(values, k, expected):
    assert brute_force_opt([sym(k, v) for v in values], k) == expected


def test_symbolic_sizes():
    k = 3
    items = [sym(k, 1, [(-1, 40)]), power(3, 41), power(3, 39)]
    # the tiny item of size 3^-39 does not fit next to 1 - 3^-40
    assert brute_force_opt(items, k) == 2


def test_limit():
    with pytest.raises(TooManyItems):
        brute_force_opt([sym(2, F(1, 3))] * 17, 2)


def test_matches_exhaustive_oracle():
    rng = random.Random(3)
    for _ in range(120):
        k = rng.randint(2, 4)
        vals = [F(rng.randint(1, 12), 12) for _ in range(rng.randint(1, 6))]
        assert brute_force_opt([sym(k, v) for v in vals], k) == opt_by_assignment(vals, k)
