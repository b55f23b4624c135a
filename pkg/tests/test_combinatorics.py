import itertools
import math

import pytest
from hypothesis import given, strategies as st

from spoa.combinatorics import (
    IndexSet, Label, coalition_coefficient, deviation_terms, falling_factorial, index_set,
    index_set_size,
)


def brute_coefficient(label, zeta, n, alpha, beta):
    """Count ordered coalitions directly over concrete player types."""
    e, x, o = label
    types = ["e"] * e + ["o"] * o + ["-"] * (n - e - o)
    count = 0
    for perm in itertools.permutations(range(n), zeta):
        picked = [types[p] for p in perm]
        if picked.count("e") == alpha and picked.count("o") == beta:
            count += 1
    return count


def test_falling_factorial_values():
    assert falling_factorial(5, 0) == 1
    assert falling_factorial(5, 2) == 20
    assert falling_factorial(5, 5) == 120
    assert falling_factorial(3, 4) == 0
    assert falling_factorial(0, 0) == 1
    with pytest.raises(ValueError):
        falling_factorial(-1, 0)


@given(st.integers(0, 30), st.integers(0, 30))
def test_falling_factorial_matches_product(x, y):
    expected = 1
    for i in range(y):
        expected *= x - i
    assert falling_factorial(x, y) == max(expected, 0)


def test_index_set_sizes():
    # brute enumeration, independent of the label generator
    for n in (1, 2, 3, 5, 20):
        count = sum(1 for e in range(n + 1) for x in range(n + 1) for o in range(n + 1) if 1 <= e + x + o <= n)
        assert len(IndexSet(n)) == count == index_set_size(n)
    assert index_set_size(20) == 1770


def test_index_set_order_and_lookup():
    s = index_set(3)
    assert s[0] == Label(0, 0, 1)
    assert list(s) == sorted(s)
    for i, lab in enumerate(s):
        assert s.position(lab) == i
        assert lab in s
    assert (0, 0, 0) not in s
    assert (2, 2, 0) not in s
    with pytest.raises(ValueError):
        IndexSet(0)


def test_label_properties():
    lab = Label(2, 1, 3)
    assert (lab.total, lab.ne_load, lab.opt_load) == (6, 3, 4)
    assert str(lab) == "(2,1,3)"


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_coefficient_matches_brute_count(n):
    for lab in index_set(n):
        for zeta in range(1, n + 1):
            for alpha in range(zeta + 1):
                for beta in range(zeta - alpha + 1):
                    assert coalition_coefficient(lab, zeta, n, alpha, beta) == \
                        brute_coefficient(lab, zeta, n, alpha, beta)


@pytest.mark.parametrize("n", range(1, 9))
def test_coefficients_sum_to_falling_factorial(n):
    for lab in index_set(n):
        for zeta in range(1, n + 1):
            total = sum(coalition_coefficient(lab, zeta, n, a, b)
                        for a in range(zeta + 1) for b in range(zeta - a + 1))
            assert total == math.perm(n, zeta)


@pytest.mark.parametrize("n", range(1, 9))
def test_deviation_loads_stay_in_range(n):
    for lab in index_set(n):
        for zeta in range(1, n + 1):
            terms = deviation_terms(lab, zeta, n)
            assert sum(c for _, c in terms) == math.perm(n, zeta)
            for load, count in terms:
                assert count > 0
                assert 0 <= load <= n


def test_coefficient_argument_checks():
    with pytest.raises(ValueError):
        coalition_coefficient((2, 2, 0), 1, 3, 0, 0)
    with pytest.raises(ValueError):
        coalition_coefficient((1, 0, 0), 0, 3, 0, 0)
    with pytest.raises(ValueError):
        coalition_coefficient((1, 0, 0), 2, 3, 2, 1)
