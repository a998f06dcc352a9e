from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tauforms.arith import (
    InconsistentSystem,
    Rat,
    as_rat,
    bernoulli,
    binomial,
    is_integral,
    parse_rat,
    pochhammer,
    rat_str,
    rat_to_mpf,
    solve_exact,
)

rationals = st.builds(
    lambda n, d: Rat(n, d), st.integers(-10**6, 10**6), st.integers(1, 10**4)
)


def test_bernoulli_small_values():
    assert bernoulli(0) == 1
    assert bernoulli(2) == Rat(1, 6)
    assert bernoulli(4) == Rat(-1, 30)
    assert bernoulli(12) == Rat(-691, 2730)


def test_bernoulli_rejects_odd():
    with pytest.raises(ValueError, match="odd-index Bernoulli"):
        bernoulli(3)
    with pytest.raises(ValueError):
        bernoulli(-2)


def test_bernoulli_recurrence():
    # sum_{j=0}^{n} C(n+1, j) B_j = 0 for 1 <= n <= 30 (odd B beyond B1 are zero)
    def b(j):
        if j == 1:
            return Rat(-1, 2)
        if j % 2 == 1:
            return Rat(0)
        return bernoulli(j)

    for n in range(1, 31):
        assert sum(comb(n + 1, j) * b(j) for j in range(n + 1)) == 0


def test_eisenstein_prefactors():
    # 2k/B_k for the weights in play; only k = 12 is non-integral
    expected = {
        2: Rat(24),
        4: Rat(-240),
        6: Rat(504),
        8: Rat(-480),
        10: Rat(264),
        12: Rat(-65520, 691),
        14: Rat(24),
    }
    for k, val in expected.items():
        assert Rat(2 * k) / bernoulli(k) == val
        if k != 12:
            assert is_integral(val)
    assert not is_integral(expected[12])


def test_binomial_values():
    assert binomial(5, 2) == 10
    assert binomial(7, 0) == 1
    assert binomial(8, 3) == 56
    assert binomial(4, 7) == 0
    assert binomial(4, -1) == 0


@given(st.integers(0, 40), st.integers(-5, 45))
def test_binomial_pascal(n, k):
    assert binomial(n + 1, k) == binomial(n, k) + binomial(n, k - 1)


def test_pochhammer_values():
    assert pochhammer(3, 0) == 1
    assert pochhammer(2, 3) == 24
    assert pochhammer(8, 2) == 72
    assert pochhammer(-2, 3) == 0  # crosses zero


@given(st.integers(1, 30), st.integers(0, 8))
def test_pochhammer_is_factorial_ratio(a, m):
    from math import factorial

    assert pochhammer(a, m) == factorial(a + m - 1) // factorial(a - 1)


@given(rationals, rationals, rationals)
def test_rat_field_axioms(x, y, z):
    assert x + y == y + x
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)


@given(rationals)
def test_rat_string_roundtrip(x):
    assert parse_rat(rat_str(x)) == x


def test_rat_lowest_terms():
    r = Rat(6, 4)
    assert r.numerator == 3 and r.denominator == 2
    assert Rat(-6, 4).denominator == 2  # denominator stays positive
    assert rat_str(Rat(-6, 4)) == "-3/2"


def test_as_rat_refuses_floats():
    with pytest.raises(TypeError):
        as_rat(0.5)


def test_rat_to_mpf_single_rounding():
    x = rat_to_mpf(Rat(1, 3), 64)
    assert abs(x - 1 / 3) < 1e-15


def test_solve_exact_and_inconsistency():
    cols = [[1, 0, 2], [0, 1, 3]]
    assert solve_exact(cols, [5, 7, 31]) == [5, 7]
    with pytest.raises(InconsistentSystem):
        solve_exact(cols, [5, 7, 30])
