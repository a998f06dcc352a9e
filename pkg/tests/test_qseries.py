import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tauforms.arith import Rat
from tauforms.forms import e2, eisenstein, sigma
from tauforms.qseries import QSeries, delta_series

small_series = st.lists(
    st.builds(lambda n, d: Rat(n, d), st.integers(-50, 50), st.integers(1, 12)),
    min_size=1,
    max_size=20,
).map(QSeries)


def q(*coeffs):
    return QSeries([Rat(c) if not isinstance(c, str) else Rat(c) for c in coeffs])


def test_add_examples():
    assert q(1, 1) + q(1, -1) == q(2, 0)
    e4 = eisenstein(4, 10).series
    assert (e4 + e4.scale(-1)).is_zero()


def test_precision_is_min_of_operands():
    a, b = QSeries.one(10), QSeries.one(5)
    assert (a + b).prec == 5
    assert (a * b).prec == 5
    assert (a - b).prec == 5


def test_mul_examples():
    assert q(1, 1, 0) * q(1, -1, 0) == q(1, 0, -1)
    e4 = eisenstein(4, 10).series
    e8 = eisenstein(8, 10).series
    assert (e4 * e8)[1] == 720
    assert e4 * QSeries.one(10) == e4


def test_pow_examples():
    f = q(1, 1)
    assert f**0 == QSeries.one(2)
    assert q(1, 1, 0, 0) ** 3 == q(1, 3, 3, 1)


def test_e2_square_coefficients():
    # coefficient of q^n in E2^2 is 240 sigma_3(n) - 288 n sigma_1(n)
    sq = e2(51).series ** 2
    assert sq[0] == 1
    for n in range(1, 51):
        assert sq[n] == 240 * sigma(3, n) - 288 * n * sigma(1, n)


@settings(max_examples=30)
@given(small_series, small_series)
def test_leibniz_rule(f, g):
    lhs = (f * g).derive(1)
    rhs = f.derive(1) * g + f * g.derive(1)
    assert lhs == rhs


@settings(max_examples=20)
@given(small_series, st.integers(0, 8))
def test_pow_matches_iterated_mul(f, e):
    expected = QSeries.one(f.prec)
    for _ in range(e):
        expected = expected * f
    assert f**e == expected


def test_derive_examples():
    f = q(3, 5, 7)
    assert f.derive(0) is f
    assert e2(10).series.derive(1)[1] == -24
    assert q(0, 0, 1).derive(3) == q(0, 0, 8)


def test_shift_examples():
    assert QSeries.one(1).shift(3) == q(0, 0, 0, 1)
    e4 = eisenstein(4, 10).series
    assert e4.shift(0) == e4
    assert q(1, -24).shift(2) == q(0, 0, 1, -24)
    assert q(1, -24).shift(2).prec == 4


def test_delta_leading_coefficients():
    d = delta_series(8)
    assert d[0] == 0 and d[1] == 1 and d[2] == -24
    assert all(c.denominator == 1 for c in d.coeffs)


def naive_eta24(prec):
    """Dense expansion of q prod_{n<prec}(1-q^n)^24, the independent route."""
    poly = [Rat(1)] + [Rat(0)] * (prec - 1)

    def mul_by(factor_exp):
        # multiply by (1 - q^factor_exp)
        out = poly[:]
        for i in range(prec - factor_exp):
            out[i + factor_exp] -= poly[i]
        return out

    for n in range(1, prec):
        for _ in range(24):
            poly = mul_by(n)
    return QSeries([Rat(0)] + poly[: prec - 1])


def test_delta_matches_naive_product():
    prec = 40
    assert delta_series(prec) == naive_eta24(prec)


def test_delta_tau_multiplicativity():
    prec = 200
    d = delta_series(prec)
    from math import gcd

    for a in range(2, prec):
        for b in range(a + 1, prec):
            if a * b >= prec:
                break
            if gcd(a, b) == 1:
                assert d[a * b] == d[a] * d[b]


def test_delta_requires_prec_two():
    with pytest.raises(ValueError):
        delta_series(1)


def test_json_roundtrip():
    f = q("5/6", -24, "163224/7")
    assert QSeries.from_json(f.to_json()) == f
    assert '"prec": 3' in f.to_json()


def test_mul_scalar_and_neg():
    f = q(1, 2, 3)
    assert f.scale(Rat(1, 2)) == q("1/2", 1, "3/2")
    assert -f == q(-1, -2, -3)
    assert 2 * f == q(2, 4, 6)
