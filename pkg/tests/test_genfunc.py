from math import comb

import pytest

from sawsis.exact_enum import enumerate_directed, enumerate_nes, enumerate_strip
from sawsis.genfunc import (directed_gf, directed_second_moment_closed, f_divisible_by_g,
                            first_moment_gf, nes_moment_gf, nes_polys, series_coeff,
                            specialize_strip, strip_gf_multivariate, strip_moment_gf, t_kk)
from sawsis.polynomials import MultiPolynomial, Polynomial


def _series(num: MultiPolynomial, den: MultiPolynomial, degree: int) -> MultiPolynomial:
    """num/den expanded to the given total degree, assuming den has constant term 1."""
    assert den.constant_term() == 1
    one_minus = (1 - den)
    s = num.truncate(degree)
    for _ in range(degree + 1):
        s = (num + one_minus * s).truncate(degree)
    return s


def test_frozen_polynomials():
    n5, g5 = nes_polys(5)
    assert n5 == Polynomial([47, 144, 81])
    assert g5 == Polynomial([1, -70, -261, -162])
    assert nes_polys(2) == (Polynomial([5, 3]), Polynomial([1, -9, -6]))
    with pytest.raises(ValueError):
        nes_polys(0)


def test_prop1_example():
    m = nes_moment_gf(2)
    assert [series_coeff(m, l) for l in (1, 2)] == [10, 96]
    f = first_moment_gf(2)
    assert [series_coeff(f, l) for l in (1, 2)] == [9, 81]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_moment_series_matches_enumeration(k):
    m = nes_moment_gf(k)
    for l in range(1, 5):
        assert series_coeff(m, l) == enumerate_nes(k, l).weighted_sum


@pytest.mark.parametrize("k", range(1, 8))
def test_specialisation_gives_univariate(k):
    assert strip_moment_gf(k) == nes_moment_gf(k)


def test_specialised_polys_are_proportional():
    n, g = specialize_strip(3)
    un, ug = nes_polys(3)
    # equal as rational functions
    assert n * ug == un * g


@pytest.mark.parametrize("k", [1, 2, 3])
def test_strip_series_against_walks(k):
    n, g = strip_gf_multivariate(k)
    assert _series(n, g, 6) == enumerate_strip(k, 6)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_tkk_against_walks(k):
    y, b = MultiPolynomial.var("y"), MultiPolynomial.var("b")
    num = b * y ** (k - 1)
    assert _series(num, t_kk(k), 7) == enumerate_strip(k, 7, end_height=k)


@pytest.mark.parametrize("k", range(1, 7))
def test_f_divisible_by_g(k):
    ok, q = f_divisible_by_g(k)
    assert ok
    _, g = strip_gf_multivariate(k)
    assert q * g == t_kk(k)


def test_directed_series():
    gf = directed_gf()
    assert gf.coefficients(5) == [0, 4, 40, 496, 6688]
    for k in range(1, 13):
        assert gf.coefficient(k) == directed_second_moment_closed(k)
    assert directed_second_moment_closed(2) == 40
    assert enumerate_directed(4).weighted_sum == gf.coefficient(4)
    # ratio to the singular approximation tends to 1
    r = [gf.coefficient(k) / gf.asymptotic(k) for k in (50, 200)]
    assert abs(r[1] - 1) < abs(r[0] - 1) < 0.05
    assert comb(4, 2) == enumerate_directed(2).count
