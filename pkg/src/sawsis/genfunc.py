"""Rational generating functions for the moments of the walk samplers.

For N/E/S walks in a strip of height k the second moments E(X_{k,l}^2)
have generating function 2x N_k / G_k in the width l, where N_k and G_k obey
a two-step linear recurrence in k. A refined count of strip walks by
horizontal/vertical steps and contacts (variables x, y, a, b) satisfies the
same kind of recurrence and specialises to the univariate one.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, pi, sqrt

from .polynomials import MultiPolynomial, Polynomial, RationalSeries, series_coeff

__all__ = [
    "nes_polys", "nes_moment_gf", "first_moment_gf", "series_coeff",
    "strip_gf_multivariate", "specialize_strip", "strip_moment_gf",
    "DirectedMomentSeries", "directed_gf", "directed_second_moment_closed",
    "t_kk", "f_divisible_by_g",
]

X = Polynomial.x()
ONE = Polynomial.const(1)


# -- univariate ---------------------------------------------------------------------

_N_SEED = {1: Polynomial([2]), 2: Polynomial([5, 3]), 3: Polynomial([11, 9]),
           4: Polynomial([23, 54, 27])}
_G_SEED = {1: Polynomial([1, -4]), 2: Polynomial([1, -9, -6]), 3: Polynomial([1, -19, -18]),
           4: Polynomial([1, -36, -99, -54])}
_STEP = Polynomial([5, 9])


@lru_cache(maxsize=None)
def nes_polys(k: int) -> tuple[Polynomial, Polynomial]:
    """(N_k, G_k) with u_k = (5+9x) u_{k-2} - 4 u_{k-4}."""
    if k < 1:
        raise ValueError("strip height k must be >= 1")
    if k <= 4:
        return _N_SEED[k], _G_SEED[k]
    n2, g2 = nes_polys(k - 2)
    n4, g4 = nes_polys(k - 4)
    return _STEP * n2 - 4 * n4, _STEP * g2 - 4 * g4


def nes_moment_gf(k: int) -> RationalSeries:
    """M_k(x) = sum_l E(X_{k,l}^2) x^l."""
    n, g = nes_polys(k)
    return RationalSeries(2 * X * n, g)


def first_moment_gf(k: int) -> RationalSeries:
    """sum_l E(X_{k,l})^2 x^l = (k+1)^2 x / (1 - (k+1)^2 x)."""
    if k < 1:
        raise ValueError("strip height k must be >= 1")
    s = (k + 1) ** 2
    return RationalSeries(Polynomial([0, s]), Polynomial([1, -s]))


# -- multivariate strip series -------------------------------------------------------

_x, _y, _a, _b = (MultiPolynomial.var(v) for v in "xyab")
_Y_INV = MultiPolynomial({(0, -1, 0, 0): 1})
_MSTEP = 1 - _x + _y * _y * (1 + _x)
_Y2 = _y * _y

_MN_SEED = {
    -1: (1 - _x - _x * _y) * (_b - _y) * _Y_INV * _Y_INV,
    0: (_b - _x * _b + _x * _y) * _Y_INV,
    1: 1 + _b,
    2: 1 - _x + _y + _b * _y * (1 + _x),
}
_MG_SEED = {
    0: (_x - 1) * _a * _b * _Y_INV - (_x + 1) * (_a - 1),
    1: 1 - _a - _a * _b,
    2: (1 - _x) * (1 - _a) - (_x + 1) * _y * _a * _b,
    3: (1 - _x - _x * _y) * (1 - _a) - _y * _a * _b * (_x + _y + _x * _y),
}


@lru_cache(maxsize=None)
def _mn(k: int) -> MultiPolynomial:
    if k in _MN_SEED:
        return _MN_SEED[k]
    return _MSTEP * _mn(k - 2) - _Y2 * _mn(k - 4)


@lru_cache(maxsize=None)
def _mg(k: int) -> MultiPolynomial:
    if k in _MG_SEED:
        return _MG_SEED[k]
    return _MSTEP * _mg(k - 2) - _Y2 * _mg(k - 4)


def strip_gf_multivariate(k: int) -> tuple[MultiPolynomial, MultiPolynomial]:
    """(N_k, G_k) with T_k(x, y, a, b; 1) = N_k / G_k.

    T_k counts N/E/S walks from height 0 confined to 0 <= y <= k, with x, y
    marking non-contact horizontal/vertical steps and a, b marking contacts.
    The seeds at k = -1, 0 carry powers of 1/y; from k = 1 on both are
    genuine polynomials, which is checked here.
    """
    if k < 1:
        raise ValueError("strip height k must be >= 1")
    n, g = _mn(k), _mg(k)
    if not (n.is_polynomial() and g.is_polynomial()):
        raise ArithmeticError(f"N_{k} or G_{k} kept a negative power of y")
    return n, g


def specialize_strip(k: int) -> tuple[Polynomial, Polynomial]:
    """N_k, G_k at x -> 3x, y -> 2, a -> 2x, b -> 1."""
    n, g = strip_gf_multivariate(k)
    vals = dict(x=Polynomial([0, 3]), y=2, a=Polynomial([0, 2]), b=1)
    return n.specialize(**vals), g.specialize(**vals)


def strip_moment_gf(k: int) -> RationalSeries:
    """2x T_k(3x, 2, 2x, 1; 1), the second-moment series built from the strip count."""
    n, g = specialize_strip(k)
    return RationalSeries(2 * X * n, g)


@lru_cache(maxsize=None)
def t_kk(k: int) -> MultiPolynomial:
    """F_k, the denominator of T_{k,k} = b y^(k-1) / F_k (one-step recurrence)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return (1 - _a - _a * _b) * (1 - _a + _a * _b)
    if k == 2:
        return (1 - _a + _b * _y * _a) * ((1 - _x) * (1 - _a) - (_x + 1) * _y * _a * _b)
    return _MSTEP * t_kk(k - 1) - _Y2 * t_kk(k - 2)


def f_divisible_by_g(k: int) -> tuple[bool, MultiPolynomial]:
    """Exact division F_k / G_k; returns (remainder is zero, quotient)."""
    _, g = strip_gf_multivariate(k)
    q, r = t_kk(k).divmod(g)
    return not r, q


# -- directed walks --------------------------------------------------------------------

def directed_second_moment_closed(k: int) -> int:
    """sum_{i<k} 2^(k+i+1) C(k+i-1, i): walks first touching the far sides at step k+i."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum(2 ** (k + i + 1) * comb(k + i - 1, i) for i in range(k))


class DirectedMomentSeries:
    """sum_k E(X_k^2) x^k = 2x/(1+2x) * (3 (1-16x)^(-1/2) - 1), expanded exactly.

    Uses (1-16x)^(-1/2) = sum_n C(2n, n) 4^n x^n.
    """

    def coefficients(self, count: int) -> list[int]:
        inner = [2] + [3 * comb(2 * m, m) * 4 ** m for m in range(1, count)]
        # divide by 1+2x
        quot = []
        prev = 0
        for c in inner:
            prev = c - 2 * prev
            quot.append(prev)
        # multiply by 2x
        return [0] + [2 * c for c in quot[: count - 1]] if count else []

    def coefficient(self, k: int) -> int:
        return self.coefficients(k + 1)[k]

    @staticmethod
    def asymptotic(k: int) -> float:
        """Leading singular behaviour 16^k / (3 sqrt(pi k))."""
        return 16.0 ** k / (3 * sqrt(pi * k))


def directed_gf() -> DirectedMomentSeries:
    return DirectedMomentSeries()
