"""Dominant pole, residue and growth-rate analysis of the second-moment series.

All pole and residue work runs at 50 significant digits (mpmath): rho_k is
about 2^-(k+1), so naive double-precision relative comparisons fail well
before k = 30. Root counting and bracketing use exact rationals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .estimator import relative_variance_exact
from .genfunc import nes_moment_gf, nes_polys
from .polynomials import Polynomial, series_coeff

DPS = 50
# bracket for the positive root; every other root of G_k is below -1/9
BRACKET = (Fraction(0), Fraction(1, 9) - Fraction(1, 10 ** 9))


def _ctx(dps: int = DPS):
    ctx = mpmath.mp.clone()
    ctx.dps = dps
    return ctx


def _complex(ctx, x):
    if isinstance(x, Fraction):
        return ctx.mpc(ctx.mpf(x.numerator) / x.denominator)
    return ctx.mpc(x)


# -- exact root counting -------------------------------------------------------------------

def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    seq = [p, p.derivative()]
    while seq[-1].degree > 0:
        r = seq[-2] % seq[-1]
        if not r:
            break
        seq.append(-r)
    return seq


def _sign_changes(seq: Sequence[Polynomial], v: Fraction) -> int:
    signs = [s for s in (q(v) for q in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_real_roots(p: Polynomial, lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots of ``p`` in (lo, hi], by Sturm's theorem."""
    seq = sturm_sequence(p)
    return _sign_changes(seq, Fraction(lo)) - _sign_changes(seq, Fraction(hi))


def positive_root_count(k: int) -> int:
    """Number of roots of G_k in (0, 1/9)."""
    _, g = nes_polys(k)
    return count_real_roots(g, Fraction(0), Fraction(1, 9))


# -- pole and residue ---------------------------------------------------------------------

class NoSignChange(ArithmeticError):
    pass


def dominant_pole(k: int, dps: int = DPS):
    """The root of G_k in (0, 1/9).

    Exact-rational bisection narrows the bracket, then Newton polishes the
    root at ``dps`` digits.
    """
    _, g = nes_polys(k)
    lo, hi = BRACKET
    glo, ghi = g(lo), g(hi)
    if glo == 0:
        raise NoSignChange("G_k vanishes at 0")
    if (glo > 0) == (ghi > 0):
        raise NoSignChange(f"G_{k} has no sign change on (0, 1/9)")
    # rho_k ~ 2^-(k+1): 24 halvings past the root's scale leave a tight bracket
    for _ in range(k + 30):
        mid = (lo + hi) / 2
        gm = g(mid)
        if gm == 0:
            lo = hi = mid
            break
        if (gm > 0) == (glo > 0):
            lo = mid
        else:
            hi = mid
    ctx = _ctx(dps)
    dg = g.derivative()
    x = ctx.mpf(lo.numerator) / lo.denominator + (ctx.mpf(hi.numerator) / hi.denominator
                                                    - ctx.mpf(lo.numerator) / lo.denominator) / 2
    tol = ctx.mpf(10) ** (-dps + 5)
    for _ in range(100):
        step = g(x) / dg(x)
        x -= step
        if abs(step) <= tol * abs(x):
            break
    if not (ctx.mpf(lo.numerator) / lo.denominator - tol <= x
            <= ctx.mpf(hi.numerator) / hi.denominator + tol):
        raise ArithmeticError("Newton left the bisection bracket")
    return x


def residue_at_pole(k: int, rho=None, dps: int = DPS):
    """alpha_k with M_k(x) ~ alpha_k / (1 - x/rho_k) near the pole.

    M_k = 2x N_k / G_k, so alpha_k = -2 N_k(rho) / G_k'(rho).
    """
    if rho is None:
        rho = dominant_pole(k, dps)
    ctx = _ctx(dps)
    rho = ctx.mpf(rho)
    n, g = nes_polys(k)
    d = g.derivative()(rho)
    if abs(d) < ctx.mpf(10) ** (-dps // 2):
        raise ArithmeticError("G_k' vanishes at the pole; not a simple pole")
    return -2 * n(rho) / d


# -- expansions in k -------------------------------------------------------------------------

def rho_expansion(k: int, dps: int = DPS):
    """Reference four-term expansion of rho_k, next order k^3/32^k."""
    ctx = _ctx(dps)
    K = ctx.mpf(k)
    return (1 / ctx.mpf(2) ** (k + 1) + 9 / (2 * ctx.mpf(4) ** (k + 1))
            - (12 * K - 23) / (2 * ctx.mpf(8) ** (k + 1))
            + (36 * K ** 2 - 54 * K - ctx.mpf(87) / 8) / ctx.mpf(16) ** (k + 1))


def alpha_expansion(k: int, dps: int = DPS):
    """Reference four-term expansion of alpha_k, next order k^4/16^k."""
    ctx = _ctx(dps)
    K = ctx.mpf(k)
    return (ctx.mpf(3) / 2 - (9 * K - 4) / ctx.mpf(2) ** (k + 2)
            + (27 * K ** 2 - 48 * K + 1) / (2 * ctx.mpf(4) ** (k + 1))
            - (81 * K ** 3 - 306 * K ** 2 + 75 * K + 140) / (2 * ctx.mpf(8) ** (k + 1)))


def rho_expansion_corrected(k: int, dps: int = DPS):
    """Four-term expansion of rho_k with every k-dependent coefficient kept.

    Obtained by solving the pole equation perturbatively around s = 1/2;
    the remainder is O(k^4/32^k).
    """
    ctx = _ctx(dps)
    K = ctx.mpf(k)
    return (1 / ctx.mpf(2) ** (k + 1) - (6 * K - 9) / (2 * ctx.mpf(4) ** (k + 1))
            + (27 * K ** 2 - 66 * K + 23) / (2 * ctx.mpf(8) ** (k + 1))
            - (576 * K ** 3 - 1872 * K ** 2 + 1260 * K + 87) / (8 * ctx.mpf(16) ** (k + 1)))


def alpha_expansion_corrected(k: int, dps: int = DPS):
    """Four-term expansion of alpha_k; remainder O(k^4/16^k)."""
    ctx = _ctx(dps)
    K = ctx.mpf(k)
    return (ctx.mpf(3) / 2 - (9 * K - 4) / ctx.mpf(2) ** (k + 2)
            + (54 * K ** 2 - 60 * K + 1) / (2 * ctx.mpf(4) ** (k + 1))
            - (729 * K ** 3 - 1296 * K ** 2 + 162 * K + 280) / (4 * ctx.mpf(8) ** (k + 1)))


@dataclass
class AsymptoticData:
    k: int
    rho: object
    alpha: object
    rho_expansion: object
    alpha_expansion: object
    rho_residual: float
    alpha_residual: float
    rho_next_order: float    # k^3 / 32^k
    alpha_next_order: float  # k^4 / 16^k
    corrected: dict = field(default_factory=dict)

    @property
    def rho_ratio(self) -> float:
        return self.rho_residual / self.rho_next_order

    @property
    def alpha_ratio(self) -> float:
        return self.alpha_residual / self.alpha_next_order

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "rho": mpmath.nstr(self.rho, 30),
            "alpha": mpmath.nstr(self.alpha, 30),
            "rho_expansion": mpmath.nstr(self.rho_expansion, 30),
            "alpha_expansion": mpmath.nstr(self.alpha_expansion, 30),
            "rho_residual": self.rho_residual,
            "alpha_residual": self.alpha_residual,
            "rho_next_order": self.rho_next_order,
            "alpha_next_order": self.alpha_next_order,
            "rho_ratio": self.rho_ratio,
            "alpha_ratio": self.alpha_ratio,
            **{f"corrected_{key}": v for key, v in self.corrected.items()},
        }


def verify_expansions(k: int, dps: int = DPS) -> AsymptoticData:
    """Compare the computed rho_k, alpha_k with both four-term expansions.

    Residuals are reported next to the size of the first omitted term; the
    expansions are asymptotic in k, so small k gives large ratios.
    """
    rho = dominant_pole(k, dps)
    alpha = residue_at_pole(k, rho, dps)
    re, ae = rho_expansion(k, dps), alpha_expansion(k, dps)
    rc, ac = rho_expansion_corrected(k, dps), alpha_expansion_corrected(k, dps)
    r_next = k ** 3 / 32.0 ** k
    a_next = k ** 4 / 16.0 ** k
    corrected = {
        "rho_residual": float(abs(rho - rc)),
        "alpha_residual": float(abs(alpha - ac)),
        "rho_ratio": float(abs(rho - rc)) / r_next,
        "alpha_ratio": float(abs(alpha - ac)) / a_next,
    }
    return AsymptoticData(k, rho, alpha, re, ae, float(abs(rho - re)), float(abs(alpha - ae)),
                          r_next, a_next, corrected)


# -- variance law ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class VarianceLaw:
    k: int
    l: int
    second_moment: int
    variance: int
    prediction: Fraction            # (3/2) 2^((k+1) l)
    ratio: float
    relative_variance: Fraction
    relative_prediction: Fraction   # (3/2) (2^(k+1)/(k+1)^2)^l
    relative_ratio: float


def variance_law_check(k: int, l: int) -> VarianceLaw:
    m2 = series_coeff(nes_moment_gf(k), l)
    m1 = (k + 1) ** l
    var = m2 - m1 * m1
    pred = Fraction(3, 2) * 2 ** ((k + 1) * l)
    rel = relative_variance_exact(m1, m2)
    rel_pred = Fraction(3, 2) * Fraction(2 ** (k + 1), (k + 1) ** 2) ** l
    return VarianceLaw(k, l, m2, var, pred, float(Fraction(var) / pred), rel, rel_pred,
                       float(rel / rel_pred))


def pole_prediction_constant(k: int, lmax: int = 20, dps: int = DPS) -> float:
    """Smallest C with |E(X_{k,l}^2) - alpha_k rho_k^-l| <= C 9^l k for l <= lmax."""
    ctx = _ctx(dps)
    rho = dominant_pole(k, dps)
    alpha = residue_at_pole(k, rho, dps)
    coeffs = nes_moment_gf(k).coefficients(lmax + 1)
    worst = ctx.mpf(0)
    for l in range(1, lmax + 1):
        err = abs(coeffs[l] - alpha * rho ** (-l))
        worst = max(worst, err / (ctx.mpf(9) ** l * k))
    return float(worst)


# -- the algebraic series S --------------------------------------------------------------------------

class OnCut(ValueError):
    pass


def algebraic_S(x, dps: int = DPS):
    """Root of S + 1/S = (5+9x)/2 with S(0) = 1/2, continued off the cut [-1, -1/9]."""
    ctx = _ctx(dps)
    x = _complex(ctx, x)
    if x.imag == 0 and -1 <= x.real <= ctx.mpf(-1) / 9:
        raise OnCut(f"x = {x.real} lies on the cut [-1, -1/9]")
    root = ctx.sqrt((1 + x) * (1 + 9 * x))
    if x.real >= ctx.mpf(-5) / 9:
        return (5 + 9 * x - 3 * root) / 4
    return (5 + 9 * x + 3 * root) / 4


def closed_form_GN(k: int, x, dps: int = DPS):
    """(G_k(x), N_k(x)) from their expressions in S(x)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ctx = _ctx(dps)
    s = algebraic_S(x, dps)
    x = _complex(ctx, x)

    def P(t):
        return 1 + 2 * x - 2 * t * (1 - x)

    def Q(t):
        return -1 - t

    m = k // 2
    two = ctx.mpf(2) ** m
    if k % 2 == 0:
        g = -(two / 3) * (P(1 / s) * s ** m + P(s) * s ** -m)
        n = -(two / 3) * (Q(1 / s) * s ** m + Q(s) * s ** -m - 3 * (s ** m - s ** (1 - m)) / (s - 1))
    else:
        g = -(two / (1 + s)) * (P(1 / s) * s ** (m + 1) + P(s) * s ** -m)
        n = -(two / (1 + s)) * (Q(1 / s) * s ** (m + 1) + Q(s) * s ** -m
                                 - 3 * (s ** m - s ** -m) / (1 - 1 / s))
    return g, n


def gns_identity_check(k: int, xs: Iterable, rel_tol: float = 1e-20, dps: int = DPS) -> bool:
    """Closed forms in S agree with the recurrence polynomials at every point of ``xs``."""
    ctx = _ctx(dps)
    n_poly, g_poly = nes_polys(k)
    for x in xs:
        g_cf, n_cf = closed_form_GN(k, x, dps)
        xv = _complex(ctx, x)
        for cf, p in ((g_cf, g_poly), (n_cf, n_poly)):
            exact = p(xv)
            if abs(cf - exact) > rel_tol * max(abs(exact), ctx.mpf(10) ** (-dps // 2)):
                return False
    return True


# -- growth constants ---------------------------------------------------------------------------

@dataclass
class BoundsReport:
    table: list[tuple[int, int, int]]   # (k, c(k), d(k))
    lambda_lb: float
    beta_lb: float
    lambda_prefix: list[float]
    beta_prefix: list[float]

    def as_dict(self) -> dict:
        return {
            "table": [{"k": k, "c": str(c), "d": str(d)} for k, c, d in self.table],
            "lambda_lb": self.lambda_lb,
            "beta_lb": self.beta_lb,
            "lambda_prefix": self.lambda_prefix,
            "beta_prefix": self.beta_prefix,
        }


def growth_bounds(reports) -> BoundsReport:
    """lambda >= max_k c(k)^(1/(k+1)^2), beta >= max_k (sqrt(2) d(k))^(1/(k+1)^2).

    ``reports`` holds crossing EnumReports (or (k, c, d) triples) covering
    k = 1, 2, ... without gaps.
    """
    rows = []
    for r in reports:
        if isinstance(r, tuple):
            rows.append(r)
        else:
            rows.append((r.params["k"], r.count, r.weighted_sum))
    if not rows:
        raise ValueError("empty table")
    rows.sort()
    if [k for k, _, _ in rows] != list(range(1, len(rows) + 1)):
        raise ValueError("table must cover k = 1, 2, ... contiguously")
    lam, beta = [], []
    best_l = best_b = 0.0
    for k, c, d in rows:
        e = 1.0 / (k + 1) ** 2
        best_l = max(best_l, math.exp(math.log(c) * e))
        best_b = max(best_b, math.exp((math.log(d) + 0.5 * math.log(2)) * e))
        lam.append(best_l)
        beta.append(best_b)
    return BoundsReport(rows, lam[-1], beta[-1], lam, beta)


def tiling_factor(k: int, K: int) -> int:
    """Largest n with (k+1)(2n+1) - 1 <= K, or -1 if none."""
    n = ((K + 1) // (k + 1) - 1) // 2
    return n if (k + 1) * (2 * n + 1) - 1 <= K else -1
