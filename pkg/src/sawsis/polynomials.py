"""Exact polynomial arithmetic: dense univariate, sparse multivariate, rational series.

Coefficients are Python ints (or Fractions where division needs them); no
floating point anywhere in this module.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import zip_longest
from numbers import Rational
from typing import Iterable, Mapping, Sequence


class Polynomial:
    """Polynomial in one variable; ``coeffs[i]`` multiplies x**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def x(cls) -> Polynomial:
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> Polynomial:
        return cls((c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, v):
        acc = 0 * v
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, Rational):
            return self.coeffs == Polynomial.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def _lift(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, Rational):
            return Polynomial.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Polynomial(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=0))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Polynomial:
        if e < 0:
            raise ValueError("negative power")
        out, base = Polynomial.const(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def derivative(self) -> Polynomial:
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def scale_variable(self, s) -> Polynomial:
        """p(s*x)."""
        return Polynomial(c * s ** i for i, c in enumerate(self.coeffs))

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(c) for c in self.coeffs]
        lead = Fraction(other.coeffs[-1])
        dq = other.degree
        quot = [Fraction(0)] * max(0, len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lead
            if c:
                quot[i - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return Polynomial(_intify(quot)), Polynomial(_intify(rem[:dq]))

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)})"

    def __str__(self) -> str:
        return _format_terms(((c, f"x^{i}" if i > 1 else ("x" if i == 1 else ""))
                              for i, c in enumerate(self.coeffs)))


def _intify(cs: Sequence) -> list:
    return [int(c) if isinstance(c, Fraction) and c.denominator == 1 else c for c in cs]


def _format_terms(terms) -> str:
    out = []
    for c, mono in terms:
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        out.append((sign, body))
    if not out:
        return "0"
    first_sign, first = out[0]
    s = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        s += f" {sign} {body}"
    return s


class MultiPolynomial:
    """Sparse Laurent polynomial with integer coefficients.

    Keys are exponent tuples over ``variables``; negative exponents are
    allowed so that seeds of a recurrence may carry powers of 1/y.
    """

    __slots__ = ("terms", "variables")

    def __init__(self, terms: Mapping[tuple, int] | None = None,
                 variables: tuple[str, ...] = ("x", "y", "a", "b")):
        self.variables = variables
        self.terms: dict[tuple, int] = {}
        for e, c in (terms or {}).items():
            if c:
                self.terms[tuple(e)] = c

    # construction

    @classmethod
    def var(cls, name: str, variables: tuple[str, ...] = ("x", "y", "a", "b")) -> MultiPolynomial:
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls({tuple(e): 1}, variables)

    @classmethod
    def const(cls, c, variables: tuple[str, ...] = ("x", "y", "a", "b")) -> MultiPolynomial:
        return cls({(0,) * len(variables): c}, variables)

    def _lift(self, other):
        if isinstance(other, MultiPolynomial):
            if other.variables != self.variables:
                raise ValueError("variable sets differ")
            return other
        if isinstance(other, Rational):
            return MultiPolynomial.const(other, self.variables)
        return NotImplemented

    # arithmetic

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPolynomial(out, self.variables)

    __radd__ = __add__

    def __neg__(self) -> MultiPolynomial:
        return MultiPolynomial({e: -c for e, c in self.terms.items()}, self.variables)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out: dict[tuple, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPolynomial(out, self.variables)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> MultiPolynomial:
        out = MultiPolynomial.const(1, self.variables)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        other = self._lift(other) if not isinstance(other, Polynomial) else NotImplemented
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    # inspection

    def is_polynomial(self) -> bool:
        return all(min(e) >= 0 for e in self.terms) if self.terms else True

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, **powers: int) -> int:
        e = tuple(powers.get(v, 0) for v in self.variables)
        return self.terms.get(e, 0)

    def constant_term(self) -> int:
        return self.terms.get((0,) * len(self.variables), 0)

    def truncate(self, max_total_degree: int) -> MultiPolynomial:
        return MultiPolynomial({e: c for e, c in self.terms.items() if sum(e) <= max_total_degree},
                               self.variables)

    # evaluation

    def specialize(self, **values) -> Polynomial:
        """Substitute every variable by a univariate Polynomial or a number."""
        subs = []
        for v in self.variables:
            val = values[v]
            subs.append(val if isinstance(val, Polynomial) else Polynomial.const(val))
        cache: list[dict[int, Polynomial]] = [{} for _ in self.variables]

        def power(i: int, e: int) -> Polynomial:
            if e < 0:
                base = subs[i]
                if base.degree != 0:
                    raise ValueError(f"negative power of {self.variables[i]} needs a constant value")
                return Polynomial.const(Fraction(1, base.coeffs[0]) ** -e)
            if e not in cache[i]:
                cache[i][e] = subs[i] ** e
            return cache[i][e]

        out = Polynomial()
        for e, c in self.terms.items():
            term = Polynomial.const(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return Polynomial(_intify(out.coeffs))

    def evaluate(self, **values):
        out = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(self.variables, e):
                if k:
                    t = t * values[v] ** k
            out = out + t
        return out

    # division

    def _leading(self) -> tuple[tuple, int]:
        e = max(self.terms)  # lex order on the exponent tuples
        return e, self.terms[e]

    def divmod(self, other: MultiPolynomial) -> tuple[MultiPolynomial, MultiPolynomial]:
        """Multivariate division in lex order.

        With a single divisor the remainder is zero iff ``other`` divides
        ``self`` exactly.
        """
        other = self._lift(other)
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        if not (self.is_polynomial() and other.is_polynomial()):
            raise ValueError("division needs genuine polynomials")
        lt_e, lt_c = other._leading()
        p = MultiPolynomial(dict(self.terms), self.variables)
        q: dict[tuple, int] = {}
        r: dict[tuple, int] = {}
        while p.terms:
            e, c = p._leading()
            if all(a >= b for a, b in zip(e, lt_e)) and c % lt_c == 0:
                shift = tuple(a - b for a, b in zip(e, lt_e))
                f = c // lt_c
                q[shift] = q.get(shift, 0) + f
                mono = MultiPolynomial({shift: f}, self.variables)
                p = p - mono * other
            else:
                r[e] = r.get(e, 0) + c
                del p.terms[e]
        return MultiPolynomial(q, self.variables), MultiPolynomial(r, self.variables)

    def exact_div(self, other: MultiPolynomial) -> MultiPolynomial:
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    def divides(self, other: MultiPolynomial) -> bool:
        """True iff self divides other."""
        return not other.divmod(self)[1]

    def __repr__(self) -> str:
        return f"MultiPolynomial({self})"

    def __str__(self) -> str:
        def mono(e):
            parts = []
            for v, k in zip(self.variables, e):
                if k == 1:
                    parts.append(v)
                elif k:
                    parts.append(f"{v}^{k}")
            return "*".join(parts)
        ordered = sorted(self.terms.items(), key=lambda t: (sum(t[0]), tuple(-a for a in t[0])))
        return _format_terms((c, mono(e)) for e, c in ordered)


class RationalSeries:
    """Power series of numerator/denominator, denominator(0) != 0."""

    def __init__(self, numerator: Polynomial, denominator: Polynomial):
        if denominator[0] == 0:
            raise ValueError("denominator must have a nonzero constant term")
        self.numerator = numerator
        self.denominator = denominator

    def coefficients(self, count: int) -> list:
        """First ``count`` Taylor coefficients by unrolling the linear recurrence.

        den * f = num, so c_n = (num_n - sum_{i>=1} den_i c_{n-i}) / den_0.
        """
        q = self.denominator.coeffs
        q0 = q[0]
        out = []
        for n in range(count):
            acc = self.numerator[n]
            for i in range(1, min(n, len(q) - 1) + 1):
                acc -= q[i] * out[n - i]
            if isinstance(acc, int) and isinstance(q0, int) and acc % q0 == 0:
                out.append(acc // q0)
            else:
                c = Fraction(acc) / q0
                out.append(int(c) if c.denominator == 1 else c)
        return out

    def coefficient(self, n: int):
        if n < 0:
            raise ValueError("coefficient index must be >= 0")
        return self.coefficients(n + 1)[n]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalSeries):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    def __hash__(self):
        raise TypeError("RationalSeries is unhashable")

    def __repr__(self) -> str:
        return f"RationalSeries(({self.numerator}) / ({self.denominator}))"


def series_coeff(rs: RationalSeries, l: int):
    return rs.coefficient(l)
