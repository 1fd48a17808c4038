"""Classical Jacobi layer.

Polynomials use the renormalisation

    J_n(x) = (-1)^n (a+b+1)_n / (2^n (b+1)_n)
             * sum_j C(n+a, j) C(n+b, n-j) (x-1)^(n-j) (x+1)^j

so that J_n(-1) = (a+b+1)_n / n!.  All integrals are reported relative to
the total mass C = 2^(a+b+1) Gamma(a+1) Gamma(b+1) / Gamma(a+b+2) of the
weight (1-x)^a (1+x)^b; C itself is never formed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import List, Tuple

from .exact import Poly, ZERO, ONE, is_integer, to_rational


class PoleError(ArithmeticError):
    """A Gamma function is evaluated at a pole that does not cancel."""


def _is_nonpositive_int(q) -> bool:
    q = Fraction(q)
    return q.denominator == 1 and q <= 0


@dataclass(frozen=True)
class JacobiParams:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        a, b = to_rational(self.alpha), to_rational(self.beta)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        for name, val in (("alpha", a), ("beta", b), ("alpha+beta", a + b)):
            if is_integer(val) and val <= -1:
                raise ValueError(f"{name} = {val} is a negative integer")

    @property
    def ab1(self) -> Fraction:
        return self.alpha + self.beta + 1

    def theta(self, n) -> Fraction:
        n = to_rational(n)
        return n * (n + self.ab1)

    def theta_poly(self) -> Poly:
        """theta_x = x (x + a + b + 1) as a polynomial in x."""
        return Poly([0, self.ab1, 1])


def pochhammer(a, n: int):
    """Rising factorial (a)_n; works for any ring element a."""
    if n < 0:
        raise ValueError("Pochhammer symbol needs n >= 0")
    out = ONE
    for k in range(n):
        out = out * (a + k)
    return out


def binom(a, k: int) -> Fraction:
    """Generalised binomial C(a, k) for integer k (zero when k < 0)."""
    if k < 0:
        return ZERO
    return Fraction(pochhammer(to_rational(a) - k + 1, k)) / factorial(k)


def gamma_ratio(a, c, x=0) -> Fraction:
    """Gamma(x+a+1) / Gamma(x+c+1) for a - c integer.

    Uses 1/Gamma(-n) = 0: a vanishing Pochhammer in the numerator yields 0,
    a vanishing one in the denominator is a genuine pole.
    """
    a, c, x = to_rational(a), to_rational(c), to_rational(x)
    d = a - c
    if not is_integer(d):
        raise ValueError("gamma_ratio needs an integer shift")
    d = int(d)
    if d >= 0:
        return Fraction(pochhammer(x + c + 1, d))
    den = pochhammer(x + a + 1, -d)
    if den == 0:
        raise PoleError(f"Gamma pole in Gamma({x + a + 1})/Gamma({x + c + 1})")
    return 1 / Fraction(den)


def theta_eig(n, p: JacobiParams) -> Fraction:
    return p.theta(n)


@lru_cache(maxsize=None)
def _jacobi_poly_cached(n: int, alpha: Fraction, beta: Fraction) -> Poly:
    if n == 0:
        return Poly([1])
    xm1 = Poly([-1, 1])
    xp1 = Poly([1, 1])
    total = Poly([])
    pw_m = [Poly([1])]
    pw_p = [Poly([1])]
    for _ in range(n):
        pw_m.append(pw_m[-1] * xm1)
        pw_p.append(pw_p[-1] * xp1)
    for j in range(n + 1):
        c = binom(n + alpha, j) * binom(n + beta, n - j)
        if c:
            total = total + pw_m[n - j] * pw_p[j] * c
    pref = Fraction((-1) ** n) * pochhammer(alpha + beta + 1, n) / (2 ** n * pochhammer(beta + 1, n))
    return total * pref


def jacobi_poly(n: int, p: JacobiParams) -> Poly:
    if n < 0:
        return Poly([])
    return _jacobi_poly_cached(n, p.alpha, p.beta)


@lru_cache(maxsize=None)
def _three_term_cached(n: int, alpha: Fraction, beta: Fraction) -> Tuple[Fraction, Fraction, Fraction]:
    p = JacobiParams(alpha, beta)
    jn, jn1 = jacobi_poly(n, p), jacobi_poly(n + 1, p)
    a = jn.lc() / jn1.lc()
    r = Poly.x() * jn - jn1 * a
    b = r.coeff(n) / jn.lc()
    r = r - jn * b
    c = ZERO
    if n > 0:
        jm = jacobi_poly(n - 1, p)
        c = r.coeff(n - 1) / jm.lc()
        r = r - jm * c
    if not r.is_zero():
        raise ArithmeticError("three-term relation failed for the Jacobi family")
    return a, b, c


def jacobi_three_term(n: int, p: JacobiParams) -> Tuple[Fraction, Fraction, Fraction]:
    """(a_n, b_n, c_n) with x J_n = a_n J_{n+1} + b_n J_n + c_n J_{n-1}."""
    return _three_term_cached(n, p.alpha, p.beta)


def times_x_jacobi(vec: List[Fraction], p: JacobiParams) -> List[Fraction]:
    """Multiply a Jacobi-basis coefficient vector by x."""
    out = [ZERO] * (len(vec) + 1)
    for k, c in enumerate(vec):
        if c == 0:
            continue
        a, b, cc = jacobi_three_term(k, p)
        out[k + 1] += a * c
        out[k] += b * c
        if k:
            out[k - 1] += cc * c
    return out


def poly_times_jacobi(Q: Poly, vec: List[Fraction], p: JacobiParams) -> List[Fraction]:
    """Q(x) * f in the Jacobi basis, f given by its Jacobi coefficients."""
    if Q.is_zero():
        return [ZERO] * len(vec)
    acc = [c * Q.lc() for c in vec]
    for coef in reversed(Q.coeffs[:-1]):
        acc = times_x_jacobi(acc, p)
        for k, c in enumerate(vec):
            acc[k] += coef * c
    return acc


def poly_to_jacobi(P: Poly, p: JacobiParams) -> List[Fraction]:
    """Coefficients of P in the basis J_0, J_1, ..."""
    return poly_times_jacobi(P, [ONE], p)[: max(P.degree + 1, 1)] if not P.is_zero() else []


def normalized_mass(i: int, j: int, p: JacobiParams) -> Fraction:
    """(integral of mu_{a+i, b+j}) / C, continued through Gamma ratios."""
    a, b = p.alpha, p.beta
    return (Fraction(2) ** (i + j) * gamma_ratio(a + i, a) * gamma_ratio(b + j, b)
            * gamma_ratio(a + b + 1, a + b + i + j + 1))


def normalized_moment(P: Poly, i: int, j: int, p: JacobiParams) -> Fraction:
    """(integral of P(x) mu_{a+i, b+j}(x) dx) / C."""
    total = ZERO
    for k, c in enumerate(P.taylor_at(-1)):
        if c:
            total += c * normalized_mass(i, j + k, p)
    return total


def jacobi_weighted_integral(n: int, l: int, p: JacobiParams) -> Fraction:
    """Closed form of (integral of J_n mu_{a, b-l}) / C for l >= 1."""
    if l < 1 or n < 0:
        raise ValueError("need l >= 1 and n >= 0")
    a, b = p.alpha, p.beta
    return (p.ab1 * Fraction(comb(n + l - 1, l - 1), 2 ** l)
            * gamma_ratio(b - l, n + b) * gamma_ratio(n + a, a)
            * gamma_ratio(n + a + b, n + a + b - l + 1))


def _jacobi_at_minus_one_ratio(n: int, p: JacobiParams) -> Fraction:
    # C(n+a+b, a) / C(a+b, b) = (a+b+1)_n / (b+1)_n
    return Fraction(pochhammer(p.ab1, n)) / pochhammer(p.beta + 1, n)


def boundary_derivative(n: int, k: int, j: int, at: int, p: JacobiParams) -> Fraction:
    """((1 +- x)^k J_n)^{(j)} evaluated at -1 (at=-1, factor 1+x) or +1 (at=+1, factor 1-x)."""
    if at not in (1, -1):
        raise ValueError("at must be +1 or -1")
    a, b = p.alpha, p.beta
    base = (Fraction(factorial(j)) * Fraction(2) ** (k - j) * _jacobi_at_minus_one_ratio(n, p)
            * binom(n + a + b + j - k, j - k))
    if at == -1:
        return (-1) ** (j + k) * base * binom(n + b, n - j + k)
    return (-1) ** (n + k) * base * binom(n + a, n - j + k)


def _int_binom(a: int, b: int) -> Fraction:
    return binom(a, b)


def combinatorial_identity(alpha: int, beta: int, s: int, k: int, u: int) -> Tuple[Fraction, Fraction]:
    """Both sides of the binomial-sum identity used for the Sobolev key lemma."""
    for v in (alpha, beta, s, k, u):
        if v < 0:
            raise ValueError("arguments must be nonnegative integers")
    if s < beta + k:
        raise ValueError("need s >= beta + k")
    lhs = ZERO
    for j in range(0, s - beta + 1):
        lhs += (_int_binom(s - beta - k, j - k)
                * _int_binom(u + alpha + beta - k + j, beta - k + j)
                * _int_binom(u + alpha + beta - s + k, alpha + beta - s + j))
    rhs = _int_binom(u + alpha + beta, alpha) * _int_binom(u + s - k, s - k)
    return lhs, rhs
