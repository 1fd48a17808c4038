"""Shared configurations and independent oracles (sympy based) for the tests."""
from __future__ import annotations

import random
from fractions import Fraction as F

import sympy as sp

from jacobitype.exact import Poly
from jacobitype.family import DegenerateFamily, FamilyConfig, qsequence

X = sp.Symbol("x")

EX1 = FamilyConfig.build(F(1, 2), F(1, 3), {1: [1, 1], 3: [1, F(2, 3), F(1, 3), 1]},
                         {1: [F(1, 2), 1]})
EX2 = FamilyConfig.build(2, 1, {1: [1, 1]}, {2: [F(1, 2), F(2, 3), 1]})
# Q0 as printed for the first example, and the quartic this package finds instead
EX1_PRINTED_Q0 = Poly([0, -732, -270, 244, 135]).scale(F(1, 135))
EX1_FOUND_Q0 = Poly([0, F(-52, 5), -2, F(52, 15), 1])
EX2_Q0 = Poly([0, -2, 1])
EX2_Q1 = Poly([0, 0, F(-3, 2), 1])


def random_generic_config(rng: random.Random, max_m: int = 3, max_deg: int = 3,
                          check_upto: int = 16) -> FamilyConfig:
    """A random configuration with non-integer alpha, beta and nonvanishing Lambda."""
    while True:
        m1 = rng.randint(1, max_m - 1)
        m2 = rng.randint(1, max_m - m1)
        G = sorted(rng.sample(range(1, max_deg + 1), m1))
        H = sorted(rng.sample(range(1, max_deg + 1), m2))
        den = rng.choice([2, 3, 5, 7])
        a = F(rng.randint(1, 4 * den), den)
        b = F(rng.randint(1, 4 * den), den)
        if a.denominator == 1 or b.denominator == 1:
            continue

        def rp(d):
            return [F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(d)] + [1]
        cfg = FamilyConfig.build(a, b, {g: rp(g) for g in G}, {h: rp(h) for h in H})
        try:
            qsequence(cfg).audit(check_upto)
        except DegenerateFamily:
            continue
        return cfg


def to_sympy(p: Poly):
    return sum((sp.Rational(c.numerator, c.denominator) * X ** k for k, c in enumerate(p.coeffs)),
               sp.Integer(0))


def from_sympy(expr) -> Poly:
    coeffs = sp.Poly(sp.expand(expr), X).all_coeffs()[::-1]
    return Poly([F(int(sp.numer(c)), int(sp.denom(c))) for c in coeffs])


def srat(q) -> sp.Rational:
    q = F(q)
    return sp.Rational(q.numerator, q.denominator)


def oracle_jacobi(n: int, a, b):
    """Renormalised Jacobi polynomial from sympy's classical P_n^(a,b)."""
    a, b = srat(a), srat(b)
    return sp.expand((-1) ** n * sp.rf(a + b + 1, n) / sp.rf(b + 1, n) * sp.jacobi(n, a, b, X))


def oracle_mass_ratio(i: int, j: int, a, b):
    """(integral of (1-x)^(a+i) (1+x)^(b+j)) / (integral of (1-x)^a (1+x)^b) via Gamma.

    Simplified with symbolic parameters first, so Gamma ratios cancel exactly.
    """
    A, B = sp.symbols("A B")
    val = (sp.Integer(2) ** (i + j) * sp.gamma(A + i + 1) * sp.gamma(B + j + 1) * sp.gamma(A + B + 2)
           / (sp.gamma(A + 1) * sp.gamma(B + 1) * sp.gamma(A + B + i + j + 2)))
    return sp.cancel(sp.gammasimp(val).subs({A: srat(a), B: srat(b)}))


def oracle_moment(P: Poly, i: int, j: int, a, b):
    """Moment of P against (1-x)^(a+i) (1+x)^(b+j), relative to the total mass."""
    expr = sp.expand(to_sympy(P).subs(X, sp.Symbol("t") - 1))
    t = sp.Symbol("t")
    total = sp.Integer(0)
    for (k,), c in sp.Poly(expr, t).terms():
        total += c * oracle_mass_ratio(i, j + k, a, b)
    return sp.cancel(total)

