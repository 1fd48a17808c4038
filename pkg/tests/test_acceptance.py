"""Acceptance criteria 1 to 9, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as they are
produced; they are also collected in the terminal summary.
"""
import random
from fractions import Fraction as F
from itertools import product

import pytest

from jacobitype.bilinear import GENERIC, SOBOLEV, BilinearConfig, Pairing, det_a_matrix
from jacobitype.exact import Poly
from jacobitype.family import FamilyConfig, qsequence
from jacobitype.jacobi import combinatorial_identity
from jacobitype.spectral import (KrallSpec, algebra_scan, divisibility_exponents,
                                 divisibility_family, krall_build, measure_fit, recurrence_table,
                                 same_span, three_term_check)

import test_bilinear
import test_family
import test_jacobi
from helpers import EX1, EX1_FOUND_Q0, EX1_PRINTED_Q0, EX2, EX2_Q0, EX2_Q1, random_generic_config

RNG_SEEDS = (21, 22)
GENERIC_RANDOM = [random_generic_config(random.Random(s)) for s in RNG_SEEDS]
SEGMENT = FamilyConfig.build(F(1, 2), F(1, 3), {1: [2, 1], 2: [F(1, 3), -1, 1]}, {1: [F(1, 2), 1]})
GENERIC_CONFIGS = [EX1, SEGMENT] + GENERIC_RANDOM
KRALL_SPEC_12 = KrallSpec(2, 1, 1, 2, (3,), (2, 5))
KRALL_SPEC_21 = KrallSpec(2, 2, 2, 1, (3, -1), (2,))


def _rand_rational(rng):
    return F(rng.randint(1, 9) * rng.choice([-1, 1]), rng.randint(1, 6))


def _orthogonal_upto(cfg, bcfg, upto):
    pr = Pairing(cfg, bcfg)
    seq = qsequence(cfg)
    for n in range(cfg.m, upto + 1):
        qn = seq.q(n)
        for i in range(n):
            assert pr(qn, seq.q(i)).is_zero(), (n, i)
        assert not pr(qn, qn).is_zero(), n


@pytest.mark.xfail(strict=True, reason="the printed quartic is not in the computed algebra; "
                                       "analysis in notes/decisions.md")
def test_criterion_1_ex1_literal(criterion):
    with criterion(1, "ex1 algebra scan equals span{1, printed quartic}", 60,
                   note="computed span is {1, x^4+52x^3/15-2x^2-52x/5}; see decisions ledger"):
        basis = algebra_scan(4, (5, 30), EX1)
        assert len(basis) == 2
        assert same_span(basis, [Poly([1]), EX1_PRINTED_Q0])


def test_criterion_1_structure():
    """What does hold: a 2-dimensional algebra whose quartic is not a divisibility member."""
    basis = algebra_scan(4, (5, 30), EX1)
    assert len(basis) == 2 and same_span(basis, [Poly([1]), EX1_FOUND_Q0])
    d = basis[1].deriv()
    assert not d.divmod(Poly([1, 1]) ** 3 * Poly([1, -1]))[1].is_zero()
    t = recurrence_table(basis[1], (5, 40), EX1)
    assert t.band == (-4, 4) and t.extremes_nonzero()
    bad = recurrence_table(EX1_PRINTED_Q0, (5, 8), EX1)
    assert bad.band[0] < -4


def test_criterion_2_ex2(criterion):
    with criterion(2, "ex2 Sobolev algebra scan", 60):
        basis = algebra_scan(3, (5, 30), EX2)
        assert len(basis) == 3
        assert same_span(basis, [Poly([1]), EX2_Q0, EX2_Q1])
        target = Poly([1, 1]) * Poly([1, -1]) ** 2
        for Q in (EX2_Q0, EX2_Q1):
            assert not Q.deriv().divmod(target)[1].is_zero()


def test_criterion_3_generic_orthogonality(criterion):
    with criterion(3, "Generic orthogonality n <= 15", 120):
        rng = random.Random(3)
        for cfg in [EX1] + GENERIC_RANDOM:
            assert cfg.m <= 3
            bcfg = BilinearConfig(tuple(_rand_rational(rng) for _ in range(cfg.m1)),
                                  tuple(_rand_rational(rng) for _ in range(cfg.m2)), GENERIC)
            _orthogonal_upto(cfg, bcfg, 15)


def test_criterion_4_det_a(criterion):
    with criterion(4, "det A closed form", 60):
        configs = [EX1] + [random_generic_config(random.Random(s)) for s in (31, 32, 33)]
        for cfg in configs:
            det, closed = det_a_matrix(cfg, BilinearConfig.ones(cfg))
            assert det == closed
            assert det.monomials() == [(cfg.m1, cfg.m2)]


def test_criterion_5_sobolev_orthogonality(criterion):
    with criterion(5, "Sobolev orthogonality n <= 15", 120):
        for cfg in (EX2, krall_build(KRALL_SPEC_21)):
            bcfg = BilinearConfig.ones(cfg, SOBOLEV)
            _orthogonal_upto(cfg, bcfg, 15)
            det, closed = det_a_matrix(cfg, bcfg)
            assert det == closed and det.monomials() == [(0, 0)] and not det.is_zero()


def test_criterion_6_bispectral_bands(criterion):
    with criterion(6, "divisibility family bands [-s, s]", 120):
        for cfg in GENERIC_CONFIGS:
            p1, p2 = divisibility_exponents(cfg, GENERIC)
            members = divisibility_family(p1 + p2 + 2, cfg, GENERIC)[1:]
            assert members
            for Q in members:
                s = Q.degree
                t = recurrence_table(Q, (s + 1, s + 20), cfg)
                assert t.band == (-s, s) and t.extremes_nonzero(), (cfg, s)


def test_criterion_7_three_term_dichotomy(criterion):
    with criterion(7, "three-term dichotomy", 120):
        for cfg in GENERIC_CONFIGS:
            v = three_term_check(cfg, (0, 12))
            assert not v.holds and v.witness[1] < -1 and v.witness[2] != 0
        rng = random.Random(7)
        specs = [KRALL_SPEC_12, KRALL_SPEC_21]
        while len(specs) < 6:
            m1, m2 = rng.randint(1, 2), rng.randint(1, 2)
            specs.append(KrallSpec(rng.randint(m2, 3), rng.randint(m1, 3), m1, m2,
                                   tuple(_rand_rational(rng) for _ in range(m1)),
                                   tuple(_rand_rational(rng) for _ in range(m2))))
        for spec in specs:
            v = three_term_check(krall_build(spec), (0, 15))
            assert v.holds and len(v.coefficients) == 16, spec


def test_criterion_8_measure_fit(criterion):
    with criterion(8, "Krall measure fit", 60):
        for spec in (KrallSpec(1, 1, 1, 1, (3,), (2,)), KRALL_SPEC_12):
            fit = measure_fit(krall_build(spec), fit_max=6, verify_max=14)
            assert fit.consistent and fit.verified and not fit.failures
            assert len(fit.c) == spec.m2 and len(fit.d) == spec.m1


def test_criterion_9_identity_suite(criterion):
    with criterion(9, "identity suite", 180):
        for cfg in (EX1, EX2):
            test_family.test_vanishing_rows(cfg)
            test_family.test_betas_vs_sympy_minors(cfg)
        count = 0
        for a, b, s, k, u in product(range(7), repeat=5):
            if s >= b + k:
                lhs, rhs = combinatorial_identity(a, b, s, k, u)
                assert lhs == rhs
                count += 1
        assert count > 1000
        for p in test_jacobi.PARAMS[:3]:
            test_jacobi.test_weighted_integral_closed_form(p)
        for p in test_jacobi.PARAMS:
            test_jacobi.test_boundary_derivatives_vs_sympy(p)
        test_bilinear._sampled_key_lemma(EX1, GENERIC, 50, 101)
        test_bilinear._sampled_key_lemma(EX2, SOBOLEV, 50, 102)
        test_family.test_mix_invariance_random()
        test_family.test_w_degree_law_randomised()
