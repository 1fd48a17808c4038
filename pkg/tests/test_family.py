import random
from fractions import Fraction as F

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from jacobitype.exact import Poly
from jacobitype.family import (DegenerateFamily, FamilyConfig, beta_coefficients, expand_in_u,
                               from_theta_basis, lambda_gh, mix_invariance, pq_value, q_by_determinant,
                               qsequence, rho_factor, to_theta_basis, u_lambda_poly, w_degree_bound,
                               w_det_a, w_det_b)
from jacobitype.jacobi import JacobiParams

from helpers import EX1, EX2, srat

EX1_LAMBDA = [F(-19, 9), F(-1, 216), F(-41, 36), F(18067, 108), F(7946), F(2297981, 24)]
EX2_LAMBDA = [F(-83, 3), F(14, 3), F(40, 3), F(1819, 3), F(13487, 3), F(55972, 3)]


# ---------------------------------------------------------------------------
# Configuration handling
# ---------------------------------------------------------------------------

def test_config_properties():
    assert (EX1.m1, EX1.m2, EX1.m) == (2, 1, 3)
    assert EX1.G == (1, 3) and EX1.H == (1,)
    assert EX1.R_of(3) == Poly([1, F(2, 3), F(1, 3), 1])
    assert len(EX1.Z) == 3


@pytest.mark.parametrize("bad", [
    dict(R={}, S={1: [1, 1]}),
    dict(R={1: [1, 2]}, S={1: [1, 1]}),
    dict(R={2: [1, 1]}, S={1: [1, 1]}),
    dict(R={0: [1]}, S={1: [1, 1]}),
])
def test_config_rejects(bad):
    with pytest.raises(ValueError):
        FamilyConfig.build(F(1, 2), F(1, 3), bad["R"], bad["S"])


def test_config_json_roundtrip():
    for cfg in (EX1, EX2):
        assert FamilyConfig.from_json(cfg.to_json()) == cfg


@pytest.mark.parametrize("data", [
    {"alpha": "1/2", "R": {"1": ["1", "1"]}, "S": {"1": ["1", "1"]}},
    {"alpha": "1/2", "beta": "1/3", "R": {"1": ["1", "1"]}, "S": {"1": ["1", "1"]}, "G": [2]},
    {"alpha": "1/2", "beta": "1/0", "R": {"1": ["1", "1"]}, "S": {"1": ["1", "1"]}},
    {"alpha": "x", "beta": "1/3", "R": {"1": ["1", "1"]}, "S": {"1": ["1", "1"]}},
])
def test_config_json_malformed(data):
    with pytest.raises(ValueError):
        FamilyConfig.from_json(data)


# ---------------------------------------------------------------------------
# Lambda, beta and q_n
# ---------------------------------------------------------------------------

def test_lambda_regressions():
    assert [lambda_gh(n, EX1) for n in range(6)] == EX1_LAMBDA
    assert [lambda_gh(n, EX2) for n in range(6)] == EX2_LAMBDA


def _gamma_quotient(p, q):
    """Gamma(p) / Gamma(q) for p - q an integer, through sympy's rising factorial."""
    k = int(p - q)
    return sp.rf(q, k) if k >= 0 else 1 / sp.rf(p, -k)


def _oracle_betas(n, cfg):
    """beta_{n,j} from a sympy determinant with rho built from sympy Gamma functions."""
    a, b, m, m1 = srat(cfg.alpha), srat(cfg.beta), cfg.m, cfg.m1
    x = sp.Integer(n)

    def rho(i, j):
        if i > m1:
            return sp.Integer(1)
        val = _gamma_quotient(x + a - j + 1, x + a - m + 1) * _gamma_quotient(x + b, x + b - j + 1)
        return (-1) ** (m - j) * val

    def theta(t):
        return t * (t + a + b + 1)
    Z = [[srat(c) for c in z.coeffs] for z in cfg.Z]

    def zval(l, t):
        return sum(c * t ** k for k, c in enumerate(Z[l]))
    rows = [[rho(l + 1, j) * zval(l, theta(x - j)) for j in range(m + 1)] for l in range(m)]
    p = sp.Integer(1)
    for i in range(1, m1):
        p *= (-1) ** (m1 - i) * sp.rf(x + a - m + 1, m1 - i) * sp.rf(x + b - m1 + i, m1 - i)
    q = sp.Integer((-1) ** (m * (m - 1) // 2))
    for h in range(1, m):
        for i in range(1, h + 1):
            q *= 2 * (x - m) + a + b + i + h
    out = []
    for j in range(m + 1):
        M = sp.Matrix([[r[c] for c in range(m + 1) if c != j] for r in rows])
        out.append(sp.cancel(M.det() / (p * q)))
    return out


@pytest.mark.parametrize("cfg", [EX1, EX2], ids=["ex1", "ex2"])
def test_betas_vs_sympy_minors(cfg):
    for n in range(0, 16):
        if pq_value(n, cfg) == 0:
            continue
        got = beta_coefficients(n, cfg)[0]
        assert [srat(v) for v in got] == _oracle_betas(n, cfg)


def test_rho_factor_blocks():
    assert rho_factor(3, 1, 5, EX1) == 1
    a, b = EX1.alpha, EX1.beta
    # i <= m1, j = 0: (-1)^m (x+a-m+1)_m / (x+b)
    x = 4
    expected = -((x + a - 2) * (x + a - 1) * (x + a)) / (x + b)
    assert rho_factor(1, 0, x, EX1) == expected


@pytest.mark.parametrize("cfg", [EX1, EX2], ids=["ex1", "ex2"])
def test_vanishing_rows(cfg):
    """Replacing the first row of the q_n determinant by any other row gives zero."""
    m = cfg.m
    for n in range(16):
        betas = qsequence(cfg).betas(n)
        for l, Z in enumerate(cfg.Z, start=1):
            total = sum((-1) ** j * betas[j] * rho_factor(l, j, n, cfg)
                        * Z(cfg.params.theta(n - j)) for j in range(m + 1))
            assert total == 0


@pytest.mark.parametrize("cfg", [EX1, EX2], ids=["ex1", "ex2"])
def test_last_beta_relation(cfg):
    a, b, m, m1 = cfg.alpha, cfg.beta, cfg.m, cfg.m1
    checked = 0
    for n in range(16):
        if pq_value(n, cfg) == 0 or n + b == 0:
            continue
        rhs = ((-1) ** m1 * ((n + a - m + 1) / (n + b)) ** m1
               * pq_value(n + 1, cfg) / pq_value(n, cfg) * lambda_gh(n + 1, cfg))
        assert qsequence(cfg).betas(n)[m] == rhs
        checked += 1
    assert checked >= 10


@pytest.mark.parametrize("cfg", [EX1, EX2], ids=["ex1", "ex2"])
def test_degrees_and_determinant_route(cfg):
    seq = qsequence(cfg)
    for n in range(12):
        assert seq.q(n).degree == n
        if pq_value(n, cfg) != 0:
            assert q_by_determinant(n, cfg) == seq.q(n)


def test_degenerate_family_detected():
    # G = {1} with R_1(theta) = theta vanishes at theta_0 and kills Lambda(0)... or later
    cfg = FamilyConfig.build(F(1, 2), F(1, 2), {1: [1, 1], 3: [1, F(2, 3), F(1, 3), 1]},
                             {1: [F(1, 2), 1]})
    with pytest.raises(DegenerateFamily):
        qsequence(cfg).audit(3)


def test_integer_parameters_use_regularisation():
    flags = [beta_coefficients(n, EX2)[1] for n in range(6)]
    assert any(flags) or all(pq_value(n, EX2) != 0 for n in range(6))


# ---------------------------------------------------------------------------
# Invariance under triangular mixing
# ---------------------------------------------------------------------------

def test_mix_invariance_random():
    rng = random.Random(7)
    base = FamilyConfig.build(F(3, 5), F(2, 7), {1: [2, 1], 2: [1, -1, 1], 4: [1, 0, 2, 0, 1]},
                              {1: [F(1, 3), 1], 3: [1, 1, 0, 1]})
    seq = qsequence(base)
    for _ in range(5):
        zeta = {(2, 1): F(rng.randint(-5, 5), rng.randint(1, 4)),
                (4, 1): F(rng.randint(-5, 5), rng.randint(1, 4)),
                (4, 2): F(rng.randint(-5, 5), rng.randint(1, 4))}
        chi = {(3, 1): F(rng.randint(-5, 5), rng.randint(1, 4))}
        mixed = mix_invariance(base, zeta, chi)
        assert mixed != base
        mseq = qsequence(mixed)
        for n in range(10):
            assert mseq.q(n) == seq.q(n)


def test_mix_invariance_rejects_bad_index():
    with pytest.raises(ValueError):
        mix_invariance(EX1, {(1, 3): 1})


# ---------------------------------------------------------------------------
# Degree law for the auxiliary determinants
# ---------------------------------------------------------------------------

def _random_monic(rng, d):
    return Poly([F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(d)] + [1])


def test_w_degree_law_randomised():
    rng = random.Random(11)
    cfg = FamilyConfig.build(F(3, 5), F(2, 7), {1: [2, 1], 3: [1, 1, 0, 1]}, {2: [1, -1, 1]})
    for trial in range(10):
        kind = "a" if trial % 2 == 0 else "b"
        repeat = trial % 3 == 2
        block1 = cfg.m1 + 1 if kind == "a" else cfg.m1
        block2 = cfg.m + 1 - block1
        d1 = rng.sample(range(1, 5), block1)
        d2 = rng.sample(range(1, 5), block2)
        if repeat:
            d1[-1] = d1[0]
        Y = [_random_monic(rng, d) for d in d1 + d2]
        W = w_det_a(Y, cfg) if kind == "a" else w_det_b(Y, cfg)
        bound = w_degree_bound(Y, cfg, kind)
        if repeat:
            assert W.degree < bound
        else:
            assert W.degree == bound


def test_w_degree_example():
    cfg = FamilyConfig.build(F(3, 5), F(2, 7), {1: [2, 1]}, {1: [F(1, 2), 1]})
    Y = [Poly([1, 0, 1]), Poly([2, 1]), Poly([F(1, 2), 1])]
    assert w_degree_bound(Y, cfg, "a") == 6
    assert w_det_a(Y, cfg).degree == 6


def test_w_repeated_family_row_vanishes():
    Y = [EX1.Z[0]] + list(EX1.Z)
    assert w_det_a(Y, EX1).is_zero()


def test_w_matches_bordered_determinant_up_to_factor():
    """The (m+1)-row determinant over theta_x..theta_{x-m}, divided by p(x) q(x),
    differs from W_a by (x+b)^(m1+1) p(x) q(x) / (p'(x+1) q'(x+1))."""
    from jacobitype.exact import det_fraction_free
    from jacobitype.family import _pfrak_generic, _qfrak_generic
    cfg = EX1
    a, b, m, m1 = cfg.alpha, cfg.beta, cfg.m, cfg.m1
    Y = [Poly([1, 1, 1])] + list(cfg.Z)
    W = w_det_a(Y, cfg)
    for x in range(3, 9):
        rows = [[rho_factor(1 if i <= m1 + 1 else m, j, x, cfg) * y(cfg.params.theta(x - j))
                 for j in range(m + 1)] for i, y in enumerate(Y, start=1)]
        bordered = det_fraction_free(rows) / pq_value(x, cfg)
        factor = ((x + b) ** (m1 + 1) * pq_value(x, cfg)
                  / (_pfrak_generic(F(x + 1), a, b, m1 + 1, m + 1) * _qfrak_generic(F(x + 1), a, b, m + 1)))
        assert bordered * factor == W(x)


def test_w_wrong_length():
    with pytest.raises(ValueError):
        w_det_a([Poly([1])], EX1)


# ---------------------------------------------------------------------------
# The u-basis
# ---------------------------------------------------------------------------

@settings(max_examples=20, deadline=None)
@given(st.integers(0, 4), st.fractions(-3, 3, max_denominator=4))
def test_u_basis_is_symmetric(j, lam):
    p = JacobiParams(F(1, 2), F(1, 3))
    P = u_lambda_poly(j, lam, p)
    T = to_theta_basis(P, p)
    assert T.degree == j
    assert from_theta_basis(T, p) == P


def test_expand_in_u_reconstructs():
    uexp = expand_in_u(EX1)
    p = EX1.params
    for g, R in zip(EX1.G, EX1.R):
        total = sum((u_lambda_poly(s, p.alpha, p) * uexp.nu_of(g, s) for s in range(g + 1)), Poly([]))
        assert total == from_theta_basis(R, p)


def test_to_theta_basis_rejects_asymmetric():
    with pytest.raises(ValueError):
        to_theta_basis(Poly([0, 1]), JacobiParams(F(1, 2), F(1, 3)))
