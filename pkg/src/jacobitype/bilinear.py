"""Bilinear forms with respect to which q_n (n >= m) are left orthogonal.

Values live in Q[u, v] with u = 1/Gamma(beta), v = 1/Gamma(alpha), and are
divided by the total Jacobi mass C.  In Sobolev mode alpha and beta are
integers, the boundary terms become derivatives at +-1 and u, v are
substituted by their rational values.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Dict, List, Optional, Tuple

from .exact import Poly, SymValue, ZERO, ONE, det_cofactor, is_integer, to_rational
from .family import (FamilyConfig, UExpansion, expand_in_u, pq_value, qsequence,
                     u_lambda_poly)
from .jacobi import gamma_ratio, jacobi_poly, normalized_moment, pochhammer

GENERIC = "generic"
SOBOLEV = "sobolev"


@dataclass(frozen=True)
class BilinearConfig:
    kappa: Tuple[Fraction, ...]
    tau: Tuple[Fraction, ...]
    mode: str = GENERIC

    def __post_init__(self):
        object.__setattr__(self, "kappa", tuple(to_rational(k) for k in self.kappa))
        object.__setattr__(self, "tau", tuple(to_rational(t) for t in self.tau))
        if self.mode not in (GENERIC, SOBOLEV):
            raise ValueError(f"unknown mode {self.mode!r}")

    @classmethod
    def ones(cls, cfg: FamilyConfig, mode: str = GENERIC) -> "BilinearConfig":
        return cls((ONE,) * cfg.m1, (ONE,) * cfg.m2, mode)

    def validate(self, cfg: FamilyConfig) -> None:
        if len(self.kappa) != cfg.m1 or len(self.tau) != cfg.m2:
            raise ValueError("need one kappa per element of G and one tau per element of H")
        a, b = cfg.alpha, cfg.beta
        if self.mode == SOBOLEV:
            if not (is_integer(a) and cfg.m2 <= a <= max(cfg.H)):
                raise ValueError("Sobolev mode needs integer alpha in [m2, max H]")
            if not (is_integer(b) and cfg.m1 <= b <= max(cfg.G)):
                raise ValueError("Sobolev mode needs integer beta in [m1, max G]")
        else:
            if is_integer(a - max(cfg.H)) and a - max(cfg.H) <= 0:
                raise ValueError("generic mode needs alpha - max H outside {0, -1, -2, ...}")
            if is_integer(b - max(cfg.G)) and b - max(cfg.G) <= 0:
                raise ValueError("generic mode needs beta - max G outside {0, -1, -2, ...}")

    def to_json(self) -> dict:
        from .exact import format_rational
        return {"kappa": [format_rational(k) for k in self.kappa],
                "tau": [format_rational(t) for t in self.tau], "mode": self.mode}

    @classmethod
    def from_json(cls, data) -> "BilinearConfig":
        return cls(tuple(data["kappa"]), tuple(data["tau"]), data.get("mode", GENERIC))


@dataclass(frozen=True)
class PoleExpansion:
    """sum_u coeffs[u] * (1 - center*x)^(-u-1).

    center = -1 gives powers of 1/(1+x), center = +1 gives powers of 1/(1-x).
    """
    center: int
    coeffs: Tuple


# ---------------------------------------------------------------------------
# The basis b_s and the change of basis from monomials
# ---------------------------------------------------------------------------

def basis_b(s: int, cfg: FamilyConfig) -> Poly:
    if s < 1:
        raise ValueError("b_s is indexed from s = 1")
    m1, m2, m = cfg.m1, cfg.m2, cfg.m
    xp, xm = Poly([1, 1]), Poly([1, -1])
    if s <= m1:
        return xp ** (s - 1) * xm ** m2
    if s <= m:
        return xp ** m1 * xm ** (s - m1 - 1)
    return xp ** m1 * xm ** m2 * Poly.monomial(s - m - 1)


def change_of_basis(i: int, cfg: FamilyConfig) -> List[Fraction]:
    """gamma^i_s (list index s-1) with x^i = sum_s gamma^i_s b_s."""
    m1, m2, m = cfg.m1, cfg.m2, cfg.m
    size = max(i + 1, m)
    gam = [ZERO] * size
    for l in range(1, m1 + 1):
        acc = Fraction((-1) ** (i + l + 1) * comb(i, l - 1), 2 ** m2)
        for h in range(1, l):
            acc -= Fraction(-2) ** (h - l) * comb(m2, l - h) * gam[h - 1]
        gam[l - 1] = acc
    for l in range(1, m2 + 1):
        acc = Fraction((-1) ** (l + 1) * comb(i, l - 1), 2 ** m1)
        for h in range(1, l):
            acc -= Fraction(-2) ** (h - l) * comb(m1, l - h) * gam[m1 + h - 1]
        gam[m1 + l - 1] = acc
    if i >= m:
        quot, _ = Poly.monomial(i).divmod(basis_b(m + 1, cfg))
        for k, c in enumerate(quot.coeffs):
            gam[m + k] = c
    return gam


# ---------------------------------------------------------------------------
# Pole parts phi_s, psi_t and the rational functions U_l, V_l
# ---------------------------------------------------------------------------

def phi_psi(cfg: FamilyConfig) -> Tuple[List[PoleExpansion], List[PoleExpansion]]:
    m1, m2, m = cfg.m1, cfg.m2, cfg.m
    phi: Dict[int, List[Fraction]] = {}
    for i in range(m1, 0, -1):
        acc = [ZERO] * (m1 - i + 1)
        acc[m1 - i] = Fraction(-1)
        for l in range(i, min(m1, i + m2)):
            c = Fraction(-2) ** (i - l - 1) * comb(m2, l - i + 1)
            for u, a in enumerate(phi[l]):
                acc[u] -= c * a
        phi[i - 1] = acc
    psi: Dict[int, List[Fraction]] = {}
    lead = Fraction(-2) ** m1
    for i in range(m, m1, -1):
        t = i - m1 - 1
        acc = [ZERO] * (m2 - t)
        acc[m - i] = Fraction(-1)
        for l in range(t + 1, min(m2, i)):
            c = Fraction(-2) ** (i - l - 1) * comb(m1, i - l - 1)
            for u, a in enumerate(psi[l]):
                acc[u] -= c * a
        psi[t] = [a / lead for a in acc]
    return ([PoleExpansion(-1, tuple(phi[s])) for s in range(m1)],
            [PoleExpansion(1, tuple(psi[t])) for t in range(m2)])


def big_uv(cfg: FamilyConfig, bcfg: BilinearConfig,
           uexp: Optional[UExpansion] = None) -> Tuple[List[PoleExpansion], List[PoleExpansion]]:
    """U_l = phi_l + kappa_l u sum_s (b-s)_s 2^s s! nu_s (1+x)^(-s-1); V_l likewise with v."""
    uexp = uexp or expand_in_u(cfg)
    phi, psi = phi_psi(cfg)
    a, b = cfg.alpha, cfg.beta
    U, V = [], []
    for l, g in enumerate(cfg.G):
        size = max(len(phi[l].coeffs), g + 1)
        co = [SymValue.const(phi[l].coeffs[s]) if s < len(phi[l].coeffs) else SymValue()
              for s in range(size)]
        for s in range(g + 1):
            w = pochhammer(b - s, s)
            if w == 0:
                continue
            c = bcfg.kappa[l] * w * 2 ** s * factorial(s) * uexp.nu_of(g, s)
            co[s] = co[s] + SymValue.u(c)
        U.append(PoleExpansion(-1, tuple(co)))
    for l, h in enumerate(cfg.H):
        size = max(len(psi[l].coeffs), h + 1)
        co = [SymValue.const(psi[l].coeffs[s]) if s < len(psi[l].coeffs) else SymValue()
              for s in range(size)]
        for s in range(h + 1):
            w = pochhammer(a - s, s)
            if w == 0:
                continue
            c = bcfg.tau[l] * w * 2 ** s * factorial(s) * uexp.omega_of(h, s)
            co[s] = co[s] + SymValue.v(c)
        V.append(PoleExpansion(1, tuple(co)))
    return U, V


# ---------------------------------------------------------------------------
# The bilinear form
# ---------------------------------------------------------------------------

def _inv_gamma_int(z: int) -> Fraction:
    """1/Gamma(z) for integer z, zero at the poles."""
    if z <= 0:
        return ZERO
    return Fraction(1, factorial(z - 1))


def gamma_symbols(cfg: FamilyConfig) -> Tuple[Fraction, Fraction]:
    """Rational values of (u, v) = (1/Gamma(beta), 1/Gamma(alpha)) for integer parameters."""
    return _inv_gamma_int(int(cfg.beta)), _inv_gamma_int(int(cfg.alpha))


class Pairing:
    """Evaluates <p, q> for one (family, bilinear) configuration."""

    def __init__(self, cfg: FamilyConfig, bcfg: BilinearConfig, uexp: Optional[UExpansion] = None):
        bcfg.validate(cfg)
        self.cfg, self.bcfg = cfg, bcfg
        self.uexp = uexp or expand_in_u(cfg)
        self.U, self.V = big_uv(cfg, bcfg, self.uexp)
        self.sobolev = bcfg.mode == SOBOLEV
        if self.sobolev:
            a, b = int(cfg.alpha), int(cfg.beta)
            # 2^(a+b) Gamma(a+1) / C and 2^(a+b) Gamma(b+1) / C
            self._pref2s = Fraction(factorial(a + b + 1), 2 * factorial(b))
            self._pref3s = Fraction(factorial(a + b + 1), 2 * factorial(a))

    def part1(self, p: Poly, q: Poly) -> SymValue:
        return SymValue.const(normalized_moment(p * q, -self.cfg.m2, -self.cfg.m1, self.cfg.params))

    def part2(self, p: Poly, q: Poly) -> SymValue:
        cfg = self.cfg
        total = SymValue()
        cache: Dict[int, Fraction] = {}
        for l in range(cfg.m1):
            w = q.deriv(l)(-1) / (2 ** cfg.m2 * factorial(l))
            if w == 0:
                continue
            inner = SymValue()
            for s, c in enumerate(self.U[l].coeffs):
                if c.is_zero():
                    continue
                if s not in cache:
                    cache[s] = normalized_moment(p, 0, -s - 1, cfg.params)
                inner = inner + c * cache[s]
            total = total + inner * w
        return total

    def part3(self, p: Poly, q: Poly) -> SymValue:
        cfg = self.cfg
        total = SymValue()
        cache: Dict[int, Fraction] = {}
        for l in range(cfg.m2):
            w = q.deriv(l)(1) / ((-1) ** (cfg.m1 + l) * factorial(l))
            if w == 0:
                continue
            inner = SymValue()
            for s, c in enumerate(self.V[l].coeffs):
                if c.is_zero():
                    continue
                if s not in cache:
                    cache[s] = normalized_moment(p, -s - 1, 0, cfg.params)
                inner = inner + c * cache[s]
            total = total + inner * w
        return total

    def part2s(self, p: Poly, q: Poly) -> Fraction:
        cfg = self.cfg
        a, b = int(cfg.alpha), int(cfg.beta)
        total = ZERO
        for l, g in enumerate(cfg.G):
            w = self.bcfg.kappa[l] * q.deriv(l)(-1) / (2 ** cfg.m2 * factorial(l))
            if w == 0:
                continue
            for j in range(0, g - b + 1):
                pj = p.deriv(j)(-1) * Fraction(2 ** j, factorial(j))
                if pj == 0:
                    continue
                inner = ZERO
                for s in range(b + j, g + 1):
                    inner += (pochhammer(Fraction(b - s), j) * factorial(s)
                              * _inv_gamma_int(a + b - s + j + 1) * self.uexp.nu_of(g, s))
                total += w * pj * inner
        return total * self._pref2s

    def part3s(self, p: Poly, q: Poly) -> Fraction:
        cfg = self.cfg
        a, b = int(cfg.alpha), int(cfg.beta)
        total = ZERO
        for l, h in enumerate(cfg.H):
            w = self.bcfg.tau[l] * q.deriv(l)(1) / ((-1) ** (cfg.m1 + l) * factorial(l))
            if w == 0:
                continue
            for j in range(0, h - a + 1):
                pj = p.deriv(j)(1) * Fraction((-2) ** j, factorial(j))
                if pj == 0:
                    continue
                inner = ZERO
                for s in range(a + j, h + 1):
                    inner += (pochhammer(Fraction(a - s), j) * factorial(s)
                              * _inv_gamma_int(a + b - s + j + 1) * self.uexp.omega_of(h, s))
                total += w * pj * inner
        return total * self._pref3s

    def __call__(self, p: Poly, q: Poly) -> SymValue:
        val = self.part1(p, q) + self.part2(p, q) + self.part3(p, q)
        if self.sobolev:
            u, v = gamma_symbols(self.cfg)
            val = SymValue.const(val.substitute(u, v) + self.part2s(p, q) + self.part3s(p, q))
        return val


def pair(p: Poly, q: Poly, cfg: FamilyConfig, bcfg: BilinearConfig,
         uexp: Optional[UExpansion] = None) -> SymValue:
    return Pairing(cfg, bcfg, uexp)(p, q)


# ---------------------------------------------------------------------------
# Closed forms for <(1 +- x)^k J_{n-j}, b_i>
# ---------------------------------------------------------------------------

def _finish(cfg: FamilyConfig, bcfg: BilinearConfig, val: SymValue) -> SymValue:
    if bcfg.mode == SOBOLEV:
        u, v = gamma_symbols(cfg)
        return SymValue.const(val.substitute(u, v))
    return val


def key_lemma_rhs(k: int, n: int, j: int, i: int, cfg: FamilyConfig, bcfg: BilinearConfig,
                  uexp: Optional[UExpansion] = None) -> SymValue:
    uexp = uexp or expand_in_u(cfg)
    a, b = cfg.alpha, cfg.beta
    m1, m2 = cfg.m1, cfg.m2
    v_idx = n - j
    two_k = Fraction(2) ** k
    if i <= m1:
        bracket = ZERO
        for l in range(i - 1, min(m1, m2 + i)):
            g = cfg.G[l]
            inner = ZERO
            for s in range(k, g + 1):
                nu = uexp.nu_of(g, s)
                if nu == 0:
                    continue
                inner += (two_k * nu * pochhammer(b - s, k) * pochhammer(Fraction(s - k + 1), k)
                          * u_lambda_poly(s - k, a, cfg.params)(v_idx))
            bracket += bcfg.kappa[l] * comb(m2, l - i + 1) / Fraction(-2) ** (l + 1) * inner
        # c_{n,i} rho^i_{n,j} / C, with 1/Gamma(n-j+b+1) = u / (b)_{n-j+1}
        pref = ((-1) ** (i + j) * Fraction(2) ** (i - 1) * cfg.params.ab1
                * gamma_ratio(v_idx + a, a) / pochhammer(b, v_idx + 1))
        val = SymValue.u(pref * (-1) ** j * bracket)
    else:
        bracket = ZERO
        for l in range(i - m1 - 1, min(m2, i)):
            h = cfg.H[l]
            inner = ZERO
            for s in range(k, h + 1):
                om = uexp.omega_of(h, s)
                if om == 0:
                    continue
                inner += (two_k * om * pochhammer(a - s, k) * pochhammer(Fraction(s - k + 1), k)
                          * u_lambda_poly(s - k, a, cfg.params)(v_idx))
            bracket += bcfg.tau[l] * comb(m1, i - l - 1) / Fraction(-2) ** (l + 1) * inner
        # d_{n,i} / C, with 1/Gamma(a+1) = v / a
        pref = (-1) ** (n + i) * Fraction(2) ** (i - 1) * cfg.params.ab1 / a
        val = SymValue.v(pref * (-1) ** j * bracket)
    return _finish(cfg, bcfg, val)


def key_lemma_check(k: int, n: int, j: int, i: int, cfg: FamilyConfig, bcfg: BilinearConfig,
                    uexp: Optional[UExpansion] = None,
                    pairing: Optional[Pairing] = None) -> Tuple[SymValue, SymValue]:
    if not (0 <= k <= n - j and 0 <= j) or not (1 <= i <= cfg.m):
        raise ValueError("need 0 <= k <= n - j and 1 <= i <= m")
    pairing = pairing or Pairing(cfg, bcfg, uexp)
    factor = Poly([1, 1]) if i <= cfg.m1 else Poly([1, -1])
    lhs = pairing(factor ** k * jacobi_poly(n - j, cfg.params), basis_b(i, cfg))
    return lhs, key_lemma_rhs(k, n, j, i, cfg, bcfg, pairing.uexp)


# ---------------------------------------------------------------------------
# The matrix A_{ij} = <q_j, x^i> and its closed-form determinant
# ---------------------------------------------------------------------------

def det_a_closed_form(cfg: FamilyConfig, bcfg: BilinearConfig) -> SymValue:
    """det A / C^m = (-1)^(C(m2,2)+m1 m2) p(m)q(m) 2^-m (a+b+1)^m (a^-1 v)^m2 ((b)_m^-1 u)^m1 prod Lambda(j)."""
    a, b = cfg.alpha, cfg.beta
    m, m1, m2 = cfg.m, cfg.m1, cfg.m2
    seq = qsequence(cfg)
    lam_prod = ONE
    for j in range(m + 1):
        lam_prod *= seq.lam(j)
    coeff = ((-1) ** (comb(m2, 2) + m1 * m2) * pq_value(m, cfg) * Fraction(1, 2 ** m) * cfg.params.ab1 ** m
             / a ** m2 / pochhammer(b, m) ** m1 * lam_prod)
    return _finish(cfg, bcfg, SymValue({(m1, m2): coeff}))


def det_a_matrix(cfg: FamilyConfig, bcfg: BilinearConfig,
                 uexp: Optional[UExpansion] = None) -> Tuple[SymValue, SymValue]:
    if any(k != 1 for k in bcfg.kappa) or any(t != 1 for t in bcfg.tau):
        raise ValueError("det A needs kappa = tau = 1")
    pairing = Pairing(cfg, bcfg, uexp)
    seq = qsequence(cfg)
    m = cfg.m
    A = [[pairing(seq.q(j), Poly.monomial(i)) for j in range(m)] for i in range(m)]
    return det_cofactor(A), det_a_closed_form(cfg, bcfg)
