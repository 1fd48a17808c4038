"""Jacobi-type families built from bordered quasi-Casoratian determinants.

A family is fixed by (alpha, beta), two sets of positive integers G and H and
monic polynomials R_g (deg g), S_h (deg h) in the variable theta.  The
polynomial q_n is the (m+1)x(m+1) determinant whose first row holds
(-1)^j J_{n-j} and whose remaining rows hold rho^l_{n,j} Z_l(theta_{n-j}),
divided by p(n) q(n).
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .exact import (DegenerateLimit, EpsFrac, Poly, ZERO, ONE, det_fraction_free,
                    eps_limit, format_rational, interpolate, to_rational)
from .jacobi import JacobiParams, gamma_ratio, jacobi_poly, pochhammer


class DegenerateFamily(ArithmeticError):
    """Lambda_{G,H}(n) = 0, so q_n does not have degree n."""

    def __init__(self, n: int, msg: str = ""):
        self.n = n
        super().__init__(msg or f"Lambda_(G,H)({n}) = 0: nondegeneracy assumption violated at n = {n}")


@dataclass(frozen=True)
class FamilyConfig:
    params: JacobiParams
    G: Tuple[int, ...]
    H: Tuple[int, ...]
    R: Tuple[Poly, ...]  # R[k] belongs to G[k]
    S: Tuple[Poly, ...]  # S[k] belongs to H[k]

    def __post_init__(self):
        G, H = tuple(int(g) for g in self.G), tuple(int(h) for h in self.H)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "R", tuple(self.R))
        object.__setattr__(self, "S", tuple(self.S))
        if not G or not H:
            raise ValueError("G and H must both be nonempty")
        for name, block in (("G", G), ("H", H)):
            if list(block) != sorted(set(block)) or block[0] < 1:
                raise ValueError(f"{name} must be increasing distinct positive integers")
        if len(self.R) != len(G) or len(self.S) != len(H):
            raise ValueError("one polynomial per element of G and of H is required")
        for deg, poly in list(zip(G, self.R)) + list(zip(H, self.S)):
            if poly.degree != deg or poly.lc() != 1:
                raise ValueError(f"polynomial {poly} must be monic of degree {deg}")

    @classmethod
    def build(cls, alpha, beta, R: Mapping[int, Sequence], S: Mapping[int, Sequence]) -> "FamilyConfig":
        """R, S map degree -> ascending theta-coefficients."""
        G = sorted(int(g) for g in R)
        H = sorted(int(h) for h in S)
        return cls(JacobiParams(alpha, beta), tuple(G), tuple(H),
                   tuple(_as_poly(R[g]) for g in G), tuple(_as_poly(S[h]) for h in H))

    @property
    def alpha(self) -> Fraction:
        return self.params.alpha

    @property
    def beta(self) -> Fraction:
        return self.params.beta

    @property
    def m1(self) -> int:
        return len(self.G)

    @property
    def m2(self) -> int:
        return len(self.H)

    @property
    def m(self) -> int:
        return len(self.G) + len(self.H)

    @property
    def Z(self) -> Tuple[Poly, ...]:
        return self.R + self.S

    def R_of(self, g: int) -> Poly:
        return self.R[self.G.index(g)]

    def S_of(self, h: int) -> Poly:
        return self.S[self.H.index(h)]

    def to_json(self) -> dict:
        return {
            "alpha": format_rational(self.alpha),
            "beta": format_rational(self.beta),
            "G": list(self.G),
            "H": list(self.H),
            "R": {str(g): [format_rational(c) for c in r.coeffs] for g, r in zip(self.G, self.R)},
            "S": {str(h): [format_rational(c) for c in s.coeffs] for h, s in zip(self.H, self.S)},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "FamilyConfig":
        try:
            R = {int(k): v for k, v in data["R"].items()}
            S = {int(k): v for k, v in data["S"].items()}
            cfg = cls.build(data["alpha"], data["beta"], R, S)
        except (KeyError, TypeError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed family configuration: {exc}") from exc
        if "G" in data and list(data["G"]) != list(cfg.G):
            raise ValueError("G does not match the keys of R")
        if "H" in data and list(data["H"]) != list(cfg.H):
            raise ValueError("H does not match the keys of S")
        return cfg


def _as_poly(coeffs) -> Poly:
    if isinstance(coeffs, Poly):
        return coeffs
    return Poly([to_rational(c) for c in coeffs])


# ---------------------------------------------------------------------------
# Scalar building blocks, written over any field (Fraction or EpsFrac)
# ---------------------------------------------------------------------------

def _rho_generic(block_one: bool, j: int, x, a, b, m: int):
    if not block_one:
        return ONE
    r1 = pochhammer(x + a - m + 1, m - j)
    if j >= 1:
        r2 = pochhammer(x + b - j + 1, j - 1)
    else:
        r2 = 1 / (x + b)
    val = r1 * r2
    return -val if (m - j) % 2 else val


def _pfrak_generic(x, a, b, m1: int, m: int):
    out = ONE
    for i in range(1, m1):
        term = pochhammer(x + a - m + 1, m1 - i) * pochhammer(x + b - m1 + i, m1 - i)
        out = out * (-term if (m1 - i) % 2 else term)
    return out


def _qfrak_generic(x, a, b, m: int):
    out = ONE
    for h in range(1, m):
        for i in range(1, h + 1):
            out = out * (2 * (x - m) + a + b + i + h)
    return -out if comb(m, 2) % 2 else out


def _theta_generic(t, a, b):
    return t * (t + a + b + 1)


def rho_factor(i: int, j: int, x, cfg: FamilyConfig) -> Fraction:
    """rho^i_{x,j}; i is 1-based, blocks i <= m1 carry the Gamma ratios."""
    if i > cfg.m1:
        return ONE
    a, b, m = cfg.alpha, cfg.beta, cfg.m
    x = to_rational(x)
    sign = -1 if (m - j) % 2 else 1
    return sign * gamma_ratio(a - j, a - m, x) * gamma_ratio(b - 1, b - j, x)


def pq_polys(cfg: FamilyConfig) -> Tuple[Poly, Poly]:
    """The normalising polynomials p(x) and q(x) in x."""
    X = Poly.x()
    p = _pfrak_generic(X, cfg.alpha, cfg.beta, cfg.m1, cfg.m)
    q = _qfrak_generic(X, cfg.alpha, cfg.beta, cfg.m)
    p = p if isinstance(p, Poly) else Poly([p])
    q = q if isinstance(q, Poly) else Poly([q])
    return p, q


def pq_value(x, cfg: FamilyConfig) -> Fraction:
    a, b = cfg.alpha, cfg.beta
    x = to_rational(x)
    return _pfrak_generic(x, a, b, cfg.m1, cfg.m) * _qfrak_generic(x, a, b, cfg.m)


def _casoratian_rows(n: int, cfg: FamilyConfig, a, b) -> List[List]:
    m, m1 = cfg.m, cfg.m1
    thetas = [_theta_generic(n - j, a, b) for j in range(m + 1)]
    rows = []
    for l, Z in enumerate(cfg.Z, start=1):
        rows.append([_rho_generic(l <= m1, j, n, a, b, m) * Z(thetas[j]) for j in range(m + 1)])
    return rows


def _minors_over(n: int, cfg: FamilyConfig, a, b) -> List:
    rows = _casoratian_rows(n, cfg, a, b)
    pq = _pfrak_generic(n, a, b, cfg.m1, cfg.m) * _qfrak_generic(n, a, b, cfg.m)
    out = []
    for j in range(cfg.m + 1):
        minor = [[r[c] for c in range(cfg.m + 1) if c != j] for r in rows]
        out.append(det_fraction_free(minor) / pq)
    return out


def _regularized_minors(n: int, cfg: FamilyConfig) -> List[Fraction]:
    """beta_{n,j} when p(n)q(n) = 0: perturb the parameters by eps and take the limit."""
    last = None
    for step_b in (1, 2):
        a = EpsFrac(Poly([cfg.alpha, 1]))
        b = EpsFrac(Poly([cfg.beta, step_b]))
        try:
            return [eps_limit(v) for v in _minors_over(n, cfg, a, b)]
        except DegenerateLimit as exc:
            last = exc
    raise DegenerateFamily(n, f"eps-regularisation of beta_(n,j) diverges at n = {n}: {last}")


def beta_coefficients(n: int, cfg: FamilyConfig) -> Tuple[List[Fraction], bool]:
    """All beta_{n,j}, j = 0..m, plus a flag telling whether eps-regularisation was used."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if pq_value(n, cfg) != 0:
        try:
            return _minors_over(n, cfg, cfg.alpha, cfg.beta), False
        except ZeroDivisionError:
            pass
    return _regularized_minors(n, cfg), True


def lambda_gh(n: int, cfg: FamilyConfig) -> Fraction:
    return beta_coefficients(n, cfg)[0][0]


def beta_coeff(n: int, j: int, cfg: FamilyConfig) -> Fraction:
    return beta_coefficients(n, cfg)[0][j]


@dataclass
class QRecord:
    n: int
    lam: Fraction
    betas: List[Fraction]
    regularized: bool
    jacobi: List[Fraction]  # q_n in the basis J_0..J_n
    _poly: Optional[Poly] = None


class QSequence:
    """Memoised beta_{n,j} and q_n for one configuration.

    Reads of populated entries are lock-free; population is serialised.
    """

    def __init__(self, cfg: FamilyConfig):
        self.cfg = cfg
        self._cache: Dict[int, QRecord] = {}
        self._lock = threading.Lock()

    def record(self, n: int) -> QRecord:
        rec = self._cache.get(n)
        if rec is not None:
            return rec
        with self._lock:
            rec = self._cache.get(n)
            if rec is None:
                betas, reg = beta_coefficients(n, self.cfg)
                if betas[0] == 0:
                    raise DegenerateFamily(n)
                vec = [ZERO] * (n + 1)
                for j in range(min(self.cfg.m, n) + 1):
                    vec[n - j] = betas[j]
                rec = QRecord(n, betas[0], betas, reg, vec)
                self._cache[n] = rec
        return rec

    def lam(self, n: int) -> Fraction:
        return self.record(n).lam

    def betas(self, n: int) -> List[Fraction]:
        return self.record(n).betas

    def jacobi_coeffs(self, n: int) -> List[Fraction]:
        return self.record(n).jacobi

    def q(self, n: int) -> Poly:
        rec = self.record(n)
        if rec._poly is None:
            p = self.cfg.params
            poly = Poly([])
            for j in range(min(self.cfg.m, n) + 1):
                poly = poly + jacobi_poly(n - j, p) * rec.betas[j]
            rec._poly = poly
        return rec._poly

    def audit(self, upto: int) -> List[Fraction]:
        """Lambda(0..upto); raises DegenerateFamily at the first zero."""
        return [self.lam(n) for n in range(upto + 1)]


_SEQUENCES: Dict[FamilyConfig, QSequence] = {}
_SEQ_LOCK = threading.Lock()


def qsequence(cfg: FamilyConfig) -> QSequence:
    """Shared per-configuration sequence cache."""
    seq = _SEQUENCES.get(cfg)
    if seq is None:
        with _SEQ_LOCK:
            seq = _SEQUENCES.setdefault(cfg, QSequence(cfg))
    return seq


def q_polynomial(n: int, cfg: FamilyConfig) -> Poly:
    return qsequence(cfg).q(n)


def q_by_determinant(n: int, cfg: FamilyConfig) -> Poly:
    """q_n straight from the bordered determinant (first-row cofactor expansion
    done numerically at sample points, then interpolated).  Used as a cross-check.
    """
    from .exact import det_fraction_free as det
    betas, _ = beta_coefficients(n, cfg)
    pq = pq_value(n, cfg)
    if pq == 0:
        raise ValueError("determinant route needs p(n)q(n) != 0")
    rows = _casoratian_rows(n, cfg, cfg.alpha, cfg.beta)
    p = cfg.params
    points = []
    for xv in range(n + 1):
        x = Fraction(xv, 3) - 1
        first = [(-1) ** j * jacobi_poly(n - j, p)(x) for j in range(cfg.m + 1)]
        points.append((x, det([first] + rows) / pq))
    return interpolate(points)


# ---------------------------------------------------------------------------
# Invariance under triangular mixing
# ---------------------------------------------------------------------------

def mix_invariance(cfg: FamilyConfig, zeta: Mapping[Tuple[int, int], object] = None,
                   chi: Mapping[Tuple[int, int], object] = None) -> FamilyConfig:
    """R_g <- R_g + sum zeta[g, g~] R_g~ (g~ < g), likewise S with chi."""
    zeta = zeta or {}
    chi = chi or {}

    def mixed(block, polys, coeffs):
        out = []
        for g, P in zip(block, polys):
            acc = P
            for (gg, gt), c in coeffs.items():
                if gg != g:
                    continue
                if gt not in block or gt >= g:
                    raise ValueError(f"mixing index ({gg}, {gt}) must satisfy {gt} < {gg}, both in the block")
                acc = acc + polys[block.index(gt)] * to_rational(c)
            out.append(acc)
        return tuple(out)

    for key in list(zeta) + list(chi):
        if key[0] not in cfg.G + cfg.H:
            raise ValueError(f"unknown block index {key[0]}")
    return FamilyConfig(cfg.params, cfg.G, cfg.H, mixed(cfg.G, cfg.R, zeta), mixed(cfg.H, cfg.S, chi))


# ---------------------------------------------------------------------------
# Auxiliary determinants W_a^Y and W_b^Y
# ---------------------------------------------------------------------------

def w_degree_bound(Y: Sequence[Poly], cfg: FamilyConfig, kind: str = "a") -> int:
    m1, m2 = cfg.m1, cfg.m2
    total = sum(y.degree for y in Y)
    if kind == "a":
        return 2 * (total - comb(m1 + 1, 2) - comb(m2, 2))
    return 2 * (total - comb(m1, 2) - comb(m2 + 1, 2))


def _w_value(x: int, Y: Sequence[Poly], first_block: int, cfg: FamilyConfig) -> Optional[Fraction]:
    """Casoratian of Y with the first `first_block` rows in the Gamma-weighted block,
    columns theta_{x-1}..theta_{x-M}, normalised by p and q built for that shape."""
    a, b, size = cfg.alpha, cfg.beta, len(Y)
    xf = Fraction(x)
    pq = _pfrak_generic(xf, a, b, first_block, size) * _qfrak_generic(xf, a, b, size)
    if pq == 0:
        return None
    try:
        thetas = [cfg.params.theta(x - j) for j in range(1, size + 1)]
        rows = [[_rho_generic(i < first_block, j, xf, a, b, size) * y(thetas[j - 1])
                 for j in range(1, size + 1)] for i, y in enumerate(Y)]
    except ZeroDivisionError:
        return None
    return det_fraction_free(rows) / pq


def _w_det(Y: Sequence[Poly], first_block: int, cfg: FamilyConfig, bound: int) -> Poly:
    need = max(bound, 0) + 3
    points = []
    x = 0
    while len(points) < need:
        val = _w_value(x + 1, Y, first_block, cfg)
        if val is not None:
            points.append((Fraction(x), val))
        x += 1
    fit = interpolate(points[:-2])
    for xv, yv in points[-2:]:
        if fit(xv) != yv:
            raise ArithmeticError("W determinant exceeds its degree bound")
    return fit


def w_det_a(Y: Sequence[Poly], cfg: FamilyConfig) -> Poly:
    """W_a^Y for Y_0..Y_m, where Y_0..Y_{m1} sit in the Gamma-weighted block.

    The (m+1)-row determinant over theta_x..theta_{x-m} equals, up to a nonzero
    rational factor in x, the Casoratian of the enlarged shape (m1+1, m2) at x+1;
    that Casoratian is returned, as it is the polynomial of the degree law.
    """
    if len(Y) != cfg.m + 1:
        raise ValueError("W_a needs m+1 polynomials")
    Y = [_as_poly(y) for y in Y]
    return _w_det(Y, cfg.m1 + 1, cfg, w_degree_bound(Y, cfg, "a"))


def w_det_b(Y: Sequence[Poly], cfg: FamilyConfig) -> Poly:
    """W_b^Y for Y_1..Y_{m+1}, where Y_1..Y_{m1} sit in the Gamma-weighted block.

    Normalised as in w_det_a, with the enlarged shape (m1, m2+1).
    """
    if len(Y) != cfg.m + 1:
        raise ValueError("W_b needs m+1 polynomials")
    Y = [_as_poly(y) for y in Y]
    return _w_det(Y, cfg.m1, cfg, w_degree_bound(Y, cfg, "b"))


# ---------------------------------------------------------------------------
# The u-basis and theta-polynomials
# ---------------------------------------------------------------------------

def u_lambda_poly(j: int, lam, p: JacobiParams) -> Poly:
    """(x + a - lam + 1)_j (x + b + lam - j + 1)_j as a polynomial in x."""
    lam = to_rational(lam)
    X = Poly.x()
    out = pochhammer(X + (p.alpha - lam + 1), j) * pochhammer(X + (p.beta + lam - j + 1), j)
    return out if isinstance(out, Poly) else Poly([out])


def to_theta_basis(P: Poly, p: JacobiParams) -> Poly:
    """The polynomial T with T(theta_x) = P(x)."""
    theta = p.theta_poly()
    rem = P
    out = [ZERO] * (max(P.degree, 0) // 2 + 1)
    while rem.degree > 0:
        if rem.degree % 2:
            raise ValueError("polynomial is not symmetric under x -> -x-a-b-1")
        k = rem.degree // 2
        c = rem.lc()
        out[k] = c
        rem = rem - theta ** k * c
    if not rem.is_zero():
        out[0] = rem.coeff(0)
    return Poly(out)


def from_theta_basis(T: Poly, p: JacobiParams) -> Poly:
    return T.compose(p.theta_poly())


def _u_theta(s: int, p: JacobiParams) -> Poly:
    return to_theta_basis(u_lambda_poly(s, p.alpha, p), p)


@dataclass(frozen=True)
class UExpansion:
    nu: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)
    omega: Dict[Tuple[int, int], Fraction] = field(default_factory=dict)

    def nu_of(self, g: int, s: int) -> Fraction:
        return self.nu.get((g, s), ZERO)

    def omega_of(self, h: int, s: int) -> Fraction:
        return self.omega.get((h, s), ZERO)


def expand_theta_in_u(T: Poly, p: JacobiParams) -> List[Fraction]:
    """Coefficients c_s with T(theta_x) = sum c_s u_s^alpha(x)."""
    rem = T
    out = [ZERO] * (T.degree + 1)
    for s in range(T.degree, -1, -1):
        c = rem.coeff(s)
        out[s] = c
        if c:
            rem = rem - _u_theta(s, p) * c
    if not rem.is_zero():
        raise ArithmeticError("u-basis expansion left a remainder")
    return out


def expand_in_u(cfg: FamilyConfig) -> UExpansion:
    nu, omega = {}, {}
    for g, R in zip(cfg.G, cfg.R):
        for s, c in enumerate(expand_theta_in_u(R, cfg.params)):
            nu[(g, s)] = c
    for h, S in zip(cfg.H, cfg.S):
        for s, c in enumerate(expand_theta_in_u(S, cfg.params)):
            omega[(h, s)] = c
    return UExpansion(nu, omega)
