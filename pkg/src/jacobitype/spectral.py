"""Recurrence relations Q(x) q_n = sum_j gamma_{n,j} q_{n+j} and what they certify.

Band and algebra results are window certificates: coefficient vanishing is
checked exactly for every n in a finite window, not proved for all n.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .bilinear import GENERIC, SOBOLEV
from .exact import (Poly, ZERO, format_rational, is_integer, nullspace_basis, rref,
                    solve_affine, to_rational)
from .family import (FamilyConfig, QSequence, qsequence, to_theta_basis, u_lambda_poly)
from .jacobi import JacobiParams, pochhammer, poly_to_jacobi, poly_times_jacobi

Window = Tuple[int, int]


# ---------------------------------------------------------------------------
# Expansion in the q-basis
# ---------------------------------------------------------------------------

def _jacobi_to_q(vec: Sequence[Fraction], seq: QSequence) -> List[Fraction]:
    """Back-substitution: q_n has Jacobi coefficients beta_{n,j} at J_{n-j}."""
    rem = list(vec)
    m = seq.cfg.m
    out = [ZERO] * len(rem)
    for n in range(len(rem) - 1, -1, -1):
        c = rem[n]
        if c == 0:
            continue
        betas = seq.betas(n)
        c = c / betas[0]
        out[n] = c
        for j in range(1, min(m, n) + 1):
            rem[n - j] -= c * betas[j]
    return out


def expand_in_q(p: Poly, cfg: FamilyConfig) -> List[Fraction]:
    """Coefficients c_k with p = sum_k c_k q_k."""
    if p.is_zero():
        return []
    return _jacobi_to_q(poly_to_jacobi(p, cfg.params), qsequence(cfg))


def _times_q(Q: Poly, n: int, seq: QSequence) -> List[Fraction]:
    """q-coefficients of Q(x) q_n(x)."""
    vec = poly_times_jacobi(Q, seq.jacobi_coeffs(n), seq.cfg.params)
    return _jacobi_to_q(vec, seq)


# ---------------------------------------------------------------------------
# Recurrence tables
# ---------------------------------------------------------------------------

@dataclass
class RecurrenceTable:
    Q: Poly
    window: Window
    gamma: Dict[Tuple[int, int], Fraction]
    band: Optional[Tuple[int, int]] = None
    verified: Tuple[int, ...] = ()

    def get(self, n: int, j: int) -> Fraction:
        return self.gamma.get((n, j), ZERO)

    def extremes_nonzero(self) -> bool:
        """True when gamma_{n,s} and gamma_{n,r} are nonzero for every n in the window."""
        if self.band is None:
            return False
        s, r = self.band
        return all(self.get(n, s) != 0 and self.get(n, r) != 0
                   for n in range(self.window[0], self.window[1] + 1))

    def to_json(self) -> dict:
        out = {
            "Q": [format_rational(c) for c in self.Q.coeffs],
            "window": list(self.window),
            "gamma": {f"{n},{j}": format_rational(c) for (n, j), c in sorted(self.gamma.items())},
            "band": None,
            "verified_n": list(self.verified),
        }
        if self.band is not None:
            out["band"] = {"s": self.band[0], "r": self.band[1], "certificate": "window"}
        return out


def _check_window(window: Window) -> Window:
    n0, n1 = int(window[0]), int(window[1])
    if n0 < 0 or n1 < n0:
        raise ValueError(f"bad window [{n0}, {n1}]")
    return n0, n1


def _verify_row(Q: Poly, n: int, row: Dict[int, Fraction], seq: QSequence) -> bool:
    rhs = Poly([])
    for j, c in row.items():
        rhs = rhs + seq.q(n + j) * c
    return rhs == Q * seq.q(n)


def recurrence_table(Q: Poly, window: Window, cfg: FamilyConfig, checks: int = 3,
                     seed: int = 0) -> RecurrenceTable:
    """gamma_{n,j} for n in the window, re-verified by direct multiplication at a few n."""
    n0, n1 = _check_window(window)
    seq = qsequence(cfg)
    gamma: Dict[Tuple[int, int], Fraction] = {}
    rows: Dict[int, Dict[int, Fraction]] = {}
    for n in range(n0, n1 + 1):
        row = {k - n: c for k, c in enumerate(_times_q(Q, n, seq)) if c != 0}
        rows[n] = row
        for j, c in row.items():
            gamma[(n, j)] = c
    band = None
    if gamma:
        js = [j for (_, j) in gamma]
        band = (min(js), max(js))
    picks = sorted(random.Random(seed).sample(range(n0, n1 + 1), min(checks, n1 - n0 + 1)))
    for n in picks:
        if not _verify_row(Q, n, rows[n], seq):
            raise ArithmeticError(f"recurrence identity failed at n = {n}")
    return RecurrenceTable(Q, (n0, n1), gamma, band, tuple(picks))


def rational_fit(values: Sequence[Tuple[int, Fraction]], deg: int) -> Optional[Tuple[Poly, Poly]]:
    """Fit values by P(n)/R(n) with deg P, deg R <= deg using the first 2 deg + 2 points.

    Returns (P, R) when the fit also reproduces every remaining point, else None.
    """
    pts = list(values)
    need = 2 * deg + 2
    if len(pts) < need + 1:
        raise ValueError("not enough points to test a rational fit")
    rows = []
    for n, y in pts[:need]:
        n = Fraction(n)
        rows.append([n ** k for k in range(deg + 1)] + [-y * n ** k for k in range(deg + 1)])
    for vec in nullspace_basis(rows):
        P, R = Poly(vec[:deg + 1]), Poly(vec[deg + 1:])
        if R.is_zero():
            continue
        if all(R(Fraction(n)) != 0 and P(Fraction(n)) / R(Fraction(n)) == y for n, y in pts):
            return P, R
    return None


# ---------------------------------------------------------------------------
# The divisibility family and the algebra scan
# ---------------------------------------------------------------------------

def divisibility_exponents(cfg: FamilyConfig, mode: str = GENERIC) -> Tuple[int, int]:
    if mode == GENERIC:
        return max(cfg.G), max(cfg.H)
    if mode == SOBOLEV:
        a, b = cfg.alpha, cfg.beta
        if not (is_integer(a) and is_integer(b)):
            raise ValueError("Sobolev exponents need integer alpha and beta")
        return (max(max(cfg.G) - int(b) + 1, int(b)),
                max(max(cfg.H) - int(a) + 1, int(a)))
    raise ValueError(f"unknown mode {mode!r}")


def divisibility_family(max_deg: int, cfg: FamilyConfig, mode: str = GENERIC) -> List[Poly]:
    """1 and the primitives vanishing at 0 of (1+x)^p1 (1-x)^p2 x^k, up to degree max_deg."""
    p1, p2 = divisibility_exponents(cfg, mode)
    base = Poly([1, 1]) ** p1 * Poly([1, -1]) ** p2
    out = [Poly([1])]
    for k in range(max(0, max_deg - p1 - p2)):
        out.append((base * Poly.monomial(k)).integral())
    return out


def _canonical_basis(vectors: List[List[Fraction]]) -> List[Poly]:
    """Reduced echelon form with pivots at the leading coefficients, sorted by degree."""
    if not vectors:
        return []
    width = len(vectors[0])
    flipped = [list(reversed(v)) for v in vectors]
    red, _ = rref(flipped)
    polys = [Poly(list(reversed(r))) for r in red if any(r)]
    assert all(p.degree < width for p in polys)
    return sorted(polys, key=lambda p: p.degree)


def algebra_scan(max_deg: int, window: Window, cfg: FamilyConfig, margin: int = 2) -> List[Poly]:
    """Basis of {Q : deg Q <= max_deg, gamma_{n,j}(Q) = 0 for j < -max_deg, n in window}.

    The window must hold at least 2 max_deg + m + margin indices.
    """
    n0, n1 = _check_window(window)
    need = 2 * max_deg + cfg.m + margin
    if n1 - n0 + 1 < need:
        raise ValueError(f"window [{n0}, {n1}] is shorter than {need} indices")
    seq = qsequence(cfg)
    rows: List[List[Fraction]] = []
    for n in range(n0, n1 + 1):
        cols = [_times_q(Poly.monomial(k), n, seq) for k in range(max_deg + 1)]
        for j in range(-n, -max_deg):
            rows.append([col[n + j] for col in cols])
    if not rows:
        rows = [[ZERO] * (max_deg + 1)]
    return _canonical_basis(nullspace_basis(rows))


def same_span(a: Sequence[Poly], b: Sequence[Poly]) -> bool:
    from .exact import rank
    width = max([p.degree + 1 for p in list(a) + list(b)] + [1])

    def mat(ps):
        return [[p.coeff(k) for k in range(width)] for p in ps]
    ra, rb = rank(mat(a)) if a else 0, rank(mat(b)) if b else 0
    return ra == rb == (rank(mat(list(a) + list(b))) if (a or b) else 0)


# ---------------------------------------------------------------------------
# Non-existence witnesses
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    n: int
    j: int
    gamma: Fraction
    hypothesis: bool

    def to_json(self) -> dict:
        return {"n": self.n, "j": self.j, "gamma": format_rational(self.gamma),
                "hypothesis": self.hypothesis}


def shift_hypothesis(Q: Poly, cfg: FamilyConfig) -> bool:
    """Whether Q falls under the obstruction: with u the order of Q at -1 (or w at +1),
    some g in G has g - u outside G and g - u >= 0 (or the analogue for H)."""
    if Q.is_zero() or Q.degree == 0:
        return False
    u = Poly(Q.taylor_at(-1)).valuation()
    w = Poly(Q.taylor_at(1)).valuation()
    G, H = set(cfg.G), set(cfg.H)
    return (any(g - u >= 0 and g - u not in G for g in G)
            or any(h - w >= 0 and h - w not in H for h in H))


def nonexistence_witness(Q: Poly, cfg: FamilyConfig, window: Window) -> Optional[Witness]:
    """A nonzero gamma_{n,j} with j < -deg Q, or None if the window shows a clean band."""
    if Q.is_zero():
        return None
    hyp = shift_hypothesis(Q, cfg)
    table = recurrence_table(Q, window, cfg)
    for (n, j), c in sorted(table.gamma.items()):
        if j < -Q.degree and c != 0:
            return Witness(n, j, c, hyp)
    return None


# ---------------------------------------------------------------------------
# Krall-Jacobi families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KrallSpec:
    alpha: int
    beta: int
    m1: int
    m2: int
    a: Tuple[Fraction, ...]
    b: Tuple[Fraction, ...]

    def __post_init__(self):
        for name in ("alpha", "beta", "m1", "m2"):
            val = getattr(self, name)
            if isinstance(val, bool) or not is_integer(val) or val < 1:
                raise ValueError(f"{name} must be a positive integer")
            object.__setattr__(self, name, int(val))
        object.__setattr__(self, "a", tuple(to_rational(c) for c in self.a))
        object.__setattr__(self, "b", tuple(to_rational(c) for c in self.b))
        if len(self.a) != self.m1 or len(self.b) != self.m2:
            raise ValueError("need m1 values a_k and m2 values b_k")
        if self.a[0] == 0 or self.b[0] == 0:
            raise ValueError("a_0 and b_0 must be nonzero")
        if self.alpha < self.m2 or self.beta < self.m1:
            raise ValueError("need alpha >= m2 and beta >= m1")

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "m1": self.m1, "m2": self.m2,
                "a": [format_rational(c) for c in self.a],
                "b": [format_rational(c) for c in self.b]}

    @classmethod
    def from_json(cls, data) -> "KrallSpec":
        try:
            return cls(data["alpha"], data["beta"], data["m1"], data["m2"],
                       tuple(data["a"]), tuple(data["b"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed Krall specification: {exc}") from exc


def _krall_theta_poly(shift: int, k: int, coeffs: Sequence[Fraction], p: JacobiParams) -> Poly:
    """u^alpha_{shift+k-1} + sum_l (shift+k-l)_l C(k-1,l) c_{k-l-1} / ((-1)^l (shift-l)_l) u^alpha_l."""
    total = u_lambda_poly(shift + k - 1, p.alpha, p)
    for l in range(k):
        c = (Fraction(pochhammer(shift + k - l, l)) * comb(k - 1, l) * coeffs[k - l - 1]
             / ((-1) ** l * pochhammer(shift - l, l)))
        total = total + u_lambda_poly(l, p.alpha, p) * c
    return to_theta_basis(total, p)


def krall_build(spec: KrallSpec) -> FamilyConfig:
    p = JacobiParams(spec.alpha, spec.beta)
    R = {spec.beta + k - 1: _krall_theta_poly(spec.beta, k, spec.a, p).coeffs
         for k in range(1, spec.m1 + 1)}
    S = {spec.alpha + k - 1: _krall_theta_poly(spec.alpha, k, spec.b, p).coeffs
         for k in range(1, spec.m2 + 1)}
    return FamilyConfig.build(spec.alpha, spec.beta, R, S)


# ---------------------------------------------------------------------------
# Three-term recurrence detection
# ---------------------------------------------------------------------------

@dataclass
class ThreeTermVerdict:
    holds: bool
    table: RecurrenceTable
    coefficients: Dict[int, Tuple[Fraction, Fraction, Fraction]] = field(default_factory=dict)
    witness: Optional[Tuple[int, int, Fraction]] = None

    def to_json(self) -> dict:
        out = {"holds": self.holds, "window": list(self.table.window),
               "band": self.table.to_json()["band"]}
        if self.holds:
            out["abc"] = {str(n): [format_rational(c) for c in abc]
                          for n, abc in sorted(self.coefficients.items())}
        else:
            n, j, g = self.witness
            out["witness"] = {"n": n, "j": j, "gamma": format_rational(g)}
        return out


def three_term_check(cfg: FamilyConfig, window: Window) -> ThreeTermVerdict:
    """x q_n = a_n q_{n+1} + b_n q_n + c_n q_{n-1} on the window, or a witness j < -1."""
    X = Poly.x()
    table = recurrence_table(X, window, cfg)
    for (n, j), c in sorted(table.gamma.items()):
        if j < -1:
            return ThreeTermVerdict(False, table, witness=(n, j, c))
    seq = qsequence(cfg)
    abc = {}
    for n in range(table.window[0], table.window[1] + 1):
        a, b, c = table.get(n, 1), table.get(n, 0), table.get(n, -1)
        rhs = seq.q(n + 1) * a + seq.q(n) * b
        if n > 0:
            rhs = rhs + seq.q(n - 1) * c
        if rhs != X * seq.q(n):
            raise ArithmeticError(f"three-term relation failed on substitution at n = {n}")
        abc[n] = (a, b, c)
    return ThreeTermVerdict(True, table, abc)


# ---------------------------------------------------------------------------
# Fitting the point masses of the Krall-Jacobi measure
# ---------------------------------------------------------------------------

@dataclass
class MeasureFit:
    consistent: bool
    c: Tuple[Fraction, ...] = ()
    d: Tuple[Fraction, ...] = ()
    free_directions: Tuple[Tuple[Fraction, ...], ...] = ()
    verified: bool = False
    failures: Tuple[Tuple[int, int], ...] = ()

    def to_json(self) -> dict:
        def fmt(v):
            return [format_rational(x) for x in v]
        return {"consistent": self.consistent, "c": fmt(self.c), "d": fmt(self.d),
                "free_directions": [fmt(v) for v in self.free_directions],
                "verified": self.verified, "failures": [list(f) for f in self.failures]}


def _integral_part(P: Poly, cfg: FamilyConfig) -> Fraction:
    a, b = int(cfg.alpha), int(cfg.beta)
    w = Poly([1, -1]) ** (a - cfg.m2) * Poly([1, 1]) ** (b - cfg.m1)
    prim = (P * w).integral()
    return prim(1) - prim(-1)


def _mass_row(P: Poly, cfg: FamilyConfig) -> List[Fraction]:
    """Coefficients of c_0..c_{m2-1}, d_0..d_{m1-1} in the pairing of P."""
    row = [(-1) ** h * P.deriv(h)(1) for h in range(cfg.m2)]
    row += [(-1) ** h * P.deriv(h)(-1) for h in range(cfg.m1)]
    return row


def krall_pairing(p: Poly, q: Poly, cfg: FamilyConfig, c: Sequence, d: Sequence) -> Fraction:
    """Integral against (1-x)^(a-m2) (1+x)^(b-m1) plus sum c_h d1^(h) plus sum d_h d-1^(h)."""
    P = p * q
    row = _mass_row(P, cfg)
    return _integral_part(P, cfg) + sum((x * y for x, y in zip(row, list(c) + list(d))), ZERO)


def _check_krall_params(cfg: FamilyConfig) -> None:
    a, b = cfg.alpha, cfg.beta
    if not (is_integer(a) and is_integer(b) and a >= cfg.m2 and b >= cfg.m1):
        raise ValueError("measure fit needs integers alpha >= m2 and beta >= m1")


def measure_fit(cfg: FamilyConfig, fit_max: int = 6, verify_max: int = 14) -> MeasureFit:
    """Solve <<q_n, q_i>> = 0 for i < n <= fit_max, then check i < n, fit_max < n <= verify_max."""
    _check_krall_params(cfg)
    seq = qsequence(cfg)
    A, rhs = [], []
    for n in range(1, fit_max + 1):
        for i in range(n):
            P = seq.q(n) * seq.q(i)
            A.append(_mass_row(P, cfg))
            rhs.append(-_integral_part(P, cfg))
    sol = solve_affine(A, rhs)
    m2 = cfg.m2
    if sol is None:
        return MeasureFit(False)
    part, null = sol
    failures = []
    for n in range(fit_max + 1, verify_max + 1):
        for i in range(n):
            P = seq.q(n) * seq.q(i)
            row = _mass_row(P, cfg)
            ok = _integral_part(P, cfg) + sum((x * y for x, y in zip(row, part)), ZERO) == 0
            ok = ok and all(sum((x * y for x, y in zip(row, v)), ZERO) == 0 for v in null)
            if not ok:
                failures.append((n, i))
    return MeasureFit(True, tuple(part[:m2]), tuple(part[m2:]),
                      tuple(tuple(v) for v in null), not failures, tuple(failures))
