"""Exact arithmetic: rationals, univariate polynomials, the formal value ring
Q[u, v], rational functions in a perturbation symbol, and dense linear algebra.

Every object here is immutable. Rationals are plain ``fractions.Fraction``.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rational(value) -> Fraction:
    """Coerce int / str / Fraction into a Fraction ("p/q" strings accepted)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {value!r} to an exact rational")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def is_integer(q) -> bool:
    return Fraction(q).denominator == 1


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------

class Poly:
    """Univariate polynomial with Fraction coefficients, ascending order.

    The zero polynomial has an empty coefficient tuple and degree -1
    (used as the minus-infinity sentinel).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def _raw(cls, cs: List[Fraction]) -> "Poly":
        # trusted constructor: cs already Fractions
        while cs and cs[-1] == 0:
            cs.pop()
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", tuple(cs))
        return obj

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def linear(cls, a, b) -> "Poly":
        """a + b*X"""
        return cls([a, b])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else ZERO

    def coeff(self, k: int) -> Fraction:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return ZERO

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly([{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mon = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            if mon and c == 1:
                terms.append(mon)
            elif mon:
                terms.append(f"({format_rational(c)})*{mon}")
            else:
                terms.append(format_rational(c))
        return " + ".join(terms)

    @staticmethod
    def _coerce(other) -> Optional["Poly"]:
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly([other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                return Poly._raw([])
            return Poly._raw([c * other for c in self.coeffs])
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly._raw([])
        out = [ZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly([1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c) -> "Poly":
        return self * to_rational(c)

    def __call__(self, x):
        """Horner evaluation; x may be any ring element supporting + and *."""
        if not self.coeffs:
            return ZERO if isinstance(x, (int, Fraction)) else x * 0
        acc = self.coeffs[-1]
        if isinstance(x, (int, Fraction)):
            for c in reversed(self.coeffs[:-1]):
                acc = acc * x + c
            return acc
        acc = x * 0 + acc
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def deriv(self, times: int = 1) -> "Poly":
        cs = list(self.coeffs)
        for _ in range(times):
            cs = [k * cs[k] for k in range(1, len(cs))]
        return Poly._raw(cs)

    def integral(self) -> "Poly":
        """Antiderivative vanishing at 0."""
        return Poly._raw([ZERO] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly._raw([])
        for c in reversed(self.coeffs):
            acc = acc * inner + c
        return acc

    def taylor_at(self, a) -> List[Fraction]:
        """Coefficients of self in powers of (X - a)."""
        return list(self.compose(Poly([a, 1])).coeffs)

    def divmod(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lc()
        if len(rem) - 1 < dq:
            return Poly._raw([]), self
        quot = [ZERO] * (len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lead
            quot[k] = c
            if c:
                for i, oc in enumerate(other.coeffs):
                    rem[k + i] -= c * oc
        return Poly._raw(quot), Poly._raw(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self * (1 / self.lc())

    def valuation(self) -> int:
        """Order of vanishing at 0 (the zero polynomial gets a huge sentinel)."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return 1 << 30

    def shift_down(self, k: int) -> "Poly":
        """Divide by X^k, assuming exactness."""
        return Poly._raw(list(self.coeffs[k:]))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def pochhammer_poly(shift, n: int) -> Poly:
    """(X + shift)_n as a polynomial in X."""
    out = Poly([1])
    shift = to_rational(shift)
    for k in range(n):
        out = out * Poly([shift + k, 1])
    return out


def interpolate(points: Sequence[Tuple[Fraction, Fraction]]) -> Poly:
    """Newton interpolation through the given (x, y) pairs."""
    xs = [to_rational(p[0]) for p in points]
    coef = [to_rational(p[1]) for p in points]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = Poly._raw([])
    for i in range(n - 1, -1, -1):
        out = out * Poly([-xs[i], 1]) + coef[i]
    return out


# ---------------------------------------------------------------------------
# The formal value ring Q[u, v],  u <-> 1/Gamma(beta),  v <-> 1/Gamma(alpha)
# ---------------------------------------------------------------------------

class SymValue:
    """Element of Q[u, v] stored as {(i, j): coefficient} without zero entries."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Tuple[int, int], object]] = None):
        clean = {}
        for key, c in (terms or {}).items():
            c = to_rational(c)
            if c != 0:
                clean[(int(key[0]), int(key[1]))] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SymValue is immutable")

    @classmethod
    def const(cls, c) -> "SymValue":
        return cls({(0, 0): c})

    @classmethod
    def u(cls, c=1) -> "SymValue":
        return cls({(1, 0): c})

    @classmethod
    def v(cls, c=1) -> "SymValue":
        return cls({(0, 1): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    @staticmethod
    def _coerce(other) -> Optional["SymValue"]:
        if isinstance(other, SymValue):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return SymValue.const(other)
        return None

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out.get(k, ZERO) + c
        return SymValue(out)

    __radd__ = __add__

    def __neg__(self):
        return SymValue({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return SymValue({k: c * other for k, c in self.terms.items()})
        if not isinstance(other, SymValue):
            return NotImplemented
        out: Dict[Tuple[int, int], Fraction] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, ZERO) + c1 * c2
        return SymValue(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * (1 / to_rational(other))
        return NotImplemented

    def monomials(self) -> List[Tuple[int, int]]:
        return sorted(self.terms)

    def substitute(self, u, v) -> Fraction:
        total = ZERO
        for (i, j), c in self.terms.items():
            total += c * to_rational(u) ** i * to_rational(v) ** j
        return total

    def to_json(self) -> Dict[str, str]:
        out = {}
        for (i, j) in sorted(self.terms):
            if (i, j) == (0, 0):
                key = "1"
            else:
                key = f"u^{i}*v^{j}"
            out[key] = format_rational(self.terms[(i, j)])
        return out

    @classmethod
    def from_json(cls, data: Dict[str, str]) -> "SymValue":
        terms = {}
        for key, val in data.items():
            if key == "1":
                terms[(0, 0)] = to_rational(val)
                continue
            left, right = key.split("*")
            terms[(int(left.split("^")[1]), int(right.split("^")[1]))] = to_rational(val)
        return cls(terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "SymValue(0)"
        return "SymValue(" + " + ".join(f"{format_rational(c)}*{k}" for k, c in
                                       sorted(self.to_json().items())) + ")"


# ---------------------------------------------------------------------------
# Rational functions in the perturbation symbol eps
# ---------------------------------------------------------------------------

class DegenerateLimit(ArithmeticError):
    """Raised when a rational function in eps has a pole at eps = 0."""


class EpsFrac:
    """num(eps)/den(eps) in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly([num])
        den = Poly([1]) if den is None else (den if isinstance(den, Poly) else Poly([den]))
        if den.is_zero():
            raise ZeroDivisionError("EpsFrac with zero denominator")
        if num.is_zero():
            num, den = Poly._raw([]), Poly([1])
        elif den.degree > 0:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
        lead = den.lc()
        if lead != 1:
            num, den = num * (1 / lead), den * (1 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("EpsFrac is immutable")

    @classmethod
    def eps(cls) -> "EpsFrac":
        return cls(Poly([0, 1]))

    @staticmethod
    def _coerce(other) -> Optional["EpsFrac"]:
        if isinstance(other, EpsFrac):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return EpsFrac(Poly([other]))
        return None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return EpsFrac(self.num + o.num, self.den)
        return EpsFrac(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return EpsFrac(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return EpsFrac(self.num * other, self.den)
        if not isinstance(other, EpsFrac):
            return NotImplemented
        return EpsFrac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("EpsFrac division by zero")
        return EpsFrac(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def limit(self) -> Fraction:
        return eps_limit(self)

    def __repr__(self) -> str:
        return f"EpsFrac({self.num!r}, {self.den!r})"


def eps_limit(f: EpsFrac) -> Fraction:
    """Value at eps = 0 after cancelling the common power of eps."""
    if f.is_zero():
        return ZERO
    vn, vd = f.num.valuation(), f.den.valuation()
    if vn < vd:
        raise DegenerateLimit(f"pole of order {vd - vn} at eps = 0")
    if vn > vd:
        return ZERO
    return f.num.coeff(vn) / f.den.coeff(vd)


# ---------------------------------------------------------------------------
# Dense linear algebra
# ---------------------------------------------------------------------------

class ExactMatrix:
    """Rectangular grid of exact field elements (row-major, immutable)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        grid = tuple(tuple(row) for row in entries)
        ncols = len(grid[0]) if grid else 0
        if any(len(row) != ncols for row in grid):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", grid)
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def tolist(self) -> List[List]:
        return [list(r) for r in self.entries]

    def __matmul__(self, vec: Sequence):
        return [sum((a * b for a, b in zip(row, vec)), ZERO) for row in self.entries]


def _as_rows(M) -> List[List]:
    if isinstance(M, ExactMatrix):
        return M.tolist()
    return [list(r) for r in M]


def det_fraction_free(M) -> object:
    """Bareiss elimination; entries must form a field (Fraction or EpsFrac)."""
    a = _as_rows(M)
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return ONE
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return a[k][k] * 0
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * piv - aik * a[k][j]) / prev
        prev = piv
    return a[n - 1][n - 1] if sign == 1 else -a[n - 1][n - 1]


def det_cofactor(M) -> object:
    """Leibniz expansion; only ring operations (used for Q[u, v] entries)."""
    a = _as_rows(M)
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return ONE
    total = None
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = a[0][perm[0]]
        for i in range(1, n):
            term = term * a[i][perm[i]]
        if inv % 2:
            term = -term
        total = term if total is None else total + term
    return total


def rref(M) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over Q with least-index pivoting."""
    a = [[to_rational(x) for x in row] for row in _as_rows(M)]
    rows = len(a)
    cols = len(a[0]) if a else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def nullspace_basis(M, cols: Optional[int] = None) -> List[List[Fraction]]:
    """Basis of {x : Mx = 0}; each vector's first nonzero entry is 1."""
    a = _as_rows(M)
    ncols = len(a[0]) if a else (cols or 0)
    if not a:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [ZERO] * ncols
        vec[f] = ONE
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][f]
        lead = next(x for x in vec if x != 0)
        basis.append([x / lead for x in vec])
    return basis


def rank(M) -> int:
    a = _as_rows(M)
    if not a:
        return 0
    return len(rref(a)[1])


def solve_affine(A, b) -> Optional[Tuple[List[Fraction], List[List[Fraction]]]]:
    """Solve A x = b exactly.

    Returns (particular solution, nullspace basis) or None when inconsistent.
    Free variables are set to zero in the particular solution.
    """
    rows = _as_rows(A)
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [to_rational(bi)] for r, bi in zip(rows, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x, nullspace_basis(rows, ncols)
