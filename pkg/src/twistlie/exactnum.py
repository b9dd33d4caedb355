"""Exact scalars: cyclotomic numbers, torus points and Laurent polynomials.

Rationals are :class:`fractions.Fraction`.  A :class:`CycNumber` is an element
of ``Q(zeta_N)`` stored as a coefficient vector modulo the ``N``-th cyclotomic
polynomial.  Values of different conductors are promoted to the lcm.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence, Union

from .errors import DomainError

Rational = Union[int, Fraction]
Weight = tuple  # tuple of Fraction, one entry per ambient coordinate


def as_fraction(x) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise DomainError("PARSE", f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError("PARSE", f"not a rational: {x!r}") from exc
    raise DomainError("PARSE", f"not a rational: {x!r}")


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def weight(*coords) -> Weight:
    return tuple(as_fraction(c) for c in coords)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


# ---------------------------------------------------------------------------
# cyclotomic polynomials (integer coefficient lists, low degree first)


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        coef, rem = divmod(num[k + len(den) - 1], lead)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        out[k] = coef
        for j, d in enumerate(den):
            num[k + j] -= coef * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, computed by dividing X^n - 1 by Phi_d for d | n, d < n."""
    if n < 1:
        raise DomainError("DOMAIN", "conductor must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


def euler_phi(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


@lru_cache(maxsize=None)
def _reduction_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Row j holds x^j mod Phi_n for 0 <= j < 2*phi(n)."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = []
    cur = [Fraction(0)] * deg
    if deg:
        cur[0] = Fraction(1)
    for _ in range(2 * max(deg, 1)):
        rows.append(tuple(cur))
        # multiply by x and reduce with the monic Phi_n
        top = cur[-1] if deg else Fraction(0)
        cur = [Fraction(0)] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi)]
    return tuple(rows)


@lru_cache(maxsize=None)
def _power_of_zeta(n: int, k: int) -> tuple[Fraction, ...]:
    """Coefficient vector of zeta_n^k."""
    k %= n
    deg = euler_phi(n)
    table = _reduction_table(n)
    if k < len(table):
        return table[k]
    vec = list(table[len(table) - 1])
    base = _power_of_zeta(n, 1)
    for _ in range(k - len(table) + 1):
        vec = list(_mul_vectors(n, tuple(vec), base))
    return tuple(vec) if deg else ()


def _mul_vectors(n: int, a: Sequence[Fraction], b: Sequence[Fraction]) -> tuple[Fraction, ...]:
    deg = len(a)
    prod = [Fraction(0)] * (2 * deg - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    table = _reduction_table(n)
    out = list(prod[:deg])
    for j in range(deg, len(prod)):
        c = prod[j]
        if c:
            for i, t in enumerate(table[j]):
                if t:
                    out[i] += c * t
    return tuple(out)


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


def _totient(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


@lru_cache(maxsize=None)
def _normalized_traces(n: int) -> tuple[Fraction, ...]:
    """Tr(zeta_n^j) / phi(n) for j < phi(n): these do not depend on the ambient field."""
    phi = euler_phi(n)
    out = []
    for j in range(phi):
        g = gcd(j, n)
        m = n // g
        out.append(Fraction(_mobius(m) * phi, _totient(m) * phi) if phi else Fraction(1))
    return tuple(out)


class CycNumber:
    """Element of the cyclotomic field Q(zeta_N), immutable."""

    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs: Iterable):
        coeffs = tuple(as_fraction(c) for c in coeffs)
        deg = euler_phi(N)
        if len(coeffs) > deg:
            acc = [Fraction(0)] * deg
            table = _reduction_table(N)
            for j, c in enumerate(coeffs):
                if c:
                    row = table[j] if j < len(table) else _power_of_zeta(N, j)
                    for i, t in enumerate(row):
                        acc[i] += c * t
            coeffs = tuple(acc)
        elif len(coeffs) < deg:
            coeffs = coeffs + (Fraction(0),) * (deg - len(coeffs))
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("CycNumber is immutable")

    # constructors -----------------------------------------------------------
    @classmethod
    def rational(cls, q: Rational) -> "CycNumber":
        return cls(1, (as_fraction(q),))

    @classmethod
    def zeta(cls, k: int, N: int) -> "CycNumber":
        """zeta_N^k with zeta_N = exp(2 pi i / N)."""
        if N < 1:
            raise DomainError("DOMAIN", "conductor must be positive")
        return cls(N, _power_of_zeta(N, k))

    @classmethod
    def coerce(cls, x) -> "CycNumber":
        if isinstance(x, CycNumber):
            return x
        return cls.rational(as_fraction(x))

    # conductor handling -----------------------------------------------------
    def promote(self, M: int) -> "CycNumber":
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError(f"cannot embed Q(zeta_{self.N}) into Q(zeta_{M})")
        step = M // self.N
        acc = [Fraction(0)] * euler_phi(M)
        for j, c in enumerate(self.coeffs):
            if c:
                for i, t in enumerate(_power_of_zeta(M, j * step)):
                    if t:
                        acc[i] += c * t
        return CycNumber(M, acc)

    def _align(self, other) -> tuple["CycNumber", "CycNumber"]:
        other = CycNumber.coerce(other)
        if other.N == self.N:
            return self, other
        M = lcm(self.N, other.N)
        return self.promote(M), other.promote(M)

    # predicates ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise DomainError("DOMAIN", "value is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def normalized_trace(self) -> Fraction:
        return sum((c * t for c, t in zip(self.coeffs, _normalized_traces(self.N))), Fraction(0))

    # arithmetic ---------------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, (CycNumber, int, Fraction)):
            return NotImplemented
        a, b = self._align(other)
        return CycNumber(a.N, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.N, [-x for x in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, (CycNumber, int, Fraction)):
            return NotImplemented
        return self + (-CycNumber.coerce(other))

    def __rsub__(self, other):
        return CycNumber.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNumber(self.N, [x * other for x in self.coeffs])
        if not isinstance(other, CycNumber):
            return NotImplemented
        a, b = self._align(other)
        if a.N <= 2:
            return CycNumber(a.N, (a.coeffs[0] * b.coeffs[0],))
        return CycNumber(a.N, _mul_vectors(a.N, a.coeffs, b.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "CycNumber":
        if self.is_zero():
            raise DomainError("DOMAIN", "inversion of zero")
        if self.is_rational():
            return CycNumber(self.N, [1 / self.coeffs[0]])
        # Solve (multiplication-by-self matrix) * y = e_0 exactly.
        deg = len(self.coeffs)
        cols = []
        for j in range(deg):
            basis = [Fraction(0)] * deg
            basis[j] = Fraction(1)
            cols.append(_mul_vectors(self.N, self.coeffs, basis))
        rows = [[cols[j][i] for j in range(deg)] + [Fraction(int(i == 0))] for i in range(deg)]
        for col in range(deg):
            piv = next(r for r in range(col, deg) if rows[r][col])
            rows[col], rows[piv] = rows[piv], rows[col]
            inv = 1 / rows[col][col]
            rows[col] = [v * inv for v in rows[col]]
            for r in range(deg):
                if r != col and rows[r][col]:
                    f = rows[r][col]
                    rows[r] = [v - f * w for v, w in zip(rows[r], rows[col])]
        return CycNumber(self.N, [rows[i][deg] for i in range(deg)])

    def __truediv__(self, other):
        if not isinstance(other, (CycNumber, int, Fraction)):
            return NotImplemented
        return self * CycNumber.coerce(other).inverse()

    def __rtruediv__(self, other):
        return CycNumber.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = CycNumber.rational(1)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison ---------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, (CycNumber, int, Fraction)):
            return NotImplemented
        a, b = self._align(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash(self.normalized_trace())

    # roots of unity -----------------------------------------------------------
    def root_of_unity_exponent(self) -> tuple[int, int] | None:
        """Return (k, M) with self = zeta_M^k if self is a root of unity, else None."""
        M = lcm(self.N, 2)
        for k in range(M):
            if self == CycNumber.zeta(k, M):
                return k, M
        return None

    def sqrt_root_of_unity(self) -> "CycNumber":
        found = self.root_of_unity_exponent()
        if found is None:
            raise DomainError("DOMAIN", "square root only implemented for roots of unity")
        k, M = found
        return CycNumber.zeta(k, 2 * M)

    # display / serialization --------------------------------------------------
    def to_json(self) -> dict:
        return {"N": self.N, "coeffs": [fraction_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "CycNumber":
        if isinstance(obj, (int, str)):
            return cls.rational(as_fraction(obj))
        try:
            N = int(obj["N"])
            coeffs = [as_fraction(c) for c in obj["coeffs"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError("PARSE", f"bad cyclotomic number: {obj!r}") from exc
        if N < 1:
            raise DomainError("PARSE", "conductor must be positive")
        return cls(N, coeffs)

    def __str__(self):
        if self.is_rational():
            return fraction_str(self.to_fraction())
        terms = [f"{fraction_str(c)}*z{self.N}^{j}" for j, c in enumerate(self.coeffs) if c]
        return " + ".join(terms)

    def __repr__(self):
        return f"CycNumber({self.N}, {[fraction_str(c) for c in self.coeffs]})"


ONE = CycNumber.rational(1)
ZERO = CycNumber.rational(0)


# ---------------------------------------------------------------------------
# torus points


class TorusPoint:
    """A point of the split torus: one nonzero value per ambient basis vector."""

    __slots__ = ("values",)

    def __init__(self, values: Iterable):
        vals = tuple(CycNumber.coerce(v) for v in values)
        if any(v.is_zero() for v in vals):
            raise DomainError("DOMAIN", "torus values must be invertible")
        object.__setattr__(self, "values", vals)

    def __setattr__(self, name, value):
        raise AttributeError("TorusPoint is immutable")

    @classmethod
    def identity(cls, dim: int) -> "TorusPoint":
        return cls([ONE] * dim)

    def __len__(self):
        return len(self.values)

    def __eq__(self, other):
        return isinstance(other, TorusPoint) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __mul__(self, other: "TorusPoint") -> "TorusPoint":
        if len(other) != len(self):
            raise DomainError("DOMAIN", "torus dimension mismatch")
        return TorusPoint(a * b for a, b in zip(self.values, other.values))

    def inverse(self) -> "TorusPoint":
        return TorusPoint(v.inverse() for v in self.values)

    def sqrt(self) -> "TorusPoint":
        """Coordinatewise square root; every value must be a root of unity."""
        return TorusPoint(v.sqrt_root_of_unity() for v in self.values)

    def act(self, perm: Sequence[int], signs: Sequence[int]) -> "TorusPoint":
        """Transport by the signed permutation e_i -> signs[i] e_{perm[i]}."""
        out = [None] * len(self.values)
        for i, (j, s) in enumerate(zip(perm, signs)):
            out[j] = self.values[i] if s > 0 else self.values[i].inverse()
        return TorusPoint(out)

    def to_json(self) -> list:
        return [v.to_json() for v in self.values]

    @classmethod
    def from_json(cls, obj) -> "TorusPoint":
        if not isinstance(obj, list):
            raise DomainError("PARSE", "torus point must be a JSON list")
        return cls(CycNumber.from_json(v) for v in obj)


def integral_coords(lam: Sequence) -> tuple[int, ...]:
    out = []
    for c in lam:
        c = as_fraction(c)
        if c.denominator != 1:
            raise DomainError("NON_INTEGRAL", f"non-integral exponent {lam!r}")
        out.append(c.numerator)
    return tuple(out)


def evaluate(lam: Sequence, t: TorusPoint) -> CycNumber:
    """The character value e^lam(t)."""
    coords = integral_coords(lam)
    if len(coords) != len(t):
        raise DomainError("DOMAIN", "weight and torus dimension mismatch")
    result = ONE
    for k, v in zip(coords, t.values):
        if k:
            result = result * v**k
    return result


# ---------------------------------------------------------------------------
# Laurent polynomials over a lattice


class NotDivisible(DomainError):
    def __init__(self, message="quotient is not a Laurent polynomial"):
        super().__init__("NOT_DIVISIBLE", message)


class LatticeAlgebraElement:
    """Finite sum of c_v x^v over integer vectors v, coefficients CycNumber."""

    __slots__ = ("terms", "rank")

    def __init__(self, terms: Mapping | Iterable = (), rank: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, ...], CycNumber] = {}
        for v, c in items:
            v = tuple(int(x) for x in v)
            c = CycNumber.coerce(c)
            acc[v] = acc[v] + c if v in acc else c
        clean = {v: c for v, c in acc.items() if not c.is_zero()}
        if rank is None:
            if not clean:
                raise ValueError("rank required for the zero element")
            rank = len(next(iter(clean)))
        if any(len(v) != rank for v in clean):
            raise DomainError("DOMAIN", "monomial rank mismatch")
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "rank", rank)

    def __setattr__(self, name, value):
        raise AttributeError("LatticeAlgebraElement is immutable")

    @classmethod
    def monomial(cls, v, c=1) -> "LatticeAlgebraElement":
        return cls({tuple(v): c})

    @classmethod
    def constant(cls, c, rank: int) -> "LatticeAlgebraElement":
        return cls({(0,) * rank: c}, rank=rank)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, LatticeAlgebraElement)
            and self.rank == other.rank
            and self.terms.keys() == other.terms.keys()
            and all(self.terms[k] == other.terms[k] for k in self.terms)
        )

    def __add__(self, other):
        merged = dict(self.terms)
        for v, c in other.terms.items():
            merged[v] = merged[v] + c if v in merged else c
        return LatticeAlgebraElement(merged, rank=self.rank)

    def __neg__(self):
        return LatticeAlgebraElement({v: -c for v, c in self.terms.items()}, rank=self.rank)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNumber)):
            return LatticeAlgebraElement({v: c * other for v, c in self.terms.items()}, rank=self.rank)
        acc: dict[tuple[int, ...], CycNumber] = {}
        for v, a in self.terms.items():
            for w, b in other.terms.items():
                key = tuple(x + y for x, y in zip(v, w))
                acc[key] = acc[key] + a * b if key in acc else a * b
        return LatticeAlgebraElement(acc, rank=self.rank)

    __rmul__ = __mul__

    def leading(self) -> tuple[tuple[int, ...], CycNumber]:
        v = max(self.terms)
        return v, self.terms[v]

    def evaluate(self, t: TorusPoint) -> CycNumber:
        return sum((c * evaluate(v, t) for v, c in self.terms.items()), ZERO)

    def to_json(self) -> list:
        return [[list(v), c.to_json()] for v, c in sorted(self.terms.items())]


def laurent_divide(num: LatticeAlgebraElement, den: LatticeAlgebraElement) -> LatticeAlgebraElement:
    """Exact quotient num/den, or raise NotDivisible.

    Lex-leading-term division.  A true quotient's support lies in the box
    [min_j num - min_j den, max_j num - max_j den] (Newton polytopes add), so any
    step leaving the box proves non-divisibility and the loop terminates.
    """
    if den.is_zero():
        raise DomainError("DOMAIN", "division by zero")
    rank = den.rank
    if num.is_zero():
        return LatticeAlgebraElement({}, rank=rank)
    if num.rank != rank:
        raise DomainError("DOMAIN", "monomial rank mismatch")
    lo = [min(v[j] for v in num.terms) - min(v[j] for v in den.terms) for j in range(rank)]
    hi = [max(v[j] for v in num.terms) - max(v[j] for v in den.terms) for j in range(rank)]
    lead_v, lead_c = den.leading()
    lead_inv = lead_c.inverse()
    remainder = dict(num.terms)
    quotient: dict[tuple[int, ...], CycNumber] = {}
    while remainder:
        v = max(remainder)
        step = tuple(a - b for a, b in zip(v, lead_v))
        if any(s < l or s > h for s, l, h in zip(step, lo, hi)):
            raise NotDivisible()
        coef = remainder[v] * lead_inv
        quotient[step] = coef
        for w, c in den.terms.items():
            key = tuple(a + b for a, b in zip(step, w))
            val = remainder.get(key, ZERO) - coef * c
            if val.is_zero():
                remainder.pop(key, None)
            else:
                remainder[key] = val
    return LatticeAlgebraElement(quotient, rank=rank)
