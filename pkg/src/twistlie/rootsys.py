"""Classical root systems in an orthonormal ambient basis, Weyl groups and weight data.

Type ``A_{n-1}`` lives in the n-dimensional lattice of GL(n), so determinant
characters are honest weights.  Every Weyl group element of a classical type
is a signed permutation of the ambient basis, which is how elements are stored.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Sequence

from .errors import DomainError
from .exactnum import Weight, as_fraction

MAX_AMBIENT = 12
MAX_WEYL = 10**6
MAX_FREUDENTHAL_DIM = 10**4

Vector = tuple  # tuple of int or Fraction


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def vadd(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def _unit(dim: int, i: int, c=1) -> list:
    v = [0] * dim
    v[i] = c
    return v


def _summand_data(letter: str, rank: int):
    """Simple roots, positive roots and fundamental weights of one summand."""
    if letter == "A":
        dim = rank + 1
        simple = [tuple(vsub(_unit(dim, i), _unit(dim, i + 1))) for i in range(rank)]
        positive = []
        for i in range(dim):
            for j in range(i + 1, dim):
                v = [0] * dim
                v[i], v[j] = 1, -1
                positive.append(tuple(v))
        fund = [tuple(Fraction(1) if j <= i else Fraction(0) for j in range(dim)) for i in range(rank)]
        return dim, simple, positive, fund
    dim = rank
    pairs = []
    for i in range(dim):
        for j in range(i + 1, dim):
            a = [0] * dim
            a[i], a[j] = 1, -1
            b = [0] * dim
            b[i], b[j] = 1, 1
            pairs += [tuple(a), tuple(b)]
    simple = []
    for i in range(rank - 1):
        v = [0] * dim
        v[i], v[i + 1] = 1, -1
        simple.append(tuple(v))
    half = Fraction(1, 2)
    fund = [tuple(Fraction(1) if j <= i else Fraction(0) for j in range(dim)) for i in range(rank)]
    if letter == "B":
        simple.append(tuple(_unit(dim, rank - 1)))
        positive = pairs + [tuple(_unit(dim, i)) for i in range(dim)]
        fund[-1] = tuple(half for _ in range(dim))
    elif letter == "C":
        simple.append(tuple(_unit(dim, rank - 1, 2)))
        positive = pairs + [tuple(_unit(dim, i, 2)) for i in range(dim)]
    elif letter == "D":
        if rank < 2:
            raise DomainError("UNSUPPORTED", "type D needs rank >= 2")
        v = [0] * dim
        v[rank - 2], v[rank - 1] = 1, 1
        simple.append(tuple(v))
        positive = pairs
        fund[-2] = tuple(half if j < rank - 1 else -half for j in range(dim))
        fund[-1] = tuple(half for _ in range(dim))
    else:
        raise DomainError("UNSUPPORTED", f"unsupported type letter {letter!r}")
    return dim, simple, positive, fund


def parse_cartan_type(text: str) -> tuple[tuple[str, int], ...]:
    parts = [p.strip() for p in text.strip().split("+")]
    out = []
    for p in parts:
        m = re.fullmatch(r"([A-Za-z])(\d+)", p)
        if not m:
            raise DomainError("PARSE", f"bad root system summand {p!r}")
        letter, rank = m.group(1).upper(), int(m.group(2))
        if letter not in "ABCD":
            raise DomainError("UNSUPPORTED", f"unsupported type letter {letter!r}")
        if rank < 1:
            raise DomainError("DOMAIN", "rank must be at least 1")
        out.append((letter, rank))
    return tuple(out)


@dataclass(frozen=True)
class RootSystem:
    cartan_type: tuple[tuple[str, int], ...]
    ambient_dim: int
    simple_roots: tuple[Vector, ...]
    positive_roots: tuple[Vector, ...]
    fundamental_weights: tuple[Weight, ...]
    offsets: tuple[int, ...] = field(repr=False)

    @property
    def name(self) -> str:
        return "+".join(f"{l}{r}" for l, r in self.cartan_type)

    @property
    def rank(self) -> int:
        return len(self.simple_roots)

    @cached_property
    def rho(self) -> Weight:
        total = [Fraction(0)] * self.ambient_dim
        for beta in self.positive_roots:
            for i, c in enumerate(beta):
                total[i] += c
        return tuple(c / 2 for c in total)

    @cached_property
    def roots(self) -> tuple[Vector, ...]:
        return self.positive_roots + tuple(vscale(-1, b) for b in self.positive_roots)

    @cached_property
    def positive_set(self) -> frozenset:
        return frozenset(self.positive_roots)

    @cached_property
    def root_set(self) -> frozenset:
        return frozenset(self.roots)

    @staticmethod
    def pairing(u: Sequence, v: Sequence):
        return dot(u, v)

    def coroot_pairing(self, lam: Sequence, alpha: Sequence) -> Fraction:
        """<lam, alpha-check> = 2 (lam, alpha) / (alpha, alpha)."""
        return Fraction(2 * dot(lam, alpha)) / dot(alpha, alpha)

    def is_positive(self, root: Sequence) -> bool:
        return tuple(root) in self.positive_set

    def is_integral(self, lam: Sequence) -> bool:
        return all(self.coroot_pairing(lam, a).denominator == 1 for a in self.simple_roots)

    def is_dominant(self, lam: Sequence) -> bool:
        return all(self.coroot_pairing(lam, a) >= 0 for a in self.simple_roots)

    def check_weight(self, lam: Sequence) -> Weight:
        lam = tuple(as_fraction(c) for c in lam)
        if len(lam) != self.ambient_dim:
            raise DomainError("DOMAIN", f"weight must have {self.ambient_dim} coordinates")
        return lam

    def from_dynkin_labels(self, labels: Sequence) -> Weight:
        if len(labels) != self.rank:
            raise DomainError("DOMAIN", f"expected {self.rank} Dynkin labels")
        out = [Fraction(0)] * self.ambient_dim
        for a, w in zip(labels, self.fundamental_weights):
            a = as_fraction(a)
            for i, c in enumerate(w):
                out[i] += a * c
        return tuple(out)

    def dynkin_labels(self, lam: Sequence) -> tuple[Fraction, ...]:
        return tuple(self.coroot_pairing(lam, a) for a in self.simple_roots)

    def simple_coordinates(self, vec: Sequence) -> tuple[Fraction, ...]:
        """Coefficients of vec in the basis of simple roots; vec must lie in their span."""
        return _simple_coordinates(self, tuple(as_fraction(c) for c in vec))

    def reflect(self, lam: Sequence, alpha: Sequence) -> tuple:
        k = self.coroot_pairing(lam, alpha)
        return tuple(a - k * b for a, b in zip(lam, alpha))

    def dominant_conjugate(self, lam: Sequence) -> tuple:
        lam = tuple(lam)
        changed = True
        while changed:
            changed = False
            for a in self.simple_roots:
                if self.coroot_pairing(lam, a) < 0:
                    lam = self.reflect(lam, a)
                    changed = True
        return lam


@lru_cache(maxsize=None)
def _simple_coordinates(rs: RootSystem, vec: tuple) -> tuple[Fraction, ...]:
    # Gram system (S S^T) x = S v, exact; S has full row rank.
    S = rs.simple_roots
    r = len(S)
    rows = [[Fraction(dot(S[i], S[j])) for j in range(r)] + [Fraction(dot(S[i], vec))] for i in range(r)]
    for col in range(r):
        piv = next(k for k in range(col, r) if rows[k][col])
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for k in range(r):
            if k != col and rows[k][col]:
                f = rows[k][col]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[col])]
    coords = tuple(rows[i][r] for i in range(r))
    back = [sum((c * s[j] for c, s in zip(coords, S)), Fraction(0)) for j in range(len(vec))]
    if tuple(back) != tuple(vec):
        raise DomainError("DOMAIN", f"{vec!r} is not in the span of the simple roots")
    return coords


@lru_cache(maxsize=None)
def build_root_system(name) -> RootSystem:
    """Build from a string such as ``"A3"``, ``"A1+A1"``, ``"B2"`` or a tuple of (letter, rank)."""
    ctype = parse_cartan_type(name) if isinstance(name, str) else tuple((l.upper(), int(r)) for l, r in name)
    if not ctype:
        raise DomainError("PARSE", "empty root system")
    blocks = [_summand_data(l, r) for l, r in ctype]
    total = sum(b[0] for b in blocks)
    if total > MAX_AMBIENT:
        raise DomainError("SIZE", f"ambient dimension {total} exceeds {MAX_AMBIENT}")
    simple, positive, fund, offsets = [], [], [], []
    off = 0
    for dim, s, p, f in blocks:
        pad = lambda v, z=0: tuple([z] * off) + tuple(v) + tuple([z] * (total - off - dim))
        simple += [pad(v) for v in s]
        positive += [pad(v) for v in p]
        fund += [pad(v, Fraction(0)) for v in f]
        offsets.append(off)
        off += dim
    return RootSystem(ctype, total, tuple(simple), tuple(positive), tuple(fund), tuple(offsets))


# ---------------------------------------------------------------------------
# Weyl group


@dataclass(frozen=True)
class WeylElement:
    """Signed permutation w(e_i) = signs[i] * e_{perm[i]}, plus a reduced word."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]
    word: tuple[int, ...] = field(default=(), compare=False)
    length: int = field(default=0, compare=False)

    @classmethod
    def identity(cls, dim: int) -> "WeylElement":
        return cls(tuple(range(dim)), (1,) * dim)

    def apply(self, v: Sequence) -> tuple:
        out = [0] * len(v)
        for i, (j, s) in enumerate(zip(self.perm, self.signs)):
            out[j] = v[i] if s > 0 else -v[i]
        return tuple(out)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        """Composition: (self * other)(v) = self(other(v))."""
        perm = tuple(self.perm[other.perm[i]] for i in range(len(self.perm)))
        signs = tuple(other.signs[i] * self.signs[other.perm[i]] for i in range(len(self.perm)))
        return WeylElement(perm, signs)

    def inverse(self) -> "WeylElement":
        perm = [0] * len(self.perm)
        signs = [0] * len(self.perm)
        for i, (j, s) in enumerate(zip(self.perm, self.signs)):
            perm[j] = i
            signs[j] = s
        return WeylElement(tuple(perm), tuple(signs), tuple(reversed(self.word)), self.length)

    @property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        n = len(self.perm)
        rows = [[0] * n for _ in range(n)]
        for i, (j, s) in enumerate(zip(self.perm, self.signs)):
            rows[j][i] = s
        return tuple(tuple(r) for r in rows)

    def is_identity(self) -> bool:
        return self.perm == tuple(range(len(self.perm))) and all(s == 1 for s in self.signs)


def reflection_element(alpha: Sequence) -> WeylElement:
    """s_alpha for a classical root alpha, as a signed permutation."""
    n = len(alpha)
    support = [i for i, c in enumerate(alpha) if c]
    perm, signs = list(range(n)), [1] * n
    if len(support) == 1:
        signs[support[0]] = -1
    elif len(support) == 2:
        i, j = support
        perm[i], perm[j] = j, i
        s = -1 if alpha[i] * alpha[j] > 0 else 1
        signs[i] = signs[j] = s
    else:
        raise DomainError("DOMAIN", f"{alpha!r} is not a classical root")
    return WeylElement(tuple(perm), tuple(signs))


def weyl_order(rs: RootSystem) -> int:
    from math import factorial

    total = 1
    for letter, r in rs.cartan_type:
        if letter == "A":
            total *= factorial(r + 1)
        elif letter in "BC":
            total *= 2**r * factorial(r)
        else:
            total *= 2 ** (r - 1) * factorial(r)
    return total


@lru_cache(maxsize=None)
def enumerate_weyl(rs: RootSystem) -> tuple[WeylElement, ...]:
    """All Weyl group elements in breadth-first (length) order with reduced words."""
    if weyl_order(rs) > MAX_WEYL:
        raise DomainError("SIZE", f"|W| = {weyl_order(rs)} exceeds {MAX_WEYL}")
    gens = [reflection_element(a) for a in rs.simple_roots]
    start = WeylElement.identity(rs.ambient_dim)
    seen = {start: start}
    queue = deque([start])
    order = [start]
    while queue:
        w = queue.popleft()
        for k, s in enumerate(gens):
            x = w * s
            if x not in seen:
                x = WeylElement(x.perm, x.signs, w.word + (k,), w.length + 1)
                seen[x] = x
                order.append(x)
                queue.append(x)
    return tuple(order)


def q_set(w: WeylElement, rs: RootSystem) -> frozenset:
    """Positive roots beta with w^{-1} beta negative, i.e. beta = -w(alpha) for some alpha > 0."""
    winv = w.inverse()
    return frozenset(b for b in rs.positive_roots if not rs.is_positive(winv.apply(b)))


def weyl_dim(rs: RootSystem, mu: Sequence) -> int:
    mu = rs.check_weight(mu)
    if not (rs.is_integral(mu) and rs.is_dominant(mu)):
        raise DomainError("DOMAIN", "highest weight must be dominant integral")
    shifted = vadd(mu, rs.rho)
    value = Fraction(1)
    for b in rs.positive_roots:
        value *= Fraction(dot(shifted, b)) / dot(rs.rho, b)
    assert value.denominator == 1
    return value.numerator


def _dominant_weights_below(rs: RootSystem, mu: tuple) -> list[tuple]:
    # Dominant weights below mu are reachable from mu through dominant weights
    # by subtracting one positive root at a time.
    found = {mu}
    queue = deque([mu])
    while queue:
        lam = queue.popleft()
        for b in rs.positive_roots:
            nu = vsub(lam, b)
            if nu not in found and rs.is_dominant(nu):
                found.add(nu)
                queue.append(nu)
    return sorted(found, key=lambda v: sum(rs.simple_coordinates(vsub(mu, v))))


def freudenthal_multiplicities(rs: RootSystem, mu: Sequence) -> dict[tuple, int]:
    mu = rs.check_weight(mu)
    if weyl_dim(rs, mu) > MAX_FREUDENTHAL_DIM:
        raise DomainError("SIZE", "representation too large for the multiplicity oracle")
    rho = rs.rho
    norm_top = dot(vadd(mu, rho), vadd(mu, rho))
    dominant = _dominant_weights_below(rs, mu)
    mult: dict[tuple, int] = {}

    def lookup(nu):
        return mult.get(rs.dominant_conjugate(nu), 0)

    for lam in dominant:
        if lam == mu:
            mult[lam] = 1
            continue
        total = Fraction(0)
        for b in rs.positive_roots:
            k = 1
            while True:
                nu = vadd(lam, vscale(k, b))
                m = lookup(nu)
                if m == 0 and not _below(rs, mu, rs.dominant_conjugate(nu)):
                    break
                total += m * dot(nu, b)
                k += 1
        denom = norm_top - dot(vadd(lam, rho), vadd(lam, rho))
        value = 2 * total / denom
        assert value.denominator == 1
        mult[lam] = value.numerator
    full: dict[tuple, int] = {}
    for lam, m in mult.items():
        if m:
            for nu in _orbit(rs, lam):
                full[nu] = m
    return full


def _below(rs: RootSystem, mu: tuple, nu: tuple) -> bool:
    try:
        coords = rs.simple_coordinates(vsub(mu, nu))
    except DomainError:
        return False
    return all(c >= 0 for c in coords)


def _orbit(rs: RootSystem, lam: tuple) -> set:
    seen = {lam}
    queue = deque([lam])
    while queue:
        v = queue.popleft()
        for a in rs.simple_roots:
            u = rs.reflect(v, a)
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return seen
