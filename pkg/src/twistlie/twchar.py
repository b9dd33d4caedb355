"""Twisted Weyl characters and traces of finite-order automorphisms.

Conventions.  A twisted element is ``h * t * tau`` with ``h, t`` torus points
and ``tau`` the automorphism.  For a sigma-fixed root-lattice weight the twisted
evaluation multiplies the torus value by a character built from orbit
constants: on the orbit sum of simple roots ``J`` it equals the orbit constant
of ``J``.  A representation datum carries its highest weight ``mu`` and the
eigenvalue ``z`` of the automorphism on the highest weight line; the extremal
weight ``w mu`` then carries ``z`` times that character at ``w mu - mu``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

from .errors import DomainError
from .exactnum import (
    ONE,
    ZERO,
    CycNumber,
    LatticeAlgebraElement,
    TorusPoint,
    as_fraction,
    evaluate,
    laurent_divide,
)
from .rootsys import RootSystem, WeylElement, q_set, vadd, vsub
from .twist import (
    BasedAutomorphism,
    RootOrbit,
    TwistClassification,
    fold,
    orbits_of,
    orbits_on_roots,
    weyl_fixed,
)


class Singular(DomainError):
    def __init__(self, message="element is not regular"):
        super().__init__("SINGULAR", message)


@dataclass(frozen=True)
class TwistedWeightDatum:
    mu: tuple
    z: CycNumber = ONE

    @classmethod
    def create(cls, tc: TwistClassification, mu: Sequence, z=1) -> "TwistedWeightDatum":
        rs = tc.rs
        mu = rs.check_weight(mu)
        if any(c.denominator != 1 for c in mu):
            raise DomainError("DOMAIN", "highest weight must have integral ambient coordinates")
        if tc.auto.apply(mu) != mu:
            raise DomainError("DOMAIN", "highest weight is not fixed by the automorphism")
        if not (rs.is_integral(mu) and rs.is_dominant(mu)):
            raise DomainError("DOMAIN", "highest weight must be dominant integral")
        z = CycNumber.coerce(z)
        if z.is_zero():
            raise DomainError("DOMAIN", "highest weight eigenvalue must be nonzero")
        return cls(mu, z)


@dataclass(frozen=True)
class TwistedElement:
    h: TorusPoint
    auto: BasedAutomorphism
    t: TorusPoint

    @classmethod
    def pure(cls, auto: BasedAutomorphism) -> "TwistedElement":
        one = TorusPoint.identity(auto.rs.ambient_dim)
        return cls(one, auto, one)

    @property
    def ht(self) -> TorusPoint:
        return self.h * self.t


# ---------------------------------------------------------------------------
# the orbit-constant character on sigma-fixed root-lattice weights


def _simple_orbits(tc: TwistClassification) -> list[tuple[list[int], CycNumber]]:
    rs = tc.rs
    index = {a: k for k, a in enumerate(rs.simple_roots)}
    out, seen = [], set()
    for a in rs.simple_roots:
        if a in seen:
            continue
        orbit = [a]
        b = tc.auto.apply(a)
        while b != a:
            orbit.append(b)
            b = tc.auto.apply(b)
        seen.update(orbit)
        C = ONE
        for b in orbit:
            C = C * tc.auto.cocycle[b]
        out.append(([index[b] for b in orbit], C))
    return out


def root_lattice_character(tc: TwistClassification, lam: Sequence) -> CycNumber:
    """Value at a sigma-fixed root-lattice weight of the character sending each simple-orbit sum to its C."""
    coords = tc.rs.simple_coordinates(lam)
    value = ONE
    for idx, C in _simple_orbits(tc):
        ks = {coords[i] for i in idx}
        if len(ks) != 1:
            raise DomainError("DOMAIN", "weight is not fixed by the automorphism")
        k = ks.pop()
        if k.denominator != 1:
            raise DomainError("DOMAIN", "weight is not in the root lattice")
        value = value * C ** int(k)
    return value


def _in_root_lattice(rs: RootSystem, lam: Sequence) -> bool:
    try:
        return all(c.denominator == 1 for c in rs.simple_coordinates(lam))
    except DomainError:
        return False


def eval_twisted(
    lam: Sequence,
    el: TwistedElement,
    tc: TwistClassification,
    datum: TwistedWeightDatum | None = None,
) -> CycNumber:
    """e^lam at the twisted element, for sigma-fixed lam in the root lattice or in mu + root lattice."""
    rs = tc.rs
    lam = rs.check_weight(lam)
    if el.auto.apply(lam) != lam:
        raise DomainError("DOMAIN", "weight is not fixed by the automorphism")
    for o in tc.orbits:
        if o.total == lam:
            return o.C * evaluate(lam, el.ht)
    if _in_root_lattice(rs, lam):
        return root_lattice_character(tc, lam) * evaluate(lam, el.ht)
    if datum is not None and _in_root_lattice(rs, vsub(lam, datum.mu)):
        return datum.z * root_lattice_character(tc, vsub(lam, datum.mu)) * evaluate(lam, el.ht)
    raise DomainError("DOMAIN", "twisted value undefined off the root lattice coset of the highest weight")


def _orbit_factor(o: RootOrbit, ht: TorusPoint) -> CycNumber:
    """C^{-1} e^{-beta_hat}(ht): the twisted value of minus the orbit sum."""
    return o.C.inverse() * evaluate(o.total, ht).inverse()


def _denominator(orbits: Sequence[RootOrbit], ht: TorusPoint) -> CycNumber:
    value = ONE
    for o in orbits:
        f = ONE - _orbit_factor(o, ht)
        if f.is_zero():
            raise Singular(f"orbit of {o.roots[0]} makes the denominator vanish")
        value = value * f
    return value


# ---------------------------------------------------------------------------
# per-(root system, automorphism) Weyl data


@dataclass(frozen=True)
class _WeylTerm:
    w: WeylElement
    sign: int  # epsilon_gamma
    q_orbits: tuple[RootOrbit, ...]
    kappa: CycNumber  # sign times product of C^{-1} over orbits in Q_w
    shift: tuple  # w rho - rho


def _positive_system_terms(
    tc: TwistClassification, positive: frozenset, orbits: Sequence[RootOrbit], elements: Sequence[WeylElement]
) -> tuple[_WeylTerm, ...]:
    index = {b: o for o in orbits for b in o.roots}
    out = []
    for w in elements:
        winv = w.inverse()
        q = {b for b in positive if winv.apply(b) not in positive}
        q_orbits = []
        for o in {id(index[b]): index[b] for b in q}.values():
            if not set(o.roots) <= q:
                raise DomainError("DOMAIN", "Q_w is not stable under the automorphism")
            q_orbits.append(o)
        q_orbits.sort(key=lambda o: o.roots)
        sign = -1 if len(q_orbits) % 2 else 1
        kappa = CycNumber.rational(sign)
        shift = (Fraction(0),) * tc.rs.ambient_dim
        for o in q_orbits:
            kappa = kappa * o.C.inverse()
            shift = vsub(shift, o.total)
        out.append(_WeylTerm(w, sign, tuple(q_orbits), kappa, shift))
    return tuple(out)


@lru_cache(maxsize=None)
def _fixed_terms(tc: TwistClassification) -> tuple[_WeylTerm, ...]:
    fixed = weyl_fixed(tc.rs, tc.auto)
    return _positive_system_terms(tc, tc.rs.positive_set, tc.orbits, fixed)


def _weyl_sum(
    tc: TwistClassification, terms: Sequence[_WeylTerm], mu: tuple, z: CycNumber, ht: TorusPoint
) -> CycNumber:
    total = ZERO
    for term in terms:
        wmu = term.w.apply(mu)
        zeta = z * root_lattice_character(tc, vsub(wmu, mu))
        total = total + term.kappa * zeta * evaluate(vadd(wmu, term.shift), ht)
    return total


def _check_el(tc: TwistClassification, el: TwistedElement):
    if el.auto != tc.auto:
        raise DomainError("DOMAIN", "element and classification use different automorphisms")


# ---------------------------------------------------------------------------
# public formulas


def verma_trace(chi: TwistedWeightDatum, el: TwistedElement, tc: TwistClassification) -> CycNumber:
    _check_el(tc, el)
    top = chi.z * evaluate(chi.mu, el.ht)
    return top / _denominator(tc.orbits, el.ht)


def twisted_numerator(rs: RootSystem, tc: TwistClassification, datum: TwistedWeightDatum, el: TwistedElement):
    """The alternating sum over sigma-commuting Weyl elements, before division."""
    _check_el(tc, el)
    return _weyl_sum(tc, _fixed_terms(tc), datum.mu, datum.z, el.ht)


def twisted_character(rs: RootSystem, tc: TwistClassification, datum: TwistedWeightDatum, el: TwistedElement):
    """Trace of h t tau on the irreducible module with highest weight datum.mu at a regular element."""
    num = twisted_numerator(rs, tc, datum, el)
    return num / _denominator(tc.orbits, el.ht)


def twisted_character_rho_form(rs, tc, datum, el) -> CycNumber:
    """Half-sum form: sum of signed e^{w(mu+rho)} over the product of (e^{b/2} - e^{-b/2}).

    Half-integral exponents are evaluated at a square root of the torus point, with
    a square root of each orbit constant; all values must be roots of unity.
    """
    _check_el(tc, el)
    ht = el.ht
    root_ht = ht.sqrt()
    half = {}
    for o in tc.orbits:
        half[frozenset(o.roots)] = o.C.sqrt_root_of_unity() * evaluate(o.total, root_ht)

    def half_value(roots: frozenset) -> CycNumber:
        # e^{v/2} for v the sum over an orbit of roots, positive or negative
        if roots in half:
            return half[roots]
        return half[frozenset(tuple(-c for c in b) for b in roots)].inverse()

    num = ZERO
    for term in _fixed_terms(tc):
        w = term.w
        wmu = w.apply(datum.mu)
        value = datum.z * root_lattice_character(tc, vsub(wmu, datum.mu)) * evaluate(wmu, ht)
        for o in tc.orbits:
            value = value * half_value(frozenset(w.apply(b) for b in o.roots))
        num = num + term.sign * value
    den = ONE
    for o in tc.orbits:
        f = half[frozenset(o.roots)] - half[frozenset(o.roots)].inverse()
        if f.is_zero():
            raise Singular()
        den = den * f
    return num / den


def _direction_exponents(vectors: Sequence[tuple], direction: Sequence) -> list[int]:
    raw = [sum((as_fraction(a) * as_fraction(b) for a, b in zip(v, direction)), Fraction(0)) for v in vectors]
    scale = 1
    for x in raw:
        scale = lcm(scale, x.denominator)
    return [int(x * scale) for x in raw]


def _poly_eval_one(coeffs: list) -> CycNumber:
    return sum(coeffs, ZERO)


def _divide_by_s_minus_one(coeffs: list) -> list:
    """Synthetic division of a polynomial (low degree first) by (s - 1); remainder must be zero."""
    n = len(coeffs) - 1
    out = [ZERO] * n
    carry = ZERO
    for k in range(n, 0, -1):
        carry = carry + coeffs[k]
        out[k - 1] = carry
    return out


def _dense(poly: dict) -> list:
    low = min(poly)
    high = max(poly)
    out = [ZERO] * (high - low + 1)
    for e, c in poly.items():
        out[e - low] = out[e - low] + c
    return out


def singular_limit(
    rs: RootSystem,
    tc: TwistClassification,
    datum: TwistedWeightDatum,
    el: TwistedElement,
    direction: Sequence | None = None,
) -> CycNumber:
    """Limit of the twisted character along h * s^direction as s -> 1, computed exactly."""
    _check_el(tc, el)
    if direction is None:
        direction = tuple(2 * x for x in rs.rho)
    direction = tuple(as_fraction(x) for x in direction)
    if tc.auto.apply(direction) != direction:
        raise DomainError("DOMAIN", "direction must be fixed by the automorphism")
    ht = el.ht
    terms = _fixed_terms(tc)
    exps_vectors = []
    coeffs = []
    for term in terms:
        wmu = term.w.apply(datum.mu)
        lam = vadd(wmu, term.shift)
        exps_vectors.append(lam)
        coeffs.append(term.kappa * datum.z * root_lattice_character(tc, vsub(wmu, datum.mu)) * evaluate(lam, ht))
    orbit_vectors = [o.total for o in tc.orbits]
    exps = _direction_exponents(exps_vectors + orbit_vectors, direction)
    num_exps, orb_exps = exps[: len(terms)], exps[len(terms):]
    num: dict = {}
    for e, c in zip(num_exps, coeffs):
        num[e] = num.get(e, ZERO) + c
    den = [ONE]
    shift = 0
    for o, k in zip(tc.orbits, orb_exps):
        c = _orbit_factor(o, ht)
        if k == 0:
            if (ONE - c).is_zero():
                raise DomainError("NON_GENERIC_DIRECTION", "direction is orthogonal to a singular orbit")
            factor = [ONE - c]
        elif k > 0:
            # 1 - c s^{-k} = s^{-k} (s^k - c)
            factor = [-c] + [ZERO] * (k - 1) + [ONE]
            shift += k
        else:
            factor = [ONE] + [ZERO] * (-k - 1) + [-c]
        prod = [ZERO] * (len(den) + len(factor) - 1)
        for i, a in enumerate(den):
            for j, b in enumerate(factor):
                prod[i + j] = prod[i + j] + a * b
        den = prod
    num = {e + shift: c for e, c in num.items()}
    num_dense = _dense(num) if num else [ZERO]
    while _poly_eval_one(den).is_zero():
        if not _poly_eval_one(num_dense).is_zero():
            raise DomainError("NON_GENERIC_DIRECTION", "pole along the chosen direction")
        den = _divide_by_s_minus_one(den)
        num_dense = _divide_by_s_minus_one(num_dense)
        if not den:
            raise DomainError("NON_GENERIC_DIRECTION", "degenerate limit")
    return _poly_eval_one(num_dense) / _poly_eval_one(den)


def trace_at_involution(rs: RootSystem, auto: BasedAutomorphism, mu: Sequence) -> Fraction:
    """Trace of the involution on the irreducible module of highest weight mu (eigenvalue 1 on the top line).

    Sum over coset representatives commuting with sigma of a sign times the
    folded dimension at w(mu + rho), divided by 2 to the number of noncompact roots.
    The sign counts orbits with constant +1 inside Q_w.
    """
    if auto.order > 2:
        raise DomainError("DOMAIN", "automorphism is not an involution")
    mu = rs.check_weight(mu)
    if auto.apply(mu) != mu:
        raise DomainError("DOMAIN", "highest weight is not fixed by the automorphism")
    if not rs.is_dominant(mu):
        raise DomainError("DOMAIN", "highest weight must be dominant")
    for b in rs.positive_roots:
        k = rs.coroot_pairing(mu, b)
        if k.denominator != 1 or k.numerator % 2:
            raise DomainError("PARITY", "pairings of the highest weight with coroots must be even")
    tc = orbits_on_roots(rs, auto)
    folded = fold(rs, auto)
    shifted = vadd(mu, rs.rho)
    total = Fraction(0)
    for w in folded.wplus_reps:
        if not auto.commutes_with(w):
            continue
        plus_orbits = sum(1 for o in tc.orbits_in(q_set(w, rs)) if o.C == 1)
        sign = -1 if plus_orbits % 2 else 1
        total += sign * folded.folded_dim(w.apply(shifted))
    return total / 2**folded.n_noncompact


def tempered_character(
    rs: RootSystem,
    tc: TwistClassification,
    w_k_subgroup: Sequence[WeylElement],
    r: int,
    chi: TwistedWeightDatum,
    el: TwistedElement,
    borel: WeylElement | None = None,
) -> CycNumber:
    """(-1)^r times the Weyl-type sum over a subgroup, relative to the positive system borel(Delta+)."""
    _check_el(tc, el)
    group = set(w_k_subgroup)
    if any(a * b not in group for a in group for b in group):
        raise DomainError("DOMAIN", "subgroup is not closed under composition")
    if borel is None:
        positive = tc.rs.positive_set
        orbits = tc.orbits
    else:
        if not tc.auto.commutes_with(borel):
            raise DomainError("DOMAIN", "Borel choice is not stable under the automorphism")
        positive = frozenset(borel.apply(b) for b in rs.positive_roots)
        orbits = orbits_of(tc.auto, positive)
    elements = [w for w in w_k_subgroup if tc.auto.commutes_with(w)]
    terms = _positive_system_terms(tc, positive, orbits, elements)
    num = _weyl_sum(tc, terms, chi.mu, chi.z, el.ht)
    sign = -1 if r % 2 else 1
    return sign * num / _denominator(orbits, el.ht)


# ---------------------------------------------------------------------------
# symbolic divisibility in the group algebra of the fixed lattice


def fixed_lattice_basis(auto: BasedAutomorphism) -> tuple[tuple[int, ...], ...]:
    """Z-basis of the sigma-fixed sublattice: one signed cycle sum per cycle of sign product +1."""
    perm, signs = auto.perm, auto.signs
    seen, basis = set(), []
    for start in range(len(perm)):
        if start in seen:
            continue
        cycle, sign_prod, coeff = [], 1, {}
        i, c = start, 1
        while i not in seen:
            seen.add(i)
            coeff[i] = c
            c *= signs[i]
            sign_prod *= signs[i]
            i = perm[i]
        if sign_prod == 1:
            vec = [0] * len(perm)
            for k, v in coeff.items():
                vec[k] = v
            basis.append(tuple(vec))
    return tuple(basis)


def fixed_coordinates(basis: Sequence[tuple], lam: Sequence) -> tuple[int, ...]:
    out = []
    for f in basis:
        k = next(i for i, x in enumerate(f) if x)
        c = as_fraction(lam[k]) / f[k]
        if c.denominator != 1:
            raise DomainError("NON_INTEGRAL", "weight is not in the fixed lattice")
        out.append(int(c))
    check = tuple(sum(c * f[i] for c, f in zip(out, basis)) for i in range(len(lam)))
    if check != tuple(as_fraction(x) for x in lam):
        raise DomainError("DOMAIN", "weight is not fixed by the automorphism")
    return tuple(out)


def numerator_divisibility(rs: RootSystem, tc: TwistClassification, datum: TwistedWeightDatum):
    """Exact quotient of the symbolic twisted numerator by the symbolic denominator.

    Monomials are written in the basis returned by :func:`fixed_lattice_basis`.
    The coefficient of x^nu in the quotient is the trace on the nu weight space.
    """
    basis = fixed_lattice_basis(tc.auto)
    r = len(basis)
    num = {}
    for term in _fixed_terms(tc):
        wmu = term.w.apply(datum.mu)
        key = fixed_coordinates(basis, vadd(wmu, term.shift))
        coef = term.kappa * datum.z * root_lattice_character(tc, vsub(wmu, datum.mu))
        num[key] = num.get(key, ZERO) + coef
    numerator = LatticeAlgebraElement(num, rank=r)
    denominator = LatticeAlgebraElement.constant(1, r)
    for o in tc.orbits:
        neg = tuple(-c for c in fixed_coordinates(basis, o.total))
        factor = LatticeAlgebraElement({(0,) * r: ONE, neg: -o.C.inverse()}, rank=r)
        denominator = denominator * factor
    return laurent_divide(numerator, denominator)
