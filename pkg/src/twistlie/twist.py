"""Finite-order automorphisms of based root data.

An automorphism is a signed permutation ``sigma`` of the ambient basis that
permutes the simple roots, together with a cocycle ``c`` on all roots:
the automorphism sends the root vector of ``beta`` to ``c(beta)`` times the
root vector of ``sigma(beta)``.  Only products of ``c`` around orbits enter
any formula, and those do not depend on how root vectors are normalized.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DomainError
from .exactnum import ONE, CycNumber
from .rootsys import (
    RootSystem,
    WeylElement,
    build_root_system,
    dot,
    enumerate_weyl,
    q_set,
    reflection_element,
    vadd,
)


@dataclass(frozen=True)
class BasedAutomorphism:
    rs: RootSystem
    perm: tuple[int, ...]
    signs: tuple[int, ...]
    cocycle_items: tuple[tuple[tuple[int, ...], CycNumber], ...] = field(repr=False)
    name: str = "custom"

    def __post_init__(self):
        rs = self.rs
        if sorted(self.perm) != list(range(rs.ambient_dim)) or any(s not in (1, -1) for s in self.signs):
            raise DomainError("DOMAIN", "lattice map must be a signed permutation of the ambient basis")
        simple = set(rs.simple_roots)
        if {self.apply(a) for a in rs.simple_roots} != simple:
            raise DomainError("DOMAIN", "lattice map does not permute the simple roots")
        cocycle = dict(self.cocycle_items)
        for b in rs.roots:
            if b not in cocycle or cocycle[b].is_zero():
                raise DomainError("DOMAIN", f"cocycle missing or zero at root {b}")

    @classmethod
    def create(cls, rs: RootSystem, perm, signs, cocycle: Mapping | None = None, name="custom"):
        cocycle = dict(cocycle or {})
        items = tuple(sorted((tuple(b), CycNumber.coerce(cocycle.get(tuple(b), 1))) for b in rs.roots))
        return cls(rs, tuple(perm), tuple(signs), items, name)

    @cached_property
    def cocycle(self) -> dict:
        return dict(self.cocycle_items)

    @cached_property
    def element(self) -> WeylElement:
        return WeylElement(self.perm, self.signs)

    def apply(self, v: Sequence) -> tuple:
        return self.element.apply(v)

    @property
    def matrix(self):
        return self.element.matrix

    @cached_property
    def order(self) -> int:
        g = self.element
        x, d = g, 1
        while not x.is_identity():
            x = x * g
            d += 1
        return d

    def commutes_with(self, w: WeylElement) -> bool:
        g = self.element
        return g * w == w * g


def _orbit_of(auto: BasedAutomorphism, beta: tuple) -> tuple:
    orbit = [beta]
    nxt = auto.apply(beta)
    while nxt != beta:
        orbit.append(nxt)
        nxt = auto.apply(nxt)
    return tuple(orbit)


def orbit_constant(auto: BasedAutomorphism, orbit: Sequence) -> CycNumber:
    """Product of cocycle values around an orbit listed in sigma-order."""
    value = ONE
    for b in orbit:
        value = value * auto.cocycle[tuple(b)]
    return value


@dataclass(frozen=True)
class RootOrbit:
    roots: tuple[tuple, ...]
    total: tuple  # sum of the roots in the orbit, a sigma-fixed vector
    C: CycNumber

    @property
    def size(self) -> int:
        return len(self.roots)


def orbits_of(auto: BasedAutomorphism, roots: Iterable) -> tuple[RootOrbit, ...]:
    """Partition a sigma-stable set of roots into orbits, each with orbit sum and C."""
    remaining = set(tuple(r) for r in roots)
    out = []
    for b in sorted(remaining, reverse=True):
        if b not in remaining:
            continue
        orbit = _orbit_of(auto, b)
        if not set(orbit) <= remaining:
            raise DomainError("DOMAIN", "root set is not stable under the automorphism")
        remaining -= set(orbit)
        total = orbit[0]
        for r in orbit[1:]:
            total = vadd(total, r)
        out.append(RootOrbit(orbit, total, orbit_constant(auto, orbit)))
    return tuple(out)


@dataclass(frozen=True)
class TwistClassification:
    auto: BasedAutomorphism
    orbits: tuple[RootOrbit, ...]
    delta_c: frozenset | None = None
    delta_nc: frozenset | None = None
    delta_cx: frozenset | None = None

    @property
    def rs(self) -> RootSystem:
        return self.auto.rs

    @property
    def orbit_sums(self) -> tuple:
        return tuple(o.total for o in self.orbits)

    @property
    def orbit_C(self) -> tuple:
        return tuple(o.C for o in self.orbits)

    @cached_property
    def orbit_index(self) -> dict:
        return {b: k for k, o in enumerate(self.orbits) for b in o.roots}

    def orbits_in(self, roots: Iterable) -> list[RootOrbit]:
        """Orbits contained in a sigma-stable set of positive roots."""
        roots = set(roots)
        idx = sorted({self.orbit_index[b] for b in roots})
        chosen = [self.orbits[k] for k in idx]
        if any(not set(o.roots) <= roots for o in chosen):
            raise DomainError("DOMAIN", "root set is not stable under the automorphism")
        return chosen


@lru_cache(maxsize=None)
def orbits_on_roots(rs: RootSystem, auto: BasedAutomorphism) -> TwistClassification:
    if auto.rs != rs:
        raise DomainError("DOMAIN", "automorphism belongs to a different root system")
    if {auto.apply(b) for b in rs.positive_roots} != rs.positive_set:
        raise DomainError("DOMAIN", "lattice map does not preserve the positive roots")
    orbits = orbits_of(auto, rs.positive_roots)
    if auto.order > 2:
        return TwistClassification(auto, orbits)
    c, nc, cx = set(), set(), set()
    for o in orbits:
        if o.size == 2:
            cx.update(o.roots)
        elif o.C == 1:
            c.add(o.roots[0])
        elif o.C == -1:
            nc.add(o.roots[0])
        else:
            raise DomainError("DOMAIN", f"fixed root {o.roots[0]} has C = {o.C}, expected +1 or -1")
    return TwistClassification(auto, orbits, frozenset(c), frozenset(nc), frozenset(cx))


def classify_involution_roots(rs: RootSystem, auto: BasedAutomorphism):
    if auto.order > 2:
        raise DomainError("DOMAIN", "automorphism is not an involution")
    tc = orbits_on_roots(rs, auto)
    return tc.delta_c, tc.delta_nc, tc.delta_cx


def epsilon_gamma(w: WeylElement, tc: TwistClassification) -> int:
    """(-1) to the number of orbits inside Q_w."""
    q = q_set(w, tc.rs)
    return -1 if len(tc.orbits_in(q)) % 2 else 1


@lru_cache(maxsize=None)
def weyl_fixed(rs: RootSystem, auto: BasedAutomorphism) -> tuple[WeylElement, ...]:
    """Weyl group elements commuting with the lattice map."""
    return tuple(w for w in enumerate_weyl(rs) if auto.commutes_with(w))


# ---------------------------------------------------------------------------
# matrix models for deriving cocycles


Sparse = dict  # (row, col) -> int


def _matmul(a: Sparse, b: Sparse) -> Sparse:
    out: dict = {}
    for (i, k), x in a.items():
        for (k2, j), y in b.items():
            if k == k2:
                out[(i, j)] = out.get((i, j), 0) + x * y
    return {k: v for k, v in out.items() if v}


def _transpose(a: Sparse) -> Sparse:
    return {(j, i): v for (i, j), v in a.items()}


def _scalar_ratio(image: Sparse, target: Sparse) -> Fraction:
    (pos, val), *_ = target.items()
    c = image.get(pos, 0)
    ratio = Fraction(c, val)
    if {k: Fraction(v) for k, v in image.items()} != {k: ratio * v for k, v in target.items()} or not ratio:
        raise AssertionError("automorphism does not map root vectors to root vectors")
    return ratio


def cocycle_from_model(
    rs: RootSystem,
    sigma: WeylElement,
    root_vector: Callable[[tuple], Sparse],
    lie_map: Callable[[Sparse], Sparse],
) -> dict:
    return {b: CycNumber.rational(_scalar_ratio(lie_map(root_vector(b)), root_vector(sigma.apply(b)))) for b in rs.roots}


def _gl_root_vector(beta: tuple) -> Sparse:
    i = beta.index(1)
    j = beta.index(-1)
    return {(i, j): 1}


def _signed_antidiagonal(n: int, signs: Sequence[int]) -> Sparse:
    return {(r, n - 1 - r): signs[r] for r in range(n)}


def _transpose_inverse_twist(J: Sparse) -> Callable[[Sparse], Sparse]:
    # X -> -J X^T J^{-1}; J is a signed permutation matrix so J^{-1} = J^T.
    Jt = _transpose(J)
    return lambda X: {k: -v for k, v in _matmul(_matmul(J, _transpose(X)), Jt).items()}


def gl_w0(n: int, variant: str) -> tuple[int, ...]:
    """Signs of the antidiagonal matrix defining the GL(n) twist, row by row."""
    if variant == "orthogonal":
        return (1,) * n
    if variant == "symplectic":
        if n % 2:
            raise DomainError("DOMAIN", "the symplectic twist needs even n")
        return (1,) * (n // 2) + (-1,) * (n // 2)
    raise DomainError("DOMAIN", f"unknown variant {variant!r}")


def _flip_map(n: int) -> WeylElement:
    return WeylElement(tuple(n - 1 - i for i in range(n)), (-1,) * n)


def gl_cartan_twist(n: int, variant: str = "orthogonal") -> BasedAutomorphism:
    """The transpose-inverse twist of GL(n) on the A_{n-1} data in the n-dim lattice."""
    if n < 2:
        raise DomainError("DOMAIN", "need n >= 2")
    rs = build_root_system(f"A{n - 1}")
    sigma = _flip_map(n)
    J = _signed_antidiagonal(n, gl_w0(n, variant))
    cocycle = cocycle_from_model(rs, sigma, _gl_root_vector, _transpose_inverse_twist(J))
    return BasedAutomorphism.create(rs, sigma.perm, sigma.signs, cocycle, f"gl-{variant}")


def identity_automorphism(rs: RootSystem) -> BasedAutomorphism:
    n = rs.ambient_dim
    return BasedAutomorphism.create(rs, tuple(range(n)), (1,) * n, None, "identity")


def swap_automorphism(rs: RootSystem) -> BasedAutomorphism:
    """Exchange of two isomorphic summands; all root vectors are carried to each other."""
    if len(rs.cartan_type) != 2 or rs.cartan_type[0] != rs.cartan_type[1]:
        raise DomainError("DOMAIN", "swap needs exactly two isomorphic summands")
    half = rs.ambient_dim // 2
    perm = tuple(list(range(half, 2 * half)) + list(range(half)))
    return BasedAutomorphism.create(rs, perm, (1,) * rs.ambient_dim, None, "swap")


def _so_root_vector(r: int) -> Callable[[tuple], Sparse]:
    # basis e_1..e_r, e_{-r}..e_{-1}; the split form pairs index k with 2r-1-k
    def idx(i: int, s: int) -> int:
        return i if s > 0 else 2 * r - 1 - i

    def vec(beta: tuple) -> Sparse:
        (i, si), (j, sj) = [(k, c) for k, c in enumerate(beta) if c]
        return {(idx(i, si), idx(j, -sj)): 1, (idx(j, sj), idx(i, -si)): -1}

    return vec


def diagram_flip(rs: RootSystem) -> BasedAutomorphism:
    """Pinned diagram automorphism of A_r (r >= 2), D_r (r >= 3), or the swap of A1+A1."""
    if rs.cartan_type == (("A", 1), ("A", 1)):
        return swap_automorphism(rs)
    if len(rs.cartan_type) != 1:
        raise DomainError("UNSUPPORTED", "diagram flip implemented for simple A_r, D_r and A1+A1")
    letter, r = rs.cartan_type[0]
    n = rs.ambient_dim
    if letter == "A" and r >= 2:
        sigma = _flip_map(n)
        J = _signed_antidiagonal(n, [(-1) ** k for k in range(n)])
        cocycle = cocycle_from_model(rs, sigma, _gl_root_vector, _transpose_inverse_twist(J))
    elif letter == "D" and r >= 3:
        signs = (1,) * (r - 1) + (-1,)
        sigma = WeylElement(tuple(range(r)), signs)
        swap = {(k, k) for k in range(2 * r) if k not in (r - 1, r)}
        P = {k: 1 for k in swap} | {(r - 1, r): 1, (r, r - 1): 1}
        lie_map = lambda X: _matmul(_matmul(P, X), P)
        cocycle = cocycle_from_model(rs, sigma, _so_root_vector(r), lie_map)
    else:
        raise DomainError("UNSUPPORTED", f"no diagram flip for {rs.name}")
    auto = BasedAutomorphism.create(rs, sigma.perm, sigma.signs, cocycle, "diagram-flip")
    return auto


def automorphism_from_json(rs: RootSystem, obj) -> BasedAutomorphism:
    """``{"perm": [...], "signs": [...], "cocycle": [[root, value], ...]}``; absent roots get 1."""
    try:
        perm = [int(x) for x in obj["perm"]]
        signs = [int(x) for x in obj.get("signs", [1] * len(perm))]
        cocycle = {tuple(int(c) for c in root): CycNumber.from_json(v) for root, v in obj.get("cocycle", [])}
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError("PARSE", f"bad automorphism description: {exc}") from exc
    if len(perm) != rs.ambient_dim or len(signs) != rs.ambient_dim:
        raise DomainError("DOMAIN", "lattice map has the wrong size")
    return BasedAutomorphism.create(rs, perm, signs, cocycle)


# ---------------------------------------------------------------------------
# folding of involutions


@dataclass(frozen=True)
class FoldedSystem:
    restricted_roots: tuple[tuple, ...]
    w_tau_generators: tuple[WeylElement, ...]
    w_tau: tuple[WeylElement, ...]
    wplus_reps: tuple[WeylElement, ...]
    folded_rho: tuple
    n_noncompact: int

    def folded_dim(self, lam: Sequence):
        """Weyl dimension product for the folded positive roots at the shifted weight lam."""
        value = Fraction(1)
        for b in self.restricted_roots:
            value *= Fraction(dot(lam, b)) / dot(self.folded_rho, b)
        return value


def _closure(gens: Sequence[WeylElement], dim: int) -> tuple[WeylElement, ...]:
    start = WeylElement.identity(dim)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                x = w * g
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
        frontier = nxt
    return tuple(seen)


@lru_cache(maxsize=None)
def fold(rs: RootSystem, auto: BasedAutomorphism) -> FoldedSystem:
    if auto.order > 2:
        raise DomainError("DOMAIN", "folding is implemented for involutions only")
    tc = orbits_on_roots(rs, auto)
    restricted = set()
    gens = []
    for o in tc.orbits:
        if o.size == 1:
            if o.C == 1:
                restricted.add(o.roots[0])
                gens.append(reflection_element(o.roots[0]))
            continue
        a, b = o.roots
        restricted.add(o.total)
        if dot(a, b) == 0:
            gens.append(reflection_element(a) * reflection_element(b))
        elif o.total in rs.root_set:
            gens.append(reflection_element(o.total))
        else:
            raise DomainError("UNSUPPORTED", "complex orbit with positive inner product")
    restricted_roots = tuple(sorted(restricted, reverse=True))
    folded_rho = tuple(Fraction(sum(b[i] for b in restricted_roots), 2) for i in range(rs.ambient_dim))
    w_tau = _closure(gens, rs.ambient_dim)
    reps = []
    seen = set()
    W = enumerate_weyl(rs)
    # products lose their reduced words; look elements up in the enumerated group
    canonical = {v: v for v in W}
    for w in W:
        if w in seen:
            continue
        coset = [x * w for x in w_tau]
        seen.update(coset)
        members = [canonical[v] for v in coset]
        good = [v for v in members if all(dot(v.apply(rs.rho), b) >= 0 for b in restricted_roots)]
        good.sort(key=lambda v: (v.length, v.word))
        reps.append(good[0])
    return FoldedSystem(
        restricted_roots,
        tuple(gens),
        w_tau,
        tuple(reps),
        folded_rho,
        len(tc.delta_nc),
    )


def builtin_automorphism(rs_text: str, name: str) -> BasedAutomorphism:
    """Resolve ``gl-orthogonal``, ``gl-symplectic``, ``swap``, ``diagram-flip`` or ``identity``."""
    rs = build_root_system(rs_text)
    if name in ("gl-orthogonal", "gl-symplectic"):
        if len(rs.cartan_type) != 1 or rs.cartan_type[0][0] != "A":
            raise DomainError("DOMAIN", "GL twists need a single type A system")
        return gl_cartan_twist(rs.ambient_dim, name.split("-")[1])
    if name == "swap":
        return swap_automorphism(rs)
    if name == "diagram-flip":
        return diagram_flip(rs)
    if name == "identity":
        return identity_automorphism(rs)
    raise DomainError("PARSE", f"unknown automorphism {name!r}")
