"""Brute-force twisted conjugacy in GL(n, F_q) for small n and prime q.

Matrices are tuples of row tuples of residues.  These routines exist to check
structural statements by exhaustion, so clarity wins over speed.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass

import sympy

from ..errors import DomainError

MAX_GROUP_ORDER = 10**7

Mat = tuple


def _check_field(q: int):
    if not sympy.isprime(q) or q == 2:
        raise DomainError("UNSUPPORTED_FIELD", f"q must be an odd prime, got {q}")


def gl_order(n: int, q: int) -> int:
    order = 1
    for k in range(n):
        order *= q**n - q**k
    return order


def mat_mul(A: Mat, B: Mat, q: int) -> Mat:
    cols = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) % q for col in cols) for row in A)


def mat_det(A: Mat, q: int) -> int:
    n = len(A)
    if n == 1:
        return A[0][0] % q
    total = 0
    for j in range(n):
        minor = tuple(row[:j] + row[j + 1 :] for row in A[1:])
        total += (-1) ** j * A[0][j] * mat_det(minor, q)
    return total % q


def mat_inv(A: Mat, q: int) -> Mat:
    n = len(A)
    M = [list(A[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] % q), None)
        if p is None:
            raise DomainError("SINGULAR", "matrix is not invertible mod q")
        M[c], M[p] = M[p], M[c]
        inv = pow(M[c][c], -1, q)
        M[c] = [x * inv % q for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [(x - f * y) % q for x, y in zip(M[r], M[c])]
    return tuple(tuple(row[n:]) for row in M)


def transpose(A: Mat) -> Mat:
    return tuple(zip(*A))


def identity(n: int) -> Mat:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def w0_mod(n: int, variant: str, q: int) -> Mat:
    if variant == "orthogonal":
        signs = [1] * n
    elif variant == "symplectic" and n % 2 == 0:
        signs = [1] * (n // 2) + [-1] * (n // 2)
    else:
        raise DomainError("DOMAIN", f"no {variant} twist for n = {n}")
    return tuple(tuple(signs[i] % q if j == n - 1 - i else 0 for j in range(n)) for i in range(n))


class Twist:
    """x -> w0 (x^T)^{-1} w0^{-1} over F_q."""

    def __init__(self, n: int, q: int, variant: str):
        self.n, self.q, self.variant = n, q, variant
        self.w0 = w0_mod(n, variant, q)
        self.w0_inv = mat_inv(self.w0, q)

    def __call__(self, x: Mat) -> Mat:
        q = self.q
        return mat_mul(mat_mul(self.w0, mat_inv(transpose(x), q), q), self.w0_inv, q)

    def norm(self, x: Mat) -> Mat:
        return mat_mul(x, self(x), self.q)


def charpoly_mod(A: Mat, q: int) -> tuple[int, ...]:
    """det(lambda - A) mod q, leading coefficient first (Faddeev-LeVerrier needs division, so use sympy)."""
    lam = sympy.Symbol("lam")
    coeffs = sympy.Matrix(A).charpoly(lam).all_coeffs()
    return tuple(int(c) % q for c in coeffs)


def _poly_trim(p: list[int]) -> list[int]:
    while p and p[0] == 0:
        p = p[1:]
    return p


def _poly_mod(a: list[int], b: list[int], q: int) -> list[int]:
    a = _poly_trim([x % q for x in a])
    inv = pow(b[0], -1, q)
    while len(a) >= len(b):
        f = a[0] * inv % q
        for i in range(len(b)):
            a[i] = (a[i] - f * b[i]) % q
        a = _poly_trim(a)
    return a


def is_squarefree_mod(p: tuple[int, ...], q: int) -> bool:
    """gcd(p, p') = 1 over F_q."""
    deg = len(p) - 1
    deriv = _poly_trim([(deg - i) * c % q for i, c in enumerate(p[:-1])])
    if not deriv:
        return False
    a, b = [c % q for c in p], deriv
    while b:
        a, b = b, _poly_mod(a, b, q)
    return len(a) == 1


def _generators(n: int, q: int) -> list[Mat]:
    """diag(g, 1, ..., 1) for a primitive root g, a transvection, a transposition and an n-cycle generate GL(n, F_q)."""
    g = sympy.primitive_root(q)
    gens = []
    D = [list(r) for r in identity(n)]
    D[0][0] = g
    gens.append(tuple(map(tuple, D)))
    T = [list(r) for r in identity(n)]
    T[0][1] = 1
    gens.append(tuple(map(tuple, T)))
    swap = [[0] * n for _ in range(n)]
    for i in range(n):
        swap[i][(1 - i) if i < 2 else i] = 1
    gens.append(tuple(map(tuple, swap)))
    cycle = tuple(tuple(int(j == (i + 1) % n) for j in range(n)) for i in range(n))
    gens.append(cycle)
    return gens


def enumerate_gl(n: int, q: int) -> list[Mat]:
    out = []
    for entries in itertools.product(range(q), repeat=n * n):
        M = tuple(tuple(entries[i * n : (i + 1) * n]) for i in range(n))
        if mat_det(M, q):
            out.append(M)
    return out


@dataclass(frozen=True)
class TwistedClass:
    representative: Mat
    size: int
    norm_charpoly: tuple[int, ...]


@dataclass(frozen=True)
class TwistedClassTable:
    n: int
    q: int
    variant: str
    classes: tuple[TwistedClass, ...]
    norm_constant: bool

    @property
    def group_order(self) -> int:
        return gl_order(self.n, self.q)

    def fibers(self) -> dict[tuple[int, ...], list[TwistedClass]]:
        """Twisted classes grouped by the characteristic polynomial of their norm."""
        out: dict = defaultdict(list)
        for c in self.classes:
            out[c.norm_charpoly].append(c)
        return dict(out)

    def regular_semisimple_fibers_single(self) -> bool:
        return all(len(cs) == 1 for cp, cs in self.fibers().items() if is_squarefree_mod(cp, self.q))

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "variant": self.variant,
            "group_order": self.group_order,
            "norm_constant": self.norm_constant,
            "classes": [
                {"representative": [list(r) for r in c.representative], "size": c.size, "norm_charpoly": list(c.norm_charpoly)}
                for c in self.classes
            ],
        }


def ff_twisted_classes(n: int, q: int, variant: str = "orthogonal") -> TwistedClassTable:
    """Exhaustive partition of GL(n, F_q) under x ~ g x tau(g)^{-1}."""
    _check_field(q)
    if n not in (2, 3):
        raise DomainError("DOMAIN", "n must be 2 or 3")
    if gl_order(n, q) > MAX_GROUP_ORDER:
        raise DomainError("SIZE", "group too large for exhaustive search")
    tau = Twist(n, q, variant)
    # x -> g x tau(g)^{-1}; orbits of a generating set are orbits of the group
    moves = [(g, mat_inv(tau(g), q)) for g in _generators(n, q)]
    label: dict[Mat, int] = {}
    reps: list[Mat] = []
    sizes: list[int] = []
    for x in enumerate_gl(n, q):
        if x in label:
            continue
        k = len(reps)
        reps.append(x)
        label[x] = k
        stack = [x]
        count = 0
        while stack:
            y = stack.pop()
            count += 1
            for g, h in moves:
                z = mat_mul(mat_mul(g, y, q), h, q)
                if z not in label:
                    label[z] = k
                    stack.append(z)
        sizes.append(count)
    polys: list[set] = [set() for _ in reps]
    cache: dict[Mat, tuple] = {}
    for x, k in label.items():
        N = tau.norm(x)
        if N not in cache:
            cache[N] = charpoly_mod(N, q)
        polys[k].add(cache[N])
    constant = all(len(p) == 1 for p in polys)
    classes = tuple(TwistedClass(r, s, min(p)) for r, s, p in zip(reps, sizes, polys))
    return TwistedClassTable(n, q, variant, classes, constant)


# ---------------------------------------------------------------------------
# diagonal torus of GL(n, F_{q^2}) with the Cartan twist, in discrete-log coordinates


@dataclass(frozen=True)
class TorusShadow:
    n: int
    q: int
    torus_order: int
    fixed_order: int
    image_size: int
    fiber_sizes: frozenset[int]
    containment: bool


def torus_shadow(n: int, q: int) -> TorusShadow:
    """Check on H = diag(F_{q^2}^*)^n that h tau(h)^{-1} always satisfies k tau(k) = 1, and tabulate fibers of (t, h) -> t h^{-1} tau(h) on H^tau x H.

    F_{q^2}^* is cyclic of order N = q^2 - 1, so diagonal entries are stored as
    exponents mod N; tau reverses the entries and inverts them.
    """
    _check_field(q)
    N = q * q - 1
    if N**n > 10**6:
        raise DomainError("SIZE", "torus too large")
    tau = lambda e: tuple((-e[n - 1 - i]) % N for i in range(n))
    sub = lambda a, b: tuple((x - y) % N for x, y in zip(a, b))
    add = lambda a, b: tuple((x + y) % N for x, y in zip(a, b))
    H = list(itertools.product(range(N), repeat=n))
    containment = True
    for h in H:
        k = sub(h, tau(h))
        if any(add(k, tau(k))):
            containment = False
            break
    fixed = [t for t in H if tau(t) == t]
    image = Counter()
    for h in H:
        shift = sub(tau(h), h)
        for t in fixed:
            image[add(t, shift)] += 1
    return TorusShadow(n, q, len(H), len(fixed), len(image), frozenset(image.values()), containment)
