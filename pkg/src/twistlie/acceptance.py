"""End-to-end acceptance checks, shared by ``twistlie verify`` and the test suite.

Each check returns a :class:`CheckResult`.  Randomness comes from a seeded
:class:`random.Random`, so two runs with the same seed give the same results.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import DomainError
from .exactnum import ONE, ZERO, CycNumber, TorusPoint, evaluate
from .rootsys import build_root_system, freudenthal_multiplicities, weyl_dim
from .twist import builtin_automorphism, identity_automorphism, orbits_on_roots
from .twchar import (
    Singular,
    TwistedElement,
    TwistedWeightDatum,
    numerator_divisibility,
    singular_limit,
    trace_at_involution,
    twisted_character,
)

DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class CheckResult:
    number: int
    title: str
    passed: bool
    detail: str
    millis: int = 0

    def deterministic_view(self) -> dict:
        return {"id": self.number, "title": self.title, "passed": self.passed, "detail": self.detail}

    def to_json(self) -> dict:
        return {**self.deterministic_view(), "ms": self.millis}

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} {status} ({self.millis} ms) {self.title}: {self.detail}"


# ---------------------------------------------------------------------------
# brute-force helpers


def flip_matrix_trace(k: int, t1, t2) -> CycNumber:
    """Trace of swap o (A (x) B) on V_k (x) V_k with A, B diagonal on Sym^k, from explicit matrices."""
    d = k + 1
    A = [[ZERO] * d for _ in range(d)]
    B = [[ZERO] * d for _ in range(d)]
    for j in range(d):
        A[j][j] = t1[0] ** (k - j) * t1[1] ** j
        B[j][j] = t2[0] ** (k - j) * t2[1] ** j
    kron = [[A[i // d][j // d] * B[i % d][j % d] for j in range(d * d)] for i in range(d * d)]
    swap = [[int(j == (i % d) * d + i // d) for j in range(d * d)] for i in range(d * d)]
    total = ZERO
    for i in range(d * d):
        for j in range(d * d):
            if swap[i][j]:
                total = total + kron[j][i]
    return total


def alternating_exterior_trace(zetas) -> CycNumber:
    """Sum over i of (-1)^i tr(Lambda^i diag(zetas)), by enumerating index subsets."""
    total = ZERO
    for size in range(len(zetas) + 1):
        for subset in itertools.combinations(range(len(zetas)), size):
            term = ONE
            for i in subset:
                term = term * zetas[i]
            total = total + (-1) ** size * term
    return total


def random_root_of_unity(rng: random.Random, N: int = 12) -> CycNumber:
    return CycNumber.zeta(rng.randrange(N), N)


def random_torus_value(rng: random.Random) -> CycNumber:
    """A nonzero element of Q(zeta_12) with small coefficients."""
    while True:
        value = CycNumber(12, [rng.randint(-2, 2) for _ in range(4)])
        if not value.is_zero():
            return value


def random_fixed_weight(rng, rs, auto, max_label: int, max_dim: int, even=False):
    """A dominant weight fixed by auto with integral ambient coordinates, or None."""
    for _ in range(200):
        labels = [rng.randint(0, max_label) for _ in range(rs.rank)]
        mu = rs.from_dynkin_labels(labels)
        image = auto.apply(mu)
        total = mu
        while image != mu:
            total = tuple(a + b for a, b in zip(total, image))
            image = auto.apply(image)
        mu = total
        if any(c.denominator != 1 for c in mu):
            continue
        if even and any(rs.coroot_pairing(mu, b) % 2 for b in rs.positive_roots):
            continue
        if weyl_dim(rs, mu) <= max_dim:
            return mu
    return None


# ---------------------------------------------------------------------------
# criteria


def check_lefschetz_gl(rng, quick) -> tuple[bool, str]:
    from .cli import run
    from .lefschetz import gl_example, lefschetz_number

    bad = []
    for n in range(2, 11):
        m = n // 2
        expected = (-1) ** m * 2**m if n % 2 == 0 else (-1) ** (m + 1) * 2 ** (m + 1)
        code, payload = run(["lefschetz", "gl", "--n", str(n)])
        value, datum = gl_example(n)
        if code != 0 or payload.get("value") != str(expected):
            bad.append(f"cli n={n}")
        if value != CycNumber.rational(expected) or lefschetz_number(datum) != value:
            bad.append(f"datum n={n}")
    return not bad, "n = 2..10 exact" if not bad else "mismatch: " + ", ".join(bad)


def check_classical_reduction(rng, quick) -> tuple[bool, str]:
    count = 5 if quick else 20
    done = 0
    for name in ["A1", "A2", "A3", "B2", "C2"]:
        rs = build_root_system(name)
        auto = identity_automorphism(rs)
        tc = orbits_on_roots(rs, auto)
        for _ in range(count):
            mu = random_fixed_weight(rng, rs, auto, 4, 500)
            if mu is None:
                continue
            datum = TwistedWeightDatum.create(tc, mu)
            mults = freudenthal_multiplicities(rs, mu)
            while True:
                h = TorusPoint([random_torus_value(rng) for _ in range(rs.ambient_dim)])
                try:
                    value = twisted_character(rs, tc, datum, TwistedElement(h, auto, TorusPoint.identity(rs.ambient_dim)))
                    break
                except Singular:
                    continue
            expected = ZERO
            for nu, m in mults.items():
                expected = expected + m * evaluate(nu, h)
            if value != expected:
                return False, f"{name} mu={mu}"
            done += 1
    return True, f"{done} random cases over Q(zeta_12)"


def check_flip_trace(rng, quick) -> tuple[bool, str]:
    rs = build_root_system("A1+A1")
    auto = builtin_automorphism("A1+A1", "swap")
    tc = orbits_on_roots(rs, auto)
    one = TorusPoint.identity(4)
    for k in range(0, 7):
        datum = TwistedWeightDatum.create(tc, rs.from_dynkin_labels([k, k]))
        limit = singular_limit(rs, tc, datum, TwistedElement.pure(auto))
        if limit != CycNumber.rational(k + 1):
            return False, f"pure swap k={k}: {limit}"
        for _ in range(2 if quick else 4):
            while True:
                vals = [random_torus_value(rng) for _ in range(4)]
                try:
                    value = twisted_character(rs, tc, datum, TwistedElement(one, auto, TorusPoint(vals)))
                    break
                except Singular:
                    continue
            if value != flip_matrix_trace(k, vals[:2], vals[2:]):
                return False, f"regular point k={k}"
    return True, "k = 0..6 at the pure swap and at regular points"


def _prefix_dim_bound(n: int, prefix: list[int]) -> Fraction:
    """Lower bound for the dimension: the Weyl factors of the roots e_i - e_{n+1-j} with i, j in the prefix.

    Every Weyl factor is at least 1, and these are fixed by the prefix and increase with its entries.
    """
    bound = Fraction(1)
    k = len(prefix)
    for i in range(k):
        for j in range(k):
            gap = n - 1 - j - i  # (rho, e_i - e_{n-1-j}) with 0-based i, j
            if gap > 0:
                bound *= Fraction(prefix[i] + prefix[j] + gap, gap)
    return bound


def gl_fixed_even_weights(n: int, max_dim: int):
    """All dominant weights mu with mu_i = -mu_{n+1-i}, all coroot pairings even and dimension <= max_dim."""
    rs = build_root_system(f"A{n - 1}")
    m = n // 2
    middle = [0] if n % 2 else []
    out = []
    for parity in (0, 1) if n % 2 == 0 else (0,):

        def extend(prefix):
            if len(prefix) == m:
                mu = tuple(prefix + middle + [-x for x in reversed(prefix)])
                if weyl_dim(rs, mu) <= max_dim:
                    out.append(mu)
                return
            top = prefix[-1] if prefix else None
            x = parity
            while top is None or x <= top:
                if _prefix_dim_bound(n, prefix + [x]) > max_dim:
                    break
                extend(prefix + [x])
                x += 2

        extend([])
    return rs, sorted(out)


def check_trace_formula(rng, quick) -> tuple[bool, str]:
    sizes = range(2, 5) if quick else range(2, 6)
    checked = 0
    for n in sizes:
        variants = ["orthogonal", "symplectic"] if n % 2 == 0 else ["orthogonal"]
        rs, weights = gl_fixed_even_weights(n, 300 if quick else 2000)
        for variant in variants:
            auto = builtin_automorphism(rs.name, f"gl-{variant}")
            tc = orbits_on_roots(rs, auto)
            for mu in weights:
                folded = trace_at_involution(rs, auto, mu)
                limit = singular_limit(rs, tc, TwistedWeightDatum.create(tc, mu), TwistedElement.pure(auto))
                if limit != CycNumber.rational(folded):
                    return False, f"GL({n}) {variant} mu={mu}: {folded} vs {limit}"
                checked += 1
    return True, f"{checked} weights agree"


def check_divisibility(rng, quick) -> tuple[bool, str]:
    systems = [("A1", "gl-orthogonal"), ("A2", "diagram-flip"), ("A1+A1", "swap"), ("A3", "diagram-flip")]
    count = 3 if quick else 10
    done = 0
    for name, twist in systems:
        rs = build_root_system(name)
        auto = builtin_automorphism(name, twist)
        tc = orbits_on_roots(rs, auto)
        for _ in range(count):
            mu = random_fixed_weight(rng, rs, auto, 3, 10**4)
            z = random_root_of_unity(rng, 4)
            try:
                numerator_divisibility(rs, tc, TwistedWeightDatum.create(tc, mu, z))
            except DomainError as exc:
                return False, f"{name} mu={mu}: {exc.code}"
            done += 1
    return True, f"{done} exact quotients"


def check_finite_field(rng, quick) -> tuple[bool, str]:
    from .glntwist import ff_twisted_classes

    notes = []
    for q in (3, 5):
        for variant in ("orthogonal", "symplectic"):
            table = ff_twisted_classes(2, q, variant)
            if sum(c.size for c in table.classes) != table.group_order:
                return False, f"GL(2,F_{q}) {variant}: sizes do not sum to the order"
            if not table.norm_constant:
                return False, f"GL(2,F_{q}) {variant}: norm not constant on a class"
            if not table.regular_semisimple_fibers_single():
                return False, f"GL(2,F_{q}) {variant}: split regular semisimple fiber"
            notes.append(f"F_{q}/{variant[0]}:{len(table.classes)}")
    return True, "classes " + " ".join(notes)


def random_palindromic(rng, degree: int) -> list[int]:
    half = [rng.randint(-5, 5) for _ in range(degree // 2)]
    if degree % 2:
        body = half + half[::-1]
    else:
        body = half[:-1] + [half[-1]] + half[:-1][::-1] if half else []
    return [1] + body + [1]


def check_cross_sections(rng, quick) -> tuple[bool, str]:
    from .glntwist import charpoly, even_orthogonal_regular, fixed_group_regular

    count = 5 if quick else 25
    targets = [("symplectic", 4), ("symplectic", 6), ("odd_orthogonal", 3), ("odd_orthogonal", 5), ("odd_orthogonal", 7)]
    for variant, degree in targets:
        for _ in range(count):
            p = random_palindromic(rng, degree)
            B = fixed_group_regular(p, variant)
            if B.matrix.T * B.form * B.matrix != B.form or charpoly(B.matrix) != [Fraction(c) for c in p]:
                return False, f"{variant} {p}"
    kinds = set()
    for _ in range(3 if quick else 10):
        p = random_palindromic(rng, 4)
        B = even_orthogonal_regular(p)
        if B.matrix.T * B.gram * B.matrix != B.gram or charpoly(B.matrix) != [Fraction(c) for c in p]:
            return False, f"even orthogonal {p}"
        kinds.add("split" if B.split else "quasi-split")
    return True, f"{count} per target; degree 4 forms seen: {', '.join(sorted(kinds))}"


def check_square_classes(rng, quick) -> tuple[bool, str]:
    import sympy

    from .glntwist import square_classes, stable_class_of

    sizes = {"R": 2, "Q3": 4, "Q5": 4, "Q7": 4, "Q2": 8}
    for label, size in sizes.items():
        if len(square_classes(label)) != size:
            return False, f"|{label}| != {size}"
    trials = 20 if quick else 100
    for label in sizes:
        for _ in range(trials):
            while True:
                a = [[rng.randint(-4, 4) for _ in range(3)] for _ in range(3)]
                delta = sympy.Matrix(3, 3, lambda i, j: a[min(i, j)][max(i, j)])
                g = sympy.Matrix(3, 3, lambda i, j: rng.randint(-3, 3))
                if delta.det() != 0 and g.det() != 0:
                    break
            if stable_class_of(g.T * delta * g, label) != stable_class_of(delta, label):
                return False, f"{label}: congruence changed the class"
    return True, f"cardinalities 2/4/4/4/8; {trials} congruences per field"


def check_euler_twist(rng, quick) -> tuple[bool, str]:
    from .lefschetz import euler_twist

    for _ in range(100 if quick else 500):
        zetas = [random_root_of_unity(rng, rng.choice([1, 2, 3, 4, 6, 12])) for _ in range(rng.randint(0, 6))]
        has_one = any(z == ONE for z in zetas)
        if euler_twist(zetas).is_zero() != has_one:
            return False, f"zero test failed for {zetas}"
        if len(zetas) <= 6 and euler_twist(zetas) != alternating_exterior_trace(zetas):
            return False, f"exterior-power oracle disagrees for {zetas}"
    return True, "zero iff an eigenvalue is 1; exterior traces agree"


def check_padic_tables(rng, quick) -> tuple[bool, str]:
    from .lefschetz import padic_lefschetz_trace, padic_orbital

    ok = padic_orbital(True) == 1 and padic_orbital(False) == 0
    for q in range(0, 8):
        ok &= padic_lefschetz_trace("trivial", q) == 1
        ok &= padic_lefschetz_trace("steinberg", q) == (-1) ** q
        ok &= padic_lefschetz_trace("other", q) == 0
    return ok, "tables match" if ok else "table mismatch"


CRITERIA: list[tuple[int, str, Callable]] = [
    (1, "GL(n) Lefschetz numbers", check_lefschetz_gl),
    (2, "identity twist equals Freudenthal sum", check_classical_reduction),
    (3, "flip trace on V_k (x) V_k", check_flip_trace),
    (4, "folded trace formula equals singular limit", check_trace_formula),
    (5, "symbolic numerator divisibility", check_divisibility),
    (6, "finite-field twisted classes", check_finite_field),
    (7, "cross-sections into Sp and O", check_cross_sections),
    (8, "square classes and stable class invariance", check_square_classes),
    (9, "euler twist and exterior powers", check_euler_twist),
    (10, "p-adic constant tables", check_padic_tables),
]


def run_criterion(number: int, seed: int = DEFAULT_SEED, quick: bool = False) -> CheckResult:
    _, title, check = next(c for c in CRITERIA if c[0] == number)
    rng = random.Random(seed * 100 + number)
    start = time.perf_counter()
    try:
        passed, detail = check(rng, quick)
    except DomainError as exc:
        passed, detail = False, f"error {exc.code}: {exc.message}"
    millis = int((time.perf_counter() - start) * 1000)
    return CheckResult(number, title, passed, detail, millis)


def run_suite(suite: str = "all", seed: int = DEFAULT_SEED) -> list[CheckResult]:
    if suite not in ("all", "quick"):
        raise DomainError("PARSE", f"unknown suite {suite!r}")
    return [run_criterion(n, seed, quick=suite == "quick") for n, _, _ in CRITERIA]
