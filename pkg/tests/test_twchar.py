import random
from fractions import Fraction

import pytest

from oracles import flip_trace, gl_tensor_twisted_trace
from twistlie.errors import DomainError
from twistlie.exactnum import ONE, ZERO, CycNumber, TorusPoint, evaluate
from twistlie.rootsys import build_root_system, enumerate_weyl, freudenthal_multiplicities, vadd, vsub, weyl_dim
from twistlie.twist import builtin_automorphism, epsilon_gamma, identity_automorphism, orbits_on_roots, weyl_fixed
from twistlie.twchar import (
    Singular,
    TwistedElement,
    TwistedWeightDatum,
    eval_twisted,
    fixed_lattice_basis,
    numerator_divisibility,
    root_lattice_character,
    singular_limit,
    tempered_character,
    trace_at_involution,
    twisted_character,
    twisted_character_rho_form,
    twisted_numerator,
    verma_trace,
)

def setup(system, twist):
    rs = build_root_system(system)
    auto = builtin_automorphism(system, twist)
    return rs, auto, orbits_on_roots(rs, auto)


def fixed_weight(rs, auto, labels):
    """lam + sigma(lam) for lam with the given Dynkin labels: always fixed and integral here."""
    lam = rs.from_dynkin_labels(labels)
    return vadd(lam, auto.apply(lam))


def regular_element(rng, rs, auto, tc, datum, on="h"):
    """A TwistedElement whose denominator does not vanish."""
    one = TorusPoint.identity(rs.ambient_dim)
    while True:
        vals = [CycNumber(12, [rng.randint(-2, 2) for _ in range(4)]) for _ in range(rs.ambient_dim)]
        if any(v.is_zero() for v in vals):
            continue
        point = TorusPoint(vals)
        el = TwistedElement(point, auto, one) if on == "h" else TwistedElement(one, auto, point)
        try:
            twisted_character(rs, tc, datum, el)
        except Singular:
            continue
        return el


def test_eval_twisted_examples():
    rs, auto, tc = setup("A1", "gl-orthogonal")
    pure = TwistedElement.pure(auto)
    assert eval_twisted((0, 0), pure, tc) == ONE
    assert eval_twisted((1, -1), pure, tc) == CycNumber.rational(-1)
    rs3 = build_root_system("A2")
    ident = identity_automorphism(rs3)
    tci = orbits_on_roots(rs3, ident)
    h = TorusPoint([2, 3, CycNumber.zeta(1, 3)])
    el = TwistedElement(h, ident, TorusPoint.identity(3))
    assert eval_twisted((1, 0, -1), el, tci) == evaluate((1, 0, -1), h)
    with pytest.raises(DomainError):
        eval_twisted((1, 0), pure, tc)  # not fixed


def test_verma_trace_examples():
    rs = build_root_system("A1")
    ident = identity_automorphism(rs)
    tci = orbits_on_roots(rs, ident)
    a, b = CycNumber.rational(5), CycNumber.zeta(1, 7)
    el = TwistedElement(TorusPoint([a, b]), ident, TorusPoint.identity(2))
    for k in range(4):
        chi = TwistedWeightDatum.create(tci, (k, 0))
        assert verma_trace(chi, el, tci) == a**k / (ONE - b / a)
    rs, auto, tc = setup("A1", "gl-orthogonal")
    el = TwistedElement(TorusPoint([a, b]), auto, TorusPoint.identity(2))
    assert verma_trace(TwistedWeightDatum.create(tc, (0, 0)), el, tc) == ONE / (ONE + b / a)
    with pytest.raises(Singular):
        verma_trace(TwistedWeightDatum.create(tc, (0, 0)), TwistedElement(TorusPoint([1, -1]), auto, TorusPoint([1, 1])), tc)


@pytest.mark.parametrize("system", ["A1", "A2", "A3", "B2", "C2", "B3", "C3", "D3", "A1+A1"])
def test_identity_twist_is_the_classical_character(system):
    rng = random.Random(system)
    rs = build_root_system(system)
    auto = identity_automorphism(rs)
    tc = orbits_on_roots(rs, auto)
    checked = 0
    while checked < 20:
        mu = rs.from_dynkin_labels([rng.randint(0, 3) for _ in range(rs.rank)])
        if any(c.denominator != 1 for c in mu) or weyl_dim(rs, mu) > 500:
            continue
        datum = TwistedWeightDatum.create(tc, mu)
        el = regular_element(rng, rs, auto, tc, datum)
        expected = ZERO
        for nu, m in freudenthal_multiplicities(rs, mu).items():
            expected = expected + m * evaluate(nu, el.h)
        assert twisted_character(rs, tc, datum, el) == expected
        checked += 1


@pytest.mark.parametrize("system,twist", [("A2", "gl-orthogonal"), ("A3", "diagram-flip"), ("A1+A1", "swap")])
def test_trivial_representation_has_character_one(system, twist):
    rs, auto, tc = setup(system, twist)
    datum = TwistedWeightDatum.create(tc, (0,) * rs.ambient_dim)
    el = regular_element(random.Random(1), rs, auto, tc, datum)
    assert twisted_character(rs, tc, datum, el) == ONE


@pytest.mark.parametrize("k", range(5))
def test_swap_character_is_the_flip_trace(k):
    rng = random.Random(k)
    rs, auto, tc = setup("A1+A1", "swap")
    datum = TwistedWeightDatum.create(tc, rs.from_dynkin_labels([k, k]))
    for _ in range(3):
        el = regular_element(rng, rs, auto, tc, datum, on="t")
        vals = el.t.values
        assert twisted_character(rs, tc, datum, el) == flip_trace(k, vals[:2], vals[2:])


GL_CASES = [(2, "orthogonal"), (3, "orthogonal"), (4, "orthogonal"), (4, "symplectic"), (5, "orthogonal")]


@pytest.mark.parametrize("n,variant", GL_CASES)
def test_gl_twisted_character_matches_tensor_model(n, variant):
    """Brute-force trace of h composed with the twist on the traceless part of Sym^a V (x) Sym^a V*."""
    rng = random.Random(n)
    rs, auto, tc = setup(f"A{n - 1}", f"gl-{variant}")
    for a in range(3 if n <= 4 else 2):
        mu = (a,) + (0,) * (n - 2) + (-a,)
        datum = TwistedWeightDatum.create(tc, mu)
        el = regular_element(rng, rs, auto, tc, datum)
        assert twisted_character(rs, tc, datum, el) == gl_tensor_twisted_trace(n, a, variant, el.h.values)
        pure = singular_limit(rs, tc, datum, TwistedElement.pure(auto))
        assert pure == gl_tensor_twisted_trace(n, a, variant, [ONE] * n)


@pytest.mark.parametrize(
    "system,twist",
    [("A1", "gl-orthogonal"), ("A2", "gl-orthogonal"), ("A3", "gl-symplectic"), ("A3", "diagram-flip"), ("A1+A1", "swap")],
)
def test_rho_form_agrees(system, twist):
    rng = random.Random(system + twist)
    rs, auto, tc = setup(system, twist)
    for labels in [(0,) * rs.rank, (1,) * rs.rank, (2,) * rs.rank]:
        datum = TwistedWeightDatum.create(tc, fixed_weight(rs, auto, labels))
        # the half-sum form needs square roots, so use roots of unity only
        vals = [CycNumber.zeta(rng.randrange(12), 12) for _ in range(rs.ambient_dim)]
        el = TwistedElement(TorusPoint(vals), auto, TorusPoint.identity(rs.ambient_dim))
        try:
            direct = twisted_character(rs, tc, datum, el)
        except Singular:
            continue
        assert twisted_character_rho_form(rs, tc, datum, el) == direct


@pytest.mark.parametrize("system,twist", [("A2", "gl-orthogonal"), ("A3", "diagram-flip"), ("A3", "gl-orthogonal"), ("B2+B2", "swap")])
def test_weyl_fixed_invariance(system, twist):
    rng = random.Random(3)
    rs, auto, tc = setup(system, twist)
    mu = fixed_weight(rs, auto, [1] * rs.rank)
    datum = TwistedWeightDatum.create(tc, mu)
    el = regular_element(rng, rs, auto, tc, datum)
    value = twisted_character(rs, tc, datum, el)
    for w in weyl_fixed(rs, auto):
        moved = TwistedElement(el.h.act(w.perm, w.signs), auto, el.t)
        assert twisted_character(rs, tc, datum, moved) == value


CONSISTENT = [("A1", "gl-orthogonal"), ("A3", "gl-orthogonal"), ("A3", "gl-symplectic"), ("A3", "diagram-flip"), ("A1+A1", "swap")]


@pytest.mark.parametrize("system,twist", CONSISTENT)
def test_numerator_from_eval_twisted(system, twist):
    """Character times denominator equals the alternating sum built from eval_twisted and epsilon_gamma."""
    rng = random.Random(11)
    rs, auto, tc = setup(system, twist)
    for o in tc.orbits:
        assert root_lattice_character(tc, o.total) == o.C
    mu = fixed_weight(rs, auto, [1] * rs.rank)
    datum = TwistedWeightDatum.create(tc, mu)
    el = regular_element(rng, rs, auto, tc, datum)
    total = ZERO
    for w in weyl_fixed(rs, auto):
        lam = vsub(vadd(w.apply(mu), w.apply(rs.rho)), rs.rho)
        # datum.z is the value on e^mu, so twist only the root-lattice part
        shift = eval_twisted(vsub(lam, mu), el, tc) * datum.z * evaluate(mu, el.h)
        total = total + epsilon_gamma(w, tc) * shift
    den = ONE
    for o in tc.orbits:
        den = den * (ONE - eval_twisted(tuple(-x for x in o.total), el, tc))
    assert twisted_character(rs, tc, datum, el) * den == total
    assert twisted_numerator(rs, tc, datum, el) == total


def test_odd_gl_orbit_sums_collide():
    """For GL(3) the simple-orbit sum equals the fixed root, which carries its own C."""
    rs, auto, tc = setup("A2", "gl-orthogonal")
    fixed = next(o for o in tc.orbits if o.size == 1)
    simple = next(o for o in tc.orbits if set(o.roots) == set(rs.simple_roots))
    assert simple.total == fixed.total
    assert simple.C != fixed.C


def test_singular_limit_examples():
    rs, auto, tc = setup("A1+A1", "swap")
    for k in range(7):
        datum = TwistedWeightDatum.create(tc, rs.from_dynkin_labels([k, k]))
        assert singular_limit(rs, tc, datum, TwistedElement.pure(auto)) == CycNumber.rational(k + 1)
    rng = random.Random(5)
    datum = TwistedWeightDatum.create(tc, rs.from_dynkin_labels([2, 2]))
    el = regular_element(rng, rs, auto, tc, datum)
    assert singular_limit(rs, tc, datum, el) == twisted_character(rs, tc, datum, el)


def test_singular_limit_bad_direction():
    rs, auto, tc = setup("A1+A1", "swap")
    datum = TwistedWeightDatum.create(tc, (0, 0, 0, 0))
    with pytest.raises(DomainError) as err:
        singular_limit(rs, tc, datum, TwistedElement.pure(auto), direction=(0, 0, 0, 0))
    assert err.value.code == "NON_GENERIC_DIRECTION"
    with pytest.raises(DomainError):
        singular_limit(rs, tc, datum, TwistedElement.pure(auto), direction=(1, 0, 0, 0))


@pytest.mark.parametrize("a", [0, 2, 4, 6])
def test_gl2_trace_at_involution_matches_limit(a):
    rs, auto, tc = setup("A1", "gl-orthogonal")
    folded = trace_at_involution(rs, auto, (a, -a))
    limit = singular_limit(rs, tc, TwistedWeightDatum.create(tc, (a, -a)), TwistedElement.pure(auto))
    assert limit == CycNumber.rational(folded)


def test_trace_at_involution_examples():
    rs, auto, _ = setup("A1+A1", "swap")
    for k in (0, 2, 4, 6):
        assert trace_at_involution(rs, auto, rs.from_dynkin_labels([k, k])) == k + 1
    rs3, auto3, tc3 = setup("A2", "gl-orthogonal")
    assert trace_at_involution(rs3, auto3, (0, 0, 0)) == 1
    value = trace_at_involution(rs3, auto3, (2, 0, -2))
    assert value == 3
    assert CycNumber.rational(value) == gl_tensor_twisted_trace(3, 2, "orthogonal", [ONE] * 3)
    rs4, auto4, _ = setup("A3", "gl-symplectic")
    assert trace_at_involution(rs4, auto4, (2, 0, 0, -2)) == 14
    rs5, auto5, _ = setup("A4", "gl-orthogonal")
    assert trace_at_involution(rs5, auto5, (2, 0, 0, 0, -2)) == 10


def test_trace_at_involution_refuses_odd_pairings():
    rs, auto, _ = setup("A2", "gl-orthogonal")
    with pytest.raises(DomainError) as err:
        trace_at_involution(rs, auto, (1, 0, -1))
    assert err.value.code == "PARITY"
    with pytest.raises(DomainError):
        trace_at_involution(rs, auto, (2, 0, 0))


@pytest.mark.parametrize(
    "system,twist",
    [("A2", "diagram-flip"), ("A3", "diagram-flip"), ("A4", "diagram-flip"), ("D4", "diagram-flip"), ("A2+A2", "swap"), ("B2+B2", "swap")],
)
def test_trace_at_involution_matches_limit_beyond_gl(system, twist):
    rs, auto, tc = setup(system, twist)
    rng = random.Random(system)
    done = 0
    for _ in range(60):
        mu = fixed_weight(rs, auto, [2 * rng.randint(0, 1) for _ in range(rs.rank)])
        if any(c.denominator != 1 for c in mu) or weyl_dim(rs, mu) > 3000:
            continue
        folded = trace_at_involution(rs, auto, mu)
        assert folded > 0
        limit = singular_limit(rs, tc, TwistedWeightDatum.create(tc, mu), TwistedElement.pure(auto))
        assert limit == CycNumber.rational(folded)
        done += 1
        if done == 4:
            break
    assert done > 0


def test_tempered_character_examples():
    rng = random.Random(9)
    rs, auto, tc = setup("A3", "diagram-flip")
    datum = TwistedWeightDatum.create(tc, fixed_weight(rs, auto, [1, 2, 1]))
    el = regular_element(rng, rs, auto, tc, datum)
    full = enumerate_weyl(rs)
    assert tempered_character(rs, tc, full, 0, datum, el) == twisted_character(rs, tc, datum, el)
    assert tempered_character(rs, tc, full, 1, datum, el) == -twisted_character(rs, tc, datum, el)
    with pytest.raises(DomainError):
        tempered_character(rs, tc, full[:3], 0, datum, el)
    a1 = build_root_system("A1")
    ident = identity_automorphism(a1)
    tci = orbits_on_roots(a1, ident)
    chi = TwistedWeightDatum.create(tci, (3, 0))
    el1 = TwistedElement(TorusPoint([2, 7]), ident, TorusPoint.identity(2))
    assert tempered_character(a1, tci, [enumerate_weyl(a1)[0]], 0, chi, el1) == verma_trace(chi, el1, tci)


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_borel_sum_for_gl2(k):
    """Summing the single-term characters over the sigma-stable Borels recovers the full character."""
    rs, auto, tc = setup("A1", "gl-orthogonal")
    mu = (k, -k)
    datum = TwistedWeightDatum.create(tc, mu)
    el = TwistedElement(TorusPoint([3, CycNumber.zeta(1, 5)]), auto, TorusPoint.identity(2))
    trivial = [enumerate_weyl(rs)[0]]
    total = ZERO
    for b in weyl_fixed(rs, auto):
        bmu = b.apply(mu)
        chi = TwistedWeightDatum(bmu, datum.z * root_lattice_character(tc, vsub(bmu, mu)))
        total = total + tempered_character(rs, tc, trivial, 0, chi, el, borel=b)
    assert total == twisted_character(rs, tc, datum, el)


def test_numerator_divisibility_examples():
    a1 = build_root_system("A1")
    ident = identity_automorphism(a1)
    tci = orbits_on_roots(a1, ident)
    assert len(numerator_divisibility(a1, tci, TwistedWeightDatum.create(tci, (2, 0)))) == 3
    rs, auto, tc = setup("A1+A1", "swap")
    q = numerator_divisibility(rs, tc, TwistedWeightDatum.create(tc, rs.from_dynkin_labels([1, 1])))
    assert len(q) == 2
    unit = numerator_divisibility(rs, tc, TwistedWeightDatum.create(tc, (0, 0, 0, 0)))
    assert unit.terms == {(0,) * len(fixed_lattice_basis(auto)): ONE}


@pytest.mark.parametrize(
    "system,twist",
    [("A1", "gl-orthogonal"), ("A2", "gl-orthogonal"), ("A3", "gl-symplectic"), ("A2", "diagram-flip"), ("A3", "diagram-flip"), ("A1+A1", "swap")],
)
def test_quotient_sums_to_value_at_pure_twist(system, twist):
    """Coefficients of the symbolic quotient are weight-space traces, so they add up to the trace of the twist."""
    rs, auto, tc = setup(system, twist)
    rng = random.Random(4)
    for _ in range(3):
        mu = fixed_weight(rs, auto, [rng.randint(0, 2) for _ in range(rs.rank)])
        datum = TwistedWeightDatum.create(tc, mu, CycNumber.zeta(rng.randrange(4), 4))
        quotient = numerator_divisibility(rs, tc, datum)
        total = sum(quotient.terms.values(), ZERO)
        assert total == singular_limit(rs, tc, datum, TwistedElement.pure(auto))


def test_datum_validation():
    rs, auto, tc = setup("A2", "gl-orthogonal")
    with pytest.raises(DomainError):
        TwistedWeightDatum.create(tc, (1, 0, 0))  # not fixed
    with pytest.raises(DomainError):
        TwistedWeightDatum.create(tc, (-1, 0, 1))  # not dominant
    b2 = build_root_system("B2")
    tcb = orbits_on_roots(b2, identity_automorphism(b2))
    with pytest.raises(DomainError):
        TwistedWeightDatum.create(tcb, (Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(DomainError):
        TwistedWeightDatum.create(tc, (0, 0, 0), 0)
