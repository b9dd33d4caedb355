import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import alternating_exterior_trace
from twistlie.errors import DomainError
from twistlie.exactnum import ONE, ZERO, CycNumber
from twistlie.glntwist import square_classes
from twistlie.lefschetz import (
    EllipticDatum,
    euler_twist,
    gl_example,
    lefschetz_number,
    orbital_value,
    padic_lefschetz_trace,
    padic_orbital,
    stable_orbital_sum,
)
from twistlie.rootsys import build_root_system
from twistlie.twist import gl_cartan_twist
from twistlie.twchar import trace_at_involution

MINUS = CycNumber.rational(-1)


def test_euler_twist_examples():
    assert euler_twist([]) == ONE
    assert euler_twist([MINUS, MINUS]) == CycNumber.rational(4)
    assert euler_twist([CycNumber.zeta(1, 3), ONE, MINUS]) == ZERO


def test_lefschetz_number_examples():
    assert lefschetz_number(EllipticDatum((), 0, 0)) == ONE
    assert lefschetz_number(EllipticDatum((MINUS, MINUS), 2, 2)) == CycNumber.rational(4)


@pytest.mark.parametrize("n", range(2, 11))
def test_gl_example_datum_reproduces_value(n):
    value, datum = gl_example(n)
    m = n // 2
    expected = (-1) ** m * 2**m if n % 2 == 0 else (-1) ** (m + 1) * 2 ** (m + 1)
    assert value == CycNumber.rational(expected)
    assert lefschetz_number(datum) == value


def test_gl_example_small_values():
    assert gl_example(2)[0] == CycNumber.rational(-2)
    assert gl_example(4)[0] == CycNumber.rational(4)
    assert gl_example(5)[0] == CycNumber.rational(-8)
    with pytest.raises(DomainError):
        gl_example(1)


def test_datum_validation():
    with pytest.raises(DomainError):
        EllipticDatum((CycNumber.rational(2),), 0, 0)
    with pytest.raises(DomainError):
        EllipticDatum((), -1, 0)


roots_of_unity = st.tuples(st.integers(0, 11), st.sampled_from([1, 2, 3, 4, 6, 12])).map(
    lambda kn: CycNumber.zeta(kn[0] % kn[1], kn[1])
)


@settings(max_examples=100, deadline=None)
@given(st.lists(roots_of_unity, max_size=6))
def test_euler_twist_vanishes_exactly_at_fixed_points(zetas):
    assert euler_twist(zetas).is_zero() == any(z == ONE for z in zetas)


@pytest.mark.parametrize("size", range(0, 7))
def test_euler_twist_is_the_alternating_exterior_trace(size):
    rng = random.Random(size)
    for _ in range(5):
        zetas = [rng.choice([ONE, MINUS]) for _ in range(size)]
        assert euler_twist(zetas) == alternating_exterior_trace(zetas)


def test_orbital_value_examples():
    assert orbital_value(0, 1, 1) == ONE
    assert orbital_value(3, 0, 5) == ZERO
    assert orbital_value(1, 2, 3) == CycNumber.rational(-6)


def test_gl4_orbital_value_composes_module_outputs():
    _, datum = gl_example(4)
    e_tau = euler_twist(datum.zetas)
    rs = build_root_system("A3")
    auto = gl_cartan_twist(4)
    trace = trace_at_involution(rs, auto, (2, 0, 0, -2))
    value = orbital_value(datum.q, e_tau, CycNumber.rational(trace))
    assert value == CycNumber.rational(4 * trace)
    assert orbital_value(datum.q, e_tau, ONE) == CycNumber.rational(4)


def test_stable_orbital_sum():
    assert stable_orbital_sum(1, 3, 5) == CycNumber.rational(15)
    assert stable_orbital_sum(4, 3, 0) == ZERO
    kernel = len(square_classes("R"))
    assert kernel == 2
    e_tau = euler_twist(gl_example(2)[1].zetas)
    assert stable_orbital_sum(kernel, e_tau, ONE) == 2 * e_tau
    with pytest.raises(DomainError):
        stable_orbital_sum(0, 1, 1)


def test_padic_constants():
    for k in range(6):
        assert padic_lefschetz_trace("trivial", k) == 1
    assert padic_lefschetz_trace("steinberg", 2) == 1
    assert padic_lefschetz_trace("steinberg", 3) == -1
    assert padic_lefschetz_trace("other", 5) == 0
    with pytest.raises(DomainError):
        padic_lefschetz_trace("cuspidal", 1)
    with pytest.raises(DomainError):
        padic_lefschetz_trace("trivial", -1)
    assert padic_orbital(True) == 1 and padic_orbital(False) == 0
    assert padic_orbital(True) == padic_orbital(True)
