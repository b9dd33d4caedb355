"""Lefschetz numbers of tempered modules, elliptic orbital values and p-adic constants."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError
from .exactnum import ONE, CycNumber


@dataclass(frozen=True)
class EllipticDatum:
    zetas: tuple[CycNumber, ...]
    r: int
    q: int

    def __post_init__(self):
        if self.r < 0 or self.q < 0:
            raise DomainError("DOMAIN", "r and q must be nonnegative")
        for z in self.zetas:
            if z.root_of_unity_exponent() is None:
                raise DomainError("DOMAIN", f"{z} is not a root of unity")


def euler_twist(zetas: Sequence) -> CycNumber:
    value = ONE
    for z in zetas:
        value = value * (ONE - CycNumber.coerce(z))
    return value


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def lefschetz_number(d: EllipticDatum) -> CycNumber:
    return _sign(d.r) * euler_twist(d.zetas)


def gl_example(n: int) -> tuple[CycNumber, EllipticDatum]:
    """Lefschetz number for the transpose-inverse twist of GL(n) and its datum.

    The twist acts by -1 on a split part of dimension m = n // 2 (plus one for odd n).
    """
    if n < 2:
        raise DomainError("DOMAIN", "need n >= 2")
    m = n // 2
    k = m if n % 2 == 0 else m + 1
    value = CycNumber.rational(_sign(k) * 2**k)
    datum = EllipticDatum(tuple(CycNumber.rational(-1) for _ in range(k)), k, k)
    return value, datum


def orbital_value(q: int, e_tau, tr_f_star) -> CycNumber:
    return _sign(q) * CycNumber.coerce(e_tau) * CycNumber.coerce(tr_f_star)


def stable_orbital_sum(kernel_size: int, e_tau, tr_f_star) -> CycNumber:
    if kernel_size < 1:
        raise DomainError("DOMAIN", "kernel size must be positive")
    return CycNumber.coerce(e_tau) * kernel_size * CycNumber.coerce(tr_f_star)


def padic_lefschetz_trace(rep: str, q_rank: int) -> int:
    if q_rank < 0:
        raise DomainError("DOMAIN", "rank must be nonnegative")
    if rep == "trivial":
        return 1
    if rep == "steinberg":
        return _sign(q_rank)
    if rep == "other":
        return 0
    raise DomainError("PARSE", f"unknown representation kind {rep!r}")


def padic_orbital(elliptic: bool) -> int:
    return 1 if elliptic else 0
