"""Square classes k*/(k*)^2 for Q, R, Q_p and prime fields, and congruence diagonalization."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import sympy

from ..errors import DomainError
from ..exactnum import as_fraction, fraction_str

MAX_FIELD_PRIME = 100


def squarefree_kernel(value) -> int:
    """The squarefree integer s with value = s * (rational square)."""
    x = as_fraction(value)
    if x == 0:
        raise DomainError("DOMAIN", "zero has no square class")
    n = x.numerator * x.denominator
    sign = -1 if n < 0 else 1
    kernel = 1
    for p, e in sympy.factorint(abs(n)).items():
        if e % 2:
            kernel *= p
    return sign * kernel


def is_rational_square(value) -> bool:
    x = as_fraction(value)
    return x == 0 or squarefree_kernel(x) == 1


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _least_nonresidue(p: int) -> int:
    return next(a for a in range(2, p) if pow(a, (p - 1) // 2, p) == p - 1)


@dataclass(frozen=True)
class FieldLabel:
    kind: str  # "Q", "R", "Qp" or "Fq"
    p: int = 0

    def __str__(self):
        if self.kind == "Qp":
            return f"Q{self.p}"
        if self.kind == "Fq":
            return f"F{self.p}"
        return self.kind


def parse_field(label) -> FieldLabel:
    if isinstance(label, FieldLabel):
        return label
    text = str(label).strip()
    if text in ("Q", "R"):
        return FieldLabel(text)
    match = re.fullmatch(r"(Q|F)_?(\d+)", text)
    if not match:
        raise DomainError("PARSE", f"unknown field {label!r}")
    p = int(match.group(2))
    if not sympy.isprime(p) or p > MAX_FIELD_PRIME:
        raise DomainError("UNSUPPORTED_FIELD", f"need a prime at most {MAX_FIELD_PRIME}, got {p}")
    if match.group(1) == "F" and p == 2:
        raise DomainError("UNSUPPORTED_FIELD", "characteristic 2 is not supported")
    return FieldLabel("Qp" if match.group(1) == "Q" else "Fq", p)


@dataclass(frozen=True)
class SquareClass:
    field: FieldLabel
    representative: Fraction

    def to_json(self) -> dict:
        return {"field": str(self.field), "class": fraction_str(self.representative)}

    def __str__(self):
        return fraction_str(self.representative)


_Q2_UNITS = {1: 1, 3: -5, 5: 5, 7: -1}


def _canonical(field: FieldLabel, value: Fraction) -> Fraction:
    if value == 0:
        raise DomainError("DOMAIN", "zero has no square class")
    if field.kind == "R":
        return Fraction(1 if value > 0 else -1)
    if field.kind == "Q":
        return Fraction(squarefree_kernel(value))
    p = field.p
    if field.kind == "Fq":
        if value.denominator % p == 0:
            raise DomainError("DOMAIN", f"{value} is not defined mod {p}")
        residue = value.numerator * pow(value.denominator, -1, p) % p
        if residue == 0:
            raise DomainError("DOMAIN", "zero has no square class")
        return Fraction(1 if pow(residue, (p - 1) // 2, p) == 1 else _least_nonresidue(p))
    # Q_p: valuation parity times the class of the unit part
    v = _valuation(abs(value.numerator), p) - _valuation(value.denominator, p)
    unit = value / Fraction(p) ** v
    if p == 2:
        residue = unit.numerator * pow(unit.denominator, -1, 8) % 8
        base = _Q2_UNITS[residue]
    else:
        residue = unit.numerator * pow(unit.denominator, -1, p) % p
        base = 1 if pow(residue, (p - 1) // 2, p) == 1 else _least_nonresidue(p)
    return Fraction(base * (p if v % 2 else 1))


def square_class_of(value, field) -> SquareClass:
    field = parse_field(field)
    return SquareClass(field, _canonical(field, as_fraction(value)))


def same_square_class(a, b, field) -> bool:
    return square_class_of(a, field) == square_class_of(b, field)


def square_classes(field) -> list[SquareClass]:
    field = parse_field(field)
    if field.kind == "R":
        reps = [1, -1]
    elif field.kind == "Fq":
        reps = [1, _least_nonresidue(field.p)]
    elif field.kind == "Qp" and field.p == 2:
        reps = [1, -1, 2, -2, 5, -5, 10, -10]
    elif field.kind == "Qp":
        u, p = _least_nonresidue(field.p), field.p
        reps = [1, u, p, u * p]
    else:
        raise DomainError("UNSUPPORTED_FIELD", "Q has infinitely many square classes")
    return [SquareClass(field, Fraction(r)) for r in reps]


def _symmetric(delta: sympy.Matrix):
    if delta.rows != delta.cols or delta != delta.T:
        raise DomainError("NOT_SYMMETRIC", "matrix is not symmetric")


def stable_class_of(delta, field) -> SquareClass:
    """Square class of det(delta); the trivial class means delta*tau is stably conjugate to tau."""
    from .matrices import to_matrix, to_fraction

    delta = to_matrix(delta)
    _symmetric(delta)
    det = to_fraction(delta.det())
    if det == 0:
        raise DomainError("SINGULAR", "matrix is not invertible")
    return square_class_of(det, field)


def diagonalize_symmetric(delta) -> tuple[sympy.Matrix, sympy.Matrix]:
    """(D, g) with g^T delta g = D diagonal, by symmetric Gaussian elimination over Q."""
    from .matrices import to_matrix

    delta = to_matrix(delta)
    _symmetric(delta)
    if delta.det() == 0:
        raise DomainError("SINGULAR", "matrix is not invertible")
    n = delta.rows
    D = delta.copy()
    g = sympy.eye(n)

    def congruence(step: sympy.Matrix):
        nonlocal D, g
        D = step.T * D * step
        g = g * step

    for k in range(n):
        if D[k, k] == 0:
            j = next((j for j in range(k + 1, n) if D[j, j] != 0), None)
            if j is not None:
                P = sympy.eye(n)
                P[k, k] = P[j, j] = 0
                P[k, j] = P[j, k] = 1
                congruence(P)
            else:
                j = next(j for j in range(k + 1, n) if D[k, j] != 0)
                S = sympy.eye(n)
                S[j, k] = 1  # e_k -> e_k + e_j
                congruence(S)
        pivot = D[k, k]
        E = sympy.eye(n)
        for j in range(k + 1, n):
            E[k, j] = -D[k, j] / pivot
        congruence(E)
    return D, g
