"""Rational matrices, the transpose-inverse twists of GL(n), norms and companion forms.

Matrices are :class:`sympy.Matrix` objects with rational entries.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import sympy

from ..errors import DomainError
from ..exactnum import as_fraction, fraction_str

MAX_SYMBOLIC_N = 10


def to_matrix(obj) -> sympy.Matrix:
    """Build a square rational matrix from nested lists of ints, Fractions or "p/q" strings."""
    if isinstance(obj, sympy.MatrixBase):
        M = sympy.Matrix(obj)
    else:
        try:
            rows = [[sympy.Rational(as_fraction(x).numerator, as_fraction(x).denominator) for x in row] for row in obj]
        except TypeError as exc:
            raise DomainError("PARSE", "matrix must be a list of rows") from exc
        if not rows or any(len(r) != len(rows) for r in rows):
            raise DomainError("DOMAIN", "matrix must be square and nonempty")
        M = sympy.Matrix(rows)
    if M.rows != M.cols:
        raise DomainError("DOMAIN", "matrix must be square")
    if any(not x.is_Rational for x in M):
        raise DomainError("DOMAIN", "matrix entries must be rational")
    return M


def to_fraction(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def matrix_to_json(M: sympy.Matrix) -> list:
    return [[fraction_str(to_fraction(M[i, j])) for j in range(M.cols)] for i in range(M.rows)]


def w0_matrix(n: int, variant: str) -> sympy.Matrix:
    """Antidiagonal matrix defining the twist: all +1 (orthogonal) or +1 then -1 by rows (symplectic)."""
    if variant == "orthogonal":
        signs = [1] * n
    elif variant == "symplectic":
        if n % 2:
            raise DomainError("DOMAIN", "the symplectic twist needs even n")
        signs = [1] * (n // 2) + [-1] * (n // 2)
    else:
        raise DomainError("PARSE", f"unknown variant {variant!r}")
    M = sympy.zeros(n, n)
    for i, s in enumerate(signs):
        M[i, n - 1 - i] = s
    return M


def _require_invertible(x: sympy.Matrix):
    if x.det() == 0:
        raise DomainError("SINGULAR", "matrix is not invertible")


def tau_apply(x, variant: str = "orthogonal") -> sympy.Matrix:
    """x -> w0 (x^T)^{-1} w0^{-1}."""
    x = to_matrix(x)
    _require_invertible(x)
    w0 = w0_matrix(x.rows, variant)
    return w0 * x.T.inv() * w0.inv()


def tau_lie(X: sympy.Matrix, variant: str) -> sympy.Matrix:
    """Differential of the twist: X -> -w0 X^T w0^{-1}."""
    w0 = w0_matrix(X.rows, variant)
    return -w0 * X.T * w0.inv()


def norm(x, variant: str = "orthogonal", d: int = 2) -> sympy.Matrix:
    """x tau(x) ... tau^{d-1}(x)."""
    x = to_matrix(x)
    if d < 1:
        raise DomainError("DOMAIN", "order must be positive")
    result = sympy.eye(x.rows)
    y = x
    for _ in range(d):
        result = result * y
        y = tau_apply(y, variant)
    return result


def charpoly(M) -> list[Fraction]:
    """Characteristic polynomial det(lambda - M), coefficients leading first."""
    M = to_matrix(M)
    lam = sympy.Symbol("lam")
    return [to_fraction(c) for c in M.charpoly(lam).all_coeffs()]


def palindrome_check(coeffs: Sequence, n: int | None = None) -> bool:
    """Exact test of lambda^n p(1/lambda) = p(lambda) for monic p given leading coefficient first."""
    c = [as_fraction(x) for x in coeffs]
    if n is not None and len(c) != n + 1:
        raise DomainError("DOMAIN", "degree mismatch")
    if not c or c[0] != 1:
        raise DomainError("DOMAIN", "polynomial must be monic")
    return c == c[::-1]


def antipalindrome_check(coeffs: Sequence) -> bool:
    c = [as_fraction(x) for x in coeffs]
    return c == [-x for x in c[::-1]]


def sl_companion(coeffs: Sequence, n: int | None = None) -> sympy.Matrix:
    """Companion-type matrix of determinant 1 from (c_{n-1}, ..., c_1).

    The first row is c_{n-1}, -c_{n-2}, c_{n-3}, ... followed by (-1)^{n+1}; ones sit
    on the subdiagonal.  Its characteristic polynomial is
    lambda^n - c_{n-1} lambda^{n-1} + c_{n-2} lambda^{n-2} - ... + (-1)^n.
    """
    c = [as_fraction(x) for x in coeffs]
    size = len(c) + 1
    if n is not None and n != size:
        raise DomainError("DOMAIN", f"expected {n - 1} coefficients for size {n}")
    M = sympy.zeros(size, size)
    for k, value in enumerate(c):
        M[0, k] = sympy.Rational((-1) ** k * value.numerator, value.denominator)
    M[0, size - 1] = (-1) ** (size + 1)
    for i in range(1, size):
        M[i, i - 1] = 1
    return M


def sl_companion_charpoly(coeffs: Sequence) -> list[Fraction]:
    """The polynomial the companion form is built to have, leading coefficient first."""
    c = [as_fraction(x) for x in coeffs]
    size = len(c) + 1
    out = [Fraction(1)]
    for k, value in enumerate(c, start=1):
        out.append((-1) ** k * value)
    out.append(Fraction((-1) ** size))
    return out


def minimal_polynomial_degree(M) -> int:
    """Smallest k such that I, M, ..., M^k are linearly dependent."""
    M = to_matrix(M)
    n = M.rows
    powers = [sympy.eye(n)]
    for k in range(1, n + 1):
        powers.append(powers[-1] * M)
        stacked = sympy.Matrix.hstack(*[P.reshape(n * n, 1) for P in powers])
        if stacked.rank() < len(powers):
            return k
    return n


def is_regular(M) -> bool:
    """Minimal polynomial equals characteristic polynomial."""
    M = to_matrix(M)
    return minimal_polynomial_degree(M) == M.rows
