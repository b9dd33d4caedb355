"""Regular elements of the classical fixed groups with a prescribed characteristic polynomial.

Each construction is a product of root-group elements and Weyl representatives,
one factor per simple root of the fixed group.  Along that family the
characteristic polynomial depends affinely on a short list of parameters, so the
parameters are recovered from two or more exact evaluations and a linear solve.
The result is always re-checked against the target polynomial and the invariant form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import sympy

from ..errors import DomainError
from ..exactnum import as_fraction
from .matrices import (
    antipalindrome_check,
    charpoly,
    palindrome_check,
    tau_lie,
    w0_matrix,
)
from .squares import squarefree_kernel


def _rat(x) -> sympy.Rational:
    x = as_fraction(x)
    return sympy.Rational(x.numerator, x.denominator)


def _unit(n: int, i: int, j: int) -> sympy.Matrix:
    M = sympy.zeros(n, n)
    M[i, j] = 1
    return M


def _exp_nilpotent(X: sympy.Matrix) -> sympy.Matrix:
    n = X.rows
    result = sympy.eye(n)
    term = sympy.eye(n)
    for k in range(1, n + 1):
        term = term * X / k
        if term.is_zero_matrix:
            break
        result = result + term
    return result


def _simple_root_vectors(n: int, variant: str) -> list[sympy.Matrix]:
    """Root vectors of the fixed Lie algebra for its simple roots."""
    vectors = []
    for i in range(n // 2):
        E = _unit(n, i, i + 1)
        T = tau_lie(E, variant)
        if T == E:
            vectors.append(E)
        elif T == -E:
            raise DomainError("DOMAIN", "simple root is not in the fixed algebra")
        else:
            vectors.append(E + T)
    return vectors


def _weyl_representative(X: sympy.Matrix) -> sympy.Matrix:
    """exp(X) exp(-Y) exp(X) for the sl2-triple partner Y of X."""
    n = X.rows
    H = X * X.T - X.T * X
    bracket = H * X - X * H
    scale = next(bracket[i, j] / X[i, j] for i in range(n) for j in range(n) if X[i, j] != 0)
    Y = (2 / scale) * X.T
    return _exp_nilpotent(X) * _exp_nilpotent(-Y) * _exp_nilpotent(X)


def _torus_step(n: int, d) -> sympy.Matrix:
    m = n // 2
    h = sympy.eye(n)
    h[m - 1, m - 1] = d
    h[m + 1, m + 1] = 1 / sympy.Rational(d)
    return h


def _solve_affine(f: Callable[[list], list], nparams: int, target: list, base=None) -> list:
    """Solve f(params) = target for an affine map f, probing at 0 (or `base`) and unit steps."""
    origin = [Fraction(0)] * nparams if base is None else list(base)
    f0 = f(origin)
    columns = []
    for k in range(nparams):
        point = list(origin)
        point[k] += 1
        columns.append([a - b for a, b in zip(f(point), f0)])
    A = sympy.Matrix([[_rat(columns[k][i]) for k in range(nparams)] for i in range(len(f0))])
    rhs = sympy.Matrix([_rat(t - b) for t, b in zip(target, f0)])
    if A.rank() < nparams:
        raise DomainError("DOMAIN", "parameter map is degenerate")
    delta = A.solve(rhs)
    return [o + Fraction(int(sympy.Rational(v).p), int(sympy.Rational(v).q)) for o, v in zip(origin, delta)]


def _check(B: sympy.Matrix, J: sympy.Matrix, target: list[Fraction]):
    if B.T * J * B != J:
        raise DomainError("INTERNAL", "constructed element does not preserve the form")
    if charpoly(B) != target:
        raise DomainError("INTERNAL", "constructed element has the wrong characteristic polynomial")


@dataclass(frozen=True)
class FixedGroupElement:
    matrix: sympy.Matrix
    form: sympy.Matrix
    params: tuple[Fraction, ...]
    negated: bool = False


def _section(n: int, variant: str, ts: Sequence, d=None) -> sympy.Matrix:
    B = sympy.eye(n)
    for t, X in zip(ts, _simple_root_vectors(n, variant)):
        B = B * _exp_nilpotent(_rat(t) * X) * _weyl_representative(X)
    if d is not None:
        B = B * _torus_step(n, _rat(d))
    return B


def _odd_orthogonal_section(n: int, params: Sequence) -> sympy.Matrix:
    # the last unipotent and the torus step only enter through u = d t^2
    *ts, u = params
    if u == 0:
        return _section(n, "orthogonal", list(ts) + [0], 1)
    return _section(n, "orthogonal", list(ts) + [1], u)


def fixed_group_regular(coeffs: Sequence, variant: str) -> FixedGroupElement:
    """Element of Sp(2m) or O(2m+1) (preserving the antidiagonal form) with characteristic polynomial `coeffs`.

    `variant` is "symplectic" (p palindromic of even degree) or "odd_orthogonal"
    (p palindromic or antipalindromic of odd degree; the palindromic case is
    reached by negating an element of SO for p(-lambda)).
    """
    target = [as_fraction(c) for c in coeffs]
    n = len(target) - 1
    if n < 1 or target[0] != 1:
        raise DomainError("DOMAIN", "polynomial must be monic of positive degree")
    m = n // 2
    if variant == "symplectic":
        if n % 2:
            raise DomainError("DOMAIN", "symplectic case needs even degree")
        if not palindrome_check(target):
            raise DomainError("NOT_PALINDROMIC", "polynomial is not palindromic")
        J = w0_matrix(n, "symplectic")
        f = lambda ts: charpoly(_section(n, variant, ts))[1 : m + 1]
        ts = _solve_affine(f, m, target[1 : m + 1])
        B = _section(n, variant, ts)
        _check(B, J, target)
        return FixedGroupElement(B, J, tuple(ts))
    if variant != "odd_orthogonal":
        raise DomainError("PARSE", f"unknown variant {variant!r}")
    if n % 2 == 0:
        raise DomainError("DOMAIN", "odd orthogonal case needs odd degree")
    J = w0_matrix(n, "orthogonal")
    negated = False
    work = target
    if not antipalindrome_check(target):
        if not palindrome_check(target):
            raise DomainError("NOT_PALINDROMIC", "polynomial is neither palindromic nor antipalindromic")
        # p(lambda) = -q(-lambda) with q antipalindromic; -B' has polynomial p when B' has q
        work = [(-1) ** k * c for k, c in enumerate(target)]
        negated = True
    if m == 0:
        B = sympy.eye(1)
        params: list = []
    else:
        f = lambda ps: charpoly(_odd_orthogonal_section(n, ps))[1 : m + 1]
        base = [Fraction(0)] * (m - 1) + [Fraction(1)]
        params = _solve_affine(f, m, work[1 : m + 1], base=base)
        B = _odd_orthogonal_section(n, params)
    if negated:
        B = -B
    _check(B, J, target)
    return FixedGroupElement(B, J, tuple(params), negated)


# ---------------------------------------------------------------------------
# even orthogonal groups


@dataclass(frozen=True)
class EvenOrthogonalElement:
    matrix: sympy.Matrix
    gram: sympy.Matrix
    zeta1: int
    zeta2: int
    split: bool
    params: tuple[Fraction, ...]

    @property
    def label(self) -> str:
        return "split" if self.split else f"quasi_split({self.zeta1}, {self.zeta2})"


def _even_gram(m: int, zeta1, zeta2) -> sympy.Matrix:
    n = 2 * m
    G = sympy.zeros(n, n)
    for i in range(m - 1):
        G[i, n - 1 - i] = 1
        G[n - 1 - i, i] = 1
    G[m - 1, m - 1] = 2 * _rat(zeta1)
    G[m, m] = 2 * _rat(zeta2)
    return G


def _even_section(m: int, ts: Sequence, x, y, zeta1, zeta2) -> sympy.Matrix:
    """Basis e_1..e_{m-1}, u, v, f_{m-1}..f_1."""
    n = 2 * m
    e = lambda i: i - 1
    f = lambda i: n - i
    U = m - 1
    G = _even_gram(m, zeta1, zeta2)
    M = sympy.eye(n)
    for i, t in zip(range(1, m - 1), ts):
        N = sympy.zeros(n, n)
        N[e(i), e(i + 1)] = 1
        N[f(i + 1), f(i)] = -1
        S = sympy.eye(n)
        for a, b in [(e(i), e(i + 1)), (f(i), f(i + 1))]:
            S[a, a] = 0
            S[b, b] = 0
            S[b, a] = 1
            S[a, b] = -1
        M = M * (sympy.eye(n) + _rat(t) * N) * S
    basis = [sympy.eye(n)[:, k] for k in range(n)]
    pair = lambda a, b: (a.T * G * b)[0, 0]
    anchor = basis[e(m - 1)]
    w = _rat(x) * basis[U] + _rat(y) * basis[U + 1]
    qw = pair(w, w) / 2
    # Eichler transformation attached to the isotropic anchor and w
    cols = [a + pair(a, anchor) * w - pair(a, w) * anchor - qw * pair(a, anchor) * anchor for a in basis]
    S = sympy.eye(n)
    S[e(m - 1), e(m - 1)] = 0
    S[f(m - 1), f(m - 1)] = 0
    S[e(m - 1), f(m - 1)] = 1
    S[f(m - 1), e(m - 1)] = 1
    S[U, U] = -1
    return M * sympy.Matrix.hstack(*cols) * S


def _scaled_pair(value: Fraction, default: int) -> tuple[int, Fraction]:
    """(zeta, x) with zeta squarefree and zeta x^2 = value."""
    if value == 0:
        return default, Fraction(0)
    zeta = squarefree_kernel(value)
    ratio = value / zeta
    root = sympy.sqrt(_rat(ratio))
    return zeta, Fraction(int(sympy.Rational(root).p), int(sympy.Rational(root).q))


def _param_section(m: int, params: Sequence) -> sympy.Matrix:
    *ts, A, Bq = params
    z1, x = (A, 1) if A != 0 else (1, 0)
    z2, y = (Bq, 1) if Bq != 0 else (1, 0)
    return _even_section(m, ts, x, y, z1, z2)


def even_orthogonal_regular(coeffs: Sequence) -> EvenOrthogonalElement:
    """Element of an orthogonal group in 2m variables with characteristic polynomial `coeffs` (palindromic, m >= 2).

    The form is hyperbolic of rank m-1 plus zeta1 u^2 + zeta2 v^2; it is split
    exactly when -zeta1 zeta2 is a square.
    """
    target = [as_fraction(c) for c in coeffs]
    n = len(target) - 1
    if n < 4 or n % 2 or target[0] != 1:
        raise DomainError("DOMAIN", "need a monic polynomial of even degree at least 4")
    if not palindrome_check(target):
        raise DomainError("NOT_PALINDROMIC", "polynomial is not palindromic")
    m = n // 2
    f = lambda ps: charpoly(_param_section(m, ps))[1 : m + 1]
    params = _solve_affine(f, m, target[1 : m + 1])
    *ts, A, Bq = params
    if A != 0 and Bq != 0:
        zeta1, x = _scaled_pair(A, 1)
        zeta2, y = _scaled_pair(Bq, 1)
    elif A == 0 and Bq == 0:
        zeta1, x, zeta2, y = 1, Fraction(0), -1, Fraction(0)
    elif A == 0:
        zeta2, y = _scaled_pair(Bq, 1)
        zeta1, x = -zeta2, Fraction(0)
    else:
        zeta1, x = _scaled_pair(A, 1)
        zeta2, y = -zeta1, Fraction(0)
    B = _even_section(m, ts, x, y, zeta1, zeta2)
    G = _even_gram(m, zeta1, zeta2)
    _check(B, G, target)
    split = squarefree_kernel(Fraction(-zeta1 * zeta2)) == 1
    return EvenOrthogonalElement(B, G, zeta1, zeta2, split, tuple(params))
