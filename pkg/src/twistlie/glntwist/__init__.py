"""Twisted conjugacy in GL(n): the transpose-inverse twists, norms, cross-sections and square classes."""

from .crosssection import (
    EvenOrthogonalElement,
    FixedGroupElement,
    even_orthogonal_regular,
    fixed_group_regular,
)
from .finitefield import (
    TorusShadow,
    TwistedClassTable,
    ff_twisted_classes,
    is_squarefree_mod,
    torus_shadow,
)
from .matrices import (
    antipalindrome_check,
    charpoly,
    is_regular,
    matrix_to_json,
    norm,
    palindrome_check,
    sl_companion,
    sl_companion_charpoly,
    tau_apply,
    to_matrix,
    w0_matrix,
)
from .squares import (
    SquareClass,
    diagonalize_symmetric,
    is_rational_square,
    parse_field,
    square_class_of,
    square_classes,
    squarefree_kernel,
    stable_class_of,
)

__all__ = [name for name in dir() if not name.startswith("_")]
