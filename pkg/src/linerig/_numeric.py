"""Scalar and vector helpers shared by the geometry and rigidity code.

Everything operates on plain tuples of numbers so a single code path serves
both representations: inputs made of ints and Fractions stay exact end to
end, while anything containing a float switches the object to the float
path. Comparisons take an ``exact`` flag instead of guessing.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Number = Union[Fraction, float]
Point = tuple  # tuple[Number, ...]

#: Relative tolerance used by float-path equality tests.
FLOAT_REL_TOL = 1e-9


def to_number(x) -> Number:
    """Coerce a coordinate to Fraction (exact) or float."""
    if isinstance(x, bool):
        raise TypeError("bool is not a valid coordinate")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        return x
    raise TypeError(f"unsupported coordinate type: {type(x).__name__}")


def to_point(xs: Iterable) -> Point:
    return tuple(to_number(x) for x in xs)


def is_exact_point(p: Sequence) -> bool:
    return all(isinstance(x, Fraction) for x in p)


def vadd(a: Sequence, b: Sequence) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def vmul(c: Number, a: Sequence) -> Point:
    return tuple(c * x for x in a)


def dot(a: Sequence, b: Sequence) -> Number:
    return sum(x * y for x, y in zip(a, b))


def norm_sq(a: Sequence) -> Number:
    return sum(x * x for x in a)


def numbers_close(a: Number, b: Number, exact: bool, tol: float = FLOAT_REL_TOL) -> bool:
    """Equality for the exact path, relative closeness for the float path."""
    if exact:
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def points_close(p: Sequence, q: Sequence, exact: bool, tol: float = FLOAT_REL_TOL) -> bool:
    if len(p) != len(q):
        return False
    if exact:
        return tuple(p) == tuple(q)
    scale = max([1.0] + [abs(x) for x in p] + [abs(x) for x in q])
    return all(abs(x - y) <= tol * scale for x, y in zip(p, q))


def as_floats(p: Sequence) -> tuple:
    return tuple(float(x) for x in p)


def rref(rows: list, exact: bool) -> list:
    """Reduced row echelon form, in place; returns the nonzero rows.

    Float pivoting is partial (largest entry) with a small absolute
    threshold scaled to the matrix.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    if exact:
        eps = None
    else:
        scale = max((abs(x) for row in rows for x in row), default=0.0)
        eps = 1e-12 * max(1.0, scale)
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        if exact:
            piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        else:
            piv = max(range(r, len(rows)), key=lambda i: abs(rows[i][c]))
            if abs(rows[piv][c]) <= eps:
                piv = None
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return rows[:r]
