"""Lines in R^d and the geometry the rigidity theory sits on.

A line is stored as a base point plus a direction vector together with its
canonical standard form: the unique reduced row echelon (d-1) x (d+1) matrix
(A | b) with A x = b cutting out the line. The standard form is the identity
used for comparing and deduplicating lines.

The module provides pair classification (parallel / perpendicular / generic),
exact closest-point pairs between non-parallel lines, the weak-concurrency
test, the general-position predicate, the isometry group of a line set in the
two supported regimes, and squared-distance profiles of a line against a
point pair.

Coordinates given as ints or Fractions are processed exactly; floats switch
the computation to a tolerance-based path (1e-9 relative).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ._numeric import (
    FLOAT_REL_TOL,
    Number,
    Point,
    dot,
    is_exact_point,
    norm_sq,
    numbers_close,
    points_close,
    rref,
    to_point,
    vadd,
    vmul,
    vsub,
)


class ZeroDirection(ValueError):
    """The direction vector of a line is zero."""


class DimensionTooSmall(ValueError):
    """Lines require ambient dimension at least 2."""


class DimensionMismatch(ValueError):
    """Operands live in different ambient dimensions."""


class ParallelLines(ValueError):
    """The operation is undefined for parallel lines."""


class PointOffLine(ValueError):
    """A point expected to lie on a line does not."""


class CoincidentPoints(ValueError):
    """Two reference points coincide."""


class UnsupportedLineSet(ValueError):
    """The line set is outside the supported regimes."""


PARALLEL = "parallel"
PERPENDICULAR = "perpendicular"
GENERIC = "generic"


# ---------------------------------------------------------------------------
# lines and their standard form


@dataclass(frozen=True, eq=False)
class Line:
    """A line in R^d with its canonical standard form.

    Attributes:
        dim: ambient dimension d (>= 2).
        base: a point on the line.
        direction: a nonzero direction vector (not normalised).
        standard_a: the (d-1) x d coefficient block A in reduced row echelon
            form; rows span the orthogonal complement of ``direction``.
        standard_b: right-hand side, A @ base == standard_b.
        exact: True when every stored coordinate is a Fraction.
    """

    dim: int
    base: Point
    direction: Point
    standard_a: tuple
    standard_b: Point
    exact: bool

    def __eq__(self, other) -> bool:
        if not isinstance(other, Line):
            return NotImplemented
        return (
            self.standard_a == other.standard_a
            and self.standard_b == other.standard_b
        )

    def __hash__(self) -> int:
        return hash((self.standard_a, self.standard_b))

    def __repr__(self) -> str:  # keep reprs short in test output
        return f"Line(base={self.base}, direction={self.direction})"


def line_from_point_direction(base: Sequence, direction: Sequence) -> Line:
    """Build a line through ``base`` with the given ``direction``.

    Raises:
        ZeroDirection: if the direction vector is zero.
        DimensionTooSmall: if the ambient dimension is below 2.
        DimensionMismatch: if base and direction lengths differ.
    """
    b = to_point(base)
    u = to_point(direction)
    if len(b) != len(u):
        raise DimensionMismatch(f"base has length {len(b)}, direction {len(u)}")
    d = len(u)
    if d < 2:
        raise DimensionTooSmall(f"ambient dimension must be >= 2, got {d}")
    if all(x == 0 for x in u):
        raise ZeroDirection("direction vector is zero")
    exact = is_exact_point(b) and is_exact_point(u)
    if not exact:
        b = tuple(float(x) for x in b)
        u = tuple(float(x) for x in u)

    # Rows of (u.u) I - u u^T span the orthogonal complement of u without
    # introducing square roots; RREF of the augmented system is the unique
    # standard form.
    uu = norm_sq(u)
    aug = []
    for i in range(d):
        row = [-u[i] * u[j] for j in range(d)]
        row[i] += uu
        row.append(dot(row[:d], b))
        aug.append(row)
    reduced = rref(aug, exact)
    if len(reduced) != d - 1:
        raise ZeroDirection("degenerate direction")  # pragma: no cover
    a_rows = tuple(tuple(row[:d]) for row in reduced)
    b_col = tuple(row[d] for row in reduced)
    return Line(dim=d, base=b, direction=u, standard_a=a_rows, standard_b=b_col, exact=exact)


def _on_line(l: Line, p: Sequence, tol: float = FLOAT_REL_TOL) -> bool:
    if len(p) != l.dim:
        return False
    exact = l.exact and is_exact_point(p)
    scale = max([1.0] + [abs(float(x)) for x in p]) if not exact else None
    for row, rhs in zip(l.standard_a, l.standard_b):
        lhs = dot(row, p)
        if exact:
            if lhs != rhs:
                return False
        elif abs(lhs - rhs) > tol * scale:
            return False
    return True


def line_parameter(l: Line, p: Sequence) -> Number:
    """Parameter t with base + t * direction == p, for p on l."""
    p = to_point(p)
    if not _on_line(l, p):
        raise PointOffLine(f"{p} does not lie on {l}")
    return dot(vsub(p, l.base), l.direction) / norm_sq(l.direction)


# ---------------------------------------------------------------------------
# pairs and triples


def classify_pair(a: Line, b: Line) -> str:
    """Classify two lines as parallel, perpendicular or generic.

    Parallelism is linear dependence of the directions; perpendicularity is a
    zero dot product. Exact inputs are decided exactly, floats at |sin| and
    |cos| below 1e-9 respectively.
    """
    if a.dim != b.dim:
        raise DimensionMismatch(f"dimensions {a.dim} and {b.dim}")
    u, v = a.direction, b.direction
    uu, vv, uv = norm_sq(u), norm_sq(v), dot(u, v)
    gram = uu * vv - uv * uv  # = |u|^2 |v|^2 sin^2(angle), always >= 0
    exact = a.exact and b.exact
    if exact:
        if gram == 0:
            return PARALLEL
        if uv == 0:
            return PERPENDICULAR
    else:
        uu, vv, uv, gram = float(uu), float(vv), float(uv), float(gram)
        if gram <= (FLOAT_REL_TOL**2) * uu * vv:
            return PARALLEL
        if uv * uv <= (FLOAT_REL_TOL**2) * uu * vv:
            return PERPENDICULAR
    return GENERIC


def closest_pair(a: Line, b: Line) -> tuple:
    """Unique pair of closest points (x_on_a, x_on_b) of two non-parallel lines.

    Solves the 2x2 normal equations of the strictly convex quadratic
    |y1 - y2|^2 over the two line parameters; rational inputs give a rational
    answer.
    """
    if classify_pair(a, b) == PARALLEL:
        raise ParallelLines("closest pair is not unique for parallel lines")
    u, v = a.direction, b.direction
    w = vsub(a.base, b.base)
    uu, vv, uv = norm_sq(u), norm_sq(v), dot(u, v)
    wu, wv = dot(w, u), dot(w, v)
    det = uv * uv - uu * vv  # nonzero since the lines are not parallel
    s = (wu * vv - uv * wv) / det
    t = (wu * uv - uu * wv) / det
    return vadd(a.base, vmul(s, u)), vadd(b.base, vmul(t, v))


def weakly_concurrent(a: Line, b: Line, c: Line) -> bool:
    """Whether some line of the triple has equal closest points to the others.

    The triple is weakly concurrent when for one of the lines X the closest
    point on X to the second line coincides with the closest point on X to
    the third. In the plane this degenerates to ordinary concurrency.
    """
    exact = a.exact and b.exact and c.exact
    for x, y, z in ((a, b, c), (b, a, c), (c, a, b)):
        px = closest_pair(x, y)[0]
        qx = closest_pair(x, z)[0]
        if points_close(px, qx, exact):
            return True
    return False


@dataclass(frozen=True)
class Violation:
    """First failure found by ``is_general_position``; falsy by design."""

    kind: str  # "parallel" | "perpendicular" | "weakly_concurrent"
    lines: tuple

    def __bool__(self) -> bool:
        return False


class LineSet:
    """An ordered collection of lines in a common dimension.

    Pairwise classifications and closest pairs are cached on first use.
    Instances are treated as immutable.
    """

    def __init__(self, lines: Sequence[Line]):
        lines = tuple(lines)
        if not lines:
            raise ValueError("a line set needs at least one line")
        dim = lines[0].dim
        for l in lines[1:]:
            if l.dim != dim:
                raise DimensionMismatch("all lines must share one dimension")
        self.lines = lines
        self.dim = dim
        self.exact = all(l.exact for l in lines)
        self._pair_cache: dict = {}

    def __len__(self) -> int:
        return len(self.lines)

    def __getitem__(self, i: int) -> Line:
        return self.lines[i]

    def __iter__(self):
        return iter(self.lines)

    def classification(self, i: int, j: int) -> str:
        key = (min(i, j), max(i, j))
        hit = self._pair_cache.get(key)
        if hit is None:
            a, b = self.lines[key[0]], self.lines[key[1]]
            kind = classify_pair(a, b)
            pair = closest_pair(a, b) if kind != PARALLEL else None
            hit = self._pair_cache[key] = (kind, pair)
        return hit[0]

    def closest(self, i: int, j: int) -> tuple:
        """Cached closest pair, ordered (point on i, point on j)."""
        self.classification(i, j)
        pair = self._pair_cache[(min(i, j), max(i, j))][1]
        if pair is None:
            raise ParallelLines("closest pair is not unique for parallel lines")
        return pair if i <= j else (pair[1], pair[0])

    def all_parallel(self) -> bool:
        return all(
            self.classification(i, j) == PARALLEL
            for i in range(len(self.lines))
            for j in range(i + 1, len(self.lines))
        )


def is_general_position(ls: LineSet):
    """True if no two lines are parallel or perpendicular and no three are
    weakly concurrent; otherwise the first violating pair or triple.

    The returned ``Violation`` is falsy, so the result can be used directly
    in a boolean context.
    """
    k = len(ls.lines)
    for i in range(k):
        for j in range(i + 1, k):
            kind = ls.classification(i, j)
            if kind != GENERIC:
                return Violation(kind, (i, j))
    for i in range(k):
        for j in range(i + 1, k):
            for m in range(j + 1, k):
                if weakly_concurrent(ls.lines[i], ls.lines[j], ls.lines[m]):
                    return Violation("weakly_concurrent", (i, j, m))
    return True


# ---------------------------------------------------------------------------
# isometries of a line set


@dataclass(frozen=True)
class Isometry:
    """An isometry of R^d mapping each line of a line set onto itself.

    kind is one of "identity", "half_turn", "translation_1d",
    "reflection_1d". Only the fields relevant to the kind are populated.
    """

    kind: str
    line_set: LineSet
    points: Optional[tuple] = None  # half_turn: fixed point on each line
    shift: Optional[Point] = None  # translation_1d: translation vector
    mirror: Optional[tuple] = None  # reflection_1d: (point on mirror, normal)


@dataclass(frozen=True)
class IsomGroup:
    """Structure of the isometry group of a line set.

    structure is "euclidean_1d" (one line, or all lines parallel: the
    isometries form the 1-dimensional Euclidean group), "cyclic_2" (two lines
    in general position: the identity and one involution) or "trivial"
    (three or more lines in general position).
    """

    structure: str
    generator: Optional[Isometry]
    line_set: LineSet


def identity_isometry(ls: LineSet) -> Isometry:
    return Isometry(kind="identity", line_set=ls)


def half_turn_isometry(ls: LineSet) -> Isometry:
    """The involution of a non-parallel pair: a half turn about the common
    perpendicular through the closest pair (a point reflection when the lines
    meet). Restricted to line i it is p -> 2 x_i - p where x_i is the closest
    point on line i."""
    if len(ls.lines) != 2:
        raise UnsupportedLineSet("half turn needs exactly two lines")
    x1, x2 = ls.closest(0, 1)
    return Isometry(kind="half_turn", line_set=ls, points=(x1, x2))


def translation_isometry(ls: LineSet, s) -> Isometry:
    """Translation by s * direction of the first line (parallel regime)."""
    if not ls.all_parallel():
        raise UnsupportedLineSet("translations need all lines parallel")
    return Isometry(kind="translation_1d", line_set=ls, shift=vmul(to_point([s])[0], ls.lines[0].direction))


def reflection_isometry(ls: LineSet, center: Sequence) -> Isometry:
    """Reflection in the hyperplane through ``center`` orthogonal to the
    common direction (parallel regime)."""
    if not ls.all_parallel():
        raise UnsupportedLineSet("reflections need all lines parallel")
    return Isometry(
        kind="reflection_1d",
        line_set=ls,
        mirror=(to_point(center), ls.lines[0].direction),
    )


def _line_index(ls: LineSet, l: Line) -> int:
    for i, cand in enumerate(ls.lines):
        if cand == l:
            return i
    raise ValueError("line does not belong to the isometry's line set")


def apply_isometry(iso: Isometry, p: Sequence, on: Line) -> Point:
    """Image of a point p lying on line ``on`` under the isometry.

    Raises PointOffLine when p is not on ``on``.
    """
    p = to_point(p)
    if not _on_line(on, p):
        raise PointOffLine(f"{p} does not lie on the given line")
    if iso.kind == "identity":
        return p
    if iso.kind == "half_turn":
        i = _line_index(iso.line_set, on)
        x = iso.points[i]
        return vsub(vmul(2, x), p)
    if iso.kind == "translation_1d":
        return vadd(p, iso.shift)
    if iso.kind == "reflection_1d":
        c, normal = iso.mirror
        coef = 2 * dot(vsub(p, c), normal) / norm_sq(normal)
        return vsub(p, vmul(coef, normal))
    raise ValueError(f"unknown isometry kind {iso.kind!r}")


def isometry_group(ls: LineSet) -> IsomGroup:
    """Isometry group of a line set in the two supported regimes.

    A single line or an all-parallel set carries the 1-dimensional Euclidean
    group (continuous; no finite generator is stored). Two lines in general
    position carry a cyclic group of order two generated by the half turn.
    Three or more lines in general position only admit the identity.

    Raises UnsupportedLineSet outside these regimes (for instance a
    perpendicular pair, whose group is larger).
    """
    if len(ls.lines) == 1 or ls.all_parallel():
        return IsomGroup(structure="euclidean_1d", generator=None, line_set=ls)
    if is_general_position(ls):
        if len(ls.lines) == 2:
            return IsomGroup(
                structure="cyclic_2", generator=half_turn_isometry(ls), line_set=ls
            )
        return IsomGroup(structure="trivial", generator=None, line_set=ls)
    raise UnsupportedLineSet(
        "isometry groups are only computed for general-position or all-parallel line sets"
    )


# ---------------------------------------------------------------------------
# distance profiles


@dataclass(frozen=True)
class DistanceProfile:
    """Sampled squared-distance curve of a line against two fixed points.

    kind is "half_line" when the two points project to the same foot on the
    line (the curve t -> (f1, f2) degenerates to a half-line), "parabola"
    otherwise.
    """

    kind: str
    points: tuple  # ((f1, f2), ...) at integer-offset parameters


def distance_profile(l: Line, p1: Sequence, p2: Sequence, samples: int = 9) -> DistanceProfile:
    """Profile t -> (|x(t) - p1|^2, |x(t) - p2|^2) along x(t) = base + t dir.

    Samples integer parameters centred on 0, which keeps rational inputs
    exact. Raises CoincidentPoints when the reference points coincide.
    """
    p1 = to_point(p1)
    p2 = to_point(p2)
    if len(p1) != l.dim or len(p2) != l.dim:
        raise DimensionMismatch("reference points must match the line's dimension")
    exact = l.exact and is_exact_point(p1) and is_exact_point(p2)
    if points_close(p1, p2, exact):
        raise CoincidentPoints("reference points coincide")
    if samples < 1:
        raise ValueError("samples must be positive")

    u = l.direction
    uu = norm_sq(u)
    tau1 = dot(vsub(p1, l.base), u) / uu
    tau2 = dot(vsub(p2, l.base), u) / uu
    same_foot = numbers_close(tau1, tau2, exact)
    kind = "half_line" if same_foot else "parabola"

    pts = []
    for j in range(samples):
        t = Fraction(j - samples // 2) if exact else float(j - samples // 2)
        x = vadd(l.base, vmul(t, u))
        pts.append((norm_sq(vsub(x, p1)), norm_sq(vsub(x, p2))))
    return DistanceProfile(kind=kind, points=tuple(pts))
