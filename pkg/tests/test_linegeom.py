import random
from fractions import Fraction

import pytest

from linerig import (
    Line,
    LineSet,
    UnsupportedLineSet,
    classify_pair,
    closest_pair,
    distance_profile,
    is_general_position,
    isometry_group,
    line_from_point_direction,
)
from linerig.linegeom import (
    CoincidentPoints,
    DimensionMismatch,
    DimensionTooSmall,
    GENERIC,
    PARALLEL,
    PERPENDICULAR,
    ParallelLines,
    PointOffLine,
    Violation,
    ZeroDirection,
    apply_isometry,
    line_parameter,
    reflection_isometry,
    translation_isometry,
    weakly_concurrent,
)
from linerig.randgen import random_line

from _fixtures import AXIS, general_lines


def test_standard_form_is_canonical():
    """Any (point, direction) presentation of a line gives the same object."""
    a = line_from_point_direction((1, 2), (3, 4))
    b = line_from_point_direction((4, 6), (-6, -8))  # other point, scaled direction
    assert a == b
    assert hash(a) == hash(b)
    c = line_from_point_direction((1, 3), (3, 4))  # parallel but distinct
    assert a != c


def test_standard_form_canonical_3d_random():
    rng = random.Random(1)
    for _ in range(200):
        l = random_line(3, rng)
        t = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        s = Fraction(rng.randint(1, 9), rng.randint(1, 9)) * rng.choice((1, -1))
        p = tuple(b + t * u for b, u in zip(l.base, l.direction))
        again = line_from_point_direction(p, tuple(s * u for u in l.direction))
        assert again == l


def test_constructor_errors():
    with pytest.raises(ZeroDirection):
        line_from_point_direction((0, 0), (0, 0))
    with pytest.raises(DimensionTooSmall):
        line_from_point_direction((0,), (1,))
    with pytest.raises(DimensionMismatch):
        line_from_point_direction((0, 0), (1, 0, 0))


def test_line_parameter_roundtrip():
    l = line_from_point_direction((2, 1), (3, -5))
    for t in (Fraction(0), Fraction(7, 3), Fraction(-11, 2)):
        p = tuple(b + t * u for b, u in zip(l.base, l.direction))
        assert line_parameter(l, p) == t
    with pytest.raises(PointOffLine):
        line_parameter(l, (100, 100))


def test_classify_pair_exact():
    h = line_from_point_direction((0, 0), (1, 0))
    v = line_from_point_direction((5, 5), (0, 3))
    h2 = line_from_point_direction((0, 7), (-2, 0))
    g = line_from_point_direction((0, 0), (1, 2))
    assert classify_pair(h, v) == PERPENDICULAR
    assert classify_pair(h, h2) == PARALLEL
    assert classify_pair(h, g) == GENERIC
    with pytest.raises(DimensionMismatch):
        classify_pair(h, line_from_point_direction((0, 0, 0), (1, 0, 0)))


def test_classify_pair_float_tolerance():
    h = line_from_point_direction((0.0, 0.0), (1.0, 0.0))
    near_parallel = line_from_point_direction((0.0, 1.0), (1.0, 1e-12))
    near_perp = line_from_point_direction((0.0, 0.0), (1e-12, 1.0))
    assert classify_pair(h, near_parallel) == PARALLEL
    assert classify_pair(h, near_perp) == PERPENDICULAR
    assert classify_pair(h, line_from_point_direction((0.0, 0.0), (1.0, 0.5))) == GENERIC


def test_closest_pair_intersecting():
    a = line_from_point_direction((0, 0), (1, 1))
    b = line_from_point_direction((4, 0), (-1, 1))
    xa, xb = closest_pair(a, b)
    assert xa == xb == (Fraction(2), Fraction(2))
    with pytest.raises(ParallelLines):
        closest_pair(a, line_from_point_direction((0, 5), (2, 2)))


def test_closest_pair_skew_is_perpendicular_foot():
    rng = random.Random(5)
    for _ in range(100):
        a, b = random_line(3, rng), random_line(3, rng)
        if classify_pair(a, b) == PARALLEL:
            continue
        xa, xb = closest_pair(a, b)
        w = tuple(p - q for p, q in zip(xa, xb))
        assert sum(wi * ui for wi, ui in zip(w, a.direction)) == 0
        assert sum(wi * vi for wi, vi in zip(w, b.direction)) == 0


def test_weakly_concurrent_plane_is_concurrency():
    a = line_from_point_direction((0, 0), (1, 0))
    b = line_from_point_direction((0, 0), (1, 1))
    c = line_from_point_direction((0, 0), (1, 2))
    assert weakly_concurrent(a, b, c)
    c_off = line_from_point_direction((1, 0), (1, 2))
    assert not weakly_concurrent(a, b, c_off)


def test_general_position_detects_each_violation():
    a = line_from_point_direction((0, 0), (1, 0))
    assert is_general_position(LineSet([a])) is True

    par = LineSet([a, line_from_point_direction((0, 1), (2, 0))])
    v = is_general_position(par)
    assert isinstance(v, Violation) and v.kind == "parallel" and not v
    perp = LineSet([a, line_from_point_direction((0, 1), (0, 1))])
    assert is_general_position(perp).kind == "perpendicular"

    conc = LineSet(
        [
            a,
            line_from_point_direction((0, 0), (1, 1)),
            line_from_point_direction((0, 0), (1, 2)),
        ]
    )
    v = is_general_position(conc)
    assert v.kind == "weakly_concurrent" and set(v.lines) == {0, 1, 2}

    good = LineSet(
        [
            a,
            line_from_point_direction((0, 0), (1, 1)),
            line_from_point_direction((1, 0), (1, 2)),
        ]
    )
    assert is_general_position(good) is True


def test_lineset_rejects_empty_and_mixed_dimensions():
    with pytest.raises(ValueError):
        LineSet([])
    with pytest.raises(DimensionMismatch):
        LineSet([AXIS, line_from_point_direction((0, 0, 0), (1, 0, 0))])


def test_isometry_group_structures():
    assert isometry_group(general_lines(1)).structure == "euclidean_1d"
    assert isometry_group(general_lines(2)).structure == "cyclic_2"
    assert isometry_group(general_lines(3)).structure == "trivial"
    par = LineSet(
        [
            line_from_point_direction((0, 0), (1, 2)),
            line_from_point_direction((0, 5), (2, 4)),
        ]
    )
    assert isometry_group(par).structure == "euclidean_1d"
    perp = LineSet([AXIS, line_from_point_direction((0, 1), (0, 1))])
    with pytest.raises(UnsupportedLineSet):
        isometry_group(perp)


def test_half_turn_is_an_exact_involution_fixing_closest_points():
    rng = random.Random(9)
    for trial in range(50):
        ls = general_lines(2, d=2 + trial % 2, seed=900 + trial)
        gen = isometry_group(ls).generator
        x0, x1 = closest_pair(ls[0], ls[1])
        assert apply_isometry(gen, x0, ls[0]) == x0
        assert apply_isometry(gen, x1, ls[1]) == x1
        for i in range(2):
            t = Fraction(rng.randint(-50, 50), rng.randint(1, 9))
            p = tuple(b + t * u for b, u in zip(ls[i].base, ls[i].direction))
            q = apply_isometry(gen, p, ls[i])
            assert q != p or t == line_parameter(ls[i], x0 if i == 0 else x1)
            assert apply_isometry(gen, q, ls[i]) == p


def test_half_turn_swaps_no_lines():
    """The generator maps each line onto itself, not onto the other."""
    ls = general_lines(2, seed=4)
    gen = isometry_group(ls).generator
    t = Fraction(3)
    p = tuple(b + t * u for b, u in zip(ls[0].base, ls[0].direction))
    q = apply_isometry(gen, p, ls[0])
    assert line_parameter(ls[0], q) is not None  # stays on line 0


def test_parallel_regime_isometries():
    ls = LineSet(
        [
            line_from_point_direction((0, 0), (1, 1)),
            line_from_point_direction((3, 0), (2, 2)),
        ]
    )
    tr = translation_isometry(ls, Fraction(5, 2))
    p = (Fraction(0), Fraction(0))
    assert apply_isometry(tr, p, ls[0]) == (Fraction(5, 2), Fraction(5, 2))
    refl = reflection_isometry(ls, (0, 0))
    q = apply_isometry(refl, p, ls[0])
    assert q == p  # center is on the mirror
    r = apply_isometry(refl, (Fraction(1), Fraction(1)), ls[0])
    assert r == (Fraction(-1), Fraction(-1))
    with pytest.raises(UnsupportedLineSet):
        translation_isometry(general_lines(2), 1)


def test_apply_isometry_rejects_points_off_line():
    ls = general_lines(2, seed=2)
    gen = isometry_group(ls).generator
    with pytest.raises(PointOffLine):
        apply_isometry(gen, (1000, 1000), ls[0])


def test_distance_profile_worked_examples():
    """Perpendicular segment -> half-line; generic -> parabola."""
    prof = distance_profile(AXIS, (0, 1), (0, -1))
    assert prof.kind == "half_line"
    assert list(prof.points) == [(Fraction(t * t + 1), Fraction(t * t + 1)) for t in range(-4, 5)]

    prof = distance_profile(AXIS, (0, 1), (1, 0))
    assert prof.kind == "parabola"
    assert list(prof.points) == [
        (Fraction(t * t + 1), Fraction(t * t + 1 - 2 * t)) for t in range(-4, 5)
    ]


def test_distance_profile_errors():
    with pytest.raises(CoincidentPoints):
        distance_profile(AXIS, (1, 1), (1, 1))
    with pytest.raises(DimensionMismatch):
        distance_profile(AXIS, (0, 0, 0), (1, 1, 1))


def test_line_is_hashable_and_usable_in_sets():
    rng = random.Random(3)
    seen = {random_line(2, rng) for _ in range(30)}
    assert all(isinstance(l, Line) for l in seen)
