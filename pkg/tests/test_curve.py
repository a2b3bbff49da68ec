"""Tests for the Veronese map, rational normal curves and the field construction."""
import random
from itertools import combinations, product

import pytest

from app.core.errors import DegenerateConfigurationError, FieldTooSmallError, NotRichError
from app.geometry.curve import (
    canonical_parameters,
    construct_q_generic,
    enumerate_curve,
    interpolate_rnc,
    on_moment_curve,
    veronese,
)
from app.geometry.field import primes_below
from app.geometry.projective import ProjPoint, enumerate_projective_space, is_general_position, normalize
from app.geometry.quadform import QuadraticForm, classify, ideal_points, ideal_quadric_points
from app.geometry.verify import PointSet, points_on_quadric


def sphere(d, p):
    return QuadraticForm(d, {(i, i): 1 for i in range(1, d + 1)}, p)


def test_veronese_map():
    assert veronese(3, ProjPoint((1, 2), 7)) == ProjPoint((1, 2, 4, 1), 7)
    assert veronese(2, ProjPoint((0, 1), 5)) == ProjPoint((0, 0, 1), 5)
    assert veronese(2, ProjPoint((1, 0), 5)) == ProjPoint((1, 0, 0), 5)


def test_moment_curve_membership():
    for r in enumerate_projective_space(1, 7):
        assert on_moment_curve(veronese(3, r))
    assert not on_moment_curve(ProjPoint((1, 0, 1, 0), 7))


def test_canonical_parameters():
    assert [r.coords for r in canonical_parameters(3, 7)] == [(1, 0), (1, 1), (1, 2)]
    assert [r.coords for r in canonical_parameters(4, 3)] == [(1, 0), (1, 1), (1, 2), (0, 1)]
    with pytest.raises(FieldTooSmallError):
        canonical_parameters(5, 3)


def test_interpolated_curve_passes_through_targets():
    q = sphere(3, 11)
    targets = ideal_points(classify(q).basis)
    curve = interpolate_rnc(targets)
    for r, target in zip(curve.parameters, targets):
        assert curve.point(r) == target
        assert curve.contains(target)
    assert all(curve.contains(pt) for pt in enumerate_curve(curve))


def test_interpolation_rejects_dependent_targets():
    p = 7
    targets = [ProjPoint((0, 1, 0), p), ProjPoint((0, 1, 0), p)]
    with pytest.raises(DegenerateConfigurationError):
        interpolate_rnc(targets)


def test_curve_has_p_plus_one_points():
    q = sphere(2, 13)
    curve = interpolate_rnc(ideal_points(classify(q).basis))
    points = enumerate_curve(curve)
    assert len(points) == 14
    assert len(set(points)) == 14


@pytest.mark.parametrize("d,p", [(2, 5), (2, 13), (3, 7), (3, 11), (4, 5), (4, 13)])
def test_construction_size(d, p):
    c = construct_q_generic(sphere(d, p))
    assert c.size == p + 1 - d
    assert len(set(c.coordinates())) == c.size
    assert all(0 <= x < p for pt in c.coordinates() for x in pt)


def test_ideal_points_split_between_quadric_and_infinity():
    q = sphere(3, 7)
    c = construct_q_generic(q)
    common = set(ideal_quadric_points(q))
    assert all(pt in common for pt in c.ideal_points[:-1])
    assert c.ideal_points[-1] not in common


def test_circle_over_f7_is_not_rich():
    with pytest.raises(NotRichError) as info:
        construct_q_generic(sphere(2, 7))
    assert "3 (mod 4)" in str(info.value)


def test_field_too_small():
    with pytest.raises(FieldTooSmallError):
        construct_q_generic(sphere(5, 3))


def test_degenerate_size_when_d_is_p_plus_one():
    c = construct_q_generic(sphere(4, 3))
    assert c.size == 0


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        construct_q_generic(sphere(3, 7), d=2)


@pytest.mark.parametrize("p", [5, 13])
def test_every_quadric_meets_the_circle_construction_in_at_most_three_points(p):
    q = sphere(2, p)
    c = construct_q_generic(q)
    points = PointSet.of(c.points, 2, p)
    worst = max(len(points_on_quadric(points, q, f)) for f in product(range(p), repeat=3))
    assert worst <= 3


def random_targets(rng, d, p):
    while True:
        vectors = [[rng.randrange(p) for _ in range(d + 1)] for _ in range(d)]
        if all(any(v) for v in vectors):
            targets = [normalize(v, p) for v in vectors]
            if is_general_position(targets):
                return targets


@pytest.mark.parametrize("d,p", [(2, 5), (2, 13), (3, 5), (3, 7), (3, 11), (3, 13)])
def test_any_d_plus_one_curve_points_are_in_general_position(d, p):
    rng = random.Random(d * 100 + p)
    curves = [interpolate_rnc(random_targets(rng, d, p)) for _ in range(2)]
    if d == 2 and p % 4 == 1:
        curves.append(interpolate_rnc(ideal_points(classify(sphere(d, p)).basis)))
    for curve in curves:
        points = enumerate_curve(curve)
        assert len(set(points)) == p + 1
        for subset in combinations(points, d + 1):
            assert is_general_position(list(subset))


@pytest.mark.parametrize("p", [int(q) for q in primes_below(50)])
def test_veronese_is_injective(p):
    line = list(enumerate_projective_space(1, p))
    for d in (2, 3, 4):
        assert len({veronese(d, r) for r in line}) == p + 1
