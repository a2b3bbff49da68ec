"""Tests for quadratic forms, classification and rich bases."""
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from app.core.errors import FormParseError, ZeroFormError
from app.geometry.field import primes_below
from app.geometry.projective import ProjPoint
from app.geometry.quadform import (
    IrreducibleRank2,
    NotRich,
    QuadraticForm,
    Rich,
    RichBasis,
    classify,
    diagonalize,
    evaluate,
    gram_rank,
    ideal_quadric_points,
    isotropic_vectors,
    parse_form,
    rank2_discriminant,
    rich_basis,
    zero_count,
)


def sphere(d, p):
    return QuadraticForm(d, {(i, i): 1 for i in range(1, d + 1)}, p)


def test_parse_presets():
    assert parse_form("sphere", 3).coeffs == {(1, 1): 1, (2, 2): 1, (3, 3): 1}
    assert parse_form("Hyperbolic", 2).coeffs == {(1, 2): 1}
    assert parse_form("lorentz", 3).coeffs == {(1, 1): 1, (2, 2): 1, (3, 3): -1}


def test_parse_triples():
    form = parse_form("1,2,1/2; 1,1,3 ;1,1,-1", 2)
    assert form.coeffs == {(1, 1): Fraction(2), (1, 2): Fraction(1, 2)}
    assert form.as_rows() == [[1, 1, 2, 1], [1, 2, 1, 2]]


@pytest.mark.parametrize("spec", ["", "1,2", "2,1,1", "1,3,1", "a,b,c", "1,1,1/0x", "1,1,1/0"])
def test_parse_errors(spec):
    with pytest.raises(FormParseError):
        parse_form(spec, 2)


def test_zero_form_rejected():
    with pytest.raises(ZeroFormError):
        parse_form("1,1,1;1,1,-1", 2)
    with pytest.raises(ZeroFormError):
        QuadraticForm(2, {(1, 1): 7}, 7)


def test_integral_coefficients_are_coprime():
    form = parse_form("1,1,1/2;2,2,3/4", 2)
    assert form.integral_coeffs() == {(1, 1): 2, (2, 2): 3}


def test_evaluate_and_gram_rank():
    q = QuadraticForm(2, {(1, 2): 1}, 5)
    assert evaluate(q, (2, 3)) == 1
    assert gram_rank(q) == 2
    assert gram_rank(QuadraticForm(3, {(1, 1): 1}, 5)) == 1


def test_diagonalize_hyperbolic_pair():
    diagonal = diagonalize(parse_form("1,2,1", 2))
    assert len([x for x in diagonal if x != 0]) == 2


def test_rank2_discriminant():
    assert rank2_discriminant(parse_form("1,1,1;1,2,1;2,2,1", 2)) == -3
    assert rank2_discriminant(parse_form("sphere", 2)) == -4
    assert rank2_discriminant(parse_form("sphere", 3)) is None
    assert rank2_discriminant(sphere(2, 7)) == 3


def test_hyperbolic_basis_over_f5():
    result = classify(QuadraticForm(2, {(1, 2): 1}, 5))
    assert isinstance(result, Rich)
    assert result.basis.vectors == ((1, 0), (1, 1))


def test_circle_basis_over_f5():
    result = classify(sphere(2, 5))
    assert isinstance(result, Rich)
    assert result.basis.vectors == ((1, 2), (1, 0))


def test_circle_over_f7_is_irreducible():
    result = classify(sphere(2, 7))
    assert isinstance(result, IrreducibleRank2)
    assert result.discriminant == 3
    assert result.euler_witness == 6


def test_sphere_dichotomy_up_to_200():
    for prime in primes_below(200):
        p = int(prime)
        circle = classify(sphere(2, p))
        assert isinstance(circle, IrreducibleRank2) == (p % 4 == 3)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 31])
def test_spheres_of_dimension_three_are_rich(p):
    result = classify(sphere(3, p))
    assert isinstance(result, Rich)
    assert result.basis.check(sphere(3, p))


def _brute_force_rich(q):
    vectors = list(product(range(q.prime), repeat=2))
    for u in vectors:
        if any(u) and evaluate(q, u) == 0:
            for v in vectors:
                if evaluate(q, v) != 0 and (u[0] * v[1] - u[1] * v[0]) % q.prime:
                    return True
    return False


@pytest.mark.parametrize("p", [3, 5, 7])
def test_classification_matches_brute_force(p):
    for a, b, c in product(range(p), repeat=3):
        if not (a or b or c):
            continue
        q = QuadraticForm(2, {(1, 1): a, (1, 2): b, (2, 2): c}, p)
        assert isinstance(classify(q), Rich) == _brute_force_rich(q)


def test_random_search_finds_valid_basis():
    q = sphere(3, 13)
    result = rich_basis(q, seed=1, enumeration_limit=0)
    assert isinstance(result, RichBasis)
    assert result.check(q)
    assert rich_basis(q, seed=1, enumeration_limit=0) == result


def test_random_search_reports_irreducible():
    assert isinstance(rich_basis(sphere(2, 7), seed=0, enumeration_limit=0), NotRich)


def test_zero_count():
    for p in (3, 5, 7):
        assert zero_count(QuadraticForm(2, {(1, 2): 1}, p)) == 2 * p - 1
        # every form in d variables has at least p^(d-2) zeros
        assert zero_count(sphere(3, p)) >= p
        assert zero_count(sphere(2, p)) >= 1


def test_ideal_quadric_points():
    q = QuadraticForm(2, {(1, 2): 1}, 5)
    assert ideal_quadric_points(q) == [ProjPoint((0, 1, 0), 5), ProjPoint((0, 0, 1), 5)]
    assert all(evaluate(q, v) == 0 for v in isotropic_vectors(q))


@given(
    st.sampled_from([5, 7, 13]),
    st.lists(st.integers(0, 100), min_size=3, max_size=3),
    st.integers(0, 100),
)
def test_form_is_homogeneous_of_degree_two(p, v, scalar):
    q = QuadraticForm(3, {(1, 1): 2, (1, 3): 3, (2, 2): 1}, p)
    scaled = [scalar * x for x in v]
    assert evaluate(q, scaled) == scalar * scalar * evaluate(q, v) % p
