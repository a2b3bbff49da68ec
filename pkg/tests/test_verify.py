"""Tests for the exhaustive hyperplane and quadric scans."""
import random
from itertools import combinations
from math import comb, prod

import pytest

from app.core.errors import ContractViolationError, DegenerateConfigurationError, FormMismatchError
from app.geometry import linalg
from app.geometry.curve import construct_q_generic
from app.geometry.field import primes_below
from app.geometry.quadform import IrreducibleRank2, QuadraticForm, classify, evaluate, parse_form
from app.geometry.verify import (
    PointSet,
    bordered_determinant,
    check_hyperplanes,
    check_quadrics,
    choose_moduli,
    hyperplane_rows,
    is_q_generic,
    lex_rank,
    points_on_quadric,
    quadric_rows,
    unique_quadric_through,
)
from app.models.certificate import CertificateStatus, ViolationKind

CIRCLE = parse_form("sphere", 2)


def field_sphere(d, p):
    return QuadraticForm(d, {(i, i): 1 for i in range(1, d + 1)}, p)


@pytest.fixture(scope="module")
def circle_13():
    c = construct_q_generic(field_sphere(2, 13))
    return PointSet.of(c.points, 2, 13)


def test_unit_triangle_passes():
    D = PointSet(((0, 0), (1, 0), (0, 1)), 2)
    cert = is_q_generic(D, CIRCLE)
    assert cert.passed
    assert cert.hyperplane_subsets == 1
    assert cert.quadric_subsets == 0
    assert cert.arithmetic == "integer"


def test_collinear_points_violate_hyperplane_condition():
    D = PointSet(((0, 0), (1, 1), (2, 2), (0, 1)), 2)
    cert = is_q_generic(D, CIRCLE)
    assert cert.status == CertificateStatus.HYPERPLANE_VIOLATION
    assert cert.violation.kind == ViolationKind.HYPERPLANE
    assert cert.violation.subset == [0, 1, 2]
    assert cert.hyperplane_subsets == 1
    w = cert.violation.witness
    for i in cert.violation.subset:
        x, y = D.points[i]
        assert w[0] + w[1] * x + w[2] * y == 0


def test_unit_square_lies_on_a_circle():
    D = PointSet(((0, 0), (1, 0), (0, 1), (1, 1)), 2)
    cert = is_q_generic(D, CIRCLE)
    assert cert.status == CertificateStatus.QUADRIC_VIOLATION
    assert cert.violation.subset == [0, 1, 2, 3]
    assert cert.quadric_subsets == 1
    w = cert.violation.witness
    assert w[-1] != 0
    for x, y in D.points:
        assert w[0] + w[1] * x + w[2] * y + w[3] * (x * x + y * y) == 0


def test_unit_square_is_generic_for_another_form():
    # no hyperbola x*y + f = 0 passes through all four corners
    D = PointSet(((0, 0), (1, 0), (0, 1), (1, 1)), 2)
    assert is_q_generic(D, parse_form("hyperbolic", 2)).passed


def test_quadric_check_requires_passing_hyperplane_check():
    D = PointSet(((0, 0), (1, 1), (2, 2), (0, 1)), 2)
    with pytest.raises(ContractViolationError):
        check_quadrics(D, CIRCLE)
    failed = check_hyperplanes(D)
    with pytest.raises(ContractViolationError):
        check_quadrics(D, CIRCLE, failed)
    other = check_hyperplanes(PointSet(((0, 0), (1, 0), (0, 1)), 2))
    with pytest.raises(ContractViolationError):
        check_quadrics(D, CIRCLE, other)


def test_empty_and_tiny_sets_pass():
    cert = is_q_generic(PointSet((), 2), CIRCLE)
    assert cert.passed
    assert cert.subsets_tested == 0
    assert cert.max_hyperplane_incidence == 0
    assert is_q_generic(PointSet(((5, 5),), 2), CIRCLE).passed


def test_duplicate_point_is_a_violation():
    D = PointSet(((0, 0), (0, 0), (3, 1)), 2)
    cert = is_q_generic(D, CIRCLE)
    assert cert.status == CertificateStatus.HYPERPLANE_VIOLATION
    assert cert.violation.subset == [0, 1, 2]


def test_circle_construction_over_f13(circle_13):
    cert = is_q_generic(circle_13, field_sphere(2, 13))
    assert cert.passed
    assert cert.num_points == 12
    assert cert.subsets_tested == comb(12, 3) + comb(12, 4)
    assert cert.max_hyperplane_incidence == 2
    assert cert.max_quadric_incidence == 3
    assert cert.incidence_exact
    assert cert.arithmetic == "F_13"


def test_incidence_not_counted_on_request(circle_13):
    cert = is_q_generic(circle_13, field_sphere(2, 13), count_incidences=False)
    assert cert.passed
    assert cert.max_hyperplane_incidence == 2
    assert cert.max_quadric_incidence == 3


def test_subsets_of_a_generic_set_stay_generic(circle_13):
    rng = random.Random(7)
    q = field_sphere(2, 13)
    for _ in range(10):
        kept = sorted(rng.sample(range(len(circle_13)), rng.randint(0, 11)))
        subset = PointSet([circle_13.points[i] for i in kept], 2, 13)
        assert is_q_generic(subset, q).passed


def test_four_collinear_points_are_counted():
    D = PointSet(((0, 0), (1, 1), (2, 2), (3, 3), (0, 1)), 2)
    counted = check_hyperplanes(D, count_incidences=True)
    assert counted.max_incidence == 4
    assert counted.incidence_exact
    uncounted = check_hyperplanes(D, count_incidences=False)
    assert uncounted.max_incidence == 3
    assert not uncounted.incidence_exact


def test_points_in_a_hyperplane():
    D = PointSet(((0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)), 3)
    result = check_hyperplanes(D, count_incidences=True)
    assert not result.passed
    assert result.max_incidence == 4
    assert result.violation.subset == [0, 1, 2, 3]


def test_lex_rank():
    assert lex_rank((0, 1, 2), 5) == 0
    assert lex_rank((0, 1, 3), 5) == 1
    assert lex_rank((2, 3, 4), 5) == 9
    ranked = [lex_rank(s, 6) for s in combinations(range(6), 4)]
    assert ranked == list(range(comb(6, 4)))


def test_moduli_exceed_hadamard_bound():
    rows = [[1, 7, -3, 49 + 9], [1, 100, 100, 20000], [1, 0, 0, 0]]
    moduli = choose_moduli(rows, 4, None)
    norm2 = max(sum(x * x for x in row) for row in rows)
    assert prod(moduli) ** 2 > 4 * norm2 ** 4
    assert all(m < 1 << 29 for m in moduli)
    assert choose_moduli(rows, 4, 7) == (7,)


def test_form_and_point_arithmetic_must_agree():
    D = PointSet(((0, 0), (1, 0), (0, 1), (1, 1)), 2)
    with pytest.raises(FormMismatchError):
        is_q_generic(D, field_sphere(2, 5))
    with pytest.raises(FormMismatchError):
        is_q_generic(D.reduced(5), CIRCLE)
    with pytest.raises(FormMismatchError):
        is_q_generic(D.reduced(5), field_sphere(2, 7))


def test_unique_quadric_through_three_points():
    f = unique_quadric_through([(0, 0), (1, 0), (0, 1)], CIRCLE)
    assert f == [0, -1, -1]
    D = PointSet(((0, 0), (1, 0), (0, 1), (1, 1), (2, 0)), 2)
    assert points_on_quadric(D, CIRCLE, f) == [0, 1, 2, 3]


def test_unique_quadric_over_field():
    q = field_sphere(2, 7)
    f = unique_quadric_through([(0, 0), (1, 0), (0, 1)], q)
    assert [int(c) for c in f] == [0, 6, 6]


def test_unique_quadric_needs_independent_points():
    with pytest.raises(DegenerateConfigurationError):
        unique_quadric_through([(0, 0), (1, 1), (2, 2)], CIRCLE)


def _first_vanishing(rows, size, prime):
    for subset in combinations(range(len(rows)), size):
        if linalg.determinant([rows[i] for i in subset], prime) == 0:
            return list(subset)
    return None


def _brute_force(D, q):
    first = _first_vanishing(hyperplane_rows(D), D.dim + 1, D.prime)
    if first is not None:
        return CertificateStatus.HYPERPLANE_VIOLATION, first
    first = _first_vanishing(quadric_rows(D, q), D.dim + 2, D.prime)
    if first is not None:
        return CertificateStatus.QUADRIC_VIOLATION, first
    return CertificateStatus.PASS, None


def test_scan_agrees_with_brute_force_over_fields():
    rng = random.Random(2024)
    for _ in range(200):
        p = rng.choice([5, 7, 11])
        d = rng.choice([2, 3])
        q = QuadraticForm(d, {(i, j): rng.randrange(p) for i in range(1, d + 1)
                              for j in range(i, d + 1)} | {(1, 1): 1}, p)
        D = PointSet([[rng.randrange(p) for _ in range(d)] for _ in range(rng.randint(d + 1, 7))], d, p)
        cert = is_q_generic(D, q)
        status, subset = _brute_force(D, q)
        assert cert.status == status
        assert (cert.violation.subset if cert.violation else None) == subset


def test_scan_agrees_with_brute_force_over_integers():
    rng = random.Random(99)
    forms = [CIRCLE, parse_form("hyperbolic", 2), parse_form("1,1,1;1,2,1/2;2,2,-3", 2)]
    for _ in range(150):
        q = rng.choice(forms)
        D = PointSet([[rng.randint(-4, 4) for _ in range(2)] for _ in range(rng.randint(3, 7))], 2)
        cert = is_q_generic(D, q)
        status, subset = _brute_force(D, q)
        assert cert.status == status
        assert (cert.violation.subset if cert.violation else None) == subset
        if cert.violation:
            assert cert.violation.determinant == 0


def test_threads_do_not_change_the_certificate():
    rng = random.Random(5)
    D = PointSet([[rng.randint(0, 30) for _ in range(2)] for _ in range(14)], 2)
    single = is_q_generic(D, CIRCLE, threads=1)
    parallel = is_q_generic(D, CIRCLE, threads=2)
    assert single == parallel


def test_quadric_rows_append_form_value():
    D = PointSet(((2, 3),), 2)
    assert quadric_rows(D, CIRCLE) == [[1, 2, 3, int(evaluate(CIRCLE, (2, 3)))]]


@pytest.mark.parametrize("d", [2, 3])
def test_bordered_determinant_agrees_with_solving_for_the_quadric(d):
    rng = random.Random(d)
    q = parse_form("sphere", d)
    agreed = 0
    while agreed < 500:
        pts = [[rng.randint(-10, 10) for _ in range(d)] for _ in range(d + 2)]
        if linalg.rank([[1, *pt] for pt in pts[:-1]]) <= d:
            continue
        D = PointSet(pts, d)
        vanishes = bordered_determinant(quadric_rows(D, q)) == 0
        f = unique_quadric_through(pts[:-1], q)
        on_quadric = points_on_quadric(PointSet(pts[-1:], d), q, f) == [0]
        assert vanishes == on_quadric
        agreed += 1


SPHERE_MATRIX = [(d, int(p)) for d in (2, 3, 4) for p in sorted(primes_below(97), key=int) if int(p) >= 5]


@pytest.mark.parametrize("p", [p for d, p in SPHERE_MATRIX if d == 4])
def test_four_dimensional_sphere_sizes_up_to_97(p):
    c = construct_q_generic(field_sphere(4, p))
    assert c.size == p - 3
    assert len(set(c.coordinates())) == c.size


@pytest.mark.slow
@pytest.mark.parametrize("d,p", SPHERE_MATRIX)
def test_sphere_constructions_over_primes_up_to_97(d, p):
    q = field_sphere(d, p)
    if isinstance(classify(q), IrreducibleRank2):
        assert d == 2 and p % 4 == 3
        return
    c = construct_q_generic(q)
    assert c.size == p + 1 - d
    certificate = is_q_generic(PointSet.of(c.points, d, p), q, count_incidences=False, threads=4)
    assert certificate.passed
