"""Ball charts: simplex leaves, the recursive glued chart, and round trips."""

import random
from fractions import Fraction

import numpy as np
import pytest

from grassball.chamber import (
    ChamberPoint,
    ChartPoint,
    SplitTriple,
    ValidationError,
    assemble,
    ball_chart,
    ball_chart_inverse,
    get_chart,
    split,
)
from grassball.convexoid import DomainError
from grassball.exterior import MultiVector, classify_sign, normalize
from grassball.sampling import random_nonneg_point, random_positive_point


def roundtrip_error(chart, point):
    image = chart.forward(point)
    back = chart.inverse(image)
    keys = set(point.rho.support()) | set(back.rho.support())
    return max(
        abs(float(point.rho.coefficient(k) - back.rho.coefficient(k)))
        for k in keys
    )


def segment_point(a: Fraction) -> ChamberPoint:
    coeffs = {}
    if a:
        coeffs[(1,)] = a
    if a != 1:
        coeffs[(2,)] = 1 - a
    return ChamberPoint(MultiVector(2, 1, coeffs))


# -- base cases ----------------------------------------------------------------


def test_g12_interval_chart_monotone_with_endpoints():
    grid = [Fraction(i, 8) for i in range(9)]
    values = [ball_chart(segment_point(a)).coords[0] for a in grid]
    assert values[0] == -1.0 and values[-1] == 1.0
    assert all(b > a for a, b in zip(values, values[1:]))
    assert abs(values[4]) < 1e-12  # barycenter to center


def test_g1n_and_corank_one_round_trips():
    rng = random.Random(30)
    for k, n in [(1, 3), (1, 4), (1, 5), (2, 3), (3, 4), (4, 5)]:
        chart = get_chart(k, n)
        assert chart.dim == k * (n - k)
        for _ in range(25):
            point = random_positive_point(rng, k, n)
            assert roundtrip_error(chart, point) < 1e-9


def test_simplex_boundary_maps_to_sphere_exactly():
    rng = random.Random(31)
    for _ in range(20):
        point = random_nonneg_point(rng, 1, 4)
        coords = ball_chart(point).coords
        norm = float(np.linalg.norm(coords))
        if classify_sign(point.rho).value == "Positive":
            assert norm < 1
        else:
            assert abs(norm - 1) < 1e-12


def test_top_grade_chart_is_trivial():
    chart = get_chart(3, 3)
    point = ChamberPoint(MultiVector.basis(3, (1, 2, 3)))
    assert chart.forward(point).coords == ()
    assert chart.inverse(()).rho == point.rho


# -- recursive chart -------------------------------------------------------------


def test_g24_dimension_and_norms():
    chart = get_chart(2, 4)
    assert chart.dim == 4
    rng = random.Random(32)
    for _ in range(10):
        point = random_positive_point(rng, 2, 4)
        c = chart.forward(point)
        assert len(c.coords) == 4
        assert float(np.linalg.norm(c.coords)) < 1


def test_g24_round_trips():
    chart = get_chart(2, 4)
    rng = random.Random(33)
    worst = 0.0
    for _ in range(40):
        point = random_positive_point(rng, 2, 4)
        worst = max(worst, roundtrip_error(chart, point))
    assert worst < 1e-6


def test_g24_degenerate_strata_round_trip():
    chart = get_chart(2, 4)
    rng = random.Random(34)
    for _ in range(12):
        point = random_nonneg_point(rng, 2, 4)
        err = roundtrip_error(chart, point)
        assert err < 1e-6


def test_g24_boundary_lands_near_sphere_positive_inside():
    chart = get_chart(2, 4)
    rng = random.Random(35)
    printed = []
    for _ in range(25):
        point = random_nonneg_point(rng, 2, 4)
        norm = float(np.linalg.norm(chart.forward(point).coords))
        if classify_sign(point.rho).value == "Positive":
            assert norm < 1
        else:
            printed.append(norm)
    low = min(printed)
    print(f"\n[soft] zero-coefficient samples: min norm {low:.6f} (want >= 1-1e-4)")
    assert low >= 1 - 1e-4


def test_gluing_seam_continuity():
    chart = get_chart(2, 4)
    base = split(random_positive_point(random.Random(36), 2, 4))
    eta, omega = base.eta, base.omega
    at_seam = chart.forward(assemble(SplitTriple(Fraction(1, 2), eta, omega)))
    for dt in (Fraction(1, 10**6), -Fraction(1, 10**6)):
        nearby = chart.forward(
            assemble(SplitTriple(Fraction(1, 2) + dt, eta, omega))
        )
        gap = float(
            np.linalg.norm(np.array(at_seam.coords) - np.array(nearby.coords))
        )
        assert gap < 1e-4


def test_chart_injectivity_on_samples():
    chart = get_chart(2, 4)
    rng = random.Random(37)
    points = [random_positive_point(rng, 2, 4) for _ in range(60)]
    images = [np.array(chart.forward(p).coords) for p in points]
    for _ in range(500):
        i, j = rng.randrange(60), rng.randrange(60)
        if i == j:
            continue
        gap = max(
            abs(float(points[i].rho.coefficient(k) - points[j].rho.coefficient(k)))
            for k in set(points[i].rho.support()) | set(points[j].rho.support())
        )
        if gap > 1e-8:
            assert float(np.linalg.norm(images[i] - images[j])) > 0


def test_t_degenerate_points_round_trip():
    chart = get_chart(2, 4)
    rng = random.Random(38)
    eta = random_positive_point(rng, 1, 3).rho.shift(+1, n=4)
    top = assemble(SplitTriple(Fraction(1), eta, None))
    assert roundtrip_error(chart, top) < 1e-6
    omega = random_positive_point(rng, 2, 3).rho.shift(+1, n=4)
    bottom = assemble(SplitTriple(Fraction(0), None, omega))
    assert roundtrip_error(chart, bottom) < 1e-6


# -- interface edges ---------------------------------------------------------------


def test_chart_point_validation_and_inverse_domain():
    with pytest.raises(ValidationError):
        ChartPoint((1.0, 1.0))
    with pytest.raises(DomainError):
        ball_chart_inverse((0.9, 0.9, 0.9, 0.9), 2, 4)
    with pytest.raises(ValidationError):
        get_chart(2, 4).inverse((0.0, 0.0))  # wrong dimension


def test_chart_accepts_raw_coordinate_sequences():
    point = ball_chart_inverse((0.0, 0.0, 0.0), 1, 4)
    assert point.rho == normalize(
        MultiVector(4, 1, {(1,): 1, (2,): 1, (3,): 1, (4,): 1})
    )


def test_chart_rejects_wrong_chamber():
    chart = get_chart(2, 4)
    with pytest.raises(ValidationError):
        chart.forward(ChamberPoint(MultiVector.basis(5, (1, 2))))
