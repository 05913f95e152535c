import math
from fractions import Fraction

import numpy as np
import pytest

from nodalparity.components.construct import (
    XiPoint,
    branch_quadrant_check,
    default_epsilon,
    extract_zero_points,
    half_period_shift_check,
    hyperbola_residual,
    inverse_xi,
    make_construction,
    negative_area,
    negative_area_limit,
    reflection_symmetry_check,
    saddle_channel_sign,
    verify_odd_count,
    xi_transform,
)
from nodalparity.components.nodal import decompose_at
from nodalparity.components.spectra import TorusPoint, evaluate
from nodalparity.config.config import CountConfig
from nodalparity.errors import ConstructionError


@pytest.fixture(scope="module")
def base_case():
    return make_construction(1, 1, 2, 0.1)


# ---------------------------------------------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------------------------------------------

def test_base_case_shape(base_case):
    assert base_case.torus.rho_sq == Fraction(1, 3)
    assert base_case.is_base_case
    assert base_case.u.eigenspace.eigenvalue == 4
    assert (base_case.expected_count, base_case.predicted_count, base_case.channel_sign) == (3, 3, -1)


@pytest.mark.parametrize(
    "m, n, k, rho_sq, expected, predicted",
    [
        (1, 2, 2, Fraction(4, 3), 5, 5),
        (2, 1, 3, Fraction(1, 32), 5, 8),
        (3, 1, 2, Fraction(1, 27), 7, 7),
        (1, 1, 4, Fraction(1, 15), 3, 3),
    ],
)
def test_family_parameters(m, n, k, rho_sq, expected, predicted):
    c = make_construction(m, n, k)
    assert c.torus.rho_sq == rho_sq
    assert c.u.eigenspace.eigenvalue == k * k * m * m
    assert (c.expected_count, c.predicted_count) == (expected, predicted)


@pytest.mark.parametrize("m, n, k, eps", [(1, 1, 1, 0.1), (0, 1, 2, 0.1), (1, 1, 2, 0.0), (1, 1, 2, 1.5)])
def test_bad_parameters(m, n, k, eps):
    with pytest.raises(ConstructionError):
        make_construction(m, n, k, eps)


def test_default_epsilon_shrinks_with_the_grid():
    assert default_epsilon(1, 1, 2) == 0.1
    assert default_epsilon(3, 1, 2) == pytest.approx(1 / 24)


@pytest.mark.parametrize("k, sign", [(2, -1), (3, 0), (4, 1), (5, 0), (6, -1), (8, 1)])
def test_channel_sign(k, sign):
    assert saddle_channel_sign(k) == sign


# ---------------------------------------------------------------------------------------------------------------
# xi coordinates and the hyperbola
# ---------------------------------------------------------------------------------------------------------------

def test_centre_of_cell_maps_to_origin(base_case):
    xi = xi_transform(TorusPoint(math.pi / 2, base_case.torus.rho * math.pi / 2), base_case)
    assert (xi.xi1, xi.xi2) == pytest.approx((0.0, 0.0), abs=1e-15)
    back = inverse_xi(XiPoint(0.3, -0.4), base_case)
    again = xi_transform(back, base_case)
    assert (again.xi1, again.xi2) == pytest.approx((0.3, -0.4), abs=1e-14)


def test_xi_transform_stays_in_the_cell(base_case):
    with pytest.raises(ConstructionError):
        xi_transform(TorusPoint(4.0, 0.1), base_case)
    with pytest.raises(ConstructionError):
        XiPoint(1.5, 0.0)


def test_hyperbola_points_are_nodal(base_case):
    # xi2 = eps (1 - 2 xi1^2) / xi1 on the curve
    eps = base_case.epsilon
    for xi1 in (-0.9, -0.5, 0.2, 0.6):
        xi = XiPoint(xi1, eps * (1 - 2 * xi1 ** 2) / xi1)
        assert evaluate(base_case.u, inverse_xi(xi, base_case)) == pytest.approx(0.0, abs=1e-14)


def test_extracted_points_fit_the_hyperbola(base_case):
    points = extract_zero_points(base_case, 1024)
    assert len(points) > 100
    assert hyperbola_residual(base_case, points) < 1e-3


def test_hyperbola_is_for_k_two_only():
    with pytest.raises(ConstructionError, match="only for k=2"):
        hyperbola_residual(make_construction(1, 1, 3), np.zeros((1, 2)))


@pytest.mark.parametrize("eps", [0.1, 0.5])
def test_branches_sit_in_diagonal_quadrants(eps):
    report = branch_quadrant_check(make_construction(1, 1, 2, eps), resolution=1024)
    assert report.passed
    assert report.lower_left > 0 and report.upper_right > 0
    if report.min_off_diagonal_abs_xi1 is not None:
        assert report.min_off_diagonal_abs_xi1 > 1 / math.sqrt(2) - 1e-2


def test_misplaced_point_is_flagged(base_case):
    with pytest.raises(ConstructionError, match="off-diagonal"):
        branch_quadrant_check(base_case, np.array([[-0.5, -0.2], [0.5, 0.3], [0.3, -0.3]]))


# ---------------------------------------------------------------------------------------------------------------
# Symmetries
# ---------------------------------------------------------------------------------------------------------------

def test_reflections_are_exact(base_case):
    assert reflection_symmetry_check(base_case, 1000, seed=42).max <= 1e-12


def test_half_period_swaps_positive_domains(base_case):
    d = decompose_at(base_case.u, 256, 1e-9)
    report = half_period_shift_check(base_case, d)
    assert report.shift == (128, 128)
    assert report.max_discrepancy == 0
    assert report.fixed_domains == 1
    negative = [i for i, s in enumerate(d.domain_signs) if s < 0]
    assert report.permutation[negative[0]] == negative[0]


def test_half_period_needs_even_k():
    c = make_construction(1, 1, 3)
    with pytest.raises(ConstructionError):
        half_period_shift_check(c, decompose_at(c.u, 64, 1e-9))


# ---------------------------------------------------------------------------------------------------------------
# Counts
# ---------------------------------------------------------------------------------------------------------------

def test_base_case_count(base_case):
    report = verify_odd_count(base_case)
    assert report.actual_count == 3
    assert report.matches_expected and report.passed
    assert (report.positive_domains, report.negative_domains) == (2, 1)


@pytest.mark.slow
@pytest.mark.parametrize("m, n, k, count", [(1, 2, 2, 5), (2, 1, 3, 8), (3, 1, 2, 7)])
def test_family_counts(m, n, k, count):
    report = verify_odd_count(make_construction(m, n, k))
    assert report.actual_count == count
    assert report.passed


@pytest.mark.slow
def test_negative_area_approaches_half_the_torus():
    c = make_construction(1, 1, 2, 0.01)
    result = verify_odd_count(c, CountConfig(base_resolution=512, max_resolution=4096))
    assert negative_area(c, result.decomposition) == pytest.approx(negative_area_limit(c), rel=0.03)
