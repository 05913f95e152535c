import math
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st
import numpy as np
import pytest

from nodalparity.components.antisym import (
    TranslationVector,
    antisymmetry_vector,
    basis_action,
    best_sampling_residual,
    candidate_grid,
    compose_action,
    grid_shift,
    pair_domains,
    pairing_resolution,
    regime_of,
    verify_by_sampling,
    verify_on_basis,
)
from nodalparity.components.nodal import decompose_at
from nodalparity.components.spectra import (
    BasisFunction,
    Family,
    TorusShape,
    basis_eigenfunction,
    eigenfunction_from_terms,
    eigenspace_for,
    eigenspace_of_index,
    enumerate_eigenspaces,
    random_eigenfunction,
)
from nodalparity.config.constants import Regime
from nodalparity.errors import AntisymmetryError, PairingError, UnsupportedRegimeError


# ---------------------------------------------------------------------------------------------------------------
# Regimes and vectors
# ---------------------------------------------------------------------------------------------------------------

def test_regimes(square_torus, third_torus):
    assert regime_of(square_torus)[0] == Regime.SQUARE
    assert regime_of(TorusShape.irrational(1 / math.pi))[0] == Regime.IRRATIONAL
    assert regime_of(TorusShape.rational(1, 5))[0] == Regime.ODD_FORM
    with pytest.raises(UnsupportedRegimeError, match="no parity guarantee"):
        regime_of(third_torus)


@pytest.mark.parametrize("lam, expected", [(2, (1, 0)), (4, (Fraction(1, 2), Fraction(1, 2))), (25, (1, 1)), (8, (Fraction(1, 2), 0))])
def test_square_torus_vectors(square_torus, lam, expected):
    v = antisymmetry_vector(eigenspace_for(square_torus, lam), square_torus)
    assert (v.v1_over_pi, v.v2_over_rho_pi) == expected


def test_irrational_vector_for_vertical_mode():
    t = TorusShape.irrational(1 / math.pi)
    v = antisymmetry_vector(eigenspace_of_index(t, 0, 3), t)
    assert (v.v1_over_pi, v.v2_over_rho_pi) == (0, Fraction(1, 3))
    v = antisymmetry_vector(eigenspace_of_index(t, 2, 1), t)
    assert (v.v1_over_pi, v.v2_over_rho_pi) == (Fraction(1, 2), 0)


def test_unsupported_torus_has_no_vector(third_torus):
    with pytest.raises(UnsupportedRegimeError):
        antisymmetry_vector(eigenspace_for(third_torus, 4), third_torus)


# ---------------------------------------------------------------------------------------------------------------
# Exact basis action
# ---------------------------------------------------------------------------------------------------------------

def test_half_turn_flips_product_of_sines(square_torus):
    space = eigenspace_for(square_torus, 2)
    action = basis_action(space, TranslationVector(1, 0))
    ss = BasisFunction(1, 1, Family.SS)
    assert action.images[ss] == [(-1, ss)]
    assert action.is_minus_identity()


def test_all_twelve_flip_at_25(square_torus):
    space = eigenspace_for(square_torus, 25)
    action = verify_on_basis(space, antisymmetry_vector(space, square_torus))
    assert len(action.images) == 12


def test_wrong_vector_names_the_offender(square_torus):
    with pytest.raises(AntisymmetryError) as info:
        verify_on_basis(eigenspace_for(square_torus, 4), TranslationVector(1, 0))
    assert info.value.basis_function == BasisFunction(0, 2, Family.CC)


def test_quarter_turn_mixes_families(square_torus):
    space = eigenspace_for(square_torus, 1)
    action = basis_action(space, TranslationVector(Fraction(1, 2), 0))
    # cos(x1 + pi/2) = -sin(x1)
    assert action.images[BasisFunction(1, 0, Family.CC)] == [(-1, BasisFunction(1, 0, Family.SC))]


@pytest.mark.parametrize("rho_sq", [Fraction(1), Fraction(1, 5), Fraction(5, 1), Fraction(3, 7), Fraction(5, 9)])
def test_every_eigenspace_flips(rho_sq):
    torus = TorusShape.rational(rho_sq.numerator, rho_sq.denominator)
    for space in enumerate_eigenspaces(torus, 120):
        if space.is_zero:
            continue
        v = antisymmetry_vector(space, torus)
        assert verify_on_basis(space, v).is_minus_identity()
        assert compose_action(space, v, 2).is_identity()


@pytest.mark.parametrize("alpha, beta", [(1, 5), (1, 9), (3, 7), (5, 5)])
def test_odd_form_tori_flip_to_one_thousand(alpha, beta):
    torus = TorusShape.rational(alpha, beta)
    spaces = [s for s in enumerate_eigenspaces(torus, 1000) if not s.is_zero]
    assert spaces
    for space in spaces:
        v = antisymmetry_vector(space, torus)
        assert verify_on_basis(space, v).is_minus_identity()
        assert compose_action(space, v, 2).is_identity()


@pytest.mark.slow
def test_square_torus_flips_to_ten_thousand(square_torus):
    for space in enumerate_eigenspaces(square_torus, 10**4):
        if not space.is_zero:
            assert verify_on_basis(space, antisymmetry_vector(space, square_torus)).is_minus_identity()


# ---------------------------------------------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------------------------------------------

@given(st.integers(min_value=0, max_value=2**31 - 1), st.sampled_from([1, 2, 5, 25, 65]))
@settings(max_examples=30, deadline=None)
def test_sampling_residual_is_round_off(seed, lam):
    torus = TorusShape.rational(1, 1)
    space = eigenspace_for(torus, lam)
    u = random_eigenfunction(space, torus, np.random.default_rng(seed))
    v = antisymmetry_vector(space, torus)
    assert verify_by_sampling(u, v, 500, seed) <= 1e-12 * max(1.0, u.coefficient_scale()) * (1 + math.sqrt(lam))


def test_counterexample_has_no_antisymmetry(third_torus):
    u = eigenfunction_from_terms(
        third_torus,
        [{"family": "cc", "m": 1, "n": 1, "c": 1.0}, {"family": "cc", "m": 2, "n": 0, "c": 0.1}],
    )
    best, _ = best_sampling_residual(u, candidate_grid(4))
    assert best > 1e-2


def test_candidate_grid_excludes_zero():
    grid = candidate_grid(2)
    assert len(grid) == 15
    assert TranslationVector(0, 0) not in grid


# ---------------------------------------------------------------------------------------------------------------
# Domain pairing
# ---------------------------------------------------------------------------------------------------------------

def test_grid_shift_and_pairing_resolution():
    v = TranslationVector(Fraction(1, 3), 0)
    with pytest.raises(PairingError):
        grid_shift(v, 64, 64)
    assert pairing_resolution(v, 64) == 66
    assert grid_shift(v, 66, 66) == (11, 0)


def test_stripes_pair_up(square_torus):
    u = basis_eigenfunction(square_torus, "cc", 1, 0)
    v = antisymmetry_vector(u.eigenspace, square_torus)
    pairing = pair_domains(decompose_at(u, 256, 1e-9), v)
    assert len(pairing.pairs) == 1
    assert pairing.shift == (128, 128)
    assert pairing.max_discrepancy == 0


def test_checkerboard_pairs_on_third_torus(third_torus):
    decomp = decompose_at(basis_eigenfunction(third_torus, "cc", 1, 1), 256, 1e-9)
    pairing = pair_domains(decomp, TranslationVector(1, 0))
    assert decomp.domain_count == 4
    assert len(pairing.pairs) == 2
    assert pairing.max_discrepancy == 0


def test_counterexample_cannot_be_paired(third_torus):
    u = eigenfunction_from_terms(
        third_torus,
        [{"family": "cc", "m": 1, "n": 1, "c": 1.0}, {"family": "cc", "m": 2, "n": 0, "c": 0.1}],
    )
    with pytest.raises(PairingError):
        pair_domains(decompose_at(u, 256, 1e-9), TranslationVector(1, 0))


@given(st.integers(min_value=0, max_value=2**31 - 1), st.sampled_from([5, 8, 25]))
@settings(max_examples=15, deadline=None)
def test_random_eigenfunctions_pair_up(seed, lam):
    torus = TorusShape.rational(1, 1)
    space = eigenspace_for(torus, lam)
    u = random_eigenfunction(space, torus, np.random.default_rng(seed))
    v = antisymmetry_vector(space, torus)
    decomp = decompose_at(u, pairing_resolution(v, 128), 1e-9)
    pairing = pair_domains(decomp, v)
    assert 2 * len(pairing.pairs) == decomp.domain_count
    assert decomp.positive_count == decomp.negative_count
    assert pairing.max_discrepancy == 0
