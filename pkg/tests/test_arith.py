from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st
import pytest

from nodalparity.components.arith import (
    ParityCase,
    QuadraticForm,
    Representation,
    decompose,
    representations,
    signed_lattice_count,
    two_adic_split,
    valuation_parity,
    verify_generalized_lemma,
    verify_lemma_exhaustive,
)
from nodalparity.components.spectra import lattice_count_bruteforce
from nodalparity.errors import ArithmeticDomainError


# ---------------------------------------------------------------------------------------------------------------
# two_adic_split
# ---------------------------------------------------------------------------------------------------------------

@pytest.mark.parametrize("N, p, odd", [(1, 0, 1), (4, 2, 1), (12, 2, 3), (25, 0, 25), (96, 5, 3)])
def test_two_adic_split_examples(N, p, odd):
    split = two_adic_split(N)
    assert (split.p, split.odd_part) == (p, odd)
    assert split.q == (odd - 1) // 2


def test_two_adic_split_rejects_zero():
    with pytest.raises(ArithmeticDomainError, match="no valuation of zero"):
        two_adic_split(0)


@given(st.integers(min_value=1, max_value=10**6))
@settings(max_examples=500)
def test_two_adic_split_reconstructs(N):
    split = two_adic_split(N)
    assert split.odd_part % 2 == 1
    assert 2 ** split.p * split.odd_part == N


def test_valuation_parity():
    assert valuation_parity(25) == "even"
    assert valuation_parity(2) == "odd"
    assert valuation_parity(4) == "even"


# ---------------------------------------------------------------------------------------------------------------
# representations
# ---------------------------------------------------------------------------------------------------------------

def test_representations_of_25():
    assert representations(QuadraticForm(1, 1), 25) == [
        Representation(0, 5), Representation(3, 4), Representation(4, 3), Representation(5, 0),
    ]


def test_representations_empty_and_trivial():
    assert representations(QuadraticForm(1, 1), 3) == []
    assert representations(QuadraticForm(1, 1), 2) == [Representation(1, 1)]


def test_representations_with_weights():
    # 1*m^2 + 5*n^2 = 21 -> (1, 2) and (4, 1)
    assert representations(QuadraticForm(1, 5), 21) == [Representation(1, 2), Representation(4, 1)]


@given(
    st.sampled_from([(1, 1), (1, 5), (3, 7), (5, 1)]),
    st.integers(min_value=1, max_value=5000),
    st.integers(min_value=0, max_value=80),
    st.integers(min_value=0, max_value=80),
)
@settings(max_examples=300)
def test_representations_membership(ab, lam, m, n):
    form = QuadraticForm(*ab)
    found = Representation(m, n) in representations(form, lam)
    assert found == (form.value(m, n) == lam)


def test_signed_count_matches_lattice_scan():
    for lam in range(1, 2001):
        assert signed_lattice_count(QuadraticForm(1, 1), lam) == lattice_count_bruteforce(lam)


# ---------------------------------------------------------------------------------------------------------------
# decompose
# ---------------------------------------------------------------------------------------------------------------

@pytest.mark.parametrize(
    "m, n, expected",
    [
        (3, 4, (0, 3, 4, ParityCase.EXACTLY_ONE_ODD)),
        (1, 1, (0, 1, 1, ParityCase.BOTH_ODD)),
        (2, 0, (1, 1, 0, ParityCase.EXACTLY_ONE_ODD)),
        (6, 2, (1, 3, 1, ParityCase.BOTH_ODD)),
    ],
)
def test_decompose_examples(m, n, expected):
    w = decompose(m, n)
    assert (w.p, w.m0, w.n0, w.parity_case) == expected
    assert m == 2 ** w.p * w.m0 and n == 2 ** w.p * w.n0


def test_decompose_rejects_zero():
    with pytest.raises(ArithmeticDomainError, match="zero representation"):
        decompose(0, 0)


@given(st.integers(min_value=0, max_value=1000), st.integers(min_value=0, max_value=1000))
@settings(max_examples=500)
def test_decompose_case_follows_valuation(m, n):
    if m == 0 and n == 0:
        return
    w = decompose(m, n)
    t = two_adic_split(m * m + n * n).p
    assert (w.parity_case is ParityCase.BOTH_ODD) == (t % 2 == 1)


# ---------------------------------------------------------------------------------------------------------------
# Exhaustive scans
# ---------------------------------------------------------------------------------------------------------------

@pytest.mark.parametrize("ab", [(1, 1), (1, 5), (3, 7), (5, 9)])
def test_generalized_lemma_has_no_violations(ab):
    report = verify_generalized_lemma(QuadraticForm(*ab), 1000)
    assert report.passed
    assert report.checked == report.exactly_one_odd + report.both_odd > 0


def test_generalized_lemma_rejects_invalid_form():
    with pytest.raises(ArithmeticDomainError, match="α,β must be odd"):
        verify_generalized_lemma(QuadraticForm(1, 3), 10)


def test_form_from_rho_sq():
    assert QuadraticForm.from_rho_sq(Fraction(1, 5)) == QuadraticForm(1, 5)
    assert QuadraticForm.from_rho_sq(Fraction(1, 3)) is None
    assert QuadraticForm.from_rho_sq(Fraction(2, 1)) is None


@pytest.mark.slow
def test_lemma_exhaustive_to_one_million():
    report = verify_lemma_exhaustive(10**6)
    assert report.passed


@pytest.mark.slow
@pytest.mark.parametrize("ab", [(1, 1), (1, 5), (1, 9), (3, 7), (5, 5)])
def test_generalized_lemma_to_one_hundred_thousand(ab):
    assert verify_generalized_lemma(QuadraticForm(*ab), 10**5).passed
