"""
Anti-symmetry translations: a shift v with u(x + v) = -u(x) for every u in an eigenspace.

v is stored as exact multiples (v1/pi, v2/(rho pi)). Translating a basis function
shifts the x1 phase by m*v1 = (m*v1/pi)*pi and the x2 phase by (n/rho)*v2 =
(n*v2/(rho pi))*pi, so the action on each (m, n) block is decided in exact rational
arithmetic: it is -identity iff both phase multiples are integers with odd sum.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from nodalparity.components.arith import QuadraticForm, two_adic_split
from nodalparity.components.nodal import NodalDecomposition
from nodalparity.components.spectra import (
    TWO_PI,
    BasisFunction,
    Eigenfunction,
    Eigenspace,
    Family,
    TorusPoint,
    TorusShape,
    evaluate_points,
)
from nodalparity.config.constants import Regime
from nodalparity.errors import AntisymmetryError, PairingError, SpectrumError, UnsupportedRegimeError
from nodalparity.utils.logger import get_logger

logger = get_logger("Antisym")

Coefficient = Union[int, float]


# ---------------------------------------------------------------------------------------------------------------
# Domain Types
# ---------------------------------------------------------------------------------------------------------------

@dataclass(frozen=True)
class TranslationVector:
    v1_over_pi: Fraction
    v2_over_rho_pi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "v1_over_pi", Fraction(self.v1_over_pi))
        object.__setattr__(self, "v2_over_rho_pi", Fraction(self.v2_over_rho_pi))

    def scaled(self, k: int) -> "TranslationVector":
        return TranslationVector(self.v1_over_pi * k, self.v2_over_rho_pi * k)

    def as_reals(self, torus: TorusShape) -> Tuple[float, float]:
        return float(self.v1_over_pi) * math.pi, float(self.v2_over_rho_pi) * torus.rho * math.pi

    def phase_multiples(self, b: BasisFunction) -> Tuple[Fraction, Fraction]:
        """(x1 phase, x2 phase) picked up by b under the translation, in units of pi."""
        return b.m * self.v1_over_pi, b.n * self.v2_over_rho_pi


@dataclass(frozen=True)
class BasisAction:
    """
    Image of every basis function under translation by v.

    images[b] is a list of (coefficient, basis function). Coefficients are exact
    integers whenever every phase is a multiple of pi/2, floats otherwise.
    """

    vector: TranslationVector
    images: Dict[BasisFunction, List[Tuple[Coefficient, BasisFunction]]]

    def is_minus_identity(self) -> bool:
        return all(img == [(-1, b)] for b, img in self.images.items())

    def is_identity(self) -> bool:
        return all(img == [(1, b)] for b, img in self.images.items())


@dataclass
class DomainPairing:
    pairs: Dict[int, int]
    area_discrepancy: Dict[int, int]
    shift: Tuple[int, int]

    @property
    def max_discrepancy(self) -> int:
        return max(self.area_discrepancy.values(), default=0)


# ---------------------------------------------------------------------------------------------------------------
# Regimes and vector choice
# ---------------------------------------------------------------------------------------------------------------

def regime_of(torus: TorusShape) -> Tuple[str, Optional[QuadraticForm]]:
    if torus.is_irrational:
        return Regime.IRRATIONAL, None
    if torus.rho_sq == 1:
        return Regime.SQUARE, QuadraticForm(1, 1)
    form = QuadraticForm.from_rho_sq(torus.rho_sq)
    if form is None:
        raise UnsupportedRegimeError(f"no parity guarantee for this torus (rho^2={torus.label()})")
    return Regime.ODD_FORM, form


def antisymmetry_vector(eigenspace: Eigenspace, torus: TorusShape) -> TranslationVector:
    """
    Irrational mode: (pi/m, 0) if m > 0 else (0, rho pi/n).
    Square torus and alpha/beta tori: with 2^t || alpha*lambda,
      t even -> (pi/2^p, rho pi/2^p), p = t/2
      t odd  -> (pi/2^p, 0),          p = (t-1)/2
    """
    if eigenspace.is_zero:
        raise SpectrumError("the constant eigenspace admits no anti-symmetry")
    regime, form = regime_of(torus)

    if regime == Regime.IRRATIONAL:
        m, n = eigenspace.index if eigenspace.index is not None else eigenspace.index_pairs[0]
        v = TranslationVector(Fraction(1, m), 0) if m > 0 else TranslationVector(0, Fraction(1, n))
    else:
        # alpha * lambda = alpha m^2 + beta n^2 is an integer for every pair in the eigenspace
        scaled = eigenspace.eigenvalue * form.alpha
        if scaled.denominator != 1:
            raise SpectrumError(f"α·λ={scaled} is not an integer")
        t = two_adic_split(int(scaled)).p
        if t % 2 == 0:
            step = Fraction(1, 2 ** (t // 2))
            v = TranslationVector(step, step)
        else:
            v = TranslationVector(Fraction(1, 2 ** ((t - 1) // 2)), 0)

    logger.info(f"Anti-symmetry vector for λ≈{eigenspace.approx:.6g} ({regime}): "
                f"v=({v.v1_over_pi}π, {v.v2_over_rho_pi}ρπ)")
    return v


# ---------------------------------------------------------------------------------------------------------------
# Exact action on a basis
# ---------------------------------------------------------------------------------------------------------------

def _rotation(half_turns: Fraction) -> Tuple[Coefficient, Coefficient]:
    """(cos, sin) of half_turns * pi; exact when half_turns is a multiple of 1/2."""
    doubled = half_turns * 2
    if doubled.denominator == 1:
        k = int(doubled) % 4
        return ((1, 0), (0, 1), (-1, 0), (0, -1))[k]
    angle = float(half_turns) * math.pi
    return math.cos(angle), math.sin(angle)


def _axis_image(is_sin: bool, index: int, half_turns: Fraction) -> List[Tuple[Coefficient, bool]]:
    """cos(a + t) = cos t cos a - sin t sin a ; sin(a + t) = sin t cos a + cos t sin a."""
    if index == 0:
        return [(1, False)]
    c, s = _rotation(half_turns)
    terms = [(c, False), (-s, True)] if not is_sin else [(s, False), (c, True)]
    return [(coef, sin) for coef, sin in terms if coef != 0]


def _family(sin1: bool, sin2: bool) -> Family:
    return Family(("s" if sin1 else "c") + ("s" if sin2 else "c"))


def basis_action(eigenspace: Eigenspace, v: TranslationVector) -> BasisAction:
    images = {}
    for b in eigenspace.basis:
        k1, k2 = v.phase_multiples(b)
        image = []
        for c1, s1 in _axis_image(b.family.sin_x1, b.m, k1):
            for c2, s2 in _axis_image(b.family.sin_x2, b.n, k2):
                image.append((c1 * c2, BasisFunction(b.m, b.n, _family(s1, s2))))
        images[b] = image
    return BasisAction(vector=v, images=images)


def verify_on_basis(eigenspace: Eigenspace, v: TranslationVector) -> BasisAction:
    """Exact check that translation by v maps every basis function to minus itself."""
    action = basis_action(eigenspace, v)
    for b, image in action.images.items():
        if image != [(-1, b)]:
            raise AntisymmetryError(
                f"translation by ({v.v1_over_pi}π, {v.v2_over_rho_pi}ρπ) sends {b.label()} to "
                + " + ".join(f"{c}·{img.label()}" for c, img in image),
                basis_function=b,
            )
    return action


def compose_action(eigenspace: Eigenspace, v: TranslationVector, times: int) -> BasisAction:
    return basis_action(eigenspace, v.scaled(times))


# ---------------------------------------------------------------------------------------------------------------
# Sampling checks
# ---------------------------------------------------------------------------------------------------------------

def verify_by_sampling(
    u: Eigenfunction,
    v: TranslationVector,
    sample_count: int,
    seed: int = 42,
) -> float:
    """max |u(x+v) + u(x)| over seeded uniform samples."""
    rng = np.random.default_rng(seed)
    x1 = rng.uniform(0.0, TWO_PI, sample_count)
    x2 = rng.uniform(0.0, u.torus.period_x2, sample_count)
    d1, d2 = v.as_reals(u.torus)
    shifted = evaluate_points(u, x1 + d1, x2 + d2)
    return float(np.max(np.abs(shifted + evaluate_points(u, x1, x2))))


def best_sampling_residual(
    u: Eigenfunction,
    candidates: Iterable[TranslationVector],
    sample_count: int = 256,
    seed: int = 42,
) -> Tuple[float, Optional[TranslationVector]]:
    best, best_v = math.inf, None
    for v in candidates:
        r = verify_by_sampling(u, v, sample_count, seed)
        if r < best:
            best, best_v = r, v
    return best, best_v


def candidate_grid(denominator: int) -> List[TranslationVector]:
    """All (i/d, j/d) multiples of (pi, rho pi) in [0, 2)^2 except the zero shift."""
    return [
        TranslationVector(Fraction(i, denominator), Fraction(j, denominator))
        for i in range(2 * denominator)
        for j in range(2 * denominator)
        if i or j
    ]


# ---------------------------------------------------------------------------------------------------------------
# Nodal domain pairing
# ---------------------------------------------------------------------------------------------------------------

def grid_shift(v: TranslationVector, n1: int, n2: int) -> Tuple[int, int]:
    """Integer cell shift for v on an n1 x n2 lattice; v1 = (v1/pi)*pi is (v1/pi)*n1/2 cells."""
    s1 = v.v1_over_pi * n1 / 2
    s2 = v.v2_over_rho_pi * n2 / 2
    if s1.denominator != 1 or s2.denominator != 1:
        raise PairingError(
            f"grid {n1}x{n2} does not make ({v.v1_over_pi}π, {v.v2_over_rho_pi}ρπ) an exact shift"
        )
    return int(s1) % n1, int(s2) % n2


def pairing_resolution(v: TranslationVector, resolution: int) -> int:
    """Smallest square grid >= resolution on which v is an exact cell shift."""
    step = math.lcm((v.v1_over_pi / 2).denominator, (v.v2_over_rho_pi / 2).denominator)
    return -(-resolution // step) * step


def pair_domains(decomp: NodalDecomposition, v: TranslationVector) -> DomainPairing:
    """Match every domain D with the domain containing D + v; signs must flip and cell counts agree."""
    n1, n2 = decomp.labels.shape
    s1, s2 = grid_shift(v, n1, n2)
    labels = decomp.labels
    shifted = np.roll(labels, shift=(-s1, -s2), axis=(0, 1))  # shifted[i, j] = labels[i + s1, j + s2]

    inside = labels >= 0
    if np.any(inside != (shifted >= 0)):
        raise PairingError("not an anti-symmetry: nodal set is not invariant under the shift")

    pairs: Dict[int, int] = {}
    src, dst = labels[inside], shifted[inside]
    combos = np.unique(np.stack([src, dst], axis=1), axis=0)
    for a, b in combos:
        a, b = int(a), int(b)
        if a in pairs and pairs[a] != b:
            raise PairingError(f"not an anti-symmetry: domain {a} is split by the shift")
        pairs[a] = b
    signs = decomp.domain_signs
    for a, b in pairs.items():
        if signs[a] == signs[b]:
            raise PairingError(f"not an anti-symmetry: domain {a} maps onto same-sign domain {b}")
    if sorted(pairs.values()) != sorted(pairs):
        raise PairingError("not an anti-symmetry: shift is not a bijection on domains")

    positive = {a: b for a, b in pairs.items() if signs[a] > 0}
    counts = decomp.domain_cell_counts
    discrepancy = {a: abs(counts[a] - counts[b]) for a, b in positive.items()}
    logger.info(f"Paired {len(positive)} positive domains with negative ones under shift ({s1}, {s2})")
    return DomainPairing(pairs=positive, area_discrepancy=discrepancy, shift=(s1, s2))
