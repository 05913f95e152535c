"""
Eigenfunctions with an odd number of nodal domains.

v_eps = u^cc_{m,n} + eps * u^cc_{km,0} on the torus with rho = n / (m sqrt(k^2 - 1)),
so that m^2 + n^2/rho^2 = k^2 m^2. At the crossings of the checkerboard N(u^cc_{m,n})
the perturbation equals cos(k*pi/2*odd): -1 for k = 2 mod 4 (negative channels open),
+1 for k = 0 mod 4 (positive channels open) and 0 for odd k, where cos(kmx1) keeps
cos(mx1) as a Chebyshev factor and the vertical nodal lines survive untouched.

For k = 2, in xi1 = -cos(m x1), xi2 = -cos(n x2/rho) on R = ]0, pi/m[ x ]0, rho pi/n[,
the nodal set is the hyperbola xi1 xi2 + eps (2 xi1^2 - 1) = 0, i.e.
xi1 (xi2 + 2 eps xi1) = eps, with asymptotes xi1 = 0 and xi2 = -2 eps xi1.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence, Union

import numpy as np

from nodalparity.components.antisym import TranslationVector, grid_shift
from nodalparity.components.nodal import NodalDecomposition, count_nodal_domains, domain_areas
from nodalparity.components.spectra import (
    TWO_PI,
    Eigenfunction,
    TorusPoint,
    TorusShape,
    eigenfunction_from_terms,
    evaluate_grid,
    evaluate_points,
    exact_eigenvalue,
    grid_axes,
)
from nodalparity.config.config import CountConfig, NumericsConfig
from nodalparity.errors import ConstructionError, PairingError
from nodalparity.utils.logger import get_logger

logger = get_logger("Construct")

INV_SQRT2 = 1.0 / math.sqrt(2.0)


# ---------------------------------------------------------------------------------------------------------------
# Domain Types
# ---------------------------------------------------------------------------------------------------------------

@dataclass(frozen=True)
class OddConstruction:
    m: int
    n: int
    k: int
    epsilon: float
    torus: TorusShape
    u: Eigenfunction

    @property
    def expected_count(self) -> int:
        return 2 * self.m * self.n + 1

    @property
    def channel_sign(self) -> int:
        return saddle_channel_sign(self.k)

    @property
    def predicted_count(self) -> int:
        return self.expected_count if self.k % 2 == 0 else 4 * self.m * self.n

    @property
    def is_base_case(self) -> bool:
        return (self.m, self.n, self.k) == (1, 1, 2)

    def params(self) -> dict:
        return {"m": self.m, "n": self.n, "k": self.k, "epsilon": self.epsilon, "rho_sq": self.torus.label()}


@dataclass(frozen=True)
class XiPoint:
    xi1: float
    xi2: float

    def __post_init__(self):
        if abs(self.xi1) > 1 or abs(self.xi2) > 1:
            raise ConstructionError(f"ξ coordinates lie in [-1, 1], got ({self.xi1}, {self.xi2})")


class ReflectionResiduals(NamedTuple):
    x1: float
    x2: float

    @property
    def max(self) -> float:
        return max(self.x1, self.x2)


@dataclass
class QuadrantReport:
    points: int
    lower_left: int
    upper_right: int
    off_diagonal: int
    excluded: int
    min_off_diagonal_abs_xi1: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.lower_left > 0 and self.upper_right > 0


@dataclass
class OddCountReport:
    params: dict
    expected_count: int
    predicted_count: int
    channel_sign: int
    actual_count: int
    positive_domains: int
    negative_domains: int
    resolution: int
    areas: List[float] = field(default_factory=list)
    decomposition: Optional[NodalDecomposition] = field(default=None, repr=False, compare=False)

    @property
    def matches_expected(self) -> bool:
        return self.actual_count == self.expected_count

    @property
    def passed(self) -> bool:
        if self.actual_count != self.predicted_count:
            return False
        if self.channel_sign < 0:
            return self.negative_domains == 1
        if self.channel_sign > 0:
            return self.positive_domains == 1
        return self.positive_domains == self.negative_domains


@dataclass
class ShiftSymmetryReport:
    shift: tuple
    permutation: dict
    fixed_domains: int
    max_discrepancy: int


# ---------------------------------------------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------------------------------------------

def saddle_channel_sign(k: int) -> int:
    """Sign of cos(k m x1) where cos(m x1) = 0."""
    if k % 2:
        return 0
    return -1 if k % 4 == 2 else 1


def default_epsilon(m: int, n: int, k: int) -> float:
    return min(0.1, 1.0 / (4 * k * m * n))


def make_construction(m: int, n: int, k: int, epsilon: Optional[float] = None) -> OddConstruction:
    if m < 1 or n < 1:
        raise ConstructionError(f"m and n must be positive, got m={m}, n={n}")
    if k < 2:
        raise ConstructionError(f"k must be at least 2 (rho undefined for k={k})")
    eps = default_epsilon(m, n, k) if epsilon is None else float(epsilon)
    if not 0.0 < eps < 1.0:
        raise ConstructionError("branch-quadrant analysis requires 0<ε<1")

    torus = TorusShape.rational(n * n, m * m * (k * k - 1))
    lam = Fraction(k * k * m * m)
    if exact_eigenvalue(torus, m, n) != lam or exact_eigenvalue(torus, k * m, 0) != lam:
        raise ConstructionError(f"eigenvalue identity m²+n²/ρ²=k²m² fails for ({m},{n},{k})")

    u = eigenfunction_from_terms(
        torus,
        [{"family": "cc", "m": m, "n": n, "c": 1.0}, {"family": "cc", "m": k * m, "n": 0, "c": eps}],
        lam=lam,
    )
    logger.info(f"Built v_ε for (m,n,k)=({m},{n},{k}), ε={eps}, ρ²={torus.label()}")
    return OddConstruction(m=m, n=n, k=k, epsilon=eps, torus=torus, u=u)


# ---------------------------------------------------------------------------------------------------------------
# xi coordinates on R
# ---------------------------------------------------------------------------------------------------------------

def _cell_extent(c: OddConstruction):
    return math.pi / c.m, c.torus.rho * math.pi / c.n


def xi_transform(pt: TorusPoint, c: OddConstruction) -> XiPoint:
    a, b = _cell_extent(c)
    if not (0.0 < pt.x1 < a and 0.0 < pt.x2 < b):
        raise ConstructionError(f"point ({pt.x1}, {pt.x2}) is outside R=]0,{a}[x]0,{b}[")
    return XiPoint(-math.cos(c.m * pt.x1), -math.cos((c.n / c.torus.rho) * pt.x2))


def inverse_xi(xi: XiPoint, c: OddConstruction) -> TorusPoint:
    if not (abs(xi.xi1) < 1 and abs(xi.xi2) < 1):
        raise ConstructionError(f"ξ=({xi.xi1}, {xi.xi2}) is not interior to (-1,1)²")
    return TorusPoint(math.acos(-xi.xi1) / c.m, c.torus.rho * math.acos(-xi.xi2) / c.n)


def extract_zero_points(c: OddConstruction, resolution: int) -> np.ndarray:
    """
    Nodal crossings inside R as an (N, 2) array of (xi1, xi2).

    Sign changes along grid edges are located by linear interpolation; samples
    that are exactly zero are taken as they are.
    """
    values = evaluate_grid(c.u, resolution, resolution)
    x1, x2 = grid_axes(c.torus, resolution, resolution)
    a, b = _cell_extent(c)
    rows = np.nonzero(x1 <= a)[0]
    cols = np.nonzero(x2 <= b)[0]
    v = values[np.ix_(rows, cols)]
    X1, X2 = np.meshgrid(x1[rows], x2[cols], indexing="ij")

    points_x1, points_x2 = [], []

    def crossings(v0, v1, p0, p1):
        hit = v0 * v1 < 0
        t = v0[hit] / (v0[hit] - v1[hit])
        return p0[hit] + t * (p1[hit] - p0[hit])

    # edges along x1 (fixed column) and along x2 (fixed row)
    points_x1.append(crossings(v[:-1, :], v[1:, :], X1[:-1, :], X1[1:, :]))
    points_x2.append(X2[:-1, :][v[:-1, :] * v[1:, :] < 0])
    points_x1.append(X1[:, :-1][v[:, :-1] * v[:, 1:] < 0])
    points_x2.append(crossings(v[:, :-1], v[:, 1:], X2[:, :-1], X2[:, 1:]))
    exact = v == 0
    points_x1.append(X1[exact])
    points_x2.append(X2[exact])

    p1 = np.concatenate(points_x1)
    p2 = np.concatenate(points_x2)
    interior = (p1 > 0) & (p1 < a) & (p2 > 0) & (p2 < b)
    p1, p2 = p1[interior], p2[interior]
    xi = np.stack([-np.cos(c.m * p1), -np.cos((c.n / c.torus.rho) * p2)], axis=1)
    logger.info(f"Extracted {len(xi)} nodal crossings in R at {resolution}²")
    return xi


def _as_xi_array(zero_points: Union[np.ndarray, Sequence[XiPoint]]) -> np.ndarray:
    if isinstance(zero_points, np.ndarray):
        return zero_points.reshape(-1, 2)
    return np.array([[p.xi1, p.xi2] for p in zero_points], dtype=float).reshape(-1, 2)


def _require_hyperbola_case(c: OddConstruction):
    if c.k != 2:
        raise ConstructionError(f"the ξ-hyperbola equation holds only for k=2, got k={c.k}")


def hyperbola_residual(c: OddConstruction, zero_points: Union[np.ndarray, Sequence[XiPoint]]) -> float:
    """max |xi1 xi2 + eps (2 xi1^2 - 1)| over the given nodal points."""
    _require_hyperbola_case(c)
    xi = _as_xi_array(zero_points)
    if len(xi) == 0:
        raise ConstructionError("no nodal crossing found in R")
    xi1, xi2 = xi[:, 0], xi[:, 1]
    return float(np.max(np.abs(xi1 * xi2 + c.epsilon * (2.0 * xi1 ** 2 - 1.0))))


def branch_quadrant_check(
    c: OddConstruction,
    zero_points: Optional[np.ndarray] = None,
    resolution: int = NumericsConfig.HYPERBOLA_RESOLUTION,
    tol: float = 1e-2,
) -> QuadrantReport:
    """
    Both diagonal quadrants must carry a branch. Points off the diagonal
    quadrants are legitimate only past |xi1| = 1/sqrt(2), where the branch
    crosses xi2 = 0 on its way to the oblique asymptote.
    """
    _require_hyperbola_case(c)
    xi = extract_zero_points(c, resolution) if zero_points is None else _as_xi_array(zero_points)
    xi1, xi2 = xi[:, 0], xi[:, 1]
    kept = np.abs(xi1) > tol
    xi1, xi2 = xi1[kept], xi2[kept]

    off = xi1 * xi2 < 0
    misplaced = off & (np.abs(xi1) < INV_SQRT2 - tol)
    if np.any(misplaced):
        i = int(np.argmax(misplaced))
        raise ConstructionError(
            f"nodal point ξ=({xi1[i]:.6f}, {xi2[i]:.6f}) lies in an off-diagonal quadrant"
        )

    report = QuadrantReport(
        points=int(kept.sum()),
        lower_left=int(np.sum((xi1 < 0) & (xi2 < 0))),
        upper_right=int(np.sum((xi1 > 0) & (xi2 > 0))),
        off_diagonal=int(off.sum()),
        excluded=int((~kept).sum()),
        min_off_diagonal_abs_xi1=float(np.min(np.abs(xi1[off]))) if np.any(off) else None,
    )
    if not report.passed:
        raise ConstructionError(
            f"missing hyperbola branch: lower-left={report.lower_left}, upper-right={report.upper_right}"
        )
    return report


# ---------------------------------------------------------------------------------------------------------------
# Symmetries
# ---------------------------------------------------------------------------------------------------------------

def reflection_symmetry_check(
    c: Union[OddConstruction, Eigenfunction],
    samples: Union[int, Sequence[TorusPoint]] = NumericsConfig.SAMPLE_COUNT,
    seed: int = NumericsConfig.SEED,
) -> ReflectionResiduals:
    """
    max |u(2pi - x1, x2) - u(x1, x2)| and max |u(x1, 2 rho pi - x2) - u(x1, x2)|.

    The second reflection uses the actual x2 period 2 rho pi.
    """
    u = c.u if isinstance(c, OddConstruction) else c
    if isinstance(samples, int):
        rng = np.random.default_rng(seed)
        x1 = rng.uniform(0.0, TWO_PI, samples)
        x2 = rng.uniform(0.0, u.torus.period_x2, samples)
    else:
        x1 = np.array([p.x1 for p in samples])
        x2 = np.array([p.x2 for p in samples])
    base = evaluate_points(u, x1, x2)
    r1 = np.max(np.abs(evaluate_points(u, TWO_PI - x1, x2) - base))
    r2 = np.max(np.abs(evaluate_points(u, x1, u.torus.period_x2 - x2) - base))
    return ReflectionResiduals(float(r1), float(r2))


def half_period_vector(c: OddConstruction) -> TranslationVector:
    return TranslationVector(Fraction(1, c.m), Fraction(1, c.n))


def half_period_shift_check(c: OddConstruction, decomp: NodalDecomposition) -> ShiftSymmetryReport:
    """
    v_eps is invariant under x -> x + (pi/m, rho pi/n) when k is even; the shift
    permutes the positive domains among themselves. Cell counts must match exactly.
    """
    if c.k % 2:
        raise ConstructionError(f"v_ε is not invariant under the half-period shift for odd k={c.k}")
    n1, n2 = decomp.resolution
    try:
        s1, s2 = grid_shift(half_period_vector(c), n1, n2)
    except PairingError as e:
        raise ConstructionError(str(e)) from e
    labels = decomp.labels
    shifted = np.roll(labels, shift=(-s1, -s2), axis=(0, 1))
    inside = labels >= 0
    combos = np.unique(np.stack([labels[inside], shifted[inside]], axis=1), axis=0)
    permutation = {int(a): int(b) for a, b in combos}
    if len(permutation) != len(combos) or any(
        decomp.domain_signs[a] != decomp.domain_signs[b] for a, b in permutation.items()
    ):
        raise ConstructionError("half-period shift does not permute same-sign domains")
    counts = decomp.domain_cell_counts
    return ShiftSymmetryReport(
        shift=(s1, s2),
        permutation=permutation,
        fixed_domains=sum(1 for a, b in permutation.items() if a == b),
        max_discrepancy=max((abs(counts[a] - counts[b]) for a, b in permutation.items()), default=0),
    )


# ---------------------------------------------------------------------------------------------------------------
# Counting
# ---------------------------------------------------------------------------------------------------------------

def negative_area_limit(c: OddConstruction) -> float:
    """Combined area of the negative rectangles of the unperturbed checkerboard."""
    return c.torus.area / 2.0


def negative_area(c: OddConstruction, decomp: NodalDecomposition) -> float:
    areas = domain_areas(decomp, c.torus)
    return float(sum(a for a, s in zip(areas, decomp.domain_signs) if s < 0))


def verify_odd_count(c: OddConstruction, cfg: CountConfig = CountConfig()) -> OddCountReport:
    result = count_nodal_domains(c.u, cfg)
    d = result.decomposition
    report = OddCountReport(
        params=c.params(),
        expected_count=c.expected_count,
        predicted_count=c.predicted_count,
        channel_sign=c.channel_sign,
        actual_count=result.count,
        positive_domains=d.positive_count,
        negative_domains=d.negative_count,
        resolution=result.resolution,
        areas=domain_areas(d, c.torus),
        decomposition=d,
    )
    marker = "✅" if report.passed else "⚠️"
    logger.info(f"{marker} (m,n,k)=({c.m},{c.n},{c.k}) ε={c.epsilon}: {report.actual_count} domains "
                f"(claimed {report.expected_count}, predicted {report.predicted_count})")
    return report
