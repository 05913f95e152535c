"""
The flat torus T^2_rho = (R/2piZ) x (R/2 rho pi Z): exact spectrum, eigenspace bases, evaluation.

rho is given either exactly through rho^2 = a/b (rational mode) or as a declared
irrational number carried by a float (irrational mode). In rational mode the
eigenvalue lambda = m^2 + n^2/rho^2 satisfies a*lambda = a m^2 + b n^2, and that
integer is the only thing ever compared when eigenvalues are merged or sorted.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import isqrt
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from nodalparity.config.config import NumericsConfig, RuntimeConfig
from nodalparity.config.constants import ValidationConfig
from nodalparity.errors import SpectrumError, TorusSpecError
from nodalparity.utils.logger import get_logger

logger = get_logger("Spectra")

TWO_PI = 2.0 * math.pi
Number = Union[int, float, Fraction]


# ---------------------------------------------------------------------------------------------------------------
# Torus
# ---------------------------------------------------------------------------------------------------------------

@dataclass(frozen=True)
class TorusShape:
    rho: float
    rho_sq: Optional[Fraction] = None

    def __post_init__(self):
        if not (self.rho > 0 and math.isfinite(self.rho)):
            raise TorusSpecError(f"rho must be a positive real, got {self.rho}")
        if self.rho_sq is not None:
            if self.rho_sq <= 0:
                raise TorusSpecError(f"rho^2 must be positive, got {self.rho_sq}")
            if not math.isclose(self.rho * self.rho, float(self.rho_sq), rel_tol=1e-14):
                raise TorusSpecError(f"rho={self.rho} is inconsistent with rho^2={self.rho_sq}")

    @classmethod
    def rational(cls, numerator: int, denominator: int = 1) -> "TorusShape":
        if denominator == 0:
            raise TorusSpecError("rho^2 denominator must be non-zero")
        rho_sq = Fraction(numerator, denominator)
        if rho_sq <= 0:
            raise TorusSpecError(f"rho^2 must be positive, got {rho_sq}")
        return cls(rho=math.sqrt(rho_sq.numerator / rho_sq.denominator), rho_sq=rho_sq)

    @classmethod
    def irrational(cls, rho: float) -> "TorusShape":
        return cls(rho=float(rho), rho_sq=None)

    @classmethod
    def parse(cls, text: str) -> "TorusShape":
        """Accepts "a/b", "a" (rho^2) or "irrational:<rho as float>"."""
        spec = text.strip()
        try:
            if spec.lower().startswith("irrational:"):
                return cls.irrational(float(spec.split(":", 1)[1]))
            num, _, den = spec.partition("/")
            return cls.rational(int(num), int(den) if den else 1)
        except TorusSpecError:
            raise
        except (ValueError, ZeroDivisionError) as e:
            raise TorusSpecError(f"malformed rho specification '{text}': {e}") from e

    @property
    def is_irrational(self) -> bool:
        return self.rho_sq is None

    @property
    def period_x2(self) -> float:
        return TWO_PI * self.rho

    @property
    def area(self) -> float:
        return TWO_PI * self.period_x2

    def label(self) -> str:
        if self.is_irrational:
            return f"irrational:{self.rho!r}"
        return f"{self.rho_sq.numerator}/{self.rho_sq.denominator}"


@dataclass(frozen=True)
class TorusPoint:
    x1: float
    x2: float

    @classmethod
    def reduced(cls, x1: float, x2: float, torus: TorusShape) -> "TorusPoint":
        return cls(float(np.mod(x1, TWO_PI)), float(np.mod(x2, torus.period_x2)))


# ---------------------------------------------------------------------------------------------------------------
# Basis functions
# ---------------------------------------------------------------------------------------------------------------

class Family(str, Enum):
    CC = "cc"
    CS = "cs"
    SC = "sc"
    SS = "ss"

    @property
    def sin_x1(self) -> bool:
        return self.value[0] == "s"

    @property
    def sin_x2(self) -> bool:
        return self.value[1] == "s"


@dataclass(frozen=True, order=True)
class BasisFunction:
    m: int
    n: int
    family: Family

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.m < 0 or self.n < 0:
            raise SpectrumError(f"indices must be non-negative, got ({self.m}, {self.n})")
        if self.family.sin_x1 and self.m == 0:
            raise SpectrumError(f"u^{self.family.value}_{{0,{self.n}}} vanishes identically")
        if self.family.sin_x2 and self.n == 0:
            raise SpectrumError(f"u^{self.family.value}_{{{self.m},0}} vanishes identically")

    def label(self) -> str:
        return f"u^{self.family.value}_{{{self.m},{self.n}}}"

    def factor_x1(self, x1: np.ndarray) -> np.ndarray:
        phase = self.m * x1
        return np.sin(phase) if self.family.sin_x1 else np.cos(phase)

    def factor_x2(self, x2: np.ndarray, torus: TorusShape) -> np.ndarray:
        phase = (self.n / torus.rho) * x2
        return np.sin(phase) if self.family.sin_x2 else np.cos(phase)


def basis_value(b: BasisFunction, x1, x2, torus: TorusShape) -> np.ndarray:
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    return b.factor_x1(x1) * b.factor_x2(x2, torus)


def families_for(m: int, n: int) -> List[Family]:
    """Non-vanishing families for the index pair (m, n)."""
    out = [Family.CC]
    if n >= 1:
        out.append(Family.CS)
    if m >= 1:
        out.append(Family.SC)
    if m >= 1 and n >= 1:
        out.append(Family.SS)
    return out


# ---------------------------------------------------------------------------------------------------------------
# Eigenspaces
# ---------------------------------------------------------------------------------------------------------------

@dataclass(frozen=True)
class Eigenspace:
    """
    One eigenspace of -Delta.

    `eigenvalue` is exact in rational mode. In irrational mode it is None and
    `index` holds the unique (m, n) with lambda = m^2 + n^2/rho^2.
    """

    approx: float
    basis: Tuple[BasisFunction, ...]
    eigenvalue: Optional[Fraction] = None
    index: Optional[Tuple[int, int]] = None

    @property
    def multiplicity(self) -> int:
        return len(self.basis)

    @property
    def index_pairs(self) -> List[Tuple[int, int]]:
        return sorted({(b.m, b.n) for b in self.basis})

    @property
    def is_zero(self) -> bool:
        return self.index_pairs == [(0, 0)]

    def position(self, b: BasisFunction) -> int:
        return self.basis.index(b)


def _basis_for_pairs(pairs: Iterable[Tuple[int, int]]) -> Tuple[BasisFunction, ...]:
    return tuple(BasisFunction(m, n, fam) for m, n in sorted(pairs) for fam in families_for(m, n))


def exact_eigenvalue(torus: TorusShape, m: int, n: int) -> Fraction:
    if torus.is_irrational:
        raise SpectrumError("exact eigenvalues exist only in rational mode")
    return Fraction(m * m) + Fraction(n * n) / torus.rho_sq


def _positive_bound(lambda_max: Number) -> Number:
    if lambda_max is None or lambda_max <= 0:
        raise SpectrumError(f"lambda_max must be positive, got {lambda_max}")
    return lambda_max


def enumerate_eigenspaces(torus: TorusShape, lambda_max: Number) -> List[Eigenspace]:
    """All eigenspaces with eigenvalue <= lambda_max, ascending."""
    lambda_max = _positive_bound(lambda_max)
    if torus.is_irrational:
        return _enumerate_irrational(torus, float(lambda_max))

    a, b = torus.rho_sq.numerator, torus.rho_sq.denominator
    # a*lambda = a m^2 + b n^2 <= a*lambda_max
    bound = math.floor(Fraction(lambda_max) * a)
    groups: Dict[int, List[Tuple[int, int]]] = {}
    for m in range(isqrt(bound // a) + 1):
        am2 = a * m * m
        for n in range(isqrt((bound - am2) // b) + 1):
            groups.setdefault(am2 + b * n * n, []).append((m, n))

    spaces = []
    for key in sorted(groups):
        lam = Fraction(key, a)
        spaces.append(Eigenspace(approx=float(lam), basis=_basis_for_pairs(groups[key]), eigenvalue=lam))
    logger.info(f"Enumerated {len(spaces)} eigenspaces on rho^2={torus.label()} up to λ={lambda_max}")
    return spaces


def _enumerate_irrational(torus: TorusShape, lambda_max: float) -> List[Eigenspace]:
    inv_rho_sq = 1.0 / (torus.rho * torus.rho)
    entries = []
    for m in range(isqrt(int(lambda_max)) + 1):
        n = 0
        while m * m + n * n * inv_rho_sq <= lambda_max:
            entries.append((m * m + n * n * inv_rho_sq, m, n))
            n += 1
    entries.sort()

    # Declared irrational: every (m, n) must give its own eigenvalue
    for (lam0, m0, n0), (lam1, m1, n1) in zip(entries, entries[1:]):
        if abs(lam1 - lam0) <= 1e-9 * max(1.0, lam1):
            raise TorusSpecError(
                f"uniqueness hypothesis violated: ({m0},{n0}) and ({m1},{n1}) share λ≈{lam1:.12g}; "
                "declare rho^2 as an exact rational instead"
            )
    return [Eigenspace(approx=lam, basis=_basis_for_pairs([(m, n)]), index=(m, n)) for lam, m, n in entries]


def eigenspace_for(torus: TorusShape, lam: Number) -> Eigenspace:
    """The eigenspace of an exact eigenvalue (rational mode)."""
    if torus.is_irrational:
        raise SpectrumError("use eigenspace_of_index in irrational mode")
    lam = Fraction(lam)
    a, b = torus.rho_sq.numerator, torus.rho_sq.denominator
    key = lam * a
    if lam < 0 or key.denominator != 1:
        raise SpectrumError(f"{lam} is not an eigenvalue of T^2 with rho^2={torus.label()}")
    key = int(key)
    pairs = []
    for m in range(isqrt(key // a) + 1):
        rest = key - a * m * m
        if rest % b == 0:
            n = isqrt(rest // b)
            if n * n == rest // b:
                pairs.append((m, n))
    if not pairs:
        raise SpectrumError(f"{lam} is not an eigenvalue of T^2 with rho^2={torus.label()}")
    return Eigenspace(approx=float(lam), basis=_basis_for_pairs(pairs), eigenvalue=lam)


def eigenspace_of_index(torus: TorusShape, m: int, n: int) -> Eigenspace:
    if torus.is_irrational:
        lam = m * m + n * n / (torus.rho * torus.rho)
        return Eigenspace(approx=lam, basis=_basis_for_pairs([(m, n)]), index=(m, n))
    return eigenspace_for(torus, exact_eigenvalue(torus, m, n))


def lattice_count_bruteforce(lam: int) -> int:
    """#{(m, n) in Z^2 : m^2 + n^2 = lam} by a signed scan."""
    r = isqrt(lam)
    count = 0
    for m in range(-r, r + 1):
        rest = lam - m * m
        n = isqrt(rest)
        if n * n == rest:
            count += 1 if n == 0 else 2
    return count


# ---------------------------------------------------------------------------------------------------------------
# Eigenfunctions
# ---------------------------------------------------------------------------------------------------------------

@dataclass(frozen=True)
class Eigenfunction:
    torus: TorusShape
    eigenspace: Eigenspace
    coefficients: Tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        object.__setattr__(self, "coefficients", coeffs)
        if len(coeffs) != self.eigenspace.multiplicity:
            raise SpectrumError(
                f"expected {self.eigenspace.multiplicity} coefficients, got {len(coeffs)}"
            )
        if not any(coeffs):
            raise SpectrumError("an eigenfunction needs at least one non-zero coefficient")

    @property
    def eigenvalue(self) -> float:
        return self.eigenspace.approx

    def terms(self) -> List[Tuple[float, BasisFunction]]:
        return list(zip(self.coefficients, self.eigenspace.basis))

    def coefficient_scale(self) -> float:
        return float(sum(abs(c) for c in self.coefficients))


def basis_eigenfunction(torus: TorusShape, family: str, m: int, n: int) -> Eigenfunction:
    b = BasisFunction(m, n, Family(family))
    space = eigenspace_of_index(torus, m, n)
    coeffs = [1.0 if other == b else 0.0 for other in space.basis]
    return Eigenfunction(torus, space, tuple(coeffs))


def eigenfunction_from_terms(
    torus: TorusShape,
    terms: Sequence[Mapping[str, object]],
    lam: Optional[Number] = None,
) -> Eigenfunction:
    """Build an eigenfunction from [{family, m, n, c}] after checking every term shares one eigenvalue."""
    if not terms:
        raise SpectrumError("an eigenfunction needs at least one term")
    parsed = []
    for term in terms:
        missing = [k for k in ValidationConfig.MANDATORY_TERM_KEYS if k not in term]
        if missing:
            raise SpectrumError(f"term {dict(term)} is missing keys {missing}")
        parsed.append((BasisFunction(int(term["m"]), int(term["n"]), Family(str(term["family"]))), float(term["c"])))

    if torus.is_irrational:
        pairs = {(b.m, b.n) for b, _ in parsed}
        if len(pairs) != 1:
            raise SpectrumError(f"terms do not share one eigenvalue: index pairs {sorted(pairs)}")
        space = eigenspace_of_index(torus, *pairs.pop())
    else:
        eigenvalues = {exact_eigenvalue(torus, b.m, b.n) for b, _ in parsed}
        if lam is not None:
            eigenvalues.add(Fraction(lam))
        if len(eigenvalues) != 1:
            raise SpectrumError(f"terms do not share one eigenvalue: {sorted(str(e) for e in eigenvalues)}")
        space = eigenspace_for(torus, eigenvalues.pop())

    coeffs = [0.0] * space.multiplicity
    for b, c in parsed:
        coeffs[space.position(b)] += c
    return Eigenfunction(torus, space, tuple(coeffs))


def random_eigenfunction(eigenspace: Eigenspace, torus: TorusShape, rng: np.random.Generator) -> Eigenfunction:
    coeffs = rng.standard_normal(eigenspace.multiplicity)
    while not np.any(coeffs):
        coeffs = rng.standard_normal(eigenspace.multiplicity)
    return Eigenfunction(torus, eigenspace, tuple(coeffs))


# ---------------------------------------------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------------------------------------------

def evaluate_points(u: Eigenfunction, x1, x2) -> np.ndarray:
    """Vectorised evaluation; points are reduced to the fundamental domain first."""
    x1 = np.mod(np.asarray(x1, dtype=float), TWO_PI)
    x2 = np.mod(np.asarray(x2, dtype=float), u.torus.period_x2)
    total = np.zeros(np.broadcast(x1, x2).shape)
    for c, b in u.terms():
        total += c * basis_value(b, x1, x2, u.torus)
    return total


def evaluate(u: Eigenfunction, pt: TorusPoint) -> float:
    return float(evaluate_points(u, np.array([pt.x1]), np.array([pt.x2]))[0])


def grid_axes(torus: TorusShape, n1: int, n2: int) -> Tuple[np.ndarray, np.ndarray]:
    """Lattice points (2 pi i/n1, 2 rho pi j/n2); (0, 0) is a sample."""
    return TWO_PI * np.arange(n1) / n1, torus.period_x2 * np.arange(n2) / n2


def _grid_rows(u: Eigenfunction, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    block = np.zeros((x1.size, x2.size))
    for c, b in u.terms():
        block += c * np.multiply.outer(b.factor_x1(x1), b.factor_x2(x2, u.torus))
    return block


def evaluate_grid(u: Eigenfunction, n1: int, n2: int, threads: Optional[int] = None) -> np.ndarray:
    """
    Values on the n1 x n2 lattice, row i <-> x1_i, column j <-> x2_j.

    Rows may be split across threads; every cell goes through the same
    term-by-term accumulation, so the result does not depend on `threads`.
    """
    if n1 < ValidationConfig.MIN_GRID_RESOLUTION or n2 < ValidationConfig.MIN_GRID_RESOLUTION:
        raise SpectrumError(f"grid resolution must be at least {ValidationConfig.MIN_GRID_RESOLUTION}, got {n1}x{n2}")
    x1, x2 = grid_axes(u.torus, n1, n2)
    threads = threads or RuntimeConfig().threads
    if threads <= 1 or n1 < 2 * threads:
        return _grid_rows(u, x1, x2)

    bounds = np.linspace(0, n1, threads + 1).astype(int)
    grid = np.empty((n1, n2))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {
            (lo, hi): pool.submit(_grid_rows, u, x1[lo:hi], x2)
            for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo
        }
        for (lo, hi), fut in futures.items():
            grid[lo:hi] = fut.result()
    return grid


def random_points(torus: TorusShape, count: int, rng: np.random.Generator) -> List[TorusPoint]:
    x1 = rng.uniform(0.0, TWO_PI, count)
    x2 = rng.uniform(0.0, torus.period_x2, count)
    return [TorusPoint(float(a), float(b)) for a, b in zip(x1, x2)]


def _points_to_arrays(samples: Sequence[TorusPoint]) -> Tuple[np.ndarray, np.ndarray]:
    return np.array([p.x1 for p in samples]), np.array([p.x2 for p in samples])


def laplacian_residual(u: Eigenfunction, samples: Sequence[TorusPoint], h: Optional[float] = None) -> float:
    """max |Delta_h u + lambda u| over samples, Delta_h the 5-point central difference Laplacian."""
    h = NumericsConfig.FD_STEP if h is None else h
    if h <= 0:
        raise SpectrumError(f"finite-difference step must be positive, got {h}")
    if len(samples) == 0:
        raise SpectrumError("laplacian_residual needs at least one sample point")
    x1, x2 = _points_to_arrays(samples)
    centre = evaluate_points(u, x1, x2)
    lap = (
        evaluate_points(u, x1 + h, x2) + evaluate_points(u, x1 - h, x2)
        + evaluate_points(u, x1, x2 + h) + evaluate_points(u, x1, x2 - h)
        - 4.0 * centre
    ) / (h * h)
    return float(np.max(np.abs(lap + u.eigenvalue * centre)))


def second_order_ratio(u: Eigenfunction, samples: Sequence[TorusPoint], h: float) -> float:
    """residual(h) / residual(h/2); close to 4 for a second-order scheme. nan when both residuals vanish."""
    coarse, fine = laplacian_residual(u, samples, h), laplacian_residual(u, samples, h / 2.0)
    if fine == 0.0:
        return math.nan if coarse == 0.0 else math.inf
    return coarse / fine
