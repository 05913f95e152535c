"""
Exact integer arithmetic behind the eigenvalue structure of flat tori.

Everything here is integer-only: 2-adic valuations, representations of an
integer by the form alpha*m^2 + beta*n^2 over non-negative integers, and the
parity decomposition m = 2^p m0, n = 2^p n0 whose case is fixed by the parity
of the valuation of alpha*m^2 + beta*n^2.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import isqrt
from typing import List, Optional, Tuple

from nodalparity.errors import ArithmeticDomainError
from nodalparity.utils.logger import get_logger

logger = get_logger("Arith")


# ---------------------------------------------------------------------------------------------------------------
# Domain Types
# ---------------------------------------------------------------------------------------------------------------

class ParityCase(str, Enum):
    EXACTLY_ONE_ODD = "ExactlyOneOdd"
    BOTH_ODD = "BothOdd"


@dataclass(frozen=True)
class TwoAdicSplit:
    p: int
    odd_part: int

    @property
    def q(self) -> int:
        """odd_part = 2q + 1"""
        return (self.odd_part - 1) // 2


@dataclass(frozen=True, order=True)
class Representation:
    m: int
    n: int


@dataclass(frozen=True)
class DecompositionWitness:
    p: int
    m0: int
    n0: int
    parity_case: ParityCase


@dataclass(frozen=True)
class QuadraticForm:
    alpha: int = 1
    beta: int = 1

    @property
    def is_valid(self) -> bool:
        return (
            self.alpha > 0 and self.beta > 0
            and self.alpha % 2 == 1 and self.beta % 2 == 1
            and (self.alpha + self.beta) % 4 == 2
        )

    def validate(self) -> "QuadraticForm":
        if not self.is_valid:
            raise ArithmeticDomainError(
                f"α,β must be odd with α+β ≡ 2 mod 4 (got α={self.alpha}, β={self.beta})"
            )
        return self

    def value(self, m: int, n: int) -> int:
        return self.alpha * m * m + self.beta * n * n

    @classmethod
    def from_rho_sq(cls, rho_sq: Fraction) -> Optional["QuadraticForm"]:
        """
        Form attached to a torus with rho^2 = a/b in lowest terms, if it has the parity structure.

        lambda = m^2 + n^2 b/a, so a*lambda = a m^2 + b n^2. Scaling (a, b) by an odd
        factor never changes validity, so lowest terms decide.
        """
        form = cls(alpha=rho_sq.numerator, beta=rho_sq.denominator)
        return form if form.is_valid else None


@dataclass
class VerificationReport:
    alpha: int
    beta: int
    lambda_max: int
    checked: int = 0
    exactly_one_odd: int = 0
    both_odd: int = 0
    violations: List[Tuple[int, int, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


# ---------------------------------------------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------------------------------------------

def two_adic_split(N: int) -> TwoAdicSplit:
    if N == 0:
        raise ArithmeticDomainError("no valuation of zero")
    if N < 0:
        raise ArithmeticDomainError(f"two_adic_split expects a positive integer, got {N}")
    p = (N & -N).bit_length() - 1
    return TwoAdicSplit(p=p, odd_part=N >> p)


def valuation_parity(N: int) -> str:
    return "even" if two_adic_split(N).p % 2 == 0 else "odd"


def representations(form: QuadraticForm, lam: int) -> List[Representation]:
    """All (m, n) with m, n >= 0 and alpha m^2 + beta n^2 = lam, by a full scan over m (sorted by m)."""
    if lam < 1:
        raise ArithmeticDomainError(f"lambda must be >= 1, got {lam}")

    found: List[Representation] = []
    for m in range(isqrt(lam // form.alpha) + 1):
        rest = lam - form.alpha * m * m
        if rest < 0 or rest % form.beta:
            continue
        n_sq = rest // form.beta
        n = isqrt(n_sq)
        if n * n == n_sq:
            found.append(Representation(m, n))
    return found


def signed_lattice_count(form: QuadraticForm, lam: int) -> int:
    """#{(m, n) in Z^2 : alpha m^2 + beta n^2 = lam}, rebuilt from the non-negative representations."""
    return sum((2 if r.m else 1) * (2 if r.n else 1) for r in representations(form, lam))


def decompose(m: int, n: int, form: QuadraticForm = QuadraticForm()) -> DecompositionWitness:
    """
    Parity decomposition of a representation.

    With t the 2-adic valuation of lambda = alpha m^2 + beta n^2:
      t even -> p = t/2,     exactly one of m0, n0 odd
      t odd  -> p = (t-1)/2, both m0 and n0 odd
    where m = 2^p m0 and n = 2^p n0. The statement is checked, not assumed:
    any mismatch raises ArithmeticDomainError.
    """
    if m == 0 and n == 0:
        raise ArithmeticDomainError("zero representation")
    if m < 0 or n < 0:
        raise ArithmeticDomainError(f"representation must be non-negative, got ({m}, {n})")
    form.validate()

    lam = form.value(m, n)
    t = two_adic_split(lam).p
    if t % 2 == 0:
        p, case = t // 2, ParityCase.EXACTLY_ONE_ODD
    else:
        p, case = (t - 1) // 2, ParityCase.BOTH_ODD

    scale = 1 << p
    if m % scale or n % scale:
        raise ArithmeticDomainError(
            f"parity lemma violated: 2^{p} does not divide ({m}, {n}) for lambda={lam}"
        )
    m0, n0 = m >> p, n >> p
    odd_count = (m0 & 1) + (n0 & 1)
    if (case is ParityCase.EXACTLY_ONE_ODD and odd_count != 1) or (case is ParityCase.BOTH_ODD and odd_count != 2):
        raise ArithmeticDomainError(
            f"parity lemma violated at ({m}, {n}), lambda={lam}: m0={m0}, n0={n0}, expected {case.value}"
        )
    return DecompositionWitness(p=p, m0=m0, n0=n0, parity_case=case)


def verify_generalized_lemma(form: QuadraticForm, lambda_max: int) -> VerificationReport:
    """Run `decompose` on every representation alpha m^2 + beta n^2 <= lambda_max, (m, n) != (0, 0)."""
    form.validate()
    if lambda_max < 1:
        raise ArithmeticDomainError(f"lambda_max must be >= 1, got {lambda_max}")

    logger.info(f"Exhaustive parity scan | α={form.alpha}, β={form.beta}, λ ≤ {lambda_max}")
    report = VerificationReport(alpha=form.alpha, beta=form.beta, lambda_max=lambda_max)

    for m in range(isqrt(lambda_max // form.alpha) + 1):
        am2 = form.alpha * m * m
        n_top = isqrt((lambda_max - am2) // form.beta)
        for n in range(n_top + 1):
            if m == 0 and n == 0:
                continue
            report.checked += 1
            try:
                witness = decompose(m, n, form)
            except ArithmeticDomainError:
                report.violations.append((m, n, am2 + form.beta * n * n))
                continue
            if witness.parity_case is ParityCase.EXACTLY_ONE_ODD:
                report.exactly_one_odd += 1
            else:
                report.both_odd += 1

    if report.violations:
        logger.error(f"🛑 {len(report.violations)} parity violations for α={form.alpha}, β={form.beta}")
    else:
        logger.info(f"✅ {report.checked} representations checked, 0 violations")
    return report


def verify_lemma_exhaustive(lambda_max: int) -> VerificationReport:
    return verify_generalized_lemma(QuadraticForm(1, 1), lambda_max)
