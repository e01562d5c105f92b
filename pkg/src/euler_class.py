"""Realizability of euler classes and their lifts through Ext(Gamma; Z/2Z).

A normalized class b x_0 + sum beta_j x_j is the euler class of some
PSL(2,R)-representation of Gamma exactly when the Jankins-Neumann
inequalities hold. Classes in the same Ext(Gamma; Z/2Z) coset all induce
SL(2,R)-representations of the same pi_1(M) sending h to -I.
"""

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Tuple

from src.abelian import (
    CohomologyClass,
    class_equal,
    ext2_equivalent,
)
from src.errors import NotNormalized
from src.report_writer import format_rational
from src.seifert_core import FuchsianSignature, SeifertIndex, orbifold_euler_characteristic

logger = logging.getLogger(__name__)


class JNCase(str, Enum):
    """Cases of the Jankins-Neumann criteria."""

    G_POSITIVE = "G_POSITIVE"          # g > 0: 2 - 2g - n <= b <= 2g - 2
    ZERO_RANGE = "ZERO_RANGE"          # g = 0: 2 - n <= b <= -2
    B_MINUS_ONE = "B_MINUS_ONE"        # g = 0: b = -1 and sum <= 1
    B_ONE_MINUS_N = "B_ONE_MINUS_N"    # g = 0: b = 1 - n and sum >= n - 1


NON_HYPERBOLIC_BASE = "NON_HYPERBOLIC_BASE"


@dataclass(frozen=True)
class RealizabilityReport:
    """Which Jankins-Neumann cases a normalized class satisfies."""

    euler_class: CohomologyClass
    cases: Tuple[JNCase, ...]
    sums: Fraction
    hyperbolic: bool

    @property
    def realizable(self) -> bool:
        return bool(self.cases)

    @property
    def flags(self) -> Tuple[str, ...]:
        return () if self.hyperbolic else (NON_HYPERBOLIC_BASE,)

    def to_dict(self) -> dict:
        return {
            "class": self.euler_class.to_dict(),
            "realizable": self.realizable,
            "cases": [case.value for case in self.cases],
            "sum": format_rational(self.sums),
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class LiftLedger:
    """Realizable classes sharing the Ext(Gamma; Z/2Z) class of base_class."""

    base_class: CohomologyClass
    equivalent_realizable: Tuple[CohomologyClass, ...]

    @property
    def induces_sl2r(self) -> bool:
        return bool(self.equivalent_realizable)

    def to_dict(self) -> dict:
        return {
            "class": self.base_class.to_dict(),
            "equivalent_realizable": [c.to_dict() for c in self.equivalent_realizable],
            "induces_sl2r": self.induces_sl2r,
        }


def euler_class_of_index(index: SeifertIndex) -> CohomologyClass:
    """The class b x_0 + beta_1 x_1 + ... + beta_n x_n of a normalized index."""
    return CohomologyClass(index.signature(), (index.b,) + index.betas)


def _require_normalized(c: CohomologyClass) -> None:
    if not c.is_normalized:
        raise NotNormalized(f"Class {c} is not normalized (need 0 <= beta_j < alpha_j)")


def fiber_sum(c: CohomologyClass) -> Fraction:
    """sum beta_j / alpha_j."""
    return sum(
        (Fraction(beta, alpha) for beta, alpha in zip(c.betas, c.signature.branch_indices)),
        Fraction(0),
    )


def jn_realizable(c: CohomologyClass) -> RealizabilityReport:
    """
    Evaluate the Jankins-Neumann criteria on a normalized class.

    Every satisfied case is listed; inequalities are taken literally,
    including vacuous sums when n = 0.

    Raises:
        NotNormalized: If some beta_j is outside [0, alpha_j)
    """
    _require_normalized(c)
    g, n, b = c.signature.genus, c.signature.n, c.b
    total = fiber_sum(c)

    cases: List[JNCase] = []
    if g > 0:
        if 2 - 2 * g - n <= b <= 2 * g - 2:
            cases.append(JNCase.G_POSITIVE)
    else:
        if 2 - n <= b <= -2:
            cases.append(JNCase.ZERO_RANGE)
        if b == -1 and total <= 1:
            cases.append(JNCase.B_MINUS_ONE)
        if b == 1 - n and total >= n - 1:
            cases.append(JNCase.B_ONE_MINUS_N)

    hyperbolic = orbifold_euler_characteristic(c.signature) < 0
    return RealizabilityReport(c, tuple(cases), total, hyperbolic)


def b_scan_range(sig: FuchsianSignature) -> range:
    """
    Values of b that any Jankins-Neumann case can accept.

    g > 0: [2 - 2g - n, 2g - 2]. g = 0: between 1 - n and -1 inclusive,
    which also covers b = 1 - n when n < 2.
    """
    g, n = sig.genus, sig.n
    if g > 0:
        return range(2 - 2 * g - n, 2 * g - 1)
    low, high = min(1 - n, -1), max(1 - n, -1)
    return range(low, high + 1)


def _iter_exceptional(sig: FuchsianSignature) -> Iterator[CohomologyClass]:
    """Classes (b; beta) with b in the scan range and 0 < beta_j < alpha_j."""
    beta_ranges = [range(1, alpha) for alpha in sig.branch_indices]
    for b in b_scan_range(sig):
        for betas in itertools.product(*beta_ranges):
            yield CohomologyClass(sig, (b,) + betas)


def enumerate_realizable(sig: FuchsianSignature) -> List[CohomologyClass]:
    """
    Every JN-realizable class of the signature with 0 < beta_j < alpha_j.

    Classes with some beta_j = 0 are not scanned: such a fiber is regular,
    so the class belongs to a signature with fewer cone points.
    """
    return [c for c in _iter_exceptional(sig) if jn_realizable(c).realizable]


def _coset_betas(c: CohomologyClass) -> List[List[int]]:
    """
    Candidate beta'_j in (0, alpha_j) that can share the Ext(Gamma; Z/2Z) class of c.

    Coordinate j of a relation a_j x_j - x_0 is a_j, so at even alpha_j a class
    in 2 H^2 has even coordinate j and beta'_j = beta_j mod 2.
    """
    return [
        [k for k in range(1, alpha) if alpha % 2 or (k - beta) % 2 == 0]
        for alpha, beta in zip(c.signature.branch_indices, c.betas)
    ]


def _realizable_for_every_beta(sig: FuchsianSignature, b: int) -> bool:
    """True when the Jankins-Neumann criteria accept b whatever the betas are."""
    if sig.genus > 0:
        return 2 - 2 * sig.genus - sig.n <= b <= 2 * sig.genus - 2
    return 2 - sig.n <= b <= -2


def iter_realizable_equivalent(c: CohomologyClass) -> Iterator[CohomologyClass]:
    """
    Lazily yield the classes listed by enumerate_realizable_equivalent, in the same order.

    Raises:
        NotNormalized: If c is not normalized
    """
    _require_normalized(c)
    sig = c.signature
    beta_ranges = _coset_betas(c)
    # With every alpha_j odd, b' - b = sum (beta'_j - beta_j) mod 2 on the coset
    all_odd = all(alpha % 2 for alpha in sig.branch_indices)
    for b in b_scan_range(sig):
        every_beta = _realizable_for_every_beta(sig, b)
        for betas in itertools.product(*beta_ranges):
            if all_odd and (b - c.b - sum(betas) + sum(c.betas)) % 2:
                continue
            candidate = CohomologyClass(sig, (b,) + betas)
            if not ext2_equivalent(candidate, c):
                continue
            if every_beta or jn_realizable(candidate).realizable:
                yield candidate


def enumerate_realizable_equivalent(c: CohomologyClass) -> LiftLedger:
    """
    All realizable classes with 0 < beta'_j < alpha_j in the Ext(Gamma; Z/2Z) class of c.

    Ordered by b ascending, then beta lexicographically. c itself may have
    zero betas; it is then compared against the scan but never listed.

    Raises:
        NotNormalized: If c is not normalized
    """
    _require_normalized(c)
    scan = b_scan_range(c.signature)
    logger.debug("Scanning b in [%d, %d] over %s", scan.start, scan.stop - 1, c.signature.branch_indices)
    return LiftLedger(c, tuple(iter_realizable_equivalent(c)))


def conjugacy_distinct(c: CohomologyClass, other: CohomologyClass) -> bool:
    """
    True when the two classes induce non-conjugate SL(2,R)-representations.

    That holds for different classes in the same Ext(Gamma; Z/2Z) coset,
    since conjugate representations have equal euler classes.
    """
    return ext2_equivalent(c, other) and not class_equal(c, other)

