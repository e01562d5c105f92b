"""Leading coefficient of the Reidemeister torsion growth.

For a representation rho of pi_1(M) with rho(h) = -I,

    lim log|Tor(M; rho_2N)| / (2N)   = -(2 - 2g - sum (lambda_j - 1)/lambda_j) log 2
    lim log|Tor(M; rho_2N)| / (2N)^2 = 0

where lambda_j is the order of the PSL(2)-image of q_j. For the representation
induced by a realizable euler class, lambda_j = alpha_j / gcd(alpha_j, beta_j).
Coefficients are kept as exact multiples of log 2.
"""

import logging
import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.abelian import CohomologyClass, class_normal_form, ext2_equivalent
from src.errors import NotEquivalent, NotRealizable, NumericalMismatch
from src.euler_class import (
    NON_HYPERBOLIC_BASE,
    enumerate_realizable_equivalent,
    euler_class_of_index,
    jn_realizable,
)
from src.report_writer import format_rational
from src.seifert_core import SeifertIndex, normalize

logger = logging.getLogger(__name__)

NOT_REALIZABLE = "NOT_REALIZABLE"
DEFAULT_TOLERANCE = 1e-9
DEFAULT_PRECISION = 12


def decimal_value(coefficient: Fraction, precision: int = DEFAULT_PRECISION) -> str:
    """Decimal rendering of coefficient * log 2 to the given significant digits."""
    with localcontext() as ctx:
        ctx.prec = precision + 10
        value = Decimal(coefficient.numerator) / Decimal(coefficient.denominator) * Decimal(2).ln()
        ctx.prec = precision
        return str(+value)


@dataclass(frozen=True)
class AsymptoticCoefficient:
    """The limit of log|Tor| / (2N), stored as rational_part * log 2."""

    rational_part: Fraction

    def to_dict(self, precision: Optional[int] = None) -> dict:
        record = {"rational": format_rational(self.rational_part), "unit": "log2"}
        if precision is not None:
            record["decimal"] = decimal_value(self.rational_part, precision)
        return record

    def __str__(self) -> str:
        return f"{format_rational(self.rational_part)} · log2"


@dataclass(frozen=True)
class AsymptoticsReport:
    lambdas: Tuple[int, ...]
    coefficient: AsymptoticCoefficient
    equals_minus_chi_log2: bool
    flags: Tuple[str, ...] = ()
    quadratic_limit: int = 0

    def __post_init__(self):
        if self.quadratic_limit != 0:
            raise ValueError("The (2N)^2 limit is always 0")

    def to_dict(self, precision: Optional[int] = None) -> dict:
        return {
            "lambdas": list(self.lambdas),
            "coefficient": self.coefficient.to_dict(precision),
            "quadratic_limit": self.quadratic_limit,
            "minus_chi_log2": self.equals_minus_chi_log2,
            "flags": list(self.flags),
        }


def lambda_of(alpha: int, beta: int) -> int:
    """alpha / gcd(alpha, beta); beta = 0 gives 1."""
    return alpha // math.gcd(alpha, beta)


def _rotation_stack(alpha: int, betas: Sequence[int]) -> np.ndarray:
    """Rotation matrices by angle pi * beta / alpha, the PSL image of sh(beta / alpha)."""
    theta = np.pi * np.asarray(betas, dtype=float) / alpha
    c, s = np.cos(theta), np.sin(theta)
    return np.stack([np.stack([c, -s], axis=-1), np.stack([s, c], axis=-1)], axis=-2)


def _matrix_power_orders(alpha: int, betas: Sequence[int], tol: float) -> np.ndarray:
    """Smallest m in [1, alpha] with R^m = +-I entrywise within tol (0 if none)."""
    rotations = _rotation_stack(alpha, betas)
    identity = np.eye(2)
    powers = rotations.copy()
    orders = np.zeros(len(betas), dtype=int)
    for m in range(1, alpha + 1):
        plus = np.max(np.abs(powers - identity), axis=(1, 2)) < tol
        minus = np.max(np.abs(powers + identity), axis=(1, 2)) < tol
        hit = (orders == 0) & (plus | minus)
        orders[hit] = m
        if orders.all():
            break
        powers = powers @ rotations
    return orders


def rotation_orders(alpha: int, tol: float = DEFAULT_TOLERANCE) -> List[int]:
    """
    Orders in PSL(2,R) of the rotations for every beta in [0, alpha).

    Each value is checked against the matrix-power oracle.

    Raises:
        NumericalMismatch: If the gcd formula and the oracle disagree for some beta
    """
    betas = list(range(alpha))
    formula = [lambda_of(alpha, beta) for beta in betas]
    oracle = _matrix_power_orders(alpha, betas, tol)
    bad = [beta for beta in betas if oracle[beta] != formula[beta]]
    if bad:
        raise NumericalMismatch(f"Rotation order mismatch for alpha={alpha} at beta={bad}")
    return formula


def rotation_order(beta: int, alpha: int, tol: float = DEFAULT_TOLERANCE) -> int:
    """
    Order in PSL(2,R) of the rotation by pi * beta / alpha.

    Raises:
        NumericalMismatch: If the gcd formula and the matrix-power oracle disagree
    """
    formula = lambda_of(alpha, beta)
    oracle = int(_matrix_power_orders(alpha, [beta], tol)[0])
    if oracle != formula:
        raise NumericalMismatch(
            f"Rotation order of beta/alpha = {beta}/{alpha}: formula {formula}, matrix powers {oracle}"
        )
    return formula


def coefficient_from_orders(genus: int, orders: Sequence[int]) -> Fraction:
    """-(2 - 2g - sum (lambda_j - 1)/lambda_j) for arbitrary orders lambda_j >= 1."""
    if any(order < 1 for order in orders):
        raise ValueError(f"Orders must be positive, got {list(orders)}")
    total = sum((Fraction(order - 1, order) for order in orders), Fraction(0))
    return -(2 - 2 * genus - total)


def _report(
    genus: int,
    alphas: Sequence[int],
    betas: Sequence[int],
    flags: Tuple[str, ...],
    tol: Optional[float] = None
) -> AsymptoticsReport:
    if tol is None:
        lambdas = tuple(lambda_of(alpha, beta) for alpha, beta in zip(alphas, betas))
    else:
        lambdas = tuple(rotation_order(beta, alpha, tol) for alpha, beta in zip(alphas, betas))
    coprime = all(math.gcd(alpha, beta) == 1 for alpha, beta in zip(alphas, betas))
    coefficient = AsymptoticCoefficient(coefficient_from_orders(genus, lambdas))
    return AsymptoticsReport(lambdas, coefficient, coprime, flags)


def leading_coefficient(index: SeifertIndex, tol: Optional[float] = None) -> AsymptoticsReport:
    """
    Coefficient for the representation induced by the index's own euler class.

    The formula is evaluated even when the class fails the Jankins-Neumann
    criteria; the report then carries NOT_REALIZABLE. With tol set, every
    lambda_j is also checked against rotation matrix powers.

    Raises:
        NumericalMismatch: If tol is set and some order disagrees with its matrix powers
    """
    index = normalize(index)
    realizability = jn_realizable(euler_class_of_index(index))
    flags = []
    if not realizability.realizable:
        flags.append(NOT_REALIZABLE)
    if not realizability.hyperbolic:
        flags.append(NON_HYPERBOLIC_BASE)

    report = _report(index.genus, index.alphas, index.betas, tuple(flags), tol)
    logger.debug("Coefficient of %s: %s (lambdas %s)", index, report.coefficient, report.lambdas)
    return report


def leading_coefficient_for_class(
    index: SeifertIndex,
    alt: CohomologyClass,
    tol: Optional[float] = None
) -> AsymptoticsReport:
    """
    Coefficient for the representation of pi_1(M) induced by an alternative lift.

    Args:
        index: Seifert index of M
        alt: Realizable class in the Ext(Gamma; Z/2Z) class of the index's euler class
        tol: When set, check each lambda_j against rotation matrix powers

    Raises:
        SignatureMismatch: If alt lives over another signature
        NotRealizable: If alt fails the Jankins-Neumann criteria
        NotEquivalent: If alt is in a different Ext(Gamma; Z/2Z) class
        NumericalMismatch: If tol is set and some order disagrees with its matrix powers
    """
    index = normalize(index)
    base = euler_class_of_index(index)
    alt = class_normal_form(alt)
    if not ext2_equivalent(base, alt):
        raise NotEquivalent(f"Class {alt} is not equivalent to {base} in Ext(Gamma; Z/2Z)")
    realizability = jn_realizable(alt)
    if not realizability.realizable:
        raise NotRealizable(f"Class {alt} fails the Jankins-Neumann criteria")

    flags = () if realizability.hyperbolic else (NON_HYPERBOLIC_BASE,)
    return _report(index.genus, index.alphas, alt.betas, flags, tol)


def lift_asymptotics(
    index: SeifertIndex,
    tol: Optional[float] = None
) -> List[Tuple[CohomologyClass, AsymptoticsReport]]:
    """Coefficient for every realizable class equivalent to the index's euler class."""
    index = normalize(index)
    ledger = enumerate_realizable_equivalent(euler_class_of_index(index))
    return [(c, leading_coefficient_for_class(index, c, tol)) for c in ledger.equivalent_realizable]
