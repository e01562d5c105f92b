"""Irreducible SU(1,1)-representations of genus-0, three-fiber Seifert manifolds.

pi_1(M) = < q_1, q_2, q_3, h | h central, q_j^{a_j} = h^{b_j}, q_1 q_2 q_3 = h^{-b} >.
Representations send h to -I. A conjugacy class is named by a triple
(k_1, k_2, k_3) with tr rho(q_j) = 2 cos(k_j pi / a_j), together with the sign
epsilon of Im xi_1. The canonical representative has rho(q_1) diagonal and
eta_2 real and positive.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import numpy as np

from src.errors import (
    ConstructionInfeasible,
    DegenerateReducible,
    IndexMismatch,
    NonRealResult,
    NotNormalized,
    UnsupportedShape,
)
from src.report_writer import format_complex
from src.seifert_core import SeifertIndex, format_index, orientation_reverse, reversal_shifts

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
REDUCIBLE_BOUNDARY = "REDUCIBLE_BOUNDARY"

# C = [[1, -i], [1, i]] conjugates SU(1,1) into SL(2,R)
_CAYLEY = np.array([[1, -1j], [1, 1j]], dtype=complex)
_CAYLEY_INV = np.linalg.inv(_CAYLEY)


@dataclass(frozen=True)
class Su11Element:
    """The matrix [[xi, eta], [conj(eta), conj(xi)]]; |xi|^2 - |eta|^2 = 1 is not enforced."""

    xi: complex
    eta: complex = 0j

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> 'Su11Element':
        return cls(complex(m[0, 0]), complex(m[0, 1]))

    @property
    def trace(self) -> float:
        return 2 * self.xi.real

    def norm_residual(self) -> float:
        """| |xi|^2 - |eta|^2 - 1 |."""
        return abs(abs(self.xi) ** 2 - abs(self.eta) ** 2 - 1)

    def is_valid(self, tol: float = DEFAULT_TOLERANCE) -> bool:
        return self.norm_residual() < tol

    def inverse(self) -> 'Su11Element':
        """Closed-form inverse [[conj(xi), -eta], [-conj(eta), xi]]."""
        return Su11Element(self.xi.conjugate(), -self.eta)

    def scaled(self, sign: int) -> 'Su11Element':
        return Su11Element(sign * self.xi, sign * self.eta)

    def to_dict(self) -> dict:
        return {"xi": format_complex(self.xi), "eta": format_complex(self.eta)}


def to_matrix(element: Su11Element) -> np.ndarray:
    """2x2 complex matrix of an SU(1,1) element."""
    return np.array(
        [[element.xi, element.eta], [element.eta.conjugate(), element.xi.conjugate()]],
        dtype=complex,
    )


@dataclass(frozen=True)
class RepTriple:
    k: Tuple[int, int, int]
    epsilon: int

    def __post_init__(self):
        object.__setattr__(self, 'k', tuple(int(k) for k in self.k))
        if self.epsilon not in (1, -1):
            raise ValueError(f"epsilon must be +1 or -1, got {self.epsilon}")

    def to_dict(self) -> dict:
        return {"k": list(self.k), "epsilon": self.epsilon}

    def __str__(self) -> str:
        sign = "+" if self.epsilon > 0 else "-"
        return f"({', '.join(str(k) for k in self.k)}; {sign})"


@dataclass(frozen=True)
class Su11Representation:
    """Canonical representative of one conjugacy class, given on q_1, q_2, q_3."""

    index: SeifertIndex
    triple: RepTriple
    q: Tuple[Su11Element, Su11Element, Su11Element]

    @property
    def h_image(self) -> np.ndarray:
        return -np.eye(2, dtype=complex)

    def matrices(self) -> List[np.ndarray]:
        return [to_matrix(element) for element in self.q]

    def to_dict(self) -> dict:
        return {
            "index": format_index(self.index),
            "triple": self.triple.to_dict(),
            "q": [element.to_dict() for element in self.q],
            "h": "-I",
        }


@dataclass(frozen=True)
class ResidualReport:
    """Max-norm residuals of every relation of pi_1(M) under a representation."""

    powers: Tuple[float, ...]
    product: float
    traces: Tuple[float, ...]
    norms: Tuple[float, ...]
    tol: float = DEFAULT_TOLERANCE

    @property
    def max_residual(self) -> float:
        return max(self.powers + (self.product,) + self.traces + self.norms)

    @property
    def passed(self) -> bool:
        return self.max_residual < self.tol

    def to_dict(self) -> dict:
        return {
            "powers": list(self.powers),
            "product": self.product,
            "traces": list(self.traces),
            "norms": list(self.norms),
            "tol": self.tol,
            "passed": self.passed,
        }


def _sign_power(exponent: int) -> int:
    """(-1)^exponent for any integer exponent."""
    return 1 if exponent % 2 == 0 else -1


def _chebyshev_u(n: int, k: int, alpha: int) -> float:
    """U_n(cos(k pi / alpha)), with the angle (n + 1) k pi / alpha reduced mod 2 pi."""
    return math.sin(((n + 1) * k % (2 * alpha)) * math.pi / alpha) / math.sin(k * math.pi / alpha)


def _require_three_fibers(index: SeifertIndex) -> None:
    if index.genus != 0 or index.n != 3:
        raise UnsupportedShape(
            f"SU(1,1) enumeration needs genus 0 and three fibers, got genus {index.genus} with {index.n}"
        )


def candidate_triples(index: SeifertIndex) -> List[Tuple[int, int, int]]:
    """All (k_1, k_2, k_3) with 0 < k_j < a_j and k_j = b_j mod 2, in lexicographic order."""
    ranges = [
        [k for k in range(1, alpha) if (k - beta) % 2 == 0]
        for alpha, beta in index.pairs
    ]
    return list(itertools.product(*ranges))


def triple_admissible(index: SeifertIndex, k: Tuple[int, int, int]) -> bool:
    """
    Whether a candidate triple carries an SU(1,1)-representation.

    With x_j = k_j / a_j, even b needs x_3 <= |x_1 - x_2| or
    1 - |x_1 + x_2 - 1| <= x_3; odd b swaps the two absolute values.
    Equality is admissible.
    """
    x1, x2, x3 = (Fraction(kj, alpha) for kj, alpha in zip(k, index.alphas))
    difference = abs(x1 - x2)
    excess = abs(x1 + x2 - 1)
    if index.b % 2 == 0:
        return x3 <= difference or 1 - excess <= x3
    return x3 <= excess or 1 - difference <= x3


def enumerate_triples(index: SeifertIndex) -> List[RepTriple]:
    """
    Admissible triples of a genus-0, three-fiber index, each with both signs.

    Raises:
        UnsupportedShape: If genus != 0 or the index does not have three fibers
        NotNormalized: If some beta_j is outside [0, a_j)
    """
    _require_three_fibers(index)
    if not index.is_normalized:
        raise NotNormalized(f"Index {format_index(index)} is not normalized")

    triples = []
    for k in candidate_triples(index):
        if triple_admissible(index, k):
            triples.extend([RepTriple(k, 1), RepTriple(k, -1)])
    logger.debug("Index %s: %d admissible k-triples", format_index(index), len(triples) // 2)
    return triples


def second_generator_data(index: SeifertIndex, triple: RepTriple) -> Tuple[complex, float, float]:
    """
    Solve the trace conditions for xi_1, Re xi_2 and Im xi_2.

    Returns:
        (xi_1, b_2, eta_2 squared); the last value is negative when no
        SU(1,1) matrix realizes the traces.
    """
    theta1, theta2, theta3 = (kj * math.pi / alpha for kj, alpha in zip(triple.k, index.alphas))
    a1 = math.cos(theta1)
    b1 = triple.epsilon * math.sin(theta1)
    a2 = math.cos(theta2)
    # tr rho(q_3) = (-1)^b 2 (a1 a2 - b1 b2) = 2 cos(theta3)
    b2 = (a1 * a2 - _sign_power(index.b) * math.cos(theta3)) / b1
    return complex(a1, b1), b2, a2 * a2 + b2 * b2 - 1


def construct_representation(
    index: SeifertIndex,
    triple: RepTriple,
    tol: float = DEFAULT_TOLERANCE
) -> Su11Representation:
    """
    Build the canonical representative of a triple.

    Args:
        index: Normalized genus-0 index with three fibers
        triple: Triple produced by enumerate_triples for this index
        tol: Tolerance on eta_2 squared

    Returns:
        Representation with rho(q_1) diagonal and eta_2 > 0

    Raises:
        DegenerateReducible: If |eta_2^2| <= tol
        ConstructionInfeasible: If eta_2^2 < -tol
    """
    _require_three_fibers(index)
    xi1, b2, eta2_squared = second_generator_data(index, triple)

    if eta2_squared < -tol:
        raise ConstructionInfeasible(
            f"Triple {triple} of {format_index(index)} needs eta_2^2 = {eta2_squared:.3e} < 0"
        )
    if eta2_squared <= tol:
        raise DegenerateReducible(f"Triple {triple} of {format_index(index)} is reducible (eta_2 = 0)")

    a2 = math.cos(triple.k[1] * math.pi / index.alphas[1])
    q1 = Su11Element(xi1, 0j)
    q2 = Su11Element(complex(a2, b2), complex(math.sqrt(eta2_squared), 0.0))
    product = Su11Element.from_matrix(to_matrix(q1) @ to_matrix(q2))
    q3 = product.inverse().scaled(_sign_power(index.b))

    logger.debug("Constructed %s for %s: eta_2 = %.6g", triple, format_index(index), q2.eta.real)
    return Su11Representation(index, triple, (q1, q2, q3))


def verify_relations(rep: Su11Representation, tol: float = DEFAULT_TOLERANCE) -> ResidualReport:
    """
    Evaluate every relation of pi_1(M) on a representation.

    Residuals are max-norms of rho(q_j)^{a_j} - (-I)^{b_j} and of
    rho(q_1) rho(q_2) rho(q_3) - (-I)^{-b}, the trace defects against
    2 cos(k_j pi / a_j) and the SU(1,1) norm defects of each q_j.

    Powers use M^a = U_{a-1}(c) M - U_{a-2}(c) I with c = cos(k_j pi / a_j),
    which holds for any determinant-one M of trace 2c; the trace and norm
    defects cover that hypothesis.
    """
    identity = np.eye(2, dtype=complex)
    matrices = rep.matrices()

    powers = tuple(
        float(np.max(np.abs(
            _chebyshev_u(alpha - 1, kj, alpha) * m
            - (_chebyshev_u(alpha - 2, kj, alpha) + _sign_power(beta)) * identity
        )))
        for m, kj, (alpha, beta) in zip(matrices, rep.triple.k, rep.index.pairs)
    )
    product = matrices[0] @ matrices[1] @ matrices[2]
    product_residual = float(np.max(np.abs(product - _sign_power(rep.index.b) * identity)))
    traces = tuple(
        abs(element.trace - 2 * math.cos(kj * math.pi / alpha))
        for element, kj, alpha in zip(rep.q, rep.triple.k, rep.index.alphas)
    )
    norms = tuple(element.norm_residual() for element in rep.q)

    report = ResidualReport(powers, product_residual, traces, norms, tol)
    logger.debug("Residuals for %s: max %.3e", rep.triple, report.max_residual)
    return report


def conjugacy_classes(
    index: SeifertIndex,
    tol: float = DEFAULT_TOLERANCE,
    notes: Optional[List[str]] = None
) -> List[Su11Representation]:
    """
    One canonical representative per irreducible conjugacy class.

    Triples on the reducible boundary are dropped; when notes is given, a
    REDUCIBLE_BOUNDARY note naming the k-triple is appended for each of them.

    Raises:
        UnsupportedShape: If genus != 0 or the index does not have three fibers
    """
    representations = []
    for triple in enumerate_triples(index):
        try:
            representations.append(construct_representation(index, triple, tol))
        except DegenerateReducible:
            note = f"{REDUCIBLE_BOUNDARY} k={list(triple.k)}"
            if notes is not None and note not in notes:
                notes.append(note)
    return representations


def su11_to_sl2r(m: Union[Su11Element, np.ndarray], tol: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """
    Conjugate an SU(1,1) element into SL(2,R) by C = [[1, -i], [1, i]].

    diag(e^{i theta}, e^{-i theta}) maps to the rotation [[cos, sin], [-sin, cos]].
    A raw 2x2 matrix is accepted as is; an Su11Element always conjugates to a
    real matrix.

    Raises:
        NonRealResult: If the conjugate has imaginary parts above tol
    """
    matrix = to_matrix(m) if isinstance(m, Su11Element) else np.asarray(m, dtype=complex)
    conjugated = _CAYLEY_INV @ matrix @ _CAYLEY
    imaginary = float(np.max(np.abs(conjugated.imag)))
    if imaginary > tol:
        raise NonRealResult(f"Conjugate of {m} has imaginary part {imaginary:.3e}")
    return conjugated.real


def reverse_triple(index: SeifertIndex, triple: RepTriple) -> RepTriple:
    """
    Triple of index corresponding to a triple of orientation_reverse(index).

    k_j becomes a_j - k_j where the reversal shift s_j is 1; epsilon flips when s_1 = 1.
    """
    shifts = reversal_shifts(index)
    k = tuple(alpha - kj if s else kj for kj, alpha, s in zip(triple.k, index.alphas, shifts))
    epsilon = -triple.epsilon if shifts[0] else triple.epsilon
    return RepTriple(k, epsilon)


def pull_back_reversed(rep: Su11Representation, index: SeifertIndex) -> Su11Representation:
    """
    Pull a representation of the reversed manifold back to index.

    The fiber-reversal isomorphism sends q_j to q'_j h'^{-s_j} and h to
    h'^{-1}, so rho(q_j) = (-1)^{s_j} rho'(q'_j) and rho(h) = -I.

    Args:
        rep: Canonical representation of pi_1(orientation_reverse(index))
        index: Normalized genus-0, three-fiber index

    Returns:
        Canonical representation of pi_1(index) with triple reverse_triple(index, rep.triple)

    Raises:
        IndexMismatch: If rep does not belong to orientation_reverse(index)
    """
    _require_three_fibers(index)
    if not index.is_normalized:
        raise NotNormalized(f"Index {format_index(index)} is not normalized")
    expected = orientation_reverse(index)
    if rep.index != expected:
        raise IndexMismatch(
            f"Representation of {format_index(rep.index)} is not over the reversal {format_index(expected)}"
        )

    q = tuple(element.scaled(_sign_power(s)) for element, s in zip(rep.q, reversal_shifts(index)))
    if q[1].eta.real < 0:
        q = tuple(Su11Element(element.xi, -element.eta) for element in q)
    return Su11Representation(index, reverse_triple(index, rep.triple), q)
