"""Exact arithmetic in H^2(Gamma; Z) = ab< x_0, ..., x_n | a_i x_i = x_0 >.

Classes are integer vectors (c_0; c_1, ..., c_n) meaning c_0 x_0 + sum c_j x_j.
Membership in the subgroup 2 H^2(Gamma; Z) is decided by Smith normal form of
the stacked lattice [relation rows; 2 I].
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np
from sympy import Matrix

from src.errors import IndexSyntaxError, SignatureMismatch
from src.seifert_core import FuchsianSignature

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CohomologyClass:
    """Element c_0 x_0 + c_1 x_1 + ... + c_n x_n of H^2(Gamma; Z)."""

    signature: FuchsianSignature
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != self.signature.n + 1:
            raise SignatureMismatch(
                f"Class needs {self.signature.n + 1} coefficients over {self.signature.branch_indices}, "
                f"got {len(self.coeffs)}"
            )

    @property
    def b(self) -> int:
        return self.coeffs[0]

    @property
    def betas(self) -> Tuple[int, ...]:
        return self.coeffs[1:]

    @property
    def is_normalized(self) -> bool:
        return all(0 <= c < alpha for c, alpha in zip(self.betas, self.signature.branch_indices))

    def to_dict(self) -> dict:
        return {"b": self.b, "beta": list(self.betas), "alpha": list(self.signature.branch_indices)}

    def __str__(self) -> str:
        return f"({self.b}; {', '.join(str(c) for c in self.betas)})"


@dataclass(frozen=True)
class IntegerMatrix:
    """Rectangular matrix of arbitrary-precision integers."""

    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        if rows and any(len(row) != len(rows[0]) for row in rows):
            raise ValueError("IntegerMatrix rows must have equal length")
        object.__setattr__(self, 'entries', rows)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @classmethod
    def identity(cls, size: int) -> 'IntegerMatrix':
        return cls(tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    @classmethod
    def from_array(cls, array) -> 'IntegerMatrix':
        return cls(tuple(tuple(int(x) for x in row) for row in array))

    def to_array(self) -> np.ndarray:
        """Object-dtype numpy array, so products never overflow."""
        return np.array(self.entries, dtype=object).reshape(self.rows, self.cols)

    def __matmul__(self, other: 'IntegerMatrix') -> 'IntegerMatrix':
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        return IntegerMatrix.from_array(np.dot(self.to_array(), other.to_array()))

    def diagonal(self) -> List[int]:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def is_diagonal(self) -> bool:
        return all(
            self.entries[i][j] == 0
            for i in range(self.rows)
            for j in range(self.cols)
            if i != j
        )

    def determinant(self) -> int:
        if self.rows != self.cols:
            raise ValueError("Determinant needs a square matrix")
        if self.rows == 0:
            return 1
        return int(Matrix([list(row) for row in self.entries]).det())


def _swap_rows(a: List[List[int]], i: int, j: int) -> None:
    a[i], a[j] = a[j], a[i]


def _swap_cols(a: List[List[int]], i: int, j: int) -> None:
    for row in a:
        row[i], row[j] = row[j], row[i]


def _add_row(a: List[List[int]], target: int, source: int, factor: int) -> None:
    """row[target] += factor * row[source]"""
    src = a[source]
    a[target] = [x + factor * y for x, y in zip(a[target], src)]


def _add_col(a: List[List[int]], target: int, source: int, factor: int) -> None:
    """col[target] += factor * col[source]"""
    for row in a:
        row[target] += factor * row[source]


def smith_normal_form(m: IntegerMatrix) -> Tuple[IntegerMatrix, IntegerMatrix, IntegerMatrix]:
    """
    Smith normal form with transforms.

    Pivots on the smallest nonzero entry of the remaining block, so remainders
    shrink at every pass.

    Args:
        m: Integer matrix of any shape

    Returns:
        (U, S, V) with U @ m @ V == S, U and V unimodular, S diagonal with
        non-negative entries d_1 | d_2 | ... (zeros last)
    """
    rows, cols = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [list(row) for row in IntegerMatrix.identity(rows).entries]
    v = [list(row) for row in IntegerMatrix.identity(cols).entries]

    def bring_to_pivot(t: int, candidates) -> bool:
        best = None
        for i, j in candidates:
            if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                best = (i, j)
        if best is None:
            return False
        i, j = best
        if i != t:
            _swap_rows(a, t, i)
            _swap_rows(u, t, i)
        if j != t:
            _swap_cols(a, t, j)
            _swap_cols(v, t, j)
        return True

    for t in range(min(rows, cols)):
        block = [(i, j) for i in range(t, rows) for j in range(t, cols)]
        if not bring_to_pivot(t, block):
            break  # remaining block is zero

        while True:
            pivot = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // pivot
                    _add_row(a, i, t, -q)
                    _add_row(u, i, t, -q)
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // pivot
                    _add_col(a, j, t, -q)
                    _add_col(v, j, t, -q)

            line = [(i, t) for i in range(t, rows)] + [(t, j) for j in range(t + 1, cols)]
            if any(a[i][j] for i, j in line if (i, j) != (t, t)):
                bring_to_pivot(t, line)
                continue

            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            # Pull the offending row into the pivot row; the next pass leaves a smaller remainder
            _add_row(a, t, bad[0], 1)
            _add_row(u, t, bad[0], 1)

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return IntegerMatrix.from_array(u), IntegerMatrix.from_array(a), IntegerMatrix.from_array(v)


def relation_matrix(sig: FuchsianSignature) -> IntegerMatrix:
    """Rows (-1, 0, ..., a_j, ..., 0) encoding a_j x_j = x_0 over generators x_0..x_n."""
    rows = []
    for j, alpha in enumerate(sig.branch_indices, start=1):
        row = [0] * (sig.n + 1)
        row[0] = -1
        row[j] = alpha
        rows.append(row)
    return IntegerMatrix(tuple(tuple(row) for row in rows))


def class_normal_form(v: CohomologyClass) -> CohomologyClass:
    """Unique representative with 0 <= c_j < a_j for j >= 1."""
    alphas = v.signature.branch_indices
    c0 = v.b + sum(c // alpha for c, alpha in zip(v.betas, alphas))
    rest = tuple(c % alpha for c, alpha in zip(v.betas, alphas))
    return CohomologyClass(v.signature, (c0,) + rest)


def _require_same_signature(v: CohomologyClass, w: CohomologyClass) -> None:
    if v.signature != w.signature:
        raise SignatureMismatch(
            f"Classes over different signatures: {v.signature.to_dict()} vs {w.signature.to_dict()}"
        )


def class_equal(v: CohomologyClass, w: CohomologyClass) -> bool:
    """True iff v and w are the same element of H^2(Gamma; Z)."""
    _require_same_signature(v, w)
    return class_normal_form(v).coeffs == class_normal_form(w).coeffs


def class_negate(v: CohomologyClass) -> CohomologyClass:
    return class_normal_form(CohomologyClass(v.signature, tuple(-c for c in v.coeffs)))


def class_add(v: CohomologyClass, w: CohomologyClass) -> CohomologyClass:
    _require_same_signature(v, w)
    return class_normal_form(CohomologyClass(v.signature, tuple(x + y for x, y in zip(v.coeffs, w.coeffs))))


def class_scale(v: CohomologyClass, k: int) -> CohomologyClass:
    return class_normal_form(CohomologyClass(v.signature, tuple(k * c for c in v.coeffs)))


@lru_cache(maxsize=1024)
def _double_lattice(sig: FuchsianSignature) -> Tuple[IntegerMatrix, Tuple[int, ...], int]:
    """SNF data (V, diagonal, row count) of the lattice spanned by relations and 2 I."""
    size = sig.n + 1
    doubled = tuple(tuple(2 * int(i == j) for j in range(size)) for i in range(size))
    stacked = IntegerMatrix(relation_matrix(sig).entries + doubled)
    _, s, v = smith_normal_form(stacked)
    logger.debug("SNF of %dx%d lattice for %s: %s", stacked.rows, stacked.cols,
                 sig.branch_indices, s.diagonal())
    return v, tuple(s.diagonal()), stacked.rows


def _in_row_lattice(vector: Sequence[int], v: IntegerMatrix, diagonal: Tuple[int, ...], rows: int) -> bool:
    """Solvability of y @ R = vector given U @ R @ V = diag."""
    cols = v.cols
    w = [sum(vector[k] * v.entries[k][j] for k in range(cols)) for j in range(cols)]
    for j, value in enumerate(w):
        d = diagonal[j] if j < len(diagonal) else 0
        if j >= rows or d == 0:
            if value != 0:
                return False
        elif value % d:
            return False
    return True


def is_in_double(v: CohomologyClass) -> bool:
    """True iff v lies in 2 H^2(Gamma; Z), i.e. v is zero in Ext/2Ext."""
    transform, diagonal, rows = _double_lattice(v.signature)
    return _in_row_lattice(v.coeffs, transform, diagonal, rows)


def ext2_equivalent(v: CohomologyClass, w: CohomologyClass) -> bool:
    """True iff v and w give the same class in Ext(Gamma; Z/2Z)."""
    _require_same_signature(v, w)
    difference = CohomologyClass(v.signature, tuple(x - y for x, y in zip(v.coeffs, w.coeffs)))
    return is_in_double(difference)


CLASS_PATTERN = re.compile(r'^\s*(?P<b>[+-]?\d+)\s*(?:;(?P<betas>.*))?$')


def parse_class(text: str, sig: FuchsianSignature) -> CohomologyClass:
    """
    Parse a class written as 'b; c1, c2, ...' over the given signature.

    Raises:
        IndexSyntaxError: If the text is malformed
        SignatureMismatch: If the coefficient count does not match the signature
    """
    match = CLASS_PATTERN.match(text)
    if not match:
        raise IndexSyntaxError(f"Malformed class '{text}' (expected 'b; c1, c2, ...')")
    betas_text = (match.group('betas') or '').strip()
    try:
        betas = [int(chunk) for chunk in betas_text.split(',')] if betas_text else []
    except ValueError:
        raise IndexSyntaxError(f"Malformed class coefficients in '{text}'")
    return CohomologyClass(sig, (int(match.group('b')), *betas))
