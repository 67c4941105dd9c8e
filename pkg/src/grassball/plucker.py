"""Planes as spanning matrices, decomposable multivectors, and their duality.

Converts between k-planes in R^n (full-rank k x n rational matrices) and the
decomposable grade-k elements whose coefficients are the k x k minors, tests
decomposability and plane containment exactly, and computes the orthogonal
complement with respect to the alternating-sign form Q.
"""

from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from . import linalg
from .exterior import (
    GradeError,
    MultiVector,
    classify_sign,
    contract_basis,
    normalize,
    wedge,
)

__all__ = [
    "PlaneMatrix",
    "RankError",
    "DecomposabilityError",
    "plucker_of_matrix",
    "is_decomposable",
    "spanning_vectors",
    "contains",
    "q_orthocomplement",
    "canonical_scale",
]


class RankError(ValueError):
    """Raised when a spanning matrix is rank-deficient."""


class DecomposabilityError(ValueError):
    """Raised when an operation needs a decomposable input and does not get one."""


class PlaneMatrix:
    """k spanning vectors of a k-plane in R^n, as rows of exact rationals."""

    __slots__ = ("rows", "k", "n")

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if not rows:
            raise ValueError("a plane needs at least one spanning vector")
        widths = {len(row) for row in rows}
        if len(widths) != 1:
            raise ValueError("ragged spanning matrix")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "k", len(rows))
        object.__setattr__(self, "n", len(rows[0]))
        if linalg.rank(rows) != self.k:
            raise RankError(f"spanning matrix has rank below {self.k}")

    def __setattr__(self, name, value):
        raise AttributeError("PlaneMatrix is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, PlaneMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __repr__(self) -> str:
        return f"PlaneMatrix({[[str(x) for x in row] for row in self.rows]})"

    def row_vectors(self) -> list[MultiVector]:
        return [MultiVector.from_vector(row) for row in self.rows]

    def to_json_dict(self) -> dict:
        return {"rows": [[str(x) for x in row] for row in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "PlaneMatrix":
        return cls([[Fraction(str(x)) for x in row] for row in data["rows"]])

    @classmethod
    def from_json(cls, text: str) -> "PlaneMatrix":
        return cls.from_json_dict(json.loads(text))


def plucker_of_matrix(matrix: PlaneMatrix) -> MultiVector:
    """Decomposable k-vector whose e_A coefficient is the minor on columns A."""
    coeffs = {}
    for cols in combinations(range(1, matrix.n + 1), matrix.k):
        minor = linalg.det([[row[c - 1] for c in cols] for row in matrix.rows])
        if minor:
            coeffs[cols] = minor
    return MultiVector(matrix.n, matrix.k, coeffs)


def is_decomposable(mv: MultiVector) -> bool:
    """Exact decomposability test.

    Uses the contraction criterion: mv factors into a single wedge of vectors
    iff contract(mv, e_B) ^ mv vanishes for every (k-1)-subset B.  Grades 0,
    1, n-1 and n are always decomposable.
    """
    if mv.is_zero():
        raise ValueError("the zero multivector has no well-defined plane")
    if mv.k <= 1 or mv.k >= mv.n - 1:
        return True
    for sub in combinations(range(1, mv.n + 1), mv.k - 1):
        if not wedge(contract_basis(mv, sub), mv).is_zero():
            return False
    return True


def _plane_rows(mv: MultiVector) -> list[tuple]:
    """RREF basis of {v : v ^ mv = 0}, the plane of a decomposable element."""
    if mv.k == mv.n:
        rows = [
            tuple(Fraction(1) if j == i else Fraction(0) for j in range(mv.n))
            for i in range(mv.n)
        ]
        return rows
    constraint_rows = []
    for target in combinations(range(1, mv.n + 1), mv.k + 1):
        row = [Fraction(0)] * mv.n
        hit = False
        for pos, i in enumerate(target):
            c = mv.coeffs.get(target[:pos] + target[pos + 1 :])
            if c is not None:
                row[i - 1] = (-1) ** pos * c
                hit = True
        if hit:
            constraint_rows.append(tuple(row))
    kernel = linalg.kernel_basis(constraint_rows, mv.n)
    reduced, _ = linalg.rref(kernel)
    return reduced


def spanning_vectors(mv: MultiVector) -> PlaneMatrix:
    """Canonical reduced-row-echelon spanning matrix of a decomposable element.

    The pivot columns are the lexicographically first independent set, so the
    first pivot is the least index appearing in the support.
    """
    if not is_decomposable(mv):
        raise DecomposabilityError("input does not factor as a single wedge")
    rows = _plane_rows(mv)
    if len(rows) != mv.k:
        raise DecomposabilityError(
            f"plane dimension {len(rows)} does not match grade {mv.k}"
        )
    return PlaneMatrix(rows)


def contains(lower: MultiVector, upper: MultiVector) -> bool:
    """True iff the plane of ``lower`` is a subspace of the plane of ``upper``."""
    if lower.k > upper.k:
        return False
    if lower.k == 0:
        if lower.is_zero():
            raise ValueError("the zero multivector has no well-defined plane")
        return True
    low = spanning_vectors(lower)
    high = spanning_vectors(upper)
    if low.n != high.n:
        raise GradeError(f"ambient mismatch: {low.n} vs {high.n}")
    stacked = list(high.rows) + list(low.rows)
    return linalg.rank(stacked) == upper.k


def canonical_scale(mv: MultiVector) -> MultiVector:
    """Scale convention for plane representatives.

    Normalized (coefficient sum 1) when the sum is nonzero, otherwise scaled
    so the lexicographically first nonzero coefficient equals +1.
    """
    if mv.is_zero():
        return mv
    total = mv.coefficient_sum()
    if total != 0:
        return mv / total
    return mv / mv.coeffs[mv.support()[0]]


def q_orthocomplement(mv: MultiVector) -> MultiVector:
    """Decomposable (n-k)-vector of the Q-orthogonal complement plane.

    Q on R^n is the diagonal form with entries (+1, -1, +1, ...); the induced
    map on planes reverses inclusions.
    """
    if mv.k >= mv.n:
        raise GradeError("the Q-complement of a full plane is the zero plane")
    plane = spanning_vectors(mv)
    signed = [
        tuple((-1) ** i * x for i, x in enumerate(row)) for row in plane.rows
    ]
    kernel = linalg.kernel_basis(signed, mv.n)
    reduced, _ = linalg.rref(kernel)
    return canonical_scale(plucker_of_matrix(PlaneMatrix(reduced)))


def require_chamber_vector(mv: MultiVector, *, positive: bool = False) -> None:
    """Validate the normalized / sign / decomposability preconditions."""
    from .exterior import SignClass  # local to avoid import noise at module top

    sign = classify_sign(mv)
    allowed = (SignClass.POSITIVE,) if positive else (
        SignClass.POSITIVE,
        SignClass.NONNEGATIVE,
    )
    if sign not in allowed:
        wanted = "Positive" if positive else "Nonnegative or Positive"
        raise ValueError(f"expected a {wanted} multivector, got {sign.value}")
    if mv.coefficient_sum() != 1:
        raise ValueError("multivector is not normalized")
    if not is_decomposable(mv):
        raise DecomposabilityError("multivector is not decomposable")
