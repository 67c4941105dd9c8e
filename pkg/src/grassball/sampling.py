"""Seedable random generators for chambers, planes, and multivectors.

Positive samples come from moment-curve matrices (rows (1, x, x^2, ...) at
distinct positive nodes), whose maximal minors are generalized Vandermonde
determinants and hence strictly positive.  Boundary samples are assembled
from degenerate chamber coordinates and coordinate planes, so every sample
is decomposable, normalized, and nonnegative by construction.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .chamber import ChamberPoint, SplitTriple, assemble
from .exterior import MultiVector, normalize
from .plucker import PlaneMatrix, plucker_of_matrix

__all__ = [
    "random_rational",
    "random_multivector",
    "random_positive_matrix",
    "random_positive_point",
    "random_nonneg_point",
]


def random_rational(rng: random.Random, lo: int = -6, hi: int = 6,
                    max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def random_multivector(rng: random.Random, n: int, k: int,
                       density: float = 0.8) -> MultiVector:
    """Random sparse rational multivector; not necessarily decomposable."""
    from itertools import combinations

    coeffs = {}
    for key in combinations(range(1, n + 1), k):
        if rng.random() < density:
            coeffs[key] = random_rational(rng)
    return MultiVector(n, k, coeffs)


def random_positive_matrix(rng: random.Random, k: int, n: int) -> PlaneMatrix:
    """k x n moment-curve matrix with strictly positive maximal minors."""
    numerators = rng.sample(range(1, 50), k)
    denominator = rng.randint(3, 9)
    nodes = sorted(Fraction(p, denominator) for p in numerators)
    rows = [[node ** j for j in range(n)] for node in nodes]
    return PlaneMatrix(rows)


def random_positive_point(rng: random.Random, k: int, n: int) -> ChamberPoint:
    """Uniform-ish strictly positive chamber point."""
    mv = plucker_of_matrix(random_positive_matrix(rng, k, n))
    return ChamberPoint(normalize(mv))


def _random_coordinate_point(rng: random.Random, k: int, n: int) -> ChamberPoint:
    key = tuple(sorted(rng.sample(range(1, n + 1), k)))
    return ChamberPoint(MultiVector.basis(n, key))


def random_nonneg_point(rng: random.Random, k: int, n: int) -> ChamberPoint:
    """Nonnegative chamber point; mixes interior and boundary strata."""
    mode = rng.random()
    if mode < 0.4:
        return random_positive_point(rng, k, n)
    if mode < 0.55 and k >= 1:
        return _random_coordinate_point(rng, k, n)
    if mode < 0.8 and k + 1 <= n and k >= 2:
        # everything on the t = 1 stratum: rho = e_1 ^ eta
        eta = random_positive_point(rng, k - 1, n - 1).rho.shift(+1, n=n)
        return assemble(SplitTriple(Fraction(1), eta, None))
    if k <= n - 1:
        # everything on the t = 0 stratum: no support touching index 1
        omega = random_positive_point(rng, k, n - 1).rho.shift(+1, n=n)
        return assemble(SplitTriple(Fraction(0), None, omega))
    return random_positive_point(rng, k, n)
