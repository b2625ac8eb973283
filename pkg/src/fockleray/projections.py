"""
The cyclic gradient space δ^l(C^l_<n>)[1 ⊕ ... ⊕ 1] inside F(C^n) ⊗ C^n, its orthogonal
basis, and the two complementary orthogonal projections: project_cyclic onto the cyclic
gradients and leray onto the free divergence-free fields.

Basis vectors are kept unnormalized with their exact squared norms, as the normalizing
factors are square roots. orthonormal_basis divides them out in floating point.
"""

from __future__ import annotations

import dataclasses
import functools
import math
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from fockleray.config import FLOAT_RANK_TOLERANCE
from fockleray.fock import FieldKey, VectorField, sum_vectors
from fockleray.ncpoly import cyclic_gradient_terms, left_gradient_field
from fockleray.words import Orbit, enumerate_orbit_reps, orbit_of


@dataclasses.dataclass(frozen=True)
class GradientBasisElement:
    """
    δ^l(l_u)[1 ⊕ ... ⊕ 1] for the representative u of an orbit of [n]^{k+1}. With m the
    stabilizer order and p the orbit size, squared_norm = m^2 p.
    """

    orbit: Orbit
    vector: VectorField
    squared_norm: int


def cyclic_gradient_basis(n: int, k: int) -> List[GradientBasisElement]:
    """
    One element per orbit of [n]^{k+1}, in the order of the orbit representatives. The
    elements are pairwise orthogonal and span the degree k cyclic gradients.
    """
    if k < 0:
        raise ValueError(f"Degree must not be negative, got {k}")

    result = []
    for representative in enumerate_orbit_reps(n, k + 1):
        orbit = orbit_of(representative)
        result.append(
            GradientBasisElement(
                orbit,
                left_gradient_field(n, representative.letters),
                orbit.stabilizer_order**2 * orbit.size,
            )
        )
    return result


@functools.lru_cache(maxsize=64)
def _cached_basis(n: int, k: int) -> Tuple[GradientBasisElement, ...]:
    return tuple(cyclic_gradient_basis(n, k))


def orthonormal_basis(n: int, k: int) -> List[VectorField]:
    """The basis F([u]) = δ^l(l_u)[1 ⊕ ... ⊕ 1] / (m √p), in floating point"""
    return [
        element.vector.to_float() / math.sqrt(element.squared_norm)
        for element in cyclic_gradient_basis(n, k)
    ]


def project_cyclic(v: VectorField) -> VectorField:
    """
    The orthogonal projection onto the cyclic gradients. Every term c e_u ⊗ f_j of
    degree k goes to c δ^l(l_{ju})[1 ⊕ ... ⊕ 1] / (k + 1), so mixed degrees are handled
    term by term.
    """
    result: Dict[FieldKey, Any] = {}
    for (letters, j), value in v.items():
        share = (
            value / (len(letters) + 1)
            if isinstance(value, Fraction)
            else value / complex(len(letters) + 1)
        )
        for key in cyclic_gradient_terms((j,) + letters):
            result[key] = result.get(key, 0) + share
    return VectorField(v.n, result, v.is_exact)


def leray(v: VectorField) -> VectorField:
    """The free Leray projection v - project_cyclic(v)"""
    return v - project_cyclic(v)


def project_cyclic_by_expansion(v: VectorField) -> VectorField:
    """
    Σ_b <v, b> / |b|^2 b over the orthogonal basis of each degree present in v. Slow,
    this is the reference project_cyclic is checked against.
    """
    pieces = []
    for k in sorted(v.degrees()):
        part = v.homogeneous_part(k)
        for element in _cached_basis(v.n, k):
            b = element.vector if v.is_exact else element.vector.to_float()
            coefficient = part.inner(b)
            if coefficient != 0:
                pieces.append(b * (coefficient / element.squared_norm))
    return sum_vectors(pieces, VectorField.zero(v.n, v.is_exact))


def is_divergence_free(
    v: VectorField, tolerance: float = FLOAT_RANK_TOLERANCE
) -> bool:
    """
    Whether v is orthogonal to every cyclic gradient. Float fields pass when the
    projection is within tolerance of 0, relative to the size of v.
    """
    projected = project_cyclic(v)
    if v.is_exact:
        return projected.is_zero()
    scale = max(1.0, math.sqrt(abs(complex(v.norm_squared()))))
    return all(abs(value) <= tolerance * scale for _, value in projected.items())
