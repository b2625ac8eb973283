"""
Bases of the homogeneous free divergence-free fields X_k^(n) and the dimension formulas.

X_k^(n) is the image of (C^n)^{⊗k+1} under θ^l*, and since the kernel of θ^l* is the
kernel of I - R it is also the image of ran(I - R). The orbit-based basis of ran(I - R),
{e_v - e_{Rv} | v in an orbit, v not its representative}, therefore gives a basis of
X_k^(n) after applying θ^l*. The ζ-basis mixes the same vectors with roots of unity and
is only available in floating point.
"""

from __future__ import annotations

import cmath
import dataclasses
from typing import Dict, List, Literal

import pandas as pd

from fockleray.config import DIMENSION_COLUMNS
from fockleray.fock import (
    FieldKey,
    FockVector,
    VectorField,
    cyclic_complement,
    sum_vectors,
    theta_l_star,
)
from fockleray.shared import UnsupportedModeError
from fockleray.words import (
    Word,
    all_words,
    enumerate_orbit_reps,
    necklace_count,
    orbit_of,
    period,
    rotate,
    rotate_letters,
)


def _check_degree(n: int, k: int) -> None:
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if k < 0:
        raise ValueError(f"Degree must not be negative, got {k}")


@dataclasses.dataclass(frozen=True)
class DimensionReport:
    n: int
    k: int
    # n^{k+1}, the dimension of [(C^n)^{⊗k}]^n
    ambient: int
    necklaces: int
    dim_cyclic: int
    dim_divfree: int
    # dimension of the divergence-free fields of degree k or less
    dim_vect_leq: int

    def as_row(self) -> Dict[str, int]:
        return {column: getattr(self, column) for column in DIMENSION_COLUMNS}


def dim_report(n: int, k: int) -> DimensionReport:
    _check_degree(n, k)
    ambient = n ** (k + 1)
    necklaces = necklace_count(n, k + 1)

    # n + n^2 + ... + n^{k+1}
    if n == 1:
        all_fields = k + 1
    else:
        all_fields = n * (n ** (k + 1) - 1) // (n - 1)
    dim_vect_leq = all_fields - sum(necklace_count(n, j + 1) for j in range(k + 1))

    return DimensionReport(
        n, k, ambient, necklaces, necklaces, ambient - necklaces, dim_vect_leq
    )


def dimension_table(n: int, max_degree: int) -> pd.DataFrame:
    """One row per k = 0, ..., max_degree"""
    _check_degree(n, max_degree)
    return pd.DataFrame.from_records(
        [dim_report(n, k).as_row() for k in range(max_degree + 1)],
        columns=list(DIMENSION_COLUMNS),
    )


def divfree_preimage_words(n: int, k: int) -> List[Word]:
    """The non-representative members of every orbit of [n]^{k+1}"""
    _check_degree(n, k)
    return [
        v
        for representative in enumerate_orbit_reps(n, k + 1)
        for v in orbit_of(representative).non_representatives()
    ]


def divfree_preimage_basis(n: int, k: int) -> List[FockVector]:
    """{e_v - e_{Rv}}, a basis of ran(I - R) on (C^n)^{⊗k+1}"""
    return [
        cyclic_complement(FockVector.basis(v)) for v in divfree_preimage_words(n, k)
    ]


def divfree_basis(n: int, k: int) -> List[VectorField]:
    """θ^l* of divfree_preimage_basis, a basis of X_k^(n). Empty for k = 0."""
    return [theta_l_star(xi) for xi in divfree_preimage_basis(n, k)]


def divfree_closed_form(v: Word) -> VectorField:
    """
    θ^l*((I - R) e_v) written out directly: for v = i_1 ... i_{k+1}, component j is
    δ_{j,i_1} e_{i_2 ... i_{k+1}} - 2 δ_{j,i_{k+1}} e_{i_1 ... i_k}
    + δ_{j,i_k} e_{i_{k+1} i_1 ... i_{k-1}}
    """
    letters = v.letters
    if len(letters) < 2:
        raise ValueError(f"The closed form needs a word of length 2 or more, got {v}")

    terms: Dict[FieldKey, int] = {}
    for key, value in (
        ((letters[1:], letters[0]), 1),
        ((letters[:-1], letters[-1]), -2),
        (((letters[-1],) + letters[:-2], letters[-2]), 1),
    ):
        terms[key] = terms.get(key, 0) + value
    return VectorField(v.n, terms)


def omega_set(n: int, k: int) -> List[Word]:
    """The words w of length k + 1 with w strictly lexicographically smaller than Rw"""
    _check_degree(n, k)
    return [w for w in all_words(n, k + 1) if w.letters < rotate_letters(w.letters, 1)]


def omega_images(n: int, k: int) -> List[VectorField]:
    """θ^l*((I - R) e_w) for w in omega_set(n, k)"""
    return [
        theta_l_star(cyclic_complement(FockVector.basis(w))) for w in omega_set(n, k)
    ]


def _f_vector(w: Word) -> VectorField:
    """F_w = θ^l*((I - R) e_w), in floating point"""
    return theta_l_star(cyclic_complement(FockVector.basis(w))).to_float()


def zeta_sum_vector(representative: Word, zeta: complex) -> VectorField:
    """Σ_{j=0}^{p-1} ζ^j F_{R^{-j}(I)} with p the period of I"""
    p = period(representative)
    return sum_vectors(
        (_f_vector(rotate(representative, -j)) * (zeta**j) for j in range(p)),
        VectorField.zero(representative.n, exact=False),
    )


def zeta_basis(
    n: int, k: int, mode: Literal["exact", "float"] = "float"
) -> List[VectorField]:
    """
    For every orbit representative I of [n]^{k+1} with period p >= 2 and every p-th root
    of unity ζ != 1, the vector zeta_sum_vector(I, ζ). The roots are taken in the order
    exp(2πit/p), t = 1, ..., p - 1.
    """
    if mode == "exact":
        raise UnsupportedModeError(
            "The ζ-basis involves roots of unity and is only available in float mode"
        )
    _check_degree(n, k)

    result = []
    for representative in enumerate_orbit_reps(n, k + 1):
        p = period(representative)
        for t in range(1, p):
            result.append(
                zeta_sum_vector(representative, cmath.exp(2j * cmath.pi * t / p))
            )
    return result
