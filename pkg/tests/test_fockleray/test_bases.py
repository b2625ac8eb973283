import cmath

import pandas as pd
import pytest

from fockleray.bases import (
    dim_report,
    dimension_table,
    divfree_basis,
    divfree_closed_form,
    divfree_preimage_basis,
    divfree_preimage_words,
    omega_images,
    omega_set,
    zeta_basis,
    zeta_sum_vector,
)
from fockleray.fock import FockVector, VectorField, theta_l_star
from fockleray.linalg import span_rank
from fockleray.projections import cyclic_gradient_basis, project_cyclic
from fockleray.shared import UnsupportedModeError
from fockleray.words import Word, all_words, necklace_count, rotate_letters


def test_dim_report_examples():
    report = dim_report(2, 2)
    assert (report.ambient, report.necklaces, report.dim_divfree) == (8, 4, 4)
    assert report.dim_cyclic == report.necklaces
    assert dim_report(3, 2).dim_divfree == 16
    assert dim_report(2, 0).dim_divfree == 0

    # a single letter has one necklace per length and no divergence-free fields
    for k in range(6):
        report = dim_report(1, k)
        assert (report.ambient, report.necklaces, report.dim_divfree) == (1, 1, 0)
        assert report.dim_vect_leq == 0

    with pytest.raises(ValueError):
        dim_report(0, 1)
    with pytest.raises(ValueError):
        dim_report(2, -1)


def test_dim_vect_leq_is_cumulative():
    for n in (1, 2, 3):
        for k in range(6):
            assert dim_report(n, k).dim_vect_leq == sum(
                dim_report(n, j).dim_divfree for j in range(k + 1)
            )


def test_dimension_table(fixtures_dir):
    expected = pd.read_csv(fixtures_dir / "dims_n2_max3.csv")
    pd.testing.assert_frame_equal(dimension_table(2, 3), expected)


def test_divfree_preimage_basis():
    assert divfree_preimage_words(2, 1) == [Word(2, (2, 1))]
    assert divfree_preimage_basis(2, 1) == [
        FockVector(2, {(2, 1): 1, (1, 2): -1}),
    ]
    assert divfree_preimage_basis(2, 0) == []


def test_divfree_basis_examples():
    assert divfree_basis(2, 1) == [
        VectorField(2, {((1,), 2): 2, ((2,), 1): -2}),
    ]
    assert divfree_basis(3, 0) == []


@pytest.mark.parametrize("n, k", [(n, k) for n in (2, 3) for k in range(1, 5)])
def test_divfree_basis_spans_the_complement(n: int, k: int):
    basis = divfree_basis(n, k)
    assert len(basis) == dim_report(n, k).dim_divfree
    assert span_rank(basis) == len(basis)
    for field in basis:
        assert project_cyclic(field).is_zero()
        for element in cyclic_gradient_basis(n, k):
            assert field.inner(element.vector) == 0


def test_divfree_closed_form():
    for n in (1, 2, 3):
        for k in range(1, 5):
            for v in all_words(n, k + 1):
                rotated = Word(n, rotate_letters(v.letters, 1))
                assert divfree_closed_form(v) == theta_l_star(
                    FockVector.basis(v) - FockVector.basis(rotated)
                )
    assert divfree_closed_form(Word(2, (2, 1))) == VectorField(
        2, {((1,), 2): 2, ((2,), 1): -2}
    )
    with pytest.raises(ValueError):
        divfree_closed_form(Word(2, (1,)))


def test_omega_set():
    assert [str(w) for w in omega_set(2, 2)] == ["112", "122", "212"]
    for n in (1, 2, 3):
        for k in range(4):
            expected = [
                w
                for w in all_words(n, k + 1)
                if w.letters < rotate_letters(w.letters, 1)
            ]
            assert omega_set(n, k) == expected
            # reversing the alphabet swaps w < Rw with w > Rw and only constant words
            # are fixed by R
            assert len(expected) == (n ** (k + 1) - n) // 2


def test_omega_images_are_deficient():
    # |Ω| = 3 and the images span a 3 dimensional subspace of the 4 dimensional X_2^(2)
    images = omega_images(2, 2)
    assert len(images) == 3
    assert span_rank(images) == 3
    assert dim_report(2, 2).dim_divfree == 4


def test_zeta_basis_example():
    (vector,) = zeta_basis(2, 1)
    f_12 = theta_l_star(FockVector(2, {(1, 2): 1, (2, 1): -1})).to_float()
    assert vector.max_abs_difference(f_12 * 2) < 1e-12
    assert vector.max_abs_difference(zeta_sum_vector(Word(2, (1, 2)), -1)) < 1e-12


@pytest.mark.parametrize("n, k", [(2, 2), (2, 3), (3, 2), (2, 4)])
def test_zeta_basis_dimension(n: int, k: int):
    basis = zeta_basis(n, k)
    assert len(basis) == n ** (k + 1) - necklace_count(n, k + 1)
    assert span_rank(basis) == len(basis)
    for field in basis:
        zero = VectorField.zero(n, False)
        assert project_cyclic(field).max_abs_difference(zero) < 1e-9


def test_zeta_sum_vector_root_of_unity_one_is_zero():
    # summing with ζ = 1 telescopes the whole orbit away
    for w in all_words(2, 4):
        assert zeta_sum_vector(w, cmath.exp(0j)).max_abs_difference(
            VectorField.zero(2, False)
        ) < 1e-12


def test_zeta_basis_rejects_exact_mode():
    with pytest.raises(UnsupportedModeError):
        zeta_basis(2, 2, mode="exact")
