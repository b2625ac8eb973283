import json

import pytest

from fockleray.config import FOCK_LERAY_THREADS, get_worker_count
from fockleray.verify import (
    CHECKS,
    CheckReport,
    check_burnside,
    check_chebyshev,
    check_cyclic_invariance,
    check_dimension,
    check_direct_sum,
    check_divfree_basis,
    check_kernel_lemma,
    check_omega_deficiency,
    check_orthonormal_basis,
    check_projection_formula,
    check_radial,
    check_range_equality,
    check_stein,
    check_zeta_basis,
    plan_suite,
    run_suite,
)


@pytest.mark.parametrize("n, k", [(1, 3), (2, 1), (2, 4), (3, 3), (4, 2)])
def test_burnside(n: int, k: int):
    report = check_burnside(n, k)
    assert report.passed
    assert report.details["necklace_count"] == report.details["brute_force"]


def test_cyclic_invariance():
    for n, k in [(1, 1), (2, 3), (3, 3)]:
        assert check_cyclic_invariance(n, k).passed
    with pytest.raises(ValueError):
        check_cyclic_invariance(2, 0)


def test_kernel_lemma():
    report = check_kernel_lemma(2, 2)
    assert report.passed
    assert report.details["dim_ker_theta_l_star"] == 3
    assert report.details["dim_ker_i_minus_r"] == 3
    assert check_kernel_lemma(3, 1).details["dim_ker_theta_l_star"] == 3
    assert check_kernel_lemma(2, 4).details["dim_ker_i_minus_r"] == 6
    for n, k in [(1, 3), (2, 3), (3, 2)]:
        assert check_kernel_lemma(n, k).passed


def test_range_equality():
    for n, d in [(1, 3), (2, 1), (2, 3)]:
        report = check_range_equality(n, d)
        assert report.passed
        assert report.details["rank_semicircular"] == report.details["rank_union"]


def test_orthonormal_basis_and_dimension():
    for n in (1, 2, 3):
        for k in range(4):
            assert check_orthonormal_basis(n, k).passed
            assert check_dimension(n, k).passed


def test_projection_formula():
    report = check_projection_formula(2, 2, trials=20, seed=7)
    assert report.passed
    assert report.seed == 7
    assert check_projection_formula(3, 0, trials=10).passed


def test_direct_sum():
    report = check_direct_sum(3, 2)
    assert report.passed
    assert report.details["rank_cyclic"] == 11
    assert report.details["rank_divfree"] == 16
    assert report.details["ambient"] == 27

    report = check_direct_sum(2, 0)
    assert report.passed
    assert (report.details["rank_cyclic"], report.details["rank_divfree"]) == (2, 0)


def test_divfree_basis():
    for n, k in [(2, 0), (2, 1), (2, 3), (3, 2)]:
        report = check_divfree_basis(n, k)
        assert report.passed, report.details


def test_omega_deficiency():
    report = check_omega_deficiency(2, 2)
    assert report.passed
    assert report.details["omega_size"] == 3
    assert report.details["rank"] == 3
    assert report.details["deficiency"] >= 1
    assert report.details["images_divfree"]

    # Ω is empty for n = 1, and at (2, 3) it has 7 elements against dim X = 10
    assert check_omega_deficiency(1, 3).passed
    report = check_omega_deficiency(2, 3)
    assert report.passed
    assert report.details["rank"] < report.details["dim_divfree"]


def test_zeta_basis():
    report = check_zeta_basis(2, 3)
    assert report.passed
    assert report.mode == "float"
    assert report.details["count"] == 10
    assert report.details["max_relative_residual"] <= 1e-9


def test_radial():
    report = check_radial(1)
    assert report.passed
    # (δ_2 f, -δ_1 f) = (2 e_2, -2 e_1) for f = x_1^2 + x_2^2
    assert report.details["field"] == {
        "n": 2,
        "terms": [
            {"word": [1], "dir": 2, "num": "-2", "den": "1"},
            {"word": [2], "dir": 1, "num": "2", "den": "1"},
        ],
    }
    for m in (2, 3):
        assert check_radial(m).passed
    with pytest.raises(ValueError):
        check_radial(0)


def test_stein():
    report = check_stein(2, trials=30, degree_cap=5, seed=3)
    assert report.passed
    assert report.seed == 3


def test_chebyshev():
    report = check_chebyshev(2, 5)
    assert report.passed
    assert report.details["patterns_checked"] == 2**6 - 1


def test_check_report_json():
    report = CheckReport("burnside", {"n": 2, "k": 3}, False, {}, witness={"word": [1]})
    data = report.to_json_dict()
    assert data["witness"] == {"word": [1]}
    assert data["mode"] == "exact"
    json.dumps(data)
    assert "witness" not in check_burnside(2, 2).to_json_dict()


def test_plan_suite():
    plan = plan_suite(2, 2)
    names = [name for name, _ in plan]
    # checks stay grouped in the order they are declared
    assert list(dict.fromkeys(names)) == list(CHECKS)
    assert ("burnside", {"n": 2, "k": 3}) in plan
    assert ("kernel_lemma", {"n": 2, "k": 0}) not in plan
    assert names.count("radial") == 3
    assert names.count("stein") == 1

    plan = plan_suite(2, 6, names=["zeta_basis"])
    assert [params["k"] for _, params in plan] == [1, 2, 3, 4]

    plan = plan_suite(2, 1, seed=5, names=["projection_formula"], trials=4)
    assert all(params["seed"] == 5 and params["trials"] == 4 for _, params in plan)

    with pytest.raises(ValueError):
        plan_suite(2, 2, names=["bogus"])
    with pytest.raises(ValueError):
        plan_suite(0, 2)


def test_run_suite_inline():
    plan = plan_suite(2, 2, names=["burnside", "dimension"])
    reports = run_suite(plan, workers=1)
    assert [(r.name, r.params) for r in reports] == plan
    assert all(r.passed for r in reports)


@pytest.mark.slow
def test_run_suite_in_worker_processes():
    plan = plan_suite(2, 2, names=["burnside", "kernel_lemma", "direct_sum"])
    reports = run_suite(plan, workers=2)
    assert [(r.name, r.params) for r in reports] == plan
    assert all(r.passed for r in reports)


def test_get_worker_count(monkeypatch):
    monkeypatch.setenv(FOCK_LERAY_THREADS, "3")
    assert get_worker_count() == 3
    # the variable caps an explicit worker count
    assert get_worker_count(5) == 3
    assert get_worker_count(2) == 2

    monkeypatch.delenv(FOCK_LERAY_THREADS)
    assert get_worker_count(5) == 5

    monkeypatch.setenv(FOCK_LERAY_THREADS, "0")
    assert get_worker_count() >= 1

    monkeypatch.setenv(FOCK_LERAY_THREADS, "many")
    with pytest.raises(ValueError):
        get_worker_count()

    monkeypatch.setenv(FOCK_LERAY_THREADS, "-1")
    with pytest.raises(ValueError):
        get_worker_count()
