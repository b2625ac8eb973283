"""
Executable checks of the structural identities, one per result, each returning a
CheckReport.

Exact checks compare Fractions with ==, so passed means the identity holds bit for bit.
The ζ-basis check is the only float check. Randomized checks draw from
numpy.random.default_rng(seed) and record the seed, and a failing check records a JSON
witness that reproduces the failure.

run_suite fans a plan of checks out over worker processes and returns the reports in
plan order.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from fockleray.bases import (
    dim_report,
    divfree_basis,
    divfree_closed_form,
    divfree_preimage_basis,
    divfree_preimage_words,
    omega_images,
    omega_set,
    zeta_basis,
)
from fockleray.config import (
    DEFAULT_PROJECTION_TRIALS,
    DEFAULT_SEED,
    DEFAULT_STEIN_DEGREE_CAP,
    DEFAULT_STEIN_TRIALS,
    FLOAT_RANK_TOLERANCE,
    RADIAL_MAX_POWER,
    RANDOM_COEFFICIENT_BOUND,
    RANDOM_FIELD_MAX_TERMS,
    ZETA_MAX_DEGREE,
    get_worker_count,
)
from fockleray.fock import (
    FockVector,
    VectorField,
    cyclic_complement,
    theta_l_star,
)
from fockleray.linalg import (
    coordinate_matrix,
    float_rank,
    gram,
    nullspace,
    span_rank,
    span_relation,
)
from fockleray.ncpoly import (
    Flavor,
    NcPolynomial,
    chebyshev_polynomial,
    cyclic_gradient,
    difference_quotient,
    evaluate_vacuum,
    gradient_field,
    left_gradient_field,
    trace,
    trace_tensor,
)
from fockleray.projections import (
    cyclic_gradient_basis,
    leray,
    orthonormal_basis,
    project_cyclic,
    project_cyclic_by_expansion,
)
from fockleray.words import (
    Letters,
    all_words,
    all_words_letters,
    count_orbits_brute_force,
    necklace_count,
    rotate_letters,
)


@dataclasses.dataclass(frozen=True)
class CheckReport:
    name: str
    params: Dict[str, int]
    passed: bool
    details: Dict[str, Any]
    mode: str = "exact"
    seed: Optional[int] = None
    # JSON-serializable input that reproduces a failure
    witness: Optional[Any] = None

    def to_json_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {
            "name": self.name,
            "params": self.params,
            "passed": self.passed,
            "mode": self.mode,
            "details": self.details,
            "seed": self.seed,
        }
        if self.witness is not None:
            result["witness"] = self.witness
        return result


def random_field(
    n: int,
    k: int,
    rng: np.random.Generator,
    max_terms: int = RANDOM_FIELD_MAX_TERMS,
    bound: int = RANDOM_COEFFICIENT_BOUND,
) -> VectorField:
    """A homogeneous degree k field with up to max_terms integer coefficients"""
    terms: Dict[Tuple[Letters, int], int] = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        letters = tuple(int(letter) for letter in rng.integers(1, n + 1, size=k))
        j = int(rng.integers(1, n + 1))
        terms[(letters, j)] = int(rng.integers(-bound, bound + 1))
    return VectorField(n, terms, exact=True)


def random_polynomial(
    n: int,
    degree_cap: int,
    rng: np.random.Generator,
    max_terms: int = RANDOM_FIELD_MAX_TERMS,
    bound: int = RANDOM_COEFFICIENT_BOUND,
) -> NcPolynomial:
    """A semicircular polynomial of degree at most degree_cap with integer coefficients"""
    terms: Dict[Letters, int] = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        degree = int(rng.integers(0, degree_cap + 1))
        letters = tuple(int(letter) for letter in rng.integers(1, n + 1, size=degree))
        terms[letters] = int(rng.integers(-bound, bound + 1))
    return NcPolynomial(n, terms, "s", exact=True)


def check_burnside(n: int, k: int) -> CheckReport:
    """The Burnside count of necklaces against brute-force orbit counting"""
    formula = necklace_count(n, k)
    brute_force = count_orbits_brute_force(n, k)
    return CheckReport(
        "burnside",
        {"n": n, "k": k},
        formula == brute_force,
        {"necklace_count": formula, "brute_force": brute_force},
    )


def check_cyclic_invariance(n: int, k: int) -> CheckReport:
    """δ^l(l_{Ru}) = δ^l(l_u), both as polynomials and on the vacuum, for u in [n]^k"""
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    for letters in all_words_letters(n, k):
        rotated = rotate_letters(letters, 1)
        if left_gradient_field(n, letters) != left_gradient_field(n, rotated):
            return CheckReport(
                "cyclic_invariance",
                {"n": n, "k": k},
                False,
                {"words_checked": n**k},
                witness={"word": list(letters)},
            )
        if cyclic_gradient(NcPolynomial.monomial(n, letters, flavor="l")) != (
            cyclic_gradient(NcPolynomial.monomial(n, rotated, flavor="l"))
        ):
            return CheckReport(
                "cyclic_invariance",
                {"n": n, "k": k},
                False,
                {"words_checked": n**k},
                witness={"word": list(letters)},
            )
    return CheckReport(
        "cyclic_invariance", {"n": n, "k": k}, True, {"words_checked": n**k}
    )


def _kernel_vectors(
    images: Sequence[Any], words: Sequence[Letters], n: int
) -> List[FockVector]:
    """
    The kernel of the linear map sending e_{words[i]} to images[i], as FockVectors. The
    coordinate matrix has one row per image, so the map's matrix is its transpose.
    """
    matrix, _ = coordinate_matrix(images)
    return [
        FockVector(n, {words[i]: value for i, value in enumerate(vector)})
        for vector in nullspace(matrix.transpose())
    ]


def check_kernel_lemma(n: int, k: int) -> CheckReport:
    """ker(θ^l*) = ker(I - R) on (C^n)^{⊗k}, compared as exact subspaces"""
    words = list(all_words_letters(n, k))
    basis = [FockVector.from_letters(n, letters) for letters in words]
    theta_kernel = _kernel_vectors([theta_l_star(e) for e in basis], words, n)
    cyclic_kernel = _kernel_vectors([cyclic_complement(e) for e in basis], words, n)

    relation = span_relation(theta_kernel, cyclic_kernel)
    expected = necklace_count(n, k)
    return CheckReport(
        "kernel_lemma",
        {"n": n, "k": k},
        relation.equal
        and len(theta_kernel) == expected
        and len(cyclic_kernel) == expected,
        {
            "dim_ker_theta_l_star": len(theta_kernel),
            "dim_ker_i_minus_r": len(cyclic_kernel),
            "rank_union": relation.rank_union,
            "necklaces": expected,
        },
    )


def _flavor_gradient_fields(n: int, d: int, flavor: Flavor) -> List[VectorField]:
    return [
        gradient_field(NcPolynomial.monomial(n, letters, flavor=flavor))
        for degree in range(1, d + 1)
        for letters in all_words_letters(n, degree)
    ]


def check_range_equality(n: int, d: int) -> CheckReport:
    """
    The semicircular and left creation cyclic gradients of all monomials of degree d or
    less, evaluated on the vacuum, span the same space
    """
    relation = span_relation(
        _flavor_gradient_fields(n, d, "s"), _flavor_gradient_fields(n, d, "l")
    )
    return CheckReport(
        "range_equality",
        {"n": n, "d": d},
        relation.equal,
        {
            "rank_semicircular": relation.rank_a,
            "rank_left_creation": relation.rank_b,
            "rank_union": relation.rank_union,
        },
    )


def check_orthonormal_basis(n: int, k: int) -> CheckReport:
    """
    The cyclic gradient basis has exactly diagonal Gram matrix with entries m^2 p, one
    element per necklace, and normalizes to an orthonormal family
    """
    basis = cyclic_gradient_basis(n, k)
    matrix = gram([element.vector for element in basis])
    diagonal_ok = matrix.is_diagonal() and matrix.diagonal() == [
        element.squared_norm for element in basis
    ]
    expected = necklace_count(n, k + 1)

    normalized = gram(orthonormal_basis(n, k))
    normalized_error = max(
        (
            abs(normalized[i, j] - (1 if i == j else 0))
            for i in range(normalized.rows)
            for j in range(normalized.cols)
        ),
        default=0.0,
    )
    return CheckReport(
        "orthonormal_basis",
        {"n": n, "k": k},
        diagonal_ok
        and len(basis) == expected
        and normalized_error <= FLOAT_RANK_TOLERANCE,
        {
            "count": len(basis),
            "necklaces": expected,
            "diagonal": diagonal_ok,
            "normalized_max_error": normalized_error,
        },
    )


def check_dimension(n: int, k: int) -> CheckReport:
    """
    The span of θ^l*((I - R) e_w) over w in [n]^{k+1} has dimension n^{k+1} minus the
    number of necklaces, and the dimensions up to degree k add up to dim_vect_leq
    """
    report = dim_report(n, k)
    images = [
        theta_l_star(cyclic_complement(FockVector.basis(w)))
        for w in all_words(n, k + 1)
    ]
    computed = span_rank(images)
    cumulative = sum(dim_report(n, j).dim_divfree for j in range(k + 1))
    return CheckReport(
        "dimension",
        {"n": n, "k": k},
        computed == report.dim_divfree
        and report.dim_cyclic + report.dim_divfree == report.ambient
        and cumulative == report.dim_vect_leq,
        {
            "rank": computed,
            "dim_divfree": report.dim_divfree,
            "dim_vect_leq": report.dim_vect_leq,
            "cumulative_dim_divfree": cumulative,
        },
    )


def _projection_failure(v: VectorField, w: VectorField) -> Optional[str]:
    """The name of the first projection identity that fails for v (and w), if any"""
    p_v = project_cyclic(v)
    l_v = leray(v)
    p_w = project_cyclic(w)
    l_w = leray(w)
    if p_v != project_cyclic_by_expansion(v):
        return "closed_form_vs_expansion"
    if project_cyclic(p_v) != p_v:
        return "project_cyclic_idempotent"
    if leray(l_v) != l_v:
        return "leray_idempotent"
    if p_v.inner(w) != v.inner(p_w):
        return "project_cyclic_self_adjoint"
    if l_v.inner(w) != v.inner(l_w):
        return "leray_self_adjoint"
    if not leray(p_v).is_zero() or not project_cyclic(l_v).is_zero():
        return "mutual_annihilation"
    if p_v.inner(l_v) != 0:
        return "orthogonality"
    return None


def check_projection_formula(
    n: int,
    k: int,
    trials: int = DEFAULT_PROJECTION_TRIALS,
    seed: int = DEFAULT_SEED,
) -> CheckReport:
    """
    The closed form of the projection onto cyclic gradients agrees with the expansion in
    the orthogonal basis, both projections are idempotent, self-adjoint and annihilate
    each other, and leray fixes every divergence-free basis field
    """
    params = {"n": n, "k": k, "trials": trials}
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        v = random_field(n, k, rng)
        w = random_field(n, k, rng)
        failure = _projection_failure(v, w)
        if failure is not None:
            return CheckReport(
                "projection_formula",
                params,
                False,
                {"failed_identity": failure, "trial": trial},
                seed=seed,
                witness={"v": v.to_json_dict(), "w": w.to_json_dict()},
            )

    for field in divfree_basis(n, k):
        if leray(field) != field:
            return CheckReport(
                "projection_formula",
                params,
                False,
                {"failed_identity": "leray_fixes_divfree"},
                seed=seed,
                witness={"v": field.to_json_dict()},
            )

    return CheckReport("projection_formula", params, True, {}, seed=seed)


def check_direct_sum(n: int, k: int) -> CheckReport:
    """
    The cyclic gradients and the divergence-free fields of degree k are orthogonal and
    together span [(C^n)^{⊗k}]^n
    """
    gradients = [element.vector for element in cyclic_gradient_basis(n, k)]
    divfree = divfree_basis(n, k)
    orthogonal = all(g.inner(d) == 0 for g in gradients for d in divfree)
    relation = span_relation(gradients, divfree)
    ambient = n ** (k + 1)
    return CheckReport(
        "direct_sum",
        {"n": n, "k": k},
        orthogonal
        and relation.rank_a + relation.rank_b == ambient
        and relation.rank_union == ambient,
        {
            "orthogonal": orthogonal,
            "rank_cyclic": relation.rank_a,
            "rank_divfree": relation.rank_b,
            "rank_union": relation.rank_union,
            "ambient": ambient,
        },
    )


def check_divfree_basis(n: int, k: int) -> CheckReport:
    """
    The preimages e_v - e_{Rv} and their θ^l* images are linearly independent, there are
    dim X_k^(n) of them, the images match the three-term closed form, and each one is
    fixed by leray
    """
    params = {"n": n, "k": k}
    preimages = divfree_preimage_basis(n, k)
    fields = divfree_basis(n, k)
    expected = dim_report(n, k).dim_divfree
    details: Dict[str, Any] = {
        "count": len(fields),
        "dim_divfree": expected,
        "rank_preimages": span_rank(preimages),
        "rank_fields": span_rank(fields),
    }

    for v, field in zip(divfree_preimage_words(n, k), fields):
        if divfree_closed_form(v) != field:
            return CheckReport(
                "divfree_basis",
                params,
                False,
                {**details, "failed_identity": "closed_form"},
                witness={"word": list(v.letters)},
            )
        if not project_cyclic(field).is_zero():
            return CheckReport(
                "divfree_basis",
                params,
                False,
                {**details, "failed_identity": "divergence_free"},
                witness={"word": list(v.letters)},
            )

    return CheckReport(
        "divfree_basis",
        params,
        len(fields) == expected
        and details["rank_preimages"] == expected
        and details["rank_fields"] == expected,
        details,
    )


def check_omega_deficiency(n: int, k: int) -> CheckReport:
    """
    |Ω_{k+1}| = (n^{k+1} - n) / 2, the θ^l*((I - R) e_w) for w in Ω_{k+1} are
    divergence-free, and whenever |Ω_{k+1}| < dim X_k^(n) they fail to span X_k^(n)
    """
    omega = omega_set(n, k)
    images = omega_images(n, k)
    rank = span_rank(images)
    images_divfree = all(project_cyclic(image).is_zero() for image in images)
    expected_size = (n ** (k + 1) - n) // 2
    dim_divfree = dim_report(n, k).dim_divfree
    return CheckReport(
        "omega_deficiency",
        {"n": n, "k": k},
        len(omega) == expected_size
        and images_divfree
        and rank <= min(len(omega), dim_divfree)
        and (len(omega) >= dim_divfree or rank < dim_divfree),
        {
            "omega_size": len(omega),
            "expected_size": expected_size,
            "rank": rank,
            "dim_divfree": dim_divfree,
            "deficiency": dim_divfree - rank,
            "images_divfree": images_divfree,
        },
    )


def check_zeta_basis(n: int, k: int) -> CheckReport:
    """
    The ζ-basis has dim X_k^(n) elements, full numerical rank, and every element is fixed
    by leray up to the float tolerance
    """
    vectors = zeta_basis(n, k)
    expected = dim_report(n, k).dim_divfree
    numerical_rank = float_rank(coordinate_matrix(vectors)[0]) if vectors else 0

    worst_residual = 0.0
    for v in vectors:
        norm = math.sqrt(abs(complex(v.norm_squared())))
        residual = math.sqrt(abs(complex((leray(v) - v).norm_squared())))
        worst_residual = max(worst_residual, residual / norm if norm else residual)

    return CheckReport(
        "zeta_basis",
        {"n": n, "k": k},
        len(vectors) == expected
        and numerical_rank == expected
        and worst_residual <= FLOAT_RANK_TOLERANCE,
        {
            "count": len(vectors),
            "dim_divfree": expected,
            "numerical_rank": numerical_rank,
            "max_relative_residual": worst_residual,
        },
        mode="float",
    )


def check_radial(m: int) -> CheckReport:
    """
    With f = (x_1^2 + x_2^2)^m in the semicircular generators, v = (δ_2 f, -δ_1 f) is
    divergence-free on the vacuum. Also checks the identity the induction on m rests on:
    v = m (g^{m-1} u + u g^{m-1}) with g = x_1^2 + x_2^2 and u = (x_2, -x_1).
    """
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")

    g = NcPolynomial(2, {(1, 1): 1, (2, 2): 1}, "s")
    f = g.power(m)
    gradient = cyclic_gradient(f)
    v_poly = (gradient[1], -gradient[0])

    g_prev = g.power(m - 1)
    u = (NcPolynomial.generator(2, 2), -NcPolynomial.generator(2, 1))
    recursion_ok = all(
        v_poly[i] == (g_prev * u[i] + u[i] * g_prev) * m for i in range(2)
    )

    field = VectorField.from_components([evaluate_vacuum(p) for p in v_poly])
    projection_zero = project_cyclic(field).is_zero()
    details: Dict[str, Any] = {
        "recursion": recursion_ok,
        "projection_zero": projection_zero,
        "degrees": sorted(field.degrees()),
    }
    if m == 1:
        details["field"] = field.to_json_dict()

    return CheckReport(
        "radial",
        {"m": m},
        recursion_ok and projection_zero,
        details,
        witness=None if projection_zero else field.to_json_dict(),
    )


def check_stein(
    n: int = 2,
    trials: int = DEFAULT_STEIN_TRIALS,
    degree_cap: int = DEFAULT_STEIN_DEGREE_CAP,
    seed: int = DEFAULT_SEED,
) -> CheckReport:
    """τ[s_i P] = τ ⊗ τ[∂_i P] for random semicircular polynomials P and every i"""
    params = {"n": n, "trials": trials, "degree_cap": degree_cap}
    rng = np.random.default_rng(seed)
    for trial in range(trials):
        p = random_polynomial(n, degree_cap, rng)
        for i in range(1, n + 1):
            lhs = trace(NcPolynomial.generator(n, i) * p)
            rhs = trace_tensor(difference_quotient(i, p))
            if lhs != rhs:
                return CheckReport(
                    "stein",
                    params,
                    False,
                    {"trial": trial, "i": i, "lhs": str(lhs), "rhs": str(rhs)},
                    seed=seed,
                    witness=p.to_json_dict(),
                )
    return CheckReport("stein", params, True, {}, seed=seed)


def _runs(letters: Letters) -> List[Tuple[int, int]]:
    """Run-length decomposition, e.g. 11122 -> [(1, 3), (2, 2)]"""
    runs: List[Tuple[int, int]] = []
    for letter in letters:
        if runs and runs[-1][0] == letter:
            runs[-1] = (letter, runs[-1][1] + 1)
        else:
            runs.append((letter, 1))
    return runs


def check_chebyshev(n: int, max_degree: int) -> CheckReport:
    """
    U_{k_1}(s_{i_1}) ... U_{k_p}(s_{i_p}) 1 = e_{i_1^{k_1} ... i_p^{k_p}} for every
    alternating pattern of total degree max_degree or less, and the even moments of s_1
    are the Catalan numbers
    """
    params = {"n": n, "max_degree": max_degree}
    checked = 0
    for degree in range(max_degree + 1):
        for letters in all_words_letters(n, degree):
            product = NcPolynomial.constant(n)
            for i, k in _runs(letters):
                product = product * chebyshev_polynomial(n, k, i)
            checked += 1
            if evaluate_vacuum(product) != FockVector.from_letters(n, letters):
                return CheckReport(
                    "chebyshev",
                    params,
                    False,
                    {"patterns_checked": checked},
                    witness={"word": list(letters)},
                )

    catalan_ok = all(
        trace(NcPolynomial.monomial(n, (1,) * (2 * m)))
        == math.comb(2 * m, m) // (m + 1)
        for m in range(max_degree // 2 + 1)
    )
    return CheckReport(
        "chebyshev",
        params,
        catalan_ok,
        {"patterns_checked": checked, "catalan_moments": catalan_ok},
    )


CHECKS: Dict[str, Callable[..., CheckReport]] = {
    "burnside": check_burnside,
    "cyclic_invariance": check_cyclic_invariance,
    "kernel_lemma": check_kernel_lemma,
    "range_equality": check_range_equality,
    "orthonormal_basis": check_orthonormal_basis,
    "dimension": check_dimension,
    "projection_formula": check_projection_formula,
    "direct_sum": check_direct_sum,
    "divfree_basis": check_divfree_basis,
    "omega_deficiency": check_omega_deficiency,
    "zeta_basis": check_zeta_basis,
    "radial": check_radial,
    "stein": check_stein,
    "chebyshev": check_chebyshev,
}


PlannedCheck = Tuple[str, Dict[str, int]]


def plan_suite(
    n: int,
    max_degree: int,
    seed: int = DEFAULT_SEED,
    names: Optional[Iterable[str]] = None,
    trials: Optional[int] = None,
) -> List[PlannedCheck]:
    """
    The checks to run for alphabet size n and degrees up to max_degree, in a fixed
    order. names restricts the plan to some checks, trials overrides the number of
    random trials of the randomized checks.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if max_degree < 0:
        raise ValueError(f"max_degree must not be negative, got {max_degree}")

    selected = list(CHECKS) if names is None else list(names)
    for name in selected:
        if name not in CHECKS:
            raise ValueError(f"Unknown check {name}, expected one of {list(CHECKS)}")

    degrees = range(max_degree + 1)
    positive_degrees = range(1, max_degree + 1)
    projection_trials = DEFAULT_PROJECTION_TRIALS if trials is None else trials
    stein_trials = DEFAULT_STEIN_TRIALS if trials is None else trials

    by_name: Dict[str, List[Dict[str, int]]] = {
        "burnside": [{"n": n, "k": k} for k in range(1, max_degree + 2)],
        "cyclic_invariance": [{"n": n, "k": k} for k in range(1, max_degree + 2)],
        "kernel_lemma": [{"n": n, "k": k} for k in positive_degrees],
        "range_equality": [{"n": n, "d": d} for d in positive_degrees],
        "orthonormal_basis": [{"n": n, "k": k} for k in degrees],
        "dimension": [{"n": n, "k": k} for k in degrees],
        "projection_formula": [
            {"n": n, "k": k, "trials": projection_trials, "seed": seed}
            for k in degrees
        ],
        "direct_sum": [{"n": n, "k": k} for k in degrees],
        "divfree_basis": [{"n": n, "k": k} for k in degrees],
        "omega_deficiency": [{"n": n, "k": k} for k in positive_degrees],
        "zeta_basis": [
            {"n": n, "k": k} for k in range(1, min(max_degree, ZETA_MAX_DEGREE) + 1)
        ],
        "radial": [{"m": m} for m in range(1, RADIAL_MAX_POWER + 1)],
        "stein": [
            {
                "n": n,
                "trials": stein_trials,
                "degree_cap": DEFAULT_STEIN_DEGREE_CAP,
                "seed": seed,
            }
        ],
        "chebyshev": [{"n": n, "max_degree": max_degree}],
    }
    return [(name, params) for name in selected for params in by_name[name]]


def run_check(name: str, params: Dict[str, int]) -> CheckReport:
    """Runs one planned check. This is what the worker processes execute."""
    logging.debug(f"Starting check {name} {params}")
    report = CHECKS[name](**params)
    if report.passed:
        logging.info(f"Check {name} {params} passed")
    else:
        logging.warning(
            f"Check {name} {params} failed: {report.details}, witness: "
            f"{report.witness}"
        )
    return report


def run_suite(
    plan: Sequence[PlannedCheck], workers: Optional[int] = None
) -> List[CheckReport]:
    """
    Runs every planned check and returns the reports in plan order. With more than one
    worker the checks run in a process pool.
    """
    worker_count = min(get_worker_count(workers), max(len(plan), 1))
    if worker_count == 1:
        return [run_check(name, params) for name, params in plan]

    logging.info(f"Running {len(plan)} checks on {worker_count} worker processes")
    ctx = multiprocessing.get_context("spawn")
    with ProcessPoolExecutor(max_workers=worker_count, mp_context=ctx) as executor:
        futures = [executor.submit(run_check, name, params) for name, params in plan]
        reports = [future.result() for future in futures]
    logging.info("All worker processes finished")
    return reports
