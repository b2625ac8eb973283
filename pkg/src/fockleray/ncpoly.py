"""
Noncommutative polynomials C<x_1, ..., x_n> and their tensor square.

A monomial x_{i_1} ... x_{i_k} is stored as the tuple of letters (i_1, ..., i_k), the
empty tuple being the constant 1. Every NcPolynomial carries a flavor that says which
operators the x_i stand for when a polynomial is evaluated on the vacuum of the full Fock
space:
- "s": the semicircular generators s_i = l_i + l_i^*
- "l": the left creation operators l_i
All of the algebra (products, cyclic gradients, difference quotients) is the same for
both flavors, only evaluate_vacuum and trace look at the flavor.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    Literal,
    Mapping,
    Optional,
    Tuple,
    cast,
)

from fockleray.fock import (
    FieldKey,
    FockVector,
    SparseTerms,
    VectorField,
    _letters_from_json,
    _realization_of,
    _scalar_from_json,
    _scalar_to_json,
    _terms_from_json,
)
from fockleray.linalg import Scalar
from fockleray.shared import MalformedInputError
from fockleray.words import Letters

Flavor = Literal["s", "l"]
FLAVORS: Tuple[Flavor, ...] = ("s", "l")

BiKey = Tuple[Letters, Letters]


def _check_flavor(flavor: str) -> Flavor:
    if flavor not in FLAVORS:
        raise ValueError(f"Unknown flavor {flavor!r}, expected one of {FLAVORS}")
    return cast(Flavor, flavor)


def _check_letters(n: int, letters: Letters) -> None:
    for letter in letters:
        if not 1 <= letter <= n:
            raise ValueError(f"Letter {letter} in {letters} is outside of [1, {n}]")


def _monomial_str(letters: Letters) -> str:
    if not letters:
        return "1"
    return "".join(f"x{letter}" for letter in letters)


class NcPolynomial(SparseTerms[Letters]):
    """Σ c_w x_w, with x_w = x_{w_1} ... x_{w_k}"""

    __slots__ = ("flavor",)

    def __init__(
        self,
        n: int,
        terms: Mapping[Letters, Any],
        flavor: Flavor = "s",
        exact: Optional[bool] = None,
    ) -> None:
        super().__init__(n, terms, exact)
        self.flavor = _check_flavor(flavor)
        for key in self.terms:
            self._validate_key(key)

    def _validate_key(self, key: Letters) -> None:
        _check_letters(self.n, key)

    @staticmethod
    def _key_degree(key: Any) -> int:
        return len(key)

    def _new(
        self, terms: Mapping[Letters, Any], exact: Optional[bool] = None
    ) -> NcPolynomial:
        return NcPolynomial(
            self.n, terms, self.flavor, self.is_exact if exact is None else exact
        )

    def _check_compatible(self, other: SparseTerms) -> None:
        super()._check_compatible(other)
        if cast(NcPolynomial, other).flavor != self.flavor:
            raise ValueError(
                "Cannot combine polynomials of flavor "
                f"{self.flavor} and {cast(NcPolynomial, other).flavor}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NcPolynomial):
            return NotImplemented
        return (
            self.n == other.n
            and self.flavor == other.flavor
            and self.terms == other.terms
        )

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def constant(cls, n: int, value: Any = 1, flavor: Flavor = "s") -> NcPolynomial:
        return cls(n, {(): value}, flavor)

    @classmethod
    def generator(cls, n: int, i: int, flavor: Flavor = "s") -> NcPolynomial:
        """x_i"""
        return cls(n, {(i,): 1}, flavor)

    @classmethod
    def monomial(
        cls, n: int, letters: Iterable[int], coefficient: Any = 1, flavor: Flavor = "s"
    ) -> NcPolynomial:
        return cls(n, {tuple(letters): coefficient}, flavor)

    def multiply(self, other: NcPolynomial) -> NcPolynomial:
        self._check_compatible(other)
        result: Dict[Letters, Any] = {}
        for left, a in self.terms.items():
            for right, b in other.terms.items():
                key = left + right
                result[key] = result.get(key, 0) + a * b
        return self._new(result)

    def __mul__(self, other: Any) -> NcPolynomial:  # type: ignore[override]
        if isinstance(other, NcPolynomial):
            return self.multiply(other)
        return self.scale(other)

    def __rmul__(self, other: Any) -> NcPolynomial:  # type: ignore[override]
        return self.scale(other)

    def power(self, m: int) -> NcPolynomial:
        if m < 0:
            raise ValueError(f"Cannot raise a polynomial to the negative power {m}")
        result = NcPolynomial(self.n, {(): 1}, self.flavor, self.is_exact)
        for _ in range(m):
            result = result.multiply(self)
        return result

    def sorted_items(self) -> List[Tuple[Letters, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"({value})·{_monomial_str(key)}" for key, value in self.sorted_items()
        )

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "flavor": self.flavor,
            "terms": [
                {"word": list(key), **_scalar_to_json(value)}
                for key, value in self.sorted_items()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Any) -> NcPolynomial:
        n, raw_terms = _terms_from_json(data)
        flavor = data.get("flavor", "s")
        if flavor not in FLAVORS:
            raise MalformedInputError(
                f"'flavor' must be one of {FLAVORS}, got {flavor!r}"
            )
        terms: Dict[Letters, Scalar] = {}
        for index, term in enumerate(raw_terms):
            letters = _letters_from_json(term, n, index)
            if letters in terms:
                raise MalformedInputError(f"Term {index} repeats word {list(letters)}")
            terms[letters] = _scalar_from_json(term, index)
        return cls(n, terms, flavor, _realization_of(list(terms.values())))


class BiPolynomial(SparseTerms[BiKey]):
    """
    Σ c A ⊗ B in C<x_1, ..., x_n> ⊗ C<x_1, ..., x_n>, keyed by (A, B). Multiplication is
    (A ⊗ B)(C ⊗ D) = AC ⊗ BD.
    """

    __slots__ = ()

    def __init__(
        self, n: int, terms: Mapping[BiKey, Any], exact: Optional[bool] = None
    ) -> None:
        super().__init__(n, terms, exact)
        for key in self.terms:
            self._validate_key(key)

    def _validate_key(self, key: BiKey) -> None:
        _check_letters(self.n, key[0])
        _check_letters(self.n, key[1])

    @staticmethod
    def _key_degree(key: Any) -> int:
        return len(key[0]) + len(key[1])

    @classmethod
    def left_embedding(cls, p: NcPolynomial) -> BiPolynomial:
        """p ⊗ 1"""
        return cls(p.n, {(key, ()): value for key, value in p.items()}, p.is_exact)

    @classmethod
    def right_embedding(cls, q: NcPolynomial) -> BiPolynomial:
        """1 ⊗ q"""
        return cls(q.n, {((), key): value for key, value in q.items()}, q.is_exact)

    def multiply(self, other: BiPolynomial) -> BiPolynomial:
        self._check_compatible(other)
        result: Dict[BiKey, Any] = {}
        for (a, b), x in self.terms.items():
            for (c, d), y in other.terms.items():
                key = (a + c, b + d)
                result[key] = result.get(key, 0) + x * y
        return self._new(result)

    def __mul__(self, other: Any) -> BiPolynomial:  # type: ignore[override]
        if isinstance(other, BiPolynomial):
            return self.multiply(other)
        return self.scale(other)

    def __rmul__(self, other: Any) -> BiPolynomial:  # type: ignore[override]
        return self.scale(other)

    def sorted_items(self) -> List[Tuple[BiKey, Scalar]]:
        return sorted(
            self.terms.items(),
            key=lambda kv: (len(kv[0][0]) + len(kv[0][1]), kv[0][0], kv[0][1]),
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"({value})·{_monomial_str(a)}⊗{_monomial_str(b)}"
            for (a, b), value in self.sorted_items()
        )


def cyclic_gradient_terms(letters: Letters) -> Iterable[FieldKey]:
    """
    For u = u_0 ... u_{k-1} yields (u_{j+1} ... u_{k-1} u_0 ... u_{j-1}, u_j) for every j,
    i.e. the terms of the cyclic gradient of the monomial u
    """
    for j, letter in enumerate(letters):
        yield letters[j + 1 :] + letters[:j], letter


def cyclic_gradient(p: NcPolynomial) -> Tuple[NcPolynomial, ...]:
    """
    δ(x_{i_1} ... x_{i_k}) = Σ_j x_{i_{j+1}} ... x_{i_k} x_{i_1} ... x_{i_{j-1}} ⊗ f_{i_j},
    returned as the n components. Constants go to 0.
    """
    components: List[Dict[Letters, Any]] = [{} for _ in range(p.n)]
    for letters, value in p.items():
        for rest, j in cyclic_gradient_terms(letters):
            component = components[j - 1]
            component[rest] = component.get(rest, 0) + value
    return tuple(p._new(component) for component in components)


def difference_quotient(i: int, p: NcPolynomial) -> BiPolynomial:
    """∂_i P = Σ_{P = A x_i B} A ⊗ B"""
    if not 1 <= i <= p.n:
        raise ValueError(f"Direction {i} is outside of [1, {p.n}]")
    result: Dict[BiKey, Any] = {}
    for letters, value in p.items():
        for t, letter in enumerate(letters):
            if letter == i:
                key = (letters[:t], letters[t + 1 :])
                result[key] = result.get(key, 0) + value
    return BiPolynomial(p.n, result, p.is_exact)


@functools.lru_cache(maxsize=65536)
def _semicircular_monomial(letters: Letters) -> Tuple[Tuple[Letters, int], ...]:
    """
    s_{i_1} ... s_{i_k} 1 as (word, coefficient) pairs. The coefficients are always
    integers. Cached per suffix, as the monomials of one polynomial share suffixes.
    """
    if not letters:
        return (((), 1),)

    j = letters[0]
    result: Dict[Letters, int] = {}
    for word, value in _semicircular_monomial(letters[1:]):
        created = (j,) + word
        result[created] = result.get(created, 0) + value
        if word and word[0] == j:
            result[word[1:]] = result.get(word[1:], 0) + value
    return tuple((word, value) for word, value in result.items() if value != 0)


def _semicircular_moment(letters: Letters) -> int:
    for word, value in _semicircular_monomial(letters):
        if not word:
            return value
    return 0


def evaluate_vacuum(p: NcPolynomial) -> FockVector:
    """
    p(x_1, ..., x_n) 1, where x_i is s_i or l_i depending on the flavor. For the "l"
    flavor x_w 1 is simply e_w.
    """
    if p.flavor == "l":
        return FockVector(p.n, p.terms, p.is_exact)

    result: Dict[Letters, Any] = {}
    for letters, value in p.items():
        for word, multiplicity in _semicircular_monomial(letters):
            result[word] = result.get(word, 0) + value * multiplicity
    return FockVector(p.n, result, p.is_exact)


def trace(p: NcPolynomial) -> Scalar:
    """τ(p) = <p 1, 1>, the vacuum coefficient of evaluate_vacuum(p)"""
    total: Scalar = Fraction(0) if p.is_exact else 0j
    for letters, value in p.items():
        if p.flavor == "l":
            if not letters:
                total += value
        else:
            moment = _semicircular_moment(letters)
            if moment:
                total += value * moment
    return total


def trace_tensor(b: BiPolynomial) -> Scalar:
    """τ ⊗ τ with both factors evaluated in the semicircular generators"""
    total: Scalar = Fraction(0) if b.is_exact else 0j
    for (left, right), value in b.items():
        moment = _semicircular_moment(left)
        if moment:
            moment *= _semicircular_moment(right)
            if moment:
                total += value * moment
    return total


def chebyshev(k: int) -> Tuple[int, ...]:
    """
    Coefficients, lowest degree first, of the Chebyshev polynomial of the second kind
    normalized to the semicircle on [-2, 2]: U_0 = 1, U_1 = t, U_{k+1} = t U_k - U_{k-1}
    """
    if k < 0:
        raise ValueError(f"Chebyshev degree must not be negative, got {k}")
    previous: List[int] = []
    current = [1]
    for _ in range(k):
        shifted = [0] + current
        for d, c in enumerate(previous):
            shifted[d] -= c
        previous, current = current, shifted
    return tuple(current)


def chebyshev_polynomial(n: int, k: int, i: int, flavor: Flavor = "s") -> NcPolynomial:
    """U_k(x_i)"""
    if not 1 <= i <= n:
        raise ValueError(f"Direction {i} is outside of [1, {n}]")
    return NcPolynomial(n, {(i,) * d: c for d, c in enumerate(chebyshev(k))}, flavor)


def gradient_field(p: NcPolynomial) -> VectorField:
    """δ(p)[1 ⊕ ... ⊕ 1]: every component of the cyclic gradient evaluated on the vacuum"""
    return VectorField.from_components(
        [evaluate_vacuum(component) for component in cyclic_gradient(p)]
    )


def left_gradient_field(n: int, letters: Letters, coefficient: Any = 1) -> VectorField:
    """
    δ^l(l_u)[1 ⊕ ... ⊕ 1] = Σ_j e_{u_{j+1} ... u_k u_1 ... u_{j-1}} ⊗ f_{u_j}, directly
    from the letters of u without building a polynomial
    """
    result: Dict[FieldKey, Any] = {}
    for key in cyclic_gradient_terms(letters):
        result[key] = result.get(key, 0) + coefficient
    return VectorField(n, result)
