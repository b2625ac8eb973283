"""
Finitely supported vectors in the full Fock space F(C^n) = C1 ⊕ ⊕_{k>=1} (C^n)^{⊗k} and
vector fields in F(C^n)^n ≅ F(C^n) ⊗ C^n.

A FockVector maps words (tuples of letters, the empty tuple being the vacuum 1) to
scalars, e_w being the basis vector for w. A VectorField maps (word, direction) to
scalars, e_w ⊗ f_j being the basis vector. Both families are orthonormal. Zero
coefficients are never stored, so two vectors are equal exactly when their maps are.

JSON layout (shared with the CLI):
    {"n": 2, "terms": [{"word": [1, 2], "dir": 1, "num": "1", "den": "2"}, ...]}
"dir" only appears for fields. Float vectors use "re"/"im" instead of "num"/"den". Terms
are written sorted by (degree, word, dir).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import (
    Any,
    Callable,
    Dict,
    Generic,
    Iterable,
    Iterator,
    List,
    Literal,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    TypeVar,
)

from fockleray.linalg import Scalar, conj, is_exact_value, to_scalar
from fockleray.shared import MalformedInputError
from fockleray.words import Letters, Word, rotate_letters

GeneratorKind = Literal[
    "left_create",
    "left_annihilate",
    "right_create",
    "right_annihilate",
    "semicircular",
]

_GENERATOR_KINDS = (
    "left_create",
    "left_annihilate",
    "right_create",
    "right_annihilate",
    "semicircular",
)

FieldKey = Tuple[Letters, int]

_K = TypeVar("_K")
_V = TypeVar("_V", bound="SparseTerms")


def _check_direction(n: int, j: int) -> None:
    if not 1 <= j <= n:
        raise ValueError(f"Direction {j} is outside of [1, {n}]")


def _infer_exact(terms: Mapping[Any, Any]) -> bool:
    return all(is_exact_value(value) for value in terms.values())


class SparseTerms(Generic[_K]):
    """
    Finitely supported maps key -> scalar with the usual vector space operations,
    shared by FockVector, VectorField and the polynomial types. Instances are treated as
    immutable: every operation returns a new vector.
    """

    __slots__ = ("n", "terms", "is_exact")

    def __init__(
        self, n: int, terms: Mapping[_K, Any], exact: Optional[bool] = None
    ) -> None:
        if n < 1:
            raise ValueError(f"Alphabet size must be positive, got {n}")
        if exact is None:
            exact = _infer_exact(terms)
        self.n = n
        self.is_exact = exact
        self.terms: Dict[_K, Scalar] = {
            key: to_scalar(value, exact) for key, value in terms.items() if value != 0
        }

    # subclasses implement these two
    def _validate_key(self, key: _K) -> None:
        raise NotImplementedError()

    @staticmethod
    def _key_degree(key: Any) -> int:
        raise NotImplementedError()

    def _new(self: _V, terms: Mapping[_K, Any], exact: Optional[bool] = None) -> _V:
        return type(self)(self.n, terms, self.is_exact if exact is None else exact)

    def _check_compatible(self, other: SparseTerms) -> None:
        if type(other) is not type(self):
            raise TypeError(f"Cannot combine {type(self)} with {type(other)}")
        if other.n != self.n:
            raise ValueError(
                f"Cannot combine vectors over alphabets of size {self.n} and {other.n}"
            )
        if other.is_exact != self.is_exact:
            raise TypeError("Cannot combine exact and float vectors")

    def items(self) -> Iterator[Tuple[_K, Scalar]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseTerms) or type(other) is not type(self):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def coefficient(self, key: _K) -> Scalar:
        return self.terms.get(key, Fraction(0) if self.is_exact else 0j)

    def __add__(self: _V, other: _V) -> _V:
        self._check_compatible(other)
        result = dict(self.terms)
        for key, value in other.terms.items():
            result[key] = result.get(key, 0) + value
        return self._new(result)

    def __sub__(self: _V, other: _V) -> _V:
        return self + (-other)

    def __neg__(self: _V) -> _V:
        return self._new({key: -value for key, value in self.terms.items()})

    def scale(self: _V, factor: Any) -> _V:
        if self.is_exact and not is_exact_value(factor):
            raise TypeError(f"Cannot scale an exact vector by {factor!r}")
        factor = to_scalar(factor, self.is_exact)
        return self._new({key: value * factor for key, value in self.terms.items()})

    def __mul__(self: _V, factor: Any) -> _V:
        return self.scale(factor)

    __rmul__ = __mul__

    def __truediv__(self: _V, divisor: Any) -> _V:
        if self.is_exact:
            return self.scale(Fraction(1) / to_scalar(divisor, True))
        return self.scale(1 / complex(divisor))

    def inner(self, other: SparseTerms) -> Scalar:
        """<self, other>, conjugate-linear in other. Basis vectors are orthonormal."""
        self._check_compatible(other)
        smaller, larger = (
            (self.terms, other.terms)
            if len(self.terms) <= len(other.terms)
            else (other.terms, self.terms)
        )
        total: Scalar = Fraction(0) if self.is_exact else 0j
        for key in smaller:
            if key in larger:
                total += self.terms[key] * conj(other.terms[key])
        return total

    def norm_squared(self) -> Scalar:
        return self.inner(self)

    def degrees(self) -> Set[int]:
        return {self._key_degree(key) for key in self.terms}

    def homogeneous_part(self: _V, k: int) -> _V:
        return self._new(
            {
                key: value
                for key, value in self.terms.items()
                if self._key_degree(key) == k
            }
        )

    def is_homogeneous(self, k: Optional[int] = None) -> bool:
        degrees = self.degrees()
        if k is None:
            return len(degrees) <= 1
        return degrees <= {k}

    def to_float(self: _V) -> _V:
        if not self.is_exact:
            return self
        return self._new(self.terms, exact=False)

    def map_keys(self: _V, key_map: Callable[[_K], _K]) -> _V:
        result: Dict[_K, Any] = {}
        for key, value in self.terms.items():
            new_key = key_map(key)
            result[new_key] = result.get(new_key, 0) + value
        return self._new(result)

    def max_abs_difference(self, other: SparseTerms) -> float:
        """For float comparisons"""
        self._check_compatible(other)
        keys = set(self.terms) | set(other.terms)
        return max(
            (
                abs(complex(self.coefficient(k)) - complex(other.coefficient(k)))
                for k in keys
            ),
            default=0.0,
        )

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, {self})"


def _scalar_to_json(value: Scalar) -> Dict[str, Any]:
    if isinstance(value, Fraction):
        return {"num": str(value.numerator), "den": str(value.denominator)}
    return {"re": value.real, "im": value.imag}


def _scalar_from_json(term: Mapping[str, Any], index: int) -> Scalar:
    try:
        if "num" in term or "den" in term:
            numerator = int(str(term["num"]))
            denominator = int(str(term.get("den", "1")))
            if denominator == 0:
                raise MalformedInputError(f"Term {index} has a zero denominator")
            return Fraction(numerator, denominator)
        if "re" in term or "im" in term:
            re, im = float(term.get("re", 0.0)), float(term.get("im", 0.0))
            if not (math.isfinite(re) and math.isfinite(im)):
                raise MalformedInputError(
                    f"Term {index} has a coefficient that is not finite: {re}, {im}"
                )
            return complex(re, im)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, MalformedInputError):
            raise
        raise MalformedInputError(f"Term {index} has an invalid coefficient: {e}")
    raise MalformedInputError(
        f"Term {index} has no coefficient, expected num/den or re/im"
    )


def _letters_from_json(term: Mapping[str, Any], n: int, index: int) -> Letters:
    word = term.get("word")
    if not isinstance(word, list) or not all(
        isinstance(letter, int) and not isinstance(letter, bool) for letter in word
    ):
        raise MalformedInputError(
            f"Term {index} must have a 'word' that is an array of integers, "
            f"got {word!r}"
        )
    try:
        return Word(n, tuple(word)).letters
    except ValueError as e:
        raise MalformedInputError(f"Term {index}: {e}")


def _terms_from_json(data: Any) -> Tuple[int, List[Mapping[str, Any]]]:
    if not isinstance(data, Mapping):
        raise MalformedInputError("Expected a JSON object with 'n' and 'terms'")
    n = data.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MalformedInputError(f"'n' must be a positive integer, got {n!r}")
    terms = data.get("terms")
    if not isinstance(terms, list):
        raise MalformedInputError("'terms' must be an array")
    for index, term in enumerate(terms):
        if not isinstance(term, Mapping):
            raise MalformedInputError(f"Term {index} must be an object, got {term!r}")
    return n, terms


def _realization_of(values: Sequence[Scalar]) -> Optional[bool]:
    kinds = {isinstance(value, Fraction) for value in values}
    if len(kinds) > 1:
        raise MalformedInputError("Cannot mix num/den and re/im coefficients")
    return kinds.pop() if kinds else True


class FockVector(SparseTerms[Letters]):
    """A finitely supported vector Σ c_w e_w in F(C^n)"""

    __slots__ = ()

    def __init__(
        self, n: int, terms: Mapping[Letters, Any], exact: Optional[bool] = None
    ) -> None:
        super().__init__(n, terms, exact)
        for key in self.terms:
            self._validate_key(key)

    def _validate_key(self, key: Letters) -> None:
        for letter in key:
            if not 1 <= letter <= self.n:
                raise ValueError(
                    f"Letter {letter} in {key} is outside of [1, {self.n}]"
                )

    @staticmethod
    def _key_degree(key: Any) -> int:
        return len(key)

    @classmethod
    def zero(cls, n: int, exact: bool = True) -> FockVector:
        return cls(n, {}, exact)

    @classmethod
    def vacuum(cls, n: int) -> FockVector:
        return cls(n, {(): 1})

    @classmethod
    def basis(cls, w: Word) -> FockVector:
        """e_w"""
        return cls(w.n, {w.letters: 1})

    @classmethod
    def from_letters(cls, n: int, letters: Letters, coefficient: Any = 1) -> FockVector:
        return cls(n, {tuple(letters): coefficient})

    def sorted_items(self) -> List[Tuple[Letters, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"({value})·e_{''.join(map(str, key)) or 'ε'}"
            for key, value in self.sorted_items()
        )

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "terms": [
                {"word": list(key), **_scalar_to_json(value)}
                for key, value in self.sorted_items()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Any) -> FockVector:
        n, raw_terms = _terms_from_json(data)
        terms: Dict[Letters, Scalar] = {}
        for index, term in enumerate(raw_terms):
            letters = _letters_from_json(term, n, index)
            if letters in terms:
                raise MalformedInputError(f"Term {index} repeats word {list(letters)}")
            terms[letters] = _scalar_from_json(term, index)
        return cls(n, terms, _realization_of(list(terms.values())))


class VectorField(SparseTerms[FieldKey]):
    """
    A finitely supported vector Σ c_{w,j} e_w ⊗ f_j in F(C^n) ⊗ C^n, i.e. an n-tuple of
    FockVectors where component j collects the terms with direction j.
    """

    __slots__ = ()

    def __init__(
        self, n: int, terms: Mapping[FieldKey, Any], exact: Optional[bool] = None
    ) -> None:
        super().__init__(n, terms, exact)
        for key in self.terms:
            self._validate_key(key)

    def _validate_key(self, key: FieldKey) -> None:
        letters, j = key
        _check_direction(self.n, j)
        for letter in letters:
            if not 1 <= letter <= self.n:
                raise ValueError(
                    f"Letter {letter} in {letters} is outside of [1, {self.n}]"
                )

    @staticmethod
    def _key_degree(key: Any) -> int:
        return len(key[0])

    @classmethod
    def zero(cls, n: int, exact: bool = True) -> VectorField:
        return cls(n, {}, exact)

    @classmethod
    def basis(cls, w: Word, j: int) -> VectorField:
        """e_w ⊗ f_j"""
        return cls(w.n, {(w.letters, j): 1})

    @classmethod
    def from_components(cls, components: Sequence[FockVector]) -> VectorField:
        if not components:
            raise ValueError("A vector field needs at least one component")
        n = components[0].n
        if len(components) != n:
            raise ValueError(
                f"A vector field over C^{n} needs {n} components, got {len(components)}"
            )
        exact = components[0].is_exact
        terms: Dict[FieldKey, Scalar] = {}
        for j, component in enumerate(components, start=1):
            if component.n != n or component.is_exact != exact:
                raise ValueError(f"Component {j} does not match component 1")
            for letters, value in component.items():
                terms[(letters, j)] = value
        return cls(n, terms, exact)

    def component(self, j: int) -> FockVector:
        _check_direction(self.n, j)
        return FockVector(
            self.n,
            {letters: value for (letters, d), value in self.terms.items() if d == j},
            self.is_exact,
        )

    def components(self) -> Tuple[FockVector, ...]:
        return tuple(self.component(j) for j in range(1, self.n + 1))

    def sorted_items(self) -> List[Tuple[FieldKey, Scalar]]:
        return sorted(
            self.terms.items(), key=lambda kv: (len(kv[0][0]), kv[0][0], kv[0][1])
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"({value})·e_{''.join(map(str, letters)) or 'ε'}⊗f_{j}"
            for (letters, j), value in self.sorted_items()
        )

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "terms": [
                {"word": list(letters), "dir": j, **_scalar_to_json(value)}
                for (letters, j), value in self.sorted_items()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Any) -> VectorField:
        n, raw_terms = _terms_from_json(data)
        terms: Dict[FieldKey, Scalar] = {}
        for index, term in enumerate(raw_terms):
            letters = _letters_from_json(term, n, index)
            j = term.get("dir")
            if not isinstance(j, int) or isinstance(j, bool) or not 1 <= j <= n:
                raise MalformedInputError(
                    f"Term {index} must have an integer 'dir' in [1, {n}], got {j!r}"
                )
            if (letters, j) in terms:
                raise MalformedInputError(
                    f"Term {index} repeats word {list(letters)} with dir {j}"
                )
            terms[(letters, j)] = _scalar_from_json(term, index)
        return cls(n, terms, _realization_of(list(terms.values())))


def apply_generator(kind: GeneratorKind, j: int, xi: FockVector) -> FockVector:
    """
    l_j e_w = e_{jw}, r_j e_w = e_{wj}. The annihilators are their adjoints: l_j^* removes
    a leading j (anything else, including the vacuum, goes to 0) and r_j^* a trailing j.
    s_j = l_j + l_j^*.
    """
    if kind not in _GENERATOR_KINDS:
        raise ValueError(f"Unknown generator kind {kind}")
    _check_direction(xi.n, j)
    result: Dict[Letters, Scalar] = {}

    def add(letters: Letters, value: Scalar) -> None:
        result[letters] = result.get(letters, 0) + value  # type: ignore[assignment]

    for letters, value in xi.items():
        if kind == "left_create" or kind == "semicircular":
            add((j,) + letters, value)
        if kind == "left_annihilate" or kind == "semicircular":
            if letters and letters[0] == j:
                add(letters[1:], value)
        if kind == "right_create":
            add(letters + (j,), value)
        if kind == "right_annihilate":
            if letters and letters[-1] == j:
                add(letters[:-1], value)
    return FockVector(xi.n, result, xi.is_exact)


def cyclic_shift(xi: FockVector) -> FockVector:
    """R e_{i_1 ... i_p} = e_{i_p i_1 ... i_{p-1}}; the vacuum is left fixed"""
    return xi.map_keys(
        lambda letters: rotate_letters(letters, 1) if letters else letters
    )


def cyclic_complement(xi: FockVector) -> FockVector:
    """(I - R) xi"""
    return xi - cyclic_shift(xi)


def theta_l(v: VectorField) -> FockVector:
    """θ^l(ξ_1, ..., ξ_n) = Σ_j (l_j - r_j) ξ_j"""
    result: Dict[Letters, Scalar] = {}
    for (letters, j), value in v.items():
        left = (j,) + letters
        right = letters + (j,)
        result[left] = result.get(left, 0) + value  # type: ignore[assignment]
        result[right] = result.get(right, 0) - value  # type: ignore[assignment]
    return FockVector(v.n, result, v.is_exact)


def theta_l_star(xi: FockVector) -> VectorField:
    """
    The adjoint of θ^l: component j is (l_j^* - r_j^*) ξ. Every nonempty e_w contributes
    e_{w minus first letter} ⊗ f_{first letter} - e_{w minus last letter} ⊗ f_{last
    letter}; the vacuum goes to 0.
    """
    result: Dict[FieldKey, Scalar] = {}
    for letters, value in xi.items():
        if not letters:
            continue
        head_key = (letters[1:], letters[0])
        tail_key = (letters[:-1], letters[-1])
        result[head_key] = result.get(head_key, 0) + value  # type: ignore[assignment]
        result[tail_key] = result.get(tail_key, 0) - value  # type: ignore[assignment]
    return VectorField(xi.n, result, xi.is_exact)


def sum_vectors(vectors: Iterable[_V], zero: _V) -> _V:
    """Sums many vectors without building an intermediate vector per addition"""
    result: Dict[Any, Any] = dict(zero.terms)
    for v in vectors:
        zero._check_compatible(v)
        for key, value in v.items():
            result[key] = result.get(key, 0) + value
    return zero._new(result)
