"""
Scalars and the sparse linear algebra every verification is built on.

Two scalar realizations exist:
- exact: fractions.Fraction (ints are accepted on input and promoted). This is the
  default everywhere. Every identity we check has rational data, so it is checked
  bit-exactly.
- float: Python complex (double precision). Only used where roots of unity show up (the
  ζ-basis) or where float mode is explicitly requested.

Matrices are stored as sparse rows, {row: {col: value}}, never storing zeros (the same
layout as sympy's SDM).
"""

from __future__ import annotations

import dataclasses
import math
from fractions import Fraction
from typing import (
    Any,
    Dict,
    Hashable,
    Iterable,
    List,
    Optional,
    Protocol,
    Sequence,
    Set,
    Tuple,
    Union,
)

import numpy as np

from fockleray.config import FLOAT_RANK_TOLERANCE
from fockleray.shared import UnsupportedModeError

Scalar = Union[Fraction, complex]


def is_exact_value(value: Any) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def to_scalar(value: Any, exact: bool) -> Scalar:
    """Converts an int/Fraction/float/complex into the requested realization"""
    if exact:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int) and not isinstance(value, bool):
            return Fraction(value)
        raise TypeError(
            f"Cannot use {value!r} of type {type(value)} as an exact scalar"
        )
    else:
        if isinstance(value, Fraction):
            return complex(float(value))
        return complex(value)


def conj(value: Scalar) -> Scalar:
    if isinstance(value, complex):
        return value.conjugate()
    return value


def format_scalar(value: Scalar) -> str:
    """Exact values print as "num/den" (or just "num"), floats use repr"""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    return repr(value)


class SparseVectorLike(Protocol):
    """What gram and coordinate_matrix need from FockVector and VectorField"""

    n: int

    @property
    def is_exact(self) -> bool:
        ...

    def items(self) -> Iterable[Tuple[Any, Scalar]]:
        ...

    def inner(self, other: Any) -> Scalar:
        ...


@dataclasses.dataclass(frozen=True)
class Matrix:
    """
    A rows x cols matrix over one scalar realization. entries maps row -> col -> value
    and never contains zeros or empty rows.
    """

    rows: int
    cols: int
    entries: Dict[int, Dict[int, Scalar]]
    exact: bool = True

    @classmethod
    def from_sparse(
        cls,
        rows: int,
        cols: int,
        entries: Dict[int, Dict[int, Any]],
        exact: Optional[bool] = None,
    ) -> Matrix:
        if exact is None:
            exact = all(
                is_exact_value(v) for row in entries.values() for v in row.values()
            )
        cleaned: Dict[int, Dict[int, Scalar]] = {}
        for i, row in entries.items():
            if not 0 <= i < rows:
                raise ValueError(f"Row index {i} out of range for {rows} rows")
            cleaned_row = {}
            for j, value in row.items():
                if not 0 <= j < cols:
                    raise ValueError(f"Column index {j} out of range for {cols} cols")
                if value != 0:
                    cleaned_row[j] = to_scalar(value, exact)
            if cleaned_row:
                cleaned[i] = cleaned_row
        return cls(rows, cols, cleaned, exact)

    @classmethod
    def from_dense(
        cls, data: Sequence[Sequence[Any]], exact: Optional[bool] = None
    ) -> Matrix:
        rows = len(data)
        cols = len(data[0]) if rows else 0
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError(f"Row {i} has {len(row)} entries, expected {cols}")
        return cls.from_sparse(
            rows,
            cols,
            {i: {j: v for j, v in enumerate(row)} for i, row in enumerate(data)},
            exact,
        )

    @classmethod
    def identity(cls, k: int, exact: bool = True) -> Matrix:
        return cls.from_sparse(k, k, {i: {i: 1} for i in range(k)}, exact)

    def __getitem__(self, index: Tuple[int, int]) -> Scalar:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"{index} is out of range for a {self.shape} matrix")
        return self.entries.get(i, {}).get(j, self._zero())

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def _zero(self) -> Scalar:
        return Fraction(0) if self.exact else 0j

    def to_dense(self) -> List[List[Scalar]]:
        zero = self._zero()
        result = [[zero] * self.cols for _ in range(self.rows)]
        for i, row in self.entries.items():
            for j, value in row.items():
                result[i][j] = value
        return result

    def transpose(self) -> Matrix:
        entries: Dict[int, Dict[int, Scalar]] = {}
        for i, row in self.entries.items():
            for j, value in row.items():
                entries.setdefault(j, {})[i] = value
        return Matrix(self.cols, self.rows, entries, self.exact)

    def is_diagonal(self) -> bool:
        return all(
            j == i for i, row in self.entries.items() for j in row.keys()
        ) and self.rows == self.cols

    def diagonal(self) -> List[Scalar]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def matvec(self, vector: Sequence[Scalar]) -> List[Scalar]:
        if len(vector) != self.cols:
            raise ValueError(
                f"Cannot multiply a {self.shape} matrix by a vector of length "
                f"{len(vector)}"
            )
        result = [self._zero()] * self.rows
        for i, row in self.entries.items():
            result[i] = sum(
                (value * vector[j] for j, value in row.items()), self._zero()
            )
        return result


def _check_same_realization(vectors: Sequence[SparseVectorLike]) -> Optional[bool]:
    if not vectors:
        return None
    exact = vectors[0].is_exact
    n = vectors[0].n
    for v in vectors[1:]:
        if v.is_exact != exact:
            raise TypeError("Cannot mix exact and float vectors in one computation")
        if v.n != n:
            raise ValueError(
                f"Cannot mix vectors over alphabets of size {n} and {v.n}"
            )
    return exact


def gram(vectors: Sequence[SparseVectorLike]) -> Matrix:
    """
    The Gram matrix (<v_i, v_j>)_{ij}. The inner product is conjugate-linear in the
    second slot, so the result is Hermitian.
    """
    exact = _check_same_realization(vectors)
    if exact is None:
        return Matrix(0, 0, {}, True)

    entries: Dict[int, Dict[int, Any]] = {}
    for i, v in enumerate(vectors):
        for j in range(i, len(vectors)):
            value = v.inner(vectors[j])
            if value != 0:
                entries.setdefault(i, {})[j] = value
                if i != j:
                    entries.setdefault(j, {})[i] = conj(value)
    return Matrix.from_sparse(len(vectors), len(vectors), entries, exact)


def _coordinate_sort_key(key: Any) -> Tuple:
    """
    Sorts Fock coordinates (tuples of letters) and field coordinates ((letters, dir)) by
    degree, then word, then direction
    """
    if len(key) == 2 and isinstance(key[0], tuple):
        return len(key[0]), key[0], key[1]
    return len(key), key


def coordinate_matrix(
    vectors: Sequence[SparseVectorLike],
) -> Tuple[Matrix, List[Hashable]]:
    """
    Returns the matrix whose rows are the coordinates of vectors, over the sorted union
    of their supports, together with the list of keys labelling the columns.
    """
    exact = _check_same_realization(vectors)
    if exact is None:
        return Matrix(0, 0, {}, True), []

    keys = sorted(
        {key for v in vectors for key, _ in v.items()}, key=_coordinate_sort_key
    )
    column_of = {key: j for j, key in enumerate(keys)}
    entries = {
        i: {column_of[key]: value for key, value in v.items()}
        for i, v in enumerate(vectors)
    }
    return Matrix.from_sparse(len(vectors), len(keys), entries, exact), keys


def _integer_rows(m: Matrix) -> List[Dict[int, int]]:
    """Scales every row by the lcm of its denominators, which doesn't change the rank"""
    result = []
    for row in m.entries.values():
        lcm = 1
        for value in row.values():
            assert isinstance(value, Fraction)
            lcm = lcm * value.denominator // math.gcd(lcm, value.denominator)
        result.append(
            {j: int(value * lcm) for j, value in row.items()}  # type: ignore[operator]
        )
    return result


def _exact_div(value: int, divisor: int) -> int:
    quotient, remainder = divmod(value, divisor)
    if remainder != 0:
        raise ValueError(
            f"Programming error: Bareiss division {value} / {divisor} is not exact"
        )
    return quotient


def bareiss_rank(m: Matrix) -> int:
    """
    Fraction-free (Bareiss) Gaussian elimination on sparse integer rows.

    Every remaining row is conceptually updated at every step, but rows without an entry
    in the pivot column are only multiplied by pivot / previous_pivot. That factor
    telescopes, so instead of touching those rows we remember the previous pivot at
    which each row was last materialized, and bring it up to date only when it is
    needed. Bareiss guarantees every materialized entry is an integer.
    """
    if not m.exact:
        raise UnsupportedModeError("bareiss_rank requires an exact matrix")

    active: Dict[int, Dict[int, int]] = dict(enumerate(_integer_rows(m)))
    base: Dict[int, int] = {row_id: 1 for row_id in active}
    column_index: Dict[int, Set[int]] = {}
    for row_id, row in active.items():
        for j in row:
            column_index.setdefault(j, set()).add(row_id)

    def materialize(row_id: int, current: int) -> Dict[int, int]:
        row = active[row_id]
        if base[row_id] != current:
            row = {j: _exact_div(v * current, base[row_id]) for j, v in row.items()}
        return row

    def replace_row(row_id: int, new_row: Dict[int, int], new_base: int) -> None:
        for j in active[row_id]:
            if j not in new_row:
                column_index[j].discard(row_id)
        for j in new_row:
            column_index.setdefault(j, set()).add(row_id)
        if new_row:
            active[row_id] = new_row
            base[row_id] = new_base
        else:
            del active[row_id]
            del base[row_id]

    rank = 0
    previous_pivot = 1
    for c in sorted(column_index.keys()):
        candidates = column_index.get(c)
        if not candidates:
            continue
        # fewest nonzeros first keeps fill-in down
        pivot_id = min(candidates, key=lambda row_id: (len(active[row_id]), row_id))
        pivot_row = materialize(pivot_id, previous_pivot)
        replace_row(pivot_id, {}, 0)
        pivot = pivot_row[c]

        for row_id in sorted(column_index[c]):
            row = materialize(row_id, previous_pivot)
            factor = row[c]
            new_row = {j: pivot * v for j, v in row.items()}
            for j, v in pivot_row.items():
                new_row[j] = new_row.get(j, 0) - factor * v
            new_row = {
                j: _exact_div(v, previous_pivot) for j, v in new_row.items() if v != 0
            }
            replace_row(row_id, new_row, pivot)

        previous_pivot = pivot
        rank += 1

    return rank


def float_rank(m: Matrix, tolerance: float = FLOAT_RANK_TOLERANCE) -> int:
    """
    Gaussian elimination with partial pivoting. The numerical rank is the number of
    pivots whose magnitude exceeds tolerance times the largest pivot. Columns whose
    remaining entries are all at most tolerance times the largest entry of the matrix
    are skipped as numerically zero.
    """
    if m.rows == 0 or m.cols == 0 or not m.entries:
        return 0
    a = np.array(m.to_dense(), dtype=complex)
    noise_floor = tolerance * np.abs(a).max()

    pivots: List[float] = []
    row = 0
    for col in range(m.cols):
        if row == m.rows:
            break
        pivot = row + int(np.argmax(np.abs(a[row:, col])))
        magnitude = float(abs(a[pivot, col]))
        if magnitude <= noise_floor:
            continue
        if pivot != row:
            a[[row, pivot], :] = a[[pivot, row], :]
        a[row + 1 :, col:] -= np.outer(a[row + 1 :, col] / a[row, col], a[row, col:])
        pivots.append(magnitude)
        row += 1

    if not pivots:
        return 0
    largest = max(pivots)
    return sum(1 for magnitude in pivots if magnitude > tolerance * largest)


def rank(m: Matrix) -> int:
    """Exact rank for exact matrices, numerical rank at FLOAT_RANK_TOLERANCE otherwise"""
    if m.exact:
        return bareiss_rank(m)
    return float_rank(m)


def rref(m: Matrix) -> Tuple[Matrix, List[int]]:
    """
    Reduced row echelon form by rational Gauss-Jordan elimination, together with the
    pivot columns. Rows are inserted one at a time into an already reduced set of pivot
    rows, so the pivot rows stay reduced against each other throughout.
    """
    if not m.exact:
        raise UnsupportedModeError("rref requires an exact matrix")

    pivot_rows: Dict[int, Dict[int, Fraction]] = {}
    for i in sorted(m.entries.keys()):
        row: Dict[int, Fraction] = dict(m.entries[i])  # type: ignore[arg-type]
        for pc in [j for j in row if j in pivot_rows]:
            factor = row.get(pc)
            if not factor:
                continue
            for j, v in pivot_rows[pc].items():
                new_value = row.get(j, Fraction(0)) - factor * v
                if new_value:
                    row[j] = new_value
                else:
                    row.pop(j, None)
        if not row:
            continue

        pc = min(row)
        inverse = 1 / row[pc]
        row = {j: v * inverse for j, v in row.items()}
        for other in pivot_rows.values():
            factor = other.get(pc)
            if not factor:
                continue
            for j, v in row.items():
                new_value = other.get(j, Fraction(0)) - factor * v
                if new_value:
                    other[j] = new_value
                else:
                    other.pop(j, None)
        pivot_rows[pc] = row

    pivots = sorted(pivot_rows.keys())
    entries = {i: dict(pivot_rows[pc]) for i, pc in enumerate(pivots)}
    return Matrix(m.rows, m.cols, entries, True), pivots  # type: ignore[arg-type]


def nullspace(m: Matrix) -> List[List[Fraction]]:
    """
    A basis of the right nullspace {x | m x = 0}, one coordinate vector per non-pivot
    column. Only defined in exact mode, kernels of float matrices are not comparable.
    """
    if not m.exact:
        raise UnsupportedModeError(
            "nullspace requires exact scalars, exactness is needed to compare kernels"
        )

    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vector = [Fraction(0)] * m.cols
        vector[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            value = reduced.entries[i].get(free)
            if value:
                vector[pc] = -value  # type: ignore[assignment]
        basis.append(vector)
    return basis


@dataclasses.dataclass(frozen=True)
class SpanRelation:
    """Ranks of two families and of their union, which decide mutual containment"""

    rank_a: int
    rank_b: int
    rank_union: int

    @property
    def a_in_b(self) -> bool:
        return self.rank_union == self.rank_b

    @property
    def b_in_a(self) -> bool:
        return self.rank_union == self.rank_a

    @property
    def equal(self) -> bool:
        return self.a_in_b and self.b_in_a


def span_relation(
    a: Sequence[SparseVectorLike], b: Sequence[SparseVectorLike]
) -> SpanRelation:
    return SpanRelation(
        rank(coordinate_matrix(a)[0]),
        rank(coordinate_matrix(b)[0]),
        rank(coordinate_matrix(list(a) + list(b))[0]),
    )


def span_rank(vectors: Sequence[SparseVectorLike]) -> int:
    return rank(coordinate_matrix(vectors)[0])
