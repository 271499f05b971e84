"""Exact sparse linear algebra over the rationals.

All elimination is delegated to sympy's sparse `DomainMatrix` over `QQ`. Vectors are
plain dictionaries mapping a coordinate index to a nonzero rational; matrices and
subspaces are immutable after construction.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    Mapping,
    NamedTuple,
    Sequence,
    Tuple,
    Union,
)

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Rational = Any  # element of QQ (PythonMPQ or gmpy2.mpq, depending on the ground types)
Vector = Dict[int, Rational]
VectorLike = Union[Mapping[int, Any], Sequence[Any]]


def rational(numerator: int, denominator: int = 1) -> Rational:
    """Returns the rational `numerator / denominator` in lowest terms."""
    if denominator == 0:
        raise ZeroDivisionError("Denominator must not be zero.")
    return QQ(numerator, denominator)


def format_rational(value: Any) -> str:
    """Formats a rational as the exact string `p/q`."""
    value = QQ.convert(value)
    return f"{QQ.numer(value)}/{QQ.denom(value)}"


def parse_rational(text: str) -> Rational:
    """Parses `p/q` (or a plain integer) into an exact rational."""
    numerator, _, denominator = str(text).strip().partition("/")
    return rational(int(numerator), int(denominator) if denominator else 1)


def as_vector(vector: VectorLike, ambient_dim: int) -> Vector:
    """Converts a sparse mapping or a dense sequence into a sparse vector.

    Raises:
        ValueError: If an index lies outside `range(ambient_dim)` or a dense vector
            has the wrong length.
    """
    if isinstance(vector, Mapping):
        items: Iterable[Tuple[int, Any]] = vector.items()
    else:
        if len(vector) != ambient_dim:
            raise ValueError(
                f"Expected a vector of length {ambient_dim}, got {len(vector)}."
            )
        items = enumerate(vector)

    result: Vector = {}
    for index, value in items:
        if not 0 <= index < ambient_dim:
            raise ValueError(f"Index {index} out of range for dimension {ambient_dim}.")
        value = QQ.convert(value)
        if value:
            result[index] = value
    return result


def add_scaled(target: Vector, vector: Mapping[int, Rational], factor: Any) -> None:
    """In-place `target += factor * vector`, dropping cancelled entries."""
    if not factor:
        return
    for index, value in vector.items():
        total = target.get(index, QQ.zero) + factor * value
        if total:
            target[index] = total
        else:
            target.pop(index, None)


@dataclass(frozen=True)
class SparseRationalMatrix:
    """An exact sparse matrix over the rationals.

    Entries are stored as a mapping `(row, col) -> value` without explicit zeros.
    """

    rows: int
    cols: int
    entries: Mapping[Tuple[int, int], Rational] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("Matrix dimensions must be non-negative.")
        cleaned: Dict[Tuple[int, int], Rational] = {}
        for (row, col), value in self.entries.items():
            if not (0 <= row < self.rows and 0 <= col < self.cols):
                raise ValueError(f"Entry ({row}, {col}) out of bounds.")
            value = QQ.convert(value)
            if value:
                cleaned[(row, col)] = value
        object.__setattr__(self, "entries", cleaned)

    @staticmethod
    def zeros(rows: int, cols: int) -> "SparseRationalMatrix":
        return SparseRationalMatrix(rows, cols, {})

    @staticmethod
    def identity(size: int) -> "SparseRationalMatrix":
        return SparseRationalMatrix(size, size, {(i, i): QQ.one for i in range(size)})

    @staticmethod
    def from_columns(
        rows: int, columns: Sequence[Mapping[int, Any]]
    ) -> "SparseRationalMatrix":
        """Builds a matrix whose `j`-th column is the sparse vector `columns[j]`."""
        entries = {
            (row, col): value
            for col, column in enumerate(columns)
            for row, value in column.items()
        }
        return SparseRationalMatrix(rows, len(columns), entries)

    @staticmethod
    def from_rows(
        cols: int, rows: Sequence[Mapping[int, Any]]
    ) -> "SparseRationalMatrix":
        """Builds a matrix whose `i`-th row is the sparse vector `rows[i]`."""
        entries = {
            (row, col): value
            for row, vector in enumerate(rows)
            for col, value in vector.items()
        }
        return SparseRationalMatrix(len(rows), cols, entries)

    @staticmethod
    def from_dense(rows: Sequence[Sequence[Any]]) -> "SparseRationalMatrix":
        cols = len(rows[0]) if rows else 0
        vectors = [as_vector(row, cols) for row in rows]
        return SparseRationalMatrix.from_rows(cols, vectors)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def to_domain_matrix(self) -> DomainMatrix:
        return DomainMatrix.from_dok(dict(self.entries), self.shape, QQ)

    def to_dense(self) -> List[List[Rational]]:
        dense = [[QQ.zero] * self.cols for _ in range(self.rows)]
        for (row, col), value in self.entries.items():
            dense[row][col] = value
        return dense

    def row_vectors(self) -> List[Vector]:
        result: List[Vector] = [{} for _ in range(self.rows)]
        for (row, col), value in self.entries.items():
            result[row][col] = value
        return result

    def column_vectors(self) -> List[Vector]:
        result: List[Vector] = [{} for _ in range(self.cols)]
        for (row, col), value in self.entries.items():
            result[col][row] = value
        return result

    @cached_property
    def _columns(self) -> List[Vector]:
        return self.column_vectors()

    def transpose(self) -> "SparseRationalMatrix":
        return SparseRationalMatrix(
            self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def apply(self, vector: Mapping[int, Any]) -> Vector:
        """Returns the product `self · vector` as a sparse vector."""
        columns = self._columns
        result: Vector = {}
        for index, value in vector.items():
            add_scaled(result, columns[index], QQ.convert(value))
        return result

    def is_zero(self) -> bool:
        return not self.entries

    def trace(self) -> Rational:
        if self.rows != self.cols:
            raise ValueError("Trace requires a square matrix.")
        return sum(
            (value for (r, c), value in self.entries.items() if r == c), QQ.zero
        )

    def __matmul__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.shape} by {other.shape}.")
        columns = [self.apply(column) for column in other.column_vectors()]
        return SparseRationalMatrix.from_columns(self.rows, columns)

    def __add__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        if self.shape != other.shape:
            raise ValueError(f"Cannot add {self.shape} and {other.shape}.")
        entries = dict(self.entries)
        for key, value in other.entries.items():
            entries[key] = entries.get(key, QQ.zero) + value
        return SparseRationalMatrix(self.rows, self.cols, entries)

    def __neg__(self) -> "SparseRationalMatrix":
        return SparseRationalMatrix(
            self.rows, self.cols, {key: -value for key, value in self.entries.items()}
        )

    def __sub__(self, other: "SparseRationalMatrix") -> "SparseRationalMatrix":
        return self + (-other)

    def scale(self, factor: Any) -> "SparseRationalMatrix":
        factor = QQ.convert(factor)
        return SparseRationalMatrix(
            self.rows, self.cols, {key: factor * v for key, v in self.entries.items()}
        )

    @staticmethod
    def vstack(
        cols: int, matrices: Sequence["SparseRationalMatrix"]
    ) -> "SparseRationalMatrix":
        """Stacks matrices with `cols` columns on top of each other."""
        entries: Dict[Tuple[int, int], Rational] = {}
        offset = 0
        for matrix in matrices:
            if matrix.cols != cols:
                raise ValueError(f"Expected {cols} columns, got {matrix.cols}.")
            for (row, col), value in matrix.entries.items():
                entries[(offset + row, col)] = value
            offset += matrix.rows
        return SparseRationalMatrix(offset, cols, entries)


def _rref(ambient_dim: int, vectors: Iterable[Mapping[int, Any]]) -> List[Vector]:
    rows = [vector for vector in vectors if vector]
    if not rows or ambient_dim == 0:
        return []

    dok = {
        (i, j): QQ.convert(value)
        for i, row in enumerate(rows)
        for j, value in row.items()
    }
    matrix = DomainMatrix.from_dok(dok, (len(rows), ambient_dim), QQ)
    echelon, _ = matrix.rref()

    grouped: Dict[int, Vector] = {}
    for (i, j), value in echelon.to_dok().items():
        if value:
            grouped.setdefault(i, {})[j] = value
    return sorted(grouped.values(), key=min)


@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of `Q^ambient_dim` stored by its reduced row echelon basis.

    The echelon form is unique, so two equal subspaces always compare equal.
    """

    ambient_dim: int
    vectors: Tuple[Vector, ...] = ()

    def __post_init__(self) -> None:
        pivots = [min(vector) for vector in self.vectors]
        if pivots != sorted(set(pivots)):
            raise ValueError("Pivot columns must be strictly increasing.")
        pivot_set = set(pivots)
        for vector, pivot in zip(self.vectors, pivots):
            if vector[pivot] != 1 or any(
                index in pivot_set for index in vector if index != pivot
            ):
                raise ValueError("Basis is not in reduced echelon form.")

    @staticmethod
    def span(
        ambient_dim: int, generators: Iterable[VectorLike]
    ) -> "SubspaceBasis":
        """Returns the echelon basis of the span of `generators`."""
        vectors = [as_vector(vector, ambient_dim) for vector in generators]
        return SubspaceBasis(ambient_dim, tuple(_rref(ambient_dim, vectors)))

    @staticmethod
    def zero(ambient_dim: int) -> "SubspaceBasis":
        return SubspaceBasis(ambient_dim, ())

    @staticmethod
    def full(ambient_dim: int) -> "SubspaceBasis":
        return SubspaceBasis(
            ambient_dim, tuple({i: QQ.one} for i in range(ambient_dim))
        )

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @cached_property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(min(vector) for vector in self.vectors)

    @cached_property
    def _pivot_index(self) -> Dict[int, int]:
        return {pivot: index for index, pivot in enumerate(self.pivots)}

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.pivots))

    def residue(self, vector: Mapping[int, Any]) -> Vector:
        """Reduces `vector` modulo the subspace by clearing all pivot columns."""
        result = as_vector(vector, self.ambient_dim)
        pivot_index = self._pivot_index
        for pivot in [index for index in result if index in pivot_index]:
            add_scaled(result, self.vectors[pivot_index[pivot]], -result[pivot])
        return result

    def contains(self, vector: Mapping[int, Any]) -> bool:
        return not self.residue(vector)

    def coordinates(self, vector: Mapping[int, Any]) -> Vector:
        """Returns the coordinates of `vector` with respect to the echelon basis.

        Raises:
            ValueError: If the vector does not lie in the subspace.
        """
        vector = as_vector(vector, self.ambient_dim)
        if self.residue(vector):
            raise ValueError("Vector does not lie in the subspace.")
        return {
            index: vector[pivot]
            for index, pivot in enumerate(self.pivots)
            if vector.get(pivot)
        }

    def lift(self, coordinates: Mapping[int, Any]) -> Vector:
        """Maps echelon coordinates back to ambient coordinates."""
        result: Vector = {}
        for index, value in coordinates.items():
            add_scaled(result, self.vectors[index], QQ.convert(value))
        return result

    def sum(self, other: "SubspaceBasis") -> "SubspaceBasis":
        _check_ambient(self, other)
        return SubspaceBasis.span(self.ambient_dim, self.vectors + other.vectors)

    def is_subspace_of(self, other: "SubspaceBasis") -> bool:
        _check_ambient(self, other)
        return all(other.contains(vector) for vector in self.vectors)


class Reduction(NamedTuple):
    rank: int
    row_space: SubspaceBasis
    kernel: SubspaceBasis


def reduce(matrix: SparseRationalMatrix) -> Reduction:
    """Computes rank, row space and kernel of a matrix.

    The kernel is read off the reduced echelon form: every free column `f` yields the
    vector `e_f - sum_r rref[r][f] e_{pivot_r}`.
    """
    row_space = SubspaceBasis(
        matrix.cols, tuple(_rref(matrix.cols, matrix.row_vectors()))
    )
    pivots = row_space.pivots
    pivot_set = set(pivots)

    kernel_vectors = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        vector: Vector = {free: QQ.one}
        for row, pivot in zip(row_space.vectors, pivots):
            value = row.get(free)
            if value:
                vector[pivot] = -value
        kernel_vectors.append(vector)

    kernel = SubspaceBasis.span(matrix.cols, kernel_vectors)
    return Reduction(row_space.dim, row_space, kernel)


def rank(matrix: SparseRationalMatrix) -> int:
    return len(_rref(matrix.cols, matrix.row_vectors()))


def kernel(matrix: SparseRationalMatrix) -> SubspaceBasis:
    return reduce(matrix).kernel


def image(matrix: SparseRationalMatrix) -> SubspaceBasis:
    """Returns the column space of `matrix` as a subspace of `Q^rows`."""
    return SubspaceBasis.span(matrix.rows, matrix.column_vectors())


def quotient_dim(ambient_dim: int, subspace_gens: Sequence[VectorLike]) -> int:
    """Returns `ambient_dim - rank(subspace_gens)`.

    Raises:
        ValueError: If a generator does not live in `Q^ambient_dim`.
    """
    vectors = [as_vector(vector, ambient_dim) for vector in subspace_gens]
    return ambient_dim - len(_rref(ambient_dim, vectors))


def subspace_intersection(a: SubspaceBasis, b: SubspaceBasis) -> SubspaceBasis:
    """Intersects two subspaces with the Zassenhaus construction.

    Rows `(u | u)` for `u` in `a` and `(w | 0)` for `w` in `b` are echelonized; the rows
    whose left half vanishes carry a basis of `a ∩ b` in their right half.
    """
    _check_ambient(a, b)
    size = a.ambient_dim
    if a.dim == 0 or b.dim == 0:
        return SubspaceBasis.zero(size)

    rows: List[Vector] = []
    for vector in a.vectors:
        row = dict(vector)
        row.update({size + index: value for index, value in vector.items()})
        rows.append(row)
    rows.extend(dict(vector) for vector in b.vectors)

    intersection = [
        {index - size: value for index, value in row.items()}
        for row in _rref(2 * size, rows)
        if min(row) >= size
    ]
    return SubspaceBasis.span(size, intersection)


def restrict_map(
    matrix: SparseRationalMatrix, source: SubspaceBasis, target: SubspaceBasis
) -> SparseRationalMatrix:
    """Returns the matrix of `matrix` restricted to `source`, landing in `target`.

    Columns are indexed by the echelon basis of `source`, rows by the echelon basis of
    `target`.

    Raises:
        ValueError: If the image of `source` leaves `target`.
    """
    if matrix.cols != source.ambient_dim or matrix.rows != target.ambient_dim:
        raise ValueError("Subspaces do not match the matrix shape.")
    columns = [target.coordinates(matrix.apply(vector)) for vector in source.vectors]
    return SparseRationalMatrix.from_columns(target.dim, columns)


def _check_ambient(a: SubspaceBasis, b: SubspaceBasis) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise ValueError(
            f"Ambient dimensions differ: {a.ambient_dim} != {b.ambient_dim}."
        )
