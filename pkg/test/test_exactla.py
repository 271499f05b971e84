"""Unit tests for `kriz.exactla`."""

import random
from typing import List

import pytest
from sympy import QQ

from kriz.exactla import (
    SparseRationalMatrix,
    SubspaceBasis,
    as_vector,
    format_rational,
    image,
    kernel,
    parse_rational,
    quotient_dim,
    rank,
    rational,
    reduce,
    restrict_map,
    subspace_intersection,
)


def test_format_rational_always_writes_a_fraction():
    assert format_rational(rational(1, 2)) == "1/2"
    assert format_rational(3) == "3/1"
    assert format_rational(rational(-4, 6)) == "-2/3"


def test_parse_rational_reduces_to_lowest_terms():
    assert parse_rational("-2/4") == QQ(-1, 2)
    assert parse_rational("5") == QQ(5)


def test_rational_rejects_zero_denominator():
    with pytest.raises(ZeroDivisionError):
        rational(1, 0)


def test_as_vector_drops_zeros():
    assert as_vector([0, 2, 0], 3) == {1: QQ(2)}


def test_as_vector_raises_on_bad_index():
    with pytest.raises(ValueError):
        as_vector({3: 1}, 3)
    with pytest.raises(ValueError):
        as_vector([1, 2], 3)


def test_matrix_constructor_raises_on_out_of_bounds_entry():
    with pytest.raises(ValueError):
        SparseRationalMatrix(2, 2, {(2, 0): 1})


def test_matrix_arithmetic():
    matrix = SparseRationalMatrix.from_dense([[1, 2], [3, 4]])
    identity = SparseRationalMatrix.identity(2)

    assert matrix @ identity == matrix
    assert (matrix - matrix).is_zero()
    assert matrix.transpose().to_dense() == [[1, 3], [2, 4]]
    assert matrix.trace() == 5
    assert matrix.apply({0: 1, 1: 1}) == {0: QQ(3), 1: QQ(7)}
    assert matrix.scale(QQ(1, 2)).to_dense()[0] == [QQ(1, 2), QQ(1)]


def test_matrix_multiplication_raises_on_shape_mismatch():
    with pytest.raises(ValueError):
        SparseRationalMatrix.zeros(2, 3) @ SparseRationalMatrix.zeros(2, 3)


def test_vstack():
    top = SparseRationalMatrix.from_dense([[1, 0]])
    bottom = SparseRationalMatrix.from_dense([[0, 1]])
    assert SparseRationalMatrix.vstack(2, [top, bottom]).to_dense() == [[1, 0], [0, 1]]


def test_reduce_computes_rank_and_kernel():
    matrix = SparseRationalMatrix.from_dense([[1, 2], [2, 4]])
    result = reduce(matrix)

    assert result.rank == 1
    assert rank(matrix) == 1
    assert result.kernel.dim == 1
    assert result.kernel.contains({0: -2, 1: 1})
    assert kernel(matrix) == result.kernel


def test_kernel_of_zero_matrix_is_everything():
    assert kernel(SparseRationalMatrix.zeros(2, 3)) == SubspaceBasis.full(3)


def test_image_is_column_space():
    matrix = SparseRationalMatrix.from_dense([[1, 2], [2, 4]])
    assert image(matrix) == SubspaceBasis.span(2, [[1, 2]])


def test_span_is_independent_of_generator_order():
    a = SubspaceBasis.span(3, [[1, 1, 0], [0, 1, 1]])
    b = SubspaceBasis.span(3, [[0, 1, 1], [1, 2, 1]])
    assert a == b
    assert a.dim == 2


def test_subspace_basis_rejects_non_echelon_vectors():
    with pytest.raises(ValueError):
        SubspaceBasis(2, ({0: QQ(2)},))


def test_coordinates_and_lift():
    space = SubspaceBasis.span(3, [[1, 0, 1], [0, 1, 1]])
    coordinates = space.coordinates({0: 2, 1: 3, 2: 5})
    assert coordinates == {0: QQ(2), 1: QQ(3)}
    assert space.lift(coordinates) == {0: QQ(2), 1: QQ(3), 2: QQ(5)}


def test_coordinates_raise_outside_the_subspace():
    space = SubspaceBasis.span(2, [[1, 1]])
    with pytest.raises(ValueError):
        space.coordinates({0: 1})


def test_residue_clears_pivots():
    space = SubspaceBasis.span(3, [[1, 0, 1]])
    assert space.residue({0: 1, 1: 1}) == {1: QQ(1), 2: QQ(-1)}


def test_sum_and_inclusion():
    a = SubspaceBasis.span(3, [[1, 0, 0]])
    b = SubspaceBasis.span(3, [[0, 1, 0]])
    assert a.sum(b).dim == 2
    assert a.is_subspace_of(a.sum(b))
    assert not a.sum(b).is_subspace_of(a)


def test_subspace_intersection():
    a = SubspaceBasis.span(3, [[1, 0, 0], [0, 1, 0]])
    b = SubspaceBasis.span(3, [[0, 1, 0], [0, 0, 1]])
    assert subspace_intersection(a, b) == SubspaceBasis.span(3, [[0, 1, 0]])
    assert subspace_intersection(a, SubspaceBasis.zero(3)).dim == 0


def test_subspace_intersection_raises_on_ambient_mismatch():
    with pytest.raises(ValueError):
        subspace_intersection(SubspaceBasis.full(2), SubspaceBasis.full(3))


def test_quotient_dim():
    assert quotient_dim(3, [[1, 1, 0], [2, 2, 0]]) == 2
    assert quotient_dim(2, []) == 2


def test_restrict_map():
    swap = SparseRationalMatrix.from_dense([[0, 1], [1, 0]])
    diagonal = SubspaceBasis.span(2, [[1, 1]])
    assert restrict_map(swap, diagonal, diagonal).to_dense() == [[1]]

    with pytest.raises(ValueError):
        restrict_map(swap, SubspaceBasis.span(2, [[1, 0]]), diagonal)


def random_rows(rand: random.Random, count: int, size: int) -> List[List[int]]:
    """Sparse integer rows; the last row repeats a combination of earlier ones."""
    rows = [
        [rand.choice((0, 0, 0, 1, -1, 2, 3)) for _ in range(size)]
        for _ in range(count)
    ]
    if count > 2:
        rows[-1] = [a - 2 * b for a, b in zip(rows[0], rows[1])]
    return rows


@pytest.mark.parametrize("seed", range(8))
def test_rank_equals_rank_of_transpose(seed: int):
    rand = random.Random(seed)
    rows = random_rows(rand, rand.randint(1, 7), rand.randint(1, 7))
    matrix = SparseRationalMatrix.from_dense(rows)
    assert rank(matrix) == rank(matrix.transpose())
    assert rank(matrix) + kernel(matrix).dim == matrix.cols


@pytest.mark.parametrize("seed", range(8))
def test_subspace_intersection_satisfies_grassmann_formula(seed: int):
    rand = random.Random(seed)
    size = rand.randint(2, 8)
    shared = random_rows(rand, rand.randint(0, 2), size)
    a = SubspaceBasis.span(size, shared + random_rows(rand, rand.randint(0, 4), size))
    b = SubspaceBasis.span(size, shared + random_rows(rand, rand.randint(0, 4), size))

    meet = subspace_intersection(a, b)
    assert meet.dim + a.sum(b).dim == a.dim + b.dim
    assert meet.is_subspace_of(a)
    assert meet.is_subspace_of(b)
    assert SubspaceBasis.span(size, shared).is_subspace_of(meet)
