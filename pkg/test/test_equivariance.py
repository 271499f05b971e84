"""Unit tests for `kriz.equivariance`."""

import random

import pytest

from kriz.equivariance import (
    IrrepMultiplicities,
    NegativeMultiplicityError,
    WeightDecomposition,
    WeightSplitError,
    invariant_slice,
    irrep_multiplicities,
    operator_matrix,
    permutation_matrix,
    pi_a_injectivity,
    reynolds_dimension,
    sl2_operator,
    slice_weights,
    substitution_matrix,
    symmetric_generators,
    weight_decomposition,
)
from kriz.exactla import SparseRationalMatrix, SubspaceBasis
from kriz.exterior import compose, permutation_images, sl2_images
from kriz.model import KrizModel, ResourceGuardError


@pytest.fixture(scope="module")
def model3() -> KrizModel:
    return KrizModel(3)


def test_symmetric_generators():
    assert symmetric_generators(1) == []
    assert symmetric_generators(2) == [(2, 1)]
    assert symmetric_generators(4) == [(2, 1, 3, 4), (2, 3, 4, 1)]


def test_invariant_slice_examples():
    model = KrizModel(2)
    assert invariant_slice(model, "A", 2, 0).dim == 2
    assert invariant_slice(model, "A", 0, 1).dim == 1
    assert model.dimension("UA", 1, 0) == 2
    with pytest.raises(ValueError):
        invariant_slice(model, "D", 0, 0)


def test_transposition_squares_to_identity(model3: KrizModel):
    matrix = permutation_matrix(model3, (2, 1, 3), "A", 1, 1)
    size = matrix.rows
    assert matrix @ matrix == SparseRationalMatrix.identity(size)


def test_invariants_are_fixed_by_every_generator(model3: KrizModel):
    for p, q in model3.bidegrees("A"):
        space = model3.slice_space("UA", p, q)
        for sigma in symmetric_generators(3):
            matrix = permutation_matrix(model3, sigma, "A", p, q)
            for vector in space.vectors:
                assert matrix.apply(vector) == vector


def test_reynolds_dimension_agrees_with_kernel(model3: KrizModel):
    for p, q in model3.bidegrees("A"):
        assert reynolds_dimension(model3, "A", p, q) == model3.dimension("UA", p, q)
    for p, q in model3.bidegrees("B"):
        assert reynolds_dimension(model3, "B", p, q) == model3.dimension("UB", p, q)


def test_reynolds_dimension_resource_guard():
    with pytest.raises(ResourceGuardError):
        reynolds_dimension(KrizModel(7), "A", 0, 0)


def test_invariants_vanish_above_the_diagonal():
    model = KrizModel(4)
    for p, q in model.bidegrees("A"):
        if q > p + 1:
            assert model.dimension("UA", p, q) == 0
            assert model.dimension("UB", p, q) == 0


def test_weight_decomposition_of_a_slice():
    model = KrizModel(2)
    weights = slice_weights(model, "A", 2, 0)
    assert weights.dims == {-2: 1, 0: 4, 2: 1}
    assert irrep_multiplicities(weights) == IrrepMultiplicities({0: 3, 2: 1})


def test_weight_decomposition_raises_if_not_split():
    subspace = SubspaceBasis.span(2, [[1, 1]])
    with pytest.raises(WeightSplitError):
        weight_decomposition(subspace, [1, -1])


def test_irrep_multiplicities():
    weights = WeightDecomposition({-2: 1, 0: 2, 2: 1})
    assert irrep_multiplicities(weights) == IrrepMultiplicities({0: 1, 2: 1})


def test_irrep_multiplicities_raise_on_negative_multiplicity():
    with pytest.raises(NegativeMultiplicityError):
        irrep_multiplicities(WeightDecomposition({-2: 2, 0: 1, 2: 2}))


def test_irrep_multiplicities_raise_on_asymmetric_weights():
    with pytest.raises(ValueError):
        irrep_multiplicities(WeightDecomposition({1: 1}))


def test_weight_decomposition_arithmetic():
    a = WeightDecomposition({-1: 1, 1: 1})
    assert (a + a).dims == {-1: 2, 1: 2}
    assert (a - a).dims == {}
    with pytest.raises(ValueError):
        WeightDecomposition({}) - a


def test_check_slice():
    WeightDecomposition({-1: 2, 1: 2}).check_slice(1)
    with pytest.raises(ValueError):
        WeightDecomposition({0: 1}).check_slice(1)


def test_clebsch_gordan():
    v1 = IrrepMultiplicities.irrep(1)
    assert v1 * v1 == IrrepMultiplicities({0: 1, 2: 1})
    assert (v1 * v1).dimension == 4
    assert str(IrrepMultiplicities({0: 2, 2: 1})) == "2[V0] + [V2]"
    assert IrrepMultiplicities.irrep(2).weights().dims == {-2: 1, 0: 1, 2: 1}


def test_sl2_commutation_relations(model3: KrizModel):
    e, f, h = (sl2_operator(name, 3) for name in ("e", "f", "h"))
    for p, q in [(1, 0), (2, 1), (3, 0)]:
        E = operator_matrix(model3, e, "A", p, q)
        F = operator_matrix(model3, f, "A", p, q)
        H = operator_matrix(model3, h, "A", p, q)
        assert (E @ F - F @ E - H).is_zero()
        assert (H @ E - E @ H - E.scale(2)).is_zero()


def test_h_acts_by_weight(model3: KrizModel):
    h = sl2_operator("h", 3)
    matrix = operator_matrix(model3, h, "A", 2, 1)
    weights = model3.a_basis(2, 1).weights()
    expected = SparseRationalMatrix(
        len(weights), len(weights), {(i, i): a for i, a in enumerate(weights)}
    )
    assert matrix == expected


def test_sl2_operator_rejects_unknown_name():
    with pytest.raises(ValueError):
        sl2_operator("g", 2)


def test_differential_is_equivariant(model3: KrizModel):
    d = model3.d_matrix(0, 1)
    for sigma in symmetric_generators(3):
        left = permutation_matrix(model3, sigma, "A", 2, 0) @ d
        right = d @ permutation_matrix(model3, sigma, "A", 0, 1)
        assert left == right
    e = sl2_operator("e", 3)
    left = operator_matrix(model3, e, "A", 2, 0) @ d
    assert left == d @ operator_matrix(model3, e, "A", 0, 1)


def test_pi_a_is_injective(model3: KrizModel):
    for p, q in model3.bidegrees("A"):
        for a in range(0, p - 1):
            report = pi_a_injectivity(model3, p, q, a)
            assert report.injective


def test_pi_a_rejects_negative_weight(model3: KrizModel):
    with pytest.raises(ValueError):
        pi_a_injectivity(model3, 2, 0, -1)


@pytest.fixture(scope="module")
def model4() -> KrizModel:
    return KrizModel(4)


@pytest.mark.parametrize("seed", range(6))
def test_permutation_matrices_follow_group_law(model4: KrizModel, seed: int):
    rand = random.Random(seed)
    p, q = rand.choice([(1, 0), (2, 0), (1, 1), (2, 1), (0, 2), (3, 1)])
    sigma = tuple(rand.sample(range(1, 5), 4))
    tau = tuple(rand.sample(range(1, 5), 4))

    product = permutation_matrix(model4, compose(sigma, tau), "A", p, q)
    left = permutation_matrix(model4, sigma, "A", p, q)
    right = permutation_matrix(model4, tau, "A", p, q)
    assert product == left @ right


@pytest.mark.parametrize("seed", range(6))
def test_sl2_substitutions_commute_with_permutations(model4: KrizModel, seed: int):
    rand = random.Random(seed)
    p, q = rand.choice([(1, 0), (2, 0), (1, 1), (2, 1), (3, 1)])
    sigma = tuple(rand.sample(range(1, 5), 4))
    matrix = [[rand.randint(-2, 2) for _ in range(2)] for _ in range(2)]

    g = substitution_matrix(model4, sl2_images(matrix, 4), p, q)
    m = permutation_matrix(model4, sigma, "A", p, q)
    assert g @ m == m @ g
    assert substitution_matrix(model4, permutation_images(sigma, 4), p, q) == m


@pytest.mark.parametrize("seed", range(6))
def test_h_is_diagonal_on_invariant_slices(model4: KrizModel, seed: int):
    rand = random.Random(seed)
    kind = rand.choice(["UA", "UB"])
    p, q = rand.choice([(p, q) for p, q in model4.bidegrees(kind) if p + q <= 4])

    matrix = operator_matrix(model4, sl2_operator("h", 4), kind, p, q)
    assert all(row == col for row, col in matrix.entries)
    # The diagonal holds the weights of the invariant basis vectors.
    weights = model4.a_basis(p, q).weights()
    space = model4.slice_space(kind, p, q)
    for index, pivot in enumerate(space.pivots):
        assert matrix.entries.get((index, index), 0) == weights[pivot]
