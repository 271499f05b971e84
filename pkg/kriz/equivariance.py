"""Symmetric group and SL2 symmetries of the model.

The symmetric group acts through the substitution x_i -> x_{sigma(i)},
y_i -> y_{sigma(i)}, w_ij -> w_{sigma(i)sigma(j)}; SL2 acts on each pair (x_i, y_i)
and is probed through the Lie algebra operators e, f, h and the single group element
Y = ((1, 0), (1, 1)).

The torus weight of a monomial is (#x-letters) - (#y-letters); basis elements of A are
weight-homogeneous, so weight spaces are spanned by coordinate vectors.
"""

from dataclasses import dataclass, field
from math import factorial
from typing import Dict, List, Mapping, Sequence, Tuple

from sympy import QQ
from sympy.utilities.iterables import partitions

from kriz.exactla import (
    SparseRationalMatrix,
    SubspaceBasis,
    Vector,
    add_scaled,
    rank,
    reduce,
    restrict_map,
)
from kriz.exterior import (
    Derivation,
    Generator,
    MultiVector,
    apply_derivation,
    check_permutation,
    generators,
    sl2_images,
    substitute,
    w,
)
from kriz.model import KrizModel, ModelId, ResourceGuardError

DEFAULT_MAX_N = 6
LARGE_MAX_N = 7


class WeightSplitError(ValueError):
    """Raised when a subspace is not the sum of its weight components."""


class NegativeMultiplicityError(ValueError):
    """Raised when weight counts do not come from an SL2-representation."""


@dataclass(frozen=True)
class WeightDecomposition:
    """Dimensions of the torus weight spaces, keyed by weight (zeros omitted)."""

    dims: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if any(value < 0 for value in self.dims.values()):
            raise ValueError(f"Negative weight dimension: {dict(self.dims)}")
        cleaned = {a: d for a, d in sorted(self.dims.items()) if d}
        object.__setattr__(self, "dims", cleaned)

    def __getitem__(self, weight: int) -> int:
        return self.dims.get(weight, 0)

    def __hash__(self) -> int:
        return hash(tuple(self.dims.items()))

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def is_symmetric(self) -> bool:
        return all(self[a] == self[-a] for a in self.dims)

    def is_parity_pure(self) -> bool:
        return len({a % 2 for a in self.dims}) <= 1

    def check_slice(self, p: int) -> None:
        """Validates the constraints of a weight decomposition of a p-slice.

        Raises:
            ValueError: If the decomposition is asymmetric, has a weight of the wrong
                parity or a weight of absolute value above `p`.
        """
        if not self.is_symmetric():
            raise ValueError(f"Weight decomposition is not symmetric: {self.dims}")
        for a in self.dims:
            if (a - p) % 2 or abs(a) > p:
                raise ValueError(f"Weight {a} impossible in a slice with p={p}.")

    def __add__(self, other: "WeightDecomposition") -> "WeightDecomposition":
        keys = set(self.dims) | set(other.dims)
        return WeightDecomposition({a: self[a] + other[a] for a in keys})

    def __sub__(self, other: "WeightDecomposition") -> "WeightDecomposition":
        keys = set(self.dims) | set(other.dims)
        return WeightDecomposition({a: self[a] - other[a] for a in keys})


@dataclass(frozen=True)
class IrrepMultiplicities:
    """Multiplicities of the irreducible SL2-representations V_k (zeros omitted)."""

    mult: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if any(k < 0 or m < 0 for k, m in self.mult.items()):
            raise NegativeMultiplicityError(
                f"Invalid multiplicities: {dict(self.mult)}"
            )
        cleaned = {k: m for k, m in sorted(self.mult.items()) if m}
        object.__setattr__(self, "mult", cleaned)

    def __getitem__(self, k: int) -> int:
        return self.mult.get(k, 0)

    def __hash__(self) -> int:
        return hash(tuple(self.mult.items()))

    @staticmethod
    def irrep(k: int, multiplicity: int = 1) -> "IrrepMultiplicities":
        return IrrepMultiplicities({k: multiplicity})

    @property
    def dimension(self) -> int:
        return sum(m * (k + 1) for k, m in self.mult.items())

    def is_zero(self) -> bool:
        return not self.mult

    def weights(self) -> WeightDecomposition:
        dims: Dict[int, int] = {}
        for k, m in self.mult.items():
            for a in range(-k, k + 1, 2):
                dims[a] = dims.get(a, 0) + m
        return WeightDecomposition(dims)

    def __add__(self, other: "IrrepMultiplicities") -> "IrrepMultiplicities":
        keys = set(self.mult) | set(other.mult)
        return IrrepMultiplicities({k: self[k] + other[k] for k in keys})

    def __mul__(self, other: "IrrepMultiplicities") -> "IrrepMultiplicities":
        """Tensor product by Clebsch-Gordan: V_a ⊗ V_b = V_{a+b} + ... + V_{|a-b|}."""
        result: Dict[int, int] = {}
        for a, m in self.mult.items():
            for b, n in other.mult.items():
                for k in range(abs(a - b), a + b + 1, 2):
                    result[k] = result.get(k, 0) + m * n
        return IrrepMultiplicities(result)

    def __str__(self) -> str:
        if not self.mult:
            return "0"
        return " + ".join(
            f"[V{k}]" if m == 1 else f"{m}[V{k}]" for k, m in self.mult.items()
        )


@dataclass(frozen=True)
class InvariantSlice:
    """The S_n-fixed part of a slice of A or B, as a subspace of the A-slice."""

    model: ModelId
    p: int
    q: int
    inclusion: SubspaceBasis

    @property
    def dim(self) -> int:
        return self.inclusion.dim


@dataclass(frozen=True)
class PiReport:
    p: int
    q: int
    a: int
    source_dim: int
    target_dim: int
    rank: int

    @property
    def injective(self) -> bool:
        return self.rank == self.source_dim


def symmetric_generators(n: int) -> List[Tuple[int, ...]]:
    """The transposition (1 2) and the n-cycle, in one-line notation."""
    if n < 2:
        return []
    transposition = (2, 1) + tuple(range(3, n + 1))
    cycle = tuple(range(2, n + 1)) + (1,)
    return [transposition] if transposition == cycle else [transposition, cycle]


def _permuted_coordinates(
    model: KrizModel, sigma: Sequence[int], index: int, p: int, q: int
) -> Vector:
    element = model.a_basis(p, q).elements[index]
    word = []
    for generator in element.monomial:
        if generator.kind == "w":
            word.append(w(sigma[generator.i - 1], sigma[generator.j - 1]))
        else:
            word.append(Generator(generator.kind, sigma[generator.i - 1]))
    return model.coordinates(MultiVector.monomial(tuple(word), model.n), p, q)


def permutation_matrix(
    model: KrizModel, sigma: Sequence[int], kind: str, p: int, q: int
) -> SparseRationalMatrix:
    """Matrix of the permutation `sigma` on the (p, q)-slice of `kind`."""
    check_permutation(sigma, model.n)
    key = ("permutation", tuple(sigma), p, q)
    if key not in model.memo:
        basis = model.a_basis(p, q)
        columns = [
            _permuted_coordinates(model, sigma, index, p, q)
            for index in range(basis.ambient_dim)
        ]
        model.memo[key] = SparseRationalMatrix.from_columns(basis.ambient_dim, columns)

    matrix = model.memo[key]
    if kind == "A":
        return matrix
    space = model.slice_space(kind, p, q)
    return restrict_map(matrix, space, space)


def invariant_slice(model: KrizModel, kind: str, p: int, q: int) -> InvariantSlice:
    """The S_n-invariants of the (p, q)-slice of A or B.

    Computed as the common kernel of M_sigma - I for the generators (1 2) and the
    n-cycle.
    """
    if kind not in ("A", "B"):
        raise ValueError(f"Invariants are taken in A or B, got {kind}.")

    base = model.slice_space(kind, p, q)
    blocks = []
    for sigma in symmetric_generators(model.n):
        matrix = permutation_matrix(model, sigma, "A", p, q)
        columns = []
        for vector in base.vectors:
            image = matrix.apply(vector)
            add_scaled(image, vector, -1)
            columns.append(image)
        blocks.append(SparseRationalMatrix.from_columns(base.ambient_dim, columns))

    if blocks:
        fixed = reduce(SparseRationalMatrix.vstack(base.dim, blocks)).kernel
        inclusion = SubspaceBasis.span(
            base.ambient_dim, [base.lift(vector) for vector in fixed.vectors]
        )
    else:
        inclusion = base

    return InvariantSlice(ModelId(kind, model.n), p, q, inclusion)


def _cycle_type_representative(
    cycle_type: Mapping[int, int], n: int
) -> Tuple[int, ...]:
    sigma = list(range(1, n + 1))
    start = 0
    for length in sorted(cycle_type, reverse=True):
        for _ in range(cycle_type[length]):
            block = list(range(start + 1, start + length + 1))
            for position, point in enumerate(block):
                sigma[point - 1] = block[(position + 1) % length]
            start += length
    return tuple(sigma)


def _class_size(cycle_type: Mapping[int, int], n: int) -> int:
    centralizer = 1
    for length, count in cycle_type.items():
        centralizer *= length**count * factorial(count)
    return factorial(n) // centralizer


def reynolds_dimension(
    model: KrizModel, kind: str, p: int, q: int, allow_large: bool = False
) -> int:
    """Dimension of the invariants as the average trace (1/n!) sum_sigma tr(M_sigma).

    Traces are class functions, so the sum runs over cycle types weighted by class
    sizes.

    Raises:
        ResourceGuardError: If n exceeds the default limit (or the large limit with
            `allow_large`).
    """
    limit = LARGE_MAX_N if allow_large else DEFAULT_MAX_N
    if model.n > limit:
        raise ResourceGuardError(f"Trace average limited to n <= {limit}.")

    base = model.slice_space(kind, p, q)
    total = QQ.zero
    for cycle_type in partitions(model.n):
        cycle_type = dict(cycle_type)
        sigma = _cycle_type_representative(cycle_type, model.n)
        matrix = permutation_matrix(model, sigma, "A", p, q)
        trace = QQ.zero
        for vector, pivot in zip(base.vectors, base.pivots):
            trace += matrix.apply(vector).get(pivot, QQ.zero)
        total += _class_size(cycle_type, model.n) * trace

    average = total / factorial(model.n)
    if QQ.denom(average) != 1:
        raise ArithmeticError(f"Trace average is not an integer: {average}")
    return int(QQ.numer(average))


def weight_decomposition(
    subspace: SubspaceBasis, weights: Sequence[int]
) -> WeightDecomposition:
    """Weight dimensions of a subspace of a slice with coordinate weights `weights`.

    dims[a] is the rank of the projection onto the weight-a coordinates.

    Raises:
        WeightSplitError: If the subspace is not the sum of its weight components.
    """
    if len(weights) != subspace.ambient_dim:
        raise ValueError("Need one weight per ambient coordinate.")

    projections: Dict[int, List[Vector]] = {}
    for vector in subspace.vectors:
        parts: Dict[int, Vector] = {}
        for index, value in vector.items():
            parts.setdefault(weights[index], {})[index] = value
        for a, part in parts.items():
            projections.setdefault(a, []).append(part)

    dims = {
        a: SubspaceBasis.span(subspace.ambient_dim, vectors).dim
        for a, vectors in projections.items()
    }
    if sum(dims.values()) != subspace.dim:
        raise WeightSplitError(
            f"Subspace of dimension {subspace.dim} is not weight-split: {dims}"
        )
    return WeightDecomposition(dims)


def slice_weights(model: KrizModel, kind: str, p: int, q: int) -> WeightDecomposition:
    return weight_decomposition(
        model.slice_space(kind, p, q), model.a_basis(p, q).weights()
    )


def irrep_multiplicities(weights: WeightDecomposition) -> IrrepMultiplicities:
    """Recovers SL2-multiplicities by m_k = n_k - n_{k+2}.

    Raises:
        ValueError: If the weights are not symmetric or mix parities.
        NegativeMultiplicityError: If some m_k would be negative.
    """
    if not weights.is_symmetric() or not weights.is_parity_pure():
        raise ValueError(f"Weights are not symmetric and parity-pure: {weights.dims}")

    mult = {}
    for k in weights.dims:
        if k < 0:
            continue
        value = weights[k] - weights[k + 2]
        if value < 0:
            raise NegativeMultiplicityError(
                f"Negative multiplicity for V{k} in weights {weights.dims}"
            )
        mult[k] = value
    return IrrepMultiplicities(mult)


def sl2_operator(which: str, n: int) -> Derivation:
    """The even derivations e (y -> x), f (x -> y) and h = [e, f]."""
    zero = MultiVector.zero(n)

    def letter(kind: str, i: int) -> MultiVector:
        return MultiVector.generator(Generator(kind, i), n)

    if which == "e":
        images = {g: letter("x", g.i) if g.kind == "y" else zero for g in generators(n)}
        return Derivation(images)
    if which == "f":
        images = {g: letter("y", g.i) if g.kind == "x" else zero for g in generators(n)}
        return Derivation(images)
    if which == "h":
        e, f = sl2_operator("e", n), sl2_operator("f", n)
        images = {}
        for generator in generators(n):
            v = MultiVector.generator(generator, n)
            images[generator] = apply_derivation(e, apply_derivation(f, v)) - (
                apply_derivation(f, apply_derivation(e, v))
            )
        return Derivation(images)
    raise ValueError(f"Unknown sl2 operator: {which}")


def operator_matrix(
    model: KrizModel, derivation: Derivation, kind: str, p: int, q: int
) -> SparseRationalMatrix:
    """Matrix of a bidegree-preserving derivation on the (p, q)-slice of `kind`."""
    basis = model.a_basis(p, q)
    columns = [
        model.coordinates(
            apply_derivation(derivation, MultiVector(model.n, {element.monomial: 1})),
            p,
            q,
        )
        for element in basis.elements
    ]
    matrix = SparseRationalMatrix.from_columns(basis.ambient_dim, columns)
    if kind == "A":
        return matrix
    space = model.slice_space(kind, p, q)
    return restrict_map(matrix, space, space)


def substitution_matrix(
    model: KrizModel, images: Mapping[Generator, MultiVector], p: int, q: int
) -> SparseRationalMatrix:
    """Matrix of an algebra substitution on A^{p,q} (e.g. an SL2 group element)."""
    basis = model.a_basis(p, q)
    columns = [
        model.coordinates(
            substitute(MultiVector(model.n, {element.monomial: 1}), images), p, q
        )
        for element in basis.elements
    ]
    return SparseRationalMatrix.from_columns(basis.ambient_dim, columns)


def pi_a_injectivity(model: KrizModel, p: int, q: int, a: int) -> PiReport:
    """Checks that v -> p_a(Y v) is injective from weight a+2 to weight a in A^{p,q}.

    Raises:
        ValueError: If `a` is negative.
    """
    if a < 0:
        raise ValueError(f"The map is defined for a >= 0, got {a}.")

    weights = model.a_basis(p, q).weights()
    source = [i for i, weight in enumerate(weights) if weight == a + 2]
    target = {index: row for row, index in enumerate(
        i for i, weight in enumerate(weights) if weight == a
    )}

    key = ("Y", p, q)
    if key not in model.memo:
        y_images = sl2_images(((1, 0), (1, 1)), model.n)
        model.memo[key] = substitution_matrix(model, y_images, p, q)
    y_matrix = model.memo[key]
    columns = []
    for index in source:
        image = y_matrix.apply({index: QQ.one})
        columns.append(
            {target[i]: value for i, value in image.items() if i in target}
        )
    matrix = SparseRationalMatrix.from_columns(len(target), columns)
    return PiReport(p, q, a, len(source), len(target), rank(matrix))
