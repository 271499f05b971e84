"""The distinguished cocycles and the ring structure of H(UB).

    alpha     = sum (x_i - x_k) w_kh
    alphabar  = sum (y_i - y_k) w_kh
    beta      = sum (3x_i - x_j - 2x_k)(y_j - y_k) w_kh
    gamma     = sum x_i,  gammabar = sum y_i

where the sums run over pairwise distinct indices with k < h. alpha has bidegree
(1, 1), beta has bidegree (2, 1), gamma has bidegree (1, 0).
"""

from dataclasses import dataclass, field
from itertools import permutations, product
from math import factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy import Poly
from sympy.combinatorics import Permutation

from kriz.cohomology import cohomology_slice
from kriz.equivariance import sl2_operator, symmetric_generators
from kriz.exactla import Rational, SubspaceBasis, Vector, subspace_intersection
from kriz.exterior import (
    Generator,
    Monomial,
    MultiVector,
    apply_derivation,
    format_monomial,
    permutation_images,
    sort_word,
    substitute,
    w,
    x,
    y,
)
from kriz.model import KrizModel

CLASS_NAMES = ("alpha", "alphabar", "beta", "gamma", "gammabar")
MINIMUM_N = {"alpha": 3, "alphabar": 3, "beta": 4, "gamma": 1, "gammabar": 1}


class CocycleError(RuntimeError):
    """Raised when a named class is not closed under the differential."""


class PresentationMismatchError(RuntimeError):
    """Raised when no candidate presentation matches the computed cohomology."""


@dataclass(frozen=True)
class NamedClass:
    name: str
    n: int
    value: MultiVector = field(compare=False)

    @property
    def bidegree(self) -> Tuple[int, int]:
        degree = self.value.bidegree()
        return degree if degree is not None else (0, 0)


def _letter(generator: Generator, n: int) -> MultiVector:
    return MultiVector.generator(generator, n)


def _expand(name: str, n: int) -> MultiVector:
    points = range(1, n + 1)
    total = MultiVector.zero(n)

    if name in ("gamma", "gammabar"):
        kind = "x" if name == "gamma" else "y"
        for i in points:
            total = total + _letter(Generator(kind, i), n)
        return total

    for k, h in ((k, h) for k in points for h in points if k < h):
        omega = _letter(w(k, h), n)
        others = [i for i in points if i not in (k, h)]
        if name in ("alpha", "alphabar"):
            letter = x if name == "alpha" else y
            for i in others:
                total = total + (_letter(letter(i), n) - _letter(letter(k), n)) * omega
        else:
            for i, j in permutations(others, 2):
                left = (
                    _letter(x(i), n).scale(3)
                    - _letter(x(j), n)
                    - _letter(x(k), n).scale(2)
                )
                right = _letter(y(j), n) - _letter(y(k), n)
                total = total + left * right * omega
    return total


def build_class(model: KrizModel, name: str) -> NamedClass:
    """Builds a named class in normal form and checks that it is closed.

    Raises:
        ValueError: For unknown names or if n is too small for the class.
        CocycleError: If the differential of the class does not vanish.
    """
    if name not in CLASS_NAMES:
        raise ValueError(f"Unknown class {name!r}, expected one of {CLASS_NAMES}.")
    if model.n < MINIMUM_N[name]:
        raise ValueError(
            f"{name} is defined for n >= {MINIMUM_N[name]}, got {model.n}."
        )

    key = ("class", name)
    if key not in model.memo:
        value = model.reduce(_expand(name, model.n))
        boundary = model.apply_d(value)
        if not boundary.is_zero():
            raise CocycleError(f"d({name}) = {boundary} for n={model.n}")
        model.memo[key] = NamedClass(name, model.n, value)
    return model.memo[key]


def class_product(model: KrizModel, exponents: Mapping[str, int]) -> MultiVector:
    """Normal form of the product of powers of named classes, in `CLASS_NAMES` order."""
    result = MultiVector.one(model.n)
    for name in CLASS_NAMES:
        for _ in range(exponents.get(name, 0)):
            result = model.multiply(result, _power(model, name, 1))
    return result


def _power(model: KrizModel, name: str, exponent: int) -> MultiVector:
    key = ("power", name, exponent)
    if key not in model.memo:
        if exponent == 0:
            value = MultiVector.one(model.n)
        else:
            value = model.multiply(
                _power(model, name, exponent - 1), build_class(model, name).value
            )
        model.memo[key] = value
    return model.memo[key]


def alpha_power(model: KrizModel, q: int) -> MultiVector:
    return _power(model, "alpha", q)


def alpha_power_beta(model: KrizModel, q: int) -> MultiVector:
    """alpha^{q-1} beta."""
    return model.multiply(alpha_power(model, q - 1), build_class(model, "beta").value)


# Coefficient extraction


def monomial_coefficient(
    model: KrizModel, v: MultiVector, target: Monomial
) -> Rational:
    """Coefficient of a basis monomial in the normal form of `v`.

    Raises:
        ValueError: If `target` is not a basis monomial of A.
    """
    p, q = _bidegree_of(target)
    if target not in model.a_basis(p, q).index:
        raise ValueError(f"{format_monomial(target)} is not in normal form.")
    return model.reduce(v).coefficient(target)


def word_coefficient(
    model: KrizModel, v: MultiVector, word: Sequence[Generator]
) -> Rational:
    """Coefficient of the ordered product `word` in the normal form of `v`."""
    sign, monomial = sort_word(word)
    if not sign:
        raise ValueError("Word has a repeated generator.")
    return sign * monomial_coefficient(model, v, monomial)


def _bidegree_of(monomial: Monomial) -> Tuple[int, int]:
    q = sum(1 for generator in monomial if generator.kind == "w")
    return len(monomial) - q, q


def power_word(q: int) -> List[Generator]:
    """x_1 w_12 x_3 w_34 ... x_{2q-1} w_{2q-1,2q}."""
    word: List[Generator] = []
    for k in range(1, q + 1):
        word += [x(2 * k - 1), w(2 * k - 1, 2 * k)]
    return word


def beta_word(q: int) -> List[Generator]:
    """x_1 w_12 ... x_{2q-3} w_{2q-3,2q-2} x_{2q-1} y_{2q+1} w_{2q-1,2q}."""
    return power_word(q - 1) + [x(2 * q - 1), y(2 * q + 1), w(2 * q - 1, 2 * q)]


def a_coefficient(n: int, q: int) -> int:
    return (-1) ** q * factorial(q) * n ** (q - 1) * (n - 2 * q)


def b_coefficient(n: int, q: int) -> int:
    return 2 * (-1) ** q * factorial(q) * n ** (q - 1) * (n - 2 * q - 1)


@dataclass(frozen=True)
class CoefficientReport:
    name: str
    q: int
    expected: int
    computed: Rational

    @property
    def matches(self) -> bool:
        return self.computed == self.expected


@dataclass(frozen=True)
class NonvanishingReport:
    n: int
    alpha_powers: Mapping[int, bool]
    alpha_power_beta: Mapping[int, bool]
    coefficients: Tuple[CoefficientReport, ...]

    @property
    def passed(self) -> bool:
        return (
            all(self.alpha_powers.values())
            and all(self.alpha_power_beta.values())
            and all(report.matches for report in self.coefficients)
        )


def is_nonzero_class(model: KrizModel, kind: str, v: MultiVector) -> bool:
    """Whether the cocycle `v` represents a nonzero class in H(kind)."""
    degree = v.bidegree()
    if degree is None:
        return False
    vector = model.coordinates(v, *degree)
    return not cohomology_slice(model, kind, *degree).coboundary_space.contains(vector)


def coefficient_reports(model: KrizModel) -> Tuple[CoefficientReport, ...]:
    n = model.n
    reports = []
    if n < MINIMUM_N["alpha"]:
        return ()
    for q in range(1, n // 2 + 1):
        computed = word_coefficient(model, alpha_power(model, q), power_word(q))
        reports.append(CoefficientReport("a", q, a_coefficient(n, q), computed))
    if n >= MINIMUM_N["beta"]:
        for q in range(1, (n - 1) // 2 + 1):
            computed = word_coefficient(model, alpha_power_beta(model, q), beta_word(q))
            reports.append(CoefficientReport("b", q, b_coefficient(n, q), computed))
    return tuple(reports)


def verify_power_nonvanishing(model: KrizModel) -> NonvanishingReport:
    """alpha^q is nonzero in H(UB) for n > 2q, alpha^{q-1} beta for n > 2q + 1."""
    n = model.n
    powers = {}
    mixed = {}
    if n >= MINIMUM_N["alpha"]:
        for q in range(1, (n - 1) // 2 + 1):
            powers[q] = is_nonzero_class(model, "UB", alpha_power(model, q))
    if n >= MINIMUM_N["beta"]:
        for q in range(1, (n - 2) // 2 + 1):
            mixed[q] = is_nonzero_class(model, "UB", alpha_power_beta(model, q))
    return NonvanishingReport(n, powers, mixed, coefficient_reports(model))


# Symmetry checks


def is_invariant(model: KrizModel, v: MultiVector) -> bool:
    """Whether `v` is fixed by the transposition (1 2) and the n-cycle."""
    reduced = model.reduce(v)
    for sigma in symmetric_generators(model.n):
        image = substitute(reduced, permutation_images(sigma, model.n))
        if model.reduce(image) != reduced:
            return False
    return True


def lowering_matches(model: KrizModel) -> bool:
    """f(alpha) = alphabar termwise."""
    alpha = build_class(model, "alpha").value
    lowered = model.reduce(apply_derivation(sl2_operator("f", model.n), alpha))
    return lowered == build_class(model, "alphabar").value


# Abstract presentation

a, abar, b = sympy.symbols("a abar b")


def _lower(poly: Poly) -> Poly:
    """The lowering operator abar * d/da on Q[a, abar, b]."""
    return Poly(abar, a, abar, b) * poly.diff(a)


def _orbit(generator: Poly) -> List[Poly]:
    orbit = []
    while not generator.is_zero:
        orbit.append(generator)
        generator = _lower(generator)
    return orbit


def _degree(monom: Tuple[int, int, int]) -> int:
    i, j, e = monom
    return 2 * (i + j) + 3 * e


def _monomials(degree: int) -> List[Tuple[int, int, int]]:
    result = []
    for e in (0, 1):
        rest = degree - 3 * e
        if rest < 0 or rest % 2:
            continue
        k = rest // 2
        result.extend((i, k - i, e) for i in range(k, -1, -1))
    return result


def quotient_dimensions(m: int, e: int, top: int) -> Dict[int, int]:
    """Degreewise dimensions of Q[a, abar, b] / (b^2, SL2-ideal of a^m and a^e b)."""
    generators = _orbit(Poly(a**m, a, abar, b)) + _orbit(Poly(a**e * b, a, abar, b))
    dims = {}
    for degree in range(top + 1):
        monomials = _monomials(degree)
        index = {monom: i for i, monom in enumerate(monomials)}
        vectors = []
        for generator in generators:
            shift = degree - _degree(generator.monoms()[0])
            for monom in _monomials(shift) if shift >= 0 else []:
                multiple = generator * Poly(
                    a ** monom[0] * abar ** monom[1] * b ** monom[2], a, abar, b
                )
                vectors.append(
                    {
                        index[term]: coefficient
                        for term, coefficient in multiple.terms()
                        if term[2] < 2
                    }
                )
        dims[degree] = len(monomials) - SubspaceBasis.span(len(monomials), vectors).dim
    return dims


@dataclass(frozen=True)
class PresentationReport:
    n: int
    quotient_dims: Mapping[int, Mapping[int, int]]
    cohomology_dims: Mapping[int, int]
    matching: Tuple[int, ...]
    multiplicative: bool

    @property
    def matched_exponent(self) -> Optional[int]:
        return self.matching[0] if len(self.matching) == 1 else None

    @property
    def stated_exponent_matches(self) -> bool:
        """Whether exactly the exponent `relation_exponent(n)` matches."""
        return self.matched_exponent == relation_exponent(self.n)

    @property
    def half_exponent_matches(self) -> bool:
        """Whether the matched exponent equals floor(n/2)."""
        return self.matched_exponent == self.n // 2

    @property
    def passed(self) -> bool:
        return self.stated_exponent_matches and self.multiplicative


def relation_exponent(n: int) -> int:
    """The exponent e of the relation a^e b in the presentation of H(UB)."""
    return n // 2 - 1


def candidate_exponents(n: int) -> Tuple[int, ...]:
    e = relation_exponent(n)
    return tuple(c for c in (e, e + 1, e + 2) if c >= 0)


def verify_presentation(model: KrizModel) -> PresentationReport:
    """Compares H(UB) with Q[a, abar, b] / (a^m, a^e b, b^2)_SL2, m = floor((n+1)/2).

    Each candidate exponent e is tested; the report lists those whose quotient matches
    H(UB) in every degree. Multiplicativity checks that alpha^i and alpha^{i-1} beta
    are nonzero classes exactly when a^i and a^{i-1} b survive in the quotient.

    Raises:
        ValueError: If n < 4.
        PresentationMismatchError: If no candidate matches.
    """
    n = model.n
    if n < MINIMUM_N["beta"]:
        raise ValueError(f"The presentation is checked for n >= 4, got {n}.")

    top = 2 * n
    cohomology = {degree: 0 for degree in range(top + 1)}
    for p, q in model.bidegrees("UB"):
        cohomology[p + q] += cohomology_slice(model, "UB", p, q).dim

    m = (n + 1) // 2
    quotients = {e: quotient_dimensions(m, e, top) for e in candidate_exponents(n)}
    matching = tuple(e for e, dims in quotients.items() if dims == cohomology)
    if not matching:
        raise PresentationMismatchError(
            f"No exponent in {candidate_exponents(n)} matches H(UB) for n={n}."
        )

    e = matching[0]
    multiplicative = True
    for i in range(1, m + 1):
        if 2 * i <= top:
            alive = is_nonzero_class(model, "UB", alpha_power(model, i))
            multiplicative &= alive == (i < m)
        if 2 * i + 1 <= top:
            alive = is_nonzero_class(model, "UB", alpha_power_beta(model, i))
            multiplicative &= alive == (i - 1 < e)

    return PresentationReport(n, quotients, cohomology, matching, multiplicative)


# Generation and formality


@dataclass(frozen=True)
class SliceComparison:
    p: int
    q: int
    expected: int
    spanned: int

    @property
    def passed(self) -> bool:
        return self.spanned == self.expected


@dataclass(frozen=True)
class GenerationReport:
    n: int
    slices: Tuple[SliceComparison, ...]

    @property
    def passed(self) -> bool:
        return all(item.passed for item in self.slices)


def _products(model: KrizModel, p: int, q: int, names: Sequence[str]) -> List[Vector]:
    """Coordinates of the products of the given classes landing in (p, q).

    gamma, gammabar and beta appear at most once; alpha and alphabar with any power.
    """
    degrees = {name: build_class(model, name).bidegree for name in names}
    bounded = [name for name in names if name not in ("alpha", "alphabar")]
    vectors = []
    for flags in product((0, 1), repeat=len(bounded)):
        exponents = dict(zip(bounded, flags))
        rest_p = p - sum(degrees[name][0] * exponents[name] for name in bounded)
        rest_q = q - sum(degrees[name][1] * exponents[name] for name in bounded)
        # alpha and alphabar have bidegree (1, 1).
        if rest_p != rest_q or rest_p < 0:
            continue
        for i in range(rest_p + 1):
            powers = {"alpha": i, "alphabar": rest_p - i}
            if any(powers[name] and name not in names for name in powers):
                continue
            value = model.multiply(
                class_product(model, exponents),
                model.multiply(
                    _power(model, "alpha", powers["alpha"]),
                    _power(model, "alphabar", powers["alphabar"]),
                ),
            )
            if not value.is_zero():
                vectors.append(model.coordinates(value, p, q))
    return vectors


def verify_generation(model: KrizModel) -> GenerationReport:
    """Products of alpha, alphabar, beta, gamma and gammabar span H(UA) in every
    bidegree.
    """
    if model.n < MINIMUM_N["beta"]:
        raise ValueError(f"Generation is checked for n >= 4, got {model.n}.")

    comparisons = []
    for p, q in model.bidegrees("UA"):
        target = cohomology_slice(model, "UA", p, q)
        if not target.dim:
            continue
        products = _products(model, p, q, CLASS_NAMES)
        coboundaries = target.coboundary_space
        spanned = SubspaceBasis.span(
            coboundaries.ambient_dim, list(coboundaries.vectors) + products
        )
        comparisons.append(
            SliceComparison(p, q, target.dim, spanned.dim - coboundaries.dim)
        )
    return GenerationReport(model.n, tuple(comparisons))


@dataclass(frozen=True)
class FormalityReport:
    n: int
    dimensions: Tuple[SliceComparison, ...]
    intersections: Mapping[Tuple[int, int], int]
    cocycles: bool

    @property
    def passed(self) -> bool:
        return (
            self.cocycles
            and all(item.passed for item in self.dimensions)
            and not any(self.intersections.values())
        )

    @property
    def support(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((item.p, item.q) for item in self.dimensions if item.spanned)


def subalgebra_slice(model: KrizModel, p: int, q: int) -> SubspaceBasis:
    """K^{p,q}: the span of the products alpha^i alphabar^j beta^e in A^{p,q}."""
    return SubspaceBasis.span(
        model.a_basis(p, q).ambient_dim,
        _products(model, p, q, ("alpha", "alphabar", "beta")),
    )


def verify_formality(model: KrizModel) -> FormalityReport:
    """K meets the coboundaries trivially, has the dimensions of H(UB) and consists of
    cocycles, so K maps isomorphically onto H(UB).
    """
    if model.n < MINIMUM_N["beta"]:
        raise ValueError(f"Formality is checked for n >= 4, got {model.n}.")

    dimensions = []
    intersections = {}
    cocycles = True
    for p, q in model.bidegrees("UB"):
        subalgebra = subalgebra_slice(model, p, q)
        target = cohomology_slice(model, "UB", p, q)
        dimensions.append(SliceComparison(p, q, target.dim, subalgebra.dim))
        intersections[(p, q)] = subspace_intersection(
            subalgebra, target.coboundary_space
        ).dim
        outgoing = model.d_matrix(p, q)
        cocycles &= all(not outgoing.apply(vector) for vector in subalgebra.vectors)
    return FormalityReport(model.n, tuple(dimensions), intersections, cocycles)


# Determinant identity


def verify_determinant_identity(q: int) -> bool:
    """sum_{sigma in S_q} sgn(sigma) t^{fix(sigma)} = (t - 1)^{q-1} (t + q - 1)."""
    if q < 1:
        raise ValueError(f"Expected q >= 1, got {q}.")
    t = sympy.Symbol("t")
    total = sympy.Integer(0)
    for image in permutations(range(q)):
        fixed = sum(1 for i, j in enumerate(image) if i == j)
        total += Permutation(list(image)).signature() * t**fixed
    return Poly(total, t) == Poly((t - 1) ** (q - 1) * (t + q - 1), t)
