"""Signed arithmetic in the free graded-commutative algebra on odd generators.

The generators are `x_i`, `y_i` of bidegree (1, 0) and `w_{i,j}` (omega) of bidegree
(0, 1). Every sign in the package flows from the total order

    x_1 < y_1 < x_2 < y_2 < ... < x_n < y_n < w_{1,2} < w_{1,3} < ... < w_{n-1,n}.
"""

import re
from dataclasses import dataclass, field
from typing import (
    Any,
    Callable,
    Dict,
    Iterable,
    Iterator,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from sympy import QQ

from kriz.exactla import Rational

KINDS = ("x", "y", "w")


@dataclass(frozen=True, order=True)
class Generator:
    """An odd generator `x_i`, `y_i` or `w_{i,j}` (with `i < j`).

    Generators compare by their position in the fixed total order, which does not
    depend on the number of points.
    """

    key: Tuple[int, int, int] = field(init=False, repr=False)
    kind: str = field(compare=False)
    i: int = field(compare=False)
    j: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"Unknown generator kind: {self.kind}")
        if self.i < 1:
            raise ValueError(f"Generator indices start at 1, got {self.i}.")

        if self.kind == "w":
            if self.i == self.j or self.j < 1:
                raise ValueError(f"Invalid omega indices: ({self.i}, {self.j})")
            if self.i > self.j:
                # w_{j,i} = w_{i,j} without a sign.
                i, j = self.j, self.i
                object.__setattr__(self, "i", i)
                object.__setattr__(self, "j", j)
            key = (1, self.i, self.j)
        else:
            if self.j != 0:
                raise ValueError(f"{self.kind}-generators carry a single index.")
            key = (0, self.i, 0 if self.kind == "x" else 1)

        object.__setattr__(self, "key", key)

    @property
    def bidegree(self) -> Tuple[int, int]:
        return (0, 1) if self.kind == "w" else (1, 0)

    @property
    def weight(self) -> int:
        return {"x": 1, "y": -1, "w": 0}[self.kind]

    @property
    def max_index(self) -> int:
        return self.j if self.kind == "w" else self.i

    def __str__(self) -> str:
        if self.kind == "w":
            return f"w{self.i}_{self.j}"
        return f"{self.kind}{self.i}"

    def to_latex(self) -> str:
        if self.kind == "w":
            return rf"\omega_{{{self.i},{self.j}}}"
        return f"{self.kind}_{{{self.i}}}"

    @staticmethod
    def parse(text: str) -> "Generator":
        """Parses the string form produced by `str(generator)`."""
        match = re.fullmatch(r"([xy])(\d+)|w(\d+)_(\d+)", text.strip())
        if match is None:
            raise ValueError(f"Cannot parse generator: {text!r}")
        if match.group(1):
            return Generator(match.group(1), int(match.group(2)))
        return Generator("w", int(match.group(3)), int(match.group(4)))


def x(i: int) -> Generator:
    return Generator("x", i)


def y(i: int) -> Generator:
    return Generator("y", i)


def w(i: int, j: int) -> Generator:
    return Generator("w", i, j)


Monomial = Tuple[Generator, ...]


def bidegree(monomial: Monomial) -> Tuple[int, int]:
    q = sum(1 for generator in monomial if generator.kind == "w")
    return (len(monomial) - q, q)


def weight(monomial: Monomial) -> int:
    return sum(generator.weight for generator in monomial)


def format_monomial(monomial: Monomial) -> str:
    return "*".join(str(generator) for generator in monomial) or "1"


def parse_monomial(text: str) -> Monomial:
    """Parses a monomial written as `x1*y2*w1_2`; the word must already be sorted."""
    if text.strip() == "1":
        return ()
    sign, monomial = sort_word([Generator.parse(part) for part in text.split("*")])
    if sign != 1:
        raise ValueError(f"Monomial is not in canonical order: {text!r}")
    return monomial


def sort_word(word: Sequence[Generator]) -> Tuple[int, Monomial]:
    """Sorts a word of odd generators.

    Returns:
        The Koszul sign of the sorting permutation and the sorted monomial, or
        `(0, ())` if a generator repeats.
    """
    if len(set(word)) != len(word):
        return 0, ()
    inversions = sum(
        1
        for a in range(len(word))
        for b in range(a + 1, len(word))
        if word[a] > word[b]
    )
    return (-1 if inversions % 2 else 1), tuple(sorted(word))


def multiply_monomials(left: Monomial, right: Monomial) -> Tuple[int, Monomial]:
    """Returns the sign and sorted monomial of the product `left · right`."""
    if not left or not right:
        return 1, left + right
    if left[-1] < right[0]:
        return 1, left + right

    merged = []
    swaps = 0
    a = b = 0
    while a < len(left) and b < len(right):
        if left[a] == right[b]:
            return 0, ()
        if left[a] < right[b]:
            merged.append(left[a])
            a += 1
        else:
            # right[b] jumps over the remaining factors of `left`.
            swaps += len(left) - a
            merged.append(right[b])
            b += 1
    merged.extend(left[a:])
    merged.extend(right[b:])
    return (-1 if swaps % 2 else 1), tuple(merged)


class MultiVector:
    """An element of the exterior algebra with rational coefficients.

    Parameters:
        n: Number of points; all generator indices lie in `1..n`.
        terms: Mapping from sorted monomials to coefficients. Zero coefficients are
            dropped.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Mapping[Monomial, Any]] = None) -> None:
        if n < 1:
            raise ValueError(f"Number of points must be positive, got {n}.")
        self.n = n
        self.terms: Dict[Monomial, Rational] = {}
        for monomial, coefficient in (terms or {}).items():
            coefficient = QQ.convert(coefficient)
            if coefficient:
                self.terms[monomial] = coefficient

    @staticmethod
    def zero(n: int) -> "MultiVector":
        return MultiVector(n)

    @staticmethod
    def one(n: int) -> "MultiVector":
        return MultiVector(n, {(): QQ.one})

    @staticmethod
    def generator(generator: Generator, n: int) -> "MultiVector":
        if generator.max_index > n:
            raise ValueError(f"Generator {generator} does not exist for n={n}.")
        return MultiVector(n, {(generator,): QQ.one})

    @staticmethod
    def monomial(monomial: Monomial, n: int, coefficient: Any = 1) -> "MultiVector":
        """Returns `coefficient` times the product of the generators in `monomial`."""
        if any(generator.max_index > n for generator in monomial):
            raise ValueError(f"Monomial {format_monomial(monomial)} exceeds n={n}.")
        sign, ordered = sort_word(monomial)
        return MultiVector(n, {ordered: sign * QQ.convert(coefficient)})

    @staticmethod
    def word(generators: Sequence[Generator], n: int) -> "MultiVector":
        return MultiVector.monomial(tuple(generators), n)

    def __iter__(self) -> Iterator[Tuple[Monomial, Rational]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, monomial: Monomial) -> Rational:
        return self.terms.get(monomial, QQ.zero)

    def bidegrees(self) -> set:
        return {bidegree(monomial) for monomial in self.terms}

    def bidegree(self) -> Optional[Tuple[int, int]]:
        """Returns the bidegree of a homogeneous element (None for zero).

        Raises:
            ValueError: If the element is not homogeneous.
        """
        degrees = self.bidegrees()
        if not degrees:
            return None
        if len(degrees) > 1:
            raise ValueError(f"Element is not homogeneous: bidegrees {sorted(degrees)}")
        return degrees.pop()

    def weights(self) -> set:
        return {weight(monomial) for monomial in self.terms}

    def _check(self, other: "MultiVector") -> None:
        if not isinstance(other, MultiVector):
            raise TypeError(f"Expected MultiVector, got {type(other)}")
        if other.n != self.n:
            raise ValueError(f"Ambient mismatch: n={self.n} and n={other.n}")

    def __add__(self, other: "MultiVector") -> "MultiVector":
        self._check(other)
        terms = dict(self.terms)
        for monomial, coefficient in other.terms.items():
            terms[monomial] = terms.get(monomial, QQ.zero) + coefficient
        return MultiVector(self.n, terms)

    def __neg__(self) -> "MultiVector":
        return MultiVector(self.n, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MultiVector") -> "MultiVector":
        return self + (-other)

    def scale(self, factor: Any) -> "MultiVector":
        factor = QQ.convert(factor)
        return MultiVector(self.n, {m: factor * c for m, c in self.terms.items()})

    def __mul__(self, other: Union["MultiVector", int, Any]) -> "MultiVector":
        if isinstance(other, MultiVector):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other: Any) -> "MultiVector":
        return self.scale(other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiVector):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for monomial, coefficient in sorted(self.terms.items()):
            text = format_monomial(monomial)
            if coefficient == 1:
                parts.append(text)
            elif coefficient == -1:
                parts.append(f"-{text}")
            else:
                parts.append(f"{coefficient}*{text}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MultiVector(n={self.n}, {self})"


def mul(u: MultiVector, v: MultiVector) -> MultiVector:
    """Exterior product with Koszul signs.

    Raises:
        ValueError: If the ambient numbers of points differ.
    """
    u._check(v)
    terms: Dict[Monomial, Rational] = {}
    for left, a in u.terms.items():
        for right, b in v.terms.items():
            sign, monomial = multiply_monomials(left, right)
            if sign:
                terms[monomial] = terms.get(monomial, QQ.zero) + sign * a * b
    return MultiVector(u.n, terms)


def product(factors: Iterable[MultiVector], n: int) -> MultiVector:
    result = MultiVector.one(n)
    for factor in factors:
        result = mul(result, factor)
    return result


@dataclass(frozen=True)
class Derivation:
    """A derivation given by its values on generators.

    Parameters:
        images: Values on generators. Generators missing from the mapping are
            resolved through `default`, if given.
        parity: "even" for D(ab) = D(a)b + aD(b), "odd" for
            D(ab) = D(a)b + (-1)^{deg a} aD(b).
        default: Optional rule computing the image of a generator on demand.
    """

    images: Mapping[Generator, MultiVector]
    parity: str = "even"
    default: Optional[Callable[[Generator], MultiVector]] = field(
        default=None, compare=False
    )

    def __post_init__(self) -> None:
        if self.parity not in ("even", "odd"):
            raise ValueError(f"Unknown parity: {self.parity}")

    def image(self, generator: Generator) -> MultiVector:
        if generator in self.images:
            return self.images[generator]
        if self.default is not None:
            return self.default(generator)
        raise ValueError(f"Derivation has no image for generator {generator}.")


def apply_derivation(derivation: Derivation, v: MultiVector) -> MultiVector:
    """Extends a derivation from generators to `v` by the Leibniz rule."""
    odd = derivation.parity == "odd"
    terms: Dict[Monomial, Rational] = {}

    for monomial, coefficient in v.terms.items():
        for position, generator in enumerate(monomial):
            image = derivation.image(generator)
            if image.n != v.n:
                raise ValueError(f"Ambient mismatch: n={v.n} and n={image.n}")
            if image.is_zero():
                continue
            # Each generator has total degree 1, so the odd sign counts the prefix.
            sign = -1 if odd and position % 2 else 1
            prefix, suffix = monomial[:position], monomial[position + 1 :]
            for middle, value in image.terms.items():
                s1, left = multiply_monomials(prefix, middle)
                if not s1:
                    continue
                s2, full = multiply_monomials(left, suffix)
                if not s2:
                    continue
                term = sign * s1 * s2 * coefficient * value
                terms[full] = terms.get(full, QQ.zero) + term

    return MultiVector(v.n, terms)


def substitute(v: MultiVector, images: Mapping[Generator, MultiVector]) -> MultiVector:
    """Applies the algebra homomorphism determined by `images`.

    Generators missing from `images` are left unchanged.

    Raises:
        ValueError: If an image is not homogeneous of its generator's bidegree.
    """
    for generator, image in images.items():
        if image.is_zero():
            continue
        if image.bidegree() != generator.bidegree:
            raise ValueError(
                f"Image of {generator} has bidegree {image.bidegree()}, "
                f"expected {generator.bidegree}."
            )

    cache: Dict[Generator, MultiVector] = {}

    def image_of(generator: Generator) -> MultiVector:
        if generator not in cache:
            if generator in images:
                cache[generator] = images[generator]
            else:
                cache[generator] = MultiVector.generator(generator, v.n)
        return cache[generator]

    result = MultiVector.zero(v.n)
    for monomial, coefficient in v.terms.items():
        term = MultiVector(v.n, {(): coefficient})
        for generator in monomial:
            term = mul(term, image_of(generator))
            if term.is_zero():
                break
        result = result + term
    return result


def generators(n: int) -> Tuple[Generator, ...]:
    """All generators for `n` points in the fixed total order."""
    letters = [g for i in range(1, n + 1) for g in (x(i), y(i))]
    omegas = [w(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    return tuple(letters + omegas)


def differential(n: int) -> Derivation:
    """The odd derivation with d(x_i) = d(y_i) = 0 and d(w_ij) = (x_i-x_j)(y_i-y_j)."""
    images = {}
    for generator in generators(n):
        if generator.kind == "w":
            i, j = generator.i, generator.j
            dx = MultiVector.generator(x(i), n) - MultiVector.generator(x(j), n)
            dy = MultiVector.generator(y(i), n) - MultiVector.generator(y(j), n)
            images[generator] = mul(dx, dy)
        else:
            images[generator] = MultiVector.zero(n)
    return Derivation(images, parity="odd")


def permutation_images(sigma: Sequence[int], n: int) -> Dict[Generator, MultiVector]:
    """Images of the generators under a permutation.

    x_i -> x_{sigma(i)}, y_i -> y_{sigma(i)} and w_ij -> w_{sigma(i)sigma(j)}.

    The permutation is given one-line, `sigma[i - 1] = sigma(i)`. Composing the
    substitutions follows the group law of permutations.
    """
    check_permutation(sigma, n)
    images = {}
    for generator in generators(n):
        if generator.kind == "w":
            target = w(sigma[generator.i - 1], sigma[generator.j - 1])
        else:
            target = Generator(generator.kind, sigma[generator.i - 1])
        images[generator] = MultiVector.generator(target, n)
    return images


def sl2_images(matrix: Sequence[Sequence[Any]], n: int) -> Dict[Generator, MultiVector]:
    """Substitution of the matrix ((a, b), (c, d)).

    x_i -> a x_i + c y_i and y_i -> b x_i + d y_i.
    """
    (a, b), (c, d) = matrix
    images = {}
    for i in range(1, n + 1):
        xi, yi = MultiVector.generator(x(i), n), MultiVector.generator(y(i), n)
        images[x(i)] = xi.scale(a) + yi.scale(c)
        images[y(i)] = xi.scale(b) + yi.scale(d)
    return images


def check_permutation(sigma: Sequence[int], n: int) -> None:
    if sorted(sigma) != list(range(1, n + 1)):
        raise ValueError(f"Not a permutation of 1..{n}: {tuple(sigma)}")


def compose(sigma: Sequence[int], tau: Sequence[int]) -> Tuple[int, ...]:
    """Returns the permutation `sigma ∘ tau` (apply `tau` first)."""
    return tuple(sigma[t - 1] for t in tau)
