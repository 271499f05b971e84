"""Marked partitions and the dimension arithmetic of the induced decomposition.

A marked partition of n is a partition lambda_1 >= ... >= lambda_t together with marks
h_i in {1, x, y, xy}, normalized so that equal parts carry weakly decreasing marks
(1 < x < y < xy). The slice A^{p,q} decomposes as a sum over marked partitions with
|L| = n - t = q and |H| = sum deg(h_i) = p of representations induced from the
groups Z = C_L ⋊ N_{L,H}, so

    dim A^{p,q} = sum n! / |Z|,

and the invariant dimension counts the marked partitions whose character is trivial.
"""

from dataclasses import dataclass
from itertools import combinations_with_replacement, groupby, product
from math import factorial, prod
from typing import Iterator, List, Tuple

from sympy.utilities.iterables import partitions

MARKS = ("1", "x", "y", "xy")
MARK_DEGREE = {"1": 0, "x": 1, "y": 1, "xy": 2}
MARK_RANK = {mark: rank for rank, mark in enumerate(MARKS)}


@dataclass(frozen=True)
class MarkedPartition:
    lambda_: Tuple[int, ...]
    marks: Tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.lambda_) != len(self.marks):
            raise ValueError("Parts and marks must have equal length.")
        if any(part < 1 for part in self.lambda_):
            raise ValueError(f"Parts must be positive: {self.lambda_}")
        if any(mark not in MARK_DEGREE for mark in self.marks):
            raise ValueError(f"Unknown mark in {self.marks}")
        for i in range(len(self.lambda_) - 1):
            if self.lambda_[i] < self.lambda_[i + 1]:
                raise ValueError(f"Parts must be weakly decreasing: {self.lambda_}")
            if (
                self.lambda_[i] == self.lambda_[i + 1]
                and MARK_RANK[self.marks[i]] < MARK_RANK[self.marks[i + 1]]
            ):
                raise ValueError(
                    f"Marks of equal parts must be weakly decreasing: {self.marks}"
                )

    @property
    def n(self) -> int:
        return sum(self.lambda_)

    @property
    def length(self) -> int:
        return len(self.lambda_)

    @property
    def size_l(self) -> int:
        """|L| = n - t."""
        return self.n - self.length

    @property
    def size_h(self) -> int:
        """|H| = sum of the mark degrees."""
        return sum(MARK_DEGREE[mark] for mark in self.marks)

    @property
    def norm_h(self) -> int:
        """||H|| = #x-marks - #y-marks, the torus weight of the summand."""
        return self.marks.count("x") - self.marks.count("y")

    def blocks(self) -> List[Tuple[Tuple[int, str], int]]:
        """Classes of equal (part, mark) pairs with their multiplicities."""
        pairs = list(zip(self.lambda_, self.marks))
        return [(key, len(list(group))) for key, group in groupby(pairs)]

    def __str__(self) -> str:
        parts = ",".join(map(str, self.lambda_))
        marks = ",".join(self.marks)
        return f"L=({parts}) H=({marks})"


@dataclass(frozen=True)
class StabilizerInfo:
    c_order: int
    n_order: int

    @property
    def z_order(self) -> int:
        return self.c_order * self.n_order


def _partitions(n: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Partitions of n into exactly `parts` parts, largest first."""
    for multiplicities in partitions(n, m=parts):
        if sum(multiplicities.values()) == parts:
            yield tuple(
                size
                for size in sorted(multiplicities, reverse=True)
                for _ in range(multiplicities[size])
            )


def enumerate_marked(n: int, p: int, q: int) -> List[MarkedPartition]:
    """All marked partitions of n with |L| = q and |H| = p, in a fixed order."""
    if n < 1 or not 0 <= q <= n - 1 or p < 0:
        return []

    descending = tuple(reversed(MARKS))
    result = []
    for lambda_ in _partitions(n, n - q):
        runs = [len(list(group)) for _, group in groupby(lambda_)]
        choices = [
            list(combinations_with_replacement(descending, length)) for length in runs
        ]
        for selection in product(*choices):
            marks = tuple(mark for run in selection for mark in run)
            if sum(MARK_DEGREE[mark] for mark in marks) == p:
                result.append(MarkedPartition(lambda_, marks))
    return result


def stabilizer(mp: MarkedPartition) -> StabilizerInfo:
    """Orders of C_L (cyclic rotations of the blocks) and N_{L,H} (permutations of
    equal marked blocks)."""
    c_order = prod(mp.lambda_)
    n_order = prod(factorial(count) for _, count in mp.blocks())
    return StabilizerInfo(c_order, n_order)


def induced_dimension(mp: MarkedPartition) -> int:
    return factorial(mp.n) // stabilizer(mp).z_order


def xi_is_trivial(mp: MarkedPartition) -> bool:
    """Whether the character inducing the summand of `mp` is trivial.

    The cyclic part is trivial only for blocks of size 1 or 2; a class of equal blocks
    permuted by N contributes the sign (-1)^{lambda + deg h + 1}.
    """
    if any(part > 2 for part in mp.lambda_):
        return False
    for (part, mark), count in mp.blocks():
        if count >= 2 and (part + MARK_DEGREE[mark] + 1) % 2:
            return False
    return True


def slice_dimension_oracle(n: int, p: int, q: int) -> int:
    return sum(induced_dimension(mp) for mp in enumerate_marked(n, p, q))


def invariant_dimension_oracle(n: int, p: int, q: int) -> int:
    return sum(1 for mp in enumerate_marked(n, p, q) if xi_is_trivial(mp))


def weight_dimension_oracle(n: int, p: int, q: int, a: int) -> int:
    """Dimension of the weight-a part of A^{p,q}."""
    return sum(
        induced_dimension(mp) for mp in enumerate_marked(n, p, q) if mp.norm_h == a
    )
