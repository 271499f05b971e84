"""The Križ model A, its subalgebras B and D, and their invariant parts.

A is the quotient of the exterior algebra by the ideal generated by

    (x_i - x_j) w_ij,   (y_i - y_j) w_ij,   w_ij w_jk - w_ij w_ki + w_jk w_ki,

with the differential d(w_ij) = (x_i - x_j)(y_i - y_j). A basis of A^{p,q} is given by
pairs (F, S) where F is a q-edge forest on 1..n without broken circuits and S is a
p-subset of the letters x_c, y_c for the minimal vertices c of the components of F.

Every slice of every model is handled as a subspace of the corresponding A-slice in
these coordinates.
"""

import functools
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from sympy import QQ

from kriz.exactla import (
    SparseRationalMatrix,
    SubspaceBasis,
    Vector,
    quotient_dim,
    restrict_map,
)
from kriz.exterior import (
    Generator,
    Monomial,
    MultiVector,
    apply_derivation,
    differential,
    format_monomial,
    generators,
    mul,
    parse_monomial,
    sort_word,
    w,
    x,
    y,
)
from kriz.storage import (
    Storage,
    matrix_to_payload,
    payload_to_matrix,
    payload_to_subspace,
    subspace_to_payload,
)

MODEL_KINDS = ("A", "B", "D", "UA", "UB")
MAX_FREE_SLICE = 10**6

Edge = Tuple[int, int]


class ResourceGuardError(RuntimeError):
    """Raised when a computation would exceed the configured size limits."""


@dataclass(frozen=True)
class ModelId:
    kind: str
    n: int

    def __post_init__(self) -> None:
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"Unsupported model: {self.kind}")
        if self.n < 1:
            raise ValueError(f"Number of points must be positive, got {self.n}.")

    @property
    def base(self) -> str:
        """The model an invariant model is carved out of (A for UA, B for UB)."""
        return {"UA": "A", "UB": "B"}.get(self.kind, self.kind)

    def __str__(self) -> str:
        return f"{self.kind}(n={self.n})"


def _components(n: int, edges: Sequence[Edge]) -> Optional[Dict[int, int]]:
    """Maps every vertex to the minimal vertex of its component, None on a cycle."""
    parent = list(range(n + 1))

    def find(vertex: int) -> int:
        while parent[vertex] != vertex:
            parent[vertex] = parent[parent[vertex]]
            vertex = parent[vertex]
        return vertex

    for i, j in edges:
        root_i, root_j = find(i), find(j)
        if root_i == root_j:
            return None
        parent[max(root_i, root_j)] = min(root_i, root_j)

    return {vertex: find(vertex) for vertex in range(1, n + 1)}


def _tree_path(edges: Sequence[Edge], start: int, end: int) -> Optional[List[Edge]]:
    adjacency: Dict[int, List[Edge]] = {}
    for edge in edges:
        adjacency.setdefault(edge[0], []).append(edge)
        adjacency.setdefault(edge[1], []).append(edge)

    previous: Dict[int, Optional[Edge]] = {start: None}
    stack = [start]
    while stack:
        vertex = stack.pop()
        for edge in adjacency.get(vertex, []):
            other = edge[1] if edge[0] == vertex else edge[0]
            if other not in previous:
                previous[other] = edge
                stack.append(other)

    if end not in previous:
        return None
    path = []
    vertex = end
    while previous[vertex] is not None:
        edge = previous[vertex]
        path.append(edge)
        vertex = edge[0] if edge[1] == vertex else edge[1]
    return path


def find_broken_circuit(
    n: int, edges: Sequence[Edge]
) -> Optional[Tuple[Edge, List[Edge]]]:
    """Finds a broken circuit inside an acyclic edge set.

    Returns:
        The lex-least closing edge `(a, b)` outside `edges` together with the path
        from `a` to `b` inside `edges`, such that `(a, b)` is smaller than every edge
        of the path, or None if the edge set contains no broken circuit.
    """
    edge_set = set(edges)
    components = _components(n, edges)
    if components is None:
        raise ValueError(f"Edge set contains a cycle: {edges}")

    for a, b in combinations(range(1, n + 1), 2):
        if (a, b) in edge_set or components[a] != components[b]:
            continue
        path = _tree_path(edges, a, b)
        if path is not None and (a, b) < min(path):
            return (a, b), path
    return None


@dataclass(frozen=True)
class NbcForest:
    """A forest on the vertices 1..n containing no broken circuit.

    Edges are ordered lexicographically, which is also the order of the corresponding
    omega generators.
    """

    n: int
    edges: Tuple[Edge, ...]

    @functools.cached_property
    def representative(self) -> Dict[int, int]:
        components = _components(self.n, self.edges)
        if components is None:
            raise ValueError(f"Not a forest: {self.edges}")
        return components

    @property
    def representatives(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.representative.values())))

    @property
    def components(self) -> Tuple[Tuple[int, ...], ...]:
        groups: Dict[int, List[int]] = {}
        for vertex, root in sorted(self.representative.items()):
            groups.setdefault(root, []).append(vertex)
        return tuple(tuple(group) for _, group in sorted(groups.items()))

    @property
    def omegas(self) -> Monomial:
        return tuple(w(i, j) for i, j in self.edges)


def is_nbc(n: int, edges: Sequence[Edge]) -> bool:
    return _components(n, edges) is not None and find_broken_circuit(n, edges) is None


@functools.lru_cache(maxsize=None)
def enumerate_nbc_forests(n: int, q: int) -> Tuple[NbcForest, ...]:
    """All q-edge nbc forests on 1..n in lexicographic order of their edge sets.

    The number of such forests is the unsigned Stirling number c(n, n - q).
    """
    if q < 0 or q > n - 1:
        return ()
    all_edges = list(combinations(range(1, n + 1), 2))
    return tuple(
        NbcForest(n, edges)
        for edges in combinations(all_edges, q)
        if is_nbc(n, edges)
    )


@dataclass(frozen=True)
class BasisElement:
    forest: NbcForest
    exterior_part: Tuple[Generator, ...]

    @property
    def monomial(self) -> Monomial:
        return self.exterior_part + self.forest.omegas

    @property
    def bidegree(self) -> Tuple[int, int]:
        return (len(self.exterior_part), len(self.forest.edges))

    @property
    def weight(self) -> int:
        return sum(generator.weight for generator in self.exterior_part)

    def __str__(self) -> str:
        return format_monomial(self.monomial)


@dataclass(frozen=True)
class BidegreeBasis:
    """The canonical basis of one (p, q)-slice of a model.

    `elements` is always the basis of the ambient A-slice; `subspace` is the slice of
    the requested model inside it (the full space for A).
    """

    model: ModelId
    p: int
    q: int
    elements: Tuple[BasisElement, ...]
    subspace: SubspaceBasis

    @property
    def dim(self) -> int:
        return self.subspace.dim

    @property
    def ambient_dim(self) -> int:
        return len(self.elements)

    @property
    def vectors(self) -> Tuple[Vector, ...]:
        return self.subspace.vectors

    @functools.cached_property
    def index(self) -> Dict[Monomial, int]:
        return {element.monomial: i for i, element in enumerate(self.elements)}

    def weights(self) -> List[int]:
        return [element.weight for element in self.elements]

    def element_vector(self, vector: Mapping[int, Any]) -> MultiVector:
        """Expands A-coordinates into an element of the exterior algebra."""
        return MultiVector(
            self.model.n,
            {self.elements[i].monomial: value for i, value in vector.items()},
        )

    def to_payload(self) -> Dict[str, Any]:
        return {
            "model": self.model.kind,
            "n": self.model.n,
            "p": self.p,
            "q": self.q,
            "elements": [str(element) for element in self.elements],
            "subspace": subspace_to_payload(self.subspace),
        }

    @staticmethod
    def from_payload(payload: Dict[str, Any]) -> "BidegreeBasis":
        n = int(payload["n"])
        elements = []
        for text in payload["elements"]:
            monomial = parse_monomial(text)
            edges = tuple((g.i, g.j) for g in monomial if g.kind == "w")
            exterior = tuple(g for g in monomial if g.kind != "w")
            elements.append(BasisElement(NbcForest(n, edges), exterior))
        return BidegreeBasis(
            ModelId(payload["model"], n),
            int(payload["p"]),
            int(payload["q"]),
            tuple(elements),
            payload_to_subspace(payload["subspace"]),
        )


def _edge_sign(edges: Sequence[Edge]) -> int:
    """Koszul sign of sorting the omega-word of distinct `edges`."""
    sign, _ = sort_word([w(i, j) for i, j in edges])
    return sign


class KrizModel:
    """The Križ model for n points, with memoized normal forms and slices.

    Parameters:
        n: Number of points.
        storage: Optional disk cache for differential matrices and model slices.
        jobs: Number of processes for sweeps over independent slices.
    """

    def __init__(
        self, n: int, storage: Optional[Storage] = None, jobs: int = 1
    ) -> None:
        if n < 1:
            raise ValueError(f"Number of points must be positive, got {n}.")
        if jobs < 1:
            raise ValueError(f"Number of jobs must be positive, got {jobs}.")
        self.n = n
        self.storage = storage
        self.jobs = jobs
        self.d = differential(n)

        self._straightened: Dict[Tuple[Edge, ...], Dict[Tuple[Edge, ...], int]] = {}
        self._normal_monomials: Dict[Monomial, Dict[Monomial, int]] = {}
        self._bases: Dict[Tuple[int, int], BidegreeBasis] = {}
        self._slices: Dict[Tuple[str, int, int], SubspaceBasis] = {}
        self._differentials: Dict[Tuple[int, int], SparseRationalMatrix] = {}
        # Derived per-slice results (permutation matrices, cohomology, ...).
        self.memo: Dict[Tuple[Any, ...], Any] = {}

    def __repr__(self) -> str:
        return f"KrizModel(n={self.n})"

    def model_id(self, kind: str) -> ModelId:
        return ModelId(kind, self.n)

    def bidegrees(self, kind: str = "A") -> Iterator[Tuple[int, int]]:
        """All bidegrees where the model can be nonzero."""
        ModelId(kind, self.n)
        reduced = kind in ("B", "UB")
        for q in range(self.n):
            top = 2 * (self.n - q) - (2 if reduced else 0)
            for p in range(top + 1):
                yield (p, q)

    # Normal forms

    def _straighten(self, edges: Tuple[Edge, ...]) -> Dict[Tuple[Edge, ...], int]:
        """Writes the omega-monomial of an acyclic edge set in the nbc basis.

        A broken circuit C \\ {c_0} with C = {c_0 < c_1 < ... < c_m} is replaced using
        the relation sum_k (-1)^k e_{C \\ c_k} = 0.
        """
        if edges in self._straightened:
            return self._straightened[edges]

        broken = find_broken_circuit(self.n, edges)
        if broken is None:
            result = {edges: 1}
        else:
            closing, path = broken
            path_set = set(path)
            circuit = sorted(path + [closing])
            rest = [edge for edge in edges if edge not in path_set]
            sign = _edge_sign(sorted(path) + rest)

            result = {}
            for k in range(1, len(circuit)):
                word = circuit[:k] + circuit[k + 1 :] + rest
                factor = sign * (-1) ** (k + 1) * _edge_sign(word)
                for forest, value in self._straighten(tuple(sorted(word))).items():
                    result[forest] = result.get(forest, 0) + factor * value
            result = {forest: value for forest, value in result.items() if value}

        self._straightened[edges] = result
        return result

    def _normal_monomial(self, monomial: Monomial) -> Dict[Monomial, int]:
        if monomial in self._normal_monomials:
            return self._normal_monomials[monomial]

        letters = [generator for generator in monomial if generator.kind != "w"]
        edges = tuple((g.i, g.j) for g in monomial if g.kind == "w")
        components = _components(self.n, edges)

        result: Dict[Monomial, int] = {}
        if components is not None:
            # (x_i - x_j) w_ij = 0 moves every letter to its component representative.
            sign, collapsed = sort_word(
                [Generator(g.kind, components[g.i]) for g in letters]
            )
            if sign:
                for forest, value in self._straighten(edges).items():
                    omegas = tuple(w(i, j) for i, j in forest)
                    result[collapsed + omegas] = sign * value

        self._normal_monomials[monomial] = result
        return result

    def reduce(self, v: MultiVector) -> MultiVector:
        """Returns the normal form of `v`, supported on basis monomials."""
        self._check(v)
        terms: Dict[Monomial, Any] = {}
        for monomial, coefficient in v.terms.items():
            for target, value in self._normal_monomial(monomial).items():
                terms[target] = terms.get(target, QQ.zero) + value * coefficient
        return MultiVector(self.n, terms)

    def coordinates(self, v: MultiVector, p: int, q: int) -> Vector:
        """Coordinates of the class of `v` in the canonical basis of A^{p,q}.

        Raises:
            ValueError: If `v` is not homogeneous of bidegree (p, q).
        """
        self._check(v)
        degree = v.bidegree()
        if degree is not None and degree != (p, q):
            raise ValueError(f"Expected bidegree {(p, q)}, got {degree}.")

        index = self.a_basis(p, q).index
        vector: Vector = {}
        for monomial, coefficient in self.reduce(v).terms.items():
            vector[index[monomial]] = coefficient
        return vector

    def multiply(self, u: MultiVector, v: MultiVector) -> MultiVector:
        return self.reduce(mul(u, v))

    def apply_d(self, v: MultiVector) -> MultiVector:
        return self.reduce(apply_derivation(self.d, v))

    def normal_form(self, v: MultiVector, kind: str = "A") -> Vector:
        """Coordinates of `v` in the echelon basis of the requested model slice.

        Raises:
            ValueError: If `v` is inhomogeneous or does not lie in the model.
        """
        degree = v.bidegree()
        if degree is None:
            return {}
        vector = self.coordinates(v, *degree)
        if kind == "A":
            return vector
        return self.slice_space(kind, *degree).coordinates(vector)

    def _check(self, v: MultiVector) -> None:
        if v.n != self.n:
            raise ValueError(f"Ambient mismatch: model n={self.n}, element n={v.n}")

    # Slices

    def a_basis(self, p: int, q: int) -> BidegreeBasis:
        """The nbc basis of A^{p,q}; empty outside the valid range."""
        if (p, q) not in self._bases:
            elements = []
            if p >= 0:
                for forest in enumerate_nbc_forests(self.n, q):
                    letters = [
                        g for r in forest.representatives for g in (x(r), y(r))
                    ]
                    for part in combinations(letters, p):
                        elements.append(BasisElement(forest, part))
            self._bases[(p, q)] = BidegreeBasis(
                self.model_id("A"),
                p,
                q,
                tuple(elements),
                SubspaceBasis.full(len(elements)),
            )
        return self._bases[(p, q)]

    def basis(self, kind: str, p: int, q: int) -> BidegreeBasis:
        """The canonical basis of the (p, q)-slice of `kind`.

        Raises:
            ValueError: If `kind` is not a supported model.
        """
        model = self.model_id(kind)
        ambient = self.a_basis(p, q)
        if kind == "A":
            return ambient
        subspace = self.slice_space(kind, p, q)
        return BidegreeBasis(model, p, q, ambient.elements, subspace)

    def slice_space(self, kind: str, p: int, q: int) -> SubspaceBasis:
        """The (p, q)-slice of `kind` as a subspace of A^{p,q}."""
        self.model_id(kind)
        if kind == "A":
            return self.a_basis(p, q).subspace

        key = (kind, p, q)
        if key in self._slices:
            return self._slices[key]

        ambient_dim = self.a_basis(p, q).ambient_dim
        if ambient_dim == 0:
            return SubspaceBasis.zero(0)

        subspace = self._load_slice(kind, p, q)
        if subspace is None:
            if kind == "B":
                subspace = self._b_space(p, q)
            elif kind == "D":
                subspace = self._d_space(p, q)
            else:
                from kriz.equivariance import invariant_slice

                base = ModelId(kind, self.n).base
                subspace = invariant_slice(self, base, p, q).inclusion
            self._store_slice(kind, p, q, subspace)

        self._slices[key] = subspace
        return subspace

    def dimension(self, kind: str, p: int, q: int) -> int:
        return self.slice_space(kind, p, q).dim

    def letter(self, generator: Generator) -> MultiVector:
        return MultiVector.generator(generator, self.n)

    def _b_space(self, p: int, q: int) -> SubspaceBasis:
        ambient = self.a_basis(p, q)
        spanning = []
        for forest in enumerate_nbc_forests(self.n, q):
            e_forest = MultiVector.monomial(forest.omegas, self.n)
            # Under w_F the difference x_j - x_1 equals x_c - x_1 for the
            # representative c of j, so representatives suffice.
            differences = [
                self.letter(Generator(letter, r)) - self.letter(Generator(letter, 1))
                for r in forest.representatives
                if r != 1
                for letter in ("x", "y")
            ]
            for part in combinations(differences, p):
                element = e_forest
                for factor in reversed(part):
                    element = mul(factor, element)
                spanning.append(self.coordinates(element, p, q))
        return SubspaceBasis.span(ambient.ambient_dim, spanning)

    def _d_space(self, p: int, q: int) -> SubspaceBasis:
        ambient = self.a_basis(p, q)
        if q != 0 or not 0 <= p <= 2:
            return SubspaceBasis.zero(ambient.ambient_dim)
        gamma = self.letter_sum("x")
        gammabar = self.letter_sum("y")
        spanning = {
            0: [MultiVector.one(self.n)],
            1: [gamma, gammabar],
            2: [mul(gamma, gammabar)],
        }[p]
        return SubspaceBasis.span(
            ambient.ambient_dim,
            [self.coordinates(element, p, q) for element in spanning],
        )

    def letter_sum(self, kind: str) -> MultiVector:
        """Returns sum_i x_i (kind "x") or sum_i y_i (kind "y")."""
        total = MultiVector.zero(self.n)
        for i in range(1, self.n + 1):
            total = total + self.letter(Generator(kind, i))
        return total

    # Differentials

    def d_matrix(self, p: int, q: int) -> SparseRationalMatrix:
        """Matrix of d: A^{p,q} -> A^{p+2,q-1} in the canonical bases."""
        if (p, q) in self._differentials:
            return self._differentials[(p, q)]

        source = self.a_basis(p, q)
        target = self.a_basis(p + 2, q - 1)
        matrix = self._load_differential(p, q)
        if matrix is None:
            if q == 0:
                matrix = SparseRationalMatrix.zeros(
                    target.ambient_dim, source.ambient_dim
                )
            else:
                columns = [
                    self.coordinates(
                        apply_derivation(
                            self.d, MultiVector(self.n, {element.monomial: 1})
                        ),
                        p + 2,
                        q - 1,
                    )
                    for element in source.elements
                ]
                matrix = SparseRationalMatrix.from_columns(target.ambient_dim, columns)
            self._store_differential(p, q, matrix)

        self._differentials[(p, q)] = matrix
        return matrix

    def differential_matrix(self, kind: str, p: int, q: int) -> SparseRationalMatrix:
        """Matrix of d on the (p, q)-slice of `kind`, in the slices' echelon bases."""
        matrix = self.d_matrix(p, q)
        if kind == "A":
            return matrix
        return restrict_map(
            matrix,
            self.slice_space(kind, p, q),
            self.slice_space(kind, p + 2, q - 1),
        )

    # Oracle

    def oracle_quotient_dim(self, kind: str, p: int, q: int) -> int:
        """Dimension of A^{p,q} computed directly from the free algebra and relations.

        Raises:
            ValueError: For models other than A.
            ResourceGuardError: If the free slice has more than `MAX_FREE_SLICE`
                monomials.
        """
        if kind != "A":
            raise ValueError(f"The oracle computes A-slices only, got {kind}.")
        if p < 0 or q < 0:
            return 0

        letters = [g for g in generators(self.n) if g.kind != "w"]
        omegas = [g for g in generators(self.n) if g.kind == "w"]
        size = comb(len(letters), p) * comb(len(omegas), q)
        if size > MAX_FREE_SLICE:
            raise ResourceGuardError(
                f"Free slice ({p}, {q}) for n={self.n} has {size} monomials "
                f"(limit {MAX_FREE_SLICE})."
            )

        def free(p: int, q: int) -> List[Monomial]:
            if p < 0 or q < 0:
                return []
            return [
                a + b
                for a in combinations(letters, p)
                for b in combinations(omegas, q)
            ]

        monomials = free(p, q)
        index = {monomial: i for i, monomial in enumerate(monomials)}

        relations = []
        for i, j in combinations(range(1, self.n + 1), 2):
            omega = self.letter(w(i, j))
            for letter in (x, y):
                difference = self.letter(letter(i)) - self.letter(letter(j))
                relations.append((mul(difference, omega), (1, 1)))
        for i, j, k in combinations(range(1, self.n + 1), 3):
            wij = self.letter(w(i, j))
            wjk = self.letter(w(j, k))
            wik = self.letter(w(i, k))
            # w_ki = w_ik carries no sign.
            arnold = mul(wij, wjk) - mul(wij, wik) + mul(wjk, wik)
            relations.append((arnold, (0, 2)))

        generators_ = []
        for relation, (dp, dq) in relations:
            for monomial in free(p - dp, q - dq):
                product = mul(relation, MultiVector(self.n, {monomial: 1}))
                generators_.append(
                    {index[term]: value for term, value in product.terms.items()}
                )
        return quotient_dim(len(monomials), generators_)

    # Cache

    def _load_slice(self, kind: str, p: int, q: int) -> Optional[SubspaceBasis]:
        if self.storage is None:
            return None
        payload = self.storage.get(self.storage.key("basis", kind, self.n, p, q))
        if payload is None:
            return None
        return BidegreeBasis.from_payload(payload).subspace

    def _store_slice(self, kind: str, p: int, q: int, subspace: SubspaceBasis) -> None:
        if self.storage is None:
            return
        basis = BidegreeBasis(
            self.model_id(kind), p, q, self.a_basis(p, q).elements, subspace
        )
        self.storage.add(
            self.storage.key("basis", kind, self.n, p, q), basis.to_payload()
        )

    def _load_differential(self, p: int, q: int) -> Optional[SparseRationalMatrix]:
        if self.storage is None:
            return None
        payload = self.storage.get(self.storage.key("differential", "A", self.n, p, q))
        return None if payload is None else payload_to_matrix(payload)

    def _store_differential(self, p: int, q: int, matrix: SparseRationalMatrix) -> None:
        if self.storage is not None:
            self.storage.add(
                self.storage.key("differential", "A", self.n, p, q),
                matrix_to_payload(matrix),
            )


@functools.lru_cache(maxsize=None)
def get_model(n: int) -> KrizModel:
    """Returns a shared in-memory model for n points."""
    return KrizModel(n)


def basis(model: ModelId, p: int, q: int) -> BidegreeBasis:
    return get_model(model.n).basis(model.kind, p, q)


def normal_form(v: MultiVector, model: ModelId) -> Vector:
    return get_model(model.n).normal_form(v, model.kind)


def differential_matrix(model: ModelId, p: int, q: int) -> SparseRationalMatrix:
    return get_model(model.n).differential_matrix(model.kind, p, q)


def oracle_quotient_dim(model: ModelId, p: int, q: int) -> int:
    return get_model(model.n).oracle_quotient_dim(model.kind, p, q)
