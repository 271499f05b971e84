"""Cohomology of the models and its Betti and Hodge polynomials.

A (p, q) class has degree p + q and weight p + 2q. Slices are computed in A-coordinates:
cocycles are the kernel of d restricted to the model slice, coboundaries the image of
the previous slice.
"""

import tempfile
from contextlib import ExitStack
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Dict, Iterable, Mapping, NamedTuple, Optional, Tuple

import sympy
from sympy import Poly

from kriz.equivariance import (
    IrrepMultiplicities,
    WeightDecomposition,
    irrep_multiplicities,
    weight_decomposition,
)
from kriz.exactla import (
    SparseRationalMatrix,
    SubspaceBasis,
    Vector,
    reduce,
    subspace_intersection,
)
from kriz.model import KrizModel, ModelId
from kriz.storage import Storage
from kriz.utils import progress

SPACES = {"conf": "A", "uconf": "UA", "m": "B", "um": "UB"}
COHOMOLOGY_MODELS = ("A", "B", "UA", "UB")

t, u, v = sympy.symbols("t u v")


@dataclass(frozen=True)
class CohomologySlice:
    model: ModelId
    p: int
    q: int
    dim: int
    representatives: Tuple[Vector, ...]
    coboundary_space: SubspaceBasis
    cocycle_space: SubspaceBasis
    weights: WeightDecomposition

    @property
    def degree(self) -> int:
        return self.p + self.q

    @property
    def weight(self) -> int:
        return self.p + 2 * self.q

    @property
    def irreps(self) -> IrrepMultiplicities:
        return irrep_multiplicities(self.weights)


def _image_of(model: KrizModel, kind: str, p: int, q: int) -> SubspaceBasis:
    """The coboundaries d(M^{p-2,q+1}) inside A^{p,q}."""
    ambient = model.a_basis(p, q).ambient_dim
    if p < 2 or q + 1 > model.n - 1:
        return SubspaceBasis.zero(ambient)
    incoming = model.d_matrix(p - 2, q + 1)
    source = model.slice_space(kind, p - 2, q + 1)
    images = [incoming.apply(vector) for vector in source.vectors]
    return SubspaceBasis.span(ambient, images)


def cohomology_slice(model: KrizModel, kind: str, p: int, q: int) -> CohomologySlice:
    """Cohomology of the (p, q)-slice of A, B, UA or UB.

    Representatives are the echelon basis of the cocycles reduced modulo the echelon
    basis of the coboundaries.
    """
    if kind not in COHOMOLOGY_MODELS:
        raise ValueError(f"Cohomology is computed for {COHOMOLOGY_MODELS}, got {kind}.")

    key = ("cohomology", kind, p, q)
    if key in model.memo:
        return model.memo[key]

    basis = model.a_basis(p, q)
    space = model.slice_space(kind, p, q)

    outgoing = model.d_matrix(p, q)
    images = [outgoing.apply(vector) for vector in space.vectors]
    relations = reduce(SparseRationalMatrix.from_columns(outgoing.rows, images)).kernel
    cocycles = SubspaceBasis.span(
        basis.ambient_dim, [space.lift(vector) for vector in relations.vectors]
    )
    coboundaries = _image_of(model, kind, p, q)

    residues = [coboundaries.residue(vector) for vector in cocycles.vectors]
    representatives = SubspaceBasis.span(basis.ambient_dim, residues).vectors

    weights = basis.weights()
    result = CohomologySlice(
        model.model_id(kind),
        p,
        q,
        cocycles.dim - coboundaries.dim,
        representatives,
        coboundaries,
        cocycles,
        weight_decomposition(cocycles, weights)
        - weight_decomposition(coboundaries, weights),
    )
    if len(representatives) != result.dim:
        raise ArithmeticError(f"Coboundaries of {kind}^{p},{q} are not cocycles.")

    model.memo[key] = result
    return result


SliceTask = Tuple[str, int, int]

# Per-process model of a worker pool, built by `_init_worker`.
_worker_model: Optional[KrizModel] = None


def _init_worker(n: int, storage: Optional[Storage]) -> None:
    global _worker_model
    _worker_model = KrizModel(n, storage)


def _slice_task(task: SliceTask) -> Tuple[SliceTask, CohomologySlice]:
    assert _worker_model is not None
    kind, p, q = task
    return task, cohomology_slice(_worker_model, kind, p, q)


def compute_slices(model: KrizModel, tasks: Iterable[SliceTask]) -> None:
    """Computes the cohomology slices `tasks` into the memo of `model`.

    With `model.jobs > 1` the slices are computed on a pool of processes. Each worker
    keeps its own model and shares differentials and model slices with the others
    through the disk cache of `model`, or through a temporary one.
    """
    pending = []
    for kind, p, q in tasks:
        if kind not in COHOMOLOGY_MODELS:
            raise ValueError(
                f"Cohomology is computed for {COHOMOLOGY_MODELS}, got {kind}."
            )
        if ("cohomology", kind, p, q) not in model.memo:
            pending.append((kind, p, q))
    description = f"H({','.join(sorted({task[0] for task in pending}))}), n={model.n}"

    if model.jobs == 1 or len(pending) < 2:
        for kind, p, q in progress(pending, description):
            cohomology_slice(model, kind, p, q)
        return

    workers = min(model.jobs, len(pending))
    with ExitStack() as stack:
        storage = model.storage
        if storage is None or not storage.enabled:
            # Workers exchange differentials and slices through a scratch cache.
            storage = Storage(stack.enter_context(tempfile.TemporaryDirectory()))
        pool = stack.enter_context(Pool(workers, _init_worker, (model.n, storage)))
        results = pool.imap_unordered(_slice_task, pending)
        for (kind, p, q), result in progress(results, description, len(pending)):
            model.memo[("cohomology", kind, p, q)] = result


def cohomology_slices(
    model: KrizModel, kind: str
) -> Dict[Tuple[int, int], CohomologySlice]:
    bidegrees = list(model.bidegrees(kind))
    compute_slices(model, [(kind, p, q) for p, q in bidegrees])
    return {(p, q): cohomology_slice(model, kind, p, q) for p, q in bidegrees}


def transferred_dimension(model: KrizModel, p: int, q: int) -> int:
    """Dimension of the S_n-invariant part of H^{p,q}(A), computed inside A."""
    full = cohomology_slice(model, "A", p, q)
    invariants = model.slice_space("UA", p, q)
    return (
        subspace_intersection(full.cocycle_space, invariants).dim
        - subspace_intersection(full.coboundary_space, invariants).dim
    )


def euler_characteristic(model: KrizModel, kind: str = "A") -> int:
    return sum(
        (-1) ** (p + q) * model.dimension(kind, p, q) for p, q in model.bidegrees(kind)
    )


@dataclass(frozen=True)
class HodgePoly:
    """Coefficients keyed by (degree, weight), i.e. the polynomial sum c u^i v^k."""

    coeffs: Mapping[Tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {key: value for key, value in sorted(self.coeffs.items()) if value}
        object.__setattr__(self, "coeffs", cleaned)

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    def as_poly(self) -> Poly:
        expression = sum(
            (c * u**i * v**k for (i, k), c in self.coeffs.items()), sympy.Integer(0)
        )
        return Poly(expression, u, v)

    @staticmethod
    def from_poly(poly: Poly) -> "HodgePoly":
        poly = Poly(poly, u, v)
        return HodgePoly({monom: int(c) for monom, c in poly.terms()})

    def betti(self) -> Poly:
        expression = sum(
            (c * t**i for (i, _), c in self.coeffs.items()), sympy.Integer(0)
        )
        return Poly(expression, t)

    def __str__(self) -> str:
        return str(self.as_poly().as_expr()) if self.coeffs else "0"


@dataclass(frozen=True)
class GrothHodgePoly:
    """Hodge polynomial with coefficients in the representation ring of SL2."""

    coeffs: Mapping[Tuple[int, int], IrrepMultiplicities] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {
            key: value
            for key, value in sorted(self.coeffs.items())
            if not value.is_zero()
        }
        object.__setattr__(self, "coeffs", cleaned)

    def __hash__(self) -> int:
        return hash(tuple(self.coeffs.items()))

    def dimensions(self) -> HodgePoly:
        return HodgePoly({key: value.dimension for key, value in self.coeffs.items()})

    def __add__(self, other: "GrothHodgePoly") -> "GrothHodgePoly":
        coeffs = dict(self.coeffs)
        for key, value in other.coeffs.items():
            coeffs[key] = coeffs.get(key, IrrepMultiplicities()) + value
        return GrothHodgePoly(coeffs)

    def __mul__(self, other: "GrothHodgePoly") -> "GrothHodgePoly":
        coeffs: Dict[Tuple[int, int], IrrepMultiplicities] = {}
        for (i, k), a in self.coeffs.items():
            for (j, l), b in other.coeffs.items():
                key = (i + j, k + l)
                coeffs[key] = coeffs.get(key, IrrepMultiplicities()) + a * b
        return GrothHodgePoly(coeffs)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for (i, k), value in self.coeffs.items():
            monomial = _monomial_text(i, k)
            content = str(value)
            if "+" in content or (monomial and not content.startswith("[")):
                content = f"({content})"
            terms.append(content + monomial)
        return " + ".join(terms)


def _monomial_text(i: int, k: int) -> str:
    def power(symbol: str, exponent: int) -> str:
        if exponent == 0:
            return ""
        return symbol if exponent == 1 else f"{symbol}^{exponent}"

    return power("u", i) + power("v", k)


def betti_polynomial(model: KrizModel, space: str) -> Poly:
    """Poincaré polynomial of conf (A), uconf (UA), m (B) or um (UB)."""
    return hodge_polynomial(model, space).betti()


def hodge_polynomial(model: KrizModel, space: str, grothendieck: bool = False):
    """Hodge polynomial sum dim Gr^W_k H^i u^i v^k, or its SL2-refinement.

    Returns:
        A `HodgePoly`, or a `GrothHodgePoly` if `grothendieck` is set.
    """
    kind = _kind(space)
    slices = cohomology_slices(model, kind)
    if grothendieck:
        return GrothHodgePoly(
            {(s.degree, s.weight): s.irreps for s in slices.values() if s.dim}
        )
    return HodgePoly({(s.degree, s.weight): s.dim for s in slices.values() if s.dim})


def _kind(space: str) -> str:
    if space not in SPACES:
        raise ValueError(f"Unknown space {space!r}, expected one of {list(SPACES)}.")
    return SPACES[space]


@dataclass(frozen=True)
class TruncatedSeries:
    """T_n(u, v): the series (1 + u^3 v^4) / (1 - u^2 v^3)^2 up to u-degree n."""

    n: int
    coeffs: Mapping[Tuple[int, int], int]

    def as_poly(self) -> Poly:
        return HodgePoly(self.coeffs).as_poly()

    def at_v_one(self) -> Poly:
        return HodgePoly(self.coeffs).betti()


def truncated_series(n: int) -> TruncatedSeries:
    if n < 0:
        return TruncatedSeries(n, {})
    expression = (1 + u**3 * v**4) / (1 - u**2 * v**3) ** 2
    truncated = sympy.series(expression, u, 0, n + 1).removeO()
    poly = Poly(sympy.expand(truncated), u, v)
    return TruncatedSeries(n, {monom: int(c) for monom, c in poly.terms()})


def kunneth_factor() -> GrothHodgePoly:
    """[V0] + [V1]uv + [V0]u^2v^2, the cohomology of the elliptic curve."""
    return GrothHodgePoly(
        {
            (0, 0): IrrepMultiplicities.irrep(0),
            (1, 1): IrrepMultiplicities.irrep(1),
            (2, 2): IrrepMultiplicities.irrep(0),
        }
    )


def reduced_groth_closed_form(n: int) -> GrothHodgePoly:
    """Closed form of the Grothendieck-Hodge polynomial of H(UB).

    sum_{i <= (n-1)/2} [V_i] u^{2i} v^{3i}
    + sum_{1 <= i <= n/2 - 1} [V_{i-1}] u^{2i+1} v^{3i+1}
    """
    coeffs = {}
    for i in range((n - 1) // 2 + 1):
        coeffs[(2 * i, 3 * i)] = IrrepMultiplicities.irrep(i)
    for i in range(1, n // 2):
        coeffs[(2 * i + 1, 3 * i + 1)] = IrrepMultiplicities.irrep(i - 1)
    return GrothHodgePoly(coeffs)


class ClosedForm(NamedTuple):
    betti: Poly
    hodge: Poly
    groth: GrothHodgePoly


def closed_form(space: str, n: int) -> ClosedForm:
    """Closed forms of the unordered spaces: um has Hodge polynomial T_{n-1}(u, v) and
    uconf has (1 + uv)^2 T_{n-1}(u, v).

    Raises:
        ValueError: For the ordered spaces, which have no closed form.
    """
    kind = _kind(space)
    if kind not in ("UA", "UB"):
        raise ValueError(f"No closed form for {space}.")

    series = truncated_series(n - 1)
    hodge = series.as_poly()
    betti = series.at_v_one()
    groth = reduced_groth_closed_form(n)
    if kind == "UA":
        hodge = hodge * Poly((1 + u * v) ** 2, u, v)
        betti = betti * Poly((1 + t) ** 2, t)
        groth = kunneth_factor() * groth
    return ClosedForm(betti, hodge, groth)


def format_betti(poly: Poly) -> str:
    """Formats a Betti polynomial as `1 + 2t + 3t^2`."""
    terms = []
    for (degree,), coefficient in sorted(Poly(poly, t).terms()):
        coefficient = int(coefficient)
        if degree == 0:
            terms.append(str(coefficient))
            continue
        power = "t" if degree == 1 else f"t^{degree}"
        terms.append(power if coefficient == 1 else f"{coefficient}{power}")
    return " + ".join(terms) if terms else "0"
