"""Verification suites.

Every check records a name, an anchor naming the mathematical statement it verifies,
its status and free-form details. A report passes iff all of its checks pass.
"""

from dataclasses import dataclass, field
from math import comb
from typing import Any, Callable, Dict, List, Tuple

from sympy import Poly
from sympy.functions.combinatorial.numbers import stirling

from kriz import classes, cohomology, partitions
from kriz.equivariance import (
    DEFAULT_MAX_N,
    LARGE_MAX_N,
    operator_matrix,
    permutation_matrix,
    pi_a_injectivity,
    reynolds_dimension,
    sl2_operator,
    slice_weights,
    symmetric_generators,
)
from kriz.model import KrizModel, ResourceGuardError
from kriz.utils import progress

SUITES = ("dims", "reps", "cohomology", "classes", "ring", "formality")
ORACLE_MAX_N = 5
TRACE_MAX_N = 6
KUNNETH_MAX_N = 5
TRANSFER_MAX_N = 4
DETERMINANT_MAX_Q = 7

CLOSED = "the class is a cocycle"


@dataclass(frozen=True)
class Check:
    name: str
    anchor: str
    passed: bool
    details: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "status": "pass" if self.passed else "fail",
            "details": self.details,
        }


@dataclass
class VerificationReport:
    n: int
    suite: str
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(self, name: str, anchor: str, passed: bool, details: str = "") -> None:
        self.checks.append(Check(name, anchor, bool(passed), details))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "suite": self.suite,
            "status": "pass" if self.passed else "fail",
            "checks": [check.to_dict() for check in self.checks],
        }


def check_limits(n: int, allow_large: bool = False, large_ok: bool = False) -> None:
    """Raises ResourceGuardError if n is beyond the limit for the requested work.

    n <= 6 is always allowed; n = 7 only with `allow_large` for work restricted to
    UB and the named classes (`large_ok`).
    """
    if n <= DEFAULT_MAX_N:
        return
    if allow_large and large_ok and n <= LARGE_MAX_N:
        return
    limit = LARGE_MAX_N if allow_large and large_ok else DEFAULT_MAX_N
    raise ResourceGuardError(f"n={n} exceeds the limit n <= {limit}.")


# dims


def _dims(model: KrizModel, report: VerificationReport) -> None:
    n = model.n
    bidegrees = list(model.bidegrees("A"))
    for p, q in progress(bidegrees, f"dims, n={n}"):
        slice_id = f"({p},{q})"
        dim_a = model.dimension("A", p, q)

        expected = int(stirling(n, n - q, kind=1, signed=False)) * comb(2 * (n - q), p)
        report.add(
            f"nbc basis / count {slice_id}",
            "dim A^{p,q} = c(n, n-q) C(2(n-q), p)",
            dim_a == expected,
            f"{dim_a} vs {expected}",
        )
        if n <= ORACLE_MAX_N:
            oracle = model.oracle_quotient_dim("A", p, q)
            report.add(
                f"nbc basis / free-algebra oracle {slice_id}",
                "nbc basis spans the quotient of the free algebra by the relations",
                dim_a == oracle,
                f"{dim_a} vs {oracle}",
            )

        induced = partitions.slice_dimension_oracle(n, p, q)
        report.add(
            f"marked partition decomposition / dimension {slice_id}",
            "dim A^{p,q} = sum of n!/|Z| over marked partitions",
            dim_a == induced,
            f"{dim_a} vs {induced}",
        )

        invariants = model.dimension("UA", p, q)
        trivial = partitions.invariant_dimension_oracle(n, p, q)
        report.add(
            f"marked partition decomposition / invariants {slice_id}",
            "dim UA^{p,q} = number of marked partitions with trivial character",
            invariants == trivial,
            f"{invariants} vs {trivial}",
        )
        if n <= TRACE_MAX_N:
            averaged = reynolds_dimension(model, "A", p, q)
            report.add(
                f"invariants / trace average {slice_id}",
                "dim UA^{p,q} = average trace of the permutation matrices",
                invariants == averaged,
                f"{invariants} vs {averaged}",
            )

        if q > p + 1:
            dim_ub = model.dimension("UB", p, q) if p <= 2 * (n - q) - 2 else 0
            report.add(
                f"weight decomposition / invariant vanishing {slice_id}",
                "UA^{p,q} = UB^{p,q} = 0 for q > p + 1",
                invariants == 0 and dim_ub == 0,
                f"UA {invariants}, UB {dim_ub}",
            )

        split = sum(comb(2, j) * model.dimension("B", p - j, q) for j in range(3))
        report.add(
            f"translation splitting / dimension {slice_id}",
            "A = B ⊗ D, so dim A^{p,q} = sum_j C(2, j) dim B^{p-j,q}",
            dim_a == split,
            f"{dim_a} vs {split}",
        )

        weights = slice_weights(model, "A", p, q)
        combinatorial = {
            a: partitions.weight_dimension_oracle(n, p, q, a) for a in range(-p, p + 1)
        }
        report.add(
            f"weight decomposition / weights {slice_id}",
            "weight-a part of A^{p,q} = sum over marked partitions with ||H|| = a",
            all(weights[a] == value for a, value in combinatorial.items()),
            f"{dict(weights.dims)}",
        )


# reps


def _reps(model: KrizModel, report: VerificationReport) -> None:
    n = model.n
    e, f, h = (sl2_operator(name, n) for name in ("e", "f", "h"))
    bidegrees = list(model.bidegrees("A"))
    for p, q in progress(bidegrees, f"reps, n={n}"):
        slice_id = f"({p},{q})"
        d = model.d_matrix(p, q)

        if q >= 1:
            dd = model.d_matrix(p + 2, q - 1) @ d
            report.add(f"differential / d∘d {slice_id}", "d∘d = 0", dd.is_zero())

            equivariant = all(
                (
                    permutation_matrix(model, sigma, "A", p + 2, q - 1) @ d
                    - d @ permutation_matrix(model, sigma, "A", p, q)
                ).is_zero()
                for sigma in symmetric_generators(n)
            )
            report.add(
                f"differential / S_n-equivariance {slice_id}",
                "d commutes with S_n",
                equivariant,
            )

            commutes = all(
                (
                    operator_matrix(model, op, "A", p + 2, q - 1) @ d
                    - d @ operator_matrix(model, op, "A", p, q)
                ).is_zero()
                for op in (e, f)
            )
            report.add(
                f"differential / sl2-equivariance {slice_id}",
                "d commutes with e and f",
                commutes,
            )

        E = operator_matrix(model, e, "A", p, q)
        F = operator_matrix(model, f, "A", p, q)
        H = operator_matrix(model, h, "A", p, q)
        relations = (
            (E @ F - F @ E - H).is_zero()
            and (H @ E - E @ H - E.scale(2)).is_zero()
            and (H @ F - F @ H + F.scale(2)).is_zero()
        )
        report.add(
            f"sl2 action / relations {slice_id}",
            "[e, f] = h, [h, e] = 2e, [h, f] = -2f",
            relations,
        )

        for a in range(0, p - 1):
            result = pi_a_injectivity(model, p, q, a)
            report.add(
                f"weight decomposition / pi_{a} injectivity {slice_id}",
                "p_a ∘ Y is injective from weight a + 2 to weight a",
                result.injective,
                f"rank {result.rank} of {result.source_dim}",
            )


# cohomology


def _cohomology(model: KrizModel, report: VerificationReport) -> None:
    n = model.n
    kinds = ("A", "UA", "UB") + (("B",) if n <= KUNNETH_MAX_N else ())
    cohomology.compute_slices(
        model, [(kind, p, q) for kind in kinds for p, q in model.bidegrees(kind)]
    )

    for space in ("uconf", "um"):
        expected = cohomology.closed_form(space, n)
        hodge = cohomology.hodge_polynomial(model, space)
        groth = cohomology.hodge_polynomial(model, space, grothendieck=True)
        betti = hodge.betti()
        report.add(
            f"Poincaré polynomial / betti {space}",
            "Poincaré polynomial equals the truncated series closed form",
            betti == expected.betti,
            cohomology.format_betti(betti),
        )
        report.add(
            f"mixed Hodge polynomial / ordinary Hodge polynomial {space}",
            "Hodge polynomial equals the truncated series closed form",
            hodge == cohomology.HodgePoly.from_poly(expected.hodge),
            str(hodge),
        )
        report.add(
            f"mixed Hodge polynomial / Grothendieck ring {space}",
            "SL2-refined Hodge polynomial equals the representation-ring closed form",
            groth == expected.groth,
            str(groth),
        )
        report.add(
            f"mixed Hodge polynomial / dimensions {space}",
            "forgetting irreps recovers the Hodge polynomial",
            groth.dimensions() == hodge,
        )

    euler = cohomology.euler_characteristic(model, "A")
    betti_conf = cohomology.betti_polynomial(model, "conf")
    alternating = sum(
        (-1) ** degree * int(c) for (degree,), c in betti_conf.terms()
    )
    report.add(
        "Euler characteristic / alternating sums",
        "alternating sum of slice dimensions equals alternating sum of Betti numbers",
        euler == alternating,
        f"{euler} vs {alternating}",
    )

    if n <= KUNNETH_MAX_N:
        betti_m = cohomology.betti_polynomial(model, "m")
        product = betti_m * Poly((1 + cohomology.t) ** 2, cohomology.t)
        report.add(
            "Künneth / betti",
            "betti(conf) = betti(m) (1 + t)^2",
            betti_conf == product,
            cohomology.format_betti(betti_conf),
        )
        groth_conf = cohomology.hodge_polynomial(model, "conf", grothendieck=True)
        groth_m = cohomology.hodge_polynomial(model, "m", grothendieck=True)
        report.add(
            "Künneth / Grothendieck ring",
            "H(conf) = H(E) ⊗ H(m) as SL2-graded spaces",
            groth_conf == cohomology.kunneth_factor() * groth_m,
        )

    if n <= TRANSFER_MAX_N:
        consistent = all(
            cohomology.cohomology_slice(model, "UA", p, q).dim
            == cohomology.transferred_dimension(model, p, q)
            for p, q in model.bidegrees("A")
        )
        report.add(
            "transfer / invariants of H(A)",
            "H(UA) equals the S_n-invariants of H(A)",
            consistent,
        )


# classes


def _classes(model: KrizModel, report: VerificationReport) -> None:
    n = model.n
    for name in classes.CLASS_NAMES:
        if n < classes.MINIMUM_N[name]:
            continue
        try:
            named = classes.build_class(model, name)
        except classes.CocycleError as error:
            report.add(f"named classes / closed {name}", CLOSED, False, str(error))
            continue
        report.add(f"named classes / closed {name}", CLOSED, True)
        report.add(
            f"named classes / invariant {name}",
            "the class is fixed by the symmetric group",
            classes.is_invariant(model, named.value),
        )

    if n >= classes.MINIMUM_N["alpha"]:
        report.add(
            "named classes / lowering alpha",
            "f(alpha) = alphabar",
            classes.lowering_matches(model),
        )
        nonvanishing = classes.verify_power_nonvanishing(model)
        for q, alive in nonvanishing.alpha_powers.items():
            report.add(
                f"nonvanishing / alpha^{q}",
                "alpha^q is a nonzero class in H(UB) for n > 2q",
                alive,
            )
        for q, alive in nonvanishing.alpha_power_beta.items():
            report.add(
                f"nonvanishing / alpha^{q - 1} beta",
                "alpha^{q-1} beta is a nonzero class in H(UB) for n > 2q + 1",
                alive,
            )
        for coefficient in nonvanishing.coefficients:
            anchor = {
                "a": "coefficient of x1w12...x(2q-1)w(2q-1,2q) in alpha^q "
                "is (-1)^q q! n^(q-1) (n-2q)",
                "b": "coefficient of the matching word in alpha^(q-1) beta "
                "is 2(-1)^q q! n^(q-1) (n-2q-1)",
            }[coefficient.name]
            report.add(
                f"leading coefficients / {coefficient.name}_{coefficient.q}",
                anchor,
                coefficient.matches,
                f"{coefficient.computed} vs {coefficient.expected}",
            )

    if n >= classes.MINIMUM_N["beta"]:
        line = cohomology.cohomology_slice(model, "UB", 2, 1).weights
        report.add(
            "mixed Hodge polynomial / beta line",
            "H^{2,1}(UB) is the trivial representation spanned by beta",
            dict(line.dims) == {0: 1},
            str(dict(line.dims)),
        )

    for q in range(1, DETERMINANT_MAX_Q + 1):
        report.add(
            f"determinant identity / q={q}",
            "sum_sigma sgn(sigma) t^fix(sigma) = (t-1)^(q-1) (t+q-1)",
            classes.verify_determinant_identity(q),
        )


# ring


def _ring(model: KrizModel, report: VerificationReport) -> None:
    n = model.n
    if n < classes.MINIMUM_N["beta"]:
        groth = cohomology.hodge_polynomial(model, "um", grothendieck=True)
        report.add(
            "ring presentation / small n",
            "H(UB) matches the representation-ring closed form directly",
            groth == cohomology.closed_form("um", n).groth,
            str(groth),
        )
        return

    anchor = (
        "H(UB) = S(V1)[b] / (a^m, a^e b, b^2), "
        "m = floor((n+1)/2), e = floor(n/2) - 1"
    )
    try:
        presentation = classes.verify_presentation(model)
    except classes.PresentationMismatchError as error:
        report.add("ring presentation / exponents", anchor, False, str(error))
    else:
        report.add(
            "ring presentation / exponents",
            anchor,
            presentation.stated_exponent_matches,
            f"matching exponents {list(presentation.matching)}, "
            f"e = {classes.relation_exponent(n)}, "
            f"floor(n/2) matches: {presentation.half_exponent_matches}",
        )
        report.add(
            "ring presentation / multiplicative",
            "alpha^i and alpha^(i-1) beta vanish exactly where the quotient does",
            presentation.multiplicative,
        )

    generation = classes.verify_generation(model)
    report.add(
        "generation / degrees 1 to 3",
        "H(UA) is generated by alpha, alphabar, beta, gamma, gammabar",
        generation.passed,
        ", ".join(
            f"({s.p},{s.q}): {s.spanned}/{s.expected}" for s in generation.slices
        ),
    )


# formality


def _formality(model: KrizModel, report: VerificationReport) -> None:
    if model.n < classes.MINIMUM_N["beta"]:
        return
    result = classes.verify_formality(model)
    report.add(
        "formality / K ∩ Im d",
        "the subalgebra generated by alpha, alphabar, beta meets Im d trivially",
        not any(result.intersections.values()),
    )
    report.add(
        "formality / dim K",
        "dim K^{p,q} = dim H^{p,q}(UB)",
        all(item.passed for item in result.dimensions),
        ", ".join(
            f"({s.p},{s.q}): {s.spanned}/{s.expected}"
            for s in result.dimensions
            if s.expected
        ),
    )
    report.add(
        "formality / K closed", "every element of K is a cocycle", result.cocycles
    )
    report.add(
        "formality / K support",
        "K is concentrated in bidegrees (i, i) and (i + 1, i)",
        all(p - q in (0, 1) for p, q in result.support),
        str(list(result.support)),
    )


RUNNERS: Dict[str, Callable[[KrizModel, VerificationReport], None]] = {
    "dims": _dims,
    "reps": _reps,
    "cohomology": _cohomology,
    "classes": _classes,
    "ring": _ring,
    "formality": _formality,
}


def verify(
    model: KrizModel, suite: str = "all", allow_large: bool = False
) -> VerificationReport:
    """Runs one suite, or all of them, for the given model.

    Raises:
        ValueError: For unknown suites.
        ResourceGuardError: If n is beyond the limit for the suite.
    """
    if suite != "all" and suite not in RUNNERS:
        raise ValueError(f"Unknown suite {suite!r}, expected all or one of {SUITES}.")
    check_limits(model.n, allow_large, large_ok=suite == "classes")

    report = VerificationReport(model.n, suite)
    names: Tuple[str, ...] = SUITES if suite == "all" else (suite,)
    for name in names:
        RUNNERS[name](model, report)
    return report
