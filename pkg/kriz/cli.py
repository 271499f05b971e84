"""Kriz command line interface."""

import functools
import os
import sys
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import click

import kriz
from kriz import classes, cohomology, partitions
from kriz.equivariance import irrep_multiplicities, slice_weights
from kriz.exactla import format_rational
from kriz.formats import FORMATS, Output, hodge_grid, render
from kriz.model import KrizModel, ResourceGuardError
from kriz.storage import Storage
from kriz.utils import set_quiet
from kriz.verify import SUITES, check_limits, verify

EXIT_FAILURE = 1
EXIT_RESOURCE_GUARD = 3

# Without --jobs, smaller models run in a single process.
PARALLEL_MIN_N = 5


def common_options(function: Callable) -> Callable:
    @click.option(
        "--format", "fmt", type=click.Choice(FORMATS), default="text",
        help="Output format.",
    )
    @click.option(
        "--cache-dir",
        type=click.Path(file_okay=False, path_type=Path),
        envvar="KRIZ_CACHE",
        help="Directory for cached slices and differentials (default: $KRIZ_CACHE).",
    )
    @click.option("--quiet", is_flag=True, help="Hide progress bars.")
    @functools.wraps(function)
    def wrapper(*args: Any, quiet: bool, **kwargs: Any) -> Any:
        set_quiet(quiet)
        try:
            return function(*args, **kwargs)
        except ResourceGuardError as error:
            click.echo(f"Error: {error}", err=True)
            sys.exit(EXIT_RESOURCE_GUARD)

    return wrapper


def n_option(function: Callable) -> Callable:
    return click.option(
        "--n", "n", type=click.IntRange(min=1), required=True, help="Number of points."
    )(function)


def bidegree_options(function: Callable) -> Callable:
    function = click.option("--q", "q", type=click.IntRange(min=0), required=True)(
        function
    )
    return click.option("--p", "p", type=click.IntRange(min=0), required=True)(function)


def large_option(function: Callable) -> Callable:
    return click.option(
        "--allow-large",
        is_flag=True,
        help="Permit n = 7 for computations restricted to UB and the named classes.",
    )(function)


def jobs_option(function: Callable) -> Callable:
    return click.option(
        "--jobs",
        type=click.IntRange(min=1),
        envvar="KRIZ_JOBS",
        help=(
            "Processes for independent slices (default: $KRIZ_JOBS, or all CPUs "
            f"for n >= {PARALLEL_MIN_N})."
        ),
    )(function)


def open_model(
    n: int, cache_dir: Optional[Path], jobs: Optional[int] = None
) -> KrizModel:
    storage = Storage.init(cache_dir) if cache_dir is not None else None
    if jobs is None:
        jobs = (os.cpu_count() or 1) if n >= PARALLEL_MIN_N else 1
    return KrizModel(n, storage, jobs)


def emit(output: Output, fmt: str) -> None:
    click.echo(render(output, fmt))


def irreps_payload(value: Any) -> Dict[str, int]:
    return {f"V{k}": m for k, m in value.mult.items()}


@click.group(
    help=(
        "Exact cohomology of configuration spaces of points on an elliptic curve. Use "
        "`kriz <command> --help` for more information about the individual commands."
    )
)
@click.version_option(kriz.__version__, message="%(version)s")
def cli() -> None:
    pass


@cli.command()
@n_option
@click.option(
    "--model", "model_kind", type=click.Choice(["a", "b", "d", "ua", "ub"]), default="a"
)
@bidegree_options
@click.option(
    "--oracle", is_flag=True, help="Cross-check against the brute-force quotient."
)
@common_options
def basis(
    n: int, model_kind: str, p: int, q: int, oracle: bool, fmt: str, cache_dir: Path
) -> None:
    """Lists the canonical basis of a model slice.

    For A the basis elements are nbc monomials; for the other models the listed
    elements are the echelon basis of the slice inside A. For example:

    \b
    ```
    $ kriz basis --n 2 --p 1 --q 1
    dim A^{1,1} (n=2) = 2
    x1*w1_2
    y1*w1_2
    ```
    """
    check_limits(n)
    kind = model_kind.upper()
    model = open_model(n, cache_dir)
    result = model.basis(kind, p, q)
    elements = [str(result.element_vector(vector)) for vector in result.vectors]

    payload: Dict[str, Any] = {
        "model": kind, "n": n, "p": p, "q": q, "dim": result.dim, "basis": elements
    }
    text = [f"dim {kind}^{{{p},{q}}} (n={n}) = {result.dim}", *elements]
    if oracle:
        if kind != "A":
            raise click.UsageError("--oracle is only available for --model a.")
        value = model.oracle_quotient_dim(kind, p, q)
        payload["oracle"] = value
        text.append(f"oracle: {value} ({'ok' if value == result.dim else 'MISMATCH'})")

    rows = [{"index": i, "element": element} for i, element in enumerate(elements)]
    emit(Output(payload, rows, "\n".join(text)), fmt)
    if oracle and payload["oracle"] != result.dim:
        sys.exit(EXIT_FAILURE)


@cli.command()
@n_option
@click.option("--space", type=click.Choice(list(cohomology.SPACES)), required=True)
@large_option
@jobs_option
@common_options
def betti(
    n: int,
    space: str,
    allow_large: bool,
    jobs: Optional[int],
    fmt: str,
    cache_dir: Path,
) -> None:
    """Prints the Poincaré polynomial of conf, uconf, m or um."""
    check_limits(n, allow_large, large_ok=space == "um")
    model = open_model(n, cache_dir, jobs)
    poly = cohomology.betti_polynomial(model, space)
    coefficients = [int(c) for c in reversed(poly.all_coeffs())]
    text = cohomology.format_betti(poly)
    payload = {
        "space": space, "n": n, "coefficients": coefficients, "polynomial": text
    }
    rows = [{"degree": i, "betti": c} for i, c in enumerate(coefficients)]
    emit(Output(payload, rows, text), fmt)


@cli.command()
@n_option
@click.option("--space", type=click.Choice(list(cohomology.SPACES)), required=True)
@click.option(
    "--grothendieck", is_flag=True, help="Refine coefficients to SL2-irreducibles."
)
@large_option
@jobs_option
@common_options
def hodge(
    n: int,
    space: str,
    grothendieck: bool,
    allow_large: bool,
    jobs: Optional[int],
    fmt: str,
    cache_dir: Path,
) -> None:
    """Prints the Hodge polynomial sum dim Gr^W_k H^i u^i v^k.

    With --grothendieck the coefficients are SL2-representations; --format latex
    then prints the grid with columns p and rows q.
    """
    check_limits(n, allow_large, large_ok=space == "um")
    model = open_model(n, cache_dir, jobs)
    poly = cohomology.hodge_polynomial(model, space, grothendieck)

    terms = []
    for (i, k), value in poly.coeffs.items():
        entry: Dict[str, Any] = {"degree": i, "weight": k}
        if grothendieck:
            entry["irreps"] = irreps_payload(value)
            entry["dim"] = value.dimension
        else:
            entry["dim"] = value
        terms.append(entry)

    payload = {
        "space": space, "n": n, "grothendieck": grothendieck,
        "terms": terms, "polynomial": str(poly),
    }
    rows = [
        {**entry, "irreps": str(poly.coeffs[(entry["degree"], entry["weight"])])}
        if grothendieck else entry
        for entry in terms
    ]
    emit(Output(payload, rows, str(poly), hodge_grid(poly)), fmt)


@cli.command()
@n_option
@bidegree_options
@click.option(
    "--model", "model_kind", type=click.Choice(["a", "b", "ua", "ub"]), default="a"
)
@common_options
def decompose(
    n: int, p: int, q: int, model_kind: str, fmt: str, cache_dir: Path
) -> None:
    """Prints the weight decomposition and SL2-multiplicities of a slice."""
    check_limits(n)
    kind = model_kind.upper()
    model = open_model(n, cache_dir)
    weights = slice_weights(model, kind, p, q)
    irreps = irrep_multiplicities(weights)

    payload = {
        "model": kind, "n": n, "p": p, "q": q,
        "weights": {str(a): d for a, d in weights.dims.items()},
        "irreps": irreps_payload(irreps),
    }
    rows = [{"weight": a, "dim": d} for a, d in weights.dims.items()]
    text = "\n".join(
        [f"weights: {dict(weights.dims)}", f"irreps: {irreps}"]
    )
    emit(Output(payload, rows, text), fmt)


@cli.command(name="partitions")
@n_option
@bidegree_options
@common_options
def partitions_command(n: int, p: int, q: int, fmt: str, cache_dir: Path) -> None:
    """Lists the marked partitions of a slice with their statistics.

    The induced dimensions sum to dim A^{p,q}; the partitions with trivial character
    count the invariants.
    """
    rows = []
    for mp in partitions.enumerate_marked(n, p, q):
        info = partitions.stabilizer(mp)
        rows.append(
            {
                "lambda": " ".join(map(str, mp.lambda_)),
                "marks": " ".join(mp.marks),
                "size_l": mp.size_l,
                "size_h": mp.size_h,
                "norm_h": mp.norm_h,
                "c_order": info.c_order,
                "n_order": info.n_order,
                "z_order": info.z_order,
                "xi_trivial": partitions.xi_is_trivial(mp),
                "induced_dim": partitions.induced_dimension(mp),
            }
        )

    total = sum(row["induced_dim"] for row in rows)
    invariants = sum(1 for row in rows if row["xi_trivial"])
    payload = {
        "n": n, "p": p, "q": q, "partitions": rows,
        "dimension": total, "invariant_dimension": invariants,
    }
    text = [
        f"{row['lambda']:>12} | {row['marks']:<16} | z={row['z_order']} | "
        f"dim={row['induced_dim']} | trivial={row['xi_trivial']}"
        for row in rows
    ]
    text.append(f"dim A^{{{p},{q}}} = {total}, invariants = {invariants}")
    emit(Output(payload, rows, "\n".join(text)), fmt)


@cli.command(name="classes")
@n_option
@large_option
@common_options
def classes_command(n: int, allow_large: bool, fmt: str, cache_dir: Path) -> None:
    """Builds the named classes and compares their coefficients with a_q and b_q."""
    check_limits(n, allow_large, large_ok=True)
    model = open_model(n, cache_dir)

    named = []
    for name in classes.CLASS_NAMES:
        if n < classes.MINIMUM_N[name]:
            continue
        value = classes.build_class(model, name)
        named.append({"name": name, "bidegree": list(value.bidegree),
                      "terms": len(value.value)})

    rows = [
        {
            "coefficient": f"{report.name}_{report.q}",
            "computed": format_rational(report.computed),
            "expected": format_rational(report.expected),
            "matches": report.matches,
        }
        for report in classes.coefficient_reports(model)
    ]
    payload = {"n": n, "classes": named, "coefficients": rows}
    text = [f"{item['name']}: bidegree {tuple(item['bidegree'])}, "
            f"{item['terms']} terms" for item in named]
    text += [
        f"{row['coefficient']} = {row['computed']} (expected {row['expected']})"
        for row in rows
    ]
    emit(Output(payload, rows, "\n".join(text)), fmt)
    if not all(row["matches"] for row in rows):
        sys.exit(EXIT_FAILURE)


@cli.command(name="verify")
@n_option
@click.option("--suite", type=click.Choice(("all",) + SUITES), default="all")
@large_option
@jobs_option
@common_options
def verify_command(
    n: int,
    suite: str,
    allow_large: bool,
    jobs: Optional[int],
    fmt: str,
    cache_dir: Path,
) -> None:
    """Runs verification suites and exits with status 1 if any check fails."""
    model = open_model(n, cache_dir, jobs)
    report = verify(model, suite, allow_large)

    rows = [check.to_dict() for check in report.checks]
    text = [
        f"[{'PASS' if check.passed else 'FAIL'}] {check.name}: {check.anchor}"
        + (f" ({check.details})" if check.details else "")
        for check in report.checks
    ]
    text.append(
        f"{sum(c.passed for c in report.checks)}/{len(report.checks)} checks passed"
    )
    emit(Output(report.to_dict(), rows, "\n".join(text)), fmt)
    if not report.passed:
        sys.exit(EXIT_FAILURE)


if __name__ == "__main__":
    cli()
