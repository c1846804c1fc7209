# Copyright (c) 2024.
"""Command-line entry point for the entanglement measure toolkit."""

import logging
from collections.abc import Callable
from enum import StrEnum
from pathlib import Path
from typing import Annotated, Any

import typer
from pydantic import BaseModel

from cft.TwistNegativity import CFTConfig, breakdown, sweep
from common.EnvManager import Settings, getenv
from common.QState import partial_trace
from common.StateCatalog import StateSpec, make_named, parse_params
from measures.MeasureSets import measure_set
from measures.Replica import multi_invariant, parse_spec
from separability.Certificates import ghz_rigidity_detect
from separability.ConvexRoof import RoofOptions, convex_roof, write_trace_csv
from utils.response import ExitCode, Response, Responses
from utils.statefile import dump_state, read_state, write_state
from verify.Suites import run_suite

logging.basicConfig(
    level=logging.INFO,
    format="%(levelname)s:     %(name)s - %(message)s",
)
logger = logging.getLogger(__name__)

app = typer.Typer(no_args_is_help=True, add_completion=False)


class Format(StrEnum):
    """Output formats."""

    json = "json"
    table = "table"
    csv = "csv"


class SetName(StrEnum):
    """Measure sets."""

    bipartite = "bipartite"
    tripartite = "tripartite"
    quadripartite = "quadripartite"
    all = "all"


class Suite(StrEnum):
    """Verification suites."""

    identities = "identities"
    bounds = "bounds"
    table2 = "table2"
    propositions = "propositions"
    gour = "gour"
    cft = "cft"
    named = "named"
    all = "all"


class RoofMeasureName(StrEnum):
    """Pure-state measures the convex roof extends."""

    phi = "phi"
    one_minus_i5 = "one_minus_i5"
    one_minus_absZ = "one_minus_absZ"  # noqa: N815
    two_tangle = "two_tangle"
    three_tangle = "three_tangle"


SeedOpt = Annotated[int | None, typer.Option(help="Root seed (default from settings)")]
FormatOpt = Annotated[Format, typer.Option("--format", help="Output format")]
OutOpt = Annotated[Path | None, typer.Option(help="Write output here, not stdout")]
ConfigOpt = Annotated[
    Path | None, typer.Option(help="dotenv-format file of setting overrides")
]
TolOpt = Annotated[
    float | None,
    typer.Option(
        min=0.0,
        min_open=True,
        help="Override the product-criterion and optimizer tolerances",
    ),
]


def _run(
    fmt: Format,
    out: Path | None,
    build: Callable[[], Response[Any]],
) -> None:
    """Build a response, emit it and exit with the matching code."""
    try:
        response = build()
    except ValueError as e:
        raise typer.Exit(Responses[None].input_error(e)) from e
    code = Responses[Any].emit(response, fmt.value, out)
    if code != ExitCode.OK:
        raise typer.Exit(code)


def _settings(config: Path | None, tol: float | None) -> Settings:
    """Settings from the config file, with --tol applied on top."""
    settings = getenv(config)
    if tol is None:
        return settings
    return settings.model_copy(update={"criterion_tol": tol, "roof_tol": tol})


def _roof_options(
    settings: Settings, seed: int | None, restarts: int | None
) -> RoofOptions:
    return RoofOptions(
        restarts=restarts or settings.roof_restarts,
        iters=settings.roof_iters,
        seed=settings.seed if seed is None else seed,
        tol=settings.roof_tol,
        method=settings.roof_method,
        n_jobs=settings.n_jobs,
    )


def _sites(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError as e:
        raise typer.BadParameter(f"Not a site list: {text!r}") from e


@app.command()
def state(
    family: Annotated[str, typer.Argument(help="State family, e.g. ghz4 or g2")],
    params: Annotated[str, typer.Option(help="Parameters as k=v,k=v")] = "",
    raw: Annotated[bool, typer.Option(help="Keep raw coefficients")] = False,
    out: OutOpt = None,
) -> None:
    """Build a catalog state and write its state file."""
    try:
        spec = StateSpec.model_validate(
            {"family": family, "params": parse_params(params)}
        )
        psi = make_named(spec, normalized=not raw)
    except ValueError as e:
        raise typer.Exit(Responses[None].input_error(e)) from e
    if out is None:
        typer.echo(dump_state(psi).decode())
    else:
        write_state(psi, out)


@app.command()
def measure(
    state_file: Path,
    which: Annotated[SetName, typer.Option("--set", help="Measure set")] = SetName.all,
    restarts: Annotated[int | None, typer.Option(help="Convex-roof restarts")] = None,
    seed: SeedOpt = None,
    tol: TolOpt = None,
    fmt: FormatOpt = Format.json,
    out: OutOpt = None,
    config: ConfigOpt = None,
) -> None:
    """Evaluate a measure set on a state file."""

    def build() -> Response[Any]:
        settings = _settings(config, tol)
        psi = read_state(state_file)
        report = measure_set(
            psi, which.value, _roof_options(settings, seed, restarts)
        )
        return Responses[Any].success(report, f"{which.value} measures")

    _run(fmt, out, build)


@app.command()
def verify(
    suite: Annotated[Suite, typer.Argument(help="Suite to run")] = Suite.all,
    samples: Annotated[int | None, typer.Option(help="Samples per suite")] = None,
    seed: SeedOpt = None,
    n_jobs: Annotated[int | None, typer.Option(help="Worker processes")] = None,
    restarts: Annotated[int | None, typer.Option(help="Convex-roof restarts")] = None,
    tol: TolOpt = None,
    fmt: FormatOpt = Format.json,
    out: OutOpt = None,
    config: ConfigOpt = None,
) -> None:
    """Run verification suites; exits 1 if any check fails."""

    def build() -> Response[Any]:
        settings = _settings(config, tol)
        root = settings.seed if seed is None else seed
        reports = run_suite(
            suite.value,
            samples,
            root,
            settings.n_jobs if n_jobs is None else n_jobs,
            _roof_options(settings, root, restarts),
        )
        failed = [r.suite for r in reports if not r.passed]
        if failed:
            message = f"Failed suites: {', '.join(failed)}"
            return Responses[Any].failure(message, reports)
        return Responses[Any].success(reports, "All checks passed")

    _run(fmt, out, build)


@app.command()
def replica(
    state_file: Path,
    perms: Annotated[str, typer.Argument(help='Permutations, e.g. "id;(123);(132)"')],
    tol: TolOpt = None,
    fmt: FormatOpt = Format.json,
    out: OutOpt = None,
    config: ConfigOpt = None,
) -> None:
    """Evaluate the multi-invariant Z of a state file

    With pairwise distinct permutations the output also carries the
    fully-product verdict deficit < tol.
    """

    def build() -> Response[Any]:
        settings = _settings(config, tol)
        psi = read_state(state_file)
        spec = parse_spec(perms)
        z = multi_invariant(psi, spec, settings.replica_work_limit)
        deficit = 1 - abs(z)
        product = deficit < settings.criterion_tol if spec.pairwise_distinct() else None
        return Responses[Any].success(
            {
                "real": z.real,
                "imag": z.imag,
                "abs": abs(z),
                "deficit": deficit,
                "product": product,
            },
            f"Z for {perms}",
        )

    _run(fmt, out, build)


@app.command()
def cft(
    c: Annotated[float, typer.Option(help="Central charge")] = 1.0,
    z1: float = 0.0,
    z2: float = 1.0,
    z3: float = 2.0,
    eps: Annotated[float, typer.Option(help="UV cutoff")] = 1.0,
    do_sweep: Annotated[
        bool, typer.Option("--sweep", help="CSV over the --cs x --eps-values grid")
    ] = False,
    cs: Annotated[str, typer.Option(help="Central charges for --sweep")] = "1,12,100",
    eps_values: Annotated[str, typer.Option(help="Cutoffs for --sweep")] = "1,0.1",
    fmt: FormatOpt = Format.json,
    out: OutOpt = None,
) -> None:
    """Third negativity moment of two adjacent intervals at large c."""
    if do_sweep:
        try:
            frame = sweep(
                [float(x) for x in cs.split(",")],
                [float(x) for x in eps_values.split(",")],
                (z1, z2, z3),
            )
        except ValueError as e:
            raise typer.Exit(Responses[None].input_error(e)) from e
        text = frame.to_csv(index=False)
        if out is None:
            typer.echo(text)
        else:
            _ = out.write_text(text)
        return

    def build() -> Response[Any]:
        cfg = CFTConfig(c=c, z1=z1, z2=z2, z3=z3, eps=eps)
        return Responses[Any].success(dict(breakdown(cfg)), f"c = {c:g}")

    _run(fmt, out, build)


@app.command()
def roof(
    state_file: Path,
    keep: Annotated[str, typer.Option(help="Sites kept in the reduction")] = "0,1,2",
    roof_measure: Annotated[
        RoofMeasureName, typer.Option("--measure", help="Pure-state measure")
    ] = RoofMeasureName.phi,
    restarts: Annotated[int | None, typer.Option(help="Optimizer restarts")] = None,
    seed: SeedOpt = None,
    trace_csv: Annotated[Path | None, typer.Option(help="Write the trace CSV")] = None,
    tol: TolOpt = None,
    fmt: FormatOpt = Format.json,
    out: OutOpt = None,
    config: ConfigOpt = None,
) -> None:
    """Convex-roof estimate on a reduction of a state file."""

    def build() -> Response[Any]:
        settings = _settings(config, tol)
        rho = partial_trace(read_state(state_file), _sites(keep))
        estimate = convex_roof(
            rho, roof_measure.value, _roof_options(settings, seed, restarts)
        )
        if trace_csv is not None:
            write_trace_csv(estimate, trace_csv)
        summary = estimate.model_dump(exclude={"trace"})
        return Responses[Any].success(summary, f"{roof_measure.value} roof")

    _run(fmt, out, build)


class RigiditySummary(BaseModel):
    """Printable rigidity outcome."""

    outcome: str
    rank: int | None
    weights: list[float]
    off_diagonal_mass: float
    fidelity_deficit: float


@app.command()
def rigidity(
    state_file: Path,
    tol: Annotated[float, typer.Option(help="Mass and fidelity tolerance")] = 1e-8,
    seed: SeedOpt = None,
    fmt: FormatOpt = Format.json,
    out: OutOpt = None,
    config: ConfigOpt = None,
) -> None:
    """Test a state file for local equivalence to a generalized GHZ state."""

    def build() -> Response[Any]:
        settings = getenv(config)
        psi = read_state(state_file)
        result = ghz_rigidity_detect(
            psi, tol, settings.seed if seed is None else seed
        )
        form = result.form
        summary = RigiditySummary(
            outcome=result.outcome,
            rank=None if form is None else form.rank,
            weights=[] if form is None else [abs(w) for w in form.weights],
            off_diagonal_mass=result.off_diagonal_mass,
            fidelity_deficit=result.fidelity_deficit,
        )
        return Responses[Any].success(summary, "GHZ rigidity")

    _run(fmt, out, build)


if __name__ == "__main__":
    app()
