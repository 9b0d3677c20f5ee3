"""Command-line front-end.

    python -m oscillator_entropy compute --ns 1,0,2 --alpha 0.5 --momentum --sum
    python -m oscillator_entropy sweep all --d-max 15 --format csv
    python -m oscillator_entropy verify --n-max 10 --alpha 0.25 --alpha 4

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric
range or convergence error.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from typing import Iterator, List, Optional, Sequence, Tuple

import click
from pydantic import BaseModel, ConfigDict, ValidationError, computed_field
from rich.console import Console
from rich.logging import RichHandler

from . import print_utils
from .config import PRECISION_ENV, get_settings
from .entropy import FAMILIES, EntropyReport, StateSpec, configuration_state, entropy_1d, entropy_report
from .errors import OscillatorEntropyError
from .oracle import quadrature_entropy, quadrature_entropy_1d

logger = logging.getLogger(__name__)

EXIT_VERIFY_FAILED = 1
EXIT_NUMERIC = 3

FORMATS = ("table", "csv", "json")


class OutputRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    state: StateSpec
    report: EntropyReport
    oracle_value: Optional[float] = None

    @computed_field
    @property
    def oracle_delta(self) -> Optional[float]:
        if self.oracle_value is None:
            return None
        return abs(self.report.position_entropy - self.oracle_value)


class VerifyRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int
    alpha: float
    formula: float
    oracle: float
    delta: float
    ok: bool


def build_record(state: StateSpec, with_oracle: bool = False) -> OutputRecord:
    report = entropy_report(state)
    oracle_value = quadrature_entropy(state).value if with_oracle else None
    return OutputRecord(state=state, report=report, oracle_value=oracle_value)


# ---------------------------------------------------------------------
#  Option parsing
# ---------------------------------------------------------------------
def _parse_ns(ctx, param, value: Optional[str]) -> Optional[Tuple[int, ...]]:
    if value is None:
        return None
    parts = [p.strip() for p in value.split(",") if p.strip()]
    if not parts:
        raise click.BadParameter("occupation list must not be empty")
    try:
        ns = tuple(int(p) for p in parts)
    except ValueError:
        raise click.BadParameter(f"expected comma separated integers, got {value!r}")
    if any(n < 0 for n in ns):
        raise click.BadParameter("occupation numbers must be non-negative")
    return ns


def _check_alpha(alpha: float) -> float:
    if not (alpha > 0.0 and math.isfinite(alpha)):
        raise click.BadParameter("alpha must be positive")
    return alpha


def _positive_alpha(ctx, param, value: float) -> float:
    return _check_alpha(value)


def _positive_alphas(ctx, param, values: Sequence[float]) -> Tuple[float, ...]:
    return tuple(_check_alpha(v) for v in values) or (1.0,)


format_option = click.option(
    "--format", "fmt", type=click.Choice(FORMATS), default="table", show_default=True,
    help="table for people, csv or json lines for tools",
)
alpha_option = click.option(
    "--alpha", type=float, default=1.0, show_default=True, callback=_positive_alpha,
    help="oscillator strength alpha = sqrt(k)",
)


@contextmanager
def _numeric_errors() -> Iterator[None]:
    """Map numeric failures to exit code 3."""
    try:
        yield
    except OscillatorEntropyError as exc:
        click.echo(f"numeric error: {exc}", err=True)
        click.get_current_context().exit(EXIT_NUMERIC)


def _emit(records: List[OutputRecord], fmt: str, momentum: bool, uncertainty: bool, title: Optional[str] = None) -> None:
    if fmt == "csv":
        print_utils.write_records_csv(records)
    elif fmt == "json":
        print_utils.write_records_json(records)
    else:
        print_utils.print_records_table(records, momentum=momentum, uncertainty=uncertainty, title=title)


def _configure_logging(verbose: int, level_name: str) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = logging.getLevelName(level_name)
        if not isinstance(level, int):
            raise click.UsageError(f"unknown log level {level_name!r}")
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


# ---------------------------------------------------------------------
#  Commands
# ---------------------------------------------------------------------
@click.group()
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for numeric details")
def cli(verbose: int) -> None:
    """Exact Shannon entropies of D-dimensional harmonic oscillator states (in nats)."""
    try:
        settings = get_settings()
    except ValidationError as exc:
        raise click.UsageError(f"invalid {PRECISION_ENV}: {exc.errors()[0]['msg']}")
    _configure_logging(verbose, settings.log_level)
    logger.debug("accumulation precision: %s", settings.precision)


@cli.command()
@click.option("--ns", callback=_parse_ns, help="comma separated occupation numbers, e.g. 1,0,2")
@click.option("--dims", type=click.IntRange(min=1), help="dimension D for a uniform state")
@click.option("--fill", type=click.IntRange(min=0), default=0, show_default=True, help="occupation used with --dims")
@alpha_option
@format_option
@click.option("--momentum", is_flag=True, help="show the momentum entropy column")
@click.option("--sum", "show_sum", is_flag=True, help="show the uncertainty sum column")
@click.option("--oracle", is_flag=True, help="attach the quadrature cross-check")
def compute(ns, dims, fill, alpha, fmt, momentum, show_sum, oracle) -> None:
    """Entropies and energy of one state."""
    if ns is None and dims is None:
        raise click.UsageError("give either --ns or --dims")
    if ns is not None and dims is not None:
        raise click.UsageError("--ns and --dims are mutually exclusive")
    occupations = ns if ns is not None else (fill,) * dims
    try:
        state = StateSpec.from_occupations(occupations, alpha)
    except ValidationError as exc:
        raise click.UsageError(str(exc))
    logger.info("computing state %s at alpha=%g", list(state.occupations), alpha)
    with _numeric_errors():
        record = build_record(state, oracle)
    _emit([record], fmt, momentum, show_sum)


@cli.command()
@click.argument("family", type=click.Choice([*FAMILIES, "all"]))
@click.option("--d-max", type=click.IntRange(min=1), default=15, show_default=True)
@alpha_option
@format_option
@click.option("--workers", type=click.IntRange(min=1), default=4, show_default=True)
def sweep(family, d_max, alpha, fmt, workers) -> None:
    """Position entropy against D = 1..d_max for a configuration family."""
    families = FAMILIES if family == "all" else (family,)
    states = [configuration_state(f, d, alpha) for f in families for d in range(1, d_max + 1)]
    logger.info("sweeping %d states with %d workers", len(states), workers)
    with _numeric_errors():
        with ThreadPoolExecutor(max_workers=workers) as pool:
            # map keeps submission order
            records = list(pool.map(build_record, states))
    if fmt != "table":
        _emit(records, fmt, momentum=False, uncertainty=False)
        return
    for i, name in enumerate(families):
        _emit(records[i * d_max:(i + 1) * d_max], fmt, False, False, title=f"{name} states, alpha={alpha:g}")


@cli.command()
@click.option("--n-max", type=click.IntRange(min=0), default=10, show_default=True)
@click.option("--alpha", "alphas", type=float, multiple=True, callback=_positive_alphas,
              help="repeatable; defaults to 1")
@click.option("--tol", type=click.FloatRange(min=0.0), default=1e-8, show_default=True)
@format_option
def verify(n_max, alphas, tol, fmt) -> None:
    """Compare the closed form with adaptive quadrature for n = 0..n_max."""
    rows: List[VerifyRow] = []
    with _numeric_errors():
        for alpha in alphas:
            shift = 0.5 * math.log(alpha)
            for n in range(n_max + 1):
                formula = entropy_1d(n) - shift
                oracle = quadrature_entropy_1d(n, alpha)
                delta = abs(formula - oracle)
                logger.info("n=%d alpha=%g delta=%.3e", n, alpha, delta)
                rows.append(VerifyRow(n=n, alpha=alpha, formula=formula, oracle=oracle, delta=delta, ok=delta <= tol))

    if fmt == "csv":
        print_utils.write_verify_csv(rows)
    elif fmt == "json":
        print_utils.write_verify_json(rows)
    else:
        print_utils.print_verify_table(rows, tol)

    failed = [r for r in rows if not r.ok]
    if failed:
        worst = max(failed, key=lambda r: r.delta)
        click.echo(
            f"{len(failed)} of {len(rows)} checks exceed tol={tol:g} (worst n={worst.n}, alpha={worst.alpha:g}, "
            f"delta={worst.delta:.3e})",
            err=True,
        )
        click.get_current_context().exit(EXIT_VERIFY_FAILED)


def main() -> None:
    cli(prog_name="oscillator-entropy")
