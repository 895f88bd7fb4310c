"""Command-line interface.

Commands mirror the service endpoints one-to-one; `--format machine` emits
exactly the payloads the service returns, so scripted consumers can switch
between the two without translation. Exit codes: 0 success, 2 usage error,
3 data/validation error, 4 internal error.
"""

from __future__ import annotations

import functools
import json
import os
import sys

import click

from . import calibration as calib
from . import decision, modelio, planner, serialize
from .dist import Dist
from .errors import MissingOptionError, QuotaplanError

STANCE_COLORS = {
    planner.Stance.VERY_CONSERVATIVE: "cyan",
    planner.Stance.CONSERVATIVE: "green",
    planner.Stance.BREAK_EVEN: "yellow",
    planner.Stance.BOLD: "magenta",
    planner.Stance.VERY_BOLD: "red",
}

NEGATIVE_NOTE = (
    "Note: negative values count students who would need funding "
    "beyond currently identified sources."
)


def run_command(fn):
    """Map engine errors to the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except MissingOptionError as exc:
            raise click.UsageError(f"--{exc.option} is required for this user type")
        except QuotaplanError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)
        except Exception as exc:  # noqa: BLE001 - last-resort exit code contract
            click.echo(f"internal error: {exc!r}", err=True)
            sys.exit(4)

    return wrapper


def _styling_enabled() -> bool:
    return sys.stdout.isatty() and not os.environ.get("QUOTAPLAN_NO_COLOR")


def _stance_text(label: planner.Stance) -> str:
    if _styling_enabled():
        return click.style(label.value, fg=STANCE_COLORS[label])
    return label.value


def emit_machine(payload: dict):
    click.echo(json.dumps(payload, indent=2, sort_keys=True))


def comma_ints(_ctx, param, value):
    if value is None:
        return None
    try:
        return [int(tok) for tok in value.split(",") if tok.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}")


def comma_floats(_ctx, param, value):
    if value is None:
        return None
    try:
        return [float(tok) for tok in value.split(",") if tok.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {value!r}")


def level_pairs(_ctx, param, value):
    pairs = []
    try:
        for tok in value.split(","):
            if not tok.strip():
                continue
            lo, _, hi = tok.partition(":")
            pairs.append((float(lo), float(hi)))
    except ValueError:
        raise click.BadParameter(f"expected lo:hi pairs, got {value!r}")
    if not pairs:
        raise click.BadParameter("no level pairs given")
    return pairs


def resolve_engine(engine: str, draws: int, seed: int | None) -> planner.Engine:
    if engine == "exact":
        return planner.ExactEngine()
    if seed is None:
        raise click.UsageError("--seed is required with --engine mc")
    return planner.MonteCarloEngine(draws=draws, seed=seed)


engine_options = [
    click.option(
        "--engine",
        type=click.Choice(["exact", "mc"]),
        default="exact",
        show_default=True,
        help="Exact convolution or Monte Carlo simulation.",
    ),
    click.option(
        "--draws",
        type=int,
        default=planner.DEFAULT_MC_DRAWS,
        show_default=True,
        help="Monte Carlo draw count.",
    ),
    click.option("--seed", type=int, default=None, help="Monte Carlo seed (required for mc)."),
]

format_option = click.option(
    "--format",
    "fmt",
    type=click.Choice(["table", "machine"]),
    default="table",
    show_default=True,
    help="Human table or machine-readable JSON.",
)


def add_options(options):
    def deco(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn

    return deco


@click.group()
@click.version_option(package_name="quotaplan")
def main():
    """Probabilistic capacity planning for admissions decisions."""


@main.command()
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--offers",
    required=True,
    callback=comma_ints,
    help="Comma-separated offer counts to scan.",
)
@add_options(engine_options)
@format_option
@run_command
def scan(model_path, offers, engine, draws, seed, fmt):
    """Percentiles and stance per candidate offer count."""
    model = modelio.load_model(model_path)
    eng = resolve_engine(engine, draws, seed)
    rows = planner.scan(model, offers, eng)
    if fmt == "machine":
        emit_machine(serialize.scan_payload(rows, eng))
        return
    render_scan_table(rows)


def render_scan_table(rows: list[planner.ScanRow]):
    levels = planner.SCAN_LEVELS
    headers = ["#Offers"] + [f"{round(lvl * 100)}%" for lvl in levels] + ["Description"]
    cells = [
        [str(row.offers)]
        + [str(row.percentiles[lvl]) for lvl in levels]
        + [row.label.value]
        for row in rows
    ]
    widths = [
        max(len(headers[i]), *(len(r[i]) for r in cells)) for i in range(len(headers))
    ]
    click.echo(
        "  ".join(h.rjust(widths[i]) for i, h in enumerate(headers[:-1]))
        + "  "
        + headers[-1]
    )
    for row, line in zip(rows, cells):
        rendered = "  ".join(c.rjust(widths[i]) for i, c in enumerate(line[:-1]))
        click.echo(rendered + "  " + _stance_text(row.label))
    if any(v < 0 for row in rows for v in row.percentiles.values()):
        click.echo("")
        click.echo(NEGATIVE_NOTE)


@main.command()
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--offers", required=True, type=int, help="Offer count to simulate.")
@add_options(engine_options)
@format_option
@run_command
def simulate(model_path, offers, engine, draws, seed, fmt):
    """Full predictive distribution of lost positions for one offer count."""
    model = modelio.load_model(model_path)
    eng = resolve_engine(engine, draws, seed)
    fc = planner.forecast_for_engine(model, offers, eng)
    if fmt == "machine":
        emit_machine(serialize.forecast_payload(fc))
        return
    payload = serialize.distribution_payload(fc.distribution)
    click.echo(f"offers: {fc.offers}   P(Y <= 0) = {fc.p_nonpos():.4f}")
    if payload["kind"] == "pmf":
        click.echo("value  probability")
        for v, p in payload["probs"].items():
            click.echo(f"{v:>5}  {p:.6f}")
    else:
        click.echo(f"value  count (of {payload['n']})")
        for v, c in payload["counts"].items():
            click.echo(f"{v:>5}  {c}")


@main.command("break-even")
@click.argument("model_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--min", "lo", type=int, default=0, show_default=True)
@click.option("--max", "hi", type=int, default=60, show_default=True)
@format_option
@run_command
def cmd_break_even(model_path, lo, hi, fmt):
    """Smallest offer count at least as likely to need funding as to lose positions."""
    model = modelio.load_model(model_path)
    offers = planner.break_even(model, lo, hi)
    p = (
        planner.lost_positions_exact(model, offers).p_nonpos()
        if offers is not None
        else None
    )
    if fmt == "machine":
        emit_machine(serialize.break_even_payload(offers, p))
        return
    if offers is None:
        click.echo(f"break-even offers: not found in [{lo}, {hi}]")
    else:
        click.echo(f"break-even offers: {offers}  (P(Y <= 0) = {p:.4f})")


@main.command()
@click.argument("sample_path", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--thresholds",
    callback=comma_floats,
    default=None,
    help="Comma-separated exceedance thresholds.",
)
@click.option(
    "--suppress",
    type=float,
    default=0.05,
    show_default=True,
    help="Hide exceedance probabilities below this level.",
)
@format_option
@run_command
def summarize(sample_path, thresholds, suppress, fmt):
    """Public summary of a sample: percentile triple plus event risks."""
    dist = modelio.load_sample(sample_path)
    summary = decision.public_summary(
        dist, thresholds=thresholds or (), suppression=suppress
    )
    if fmt == "machine":
        emit_machine(serialize.summary_payload(summary, suppress))
        return
    click.echo("p10  p50  p90")
    click.echo(f"{summary.p10:>3}  {summary.p50:>3}  {summary.p90:>3}")
    if summary.exceedances:
        click.echo("")
        click.echo("threshold  P(X > threshold)")
        for e in summary.exceedances:
            shown = "" if e.suppressed else f"{e.probability:.4f}"
            click.echo(f"{e.threshold:>9g}  {shown}")


@main.command()
@click.argument("records_path", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--levels",
    callback=level_pairs,
    default="0.1:0.9",
    show_default=True,
    help="Comma-separated lo:hi interval levels.",
)
@click.option("--bins", type=int, default=10, show_default=True, help="PIT histogram bins.")
@click.option("--seed", type=int, default=0, show_default=True, help="PIT randomization seed.")
@format_option
@run_command
def calibrate(records_path, levels, bins, seed, fmt):
    """Verification report: coverage, PIT histogram, reliability, sharpness."""
    records = modelio.load_forecast_records(records_path)
    report = calib.calibration_report(records, levels=levels, bins=bins, seed=seed)
    if fmt == "machine":
        emit_machine(serialize.calibration_payload(report, seed))
        return
    click.echo(f"records: {report.n_records}   event statements: {report.n_events}")
    click.echo("")
    click.echo("level      coverage  attainable  sharpness")
    for (lo, hi) in report.coverage:
        name = f"{round(lo * 100)}%-{round(hi * 100)}%"
        click.echo(
            f"{name:<9}  {report.coverage[(lo, hi)]:>8.4f}"
            f"  {report.attainable[(lo, hi)]:>10.4f}"
            f"  {report.sharpness[(lo, hi)]:>9.2f}"
        )
    click.echo("")
    click.echo(f"PIT counts ({bins} bins): " + " ".join(str(c) for c in report.pit_counts))
    if report.reliability:
        click.echo("")
        click.echo("reliability: center  mean_forecast  observed_freq  count")
        for row in report.reliability:
            if row.count == 0:
                continue
            click.echo(
                f"{row.center:>19.3f}  {row.mean_forecast:>13.4f}"
                f"  {row.observed_freq:>13.4f}  {row.count:>5}"
            )


USER_CHOICES = {u.value: u for u in decision.UserType}


@main.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--user", type=click.Choice(sorted(USER_CHOICES)), required=True)
@click.option("--alpha", type=float, default=None, help="Risk level for risk avoiders.")
@click.option("--cost-under", type=float, default=None, help="Per-unit underestimate cost.")
@click.option("--cost-over", type=float, default=None, help="Per-unit overestimate cost.")
@click.option("--observed", type=float, default=None, help="New observation to assess.")
@click.option(
    "--interval-level",
    type=float,
    default=0.8,
    show_default=True,
    help="Central interval level for assessors.",
)
@click.option(
    "--offers",
    type=int,
    default=None,
    help="Offer count (required when INPUT_PATH is a model spec).",
)
@format_option
@run_command
def product(input_path, user, alpha, cost_under, cost_over, observed, interval_level, offers, fmt):
    """The standard forecast product for one consumer type.

    INPUT_PATH is a JSON model spec (with --offers, the product applies to
    the lost-positions distribution) or a plain sample file.
    """
    dist = _load_distribution(input_path, offers)
    user_type = USER_CHOICES[user]
    loss = None
    if cost_under is not None or cost_over is not None:
        if cost_under is None or cost_over is None:
            raise click.UsageError("--cost-under and --cost-over go together")
        loss = decision.LossSpec(cost_under=cost_under, cost_over=cost_over)
    result = decision.product_for_user(
        dist,
        user_type,
        alpha=alpha,
        loss=loss,
        interval_level=interval_level,
        observed=observed,
    )
    if fmt == "machine":
        emit_machine(serialize.product_payload(result, user))
        return
    click.echo(render_product(result))


def _load_distribution(path: str, offers: int | None) -> Dist:
    with open(path) as fh:
        head = fh.read(1)
    if head == "{":
        model = modelio.load_model(path)
        if offers is None:
            raise click.UsageError("--offers is required when INPUT_PATH is a model spec")
        return planner.lost_positions_exact(model, offers).distribution
    return modelio.load_sample(path)


def render_product(result: decision.DecisionProduct) -> str:
    if isinstance(result, decision.Point):
        return f"point forecast (median): {result.value}"
    if isinstance(result, decision.Interval):
        return (
            f"central {round(result.level * 100)}% interval: "
            f"[{result.lo}, {result.hi}]"
        )
    if isinstance(result, decision.Bound):
        return (
            f"precautionary lower bound (alpha={result.alpha:g}): {result.value}"
        )
    if isinstance(result, decision.Alarm):
        where = {
            decision.AlarmStatus.IN_RANGE: "inside",
            decision.AlarmStatus.ABOVE: "ABOVE",
            decision.AlarmStatus.BELOW: "BELOW",
        }[result.status]
        return (
            f"observed {result.observed:g} is {where} the projected range "
            f"[{result.lo:g}, {result.hi:g}]"
        )
    return f"loss-optimal point forecast (tau={result.tau:g}): {result.value}"


if __name__ == "__main__":
    main()
