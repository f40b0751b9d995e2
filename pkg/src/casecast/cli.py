"""Command-line interface.

Subcommands: ``ingest`` (validate/normalize a snapshot), ``filter`` (show a
cohort), ``forecast`` (full pipeline for one target), ``report`` (regression
summary table). Exit codes: 0 success, 2 malformed input, 3 empty cohort,
4 unknown target, 1 any other pipeline failure.
"""

from __future__ import annotations

import argparse
import difflib
import json
import sys
from pathlib import Path

from . import __version__
from .config import load_config, with_overrides
from .errors import (
    EmptyCohortError,
    EmptyInputError,
    PipelineError,
    RowError,
    SchemaError,
    UnknownTargetError,
)
from .filters import apply_filter, builtin_filters, load_filter_spec, summarize_snapshot
from .ingest import bundled_snapshot_path, load_snapshot, serialize_snapshot
from .regression import fit_peak_models, predict_targets
from .sarimax import SarimaxSpec, fit_to_dict
from .ssm import average_forecasts, forecast_summary, forecast_to_csv, run_ssm
from .svgplot import render_line_chart

_BUILTIN_ALIASES = {"1": "F1", "2": "F2", "3": "F3", "F1": "F1", "F2": "F2", "F3": "F3"}


def _load(path: str | None):
    return load_snapshot(path if path else bundled_snapshot_path())


def _resolve_filter(token: str):
    """A filter token is a built-in id (1/2/3, F1/F2/F3) or a JSON path."""
    token = token.strip()
    alias = _BUILTIN_ALIASES.get(token)
    if alias is not None:
        return next(f for f in builtin_filters() if f.id == alias)
    if Path(token).exists():
        return load_filter_spec(token)
    raise SchemaError(
        f"unknown filter {token!r}: not a built-in id (1, 2, 3) "
        "and no such file"
    )


def _resolve_filters(tokens: str | list[str]):
    if isinstance(tokens, str):
        tokens = [t for t in tokens.split(",") if t.strip()]
    if not tokens:
        raise SchemaError("no filters selected")
    specs = [_resolve_filter(t) for t in tokens]
    ids = [f.id for f in specs]
    if len(set(ids)) != len(ids):
        raise SchemaError(f"duplicate filter ids in {ids}")
    return specs


def _parse_order(text: str, n: int, what: str) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n or not all(p.lstrip("-").isdigit() for p in parts):
        raise SchemaError(f"{what} must be {n} comma-separated integers, got {text!r}")
    return tuple(int(p) for p in parts)


def _merged_config(args):
    cfg = load_config(getattr(args, "config", None))
    order = getattr(args, "order", None)
    seasonal = getattr(args, "seasonal_order", None)
    return with_overrides(
        cfg,
        smoothing_window=getattr(args, "window", None),
        horizon=getattr(args, "horizon", None),
        order=_parse_order(order, 3, "--order") if order else None,
        seasonal_order=(
            _parse_order(seasonal, 4, "--seasonal-order") if seasonal else None
        ),
        bias_mode=getattr(args, "bias_mode", None),
        filters=(
            tuple(t.strip() for t in args.filters.split(",") if t.strip())
            if getattr(args, "filters", None)
            else None
        ),
    )


def _target_series(snapshot, name: str):
    if name not in snapshot.countries:
        near = difflib.get_close_matches(name, list(snapshot.countries), n=3)
        raise UnknownTargetError(name, near)
    return snapshot.countries[name]


def cmd_ingest(args) -> int:
    snapshot = _load(args.input)
    n_rows = sum(c.n_days for c in snapshot.countries.values())
    print(f"{n_rows} rows across {len(snapshot)} countries, "
          f"data through {snapshot.as_of_date.isoformat()}")
    if args.out:
        Path(args.out).write_text(serialize_snapshot(snapshot), encoding="utf-8")
        print(f"wrote {args.out}")
    return 0


def cmd_filter(args) -> int:
    snapshot = _load(args.snapshot)
    spec = _resolve_filter(args.filter)
    cohort = apply_filter(snapshot, spec, window=args.window)
    print(f"filter {spec.id}: {len(cohort)} countries")
    rows = ["country,population,peak_day,peak_value,ratio"]
    for country, s in cohort:
        print(
            f"  {country.name:<28} peak_day={s.peak_day:>4d} "
            f"peak_value={s.peak_value:>10.6g} ratio={s.ratio:>8.6g}"
        )
        rows.append(
            f"{country.name},{country.population},{s.peak_day},"
            f"{s.peak_value:.6g},{s.ratio:.6g}"
        )
    if args.out:
        Path(args.out).write_text("\n".join(rows) + "\n", encoding="utf-8")
        print(f"wrote {args.out}")
    return 0


def cmd_forecast(args) -> int:
    cfg = _merged_config(args)
    snapshot = _load(args.snapshot)
    specs = _resolve_filters(list(cfg.filters))
    target = _target_series(snapshot, args.target)
    summaries = summarize_snapshot(snapshot, cfg.smoothing_window)
    model_spec = SarimaxSpec(order=cfg.order, seasonal_order=cfg.seasonal_order)

    results = []
    scores = {}
    for spec in specs:
        cohort = apply_filter(snapshot, spec, summaries=summaries)
        models = fit_peak_models(cohort, spec.id)
        fc = run_ssm(
            target,
            cohort,
            models,
            model_spec,
            horizon=cfg.horizon,
            window=cfg.smoothing_window,
            bias_mode=cfg.bias_mode,
        )
        results.append(fc)
        scores[spec.id] = models.model_peak_value.r_squared
        print(
            f"{spec.id}: cohort={len(cohort)} peak_day={fc.peak_day} "
            f"peak_value={fc.peak_value:.6g} bias={fc.bias:.6g}"
        )

    average = average_forecasts(results) if len(results) > 1 else None
    blocks = results + ([average] if average is not None else [])

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(forecast_to_csv(blocks), encoding="utf-8")
    print(f"wrote {out}")

    summary_path = out.with_suffix(".json")
    summary = forecast_summary(results, average, scores)
    summary_path.write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"wrote {summary_path}")

    if args.plot:
        series = [(fc.filter_id, fc.daily_predicted) for fc in blocks]
        svg = render_line_chart(series, title=f"{target.name} forecast")
        Path(args.plot).write_text(svg, encoding="utf-8")
        print(f"wrote {args.plot}")

    if args.dump_fit:
        fits = {
            fc.filter_id: fit_to_dict(fc.sarimax)
            for fc in results
            if fc.sarimax is not None
        }
        Path(args.dump_fit).write_text(
            json.dumps(fits, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        print(f"wrote {args.dump_fit}")
    return 0


def cmd_report(args) -> int:
    cfg = _merged_config(args)
    snapshot = _load(args.snapshot)
    specs = _resolve_filters(list(cfg.filters))
    target = _target_series(snapshot, args.target)
    summaries = summarize_snapshot(snapshot, cfg.smoothing_window)

    print(
        "filter,cohort_size,r2_peak_value,r2_peak_day,r2_total_cases,"
        "peak_value,peak_day,total_cases"
    )
    for spec in specs:
        cohort = apply_filter(snapshot, spec, summaries=summaries)
        models = fit_peak_models(cohort, spec.id)
        pred = predict_targets(models, target)
        print(
            f"{spec.id},{len(cohort)},"
            f"{models.model_peak_value.r_squared:.6g},"
            f"{models.model_peak_day.r_squared:.6g},"
            f"{models.model_total_cases.r_squared:.6g},"
            f"{pred.peak_value:.6g},{pred.peak_day},{pred.total_cases:.6g}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casecast",
        description="Cohort-calibrated epidemic case-curve forecasting.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_ingest = sub.add_parser("ingest", help="validate and normalize a snapshot")
    p_ingest.add_argument("--input", help="raw CSV (default: the bundled dataset)")
    p_ingest.add_argument("--out", help="write the normalized CSV here")
    p_ingest.set_defaults(func=cmd_ingest)

    p_filter = sub.add_parser("filter", help="list the cohort a filter selects")
    p_filter.add_argument(
        "--snapshot", help="snapshot CSV (default: the bundled dataset)"
    )
    p_filter.add_argument(
        "--filter",
        default="1",
        help="built-in filter id (1, 2, 3) or a JSON file of thresholds",
    )
    p_filter.add_argument("--window", type=int, default=7, help="smoothing window")
    p_filter.add_argument("--out", help="write the cohort as CSV")
    p_filter.set_defaults(func=cmd_filter)

    def add_model_args(p):
        p.add_argument(
            "--snapshot", help="snapshot CSV (default: the bundled dataset)"
        )
        p.add_argument(
            "--filters",
            help="comma-separated filter ids or JSON paths (default: 1,2,3)",
        )
        p.add_argument(
            "--config", help="JSON config file (else $SSM_CONFIG, else defaults)"
        )
        p.add_argument("--window", type=int, help="smoothing window (odd)")
        p.add_argument("--horizon", type=int, help="forecast length in days")
        p.add_argument("--order", help="ARIMA order p,d,q")
        p.add_argument("--seasonal-order", help="seasonal order P,D,Q,s")
        p.add_argument(
            "--bias-mode",
            choices=("multiplicative", "additive"),
            help="how the falling edge absorbs the calibrated mean",
        )

    p_fc = sub.add_parser("forecast", help="forecast one target country")
    add_model_args(p_fc)
    p_fc.add_argument("--target", required=True, help="country to forecast")
    p_fc.add_argument(
        "--out", required=True, help="forecast CSV path (summary JSON written beside it)"
    )
    p_fc.add_argument("--plot", help="write an SVG chart of all forecast curves")
    p_fc.add_argument("--dump-fit", help="write fitted model parameters as JSON")
    p_fc.set_defaults(func=cmd_forecast)

    p_rep = sub.add_parser(
        "report", help="regression scores and predictions for one target"
    )
    add_model_args(p_rep)
    p_rep.add_argument("--target", required=True, help="country to evaluate")
    p_rep.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SchemaError, RowError, EmptyInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except EmptyCohortError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except UnknownTargetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
