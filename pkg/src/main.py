# Main application entry point for GeoSpec
"""
Command-line front end.

    python -m src.main enumerate --config run.json [--out DIR] [--threads N]
    python -m src.main report --config run.json [--table FILE] [--out DIR]

Subcommands: enumerate, pressure, bounds, trace-sum, zeta, report.
Exit codes: 0 success, 2 configuration, 3 I/O, 4 integrity, 5 numeric failure.
"""

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table
from tabulate import tabulate

from src.analysis.bounds import (
    admissible_rows,
    arithmetic_witness,
    bound_comparison_scan,
    gap_bounds,
    nonque_witness,
)
from src.analysis.forms import HarmonicForm, average, stable_norm_lb
from src.analysis.testfunctions import SymmetrizedG, TestFunction
from src.analysis.thermo import (
    estimator_coherence,
    pressure_at_tail,
    pressure_bounds_check,
    pressure_estimate,
    pressure_limit_scan,
)
from src.analysis.traceformula import (
    correlation_growth_ratios,
    gaussian_average_grid,
    geometric_sum,
    identity_term,
    lm_window_check,
    paley_wiener_fit,
    scaled_paley_wiener_fit,
)
from src.analysis.zeta import zeta_grid
from src.config.settings import get_settings, reload_settings
from src.core.exceptions import (
    BadParameters,
    ConfigError,
    EmptyWindow,
    GeospecError,
    InsufficientRange,
    TableIOError,
)
from src.core.geodesics import GeodesicRecord, GeodesicTable, enumerate_geodesics
from src.core.surfaces import model_from_descriptor
from src.data.cache import get_cache
from src.data.models import (
    BoundsSummary,
    CriticalExponentResult,
    EnumerationSummary,
    GrowthRatioRow,
    LevelCheckRow,
    PaleyWienerRow,
    PressureResult,
    ReportBundle,
    RunConfig,
    ThermoSummary,
    TraceSumSummary,
    WitnessResult,
    ZetaRow,
)
from src.data.table_io import export_csv, load_table, save_table
from src.utils.logger import get_logger, setup_logger
from src.utils.validators import (
    validate_beta,
    validate_cutoff,
    validate_grid,
    validate_periods,
    validate_threads,
)

setup_logger("src", capture_warnings=True)
logger = get_logger("src.main")

COMMANDS = ("enumerate", "pressure", "bounds", "trace-sum", "zeta", "report")


def _clean(value: Any) -> Any:
    """JSON-ready copy: non-finite floats become null, tuples become lists."""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def _finite_or_none(x: float) -> Optional[float]:
    return x if math.isfinite(x) else None


def write_json(path: Path, payload: Any) -> Path:
    """Deterministic JSON: sorted keys, fixed indentation, trailing newline."""
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(_clean(payload), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        raise TableIOError(f"Cannot write {path}: {e}") from e
    return path


def write_csv(path: Path, rows: List[Dict[str, Any]], columns: Sequence[str]) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        pd.DataFrame(_clean(rows), columns=list(columns)).to_csv(path, index=False, float_format="%.17g")
    except OSError as e:
        raise TableIOError(f"Cannot write {path}: {e}") from e
    return path


def load_config(path: Path) -> RunConfig:
    """Read and validate a JSON run configuration."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"Malformed JSON in {path} at line {e.lineno}, column {e.colno}: {e.msg}") from e
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"Invalid config {path}:\n{e}") from e


def resolve_threads(flag: Optional[int], config: RunConfig) -> int:
    """--threads beats the config, which beats GEOSPEC_THREADS."""
    threads = flag or config.threads or get_settings().threads
    if not validate_threads(threads):
        raise BadParameters(f"Invalid thread count: {threads}")
    return threads


class GeoSpecApplication:
    """Runs one subcommand against a validated configuration."""

    def __init__(self, config: RunConfig, out_dir: Optional[Path] = None,
                 table_path: Optional[Path] = None, threads: Optional[int] = None):
        self.settings = get_settings()
        self.config = config
        self.threads = resolve_threads(threads, config)
        self.out_dir = Path(out_dir or config.output_dir or self.settings.output_dir)
        self.table_path = Path(table_path) if table_path else self.out_dir / "table.geos"
        self.model = model_from_descriptor(config.model.descriptor())
        if not validate_periods(config.periods, self.model.rank):
            raise BadParameters(f"Config needs {self.model.rank} periods, got {len(config.periods)}")
        if not validate_grid(list(config.trace_sum.sigmas), positive=True):
            raise BadParameters(f"Gaussian widths must be positive: {config.trace_sum.sigmas}")
        if not validate_cutoff(config.cutoff_L):
            raise BadParameters(f"cutoff_L = {config.cutoff_L} is outside the enumerable range")
        if not all(validate_beta(b) for b in config.bounds.betas):
            raise BadParameters(f"Strip parameters must lie in (0, 1): {config.bounds.betas}")
        if not all(validate_beta(b, upper=0.5) for b in config.bounds.press_betas):
            raise BadParameters(f"Pressure strip parameters must lie in (0, 1/2): {config.bounds.press_betas}")
        self.form = HarmonicForm(tuple(config.periods))
        self.console = Console(highlight=False)
        self._table: Optional[GeodesicTable] = None
        logger.info(f"{self.settings.app_name} {self.settings.app_version}: {self.model.kind} model, "
                    f"{self.model.label}, {self.threads} threads")

    # -- table ---------------------------------------------------------------

    @property
    def table(self) -> GeodesicTable:
        if self._table is None:
            cache = get_cache()
            digest = self.model.digest()
            table = cache.get_table(self.table_path, digest)
            if table is None:
                table = load_table(self.table_path, self.model)
                cache.set_table(self.table_path, digest, table)
            self._table = table
        return self._table

    def _summary(self, table: GeodesicTable) -> EnumerationSummary:
        return EnumerationSummary(
            count=len(table),
            primitive_count=len(table.primitive()),
            systole=table.systole,
            systole_flag="empirical",
            cutoff=table.cutoff,
            complete_below=table.complete_below,
            label=self.model.label,
        )

    # -- subcommands ---------------------------------------------------------

    def cmd_enumerate(self) -> EnumerationSummary:
        cfg = self.config.enumeration
        table = enumerate_geodesics(
            self.model, self.config.cutoff_L, strategy=cfg.strategy,
            threads=self.threads, max_words=cfg.max_words,
        )
        save_table(table, self.table_path)
        export_csv(table, self.out_dir / "table.csv")
        self._table = table
        summary = self._summary(table)

        grid = Table(title="Enumeration")
        grid.add_column("geodesics", justify="right")
        grid.add_column("systole", justify="right")
        grid.add_column("complete below", justify="right")
        systole = "-" if summary.systole is None else f"{summary.systole:.6f}"
        grid.add_row(str(summary.count), systole, f"{summary.complete_below:.3f}")
        self.console.print(grid)
        return summary

    def _pressure_result(self, est) -> PressureResult:
        data = est.to_dict()
        data["slack"] = _finite_or_none(data["slack"])
        return PressureResult(**data)

    def cmd_pressure(self) -> ThermoSummary:
        table, form, cfg = self.table, self.form, self.config.pressure
        p1 = pressure_at_tail(table, form, cfg.halfwidth, cfg.correction)
        p2 = pressure_at_tail(table, form * 2.0, cfg.halfwidth, cfg.correction)
        band = pressure_bounds_check(table, form, cfg.halfwidth, cfg.correction)
        try:
            coherence = estimator_coherence(table, form, corrected=cfg.correction)
            crit = coherence.exponent
            crit_result = CriticalExponentResult(
                value=crit.value, slack=crit.slack, n_windows=crit.n_windows,
                combined_slack=coherence.combined_slack, coherent=coherence.holds,
            )
        except (InsufficientRange, EmptyWindow) as e:
            logger.warning(f"Critical exponent skipped: {e}")
            crit_result = None
        summary = ThermoSummary(
            pressure=self._pressure_result(p1),
            pressure_double=self._pressure_result(p2),
            stable_norm_lb=stable_norm_lb(table, form),
            critical_exponent=crit_result,
            band_lower_ok=band.lower_ok,
            band_upper_ok=band.upper_ok,
            scan=_clean(pressure_limit_scan(table, form, cfg.scales, cfg.halfwidth, cfg.correction)),
        )

        rows = []
        for t in self._pressure_centers(table):
            try:
                est = pressure_estimate(table, form, t, cfg.halfwidth, cfg.correction)
            except EmptyWindow:
                continue
            rows.append({"t": t, "pressure": est.value, "slack": est.slack, "n_terms": est.n_terms})
        write_csv(self.out_dir / "pressure_vs_t.csv", rows, ["t", "pressure", "slack", "n_terms"])
        write_json(self.out_dir / "pressure.json", summary.model_dump())

        self.console.print(f"Pr(w) = {p1.value:.6f} +- {p1.slack:.2e}   "
                           f"Pr(2w) = {p2.value:.6f}   stable norm >= {summary.stable_norm_lb:.6f}")
        return summary

    def _pressure_centers(self, table: GeodesicTable) -> List[float]:
        h = self.config.pressure.halfwidth
        if self.config.pressure.centers:
            return list(self.config.pressure.centers)
        centers = []
        t = table.complete_below - h
        while t - h > 0:
            centers.append(round(t, 12))
            t -= 0.5
        return centers[::-1]

    def cmd_bounds(self, thermo: Optional[ThermoSummary] = None) -> BoundsSummary:
        table, form, cfg = self.table, self.form, self.config.bounds
        thermo = thermo or self.cmd_pressure()
        pr1, pr2 = thermo.pressure.value, thermo.pressure_double.value
        slack1 = thermo.pressure.slack if thermo.pressure.slack is not None else math.inf
        slack2 = thermo.pressure_double.slack if thermo.pressure_double.slack is not None else math.inf
        arithmetic = self.model.kind == "arithmetic"
        gap = gap_bounds(pr1, pr2, thermo.stable_norm_lb, slack1, slack2, arithmetic=arithmetic)

        summary = BoundsSummary(
            gap=gap,
            admissible=admissible_rows(cfg.betas, cfg.press_betas, pr1, pr2, thermo.stable_norm_lb),
            nonque_witness=self._witness(nonque_witness(table, form), 1.5),
            arithmetic_witness=self._witness(arithmetic_witness(table, form), 1.25),
        )
        rows = bound_comparison_scan(table, form, cfg.scales, self.config.pressure.halfwidth,
                                     self.config.pressure.correction)
        write_csv(self.out_dir / "bound_comparison.csv", rows,
                  ["scale", "pr1", "pr2", "snorm", "lb_weak", "lb_press", "lb_arith", "weak_minus_press", "slack"])
        write_json(self.out_dir / "bounds.json", summary.model_dump())

        body = [
            ["lb_weak", gap.lb_weak, gap.conservative_lb_weak],
            ["lb_press", gap.lb_press, gap.conservative_lb_press],
            ["lb_arith" + ("" if arithmetic else " (arithmetic only)"), gap.lb_arith, gap.conservative_lb_arith],
            ["ub_press", gap.ub_press, None],
            ["ub_stable", gap.ub_stable, None],
        ]
        self.console.print(tabulate(body, headers=["bound", "value", "conservative"], floatfmt=".6f"))
        return summary

    def _witness(self, record: Optional[GeodesicRecord], threshold: float) -> WitnessResult:
        if record is None:
            return WitnessResult(threshold=threshold)
        return WitnessResult(word=list(record.canon), length=record.length,
                             mean=average(self.form, record), threshold=threshold)

    def cmd_trace_sum(self, thermo: Optional[ThermoSummary] = None) -> TraceSumSummary:
        table, form, cfg = self.table, self.form, self.config.trace_sum
        orbit = None
        d = cfg.d
        if d is None:
            prim = table.primitive()
            if not len(prim):
                raise EmptyWindow("No primitive geodesic to center the test function on")
            base = prim.records[0]
            d = cfg.k * base.primitive_length
            orbit = (base, cfg.k)
        g = SymmetrizedG(TestFunction.bump_scaled(cfg.eps, d))
        geo = geometric_sum(table, form, g, orbit)

        ident = None
        if cfg.identity_term and self.model.volume:
            ident = identity_term(self.model.volume, g)

        t_values = list(cfg.t_values) or [
            table.complete_below - 1.0 - j for j in range(3) if table.complete_below - 1.0 - j > 1.0
        ]
        averages = gaussian_average_grid(table, form, t_values, cfg.sigmas)
        sigma = cfg.sigmas[0] if cfg.sigmas else 1.0
        level_checks = []
        if table.kind == "arithmetic":
            for t in t_values:
                check = lm_window_check(table, form, t, sigma)
                level_checks.append(LevelCheckRow(t=check.t, sigma=check.sigma, levels=list(check.levels),
                                                  level_sum=check.level_sum, average=check.average,
                                                  holds=check.holds))
        growth = []
        if thermo is not None:
            growth = [GrowthRatioRow(**row) for row in correlation_growth_ratios(
                table, form, t_values, sigma, thermo.pressure_double.value)]

        families = [
            ("bump_scaled", g),
            ("modulated", SymmetrizedG(TestFunction.modulated(cfg.modulated_t, cfg.modulated_xi))),
        ]
        pw_rows = []
        for family, fn in families:
            for fit in (paley_wiener_fit(fn, cfg.order, points=cfg.pw_points),
                        scaled_paley_wiener_fit(fn, cfg.order, points=cfg.pw_points)):
                pw_rows.append(PaleyWienerRow(family=family, **fit.to_dict()))

        summary = TraceSumSummary(
            eps=cfg.eps, d=d,
            geometric_sum=float(geo.value), n_terms=geo.n_terms, certified=geo.certified,
            orbit_bound=geo.orbit_bound,
            identity_term=None if ident is None else ident.real,
            identity_term_imag=None if ident is None else ident.imag,
            gaussian_averages=averages,
            paley_wiener=pw_rows,
            level_checks=level_checks,
            growth_ratios=growth,
        )
        write_csv(self.out_dir / "gaussian_average.csv", [r.model_dump() for r in averages],
                  ["t", "sigma", "direct", "quadrature", "diagonal_bound"])
        write_csv(self.out_dir / "paley_wiener.csv", [r.model_dump() for r in pw_rows],
                  ["family", "scaled", "constant", "order", "support_radius", "r_max", "points", "argmax"])
        write_json(self.out_dir / "trace_sum.json", summary.model_dump())
        self.console.print(f"geometric sum = {geo.value:.12g} over {geo.n_terms} geodesics"
                           + ("" if geo.certified else " (support not certified)"))
        return summary

    def cmd_zeta(self) -> List[ZetaRow]:
        cfg = self.config.zeta
        points = [complex(re, im) for re, im in cfg.s_values]
        values = zeta_grid(self.table, self.form, points, cfg.k_max, cfg.check_convergence, self.threads)
        rows = [
            ZetaRow(re_s=v.s.real, im_s=v.s.imag, re_log_z=v.value.real, im_log_z=v.value.imag,
                    tail_bound=_finite_or_none(v.tail_bound), n_terms=v.n_terms)
            for v in values
        ]
        write_csv(self.out_dir / "zeta.csv", [r.model_dump() for r in rows],
                  ["re_s", "im_s", "re_log_z", "im_log_z", "tail_bound", "n_terms"])
        return rows

    def cmd_report(self) -> ReportBundle:
        thermo = self.cmd_pressure()
        bundle = ReportBundle(
            model_label=self.model.label,
            model_digest=self.model.digest().hex(),
            periods=list(self.form.periods),
            enumeration=self._summary(self.table),
            thermo=thermo,
            bounds=self.cmd_bounds(thermo),
            trace_sum=self.cmd_trace_sum(thermo),
            zeta=self.cmd_zeta(),
        )
        write_json(self.out_dir / "report.json", bundle.model_dump())
        write_json(self.out_dir / "report.schema.json", ReportBundle.model_json_schema())
        return bundle

    def run(self, command: str):
        handlers = {
            "enumerate": self.cmd_enumerate,
            "pressure": self.cmd_pressure,
            "bounds": self.cmd_bounds,
            "trace-sum": self.cmd_trace_sum,
            "zeta": self.cmd_zeta,
            "report": self.cmd_report,
        }
        return handlers[command]()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, required=True, help="JSON run configuration")
    common.add_argument("--table", type=Path, default=None, help="geodesic table file")
    common.add_argument("--out", type=Path, default=None, help="output directory")
    common.add_argument("--threads", type=int, default=None, help="worker threads")

    parser = argparse.ArgumentParser(prog="geospec", description="Closed-geodesic laboratory")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    reload_settings()
    try:
        config = load_config(args.config)
        app = GeoSpecApplication(config, args.out, args.table, args.threads)
        app.run(args.command)
    except GeospecError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"I/O failure: {e}")
        return TableIOError.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
