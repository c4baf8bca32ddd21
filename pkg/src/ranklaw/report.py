"""Run results, JSON serialization and plot-data emission."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import FormatError
from .estimator import ParameterSet
from .refine import FitReport, predict_log_f, refine, rmse
from .search import GammaGrid, GammaSearchTrace, search, write_trace_tsv
from .series import RankFrequencySeries

SCHEMA_VERSION = 1


@dataclass
class RunResult:
    corpus_id: str
    estimated: ParameterSet
    rmse_estimated: float
    trace_path: str = ""
    fitted: Optional[ParameterSet] = None
    rmse_fitted: Optional[float] = None
    diagnostics: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    fit: Optional[dict] = None

    def __post_init__(self):
        if not (math.isfinite(self.rmse_estimated) and self.rmse_estimated >= 0):
            raise FormatError(f"rmse_estimated must be finite and >= 0, got {self.rmse_estimated}")
        if self.fitted is not None:
            if self.rmse_fitted is None or not (
                math.isfinite(self.rmse_fitted) and self.rmse_fitted >= 0
            ):
                raise FormatError("fitted parameters need a finite rmse_fitted")

    def as_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "corpus_id": self.corpus_id,
            "estimated": self.estimated.as_dict(),
            "rmse_estimated": self.rmse_estimated,
            "fitted": None if self.fitted is None else self.fitted.as_dict(),
            "rmse_fitted": self.rmse_fitted,
            "trace_path": self.trace_path,
            "diagnostics": self.diagnostics,
            "provenance": self.provenance,
            "fit": self.fit,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "RunResult":
        try:
            return cls(
                corpus_id=d["corpus_id"],
                estimated=ParameterSet.from_dict(d["estimated"]),
                rmse_estimated=float(d["rmse_estimated"]),
                trace_path=d.get("trace_path", ""),
                fitted=None if d.get("fitted") is None else ParameterSet.from_dict(d["fitted"]),
                rmse_fitted=d.get("rmse_fitted"),
                diagnostics=d.get("diagnostics", {}),
                provenance=d.get("provenance", {}),
                fit=d.get("fit"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"not a run result: {exc}") from None

    @classmethod
    def from_json(cls, text: str) -> "RunResult":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from None


def save(result: RunResult, path) -> None:
    Path(path).write_text(result.to_json() + "\n", encoding="utf-8")


def load(path) -> RunResult:
    return RunResult.from_json(Path(path).read_text(encoding="utf-8"))


def admissible_distance(trace: GammaSearchTrace) -> Optional[float]:
    """log10-gamma distance from the optimum to the nearest admissible candidate.

    0 when the optimum itself is admissible, None when no candidate is.
    """
    ok = trace.column("admissible")
    if not ok.any():
        return None
    lg = trace.column("log10_gamma")
    return float(np.min(np.abs(lg[ok] - trace.best.log10_gamma)))


def run_estimate(
    series: RankFrequencySeries,
    corpus_id: str,
    grid: GammaGrid = GammaGrid(),
    trace_path=None,
    **search_options,
) -> tuple[RunResult, GammaSearchTrace]:
    params, trace = search(series, grid, **search_options)
    if trace_path is not None:
        write_trace_tsv(trace, trace_path)
    result = RunResult(
        corpus_id=corpus_id,
        estimated=params,
        rmse_estimated=rmse(series, params),
        trace_path="" if trace_path is None else str(trace_path),
        diagnostics={
            "boundary_hit": trace.boundary_hit,
            "flat_tail": trace.flat_tail,
            "identifiable": trace.identifiable,
            "admissible_at_best": params.admissible,
            "closed_form_C": trace.closed_form,
            "best_log10_VC": trace.best.log10_VC,
            "distance_to_admissible": admissible_distance(trace),
        },
        provenance={
            **trace.options,
            "vocab_size": series.vocab_size,
            "total_tokens": series.total_tokens,
            "n_points": series.n + 1,
        },
    )
    return result, trace


def attach_fit(result: RunResult, series: RankFrequencySeries, init: Optional[ParameterSet] = None) -> FitReport:
    """Refine from `init` (default: the estimate) and record it on `result`."""
    report = refine(series, init or result.estimated)
    result.fitted = report.refined
    result.rmse_fitted = report.rmse_refined
    result.fit = {
        "initial": report.initial.as_dict(),
        "rmse_initial": report.rmse_initial,
        "iterations": report.iterations,
        "converged": report.converged,
    }
    result.diagnostics["admissible_at_fit"] = report.refined.admissible
    return report


CURVE_HEADER = "log10_r\tlog10_f_data\tyhat_estimated\tyhat_fitted\tabs_err_estimated\tabs_err_fitted"


def curve_table(series: RankFrequencySeries, result: RunResult) -> np.ndarray:
    r, f = series.inner()
    y = np.log10(f.astype(float))
    est = predict_log_f(result.estimated, r)
    fit = predict_log_f(result.fitted, r) if result.fitted is not None else np.full_like(est, np.nan)
    return np.column_stack([np.log10(r.astype(float)), y, est, fit, np.abs(y - est), np.abs(y - fit)])


def _rows(table) -> str:
    return "".join("\t".join(repr(float(v)) for v in row) + "\n" for row in table)


GNUPLOT_TEMPLATE = """\
# two panels sharing the log10 rank / log10 gamma axis
set terminal pngcairo size 800,900
set output '{png}'
set multiplot layout 2,1
set xrange [{xlo}:{xhi}]
set key top right

set ylabel 'log10 V[C(gamma)]'
set arrow 1 from {best},graph 0 to {best},graph 1 nohead lc rgb 'red'
plot '{gamma}' using 1:2 with lines lc rgb 'black' title 'criterion', \\
     '{gamma}' using 1:($5 == 1 ? $2 : 1/0) with lines lw 3 lc rgb 'red' title 'admissible'
unset arrow 1

set xlabel 'log10 r'
set ylabel 'log10 f'
plot '{curve}' using 1:2 with points pt 1 lc rgb 'black' title 'data', \\
     '{curve}' using 1:3 with lines lc rgb 'red' title 'estimated', \\
     '{curve}' using 1:4 with lines lc rgb 'grey' title 'fitted', \\
     '{curve}' using 1:5 with lines lc rgb 'red' notitle, \\
     '{curve}' using 1:6 with lines lc rgb 'grey' notitle
unset multiplot
"""


def emit_plot_data(series: RankFrequencySeries, result: RunResult, trace: GammaSearchTrace, outdir, prefix: str = None) -> dict:
    """Write the gamma-curve TSV, the data/model curve TSV and a gnuplot script.

    Returns the written paths keyed by ``gamma``, ``curve`` and ``script``.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    prefix = prefix or result.corpus_id
    paths = {
        "gamma": outdir / f"{prefix}.gamma.tsv",
        "curve": outdir / f"{prefix}.curve.tsv",
        "script": outdir / f"{prefix}.gp",
    }
    write_trace_tsv(trace, paths["gamma"], mark_optimum=True)
    paths["curve"].write_text("#" + CURVE_HEADER + "\n" + _rows(curve_table(series, result)), encoding="utf-8")
    lg = [c.log10_gamma for c in trace.candidates]
    xhi = max(max(lg), math.log10(series.vocab_size + 1))
    paths["script"].write_text(
        GNUPLOT_TEMPLATE.format(
            png=f"{prefix}.png",
            xlo=min(0.0, min(lg)),
            xhi=xhi,
            best=trace.best.log10_gamma,
            gamma=paths["gamma"].name,
            curve=paths["curve"].name,
        ),
        encoding="utf-8",
    )
    return paths
