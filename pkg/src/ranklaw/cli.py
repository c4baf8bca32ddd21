"""Command-line entry point: ``ranklaw {count,estimate,fit,plot,synth}``."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import report
from .corpus import TokenizationConfig, build_rank_list, count_file, format_rank_tsv
from .errors import RankLawError
from .estimator import ParameterSet
from .search import GammaGrid, GammaSearchTrace, best_index, default_threads, read_trace_tsv, search
from .series import load_series
from .synth import synthesize


def _add_search_flags(p):
    g = p.add_argument_group("gamma search")
    g.add_argument("--gamma-lo", type=float, default=0.0, help="lowest log10 gamma (default 0)")
    g.add_argument("--gamma-hi", type=float, default=10.0, help="highest log10 gamma (default 10)")
    g.add_argument("--gamma-step", type=float, default=1e-3, help="grid step in log10 gamma (default 0.001)")
    g.add_argument("--linear-variance", action="store_true",
                   help="score by variance of C_i instead of log10 C_i")
    g.add_argument("--jacobian-factor", action=argparse.BooleanOptionalAction, default=False,
                   help="include the extra t_i factor in each C_i (default: off)")
    g.add_argument("--coarse-to-fine", action="store_true",
                   help="scan at step 0.1 first, then refine around the optimum")


def _search_kwargs(args) -> dict:
    return {
        "linear_variance": args.linear_variance,
        "jacobian_factor": args.jacobian_factor,
        "coarse_to_fine": args.coarse_to_fine,
    }


def _grid(args) -> GammaGrid:
    return GammaGrid(args.gamma_lo, args.gamma_hi, args.gamma_step)


def _emit(text: str, out) -> None:
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _trace_path_for(tsv: Path, out) -> Path:
    if out is not None and str(out) != "-":
        return Path(out).with_suffix(".trace.tsv")
    return Path(tsv.stem + ".trace.tsv")


def cmd_count(args) -> int:
    config = TokenizationConfig(
        unit=args.unit,
        lowercase=args.lowercase,
        strip_punctuation=args.strip_punct,
        treat_punct_as_tokens=args.punct_as_tokens,
        skip_markup_lines=args.skip_markup,
        drop_numerals=args.drop_numerals,
    )
    counts = count_file(args.file, config, args.encoding)
    _emit(format_rank_tsv(build_rank_list(counts)), args.output)
    return 0


def _estimate_one(tsv: Path, out, trace_path, args) -> report.RunResult:
    series = load_series(tsv)
    result, _ = report.run_estimate(
        series, args.id or tsv.stem, _grid(args), trace_path, **_search_kwargs(args)
    )
    result.provenance["input"] = str(tsv)
    _emit(result.to_json() + "\n", out)
    return result


def cmd_estimate(args) -> int:
    src = Path(args.tsv)
    if src.is_dir():
        outdir = Path(args.output or ".")
        outdir.mkdir(parents=True, exist_ok=True)
        files = sorted(src.glob("*.tsv"))
        if not files:
            raise RankLawError(f"no .tsv files in {src}")

        def one(f):
            return _estimate_one(f, outdir / f"{f.stem}.json", outdir / f"{f.stem}.trace.tsv", args)

        with ThreadPoolExecutor(max_workers=default_threads()) as pool:
            list(pool.map(one, files))
        return 0
    trace = Path(args.trace) if args.trace else _trace_path_for(src, args.output)
    _estimate_one(src, args.output, trace, args)
    return 0


def cmd_fit(args) -> int:
    src = Path(args.tsv)
    series = load_series(src)
    if args.init:
        init_doc = Path(args.init).read_text(encoding="utf-8")
        try:
            result = report.RunResult.from_json(init_doc)
        except RankLawError:
            params = ParameterSet.from_dict(json.loads(init_doc))
            result = report.RunResult(
                corpus_id=args.id or src.stem,
                estimated=params,
                rmse_estimated=report.rmse(series, params),
                provenance={"init": str(args.init)},
            )
    else:
        trace = Path(args.trace) if args.trace else _trace_path_for(src, args.output)
        result, _ = report.run_estimate(
            series, args.id or src.stem, _grid(args), trace, **_search_kwargs(args)
        )
        result.provenance["input"] = str(src)
    report.attach_fit(result, series)
    _emit(result.to_json() + "\n", args.output)
    return 0


def cmd_plot(args) -> int:
    series = load_series(args.tsv)
    result = report.load(args.json)
    trace_file = Path(result.trace_path) if result.trace_path else None
    if trace_file is not None and trace_file.exists():
        cands = read_trace_tsv(trace_file)
        trace = GammaSearchTrace(
            candidates=cands,
            best_index=best_index(cands),
            boundary_hit=result.diagnostics.get("boundary_hit", False),
            flat_tail=result.diagnostics.get("flat_tail", False),
        )
    else:
        prov = result.provenance
        g = prov.get("grid", {})
        _, trace = search(
            series,
            GammaGrid(g.get("lo", 0.0), g.get("hi", 10.0), g.get("step", 1e-3)),
            linear_variance=prov.get("linear_variance", False),
            jacobian_factor=prov.get("jacobian_factor", False),
            coarse_to_fine=prov.get("coarse_to_fine", False),
        )
    paths = report.emit_plot_data(series, result, trace, args.outdir)
    for key in ("gamma", "curve", "script"):
        print(paths[key])
    return 0


def cmd_synth(args) -> int:
    params = ParameterSet(args.alpha, args.beta, args.log10_gamma, args.log10_C)
    _emit(format_rank_tsv(synthesize(params, args.max_rank)), args.output)
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ranklaw",
        description="Estimate f(r) = C r^-alpha (r+gamma)^-beta from rank-frequency data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="tokenize a text file into a rank-frequency TSV")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("--unit", choices=["word", "character"], default="word")
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--strip-punct", action="store_true", help="drop punctuation at token edges")
    p.add_argument("--punct-as-tokens", action="store_true", help="split punctuation into separate tokens")
    p.add_argument("--skip-markup", action="store_true",
                   help="ignore lines starting with '<' (chapter/speaker tags)")
    p.add_argument("--drop-numerals", action="store_true",
                   help="ignore word tokens made only of digits and punctuation")
    p.add_argument("--encoding", default="utf-8")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("estimate", help="moment estimate with gamma grid search")
    p.add_argument("tsv", help="rank-frequency TSV, or a directory of them for batch mode")
    p.add_argument("-o", "--output", help="result JSON (output directory in batch mode)")
    p.add_argument("--trace", help="trace TSV path (default: next to the output)")
    p.add_argument("--id", help="corpus id (default: input file stem)")
    _add_search_flags(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("fit", help="least-squares refinement, estimating first unless --init")
    p.add_argument("tsv")
    p.add_argument("--init", help="run-result JSON from 'estimate', or a bare parameter JSON")
    p.add_argument("-o", "--output")
    p.add_argument("--trace")
    p.add_argument("--id")
    _add_search_flags(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("plot", help="write plot data and a gnuplot script")
    p.add_argument("tsv")
    p.add_argument("json")
    p.add_argument("--outdir", default=".")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("synth", help="synthetic rank-frequency TSV from known parameters")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--log10-gamma", type=float, required=True)
    p.add_argument("--log10-C", dest="log10_C", type=float, required=True)
    p.add_argument("--max-rank", type=int, required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "strip_punct", False) and getattr(args, "punct_as_tokens", False):
        parser.error("--strip-punct and --punct-as-tokens are mutually exclusive")
    try:
        return args.func(args)
    except (RankLawError, OSError, ValueError) as exc:
        print(f"ranklaw: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
