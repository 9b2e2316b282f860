"""Command line entry points: simulate, test, mc, ingest."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .cusum import run_test
from .errors import InvalidGamma, InvalidLevel, LsCusumError
from .functionals import RawSeries
from .ingest import (PriceSeries, arctan_transform, column_index, log_returns,
                     read_table, select_column, write_table)
from .montecarlo import (McScenario, estimator_error_cell, pvalue_histogram,
                         size_power_cell)
from .simulate import (TvarSpec, TvvarSpec, ar_companion, regression_scenario,
                       simulate_regression, simulate_tvar, simulate_tvvar,
                       tvar_scenario)

# Demo tvVAR designs: AR(2) companion with a drifting lead coefficient.
_TVVAR_LEAD = {
    "h0": lambda u: 0.3,
    "h1": lambda u: 0.3 + 0.2 * u,
    "h2": lambda u: 0.3 + 0.05 * u,
}


def _parse_levels(text: str):
    levels = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        lvl = float(tok)
        if not 0.0 < lvl < 1.0:
            raise InvalidLevel(f"nominal level must lie in (0, 1), got {lvl}")
        levels.append(lvl)
    if not levels:
        raise InvalidLevel("no nominal levels given")
    return tuple(levels)


def _parse_floats(text: str):
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _write_rows(path, header, rows) -> None:
    """CSV writer for mixed string/float rows (mc tables)."""
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])


def _cmd_simulate(args) -> int:
    if args.model == "tvar":
        if args.scenario == "custom":
            if args.a_const is None:
                raise LsCusumError("custom tvar scenario needs --a-const")
            coefs = _parse_floats(args.a_const)
            if len(coefs) != 1:
                raise LsCusumError("tvar takes exactly one --a-const coefficient")
            alpha = args.alpha_const
            spec = TvarSpec(
                n=args.n, a=lambda u, v=coefs[0]: v,
                sigma=lambda u, v=args.sigma_const: v,
                alpha=None if alpha is None else (lambda u, v=alpha: v),
                burn_in=args.burn_in,
            )
        else:
            spec = tvar_scenario(args.scenario, args.n, burn_in=args.burn_in)
        series = simulate_tvar(spec, args.seed)
        columns = ["x"]
        data = series.data
    elif args.model == "tvvar":
        if args.scenario == "custom":
            if args.a_const is None:
                raise LsCusumError("custom tvvar scenario needs --a-const")
            coefs = _parse_floats(args.a_const)
        else:
            coefs = [_TVVAR_LEAD[args.scenario], 0.2]
        d = len(coefs)
        spec = TvvarSpec(n=args.n, d=d, A=ar_companion(coefs),
                         B=lambda u, _d=d: np.eye(_d),
                         mu=lambda u, _d=d: np.zeros(_d),
                         truncation=args.burn_in)
        series = simulate_tvvar(spec, args.seed)
        columns = [f"x{i + 1}" for i in range(d)]
        data = series.data
    else:
        if args.scenario == "custom":
            raise LsCusumError("custom regression designs are library-only; "
                               "use h0, h1, or h2")
        spec = regression_scenario(args.scenario, args.n, burn_in=args.burn_in)
        response, covariates = simulate_regression(spec, args.seed)
        columns = ["z"] + [f"w{i + 1}" for i in range(covariates.d_raw)]
        data = np.column_stack([response.data, covariates.data])
    write_table(args.out, columns, data)
    print(f"wrote {data.shape[0]} x {data.shape[1]} series to {args.out}")
    return 0


def _cmd_test(args) -> int:
    columns, data = read_table(args.infile)
    if args.functional.startswith("regression"):
        resp = column_index(columns, args.column, data.shape[1])
        others = [i for i in range(data.shape[1]) if i != resp]
        raw = RawSeries(np.column_stack([data[:, resp], data[:, others]]))
    else:
        raw = RawSeries(select_column(columns, data, args.column))
    report = run_test(
        raw, args.functional, seed=args.seed, lag_factor=args.c, lag=args.lag,
        offset=args.offset, block_len=args.block_len, bandwidth=args.bandwidth,
        boot_m=args.boot_m, levels=_parse_levels(args.levels),
        weighting=args.bootstrap_weight,
    )
    payload = json.dumps(report.to_dict(), indent=2)
    if args.out_report:
        with open(args.out_report, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
        print(f"statistic = {report.statistic:.6g}, p-value = {report.p_value:.4g}")
        for level, cv in sorted(report.critical_values.items()):
            verdict = "reject" if report.rejects(level) else "retain"
            print(f"  level {level:g}: critical value {cv:.6g} -> {verdict}")
        print(f"wrote report to {args.out_report}")
    else:
        print(payload)
    if args.out_paths:
        from .plotting import plot_cusum, plot_integrated

        prefix = args.out_paths
        mn, tn = report.integrated_estimate, report.cusum_path
        write_table(f"{prefix}_integrated.csv", ["u", "value"],
                    np.column_stack([mn.grid(), mn.values]))
        write_table(f"{prefix}_cusum.csv", ["u", "value"],
                    np.column_stack([tn.grid(), tn.values]))
        levels = sorted(report.critical_values)
        write_table(f"{prefix}_thresholds.csv", ["level", "critical_value"],
                    np.column_stack([levels,
                                     [report.critical_values[l] for l in levels]]))
        plot_integrated(mn, f"{prefix}_integrated.png")
        plot_cusum(tn, report.critical_values, report.u_n, f"{prefix}_cusum.png")
        print(f"wrote paths and figures with prefix {prefix}")
    return 0


def _table_scenarios(args):
    return [s.strip() for s in args.scenarios.split(",") if s.strip()]


def _cmd_mc(args) -> int:
    n_list = [int(tok) for tok in args.n_list.split(",") if tok.strip()]
    levels = _parse_levels(args.levels)
    rows = []
    if args.table in ("size-power", "ols"):
        model = "tvar-autocorr" if args.table == "size-power" else "regression-coef"
        for n in n_list:
            for scenario in _table_scenarios(args):
                cell = size_power_cell(
                    McScenario(model, scenario, n, reps=args.reps, boot_m=args.boot_m,
                               c=args.c, levels=levels, master_seed=args.seed),
                    progress=True)
                for level in levels:
                    rows.append([model, scenario, n, args.c, level,
                                 cell["rates"][level], args.reps, args.boot_m,
                                 cell["mean_runtime"]])
        _write_rows(args.out, ["model", "scenario", "n", "c", "level", "rate",
                               "reps", "boot_m", "mean_runtime"], rows)
    elif args.table == "estimator-error":
        for n in n_list:
            for scenario in _table_scenarios(args):
                cell = estimator_error_cell(
                    McScenario("tvar-autocorr", scenario, n, reps=args.reps,
                               boot_m=args.boot_m, c=args.c, levels=levels,
                               master_seed=args.seed),
                    progress=True)
                for estimator in ("linearized", "plugin"):
                    rows.append([scenario, n, args.c, estimator,
                                 cell[estimator]["mae"], cell[estimator]["bias"],
                                 cell["target"], args.reps])
        _write_rows(args.out, ["scenario", "n", "c", "estimator", "mae", "bias",
                               "target", "reps"], rows)
    else:
        from .plotting import plot_pvalue_histogram

        for n in n_list:
            pvals, ks = pvalue_histogram(
                McScenario("tvar-autocorr", "h0", n, reps=args.reps,
                           boot_m=args.boot_m, c=args.c, levels=levels,
                           master_seed=args.seed),
                progress=True)
            for rep, p in enumerate(pvals):
                rows.append([n, rep, float(p), ks])
            base = args.out[:-4] if args.out.endswith(".csv") else args.out
            suffix = f"_n{n}" if len(n_list) > 1 else ""
            plot_pvalue_histogram(pvals, f"{base}{suffix}.png",
                                  title=f"Null p-values, n = {n}")
            print(f"n = {n}: KS distance from uniform = {ks:.4f}")
        _write_rows(args.out, ["n", "rep", "p_value", "ks"], rows)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_ingest(args) -> int:
    columns, data = read_table(args.infile)
    column = select_column(columns, data, args.price_col)
    if args.log_returns:
        series = log_returns(PriceSeries(column))
    else:
        series = RawSeries(column)
    if args.arctan_gamma.lower() != "none":
        try:
            gamma = float(args.arctan_gamma)
        except ValueError:
            raise InvalidGamma(
                f"--arctan-gamma expects a positive real or 'none', "
                f"got '{args.arctan_gamma}'") from None
        series = arctan_transform(series, gamma)
    write_table(args.out, ["x"], series.data)
    print(f"wrote {series.n} values to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lscusum",
        description="Integrated-parameter estimation and bootstrap CUSUM "
                    "change-point tests for locally stationary time series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate a simulated series as CSV")
    sim.add_argument("--model", choices=("tvar", "tvvar", "regression"), required=True)
    sim.add_argument("--scenario", choices=("h0", "h1", "h2", "custom"), default="h0")
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--burn-in", type=int, default=1000)
    sim.add_argument("--a-const", default=None,
                     help="custom scenario coefficients (comma separated)")
    sim.add_argument("--sigma-const", type=float, default=1.0)
    sim.add_argument("--alpha-const", type=float, default=None,
                     help="Gamma shape for custom tvar; default Gaussian")
    sim.add_argument("--out", required=True)
    sim.set_defaults(func=_cmd_simulate)

    test = sub.add_parser("test", help="run the change-point test on a CSV column")
    test.add_argument("--in", dest="infile", required=True)
    test.add_argument("--column", default="0",
                      help="column name or 0-based index; for regression "
                           "functionals this is the response, remaining columns "
                           "are the covariates")
    test.add_argument("--functional", default="mean",
                      help="mean | variance | autocorr:<h> | kurtosis | skewness "
                           "| cv | regression:<j>")
    test.add_argument("--c", type=float, default=0.1,
                      help="lag factor in lag = ceil(c log(m)^2)")
    test.add_argument("--lag", type=int, default=None)
    test.add_argument("--offset", type=int, default=None)
    test.add_argument("--block-len", type=int, default=None)
    test.add_argument("--bandwidth", type=int, default=None,
                      help="pilot bandwidth; default cross-validated")
    test.add_argument("--boot-m", type=int, default=1000)
    test.add_argument("--seed", type=int, default=0)
    test.add_argument("--levels", default="0.05,0.10")
    test.add_argument("--bootstrap-weight", choices=("adjusted", "literal"),
                      default="adjusted")
    test.add_argument("--out-report", default=None, help="report JSON path")
    test.add_argument("--out-paths", default=None,
                      help="prefix for path CSVs and PNG figures")
    test.set_defaults(func=_cmd_test)

    mc = sub.add_parser("mc", help="Monte Carlo tables")
    mc.add_argument("--table", choices=("size-power", "estimator-error",
                                        "pvalues", "ols"), required=True)
    mc.add_argument("--n-list", required=True, help="comma separated sample sizes")
    mc.add_argument("--scenarios", default="h0,h1,h2")
    mc.add_argument("--reps", type=int, default=500)
    mc.add_argument("--boot-m", type=int, default=200)
    mc.add_argument("--c", type=float, default=0.1)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--levels", default="0.05,0.10")
    mc.add_argument("--out", required=True)
    mc.set_defaults(func=_cmd_mc)

    ing = sub.add_parser("ingest", help="prices CSV to test-ready returns CSV")
    ing.add_argument("--in", dest="infile", required=True)
    ing.add_argument("--price-col", default="0")
    ing.add_argument("--log-returns", action="store_true")
    ing.add_argument("--arctan-gamma", default="none",
                     help="apply arctan(d/gamma); 'none' to skip")
    ing.add_argument("--out", required=True)
    ing.set_defaults(func=_cmd_ingest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LsCusumError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
