"""Command line interface: ``fit``, ``simulate``, and ``bandwidth`` subcommands."""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import nullcontext

from scipy.special import ndtri

from .data import build_dataset, expand_node_effects, read_dyad_csv, read_order_csv
from .errors import DyadDataError, NonpositiveVarianceError, UnknownParameterError
from .estimator import DyadicRegression
from .simulate import SimConfig, run_monte_carlo, run_sweep, write_results_csv
from .variance import parse_estimators

__all__ = ["main"]

SCHEMA = "dyadcov/1"


def _add_data_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", required=True, help="dyad CSV: node_i,node_j,y,<regressors>")
    parser.add_argument("--order", required=True, help="node order CSV: node,order_value")
    parser.add_argument(
        "--fixed-effects",
        action="store_true",
        help="append additive node-effect dummy columns (the lowest-ranked node's is dropped)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dyadcov",
        description="OLS inference for dyadic data whose nodes carry an ordering.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    fit = commands.add_parser("fit", help="fit a dyadic regression and report tests")
    _add_data_flags(fit)
    fit.add_argument("--bandwidth", type=int, help="kernel bandwidth override (default: data-driven)")
    fit.add_argument("--sigma-l", type=float, default=1.0, help="scale on the data-driven bandwidth")
    fit.add_argument("--estimators", default="all", help="comma list of estimator names, or 'all'")
    fit.add_argument(
        "--contrast",
        help="regressor to test, by column name or 1-based index (default: last data column)",
    )
    fit.add_argument("--level", type=float, default=0.05, help="nominal size for reject flags")
    fit.add_argument(
        "--psd-fix",
        action="store_true",
        help="clip negative meat eigenvalues before forming sandwiches",
    )
    fit.add_argument("--out", help="write the JSON report here instead of stdout")

    sim = commands.add_parser("simulate", help="Monte Carlo rejection frequencies")
    sim.add_argument("--n", type=int, default=50, help="number of nodes")
    sim.add_argument("--k", type=int, default=10, help="regressors including the intercept")
    sim.add_argument("--rho", type=float, default=0.5, help="node AR(1) coefficient")
    sim.add_argument("--omega", type=float, default=1.0, help="node effect loading")
    sim.add_argument(
        "--gamma", dest="gamma_het", type=float, default=0.5, help="heteroskedasticity strength"
    )
    sim.add_argument("--reps", type=int, default=5000, help="Monte Carlo replications")
    sim.add_argument("--seed", type=int, default=0, help="replication stream key")
    sim.add_argument("--level", type=float, default=0.05, help="nominal test size")
    sim.add_argument("--sigma-l", type=float, default=1.0, help="scale on the selected bandwidth")
    sim.add_argument("--estimators", default="all", help="comma list of estimator names, or 'all'")
    sim.add_argument("--sweep", help="simulation knob to vary (n, k, rho, omega, gamma_het, sigma_l)")
    sim.add_argument("--values", help="comma list of values for the swept knob")
    sim.add_argument("--threads", type=int, default=1, help="worker processes")
    sim.add_argument("--out", help="write the CSV here instead of stdout")

    bw = commands.add_parser("bandwidth", help="report the data-driven bandwidth selection")
    _add_data_flags(bw)
    bw.add_argument("--out", help="write the JSON report here instead of stdout")

    return parser


def _load_dataset(args):
    rows, x_names = read_dyad_csv(args.data)
    order = read_order_csv(args.order)
    ds = build_dataset(rows, order, x_names)
    base_names = ds.x_names
    if args.fixed_effects:
        ds = expand_node_effects(ds)
    return ds, base_names


def _resolve_contrast(token: str | None, names: tuple[str, ...], base_names: tuple[str, ...]) -> int:
    """1-based column index for a contrast given by name or numeric index."""
    if token is None:
        return len(base_names)
    token = token.strip()
    try:
        index = int(token)
    except ValueError:
        if token in names:
            return names.index(token) + 1
        raise DyadDataError(f"contrast {token!r} is not a regressor column name") from None
    if not 1 <= index <= len(names):
        raise DyadDataError(f"contrast index {index} outside 1..{len(names)}")
    return index


def _write_json(document: dict, out_path: str | None) -> None:
    with open(out_path, "w") if out_path else nullcontext(sys.stdout) as fh:
        json.dump(document, fh, indent=2)
        fh.write("\n")


def _selection_block(selection) -> dict | None:
    if selection is None:
        return None
    return {
        "L": selection.L,
        "h_max": selection.h_max,
        "threshold": selection.threshold,
        "rho_max": [float(r) for r in selection.rho_max],
        "defaulted": selection.defaulted,
    }


def cmd_fit(args) -> int:
    ds, base_names = _load_dataset(args)
    kinds = parse_estimators(args.estimators)
    index = _resolve_contrast(args.contrast, ds.x_names, base_names)
    model = DyadicRegression(
        estimators=kinds,
        bandwidth=args.bandwidth,
        sigma_l=args.sigma_l,
        psd_fix=args.psd_fix,
    ).fit_dataset(ds)
    critical = float(-ndtri(args.level / 2.0))

    estimators = {}
    for kind in kinds:
        est = model.variances_[kind.value]
        entry = {
            "beta": [float(b) for b in model.coef_],
            "se": None,
            "t": None,
            "p": None,
            "reject": None,
            "bandwidth": est.bandwidth,
            "min_eigenvalue": est.min_eigenvalue,
            "psd_fixed": est.psd_fixed,
            "pseudo_inverse_count": est.pseudo_inverse_count,
            "error": None,
        }
        try:
            test = model.contrast_test(index, null_value=0.0, kind=kind)
        except NonpositiveVarianceError as exc:
            entry["error"] = str(exc)
        else:
            entry.update(
                se=test.se, t=test.t, p=test.p, reject=bool(abs(test.t) > critical)
            )
        estimators[kind.value] = entry

    report = {
        "schema": SCHEMA,
        "dataset": {
            "nodes": ds.n,
            "dyads": ds.m,
            "regressors": ds.k,
            "complete": ds.is_complete,
        },
        "bandwidth": {
            "used": model.bandwidth_used_,
            "sigma_l": args.sigma_l,
            "override": args.bandwidth,
            "selection": _selection_block(model.bandwidth_selection_),
        },
        "contrast": {
            "name": ds.x_names[index - 1],
            "index": index,
            "null": 0.0,
            "level": args.level,
        },
        "rank_deficient": model.rank_deficient_,
        "estimators": estimators,
    }
    _write_json(report, args.out)
    return 0


def cmd_bandwidth(args) -> int:
    from .ols import fit_ols
    from .bandwidth import select_bandwidth
    from .variance import node_scores

    ds, _ = _load_dataset(args)
    fit = fit_ols(ds)
    selection = select_bandwidth(node_scores(fit.scores, ds.dyads, ds.n))
    document = {"schema": SCHEMA}
    document.update(_selection_block(selection))
    _write_json(document, args.out)
    return 0


def cmd_simulate(args) -> int:
    cfg = SimConfig(
        n=args.n,
        k=args.k,
        rho=args.rho,
        omega=args.omega,
        gamma_het=args.gamma_het,
        reps=args.reps,
        seed=args.seed,
        level=args.level,
        estimators=parse_estimators(args.estimators),
        sigma_l=args.sigma_l,
    )
    if (args.sweep is None) != (args.values is None):
        raise UnknownParameterError("--sweep and --values must be given together")
    if args.sweep is not None:
        values = [token.strip() for token in args.values.split(",") if token.strip()]
        if not values:
            raise UnknownParameterError("--values is empty")
        results = run_sweep(cfg, args.sweep, values, threads=args.threads)
        rows = list(zip(values, results))
    else:
        rows = [("", run_monte_carlo(cfg, threads=args.threads))]
    with open(args.out, "w", newline="") if args.out else nullcontext(sys.stdout) as fh:
        write_results_csv(fh, rows)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {"fit": cmd_fit, "simulate": cmd_simulate, "bandwidth": cmd_bandwidth}
    try:
        return handlers[args.command](args)
    except (DyadDataError, UnknownParameterError, ValueError, OSError) as exc:
        print(f"dyadcov {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
