"""Command-line front end.

Usage::

    degchain compute  --model ba --m 3 --t 10000 --format csv
    degchain simulate --model ba --m 1 --t 50000 --reps 20 --seed 7
    degchain fit      dist.csv [more.json ...] [--range tail|default|all]
    degchain compare  --model ba --m 1 --t 50000 --reps 20
    degchain tables   --family power --scale 0.1

Exit codes: 0 success, 1 usage error, 2 computation error.  Output goes to
``--output``, else into ``$DEGCHAIN_OUTPUT_DIR`` when set, else stdout.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from degchain import __version__
from degchain.analytic import master_equation_pk, mean_field_pk, power_model_prediction
from degchain.errors import DegchainError
from degchain.evolve import DEFAULT_EPS, DegreeDistribution, degree_distribution
from degchain.fit import (
    FitResult,
    common_tail_range,
    estimate_nonstationary_exponent,
    fit_arrays,
    fit_power_law,
    tail_fit_range,
)
from degchain.kernel import Family, GrowthModel, default_start, segment_plan
from degchain.sim import empirical_stderr, simulate_many

OUTPUT_DIR_ENV = "DEGCHAIN_OUTPUT_DIR"
EXIT_USAGE = 1
EXIT_COMPUTE = 2

# (m, t) rows of the published tables for every family
TABLE_ROWS = [(1, 150_000), (3, 100_000), (3, 150_000), (3, 200_000), (5, 150_000)]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _model_from_args(args) -> GrowthModel:
    try:
        family = Family.parse(args.model)
        return GrowthModel(family, args.m, theta=args.theta, m0=args.m0)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _engine_block(args) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "output")}
    return {"name": "degchain", "version": __version__, "config": config}


# --- serialisation -----------------------------------------------------------


def distribution_csv(dist: DegreeDistribution, loglog: bool = False, se=None) -> str:
    buf = io.StringIO()
    buf.write("# meta: " + json.dumps(dist.metadata(), sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    header = ["k", "p"]
    if se is not None:
        header.append("se")
    if loglog:
        header += ["log10k", "log10p"]
    writer.writerow(header)
    for j, (k, p) in enumerate(zip(dist.k, dist.p)):
        row = [str(int(k)), _fmt(p)]
        if se is not None:
            row.append(_fmt(se[j]))
        if loglog:
            row += [_fmt(math.log10(k)), _fmt(math.log10(p))]
        writer.writerow(row)
    return buf.getvalue()


def distribution_json(dist: DegreeDistribution, engine: dict, loglog: bool = False, se=None) -> str:
    doc = {"engine": engine, "metadata": dist.metadata()}
    doc["entries"] = [{"k": int(k), "p": float(p)} for k, p in zip(dist.k, dist.p)]
    if se is not None:
        for entry, s in zip(doc["entries"], se):
            entry["se"] = float(s)
    if loglog:
        doc["loglog"] = {
            "log10k": np.log10(dist.k).tolist(),
            "log10p": np.log10(dist.p).tolist(),
        }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def read_distribution(path: str | Path) -> tuple[DegreeDistribution, bool]:
    """Load a distribution written by ``compute`` or ``simulate`` (CSV or JSON).

    Returns the distribution and whether run metadata was present.  Plain
    ``k,p`` CSV files are accepted; their run parameters are unknown, so only
    explicit or full-support fit ranges apply to them.
    """
    text = Path(path).read_text()
    meta = None
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        meta = doc.get("metadata")
        k = [e["k"] for e in doc["entries"]]
        p = [e["p"] for e in doc["entries"]]
    else:
        lines = text.splitlines()
        body = []
        for line in lines:
            if line.startswith("# meta:"):
                meta = json.loads(line[len("# meta:") :])
            elif line.strip() and not line.startswith("#"):
                body.append(line)
        rows = list(csv.DictReader(body))
        if rows and ("k" not in rows[0] or "p" not in rows[0]):
            raise ValueError(f"{path}: CSV needs 'k' and 'p' columns")
        k = [int(float(r["k"])) for r in rows]
        p = [float(r["p"]) for r in rows]
    order = np.argsort(k, kind="stable")
    k = np.asarray(k, dtype=np.int64)[order]
    p = np.asarray(p, dtype=float)[order]
    if meta:
        m = meta["model"]
        model = GrowthModel(
            Family(m["family"]), m["m"], theta=m.get("theta", 0.0), m0=m.get("m0")
        )
        dist = DegreeDistribution(
            k=k,
            p=p,
            t=int(meta["t"]),
            S=int(meta["S"]),
            model=model,
            eps=float(meta.get("eps", 0.0)),
            dropped_mass_fraction=float(meta.get("dropped_mass_fraction", 0.0)),
        )
        return dist, True
    # placeholder run parameters; never used for range selection
    return DegreeDistribution(k=k, p=p, t=max(len(k), 1), S=1, model=GrowthModel.constant(1)), False


def _emit(text: str, args, default_name: str) -> None:
    out = args.output
    if out is None and os.environ.get(OUTPUT_DIR_ENV):
        out = Path(os.environ[OUTPUT_DIR_ENV]) / default_name
    if out is None or str(out) == "-":
        sys.stdout.write(text)
        return
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)


def _run_name(model: GrowthModel, t: int, suffix: str) -> str:
    tag = model.family.value
    if model.family is Family.POWER:
        tag += f"-theta{model.theta:g}"
    return f"{tag}-m{model.m}-t{t}.{suffix}"


# --- commands ----------------------------------------------------------------


def cmd_compute(args) -> None:
    model = _model_from_args(args)
    dist = degree_distribution(model, args.t, S=args.S, eps=args.eps, workers=args.workers)
    if args.format == "csv":
        text = distribution_csv(dist, loglog=args.loglog)
    else:
        text = distribution_json(dist, _engine_block(args), loglog=args.loglog)
    _emit(text, args, _run_name(model, args.t, args.format))


def cmd_simulate(args) -> None:
    model = _model_from_args(args)
    S = args.S if args.S is not None else 1
    runs = simulate_many(model, args.t, args.seed, args.reps)
    k, mean, se = empirical_stderr(runs, S)
    keep = mean > 0
    dist = DegreeDistribution(k=k[keep], p=mean[keep], t=args.t, S=S, model=model)
    se = se[keep]
    if args.format == "csv":
        text = distribution_csv(dist, loglog=args.loglog, se=se)
    else:
        text = distribution_json(dist, _engine_block(args), loglog=args.loglog, se=se)
    _emit(text, args, "sim-" + _run_name(model, args.t, args.format))


def _fit_one(dist: DegreeDistribution, args, known: bool, window=None) -> FitResult:
    if args.k_min is not None or args.k_max is not None or window is not None:
        lo, hi = window if window is not None else (args.k_min, args.k_max)
        return fit_arrays(dist.k, dist.p, lo, hi)
    if not known or args.range == "all":
        return fit_arrays(dist.k, dist.p)
    if args.range == "default":
        return fit_power_law(dist)
    lo, hi = tail_fit_range(dist)
    return fit_arrays(dist.k, dist.p, lo, hi)


def cmd_fit(args) -> None:
    loaded = [read_distribution(p) for p in args.inputs]
    dists = [d for d, _ in loaded]
    known = [kn for _, kn in loaded]
    if len(dists) == 1:
        fit = _fit_one(dists[0], args, known[0])
        doc = {"input": str(args.inputs[0]), **fit.to_dict()}
        _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args, "fit.json")
        return
    rows = []
    for path, dist, kn in zip(args.inputs, dists, known):
        fit = _fit_one(dist, args, kn)
        rows.append({"input": str(path), "model": dist.model.to_dict() if kn else None,
                     "m": dist.model.m if kn else None, "t": dist.t if kn else None,
                     **fit.to_dict()})
    doc = {"rows": rows, "z": _z_by_group(dists, known, args)}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args, "fit-table.json")


def _z_by_group(dists, known, args) -> list[dict]:
    """Non-stationary exponent for every model shared by runs at 2+ distinct times."""
    groups: dict[GrowthModel, list[DegreeDistribution]] = {}
    for dist, kn in zip(dists, known):
        if kn:
            groups.setdefault(dist.model, []).append(dist)
    out = []
    for model, group in groups.items():
        if len({d.t for d in group}) < 2:
            continue
        window = None
        if args.k_min is None and args.k_max is None and args.range == "tail":
            window = common_tail_range(group)
        fits = [(d.t, _fit_one(d, args, True, window)) for d in group]
        out.append({"model": model.to_dict(), "t": [d.t for d in group],
                    "window": list(window) if window else None,
                    "z": estimate_nonstationary_exponent(fits)})
    return out


def analytic_baseline(model: GrowthModel, k: int, t: int) -> dict:
    out = {}
    if model.family is Family.CONSTANT or (model.family is Family.POWER and model.theta == 0.0):
        if k >= model.m:
            out["mean_field"] = mean_field_pk(model.m, k)
            out["master_equation"] = master_equation_pk(model.m, k)
    elif model.family is Family.POWER:
        pred = power_model_prediction(model.m, model.theta)
        out["continuum"] = pred.coefficient_at(t) * float(k) ** -pred.gamma
    return out


def cmd_compare(args) -> None:
    model = _model_from_args(args)
    S = args.S if args.S is not None else default_start(model, args.t)
    dist = degree_distribution(model, args.t, S=S, eps=args.eps, workers=args.workers)
    runs = simulate_many(model, args.t, args.seed, args.reps)
    k_sim, p_sim, se = empirical_stderr(runs, S)
    k_hi = args.k_max if args.k_max is not None else int(dist.k[-1])
    rows = []
    for k in dist.k[dist.k <= k_hi]:
        k = int(k)
        pe = dist.prob(k)
        ps = float(p_sim[k]) if k < len(p_sim) else 0.0
        sk = float(se[k]) if k < len(se) else float("nan")
        diff = ps - pe
        rows.append({
            "k": k,
            "p_evolve": pe,
            "p_sim": ps,
            "se": sk,
            "abs_diff": abs(diff),
            "rel_diff": abs(diff) / pe if pe > 0 else None,
            "z_score": diff / sk if sk > 0 else None,
            "analytic": analytic_baseline(model, k, args.t),
        })
    z_scores = [abs(r["z_score"]) for r in rows if r["z_score"] is not None]
    doc = {
        "engine": _engine_block(args),
        "metadata": dist.metadata(),
        "reps": args.reps,
        "max_abs_z_score": max(z_scores) if z_scores else None,
        "rows": rows,
    }
    if model.family is Family.POWER:
        pred = power_model_prediction(model.m, model.theta)
        doc["prediction"] = {"gamma": pred.gamma, "c": pred.c, "z": pred.z, "beta": pred.beta}
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args, "compare-" + _run_name(model, args.t, "json"))


def cmd_tables(args) -> None:
    families = [Family.CONSTANT, Family.POWER, Family.LOGARITHMIC]
    if args.family != "all":
        families = [Family.parse(args.family)]
    tables = []
    for family in families:
        rows = []
        by_m: dict[int, list[DegreeDistribution]] = {}
        for m, t in TABLE_ROWS:
            t = max(int(round(t * args.scale)), 10)
            model = GrowthModel(family, m, theta=args.theta)
            dist = degree_distribution(model, t, eps=args.eps, workers=args.workers)
            fit = fit_arrays(dist.k, dist.p, *tail_fit_range(dist))
            rows.append({"m": m, "t": t, "S": dist.S, "gamma": fit.gamma, "c": fit.c,
                         "k_min": fit.k_min, "k_max": fit.k_max})
            by_m.setdefault(m, []).append(dist)
        table = {"family": family.value, "rows": rows, "z": {}}
        if family is Family.POWER:
            table["theta"] = args.theta
        for m, group in by_m.items():
            if len(group) > 1:
                lo, hi = common_tail_range(group)
                fits = [(d.t, fit_arrays(d.k, d.p, lo, hi)) for d in group]
                table["z"][str(m)] = estimate_nonstationary_exponent(fits)
        if family is not Family.CONSTANT:
            t_max = max(int(round(t * args.scale)) for _, t in TABLE_ROWS)
            probe = GrowthModel(family, 1, theta=args.theta)
            table["segments_m1"] = segment_plan(probe, default_start(probe, t_max), t_max).to_list()
        tables.append(table)
    doc = {"engine": _engine_block(args), "tables": tables}
    if args.format == "json":
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["family", "m", "t", "gamma", "c"])
        for table in tables:
            for r in table["rows"]:
                writer.writerow([table["family"], r["m"], r["t"], _fmt(r["gamma"]), _fmt(r["c"])])
        text = buf.getvalue()
    _emit(text, args, f"tables.{args.format}")


# --- argument parsing --------------------------------------------------------


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _non_negative_float(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text}")
    return value


def _add_model_args(p) -> None:
    p.add_argument("--model", default="ba", help="ba | power | log")
    p.add_argument("--m", type=_positive_int, default=1)
    p.add_argument("--theta", type=float, default=0.2, help="power-model exponent")
    p.add_argument("--m0", type=_positive_int, default=None, help="seed-graph size (simulation)")
    p.add_argument("--t", type=_positive_int, required=True)
    p.add_argument("--S", type=_positive_int, default=None, help="first node time included")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="degchain", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="degree distribution by density evolution")
    _add_model_args(p)
    p.add_argument("--eps", type=_non_negative_float, default=DEFAULT_EPS)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--loglog", action="store_true", help="add log10k, log10p columns")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("simulate", help="Monte Carlo degree distribution")
    _add_model_args(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=_positive_int, default=20)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--loglog", action="store_true")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("fit", help="power-law fit of one or more distribution files")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--range", choices=["tail", "default", "all"], default="tail")
    p.add_argument("--k-min", type=int, default=None)
    p.add_argument("--k-max", type=int, default=None)
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("compare", help="density evolution vs simulation vs closed forms")
    _add_model_args(p)
    p.add_argument("--eps", type=_non_negative_float, default=DEFAULT_EPS)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=_positive_int, default=20)
    p.add_argument("--k-max", type=int, default=None, help="largest degree reported")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("tables", help="exponent/coefficient tables for the three families")
    p.add_argument("--family", default="all", help="ba | power | log | all")
    p.add_argument("--theta", type=float, default=0.2)
    p.add_argument("--scale", type=float, default=1.0, help="multiplier on the table times")
    p.add_argument("--eps", type=_non_negative_float, default=DEFAULT_EPS)
    p.add_argument("--workers", type=_positive_int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        print(f"degchain: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegchainError, ValueError, OSError) as exc:
        print(f"degchain: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return 0


if __name__ == "__main__":
    sys.exit(main())
