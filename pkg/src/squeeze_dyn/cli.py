"""Command-line surface: curve emission, optimal-angle scans, death-time
reports, and the closed-form verification suite.

Exit codes: 0 success, 1 verification failure, 2 usage/validation error,
3 I/O failure. Emitted files carry a machine-parseable '#' header with
every resolved parameter; '--reproducible' drops the timestamp line so
identical configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np

from . import __version__
from ._format import SCHEMA, write_csv
from .analytic import (
    Form,
    curve_evaluator,
    optimal_alpha,
    squeezing_curve,
)
from .deathtimes import death_report, default_coarse_step
from .errors import SqueezeDynError, ValidationError, VerificationFailure
from .kappa import (
    KappaModel,
    LorentzianClosedForm,
    MarkovianExponential,
    Tabulated,
)
from .model import (
    ChannelKind,
    Definition,
    EnsembleConfig,
    Regime,
    ReservoirConfig,
    TimeGrid,
    reservoir_regime,
    validate_ensemble,
)
from .verify import run_verification

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _resolve_threads(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get("SQUEEZE_DYN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise ValidationError(f"SQUEEZE_DYN_THREADS must be an integer: {env!r}") from exc
    return os.cpu_count() or 1


def _open_output(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _emit(path: str, writer) -> None:
    fp, close = _open_output(path)
    try:
        writer(fp)
    finally:
        if close:
            fp.close()


def _timestamp_params(reproducible: bool) -> dict[str, object]:
    if reproducible:
        return {}
    return {"generated": datetime.now(timezone.utc).isoformat()}


def _add_curve_arguments(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True, help="particle number (>= 2)")
    p.add_argument(
        "--alpha",
        type=float,
        default=None,
        help="twisting angle; defaults to the optimizer result for N",
    )
    p.add_argument("--delta", type=float, default=0.0, help="external field strength")
    p.add_argument(
        "--channel",
        choices=[c.value for c in ChannelKind],
        required=True,
    )
    p.add_argument(
        "--definition",
        choices=[d.value for d in Definition],
        default=Definition.XI.value,
    )
    p.add_argument(
        "--form",
        choices=[f.value for f in Form],
        default=Form.REFERENCE.value,
        help="closed-form family: 'reference' reproduces the classic curves, "
        "'exact' matches the density-matrix computation",
    )
    p.add_argument(
        "--kappa",
        choices=["markovian", "lorentzian", "tabulated"],
        default="markovian",
        help="decoherence-function model",
    )
    p.add_argument("--rate", type=float, default=0.005, help="markovian decay rate")
    p.add_argument("--gamma", type=float, default=0.01, help="reservoir spectral width")
    p.add_argument("--eta0", type=float, default=10.0, help="reservoir coupling strength")
    p.add_argument("--kappa-file", default=None, help="kappa CSV for --kappa tabulated")
    p.add_argument("--t-start", type=float, default=0.0)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--dt", type=float, default=0.05)
    p.add_argument(
        "--compare-markovian",
        type=float,
        default=None,
        metavar="RATE",
        help="add a comparison column computed from kappa = exp(-RATE*t)",
    )
    p.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument(
        "--reproducible",
        action="store_true",
        help="omit the timestamp header line",
    )
    p.add_argument("--threads", type=int, default=None)


def _load_tabulated(path: str) -> Tabulated:
    from ._format import parse_header

    with open(path, "r", encoding="utf-8") as fp:
        text = fp.read()
    header = parse_header(text)
    rows = [
        line.split(",")
        for line in text.splitlines()
        if line and not line.startswith("#") and not line[0].isalpha()
    ]
    ts = np.array([float(r[0]) for r in rows])
    vals = np.array([float(r[1]) for r in rows])
    step = float(header.get("step", ts[1] - ts[0]))
    grid = TimeGrid(t_start=float(ts[0]), t_end=float(ts[-1]), step=step)
    return Tabulated(grid=grid, values=vals)


def _build_model(args: argparse.Namespace) -> KappaModel:
    if args.kappa == "markovian":
        return MarkovianExponential(rate=args.rate)
    if args.kappa == "lorentzian":
        return LorentzianClosedForm(res=ReservoirConfig(gamma=args.gamma, eta0=args.eta0))
    if not args.kappa_file:
        raise ValidationError("--kappa tabulated requires --kappa-file")
    return _load_tabulated(args.kappa_file)


def _resolve_config(args: argparse.Namespace) -> EnsembleConfig:
    if args.n < 2:
        raise ValidationError("squeezing is undefined for fewer than 2 particles")
    alpha = args.alpha
    if alpha is None:
        if args.n < 3:
            raise ValidationError("--alpha is required for N = 2 (no optimizer bracket)")
        alpha, _ = optimal_alpha(args.n)
    cfg = EnsembleConfig(n_particles=args.n, alpha=alpha, delta=args.delta)
    validate_ensemble(cfg)
    return cfg


def _cmd_evolve(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    model = _build_model(args)
    grid = TimeGrid(t_start=args.t_start, t_end=args.t_max, step=args.dt)
    curve = squeezing_curve(
        cfg,
        ChannelKind(args.channel),
        model,
        grid,
        definition=Definition(args.definition),
        form=Form(args.form),
        compare_markovian=args.compare_markovian,
        threads=_resolve_threads(args.threads),
    )
    extra = _timestamp_params(args.reproducible)
    extra["alpha_auto"] = args.alpha is None

    if args.format == "csv":
        _emit(args.output, lambda fp: curve.to_csv(fp, extra=extra))
    else:
        meta = curve.metadata()
        meta.update(extra)
        cols = ["t", "kappa", "xi2"]
        data = [curve.grid.nodes(), curve.kappa, curve.values]
        if curve.markov_values is not None:
            cols.append("xi2_markovian")
            data.append(curve.markov_values)
        payload = {
            "schema": SCHEMA,
            "kind": "curve",
            "params": meta,
            "columns": cols,
            "rows": [[float(col[i]) for col in data] for i in range(len(data[0]))],
        }
        _emit(args.output, lambda fp: json.dump(payload, fp, indent=1))
    return EXIT_OK


def _cmd_death_times(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    model = _build_model(args)
    definition = Definition(args.definition)
    kind = ChannelKind(args.channel)
    form = Form(args.form)

    d = None
    if isinstance(model, LorentzianClosedForm):
        regime, d_val = reservoir_regime(model.res)
        d = d_val if regime is Regime.STRONG else None
    coarse = args.coarse_step if args.coarse_step else default_coarse_step(d)

    evaluator = curve_evaluator(cfg.n_particles, cfg.alpha, kind, model, definition, form)
    params: dict[str, object] = {
        "n": cfg.n_particles,
        "alpha": cfg.alpha,
        "channel": kind.value,
        "definition": definition.value,
        "form": form.value,
        "model": model.label(),
        **model.params(),
        "alpha_auto": args.alpha is None,
    }
    params.update(_timestamp_params(args.reproducible))
    report = death_report(evaluator, args.t_max, coarse, params=params)

    if args.compare_markovian is not None:
        comparison = MarkovianExponential(rate=args.compare_markovian)
        comp_eval = curve_evaluator(
            cfg.n_particles, cfg.alpha, kind, comparison, definition, form
        )
        report["markovian_comparison"] = death_report(
            comp_eval, args.t_max, coarse, params={"rate": args.compare_markovian}
        )

    _emit(args.output, lambda fp: json.dump(report, fp, indent=1))
    return EXIT_OK


def _cmd_alpha_scan(args: argparse.Namespace) -> int:
    if not (3 <= args.n_min < args.n_max):
        raise ValidationError("need 3 <= n-min < n-max")
    if args.points < 2:
        raise ValidationError("need at least 2 points")
    ns = np.unique(
        np.round(np.geomspace(args.n_min, args.n_max, args.points)).astype(int)
    )
    threads = _resolve_threads(args.threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(optimal_alpha, [int(n) for n in ns]))
    xi_mins = np.array([r[1] for r in results])
    slope = float(np.polyfit(np.log(ns.astype(float)), np.log(xi_mins), 1)[0])

    params: dict[str, object] = {
        "n_min": args.n_min,
        "n_max": args.n_max,
        "points": args.points,
        "slope_log_xi_vs_log_n": slope,
    }
    params.update(_timestamp_params(args.reproducible))
    rows = [(float(n), results[i][0], results[i][1]) for i, n in enumerate(ns)]
    if args.format == "csv":
        _emit(
            args.output,
            lambda fp: write_csv(fp, "alpha-scan", params, ["n", "alpha_star", "xi_min"], rows),
        )
    else:
        payload = {
            "schema": SCHEMA,
            "kind": "alpha-scan",
            "params": params,
            "columns": ["n", "alpha_star", "xi_min"],
            "rows": [list(r) for r in rows],
        }
        _emit(args.output, lambda fp: json.dump(payload, fp, indent=1))
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    report = run_verification(
        max_n=args.max_n,
        tolerance=args.tolerance,
        threads=_resolve_threads(args.threads),
    )
    for line in report.summary_lines():
        print(line)
    if args.output:
        _emit(args.output, lambda fp: json.dump(report.to_json(), fp, indent=1))
    if not report.all_passed:
        raise VerificationFailure(
            f"worst |oracle - exact| = {report.worst_exact_delta:.3e} "
            f"exceeds {report.tolerance:g}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="squeeze-dyn",
        description="Spin-squeezing dynamics under per-qubit decoherence",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_evolve = sub.add_parser("evolve", help="emit a squeezing curve")
    _add_curve_arguments(p_evolve)
    p_evolve.set_defaults(func=_cmd_evolve)

    p_death = sub.add_parser("death-times", help="death/revival report (JSON)")
    _add_curve_arguments(p_death)
    p_death.add_argument("--coarse-step", type=float, default=None)
    p_death.set_defaults(func=_cmd_death_times)

    p_scan = sub.add_parser("alpha-scan", help="optimal angle and minimum squeezing vs N")
    p_scan.add_argument("--n-min", type=int, required=True)
    p_scan.add_argument("--n-max", type=int, required=True)
    p_scan.add_argument("--points", type=int, default=25)
    p_scan.add_argument("--output", "-o", default="-")
    p_scan.add_argument("--format", choices=["csv", "json"], default="csv")
    p_scan.add_argument("--reproducible", action="store_true")
    p_scan.add_argument("--threads", type=int, default=None)
    p_scan.set_defaults(func=_cmd_alpha_scan)

    p_verify = sub.add_parser("verify", help="closed forms vs explicit-state computation")
    p_verify.add_argument("--max-n", type=int, default=6)
    p_verify.add_argument("--tolerance", type=float, default=1e-8)
    p_verify.add_argument("--output", "-o", default=None)
    p_verify.add_argument("--threads", type=int, default=None)
    p_verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SqueezeDynError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
