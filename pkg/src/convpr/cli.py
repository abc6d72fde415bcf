"""Command line interface.

Subcommands: measure, solve, transition, compare, verify, image-demo,
and plot.  Exit codes: 0 on success, 1 on invalid arguments or
configuration, 2 on runtime failures (missing files, divergence),
3 when the verification suite reports a failing check.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__
from .errors import (
    DegenerateOperator,
    IllConditionedSystem,
    InvalidDimension,
    InvalidInput,
    InvalidParameter,
    IoError,
    NumericalDivergence,
)
from .harness import (
    ExperimentConfig,
    SignalPattern,
    compare_models,
    config_from_dict,
    image_demo,
    phase_transition,
    read_report,
    render_comparison_svg,
    render_svg,
    report_to_dict,
    write_report,
    _report_csv_text,
)
from .initialization import spectral_init
from .lemma_verify import run_all_checks
from .operators import ConvolutionalMeasurement, complex_gaussian
from .serialization import (
    load_vector_json,
    save_vector_json,
    vector_to_pairs,
    write_pgm,
    write_trajectory_csv,
)
from .solver import (
    BacktrackingStep,
    DEFAULT_SUCCESS_TOL,
    DEFAULT_TAU,
    FixedStep,
    SolverConfig,
    adm_solve,
    gd_solve,
)
from .weighting import DEFAULT_SIGMA_SQ, WeightingScheme

VERSION_LINE = (
    f"convpr {__version__} "
    f"(defaults: sigma_sq={DEFAULT_SIGMA_SQ}, tau={DEFAULT_TAU}, "
    f"success_tol={DEFAULT_SUCCESS_TOL})"
)


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad arguments; the contract here is 1
    def error(self, message):
        raise _ArgumentError(message)


def _load_json_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise IoError(f"cannot read {path}: {err}") from err
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise InvalidInput(f"{path}: invalid JSON ({err})") from err


def _dump_json(obj, path=None):
    text = json.dumps(obj, indent=1)
    if path is None:
        print(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    except OSError as err:
        raise IoError(f"cannot write {path}: {err}") from err


def _solver_config_from_args(args):
    if args.weighting == "uniform":
        weighting = WeightingScheme.uniform()
    else:
        weighting = WeightingScheme.gaussian_smoothed(args.sigma_sq)
    if args.backtracking:
        step = BacktrackingStep(init_tau=args.tau)
    else:
        step = FixedStep(tau=args.tau)
    return SolverConfig(
        weighting=weighting,
        step_policy=step,
        max_iters=args.max_iters,
        success_tol=args.success_tol,
        residual_tol=args.residual_tol,
        record_trajectory=args.trajectory is not None,
    )


def _cmd_measure(args):
    kernel = load_vector_json(args.kernel)
    x = load_vector_json(args.signal)
    model = ConvolutionalMeasurement(kernel, x.shape[0])
    y = model.measure(x)
    if args.out:
        save_vector_json(args.out, y)
        print(f"wrote {y.shape[0]} magnitudes to {args.out}")
    else:
        print(json.dumps(vector_to_pairs(y)))
    return 0


def _cmd_solve(args):
    kernel = load_vector_json(args.kernel)
    truth = load_vector_json(args.signal) if args.signal else None
    if args.y:
        y = load_vector_json(args.y)
        if np.any(y.imag != 0):
            raise InvalidInput(f"{args.y}: magnitudes must be real")
        y = y.real
        n = truth.shape[0] if truth is not None else args.n
        if n is None:
            raise InvalidInput("--n is required when solving from --y without --signal")
    else:
        if truth is None:
            raise InvalidInput("need --signal or --y")
        n = truth.shape[0]
    model = ConvolutionalMeasurement(kernel, int(n))
    if not args.y:
        y = model.measure(truth)

    config = _solver_config_from_args(args)
    rng = np.random.default_rng(args.seed)
    if args.init == "spectral":
        z0 = spectral_init(model, y, rng=rng).z0
    else:
        g = complex_gaussian(rng, int(n))
        z0 = float(np.sqrt(np.mean(y**2))) * g / np.linalg.norm(g)
    solve = adm_solve if args.algorithm == "adm" else gd_solve
    result = solve(model, y, z0, config, truth=truth)

    payload = {
        "z_hat": vector_to_pairs(result.z_hat),
        "iterations": result.iterations,
        "converged": result.converged,
        "final_dist": result.final_dist,
    }
    _dump_json(payload, args.out)
    if args.out:
        status = "converged" if result.converged else "did not converge"
        print(f"{status} after {result.iterations} iterations; wrote {args.out}")
    if args.trajectory:
        write_trajectory_csv(args.trajectory, result.trajectory or [])
    return 0


def _parse_ratios(text):
    try:
        ratios = tuple(float(tok) for tok in str(text).split(",") if tok.strip())
    except ValueError as err:
        raise InvalidInput(f"cannot parse ratios {text!r}") from err
    if not ratios:
        raise InvalidInput(f"cannot parse ratios {text!r}")
    return ratios


def _parse_patterns(text):
    return tuple(SignalPattern.parse(tok) for tok in str(text).split(",") if tok.strip())


def _experiment_config_from_args(args):
    if args.config:
        config = config_from_dict(_load_json_file(args.config))
    else:
        config = ExperimentConfig(
            n=32, ratios=(2.0, 3.0, 4.0, 6.0, 8.0, 12.0), trials=25, base_seed=0
        )
    updates = {}
    if args.n is not None:
        updates["n"] = args.n
    if args.ratios is not None:
        updates["ratios"] = _parse_ratios(args.ratios)
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.seed is not None:
        updates["base_seed"] = args.seed
    if args.patterns is not None:
        updates["patterns"] = _parse_patterns(args.patterns)
    if getattr(args, "model", None) is not None:
        updates["model"] = args.model
    if args.init is not None:
        updates["init"] = args.init
    if updates:
        from dataclasses import replace

        config = replace(config, **updates)
    return config


def _cmd_transition(args):
    config = _experiment_config_from_args(args)
    report = phase_transition(config)
    sys.stdout.write(_report_csv_text(report))
    if args.out:
        write_report(report, args.out, fmt=args.format)
    if args.svg:
        render_svg(report, args.svg)
    return 0


def _cmd_compare(args):
    config = _experiment_config_from_args(args)
    pair = compare_models(config)
    print("model,pattern,ratio,trials,successes,rate")
    for tag, rep in (("convolutional", pair.convolutional), ("dense_iid", pair.dense_iid)):
        for line in _report_csv_text(rep).splitlines()[1:]:
            print(f"{tag},{line}")
    if args.out:
        _dump_json(
            {
                "convolutional": report_to_dict(pair.convolutional),
                "dense_iid": report_to_dict(pair.dense_iid),
            },
            args.out,
        )
    if args.csv_prefix:
        write_report(pair.convolutional, f"{args.csv_prefix}.convolutional.csv")
        write_report(pair.dense_iid, f"{args.csv_prefix}.dense_iid.csv")
    if args.svg:
        render_comparison_svg(pair, args.svg)
    return 0


def _cmd_verify(args):
    reports = run_all_checks(
        seed=args.seed,
        scalar_samples=args.scalar_samples,
        kernel_samples=args.kernel_samples,
    )
    width = max(len(r.name) for r in reports)
    for r in reports:
        flag = "PASS" if r.passed else "FAIL"
        print(f"{flag}  {r.name:<{width}}  z={r.z_score:.3f}")
    if args.out:
        _dump_json([r.to_dict() for r in reports], args.out)
    failed = sum(1 for r in reports if not r.passed)
    print(f"{len(reports) - failed}/{len(reports)} checks passed")
    return 0 if failed == 0 else 3


def _cmd_image_demo(args):
    result = image_demo(args.image, oversampling_factor=args.factor, seed=args.seed)
    if args.out:
        write_pgm(args.out, result.image)
    bad = [c for c in result.channels if not c.converged]
    print(
        f"n={result.n} m={result.m} columns={len(result.channels)} "
        f"failed={len(bad)} psnr={result.psnr:.2f} dB"
    )
    for c in bad:
        why = "degenerate" if c.degenerate else "not converged"
        print(f"column {c.column}: {why}")
    if args.report:
        _dump_json(
            {
                "n": result.n,
                "m": result.m,
                "psnr": result.psnr,
                "channels": [
                    {
                        "column": c.column,
                        "dist": c.dist,
                        "iterations": c.iterations,
                        "converged": c.converged,
                        "degenerate": c.degenerate,
                    }
                    for c in result.channels
                ],
            },
            args.report,
        )
    return 0


def _cmd_plot(args):
    report = read_report(args.report)
    render_svg(report, args.out)
    return 0


def _add_experiment_flags(sub, with_model=True):
    sub.add_argument("--config", help="JSON experiment config file")
    sub.add_argument("--n", type=int, help="signal length")
    sub.add_argument("--ratios", help="comma-separated oversampling ratios")
    sub.add_argument("--trials", type=int, help="trials per grid cell")
    sub.add_argument("--seed", type=int, help="base seed")
    sub.add_argument(
        "--patterns",
        help="comma-separated patterns: delta, uniform-sphere, constant-ones, file:PATH",
    )
    if with_model:
        sub.add_argument("--model", choices=("convolutional", "dense_iid"))
    sub.add_argument("--init", choices=("spectral", "random"))


def build_parser():
    parser = _Parser(prog="convpr", description=__doc__)
    parser.add_argument("--version", action="version", version=VERSION_LINE)
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("measure", help="apply |A x| to a signal")
    p.add_argument("--signal", required=True, help="signal JSON vector")
    p.add_argument("--kernel", required=True, help="kernel JSON vector")
    p.add_argument("--out", help="output JSON path (stdout if omitted)")
    p.set_defaults(func=_cmd_measure)

    p = commands.add_parser("solve", help="recover a signal from magnitudes")
    p.add_argument("--kernel", required=True, help="kernel JSON vector")
    p.add_argument("--signal", help="ground-truth signal JSON vector")
    p.add_argument("--y", help="observed magnitudes JSON vector")
    p.add_argument("--n", type=int, help="signal length (required with --y alone)")
    p.add_argument("--out", help="output JSON path (stdout if omitted)")
    p.add_argument("--algorithm", choices=("gd", "adm"), default="gd")
    p.add_argument("--weighting", choices=("gaussian", "uniform"), default="gaussian")
    p.add_argument("--sigma-sq", type=float, default=DEFAULT_SIGMA_SQ)
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    p.add_argument("--backtracking", action="store_true")
    p.add_argument("--max-iters", type=int, default=SolverConfig().max_iters)
    p.add_argument("--success-tol", type=float, default=DEFAULT_SUCCESS_TOL)
    p.add_argument("--residual-tol", type=float, default=SolverConfig().residual_tol)
    p.add_argument("--init", choices=("spectral", "random"), default="spectral")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trajectory", help="write per-iteration CSV here")
    p.set_defaults(func=_cmd_solve)

    p = commands.add_parser("transition", help="run a phase-transition grid")
    _add_experiment_flags(p)
    p.add_argument("--out", help="report path (.csv or .json)")
    p.add_argument("--format", choices=("csv", "json"), help="force report format")
    p.add_argument("--svg", help="render the grid to this SVG path")
    p.set_defaults(func=_cmd_transition)

    p = commands.add_parser(
        "compare", help="run matched convolutional and dense i.i.d. grids"
    )
    _add_experiment_flags(p, with_model=False)
    p.add_argument("--out", help="paired JSON report path")
    p.add_argument("--csv-prefix", help="write PREFIX.convolutional.csv and PREFIX.dense_iid.csv")
    p.add_argument("--svg", help="render the overlay to this SVG path")
    p.set_defaults(func=_cmd_compare, model=None)

    p = commands.add_parser("verify", help="run the identity verification suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write JSON check reports here")
    p.add_argument("--scalar-samples", type=int, default=1_000_000)
    p.add_argument("--kernel-samples", type=int, default=100_000)
    p.set_defaults(func=_cmd_verify)

    p = commands.add_parser("image-demo", help="column-wise image recovery demo")
    p.add_argument("--image", required=True, help="input binary PGM (P5)")
    p.add_argument("--out", help="write the reconstruction PGM here")
    p.add_argument("--factor", type=float, default=5.0, help="oversampling factor")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="write a JSON channel report here")
    p.set_defaults(func=_cmd_image_demo)

    p = commands.add_parser("plot", help="render a saved report to SVG")
    p.add_argument("--report", required=True, help="report CSV or JSON")
    p.add_argument("--out", required=True, help="output SVG path")
    p.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _ArgumentError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        # argparse help/version paths
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (InvalidInput, InvalidParameter, InvalidDimension, _ArgumentError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (
        IoError,
        DegenerateOperator,
        NumericalDivergence,
        IllConditionedSystem,
    ) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
