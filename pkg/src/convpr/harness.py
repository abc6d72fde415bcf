"""Seeded recovery experiments over signal patterns and sampling ratios.

Every trial derives its randomness from
SeedSequence((base_seed, pattern_id, ratio_index, trial_index)) split
into independent signal, model, and initialization streams.  The model
kind deliberately does not enter the seed, so convolutional and dense
i.i.d. arms of a comparison see identical signals and matched trial
structure.  Reports aggregate success counts per (pattern, ratio) cell
and serialize to CSV or JSON; runs are bit-reproducible for a fixed
configuration.
"""

import json
import math
import os
import subprocess
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    DegenerateOperator,
    InvalidDimension,
    InvalidInput,
    InvalidParameter,
    IoError,
    NumericalDivergence,
)
from .initialization import spectral_init
from .operators import ConvolutionalMeasurement, DenseMeasurement, complex_gaussian
from .serialization import load_vector_json
from .solver import (
    BacktrackingStep,
    FixedStep,
    SolverConfig,
    gd_solve,
)
from .weighting import DEFAULT_SIGMA_SQ, WeightingScheme

_PATTERN_IDS = {"delta": 0, "uniform_sphere": 1, "constant_ones": 2, "from_file": 3}
_PATTERN_LABELS = {
    "delta": "Delta",
    "uniform_sphere": "UniformSphere",
    "constant_ones": "ConstantOnes",
    "from_file": "FromFile",
}
MODEL_KINDS = ("convolutional", "dense_iid")
INIT_KINDS = ("spectral", "random")
THREADS_ENV_VAR = "CONVPR_THREADS"


@dataclass(frozen=True)
class SignalPattern:
    """Ground-truth signal family; ``path`` is used only by from_file."""

    kind: str
    path: str = None

    def __post_init__(self):
        if self.kind not in _PATTERN_IDS:
            raise InvalidParameter(f"unknown signal pattern {self.kind!r}")
        if self.kind == "from_file" and not self.path:
            raise InvalidParameter("from_file pattern requires a path")

    @property
    def id(self):
        """Stable small integer mixed into trial seeds."""
        return _PATTERN_IDS[self.kind]

    @property
    def label(self):
        """Human-readable name used in report rows."""
        return _PATTERN_LABELS[self.kind]

    @classmethod
    def delta(cls):
        return cls("delta")

    @classmethod
    def uniform_sphere(cls):
        return cls("uniform_sphere")

    @classmethod
    def constant_ones(cls):
        return cls("constant_ones")

    @classmethod
    def from_file(cls, path):
        return cls("from_file", str(path))

    @classmethod
    def parse(cls, text):
        """Parse CLI spellings such as ``delta`` or ``file:path.json``."""
        token = str(text).strip()
        if token.startswith("file:"):
            return cls.from_file(token[5:])
        key = token.lower().replace("-", "_")
        if key in _PATTERN_IDS and key != "from_file":
            return cls(key)
        raise InvalidInput(f"cannot parse signal pattern {text!r}")


DEFAULT_PATTERNS = (
    SignalPattern.delta(),
    SignalPattern.uniform_sphere(),
    SignalPattern.constant_ones(),
)


def gen_signal(pattern, n, rng):
    """Draw or construct a unit-norm signal of length n for the pattern."""
    n = int(n)
    if n < 1:
        raise InvalidDimension(f"n must be >= 1, got {n}")
    if pattern.kind == "delta":
        x = np.zeros(n, dtype=np.complex128)
        x[0] = 1.0
        return x
    if pattern.kind == "constant_ones":
        return np.full(n, 1.0 / math.sqrt(n), dtype=np.complex128)
    if pattern.kind == "uniform_sphere":
        g = complex_gaussian(rng, n)
        return g / np.linalg.norm(g)
    x = load_vector_json(pattern.path)
    if x.shape[0] != n:
        raise InvalidInput(
            f"{pattern.path}: signal has length {x.shape[0]}, expected {n}"
        )
    norm = np.linalg.norm(x)
    if norm == 0:
        raise InvalidInput(f"{pattern.path}: signal is identically zero")
    return x / norm


def gen_kernel(m, rng):
    """Draw a CN(0, I_m) measurement kernel."""
    m = int(m)
    if m < 1:
        raise InvalidDimension(f"m must be >= 1, got {m}")
    return complex_gaussian(rng, m)


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid description for a phase-transition run.

    ``ratios`` are oversampling factors m/n; each trial uses
    m = round(ratio * n).  ``model`` selects the convolutional or dense
    i.i.d. measurement ensemble, ``init`` the spectral or random start.
    """

    n: int
    ratios: tuple
    trials: int
    base_seed: int
    model: str = "convolutional"
    init: str = "spectral"
    solver: SolverConfig = field(default_factory=SolverConfig)
    patterns: tuple = DEFAULT_PATTERNS

    def __post_init__(self):
        if int(self.n) < 2:
            raise InvalidParameter(f"n must be >= 2, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        ratios = tuple(float(r) for r in self.ratios)
        if not ratios or any(r < 1.0 for r in ratios):
            raise InvalidParameter("ratios must be a nonempty tuple of values >= 1")
        object.__setattr__(self, "ratios", ratios)
        if int(self.trials) < 1:
            raise InvalidParameter(f"trials must be >= 1, got {self.trials}")
        object.__setattr__(self, "trials", int(self.trials))
        seed = int(self.base_seed)
        if not 0 <= seed < 2**63:
            raise InvalidParameter("base_seed must lie in [0, 2**63)")
        object.__setattr__(self, "base_seed", seed)
        if self.model not in MODEL_KINDS:
            raise InvalidParameter(f"unknown model kind {self.model!r}")
        if self.init not in INIT_KINDS:
            raise InvalidParameter(f"unknown init kind {self.init!r}")
        patterns = tuple(self.patterns)
        if not patterns:
            raise InvalidParameter("patterns must be nonempty")
        object.__setattr__(self, "patterns", patterns)


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of a single recovery trial."""

    trial_index: int
    seed: int
    success: bool
    final_dist: float
    iterations: int
    wall_time_ms: float
    trajectory: tuple = None


@dataclass(frozen=True)
class TransitionCell:
    """Aggregated success count for one (pattern, ratio) grid cell."""

    pattern: str
    ratio: float
    trials: int
    successes: int

    @property
    def rate(self):
        return self.successes / self.trials


@dataclass(frozen=True)
class TransitionReport:
    """Config echo, aggregated grid, per-trial records, and run metadata."""

    config: ExperimentConfig
    cells: tuple
    records: tuple
    metadata: dict


@dataclass(frozen=True)
class ModelComparison:
    """Paired transition reports over matched signals and seeds."""

    convolutional: TransitionReport
    dense_iid: TransitionReport


def _trial_seed_sequence(base_seed, pattern, ratio_index, trial_index):
    return np.random.SeedSequence(
        entropy=(base_seed, pattern.id, int(ratio_index), int(trial_index))
    )


def run_trial(config, pattern, ratio_index, trial_index):
    """Run one seeded trial and return its TrialRecord.

    The seed mixes base_seed with the pattern id, the position of the
    ratio in ``config.ratios``, and the trial index, then splits into
    signal, model, and initialization streams.  Degenerate inits and
    diverged solves count as failures rather than raising.
    """
    ratio_index = int(ratio_index)
    if not 0 <= ratio_index < len(config.ratios):
        raise InvalidParameter(f"ratio_index {ratio_index} out of range")
    n = config.n
    m = int(round(config.ratios[ratio_index] * n))
    seed_seq = _trial_seed_sequence(config.base_seed, pattern, ratio_index, trial_index)
    signal_ss, model_ss, init_ss = seed_seq.spawn(3)
    seed_fingerprint = int(seed_seq.generate_state(1, np.uint64)[0])

    x = gen_signal(pattern, n, np.random.default_rng(signal_ss))
    if config.model == "convolutional":
        model = ConvolutionalMeasurement(gen_kernel(m, np.random.default_rng(model_ss)), n)
    else:
        model = DenseMeasurement(complex_gaussian(np.random.default_rng(model_ss), (m, n)))
    y = model.measure(x)

    start = time.perf_counter()
    success = False
    final_dist = math.inf
    iterations = 0
    trajectory = None
    try:
        if config.init == "spectral":
            z0 = spectral_init(model, y, rng=np.random.default_rng(init_ss)).z0
        else:
            g = complex_gaussian(np.random.default_rng(init_ss), n)
            scale = float(np.sqrt(np.mean(y * y)))
            z0 = scale * g / np.linalg.norm(g)
        result = gd_solve(model, y, z0, config.solver, truth=x)
        success = result.converged
        final_dist = result.final_dist
        iterations = result.iterations
        if result.trajectory is not None:
            trajectory = tuple(result.trajectory)
    except (DegenerateOperator, NumericalDivergence):
        pass
    wall_ms = (time.perf_counter() - start) * 1000.0
    return TrialRecord(
        trial_index=int(trial_index),
        seed=seed_fingerprint,
        success=success,
        final_dist=final_dist,
        iterations=iterations,
        wall_time_ms=wall_ms,
        trajectory=trajectory,
    )


def _worker_count():
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError as err:
        raise InvalidInput(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}") from err
    return max(1, value)


def _trial_task(args):
    config, pattern, ratio_index, trial_index = args
    return run_trial(config, pattern, ratio_index, trial_index)


def phase_transition(config):
    """Run the full (pattern, ratio, trial) grid and aggregate successes.

    Runs serially unless the CONVPR_THREADS environment variable asks
    for a process pool.  Results are independent of the worker count.
    """
    tasks = [
        (config, pattern, r_idx, t_idx)
        for pattern in config.patterns
        for r_idx in range(len(config.ratios))
        for t_idx in range(config.trials)
    ]
    workers = _worker_count()
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_trial_task, tasks, chunksize=4))
    else:
        results = [_trial_task(t) for t in tasks]

    cells = []
    records = []
    cursor = 0
    for pattern in config.patterns:
        for r_idx in range(len(config.ratios)):
            block = results[cursor : cursor + config.trials]
            cursor += config.trials
            records.extend(block)
            successes = sum(1 for rec in block if rec.success)
            cells.append(
                TransitionCell(
                    pattern=pattern.label,
                    ratio=config.ratios[r_idx],
                    trials=config.trials,
                    successes=successes,
                )
            )
    metadata = {
        "created_unix": time.time(),
        "tool": "convpr",
        "git_hash": _git_hash(),
    }
    return TransitionReport(
        config=config, cells=tuple(cells), records=tuple(records), metadata=metadata
    )


def _git_hash():
    try:
        out = subprocess.run(
            ["git", "rev-parse", "HEAD"],
            capture_output=True,
            text=True,
            timeout=5,
            check=False,
        )
    except (OSError, subprocess.SubprocessError):
        return None
    return out.stdout.strip() if out.returncode == 0 else None


def compare_models(config):
    """Run matched convolutional and dense i.i.d. grids on shared signals."""
    conv = phase_transition(replace(config, model="convolutional"))
    dense = phase_transition(replace(config, model="dense_iid"))
    return ModelComparison(convolutional=conv, dense_iid=dense)


def _step_policy_to_dict(policy):
    if isinstance(policy, FixedStep):
        return {"kind": "fixed", "tau": policy.tau}
    return {
        "kind": "backtracking",
        "init_tau": policy.init_tau,
        "shrink": policy.shrink,
        "armijo_c": policy.armijo_c,
    }


def _step_policy_from_dict(d):
    kind = d.get("kind", "fixed")
    if kind == "fixed":
        return FixedStep(tau=float(d.get("tau", FixedStep().tau)))
    if kind == "backtracking":
        base = BacktrackingStep()
        return BacktrackingStep(
            init_tau=float(d.get("init_tau", base.init_tau)),
            shrink=float(d.get("shrink", base.shrink)),
            armijo_c=float(d.get("armijo_c", base.armijo_c)),
        )
    raise InvalidInput(f"unknown step policy kind {kind!r}")


def solver_config_to_dict(solver):
    return {
        "weighting": {"kind": solver.weighting.kind, "sigma_sq": solver.weighting.sigma_sq},
        "step_policy": _step_policy_to_dict(solver.step_policy),
        "max_iters": solver.max_iters,
        "success_tol": solver.success_tol,
        "residual_tol": solver.residual_tol,
        "record_trajectory": solver.record_trajectory,
    }


def solver_config_from_dict(d):
    if not isinstance(d, dict):
        raise InvalidInput("solver config must be an object")
    base = SolverConfig()
    weighting = base.weighting
    if "weighting" in d:
        wd = d["weighting"]
        if not isinstance(wd, dict) or "kind" not in wd:
            raise InvalidInput("weighting must be an object with a kind")
        try:
            weighting = WeightingScheme(wd["kind"], float(wd.get("sigma_sq", DEFAULT_SIGMA_SQ)))
        except (TypeError, ValueError) as err:
            raise InvalidInput(f"bad weighting: {err}") from err
    step_policy = base.step_policy
    if "step_policy" in d:
        if not isinstance(d["step_policy"], dict):
            raise InvalidInput("step_policy must be an object")
        try:
            step_policy = _step_policy_from_dict(d["step_policy"])
        except (TypeError, ValueError) as err:
            raise InvalidInput(f"bad step policy: {err}") from err
    try:
        return SolverConfig(
            weighting=weighting,
            step_policy=step_policy,
            max_iters=int(d.get("max_iters", base.max_iters)),
            success_tol=float(d.get("success_tol", base.success_tol)),
            residual_tol=float(d.get("residual_tol", base.residual_tol)),
            record_trajectory=bool(d.get("record_trajectory", base.record_trajectory)),
        )
    except (TypeError, ValueError) as err:
        raise InvalidInput(f"bad solver config: {err}") from err


def _pattern_to_dict(pattern):
    out = {"kind": pattern.kind}
    if pattern.path is not None:
        out["path"] = pattern.path
    return out


def _pattern_from_dict(d):
    if isinstance(d, str):
        return SignalPattern.parse(d)
    if not isinstance(d, dict) or "kind" not in d:
        raise InvalidInput("pattern must be a string or an object with a kind")
    try:
        return SignalPattern(d["kind"], d.get("path"))
    except InvalidParameter as err:
        raise InvalidInput(str(err)) from err


def config_to_dict(config):
    """JSON-ready dictionary echo of an ExperimentConfig."""
    return {
        "n": config.n,
        "ratios": list(config.ratios),
        "trials": config.trials,
        "base_seed": config.base_seed,
        "model": config.model,
        "init": config.init,
        "solver": solver_config_to_dict(config.solver),
        "patterns": [_pattern_to_dict(p) for p in config.patterns],
    }


def config_from_dict(d):
    """Parse a configuration dictionary, rejecting unknown keys."""
    if not isinstance(d, dict):
        raise InvalidInput("experiment config must be an object")
    known = {
        "n", "ratios", "trials", "base_seed", "model", "init", "solver", "patterns",
    }
    unknown = set(d) - known
    if unknown:
        raise InvalidInput(f"unknown config keys: {sorted(unknown)}")
    missing = {"n", "ratios", "trials", "base_seed"} - set(d)
    if missing:
        raise InvalidInput(f"missing config keys: {sorted(missing)}")
    solver = solver_config_from_dict(d["solver"]) if "solver" in d else SolverConfig()
    patterns = (
        tuple(_pattern_from_dict(p) for p in d["patterns"])
        if "patterns" in d
        else DEFAULT_PATTERNS
    )
    try:
        return ExperimentConfig(
            n=int(d["n"]),
            ratios=tuple(float(r) for r in d["ratios"]),
            trials=int(d["trials"]),
            base_seed=int(d["base_seed"]),
            model=d.get("model", "convolutional"),
            init=d.get("init", "spectral"),
            solver=solver,
            patterns=patterns,
        )
    except (TypeError, ValueError) as err:
        raise InvalidInput(f"bad experiment config: {err}") from err


def _record_to_dict(rec):
    return {
        "trial_index": rec.trial_index,
        "seed": rec.seed,
        "success": rec.success,
        "final_dist": rec.final_dist,
        "iterations": rec.iterations,
        "wall_time_ms": rec.wall_time_ms,
        "trajectory": None
        if rec.trajectory is None
        else [list(row) for row in rec.trajectory],
    }


def _record_from_dict(d):
    traj = d.get("trajectory")
    if traj is not None:
        traj = tuple(
            (
                int(row[0]),
                None if row[1] is None else float(row[1]),
                None if row[2] is None else float(row[2]),
                None if row[3] is None else float(row[3]),
            )
            for row in traj
        )
    try:
        return TrialRecord(
            trial_index=int(d["trial_index"]),
            seed=int(d["seed"]),
            success=bool(d["success"]),
            final_dist=float(d["final_dist"]),
            iterations=int(d["iterations"]),
            wall_time_ms=float(d["wall_time_ms"]),
            trajectory=traj,
        )
    except (KeyError, TypeError, ValueError) as err:
        raise InvalidInput(f"bad trial record: {err}") from err


def report_to_dict(report):
    """JSON-ready dictionary form of a TransitionReport."""
    return {
        "config": None if report.config is None else config_to_dict(report.config),
        "cells": [
            {
                "pattern": c.pattern,
                "ratio": c.ratio,
                "trials": c.trials,
                "successes": c.successes,
                "rate": c.rate,
            }
            for c in report.cells
        ],
        "records": [_record_to_dict(r) for r in report.records],
        "metadata": report.metadata,
    }


def report_from_dict(d):
    """Inverse of :func:`report_to_dict`."""
    if not isinstance(d, dict) or "cells" not in d:
        raise InvalidInput("report must be an object with cells")
    config = d.get("config")
    if config is not None:
        config = config_from_dict(config)
    try:
        cells = tuple(
            TransitionCell(
                pattern=str(c["pattern"]),
                ratio=float(c["ratio"]),
                trials=int(c["trials"]),
                successes=int(c["successes"]),
            )
            for c in d["cells"]
        )
    except (KeyError, TypeError, ValueError) as err:
        raise InvalidInput(f"bad report cell: {err}") from err
    records = tuple(_record_from_dict(r) for r in d.get("records", []))
    metadata = d.get("metadata", {})
    if not isinstance(metadata, dict):
        raise InvalidInput("metadata must be an object")
    return TransitionReport(config=config, cells=cells, records=records, metadata=metadata)


REPORT_CSV_HEADER = "pattern,ratio,trials,successes,rate"


def _report_csv_text(report):
    lines = [REPORT_CSV_HEADER]
    for c in report.cells:
        lines.append(f"{c.pattern},{c.ratio:g},{c.trials},{c.successes},{c.rate!r}")
    return "\n".join(lines) + "\n"


def _format_from_path(path, fmt):
    if fmt is not None:
        fmt = str(fmt).lower()
        if fmt not in ("csv", "json"):
            raise InvalidInput(f"unknown report format {fmt!r}")
        return fmt
    suffix = os.path.splitext(str(path))[1].lower()
    if suffix == ".csv":
        return "csv"
    if suffix == ".json":
        return "json"
    raise InvalidInput(f"cannot infer report format from {path!r}; pass csv or json")


def write_report(report, path, fmt=None):
    """Write a TransitionReport as CSV (grid only) or JSON (full echo).

    The CSV holds one row per grid cell with the success rate; the JSON
    form round-trips the complete report including per-trial records.
    """
    fmt = _format_from_path(path, fmt)
    try:
        if fmt == "csv":
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(_report_csv_text(report))
        else:
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(report_to_dict(report), fh, indent=1)
                fh.write("\n")
    except OSError as err:
        raise IoError(f"cannot write {path}: {err}") from err


def read_report(path, fmt=None):
    """Read a report written by :func:`write_report`.

    CSV files reconstruct the grid cells only (no config echo or
    per-trial records).
    """
    fmt = _format_from_path(path, fmt)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise IoError(f"cannot read {path}: {err}") from err
    if fmt == "json":
        try:
            return report_from_dict(json.loads(text))
        except json.JSONDecodeError as err:
            raise InvalidInput(f"{path}: invalid JSON ({err})") from err
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != REPORT_CSV_HEADER:
        raise InvalidInput(f"{path}: missing header {REPORT_CSV_HEADER!r}")
    cells = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 5:
            raise InvalidInput(f"{path}: malformed row {ln!r}")
        try:
            cells.append(
                TransitionCell(
                    pattern=parts[0],
                    ratio=float(parts[1]),
                    trials=int(parts[2]),
                    successes=int(parts[3]),
                )
            )
        except ValueError as err:
            raise InvalidInput(f"{path}: malformed row {ln!r}") from err
    return TransitionReport(config=None, cells=tuple(cells), records=(), metadata={})


def _group_cells(cells):
    series = {}
    for c in cells:
        series.setdefault(c.pattern, []).append((c.ratio, c.rate))
    for rows in series.values():
        rows.sort(key=lambda t: t[0])
    return series


def render_svg(report, path):
    """Render success rate against oversampling ratio, one curve per pattern."""
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    series = _group_cells(report.cells)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label in sorted(series):
        rows = series[label]
        ax.plot([r for r, _ in rows], [s for _, s in rows], marker="o", label=label)
    ax.set_xlabel("oversampling ratio m/n")
    ax.set_ylabel("empirical success rate")
    ax.set_ylim(-0.05, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    try:
        fig.savefig(path, format="svg")
    except OSError as err:
        raise IoError(f"cannot write {path}: {err}") from err
    finally:
        plt.close(fig)


def render_comparison_svg(comparison, path):
    """Overlay convolutional (solid) and dense i.i.d. (dashed) curves."""
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    styles = (
        (comparison.convolutional, "-", "conv"),
        (comparison.dense_iid, "--", "iid"),
    )
    for report, style, tag in styles:
        series = _group_cells(report.cells)
        for label in sorted(series):
            rows = series[label]
            ax.plot(
                [r for r, _ in rows],
                [s for _, s in rows],
                style,
                marker="o",
                label=f"{label} ({tag})",
            )
    ax.set_xlabel("oversampling ratio m/n")
    ax.set_ylabel("empirical success rate")
    ax.set_ylim(-0.05, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    try:
        fig.savefig(path, format="svg")
    except OSError as err:
        raise IoError(f"cannot write {path}: {err}") from err
    finally:
        plt.close(fig)


@dataclass(frozen=True)
class ChannelResult:
    """Recovery outcome for one image column."""

    column: int
    dist: float
    iterations: int
    converged: bool
    degenerate: bool


@dataclass(frozen=True)
class ImageDemoResult:
    """Column-wise image recovery summary."""

    image: np.ndarray
    channels: tuple
    psnr: float
    n: int
    m: int


def image_demo(image_path, oversampling_factor=5.0, seed=0):
    """Recover a grayscale image column by column from magnitudes.

    Each column is normalized to a unit signal, measured through an
    independent random kernel with m = ceil(factor * n * ln n), and
    recovered with the spectral start plus backtracking descent at
    success_tol 1e-4; the fixed 2.02 step tuned for the n = 64 grid can
    cycle at small image heights, Armijo backtracking cannot.  Columns
    whose measurements are identically zero (an all-zero column) are
    reported as degenerate rather than raising.

    Returns
    -------
    ImageDemoResult
        With the reconstructed uint8 image and the peak signal-to-noise
        ratio against the input (inf for an exact reconstruction).
    """
    from .serialization import read_pgm

    factor = float(oversampling_factor)
    if not factor > 0:
        raise InvalidParameter(f"oversampling_factor must be > 0, got {factor}")
    img = read_pgm(image_path)
    n, width = img.shape
    if n < 2:
        raise InvalidDimension(f"image height must be >= 2, got {n}")
    m = int(math.ceil(factor * n * math.log(n)))
    solver = SolverConfig(success_tol=1e-4, step_policy=BacktrackingStep())
    recon = np.zeros_like(img)
    channels = []
    for col in range(width):
        pixel = img[:, col].astype(np.float64)
        scale = float(np.linalg.norm(pixel))
        col_ss = np.random.SeedSequence(entropy=(int(seed), col))
        model_ss, init_ss = col_ss.spawn(2)
        kernel = gen_kernel(m, np.random.default_rng(model_ss))
        model = ConvolutionalMeasurement(kernel, n)
        if scale == 0.0:
            x = np.zeros(n, dtype=np.complex128)
        else:
            x = (pixel / scale).astype(np.complex128)
        y = model.measure(x)
        try:
            init = spectral_init(model, y, rng=np.random.default_rng(init_ss))
            result = gd_solve(model, y, init.z0, solver, truth=x)
        except DegenerateOperator:
            channels.append(ChannelResult(col, math.inf, 0, False, True))
            continue
        except NumericalDivergence:
            channels.append(ChannelResult(col, math.inf, 0, False, False))
            continue
        phase = np.vdot(x, result.z_hat)
        aligned = result.z_hat * np.conj(phase / abs(phase)) if abs(phase) > 0 else result.z_hat
        recon[:, col] = np.clip(np.rint(aligned.real * scale), 0, 255).astype(np.uint8)
        channels.append(
            ChannelResult(col, result.final_dist, result.iterations, result.converged, False)
        )
    diff = recon.astype(np.float64) - img.astype(np.float64)
    mse = float(np.mean(diff**2))
    psnr = math.inf if mse == 0.0 else 20.0 * math.log10(255.0 / math.sqrt(mse))
    return ImageDemoResult(image=recon, channels=tuple(channels), psnr=psnr, n=n, m=m)
