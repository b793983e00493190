"""Command-line benchmark harness.

Subcommands cover the full loop: gen writes datasets, train fits a model
file, diff compares a clean/noisy model pair (CSV report plus an ASCII
heatmap), eval scores a model against the analytic plane, and sweep runs
the preset experiment matrices and emits a summary CSV of per-cell
medians.

Data goes to files or standard output; everything diagnostic goes to the
error stream, so output is safe to pipe. All randomness flows from the
--seed flag; a sweep cell at trial t uses seed XOR t.
"""

from __future__ import annotations

import argparse
import statistics
import sys
from dataclasses import dataclass, replace

import numpy as np

from .datagen import (
    DEFAULT_DOMAIN,
    DISTRIBUTIONS,
    UNIFORM,
    DataSpec,
    make_plane_dataset,
    read_dataset,
    write_dataset,
)
from .evaluation import (
    DiffReport,
    difference_surface,
    model_error,
    plane_truth,
    write_diff_report,
)
from .inference import FuzzyModel, load_model, save_model
from .learning import (
    INIT_CLUSTER,
    INIT_ZERO,
    NeuroFuzzyConfig,
    cluster_learn,
    neurofuzzy_learn,
    wm_learn,
)
from .membership import DEFAULT_WIDTH_FACTOR, GAUSSIAN, TRIANGULAR, Partition

SIMPLIFIED = "simplified"
CLUSTER_TRI = "cluster-tri"
CLUSTER_GAUSS = "cluster-gauss"
NEUROFUZZY = "neurofuzzy"
ALGORITHMS = (SIMPLIFIED, CLUSTER_TRI, CLUSTER_GAUSS, NEUROFUZZY)

# Which membership kind each algorithm runs on.
ALGO_KIND = {
    SIMPLIFIED: TRIANGULAR,
    CLUSTER_TRI: TRIANGULAR,
    CLUSTER_GAUSS: GAUSSIAN,
    NEUROFUZZY: GAUSSIAN,
}

PRESETS = (
    "partition-sweep",
    "noise-levels",
    "datasize",
    "alpha-sweep",
    "algorithm-ladder",
)

DEFAULT_OUT_RANGE = (2.0, 22.0)

HEAT_RAMP = " .:-=+*#%@"
GAP_CHAR = "?"

SUMMARY_COLUMNS = (
    "preset,algorithm,input_sets,output_sets,noise,n,alpha,epochs,init,"
    "distribution,trials,median_rmse,median_max_abs,median_rule_changes,"
    "median_gap_fraction"
)


@dataclass(frozen=True)
class ExperimentConfig:
    """One benchmark cell: algorithm, structure, data recipe, tuning."""

    algorithm: str
    input_sets: int = 9
    output_sets: int = 13
    noise_level: float = 0.10
    n_examples: int = 100
    distribution: str = UNIFORM
    seed: int = 0
    alpha: float = 0.1
    epochs: int = 50
    init: str = INIT_CLUSTER
    resolution: int = 50
    width_factor: float = DEFAULT_WIDTH_FACTOR
    domain: tuple = DEFAULT_DOMAIN
    out_range: tuple = DEFAULT_OUT_RANGE


def build_partitions(cfg: ExperimentConfig):
    kind = ALGO_KIND[cfg.algorithm]
    inputs = [
        Partition(lo, hi, cfg.input_sets, kind, cfg.width_factor)
        for lo, hi in cfg.domain
    ]
    out_lo, out_hi = cfg.out_range
    output = Partition(out_lo, out_hi, cfg.output_sets, TRIANGULAR)
    return inputs, output


def train_model(cfg: ExperimentConfig, data) -> FuzzyModel:
    inputs, output = build_partitions(cfg)
    if cfg.algorithm == SIMPLIFIED:
        return wm_learn(data, inputs, output)
    if cfg.algorithm in (CLUSTER_TRI, CLUSTER_GAUSS):
        return cluster_learn(data, inputs, output)
    if cfg.algorithm == NEUROFUZZY:
        nf = NeuroFuzzyConfig(alpha=cfg.alpha, epochs=cfg.epochs, init=cfg.init)
        return neurofuzzy_learn(data, inputs, output, nf)
    raise ValueError(f"unknown algorithm {cfg.algorithm!r}")


def run_pair(cfg: ExperimentConfig, seed: int):
    """Train the clean/noisy model pair for one trial seed and diff them.

    Both datasets share the seed, so they share the same underlying
    clean inputs; only the stored coordinates of the noisy one are
    perturbed.
    """
    base = DataSpec(
        n=cfg.n_examples,
        domain=cfg.domain,
        distribution=cfg.distribution,
        noise_level=0.0,
        seed=seed,
    )
    clean = train_model(cfg, make_plane_dataset(base))
    noisy = train_model(
        cfg, make_plane_dataset(replace(base, noise_level=cfg.noise_level))
    )
    return clean, noisy, difference_surface(clean, noisy, cfg.resolution)


def run_cell(cfg: ExperimentConfig, trials: int) -> dict:
    """Medians of the diff metrics over trials seeds (cfg.seed XOR t)."""
    rmses, max_abses, changes, gaps = [], [], [], []
    for t in range(trials):
        _, _, report = run_pair(cfg, cfg.seed ^ t)
        if report.rmse is not None:
            rmses.append(report.rmse)
            max_abses.append(report.max_abs)
        rc = report.rule_changes
        changes.append(rc["changed"] + rc["only_a"] + rc["only_b"])
        gaps.append(report.gap_fraction)
    return {
        "median_rmse": statistics.median(rmses) if rmses else None,
        "median_max_abs": statistics.median(max_abses) if max_abses else None,
        "median_rule_changes": statistics.median(changes),
        "median_gap_fraction": statistics.median(gaps),
    }


def preset_cells(preset: str, base: ExperimentConfig, algo: str | None = None):
    """The experiment matrix for a preset, in fixed row order."""
    if preset == "partition-sweep":
        algos = (algo,) if algo else ALGORITHMS
        return [
            replace(base, algorithm=a, input_sets=s, noise_level=0.10)
            for a in algos
            for s in (3, 5, 7, 9)
        ]
    if preset == "noise-levels":
        return [
            replace(base, algorithm=CLUSTER_TRI, input_sets=9, noise_level=p)
            for p in (0.10, 0.30)
        ]
    if preset == "datasize":
        return [
            replace(
                base,
                algorithm=SIMPLIFIED,
                input_sets=9,
                noise_level=0.10,
                n_examples=n,
            )
            for n in (100, 400)
        ]
    if preset == "alpha-sweep":
        # K and the initialization are held fixed across the rate sweep
        # and recorded in the output so runs stay comparable.
        return [
            replace(
                base,
                algorithm=NEUROFUZZY,
                input_sets=9,
                noise_level=0.10,
                alpha=a,
                epochs=50,
                init=INIT_CLUSTER,
            )
            for a in (0.1, 0.8, 0.95)
        ]
    if preset == "algorithm-ladder":
        return [
            replace(base, algorithm=a, input_sets=9, noise_level=0.10)
            for a in ALGORITHMS
        ]
    raise ValueError(f"unknown preset {preset!r} (valid: {', '.join(PRESETS)})")


def _fmt(value) -> str:
    if value is None:
        return ""
    return f"{value:.17g}"


def summary_rows(preset: str, cells, trials: int) -> list:
    rows = [SUMMARY_COLUMNS]
    for cfg in cells:
        medians = run_cell(cfg, trials)
        tuned = cfg.algorithm == NEUROFUZZY
        rows.append(
            ",".join(
                [
                    preset,
                    cfg.algorithm,
                    str(cfg.input_sets),
                    str(cfg.output_sets),
                    _fmt(cfg.noise_level),
                    str(cfg.n_examples),
                    _fmt(cfg.alpha) if tuned else "",
                    str(cfg.epochs) if tuned else "",
                    cfg.init if tuned else "",
                    cfg.distribution,
                    str(trials),
                    _fmt(medians["median_rmse"]),
                    _fmt(medians["median_max_abs"]),
                    _fmt(medians["median_rule_changes"]),
                    _fmt(medians["median_gap_fraction"]),
                ]
            )
        )
    return rows


def render_heatmap(report: DiffReport) -> str:
    """|diff| as quantile-bucketed ASCII, one line per grid row.

    The top line is the highest y value; x grows to the right. Gap
    points render as '?' so holes stay distinguishable from small
    differences.
    """
    grid = np.abs(report.diff_grid)
    finite = grid[~np.isnan(grid)]
    if finite.size:
        edges = np.quantile(finite, np.arange(1, 10) / 10.0)
    else:
        edges = np.zeros(9)
    lines = []
    res = report.resolution
    for j in range(res - 1, -1, -1):
        chars = []
        for i in range(res):
            v = grid[i, j]
            if np.isnan(v):
                chars.append(GAP_CHAR)
            else:
                chars.append(HEAT_RAMP[int(np.searchsorted(edges, v, side="left"))])
        lines.append("".join(chars))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# configuration file support

def load_config(path) -> dict:
    """key=value lines, # comments, blank lines ignored."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line {line_no}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


class Settings:
    """Resolves each option as: flag if given, else config file, else default."""

    def __init__(self, args):
        self.args = vars(args)
        self.config = load_config(args.config) if getattr(args, "config", None) else {}

    def get(self, name, default, cast=None):
        flag = self.args.get(name)
        if flag is not None:
            return flag
        if name in self.config:
            raw = self.config[name]
            if cast is bool:
                return raw.lower() in ("1", "true", "yes")
            return cast(raw) if cast else raw
        return default


def _die(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def _note(message: str) -> None:
    print(message, file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands

def cmd_gen(args) -> int:
    s = Settings(args)
    try:
        spec = DataSpec(
            n=s.get("n", 100, int),
            domain=(
                (s.get("lo", 1.0, float), s.get("hi", 11.0, float)),
                (s.get("lo", 1.0, float), s.get("hi", 11.0, float)),
            ),
            distribution=s.get("distribution", UNIFORM),
            noise_level=s.get("noise", 0.0, float),
            seed=s.get("seed", 0, int),
        )
    except ValueError as e:
        return _die(str(e))
    data = make_plane_dataset(spec)
    write_dataset(args.out, data)
    _note(
        f"wrote {spec.n} examples to {args.out} "
        f"(seed={spec.seed}, noise={spec.noise_level}, {spec.distribution})"
    )
    return 0


def cmd_train(args) -> int:
    s = Settings(args)
    algo = args.algo
    kind = s.get("mf", ALGO_KIND[algo])
    if kind != ALGO_KIND[algo]:
        return _die(f"{algo} requires {ALGO_KIND[algo]} membership functions")
    try:
        data = read_dataset(args.dataset)
    except (OSError, ValueError) as e:
        return _die(f"cannot read dataset {args.dataset}: {e}")
    cfg = ExperimentConfig(
        algorithm=algo,
        input_sets=s.get("sets", 9, int),
        output_sets=s.get("out_sets", 13, int),
        alpha=s.get("alpha", 0.1, float),
        epochs=s.get("epochs", 50, int),
        init=s.get("init", INIT_CLUSTER),
        width_factor=s.get("width_factor", DEFAULT_WIDTH_FACTOR, float),
        domain=(
            (s.get("lo", 1.0, float), s.get("hi", 11.0, float)),
            (s.get("lo", 1.0, float), s.get("hi", 11.0, float)),
        ),
        out_range=(s.get("out_lo", 2.0, float), s.get("out_hi", 22.0, float)),
    )
    try:
        model = train_model(cfg, data)
    except ValueError as e:
        return _die(str(e))
    save_model(model, args.model)
    _note(
        f"trained {algo} {cfg.input_sets}x{cfg.input_sets} model: "
        f"{model.rule_count()} rules, {model.empty_count()} empty cells -> {args.model}"
    )
    return 0


def cmd_diff(args) -> int:
    s = Settings(args)
    try:
        clean = load_model(args.clean_model)
        noisy = load_model(args.noisy_model)
    except (OSError, ValueError) as e:
        return _die(f"cannot load model: {e}")
    resolution = s.get("resolution", 50, int)
    try:
        report = difference_surface(clean, noisy, resolution)
    except ValueError as e:
        return _die(str(e))
    if args.out:
        meta = {
            "clean_model": args.clean_model,
            "noisy_model": args.noisy_model,
            "inputs": " | ".join(repr(p) for p in clean.input_partitions),
            "output": repr(clean.output_partition),
            "resolution": resolution,
        }
        write_diff_report(report, args.out, meta)
        _note(f"wrote report to {args.out}")
    print(render_heatmap(report))
    rc = report.rule_changes
    print(f"rmse={_fmt(report.rmse) or 'NaN'}")
    print(f"max_abs={_fmt(report.max_abs) or 'NaN'}")
    print(f"gap_fraction={_fmt(report.gap_fraction)}")
    print(
        "rules: unchanged={unchanged} changed={changed} "
        "only_clean={only_a} only_noisy={only_b}".format(**rc)
    )
    return 0


def cmd_eval(args) -> int:
    s = Settings(args)
    try:
        model = load_model(args.model)
    except (OSError, ValueError) as e:
        return _die(f"cannot load model: {e}")
    try:
        result = model_error(model, plane_truth, s.get("resolution", 50, int))
    except ValueError as e:
        return _die(str(e))
    print(f"rmse={_fmt(result['rmse']) or 'NaN'}")
    print(f"max_abs={_fmt(result['max_abs']) or 'NaN'}")
    print(f"gap_fraction={_fmt(result['gap_fraction'])}")
    return 0


def cmd_sweep(args) -> int:
    s = Settings(args)
    base = ExperimentConfig(
        algorithm=SIMPLIFIED,
        n_examples=s.get("n", 100, int),
        distribution=s.get("distribution", UNIFORM),
        seed=s.get("seed", 0, int),
        resolution=s.get("resolution", 50, int),
        width_factor=s.get("width_factor", DEFAULT_WIDTH_FACTOR, float),
    )
    trials = s.get("trials", 10, int)
    try:
        cells = preset_cells(args.preset, base, args.algo)
    except ValueError as e:
        return _die(str(e))
    _note(f"running {args.preset}: {len(cells)} cells x {trials} trials")
    rows = summary_rows(args.preset, cells, trials)
    text = "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        _note(f"wrote summary to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzgrid",
        description="Fuzzy rule-grid learning and noise-sensitivity benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="key=value file supplying defaults")

    p_gen = sub.add_parser("gen", help="generate a plane dataset CSV")
    add_common(p_gen)
    p_gen.add_argument("--n", type=int, help="number of examples (default 100)")
    p_gen.add_argument("--noise", type=float, help="noise level, e.g. 0.10 (default 0)")
    p_gen.add_argument("--distribution", choices=DISTRIBUTIONS)
    p_gen.add_argument("--seed", type=int)
    p_gen.add_argument("--lo", type=float, help="input range low end (default 1)")
    p_gen.add_argument("--hi", type=float, help="input range high end (default 11)")
    p_gen.add_argument("--out", required=True, help="output CSV path")
    p_gen.set_defaults(func=cmd_gen)

    p_train = sub.add_parser("train", help="fit a model file from a dataset")
    add_common(p_train)
    p_train.add_argument("dataset", help="input dataset CSV")
    p_train.add_argument("model", help="output model path")
    p_train.add_argument("--algo", required=True, choices=ALGORITHMS)
    p_train.add_argument("--sets", type=int, help="input sets per variable (default 9)")
    p_train.add_argument("--out-sets", dest="out_sets", type=int, help="output sets (default 13)")
    p_train.add_argument("--mf", choices=(TRIANGULAR, GAUSSIAN), help="membership kind (must match the algorithm)")
    p_train.add_argument("--width-factor", dest="width_factor", type=float)
    p_train.add_argument("--alpha", type=float, help="learning rate (neurofuzzy)")
    p_train.add_argument("--epochs", type=int, help="learning epochs (neurofuzzy)")
    p_train.add_argument("--init", choices=(INIT_ZERO, INIT_CLUSTER))
    p_train.add_argument("--lo", type=float)
    p_train.add_argument("--hi", type=float)
    p_train.add_argument("--out-lo", dest="out_lo", type=float)
    p_train.add_argument("--out-hi", dest="out_hi", type=float)
    p_train.set_defaults(func=cmd_train)

    p_diff = sub.add_parser("diff", help="compare a clean/noisy model pair")
    add_common(p_diff)
    p_diff.add_argument("clean_model")
    p_diff.add_argument("noisy_model")
    p_diff.add_argument("--out", help="write the diff report CSV here")
    p_diff.add_argument("--resolution", type=int)
    p_diff.set_defaults(func=cmd_diff)

    p_eval = sub.add_parser("eval", help="score a model against the analytic plane")
    add_common(p_eval)
    p_eval.add_argument("model")
    p_eval.add_argument("--resolution", type=int)
    p_eval.set_defaults(func=cmd_eval)

    p_sweep = sub.add_parser("sweep", help="run a preset experiment matrix")
    add_common(p_sweep)
    p_sweep.add_argument("preset", choices=PRESETS)
    p_sweep.add_argument("--algo", choices=ALGORITHMS, help="restrict partition-sweep to one algorithm")
    p_sweep.add_argument("--trials", type=int, help="seeds per cell (default 10)")
    p_sweep.add_argument("--seed", type=int, help="base seed (default 0)")
    p_sweep.add_argument("--n", type=int, help="examples per dataset (default 100)")
    p_sweep.add_argument("--distribution", choices=DISTRIBUTIONS)
    p_sweep.add_argument("--resolution", type=int)
    p_sweep.add_argument("--width-factor", dest="width_factor", type=float)
    p_sweep.add_argument("--out", help="summary CSV path (default: standard output)")
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as e:
        return _die(str(e))


if __name__ == "__main__":
    sys.exit(main())
