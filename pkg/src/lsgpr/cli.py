"""Command-line benchmark harness.

Subcommands: doppler-demo (predictive-distribution dump on the Doppler
function), prior-samples (draws from the localized prior), benchmark
(repeated-split comparison with Wilcoxon tests), and predict (batch
posterior dump for a query file).  All outputs are seeded, deterministic
CSV files.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, fields

import numpy as np

from lsgpr import baselines, data, global_gp, kernels, linalg, local_gp, selection
from lsgpr.exceptions import (ConfigError, DataError, DataFileError, LsgprError,
                              NonNumericCellError, NumericalError,
                              SingularMatrixError, TargetColumnError)
from lsgpr.kernels import CovKernelParams, LocalKernelSpec
from lsgpr.local_gp import BandwidthPolicy

DATA_DIR_ENV = "LSGP_DATA_DIR"
METHODS = ("gp", "lsgpr", "knn", "nw")
PROFILES = ("rectangular", "epanechnikov", "gaussian", "hilbert")

# Validation grids for the Doppler demo (n of a few hundred; the
# interesting regime is strongly local).  Lengthscale factors scale the
# median pairwise training distance; noise factors scale the globally
# MLL-fitted noise variance.
DOPPLER_GRID_M = (3, 5, 7, 10, 15, 20, 30)
DOPPLER_LENGTHSCALE_FACTORS = (0.1, 0.3, 1.0, 3.0)
DOPPLER_NOISE_FACTORS = (0.1, 0.3, 1.0, 3.0)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


# ---------------------------------------------------------------------------
# Configuration


@dataclass
class RunConfig:
    """Flat run configuration; file keys and CLI flags share names."""

    command: str = ""
    data: str = ""
    out: str = "."
    seed: int = 0
    splits: int = 10
    methods: str = "lsgpr,gp,knn"
    profile: str = ""
    preprocessing: str = ""
    n: int = 400
    noise: float = 0.1
    noise_is_sd: bool = False
    target: str = "-1"
    h: float = 0.5
    m: int = 10
    family: str = ""
    lengthscale: float = 0.0
    amplitude: float = 1.0
    queries: str = ""
    has_header: bool = True

    def method_list(self) -> tuple[str, ...]:
        names = tuple(p.strip() for p in self.methods.split(",") if p.strip())
        if not names:
            raise ConfigError("methods list is empty")
        for name in names:
            if name not in METHODS:
                raise ConfigError(
                    f"unknown method {name!r}; choose from {', '.join(METHODS)}")
        return names

    def target_column(self):
        try:
            return int(self.target)
        except ValueError:
            return self.target


_BOOL_VALUES = {"true": True, "1": True, "yes": True,
                "false": False, "0": False, "no": False}


def _cast(name: str, kind: type, raw: str):
    raw = raw.strip()
    try:
        if kind is bool:
            return _BOOL_VALUES[raw.lower()]
        return kind(raw)
    except (ValueError, KeyError):
        raise ConfigError(f"cannot parse config key {name} = {raw!r} as {kind.__name__}") from None


def parse_config_file(path) -> dict[str, str]:
    """Flat ``key = value`` file; blank lines and # comments ignored."""
    try:
        with open(path) as handle:
            lines = handle.readlines()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from err
    out = {}
    for lineno, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {text!r}")
        key, _, value = text.partition("=")
        out[key.strip()] = value.strip()
    return out


_COMMAND_DEFAULTS = {
    "doppler-demo": {"profile": "epanechnikov", "family": "rbf",
                     "preprocessing": "none", "data": "doppler"},
    "prior-samples": {"profile": "none", "family": "exponential",
                      "lengthscale": 0.2, "preprocessing": "none"},
    "benchmark": {"profile": "hilbert", "family": "rbf",
                  "preprocessing": "minmax"},
    "predict": {"profile": "epanechnikov", "family": "rbf",
                "preprocessing": "none"},
}


def resolve_config(command: str, file_values: dict[str, str],
                   overrides: dict) -> RunConfig:
    """Defaults, then config file, then CLI flags; unknown keys error."""
    config = RunConfig(command=command)
    for key, value in _COMMAND_DEFAULTS[command].items():
        setattr(config, key, value)
    types = {f.name: type(getattr(config, f.name)) for f in fields(config)}
    for key, raw in file_values.items():
        if key not in types or key == "command":
            raise ConfigError(f"unknown config key {key!r}")
        setattr(config, key, _cast(key, types[key], raw))
    for key, value in overrides.items():
        if value is not None:
            setattr(config, key, value)
    if config.command == "prior-samples":
        allowed = ("none", "rectangular", "epanechnikov", "gaussian")
        if config.profile not in allowed:
            raise ConfigError(
                f"profile {config.profile!r} not usable for prior samples; "
                f"choose from {', '.join(allowed)}")
    elif config.profile not in PROFILES:
        raise ConfigError(
            f"unknown profile {config.profile!r}; choose from {', '.join(PROFILES)}")
    if config.preprocessing not in ("none", "minmax", "standardize"):
        raise ConfigError(f"unknown preprocessing {config.preprocessing!r}")
    if config.splits < 1:
        raise ConfigError(f"splits must be >= 1, got {config.splits}")
    if config.seed < 0:
        raise ConfigError(f"seed must be non-negative, got {config.seed}")
    return config


def resolve_data_path(path: str) -> str:
    """Literal path if it exists, else relative to $LSGP_DATA_DIR."""
    if os.path.exists(path):
        return path
    base = os.environ.get(DATA_DIR_ENV)
    if base:
        candidate = os.path.join(base, path)
        if os.path.exists(candidate):
            return candidate
    raise DataFileError(f"dataset {path!r} not found (also tried ${DATA_DIR_ENV})")


def load_dataset(config: RunConfig) -> data.Dataset:
    if config.data == "doppler":
        return data.gen_doppler(config.n, config.noise, config.seed,
                                noise_is_sd=config.noise_is_sd)
    if not config.data:
        raise ConfigError("no dataset given; set data = <path> or data = doppler")
    path = resolve_data_path(config.data)
    return data.load_csv(path, config.target_column(),
                         has_header=config.has_header)


def preprocess(dataset: data.Dataset, mode: str) -> data.Dataset:
    if mode == "minmax":
        return data.scale_minmax(dataset)
    if mode == "standardize":
        return data.standardize(dataset)
    return dataset


def _run_stage(stage: str, fn, *args, **kwargs):
    """Tag library errors with the pipeline stage that raised them."""
    try:
        return fn(*args, **kwargs)
    except LsgprError as err:
        err.stage = stage
        raise


# ---------------------------------------------------------------------------
# Doppler experiment


@dataclass(frozen=True)
class DopplerRun:
    """One seeded Doppler comparison: shared MLL-tuned kernel, global GP
    vs localized GP with validation-chosen neighbor count."""

    train_X: np.ndarray
    train_y: np.ndarray
    params: CovKernelParams
    noise: float
    spec: LocalKernelSpec
    policy: BandwidthPolicy
    gp_model: global_gp.GPModel
    gp_mse: float
    lsgpr_mse: float
    mean_neighbor_count: float
    chosen_m: int


def run_doppler_experiment(n: int, noise_variance: float, seed: int,
                           noise_is_sd: bool = False,
                           profile: str = "epanechnikov",
                           grid_m=DOPPLER_GRID_M) -> DopplerRun:
    """Fit both models on one seeded Doppler draw and score the test part.

    The global model tunes its kernel by MLL maximization on the training
    part; the localized model picks (lengthscale, noise, neighbor count)
    jointly by validation MSE.  Both are scored on the held-out test
    part, predicting from train + validation data.
    """
    dataset = _run_stage("doppler-generation", data.gen_doppler, n,
                         noise_variance, seed, noise_is_sd=noise_is_sd)
    train, val, test = _run_stage(
        "splitting", data.split, dataset,
        data.SplitSpec(fractions=(0.7, 0.15, 0.15), seed=seed))

    var_y = max(float(np.var(train.y)), 1e-12)
    med = global_gp.median_pairwise_distance(train.X)
    init = CovKernelParams("rbf", lengthscale=med, amplitude=var_y)
    hyper = _run_stage("global-fit", global_gp.optimize_hypers,
                       train.X, train.y, init, 0.1 * var_y)

    spec = LocalKernelSpec(profile=profile, dimension=train.X.shape[1])
    grid = [m for m in grid_m if m <= train.n]
    best = None
    for ell_factor in DOPPLER_LENGTHSCALE_FACTORS:
        for noise_factor in DOPPLER_NOISE_FACTORS:
            cand = CovKernelParams("rbf", lengthscale=ell_factor * med,
                                   amplitude=var_y)
            cand_noise = noise_factor * hyper.noise
            best_m, table = _run_stage(
                "bandwidth-selection", selection.grid_search_h,
                train.X, train.y, val.X, val.y, cand, cand_noise, spec,
                grid, "m")
            score = min(row.score for row in table)
            if best is None or score < best[0]:
                best = (score, cand, cand_noise, int(best_m))
    _, params, noise, best_m = best
    policy = BandwidthPolicy.min_neighbors(best_m)

    fit_X = np.vstack([train.X, val.X])
    fit_y = np.concatenate([train.y, val.y])
    gp_model = _run_stage("global-fit", global_gp.fit, fit_X, fit_y,
                          hyper.params, hyper.noise)
    gp_preds = _run_stage("test-evaluation", global_gp.predict_batch,
                          gp_model, test.X)
    local_preds = _run_stage("test-evaluation", local_gp.local_predict_batch,
                             fit_X, fit_y, params, noise, spec, policy,
                             test.X)
    gp_mse = selection.mse([p.mean for p in gp_preds], test.y)
    lsgpr_mse = selection.mse([p.mean for p in local_preds], test.y)
    mean_count = float(np.mean([p.neighbor_count for p in local_preds]))
    return DopplerRun(train_X=fit_X, train_y=fit_y, params=params,
                      noise=noise, spec=spec, policy=policy,
                      gp_model=gp_model, gp_mse=gp_mse, lsgpr_mse=lsgpr_mse,
                      mean_neighbor_count=mean_count, chosen_m=best_m)


def cmd_doppler_demo(config: RunConfig) -> int:
    run = run_doppler_experiment(config.n, config.noise, config.seed,
                                 noise_is_sd=config.noise_is_sd,
                                 profile=config.profile)
    grid = np.linspace(0.0, 1.0, 500)
    truth = data.doppler_function(grid)
    queries = grid[:, None]

    gp_preds = global_gp.predict_batch(run.gp_model, queries)
    local_preds = local_gp.local_predict_batch(
        run.train_X, run.train_y, run.params, run.noise, run.spec,
        run.policy, queries)

    os.makedirs(config.out, exist_ok=True)
    for name, preds in (("gp", gp_preds), ("lsgpr", local_preds)):
        lower, upper = zip(*(p.interval95() for p in preds))
        data.save_table(os.path.join(config.out, f"{name}_predictions.csv"), {
            "x": grid,
            "true": truth,
            "mean": [p.mean for p in preds],
            "variance": [p.variance for p in preds],
            "lower95": lower,
            "upper95": upper,
        })
    data.save_table(os.path.join(config.out, "doppler_summary.csv"), {
        "seed": [config.seed], "n": [config.n],
        "gp_test_mse": [run.gp_mse], "lsgpr_test_mse": [run.lsgpr_mse],
        "mean_neighbor_count": [run.mean_neighbor_count],
        "chosen_m": [run.chosen_m],
    })
    _write_provenance(config, {"chosen_m": run.chosen_m,
                               "lengthscale": run.params.lengthscale,
                               "amplitude": run.params.amplitude,
                               "noise": run.noise})
    return EXIT_OK


# ---------------------------------------------------------------------------
# Prior samples


def prior_sample_matrix(profile: str, h: float, seed: int,
                        params: CovKernelParams, n_grid: int = 200,
                        count: int = 5) -> tuple[np.ndarray, np.ndarray]:
    """Draw seeded samples from the (localized) prior on a [-1, 1] grid.

    Grid points with zero localization weight have exactly zero prior
    variance, so their sample values are exactly zero: only the
    positive-weight block is factored and sampled.
    """
    x = np.linspace(-1.0, 1.0, n_grid)
    X = x[:, None]
    samples = np.zeros((count, n_grid))
    if profile == "none":
        active = np.arange(n_grid)
        cov = kernels.gram(params, X)
    else:
        spec = LocalKernelSpec(profile=profile, dimension=1)
        x0 = np.zeros(1)
        weights = kernels.local_weight_vector(spec, X, x0, h)
        active = np.flatnonzero(weights > 0)
        if active.size:
            cov = kernels.localized_gram(params, spec, h, x0, X[active])
    if active.size:
        samples[:, active] = linalg.sample_gaussian(cov, seed, count=count)
    return x, samples


def cmd_prior_samples(config: RunConfig) -> int:
    params = CovKernelParams(config.family, lengthscale=config.lengthscale,
                             amplitude=config.amplitude)
    x, samples = _run_stage("prior-sampling", prior_sample_matrix,
                            config.profile, config.h, config.seed, params)
    os.makedirs(config.out, exist_ok=True)
    columns = {"x": x}
    for i in range(samples.shape[0]):
        columns[f"sample{i + 1}"] = samples[i]
    data.save_table(os.path.join(config.out, "prior_samples.csv"), columns)
    _write_provenance(config, {})
    return EXIT_OK


# ---------------------------------------------------------------------------
# Benchmark


@dataclass(frozen=True)
class MethodOutcome:
    scores: tuple[float, ...]
    chosen: tuple[str, ...]


def _gp_method(train: data.Dataset, test_X, cv_seed: int):
    amp = max(float(np.var(train.y)), 1e-12)
    base = selection.default_cv_config(train.X, train.y, seed=cv_seed,
                                       grid_m=(0,))

    def factory(cell):
        params = CovKernelParams("rbf", lengthscale=cell.lengthscale, amplitude=amp)

        def predictor(tx, ty, qx):
            model = global_gp.fit(tx, ty, params, cell.noise)
            return [p.mean for p in global_gp.predict_batch(model, qx)]
        return predictor

    result = selection.kfold_cv(train.X, train.y, base, factory)
    best = result.best
    params = CovKernelParams("rbf", lengthscale=best.lengthscale, amplitude=amp)
    model = global_gp.fit(train.X, train.y, params, best.noise)
    preds = [p.mean for p in global_gp.predict_batch(model, test_X)]
    chosen = (f"lengthscale={best.lengthscale!r}", f"noise={best.noise!r}")
    return preds, chosen


def _lsgpr_method(train: data.Dataset, test_X, profile: str, cv_seed: int):
    amp = max(float(np.var(train.y)), 1e-12)
    spec = LocalKernelSpec(profile=profile, dimension=train.d)
    base = selection.default_cv_config(train.X, train.y, seed=cv_seed)

    def factory(cell):
        params = CovKernelParams("rbf", lengthscale=cell.lengthscale, amplitude=amp)

        def predictor(tx, ty, qx):
            policy = BandwidthPolicy.min_neighbors(min(cell.m, len(ty)))
            preds = local_gp.local_predict_batch(tx, ty, params, cell.noise,
                                                 spec, policy, qx)
            return [p.mean for p in preds]
        return predictor

    result = selection.kfold_cv(train.X, train.y, base, factory)
    best = result.best
    params = CovKernelParams("rbf", lengthscale=best.lengthscale, amplitude=amp)
    policy = BandwidthPolicy.min_neighbors(min(best.m, train.n))
    preds = local_gp.local_predict_batch(train.X, train.y, params, best.noise,
                                         spec, policy, test_X)
    chosen = (f"m={best.m}", f"lengthscale={best.lengthscale!r}",
              f"noise={best.noise!r}")
    return [p.mean for p in preds], chosen


def _knn_method(train: data.Dataset, test_X, cv_seed: int):
    base = selection.default_cv_config(train.X, train.y, seed=cv_seed)
    config = selection.CVConfig(folds=base.folds, grid_m=base.grid_m,
                                grid_lengthscale=(1.0,), grid_noise=(1.0,),
                                seed=base.seed)

    def factory(cell):
        def predictor(tx, ty, qx):
            k = min(cell.m, len(ty))
            return [baselines.knn_predict(tx, ty, k, q) for q in qx]
        return predictor

    result = selection.kfold_cv(train.X, train.y, config, factory)
    k = min(result.best.m, train.n)
    preds = [baselines.knn_predict(train.X, train.y, k, q) for q in test_X]
    return preds, (f"k={k}",)


def _nw_method(train: data.Dataset, test_X, profile: str, cv_seed: int):
    spec = LocalKernelSpec(profile=profile, dimension=train.d)
    base = selection.default_cv_config(train.X, train.y, seed=cv_seed,
                                       grid_m=(0,))
    config = selection.CVConfig(folds=base.folds, grid_m=(0,),
                                grid_lengthscale=base.grid_lengthscale,
                                grid_noise=(1.0,), seed=base.seed)

    def factory(cell):
        def predictor(tx, ty, qx):
            return [baselines.nadaraya_watson(tx, ty, spec, cell.lengthscale, q).value
                    for q in qx]
        return predictor

    result = selection.kfold_cv(train.X, train.y, config, factory)
    h = result.best.lengthscale
    preds = [baselines.nadaraya_watson(train.X, train.y, spec, h, q).value
             for q in test_X]
    return preds, (f"h={h!r}",)


def run_benchmark(dataset: data.Dataset, methods, profile: str, splits: int,
                  seed: int):
    """Repeated-split benchmark over the configured methods.

    Per split: 85/15 train/test, per-method hyperparameters by 3-fold CV
    on the train part, matched test MSEs.  Returns (report, failures,
    chosen-hyperparameter log); a method that fails on any split is
    reported in failures and left out of the report.
    """
    scores: dict[str, list[float]] = {m: [] for m in methods}
    failures: dict[str, str] = {}
    chosen_log: dict[str, tuple[str, ...]] = {}
    for i in range(splits):
        split_seed = seed + i
        train, _, test = data.split(
            dataset, data.SplitSpec(fractions=(0.85, 0.0, 0.15), seed=split_seed))
        for method in methods:
            if method in failures:
                continue
            try:
                if method == "gp":
                    preds, chosen = _gp_method(train, test.X, split_seed)
                elif method == "lsgpr":
                    preds, chosen = _lsgpr_method(train, test.X, profile, split_seed)
                elif method == "knn":
                    preds, chosen = _knn_method(train, test.X, split_seed)
                else:
                    preds, chosen = _nw_method(train, test.X, profile, split_seed)
                scores[method].append(selection.mse(preds, test.y))
                chosen_log[f"{method}/split{i}"] = chosen
            except LsgprError as err:
                failures[method] = f"split {i}: {err}"
    surviving = {m: s for m, s in scores.items() if m not in failures}
    report = selection.compute_report(surviving) if surviving else None
    return report, failures, chosen_log


def cmd_benchmark(config: RunConfig) -> int:
    dataset = _run_stage("data-loading", load_dataset, config)
    dataset = _run_stage("preprocessing", preprocess, dataset,
                         config.preprocessing)
    methods = config.method_list()
    report, failures, chosen_log = run_benchmark(
        dataset, methods, config.profile, config.splits, config.seed)
    for method, reason in failures.items():
        print(f"method {method} failed: {reason}", file=sys.stderr)
    if report is None:
        print("all methods failed", file=sys.stderr)
        return EXIT_NUMERICAL

    os.makedirs(config.out, exist_ok=True)
    n_splits = len(next(iter(report.scores.values())))
    columns = {"split": np.arange(n_splits, dtype=float)}
    for method in report.methods:
        columns[f"mse_{method}"] = report.scores[method]
    data.save_table(os.path.join(config.out, "report.csv"), columns)

    summary = {"seed": [float(config.seed)], "splits": [float(n_splits)]}
    for method in report.methods:
        summary[f"mean_{method}"] = [report.means[method]]
        summary[f"sd_{method}"] = [report.sds[method]]
    data.save_table(os.path.join(config.out, "summary.csv"), summary)

    pcolumns = {}
    for (a, b), result in sorted(report.pvalues.items()):
        pcolumns[f"p_{a}_lt_{b}"] = [result.pvalue]
    if pcolumns:
        data.save_table(os.path.join(config.out, "pvalues.csv"), pcolumns)

    extras = {key: "; ".join(values) for key, values in chosen_log.items()}
    extras.update({f"failed_{m}": reason for m, reason in failures.items()})
    _write_provenance(config, extras)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Predict


def cmd_predict(config: RunConfig) -> int:
    dataset = _run_stage("data-loading", load_dataset, config)
    dataset = _run_stage("preprocessing", preprocess, dataset,
                         config.preprocessing)
    if not config.queries:
        raise ConfigError("predict needs queries = <csv path>")
    queries = _run_stage("query-loading", data.load_matrix_csv,
                         resolve_data_path(config.queries),
                         has_header=config.has_header)
    if queries.shape[1] != dataset.d:
        raise DataError(
            f"queries have {queries.shape[1]} columns, expected {dataset.d}")

    lengthscale = config.lengthscale
    if lengthscale <= 0:
        lengthscale = global_gp.median_pairwise_distance(dataset.X)
    amp = config.amplitude
    params = CovKernelParams(config.family, lengthscale=lengthscale,
                             amplitude=amp)
    spec = LocalKernelSpec(profile=config.profile, dimension=dataset.d)
    policy = (BandwidthPolicy.fixed(config.h) if config.m <= 0
              else BandwidthPolicy.min_neighbors(min(config.m, dataset.n)))
    preds = _run_stage("prediction", local_gp.local_predict_batch,
                       dataset.X, dataset.y, params, config.noise, spec,
                       policy, queries)

    os.makedirs(config.out, exist_ok=True)
    columns = {name: queries[:, j] for j, name in enumerate(dataset.feature_names)}
    columns["mean"] = [p.mean for p in preds]
    columns["variance"] = [p.variance for p in preds]
    columns["neighbor_count"] = [float(p.neighbor_count) for p in preds]
    data.save_table(os.path.join(config.out, "predictions.csv"), columns)
    _write_provenance(config, {"lengthscale": lengthscale})
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point


def _write_provenance(config: RunConfig, extras: dict) -> None:
    """Echo every resolved config value (plus derived choices) for the run."""
    os.makedirs(config.out, exist_ok=True)
    path = os.path.join(config.out, "resolved_config.txt")
    with open(path, "w") as handle:
        for field in fields(config):
            handle.write(f"{field.name} = {getattr(config, field.name)}\n")
        for key in sorted(extras):
            handle.write(f"{key} = {extras[key]}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lsgpr",
        description="Locally smoothed Gaussian process regression toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("doppler-demo", "predictive-distribution dump on the Doppler function"),
            ("prior-samples", "draws from a (localized) GP prior on [-1, 1]"),
            ("benchmark", "repeated-split method comparison with Wilcoxon tests"),
            ("predict", "batch localized predictions for a query file")):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", help="key = value config file")
        cmd.add_argument("--seed", type=int, default=None)
        cmd.add_argument("--data", default=None,
                         help="CSV path (resolved against $LSGP_DATA_DIR) or 'doppler'")
        cmd.add_argument("--out", default=None, help="output directory")
        cmd.add_argument("--methods", default=None,
                         help="comma list from: " + ", ".join(METHODS))
        cmd.add_argument("--profile", default=None,
                         choices=PROFILES + ("none",))
        cmd.add_argument("--splits", type=int, default=None)
        cmd.add_argument("--noise-is-sd", dest="noise_is_sd",
                         action="store_true", default=None,
                         help="interpret the Doppler noise value as an sd")
        cmd.add_argument("--queries", default=None,
                         help="query CSV for the predict command")
    return parser


_HANDLERS = {
    "doppler-demo": cmd_doppler_demo,
    "prior-samples": cmd_prior_samples,
    "benchmark": cmd_benchmark,
    "predict": cmd_predict,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_values = parse_config_file(args.config) if args.config else {}
        overrides = {key: getattr(args, key) for key in
                     ("seed", "data", "out", "methods", "profile", "splits",
                      "noise_is_sd", "queries")}
        config = resolve_config(args.command, file_values, overrides)
        return _HANDLERS[args.command](config)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, DataFileError, NonNumericCellError, TargetColumnError) as err:
        stage = getattr(err, "stage", None)
        prefix = f"[{stage}] " if stage else ""
        print(f"data error: {prefix}{err}", file=sys.stderr)
        return EXIT_DATA
    except (SingularMatrixError, NumericalError) as err:
        stage = getattr(err, "stage", None)
        prefix = f"[{stage}] " if stage else ""
        print(f"numerical failure: {prefix}{err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
