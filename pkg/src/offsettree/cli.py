"""Command-line interface.

Subcommands: banditify, train, eval, eval-ips, experiment, online,
regret-check, sample-complexity.  Every option can also come from a flat
key=value config file (--config); explicit flags win.  Each run emits a JSON
manifest (command, fully resolved config, seed, input digests, versions) that
is sufficient to replay it: passing a manifest file back via --config reruns
the command with the recorded configuration.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import platform
import sys

import numpy as np

from . import __version__
from .checks import run_all
from .core import estimate_value_ips
from .costing import CostingConfig
from .dataio import read_bandit_log, read_multiclass, write_bandit_log
from .harness import (ExperimentConfig, ExplorationSchedule, banditify_dataset,
                      make_trainer, run_offline_experiment,
                      run_online_epoch_greedy, sample_complexity_trial)
from .serialize import load_model, save_model

MANIFEST_TAG = "offsettree-manifest"
MANIFEST_VERSION = 1

BINARY_METHODS = ("offset-tree", "binary-offset", "iwc")


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(65536), b""):
            h.update(block)
    return "sha256:" + h.hexdigest()


def load_config(path: str) -> dict:
    """Flat key=value config, or the config block of a run manifest."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        if doc.get("format") != MANIFEST_TAG:
            raise ValueError(f"{path}: JSON config must be a run manifest")
        return {str(k): v for k, v in doc["config"].items()}
    cfg = {}
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{number}: expected key=value, got {line!r}")
        key, _, value = stripped.partition("=")
        cfg[key.strip().replace("-", "_")] = value.strip()
    return cfg


def _as_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {value!r}")


class Options:
    """Flag values backed by a config file; flags win, defaults last."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config = load_config(args.config) if args.config else {}
        self.resolved: dict = {}

    def get(self, name: str, default, cast):
        flag = getattr(self.args, name, None)
        if flag is not None:
            value = flag if cast is None else cast(flag)
        elif self.config.get(name) is not None:
            value = cast(self.config[name]) if cast else self.config[name]
        else:
            value = default
        self.resolved[name] = value
        return value


def _costing(opts: Options) -> CostingConfig:
    draws = opts.get("draws", 1, int)
    normalizer = opts.get("normalizer", None, float)
    share = opts.get("share_classifier", False, _as_bool)
    seed = opts.get("seed", 0, int)
    return CostingConfig(draws=draws, normalizer=normalizer, rng_seed=seed,
                         share_classifier=share)


def emit_manifest(command: str, opts: Options, inputs: list[str],
                  out: str | None, extra: dict | None = None) -> None:
    manifest = {
        "format": MANIFEST_TAG,
        "version": MANIFEST_VERSION,
        "command": command,
        "config": {k: v for k, v in sorted(opts.resolved.items())},
        "seed": opts.resolved.get("seed", 0),
        "inputs": {path: _sha256(path) for path in inputs},
        "versions": {"package": __version__, "numpy": np.__version__,
                     "python": platform.python_version()},
    }
    if extra:
        manifest.update(extra)
    text = json.dumps(manifest, sort_keys=True, separators=(",", ":"))
    if out:
        with open(out + ".manifest.json", "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _write_or_print(out: str | None, text: str) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        print(text, end="" if text.endswith("\n") else "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_banditify(args) -> int:
    opts = Options(args)
    data_path = opts.get("data", None, str)
    if not data_path:
        raise ValueError("banditify needs --data with a multiclass file")
    out = opts.get("out", None, str)
    if not out:
        raise ValueError("banditify needs --out for the log file")
    seed = opts.get("seed", 0, int)
    k_flag = opts.get("k", None, int)
    prop_text = opts.get("propensities", None, str)
    dataset = read_multiclass(data_path)
    if k_flag is not None and k_flag != dataset.k:
        raise ValueError(f"k={k_flag} does not match the file's k={dataset.k}")
    propensities = None
    if prop_text:
        propensities = [float(v) for v in str(prop_text).split(",")]
        if len(propensities) != dataset.k:
            raise ValueError(f"need {dataset.k} propensities, got {len(propensities)}")
    rng = np.random.default_rng(np.random.SeedSequence([seed]))
    log = banditify_dataset(dataset, propensities, rng)
    write_bandit_log(out, log, d=dataset.d)
    emit_manifest("banditify", opts, [data_path], out)
    return 0


def cmd_train(args) -> int:
    opts = Options(args)
    log_path = opts.get("log", None, str)
    if not log_path:
        raise ValueError("train needs --log with a partial-label log file")
    out = opts.get("out", None, str)
    if not out:
        raise ValueError("train needs --out for the model file")
    method = opts.get("method", "offset-tree", str)
    default_learner = "least-squares" if method == "regression" else "perceptron"
    learner = opts.get("learner", default_learner, str)
    epochs = opts.get("epochs", 10, int)
    use_prop = not opts.get("no_propensities", False, _as_bool)
    costing = _costing(opts)
    log = read_bandit_log(log_path)
    trainer = make_trainer(method, learner, costing, seed=costing.rng_seed,
                           epochs=epochs, use_propensities=use_prop)
    model = trainer(list(log.examples))
    save_model(model, out)
    emit_manifest("train", opts, [log_path], out)
    return 0


def cmd_eval(args) -> int:
    opts = Options(args)
    model_path = opts.get("model", None, str)
    data_path = opts.get("data", None, str)
    if not model_path or not data_path:
        raise ValueError("eval needs --model and --data")
    out = opts.get("out", None, str)
    model = load_model(model_path)
    dataset = read_multiclass(data_path)
    if getattr(model, "n_features", None) not in (None, dataset.d):
        raise ValueError(f"model expects {model.n_features} features, "
                         f"data has {dataset.d}")
    wrong = sum(1 for x, y in zip(dataset.xs, dataset.labels)
                if int(model(x)) != int(y))
    error = wrong / len(dataset)
    _write_or_print(out, f"error_rate {error!r}\n")
    emit_manifest("eval", opts, [model_path, data_path], out)
    return 0


def cmd_eval_ips(args) -> int:
    opts = Options(args)
    model_path = opts.get("model", None, str)
    log_path = opts.get("log", None, str)
    if not model_path or not log_path:
        raise ValueError("eval-ips needs --model and --log")
    out = opts.get("out", None, str)
    model = load_model(model_path)
    log = read_bandit_log(log_path)
    if getattr(model, "n_features", None) not in (None, log.d):
        raise ValueError(f"model expects {model.n_features} features, log has {log.d}")
    value = estimate_value_ips(model, log.examples)
    _write_or_print(out, f"ips_value {value!r}\n")
    emit_manifest("eval-ips", opts, [model_path, log_path], out)
    return 0


_EXPERIMENT_KEYS = {"data", "out", "seed", "methods", "method", "learner",
                    "regression_learner", "splits", "train_fraction", "epochs",
                    "draws", "normalizer", "share_classifier"}


def cmd_experiment(args) -> int:
    opts = Options(args)
    problems = [key for key in opts.config if key not in _EXPERIMENT_KEYS]
    if problems:
        raise ValueError("unknown config keys: " + ", ".join(sorted(problems)))
    data_path = opts.get("data", None, str)
    if not data_path:
        raise ValueError("experiment needs --data with a multiclass file")
    out = opts.get("out", None, str)
    seed = opts.get("seed", 0, int)
    methods_text = opts.get("methods", None, str) or opts.get("method", "offset-tree", str)
    methods = [m.strip() for m in str(methods_text).split(",") if m.strip()]
    learner = opts.get("learner", "perceptron", str)
    reg_learner = opts.get("regression_learner", "least-squares", str)
    splits = opts.get("splits", 10, int)
    train_fraction = opts.get("train_fraction", 2.0 / 3.0, float)
    epochs = opts.get("epochs", 10, int)
    costing = _costing(opts)

    dataset = read_multiclass(data_path)
    lines = ["split\tmethod\tlearner\terror"]
    digests = {}
    for method in methods:
        method_learner = reg_learner if method == "regression" else learner
        cfg = ExperimentConfig(method=method, learner=method_learner,
                               splits=splits, train_fraction=train_fraction,
                               seed=seed, costing=costing, epochs=epochs)
        result = run_offline_experiment(dataset, cfg)
        digests[method] = tuple(s.train_digest for s in result.splits)
        for s in result.splits:
            lines.append(f"{s.split}\t{method}\t{method_learner}\t{s.error!r}")
        lines.append(f"mean\t{method}\t{method_learner}\t{result.mean_error!r}")
    if len(set(digests.values())) > 1:
        raise AssertionError("split membership differed between methods")
    lines.append(f"random-guess\t-\t-\t{1.0 - 1.0 / dataset.k!r}")
    table = "\n".join(lines) + "\n"
    _write_or_print(out, table)
    shared_digests = list(sorted(set(digests.values()))[0]) if digests else []
    emit_manifest("experiment", opts, [data_path], out,
                  extra={"split_digests": shared_digests})
    return 0


def cmd_online(args) -> int:
    opts = Options(args)
    data_path = opts.get("data", None, str)
    if not data_path:
        raise ValueError("online needs --data with a multiclass file")
    out = opts.get("out", None, str)
    seed = opts.get("seed", 0, int)
    mode = opts.get("mode", "agnostic", str)
    method = opts.get("method", "offset-tree", str)
    default_learner = "least-squares" if method == "regression" else "perceptron"
    learner = opts.get("learner", default_learner, str)
    retrain_every = opts.get("retrain_every", 100, int)
    include_exploit = opts.get("include_exploit", False, _as_bool)
    epochs = opts.get("epochs", 10, int)
    costing = _costing(opts)
    dataset = read_multiclass(data_path)
    result = run_online_epoch_greedy(dataset, ExplorationSchedule(mode),
                                     method=method, learner=learner, seed=seed,
                                     retrain_every=retrain_every,
                                     include_exploit=include_exploit,
                                     costing=costing, epochs=epochs)
    lines = ["step\trunning_error"]
    lines += [f"{t + 1}\t{err!r}" for t, err in enumerate(result.running_error)]
    lines.append(f"# final_error {result.final_error!r} explored {result.n_explore} "
                 f"trained_on {result.n_train_examples}")
    _write_or_print(out, "\n".join(lines) + "\n")
    emit_manifest("online", opts, [data_path], out)
    return 0


def cmd_regret_check(args) -> int:
    opts = Options(args)
    seed = opts.get("seed", 0, int)
    out = opts.get("out", None, str)
    reports = run_all(seed=seed)
    lines = [r.line() for r in reports]
    _write_or_print(out, "\n".join(lines) + "\n")
    emit_manifest("regret-check", opts, [], out)
    return 0 if all(r.passed for r in reports) else 1


def cmd_sample_complexity(args) -> int:
    opts = Options(args)
    m = opts.get("m", 1000, int)
    delta = opts.get("delta", 0.1, float)
    trials = opts.get("trials", 200, int)
    seed = opts.get("seed", 0, int)
    out = opts.get("out", None, str)
    result = sample_complexity_trial(m, delta=delta, trials=trials, seed=seed)
    lines = [
        f"m {result.m}  classifiers {result.n_classifiers}  delta {result.delta!r}  "
        f"trials {result.trials}",
        f"offset-1/2 bound {result.bound_half!r}  violation rate "
        f"{result.violation_rate_half!r}",
    ]
    if result.bound_zero is None:
        lines.append(f"offset-0 bound skipped ({result.notice})")
    else:
        lines.append(f"offset-0 bound {result.bound_zero!r}  violation rate "
                     f"{result.violation_rate_zero!r}")
    _write_or_print(out, "\n".join(lines) + "\n")
    emit_manifest("sample-complexity", opts, [], out)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=int, default=None, help="master seed")
    shared.add_argument("--config", default=None,
                        help="flat key=value config file or a run manifest")
    shared.add_argument("--out", default=None, help="output path")

    parser = argparse.ArgumentParser(
        prog="offsettree",
        description="Learning with partial (bandit) feedback via binary reductions.")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("banditify", parents=[shared],
                       help="turn a multiclass file into a partial-label log")
    p.add_argument("--data", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--propensities", default=None,
                   help="comma-separated logging distribution (default uniform)")
    p.set_defaults(func=cmd_banditify)

    p = sub.add_parser("train", parents=[shared], help="train a policy from a log")
    p.add_argument("--log", default=None)
    p.add_argument("--method", default=None,
                   choices=("offset-tree", "binary-offset", "regression", "iwc"))
    p.add_argument("--learner", default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--draws", type=int, default=None)
    p.add_argument("--normalizer", type=float, default=None)
    p.add_argument("--share-classifier", dest="share_classifier",
                   action="store_const", const=True, default=None)
    p.add_argument("--no-propensities", dest="no_propensities",
                   action="store_const", const=True, default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", parents=[shared],
                       help="error rate of a model on labeled data")
    p.add_argument("--model", default=None)
    p.add_argument("--data", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("eval-ips", parents=[shared],
                       help="inverse-propensity value estimate on a held-out log")
    p.add_argument("--model", default=None)
    p.add_argument("--log", default=None)
    p.set_defaults(func=cmd_eval_ips)

    p = sub.add_parser("experiment", parents=[shared],
                       help="offline split experiment over one or more methods")
    p.add_argument("--data", default=None)
    p.add_argument("--methods", default=None,
                   help="comma-separated method list")
    p.add_argument("--learner", default=None)
    p.add_argument("--regression-learner", dest="regression_learner", default=None)
    p.add_argument("--splits", type=int, default=None)
    p.add_argument("--train-fraction", dest="train_fraction", type=float, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--draws", type=int, default=None)
    p.add_argument("--normalizer", type=float, default=None)
    p.add_argument("--share-classifier", dest="share_classifier",
                   action="store_const", const=True, default=None)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("online", parents=[shared],
                       help="one-pass epoch-greedy exploration over a dataset")
    p.add_argument("--data", default=None)
    p.add_argument("--mode", default=None, choices=("agnostic", "realizable"))
    p.add_argument("--method", default=None)
    p.add_argument("--learner", default=None)
    p.add_argument("--retrain-every", dest="retrain_every", type=int, default=None)
    p.add_argument("--include-exploit", dest="include_exploit",
                   action="store_const", const=True, default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--draws", type=int, default=None)
    p.add_argument("--normalizer", type=float, default=None)
    p.set_defaults(func=cmd_online)

    p = sub.add_parser("regret-check", parents=[shared],
                       help="run the enumerated bound suites")
    p.set_defaults(func=cmd_regret_check)

    p = sub.add_parser("sample-complexity", parents=[shared],
                       help="Monte Carlo check of the deviation bounds")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.set_defaults(func=cmd_sample_complexity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, AssertionError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
