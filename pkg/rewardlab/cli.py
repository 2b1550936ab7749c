import argparse
import os
import sys

import pandas as pd
from dotenv import load_dotenv

from .errors import ConfigError, LabError
from .harness.config import SuiteConfig
from .harness.report_generator import ReportGenerator, rescore
from .harness.scoring import normalized_improvement
from .harness.suite import DEFAULT_WORKERS, resolve_workers, run_suite, run_train_suite
from .noise.channels import parse_noise
from .sources import FeatureMode
from .tabular.experiment import DEFAULT_ALPHAS, run_tabular_experiment, summarize_tabular
from .utils.file_utils import summary_path_for
from .utils.logger import configure_logging
from .variance.checks import CHECK_ALIASES, CHECKS, run_check
from .variance.statistics import measure_from_checkpoints


def _floats(text: str):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise ConfigError(f"Expected a comma list of numbers, got '{text}'") from e


def _output_path(name: str) -> str:
    if os.path.dirname(name):
        return name
    return os.path.join(os.environ.get("LAB_OUTPUT_DIR", "results"), name)


def cmd_tabular(args) -> int:
    frames = []
    noise = parse_noise(args.noise)
    for preset in [p.strip() for p in args.preset.split(",") if p.strip()]:
        for reward in _floats(args.reward):
            frame = run_tabular_experiment(
                preset,
                reward_value=reward,
                reward_prob=args.prob,
                noise=noise,
                alphas=_floats(args.alphas),
                episodes=args.episodes,
                seeds=range(args.seeds),
                key_mode=FeatureMode(args.key_mode),
                workers=args.workers,
            )
            frames.append(frame)
    results = pd.concat(frames, ignore_index=True)
    results.insert(0, "noise", noise.label())
    summary = summarize_tabular(results)
    out = _output_path(args.out)
    ReportGenerator.write_frame(results, out)
    ReportGenerator.write_frame(summary, summary_path_for(out))
    print(summary.to_string(index=False))
    print(f"\nResults saved to {out}")
    return 0


def cmd_variance(args) -> int:
    if args.policy or args.reward_model:
        if not (args.policy and args.reward_model):
            raise ConfigError("--policy and --reward-model must be given together")
        report = measure_from_checkpoints(args.env, args.policy, args.reward_model, FeatureMode(args.feature_mode),
                                          parse_noise(args.noise), args.episodes, args.table_trials, args.seed)
        frame = report.frame()
    else:
        frame = run_check(args.check, trials=int(float(args.trials)), seed=args.seed)
    out = _output_path(args.out)
    ReportGenerator.write_frame(frame, out)
    print(frame.to_string(index=False))
    print(f"\nResults saved to {out}")
    return 0


def cmd_train(args) -> int:
    values = {
        "suite.id": args.id or f"train-{args.env}",
        "suite.seeds": ",".join(str(s) for s in range(args.seeds)),
        "env.id": args.env,
        "noise.sweep": args.noise,
        "train.algo": args.algo,
        "train.sources": args.source,
        "train.updates": str(args.updates),
        "train.n_envs": str(args.n_envs),
        "train.rollout_length": str(args.rollout_length),
        "train.window": str(args.window),
        "train.reward_steps": str(args.reward_steps),
        "output.path": _output_path(args.out),
    }
    if args.reward_lr is not None:
        values["train.reward_lr"] = str(args.reward_lr)
    for override in args.set or []:
        key, sep, value = override.partition("=")
        if not sep:
            raise ConfigError(f"--set expects name=value, got '{override}'")
        values[f"env.{key.strip()}"] = value.strip()
    config = SuiteConfig.from_values(values)
    config.checkpoint_dir = args.checkpoint_dir
    result = run_train_suite(config, resolve_workers(config, args.workers))
    print(result.summary.to_string(index=False))
    return 0


def cmd_suite(args) -> int:
    result = run_suite(args.config, workers=args.workers, output_path=args.out)
    print(result.summary.to_string(index=False))
    return 0


def cmd_score(args) -> int:
    if args.results:
        summary = rescore(args.results)
        if args.out:
            ReportGenerator.write_frame(summary, args.out)
        print(summary.to_string(index=False))
        return 0
    if None in (args.ours, args.best, args.random):
        raise ConfigError("score needs --results, or all of --ours, --best and --random")
    print(f"{normalized_improvement(args.ours, args.best, args.random):.2f}%")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lab", description="Reward estimation under corrupted rewards")
    parser.add_argument("--log-level", help="Logging level (overrides LAB_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)
    default_workers = int(os.environ.get("LAB_WORKERS", DEFAULT_WORKERS))

    tabular = sub.add_parser("tabular", help="TD(0) RMSE sweep on chain MDPs")
    tabular.add_argument("--preset", default="chain5", help="Comma list of chain presets")
    tabular.add_argument("--reward", default="1", help="Comma list of reward values, e.g. 1,2,5")
    tabular.add_argument("--prob", type=float, default=0.5)
    tabular.add_argument("--noise", default="none", help="Noise spec, e.g. gaussian:0.3")
    tabular.add_argument("--alphas", default=",".join(str(a) for a in DEFAULT_ALPHAS))
    tabular.add_argument("--episodes", type=int, default=100)
    tabular.add_argument("--seeds", type=int, default=10, help="Number of seeds (0..N-1)")
    tabular.add_argument("--key-mode", choices=[m.value for m in FeatureMode], default="s")
    tabular.add_argument("--workers", type=int, default=default_workers)
    tabular.add_argument("--out", default="tabular.csv")
    tabular.set_defaults(func=cmd_tabular)

    variance = sub.add_parser("variance", help="Monte-Carlo checks of the variance identities")
    variance.add_argument("--check", choices=CHECKS + tuple(CHECK_ALIASES), default="sample-mean")
    variance.add_argument("--trials", default="1e5", help="Monte-Carlo trials, e.g. 1e6")
    variance.add_argument("--seed", type=int, default=0)
    variance.add_argument("--env", default="pointmass", help="Environment for checkpoint measurements")
    variance.add_argument("--policy", help="Frozen policy parameter file")
    variance.add_argument("--reward-model", help="Frozen reward model parameter file")
    variance.add_argument("--feature-mode", choices=[m.value for m in FeatureMode], default="sa")
    variance.add_argument("--noise", default="none")
    variance.add_argument("--episodes", type=int, default=100)
    variance.add_argument("--table-trials", type=int, default=10)
    variance.add_argument("--out", default="variance.csv")
    variance.set_defaults(func=cmd_variance)

    train = sub.add_parser("train", help="Actor-critic runs with sampled or estimated rewards")
    train.add_argument("--env", default="pointmass")
    train.add_argument("--noise", default="none", help="Comma list of noise specs")
    train.add_argument("--algo", choices=["a2c", "clipped"], default="clipped")
    train.add_argument("--source", default="sampled,estimated:sa", help="Comma list of reward sources")
    train.add_argument("--seeds", type=int, default=10)
    train.add_argument("--updates", type=int, default=400)
    train.add_argument("--n-envs", type=int, default=8)
    train.add_argument("--rollout-length", type=int, default=32)
    train.add_argument("--window", type=int, default=100)
    train.add_argument("--reward-lr", type=float)
    train.add_argument("--reward-steps", type=int, default=1)
    train.add_argument("--set", action="append", metavar="NAME=VALUE", help="Environment preset override")
    train.add_argument("--checkpoint-dir", help="Save trained parameters here")
    train.add_argument("--id", help="Suite id written to every record")
    train.add_argument("--workers", type=int)
    train.add_argument("--out", default="curves.csv")
    train.set_defaults(func=cmd_train)

    suite = sub.add_parser("suite", help="Run a suite config file")
    suite.add_argument("config")
    suite.add_argument("--workers", type=int)
    suite.add_argument("--out", help="Override output.path")
    suite.set_defaults(func=cmd_suite)

    score = sub.add_parser("score", help="Normalized improvement over the best baseline")
    score.add_argument("--results", help="Recompute the summary of a results CSV")
    score.add_argument("--out", help="Write the recomputed summary here")
    score.add_argument("--ours", type=float)
    score.add_argument("--best", type=float)
    score.add_argument("--random", type=float)
    score.set_defaults(func=cmd_score)
    return parser


def main(argv=None) -> int:
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    try:
        return args.func(args)
    except LabError as e:
        print(f"Error: {e.message}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
