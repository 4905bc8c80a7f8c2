"""Command-line interface: verify, adapt, ablate, synth, benchmark.

Results are JSON with a top-level ``schema_version``; data files
(synthetic domains, dumped embeddings) are CSV.  Every command is
deterministic given identical flags, files, and seeds.  Exit codes:
0 success, 1 numerical/verification failure, 2 usage error.

Figures are opt-in: passing ``--figures DIR`` to adapt/ablate/benchmark
renders PNG summaries next to the regular outputs.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import re
import sys
import time
from pathlib import Path

import numpy as np

from .data import (
    NORMALIZE_MODES,
    SynthSpec,
    load_domain_csv,
    load_labels,
    save_domain_csv,
    save_labels,
    synth_shifted_gaussians,
)
from .errors import (
    ClassAbsentError,
    DataFormatError,
    NumericalError,
    UnusableLabelsError,
)
from .objectives import ABLATION_VARIANTS
from .pipeline import (
    CLASSIFIERS,
    PRESETS,
    STRATEGIES,
    AdaptConfig,
    adapt,
    run_ablation_suite,
)
from .stats import LabeledData
from .verify import run_identity_suite

SCHEMA_VERSION = 1

_TASK_NAME = re.compile(r"[A-Za-z0-9._-]+")

# argparse dest -> AdaptConfig field, for flags that map one-to-one.
_CONFIG_DESTS = {
    "k": "k",
    "alpha": "alpha",
    "beta": "beta",
    "lambda_": "lambda_",
    "t_iters": "t_iters",
    "p_neighbors": "p_neighbors",
    "classifier": "classifier",
    "normalize": "normalize",
    "seed": "seed",
    "ridge": "ridge",
    "metric": "metric",
    "weight_mode": "weight_mode",
    "variant": "ablation_variant",
    "gamma1": "gamma1",
    "gamma2": "gamma2",
}


def _jsonable(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON-serializable: {type(obj).__name__}")


def _write_json(path, payload) -> Path:
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, default=_jsonable) + "\n")
    return path


def _build_config(overrides: dict, preset: str | None) -> AdaptConfig:
    if preset is not None:
        return AdaptConfig.preset(preset, **overrides)
    return AdaptConfig(**overrides)


def _config_from_args(args) -> AdaptConfig:
    overrides = {}
    strategy = getattr(args, "strategy", None)
    if strategy is not None:
        overrides["strategy"] = strategy
    for dest, field_name in _CONFIG_DESTS.items():
        val = getattr(args, dest, None)
        if val is not None:
            overrides[field_name] = val
    return _build_config(overrides, getattr(args, "preset", None))


def _load_task(source_path, target_path, truth_path):
    x_s, y_s, info = load_domain_csv(source_path)
    if not info.labeled:
        raise DataFormatError(
            f"{source_path}: source rows must all carry real labels "
            "(-1 marks unlabeled data)"
        )
    x_t, _, _ = load_domain_csv(target_path)
    truth = load_labels(truth_path) if truth_path else None
    source = LabeledData(x=x_s, y=y_s, c=int(y_s.max()))
    return source, x_t, truth


def _adapt_payload(res) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "adapt",
        "config": dataclasses.asdict(res.config),
        "metadata": res.metadata,
        "final_labels": [int(v) for v in res.final_labels],
        "per_iteration": res.per_iteration,
        "timing": res.timing,
    }


def cmd_verify(args) -> int:
    reports = run_identity_suite(
        trials=args.trials, seed=args.seed, tolerance=args.tolerance
    )
    for rep in reports:
        print(rep.line())
    return 0 if all(rep.passed for rep in reports) else 1


def cmd_adapt(args) -> int:
    source, x_t, truth = _load_task(args.source, args.target, args.truth)
    cfg = _config_from_args(args)
    res = adapt(source, x_t, truth, cfg)
    out = _write_json(args.out, _adapt_payload(res))
    print(f"wrote {out}")

    if args.dump_embeddings:
        n_s = source.n
        src_path = Path(f"{args.dump_embeddings}_source.csv")
        tgt_path = Path(f"{args.dump_embeddings}_target.csv")
        save_domain_csv(src_path, res.embedding[:, :n_s], source.y)
        save_domain_csv(tgt_path, res.embedding[:, n_s:], res.final_labels)
        print(f"wrote {src_path}")
        print(f"wrote {tgt_path}")

    if args.figures:
        from . import figures

        fig_dir = Path(args.figures)
        p1 = figures.save_iteration_curves(
            res.per_iteration,
            fig_dir / "adapt_iterations.png",
            init_accuracy=res.metadata.get("init_accuracy"),
        )
        n_s = source.n
        p2 = figures.save_embedding_scatter(
            res.embedding[:, :n_s],
            source.y,
            res.embedding[:, n_s:],
            fig_dir / "adapt_embedding.png",
            y_t=res.final_labels,
        )
        print(f"wrote {p1}")
        print(f"wrote {p2}")
    return 0


def cmd_ablate(args) -> int:
    source, x_t, truth = _load_task(args.source, args.target, args.truth)
    cfg = _config_from_args(args)
    t0 = time.perf_counter()
    rows = run_ablation_suite(source, x_t, truth, cfg)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "ablate",
        "config": dataclasses.asdict(cfg),
        "rows": [
            {
                "row": r["row"],
                "strategy": r["strategy"],
                "classifier": r["classifier"],
                "accuracy": r["accuracy"],
                "iteration_accuracy": [
                    rec["accuracy"] for rec in r["result"].per_iteration
                ],
            }
            for r in rows
        ],
        "timing": time.perf_counter() - t0,
    }
    out = _write_json(args.out, payload)
    print(f"wrote {out}")

    if args.figures:
        from . import figures

        p = figures.save_ablation_bars(
            payload["rows"], Path(args.figures) / "ablation_accuracy.png"
        )
        print(f"wrote {p}")
    return 0


def cmd_synth(args) -> int:
    kwargs = {}
    for dest, field_name in (
        ("classes", "c"),
        ("features", "m"),
        ("n_source", "n_per_class_source"),
        ("n_target", "n_per_class_target"),
        ("class_sep", "class_sep"),
        ("rotation_deg", "domain_rotation_deg"),
        ("shift", "domain_shift"),
        ("noise_sigma", "noise_sigma"),
        ("seed", "seed"),
    ):
        val = getattr(args, dest)
        if val is not None:
            kwargs[field_name] = val
    spec = SynthSpec(**kwargs)
    source, x_t, y_t = synth_shifted_gaussians(spec)
    for p in (args.out_source, args.out_target, args.out_truth):
        parent = Path(p).parent
        if parent != Path(""):
            parent.mkdir(parents=True, exist_ok=True)
    save_domain_csv(args.out_source, source.x, source.y)
    save_domain_csv(args.out_target, x_t, None)
    save_labels(args.out_truth, y_t)
    for p in (args.out_source, args.out_target, args.out_truth):
        print(f"wrote {p}")
    return 0


def _read_manifest(path) -> list[dict]:
    base = Path(path).parent
    manifest = json.loads(Path(path).read_text())
    tasks = manifest.get("tasks")
    if not isinstance(tasks, list) or not tasks:
        raise ValueError(f"{path}: manifest needs a non-empty 'tasks' list")
    seen = set()
    parsed = []
    for i, task in enumerate(tasks):
        name = task.get("name")
        if not isinstance(name, str) or not _TASK_NAME.fullmatch(name):
            raise ValueError(
                f"{path}: task {i}: 'name' must match {_TASK_NAME.pattern}"
            )
        if name in seen:
            raise ValueError(f"{path}: duplicate task name {name!r}")
        seen.add(name)
        for key in ("source", "target"):
            if key not in task:
                raise ValueError(f"{path}: task {name!r}: missing {key!r}")
        entry = {
            "name": name,
            "source": base / task["source"],
            "target": base / task["target"],
            "truth": (base / task["truth"]) if task.get("truth") else None,
            "config": dict(task.get("config", {})),
        }
        for key in ("source", "target", "truth"):
            p = entry[key]
            if p is not None and not p.is_file():
                raise FileNotFoundError(f"task {name!r}: missing file {p}")
        parsed.append(entry)
    return parsed


def cmd_benchmark(args) -> int:
    tasks = _read_manifest(args.manifest)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    summary_rows = []
    for task in tasks:
        source, x_t, truth = _load_task(
            task["source"], task["target"], task["truth"]
        )
        overrides = task["config"]
        preset = overrides.pop("preset", args.preset)
        cfg = _build_config(overrides, preset)
        res = adapt(source, x_t, truth, cfg)
        payload = _adapt_payload(res)
        payload["command"] = "benchmark-task"
        payload["task"] = task["name"]
        result_file = _write_json(out_dir / f"{task['name']}.json", payload)
        print(f"wrote {result_file}")
        summary_rows.append(
            {
                "name": task["name"],
                "accuracy": res.per_iteration[-1]["accuracy"],
                "init_accuracy": res.metadata["init_accuracy"],
                "result_file": result_file.name,
            }
        )

    scored = [r["accuracy"] for r in summary_rows if r["accuracy"] is not None]
    summary = {
        "schema_version": SCHEMA_VERSION,
        "command": "benchmark",
        "tasks": summary_rows,
        "mean_accuracy": float(np.mean(scored)) if scored else None,
        "timing": time.perf_counter() - t0,
    }
    summary_file = _write_json(out_dir / "summary.json", summary)
    print(f"wrote {summary_file}")

    if args.figures:
        from . import figures

        p = figures.save_benchmark_bars(
            summary_rows, Path(args.figures) / "benchmark_accuracy.png"
        )
        print(f"wrote {p}")
    return 0


def _add_task_flags(sub) -> None:
    sub.add_argument("--source", required=True, help="labeled source CSV")
    sub.add_argument("--target", required=True, help="target CSV (labels ignored)")
    sub.add_argument("--truth", help="target ground-truth label file (evaluation only)")


def _add_config_flags(sub) -> None:
    sub.add_argument("--k", type=int, help="projection width")
    sub.add_argument("--alpha", type=float, help="objective regularizer")
    sub.add_argument("--beta", type=float, help="within-class trade-off (strategy s1)")
    sub.add_argument(
        "--lambda", dest="lambda_", type=float,
        help="inter-class balance in [0, 1] (strategy s2)",
    )
    sub.add_argument("--T", dest="t_iters", type=int, help="adaptation iterations")
    sub.add_argument(
        "--p", dest="p_neighbors", type=int, help="graph neighbors per node"
    )
    sub.add_argument("--classifier", choices=CLASSIFIERS)
    sub.add_argument("--normalize", choices=NORMALIZE_MODES)
    sub.add_argument("--preset", choices=tuple(PRESETS))
    sub.add_argument("--seed", type=int, help="recorded in the config (runs are deterministic)")
    sub.add_argument("--ridge", type=float, help="starting eigensolver ridge")
    sub.add_argument("--metric", choices=("cosine", "euclidean-gaussian"))
    sub.add_argument(
        "--weight-mode", dest="weight_mode", choices=("product", "sum"),
        help="inter-class pair weighting (strategy s2)",
    )
    sub.add_argument(
        "--variant", choices=ABLATION_VARIANTS,
        help="extra scatter terms (strategy ablation)",
    )
    sub.add_argument("--gamma1", type=float, help="intra-class term weight")
    sub.add_argument("--gamma2", type=float, help="inter-class term weight")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dmmd",
        description=(
            "Discriminative distribution-matching projections for "
            "unsupervised domain adaptation."
        ),
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_verify = subs.add_parser(
        "verify", help="randomized numerical checks of the exact identities"
    )
    p_verify.add_argument("--trials", type=int, default=100)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--tolerance", type=float, default=1e-8)
    p_verify.set_defaults(func=cmd_verify)

    p_adapt = subs.add_parser("adapt", help="run one adaptation and save results")
    _add_task_flags(p_adapt)
    p_adapt.add_argument("--strategy", required=True, choices=STRATEGIES)
    _add_config_flags(p_adapt)
    p_adapt.add_argument("--out", default="adapt_result.json")
    p_adapt.add_argument(
        "--dump-embeddings",
        metavar="PREFIX",
        help="write projected coordinates to PREFIX_source.csv / PREFIX_target.csv",
    )
    p_adapt.add_argument("--figures", metavar="DIR", help="render PNG summaries here")
    p_adapt.set_defaults(func=cmd_adapt)

    p_ablate = subs.add_parser(
        "ablate", help="compare objective variants on one task"
    )
    _add_task_flags(p_ablate)
    _add_config_flags(p_ablate)
    p_ablate.add_argument("--out", default="ablation.json")
    p_ablate.add_argument("--figures", metavar="DIR", help="render PNG summaries here")
    p_ablate.set_defaults(func=cmd_ablate)

    p_synth = subs.add_parser(
        "synth", help="generate a synthetic shifted-mixture task"
    )
    p_synth.add_argument("--classes", type=int)
    p_synth.add_argument("--features", type=int)
    p_synth.add_argument("--n-source", dest="n_source", type=int, help="per class")
    p_synth.add_argument("--n-target", dest="n_target", type=int, help="per class")
    p_synth.add_argument("--class-sep", dest="class_sep", type=float)
    p_synth.add_argument("--rotation-deg", dest="rotation_deg", type=float)
    p_synth.add_argument("--shift", type=float)
    p_synth.add_argument("--noise-sigma", dest="noise_sigma", type=float)
    p_synth.add_argument("--seed", type=int)
    p_synth.add_argument("--out-source", default="synth_source.csv")
    p_synth.add_argument("--out-target", default="synth_target.csv")
    p_synth.add_argument("--out-truth", default="synth_truth.csv")
    p_synth.set_defaults(func=cmd_synth)

    p_bench = subs.add_parser(
        "benchmark", help="run every task in a JSON manifest"
    )
    p_bench.add_argument("--manifest", required=True)
    p_bench.add_argument("--out-dir", dest="out_dir", default="benchmark_out")
    p_bench.add_argument(
        "--preset", choices=tuple(PRESETS), help="default preset for tasks"
    )
    p_bench.add_argument("--figures", metavar="DIR", help="render PNG summaries here")
    p_bench.set_defaults(func=cmd_benchmark)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UnusableLabelsError, ClassAbsentError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DataFormatError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
