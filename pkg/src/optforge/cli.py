"""Command-line pipeline: synthesize, benchmark, build, split, plan,
metrics, render.

Every subcommand shares the same conventions: ``--config`` loads a
JSON :class:`PipelineConfig` (flags override fields), ``--seed`` pins
determinism, ``--force`` overwrites outputs (without it, a command
whose outputs all exist is a no-op so pipelines are resumable), and
the ``OPT_FORGE_LOG`` environment variable sets the log level.
"""

import argparse
import dataclasses
import json
import logging
import os
import sys
from dataclasses import dataclass, field

from .bench import (DEFAULT_POOL, benchmark_set, load_knowledge,
                    save_knowledge, save_records)
from .dataset import (SamplingPlan, build_instruction_set, load_pairs,
                      sampling_weights, save_pairs, split_pairs)
from .metrics import (EvalOutcome, MetricsReport, RepairRecord,
                      compute_report, format_table)
from .problems.instance import load_instances, save_instances
from .problems.synthesis import synthesize_set
from .render.answers import emit_answer
from .render.prompts import render_prompt
from .render.styles import WritingStyle
from .dataset import prompt_seed

log = logging.getLogger("optforge.cli")

__all__ = ["PipelineConfig", "main"]


@dataclass
class PipelineConfig:
    """Everything the pipeline needs, JSON round-trippable."""

    n_unconstrained: int = 80
    n_constrained: int = 20
    d_min: int = 2
    d_max: int = 50
    k_min: int = 1
    k_max: int = 5
    fe_budget: int = 40000
    runs: int = 5
    config_cap: int = 64
    pool: list = field(default_factory=lambda: list(DEFAULT_POOL))
    styles: list = field(default_factory=lambda: [s.value for s in WritingStyle])
    test_fraction: float = 0.1
    on_degenerate: str = "skip"
    seed: int = 0

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            raw = json.load(fh)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(
                f"{path}: unknown config field(s) {sorted(unknown)}"
            )
        return cls(**raw)

    def to_dict(self):
        return dataclasses.asdict(self)


def _load_config(args):
    cfg = (PipelineConfig.from_json(args.config) if args.config
           else PipelineConfig())
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    return cfg


def _outputs_exist(args, paths):
    """Resumability: skip work when every output is already on disk."""
    paths = [p for p in paths if p]
    if not paths or args.force:
        return False
    if all(os.path.exists(p) for p in paths):
        print("outputs exist, nothing to do (use --force to rebuild): "
              + ", ".join(paths))
        return True
    return False


# ---------------------------------------------------------------------------
# subcommands

def cmd_synth(args):
    cfg = _load_config(args)
    if _outputs_exist(args, [args.out]):
        return 0
    instances = synthesize_set(
        cfg.n_unconstrained, cfg.n_constrained,
        d_range=(cfg.d_min, cfg.d_max), k_range=(cfg.k_min, cfg.k_max),
        master_seed=cfg.seed, fe_budget=cfg.fe_budget,
    )
    save_instances(instances, args.out)
    print(f"wrote {len(instances)} instances to {args.out}")
    return 0


def cmd_bench(args):
    cfg = _load_config(args)
    if _outputs_exist(args, [args.out, args.records]):
        return 0
    instances = load_instances(args.instances)
    entries, records, failures = benchmark_set(
        instances, pool=tuple(cfg.pool), cap=cfg.config_cap, runs=cfg.runs,
        master_seed=cfg.seed, parallelism=args.jobs,
        keep_records=args.records is not None,
    )
    save_knowledge(entries, args.out)
    if args.records is not None:
        save_records(records, args.records)
    histogram = {}
    for e in entries:
        histogram[e.best_optimizer] = histogram.get(e.best_optimizer, 0) + 1
    print(f"wrote {len(entries)} knowledge entries to {args.out}")
    for name in sorted(histogram):
        print(f"  winner {name:<20} {histogram[name]}")
    n_deg = sum(1 for e in entries if e.degenerate)
    if n_deg:
        print(f"  degenerate entries: {n_deg}")
    if failures:
        print(f"  failed instances: {len(failures)}", file=sys.stderr)
    return 0


def cmd_build(args):
    cfg = _load_config(args)
    if _outputs_exist(args, [args.out]):
        return 0
    policy = cfg.on_degenerate
    if args.strict:
        policy = "error"
    elif args.fallback:
        policy = "fallback"
    instances = load_instances(args.instances)
    knowledge = load_knowledge(args.knowledge)
    pairs, skipped = build_instruction_set(
        instances, knowledge, styles=cfg.styles, on_degenerate=policy,
    )
    save_pairs(pairs, args.out)
    print(f"wrote {len(pairs)} instruction pairs to {args.out}")
    if skipped:
        print(f"  skipped degenerate instances: {len(skipped)} "
              f"({', '.join(skipped)})")
    return 0


def cmd_split(args):
    cfg = _load_config(args)
    if _outputs_exist(args, [args.train_out, args.test_out]):
        return 0
    pairs = load_pairs(args.pairs)
    train, test = split_pairs(pairs, test_fraction=cfg.test_fraction,
                              seed=cfg.seed)
    save_pairs(train, args.train_out)
    save_pairs(test, args.test_out)
    print(f"split {len(pairs)} pairs into {len(train)} train / "
          f"{len(test)} test (instance-level)")
    return 0


def cmd_plan(args):
    _load_config(args)
    if _outputs_exist(args, [args.out]):
        return 0
    pairs = load_pairs(args.pairs)
    weights = sampling_weights(pairs)
    label_counts = {}
    for p in pairs:
        label_counts[p.label] = label_counts.get(p.label, 0) + 1
    n_labels = len(label_counts)
    plan = {
        "n_pairs": len(pairs),
        "n_labels": n_labels,
        "label_counts": dict(sorted(label_counts.items())),
        "rho_per_pair_by_label": {
            lab: 1.0 / (n_labels * n) for lab, n in sorted(label_counts.items())
        },
        "weights_sum": float(weights.sum()),
    }
    with open(args.out, "w") as fh:
        json.dump(plan, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote sampling plan for {len(pairs)} pairs to {args.out}")
    return 0


def _parse_eval_file(path):
    """Validate the metrics input schema with per-entry errors."""
    with open(path) as fh:
        raw = json.load(fh)
    systems = raw.get("systems")
    if not isinstance(systems, dict) or not systems:
        raise ValueError(f"{path}: expected a non-empty 'systems' mapping")
    parsed = {}
    for name, block in systems.items():
        where = f"{path}: system {name!r}"
        for key in ("outcomes", "answers", "n_problems", "n_runs"):
            if key not in block:
                raise ValueError(f"{where}: missing key {key!r}")
        outcomes = []
        for i, o in enumerate(block["outcomes"]):
            missing = {"problem_id", "run", "failed"} - set(o)
            if missing:
                raise ValueError(
                    f"{where}: outcome {i}: missing {sorted(missing)}"
                )
            outcomes.append(EvalOutcome(
                problem_id=o["problem_id"], run=o["run"],
                failed=o["failed"], f0=o.get("f0"),
                f_best=o.get("f_best"), f_star=o.get("f_star"),
            ))
        repairs = []
        for i, r in enumerate(block.get("repairs", [])):
            missing = {"problem_id", "original", "repaired"} - set(r)
            if missing:
                raise ValueError(
                    f"{where}: repair {i}: missing {sorted(missing)}"
                )
            repairs.append(RepairRecord(
                problem_id=r["problem_id"], original=r["original"],
                repaired=r["repaired"],
            ))
        parsed[name] = (outcomes, repairs, block["answers"],
                        block["n_problems"], block["n_runs"])
    return parsed


def cmd_metrics(args):
    _load_config(args)
    if _outputs_exist(args, [args.out]):
        return 0
    systems = _parse_eval_file(args.results)
    reports = {
        name: compute_report(*parts) for name, parts in systems.items()
    }
    print(format_table(reports))
    if args.out:
        with open(args.out, "w") as fh:
            json.dump({name: r.to_dict() for name, r in reports.items()},
                      fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote metrics report to {args.out}")
    return 0


def cmd_render(args):
    _load_config(args)
    instances = load_instances(args.instances)
    if args.id:
        matches = [i for i in instances if i.id == args.id]
        if not matches:
            raise SystemExit(f"no instance with id {args.id}")
        inst = matches[0]
    else:
        inst = instances[0]
    style = WritingStyle.parse(args.style)
    doc = render_prompt(inst, style, seed=prompt_seed(inst, style))
    out = doc.text
    if args.knowledge:
        knowledge = {e.instance_id: e for e in load_knowledge(args.knowledge)}
        entry = knowledge.get(inst.id)
        if entry is None:
            raise SystemExit(f"no knowledge entry for instance {inst.id}")
        answer = emit_answer(entry)
        out += ("\n" + "=" * 30 + f" answer ({answer.optimizer}) "
                + "=" * 30 + "\n\n" + answer.code_text)
    if args.out:
        if _outputs_exist(args, [args.out]):
            return 0
        with open(args.out, "w") as fh:
            fh.write(out)
        print(f"wrote rendering to {args.out}")
    else:
        print(out, end="")
    return 0


# ---------------------------------------------------------------------------

def _add_common(sub, out_required=True, out_help="output path"):
    sub.add_argument("--config", help="pipeline config JSON")
    sub.add_argument("--seed", type=int, default=None,
                     help="override the config seed")
    sub.add_argument("--force", action="store_true",
                     help="overwrite existing outputs")
    if out_required is not None:
        sub.add_argument("--out", required=out_required, help=out_help)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="optforge",
        description="Synthesize optimization problems, benchmark an "
                    "optimizer pool, and assemble instruction datasets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a problem corpus")
    _add_common(p, out_help="instances JSONL path")
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("bench", help="benchmark instances against the pool")
    _add_common(p, out_help="knowledge JSONL path")
    p.add_argument("--instances", required=True, help="instances JSONL")
    p.add_argument("--records", default=None,
                   help="optional per-config audit JSONL")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel worker processes")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("build", help="render instruction pairs")
    _add_common(p, out_help="pairs JSONL path")
    p.add_argument("--instances", required=True, help="instances JSONL")
    p.add_argument("--knowledge", required=True, help="knowledge JSONL")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--strict", action="store_true",
                   help="fail on degenerate benchmark entries")
    g.add_argument("--fallback", action="store_true",
                   help="emit random-search answers for degenerate entries")
    p.set_defaults(fn=cmd_build)

    p = sub.add_parser("split", help="instance-level train/test split")
    _add_common(p, out_required=None)
    p.add_argument("--pairs", required=True, help="pairs JSONL")
    p.add_argument("--train-out", required=True)
    p.add_argument("--test-out", required=True)
    p.set_defaults(fn=cmd_split)

    p = sub.add_parser("plan", help="summarize pair sampling weights")
    _add_common(p, out_help="plan JSON path")
    p.add_argument("--pairs", required=True, help="pairs JSONL")
    p.set_defaults(fn=cmd_plan)

    p = sub.add_parser("metrics", help="score evaluation results")
    _add_common(p, out_required=False, out_help="report JSON path")
    p.add_argument("--results", required=True,
                   help="evaluation results JSON (systems mapping)")
    p.set_defaults(fn=cmd_metrics)

    p = sub.add_parser("render", help="print one instance's prompt")
    _add_common(p, out_required=False, out_help="write instead of printing")
    p.add_argument("--instances", required=True, help="instances JSONL")
    p.add_argument("--id", default=None, help="instance id (default: first)")
    p.add_argument("--style", default="py_vector",
                   help="writing style (default: py_vector)")
    p.add_argument("--knowledge", default=None,
                   help="knowledge JSONL; also print the paired answer")
    p.set_defaults(fn=cmd_render)

    return parser


def main(argv=None):
    logging.basicConfig(
        level=os.environ.get("OPT_FORGE_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
