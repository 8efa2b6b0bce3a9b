"""Instruction-pair dataset: assembly, splitting, sampling and the
contrastive objective.

A labelled instance times a writing style gives one (prompt, answer)
pair.  Pair sampling weights equalize label mass first and pairs within
a label second:

    rho(q, a) = 1 / (N_a * N_{q,a})

with ``N_a`` the number of distinct labels present and ``N_{q,a}`` the
number of pairs carrying this pair's label, so the weights sum to one
and rare-winner optimizers are not drowned out.  Batches are either
drawn iid from rho, or homogeneous: all pairs share one instance (same
underlying problem, different writing styles), the regime the
contrastive objective is meant for.

The contrastive pieces use cosine distance ``G = (1 - cos)/2`` in
[0, 1]: same-label pairs are pulled together (loss G), different-label
pairs pushed apart up to a margin (loss ``max(0, margin - G)``), and a
batch scores the mean over all unordered pairs.
"""

import json
import logging
from dataclasses import dataclass

import numpy as np

from .render.answers import DegenerateEntryError, emit_answer
from .render.prompts import render_prompt
from .render.styles import WritingStyle
from .seeding import derive_seed

__all__ = [
    "InstructionPair",
    "build_instruction_set",
    "split_pairs",
    "save_pairs",
    "load_pairs",
    "sampling_weights",
    "SamplingPlan",
    "cosine_distance",
    "contrastive_loss",
    "batch_contrastive_loss",
    "DEFAULT_MARGIN",
]

log = logging.getLogger("optforge.dataset")

DEFAULT_MARGIN = 0.3


@dataclass(frozen=True)
class InstructionPair:
    """One training example: prompt text, answer program, provenance."""

    q: str
    a: str
    instance_id: str
    style: str
    label: str


def prompt_seed(instance, style):
    """Seed for style-dependent prompt randomness (term commutation)."""
    return derive_seed("prompt", instance.seed, WritingStyle.parse(style).value)


def build_instruction_set(instances, knowledge, styles=None,
                          on_degenerate="skip"):
    """Cross every instance with every style against its benchmark label.

    Parameters
    ----------
    instances : sequence of ProblemInstance
    knowledge : mapping instance_id -> KnowledgeEntry, or a sequence of
        entries
    styles : styles to render (default: all six)
    on_degenerate : "skip" (drop with a warning), "error" (raise listing
        offenders), or "fallback" (label degenerate instances
        random_search and emit its answer anyway)

    Returns
    -------
    (pairs, skipped) : list of InstructionPair, list of skipped
        instance ids
    """
    if on_degenerate not in ("skip", "error", "fallback"):
        raise ValueError(f"unknown degenerate policy {on_degenerate!r}")
    if not isinstance(knowledge, dict):
        knowledge = {e.instance_id: e for e in knowledge}
    styles = [WritingStyle.parse(s) for s in (styles or list(WritingStyle))]

    missing = [inst.id for inst in instances if inst.id not in knowledge]
    if missing:
        raise ValueError(
            "no benchmark entry for instance(s): " + ", ".join(sorted(missing))
        )
    degenerates = [inst.id for inst in instances
                   if knowledge[inst.id].degenerate]
    if degenerates and on_degenerate == "error":
        raise DegenerateEntryError(
            "degenerate benchmark entries for instance(s): "
            + ", ".join(sorted(degenerates))
        )

    pairs = []
    skipped = []
    for inst in instances:
        entry = knowledge[inst.id]
        if entry.degenerate:
            if on_degenerate == "skip":
                skipped.append(inst.id)
                log.warning("skipping degenerate instance %s", inst.id)
                continue
            # fallback: the degenerate entry already names random_search
            answer = emit_answer(
                type(entry)(instance_id=entry.instance_id,
                            best_optimizer=entry.best_optimizer,
                            best_config=entry.best_config,
                            best_config_index=entry.best_config_index,
                            f_star=entry.f_star, mean_eval=entry.mean_eval,
                            degenerate=False)
            )
        else:
            answer = emit_answer(entry)
        for style in styles:
            doc = render_prompt(inst, style, seed=prompt_seed(inst, style))
            pairs.append(InstructionPair(
                q=doc.text, a=answer.code_text, instance_id=inst.id,
                style=style.value, label=answer.optimizer,
            ))
    return pairs, skipped


def split_pairs(pairs, test_fraction=0.1, seed=0):
    """Instance-level train/test split.

    All pairs of one instance land in the same side, so no test problem
    ever appears in training under a different writing style.
    """
    if not 0.0 <= test_fraction <= 1.0:
        raise ValueError("test_fraction must be in [0, 1]")
    ids = sorted({p.instance_id for p in pairs})
    rng = np.random.Generator(np.random.PCG64(derive_seed(seed, "split")))
    rng.shuffle(ids)
    n_test = int(round(test_fraction * len(ids)))
    test_ids = set(ids[:n_test])
    train = [p for p in pairs if p.instance_id not in test_ids]
    test = [p for p in pairs if p.instance_id in test_ids]
    return train, test


def save_pairs(pairs, path):
    """JSON lines, sorted keys -- byte-stable for identical inputs."""
    with open(path, "w") as fh:
        for p in pairs:
            fh.write(json.dumps(
                {"q": p.q, "a": p.a, "instance_id": p.instance_id,
                 "style": p.style, "label": p.label},
                sort_keys=True,
            ))
            fh.write("\n")


def load_pairs(path):
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            d = json.loads(line)
            missing = {"q", "a", "instance_id", "style", "label"} - set(d)
            if missing:
                raise ValueError(
                    f"{path}:{lineno}: missing field(s) {sorted(missing)}"
                )
            out.append(InstructionPair(
                q=d["q"], a=d["a"], instance_id=d["instance_id"],
                style=d["style"], label=d["label"],
            ))
    return out


# ---------------------------------------------------------------------------
# sampling

def sampling_weights(pairs):
    """Per-pair probabilities rho = 1 / (N_a * N_{q,a}); sums to 1."""
    if not pairs:
        raise ValueError("cannot weight an empty pair list")
    counts = {}
    for p in pairs:
        counts[p.label] = counts.get(p.label, 0) + 1
    n_labels = len(counts)
    return np.array([1.0 / (n_labels * counts[p.label]) for p in pairs])


@dataclass
class SamplingPlan:
    """Frozen sampling state for one pair list."""

    pairs: list
    weights: np.ndarray

    @classmethod
    def build(cls, pairs):
        return cls(pairs=list(pairs), weights=sampling_weights(pairs))

    def draw_batch(self, batch_size, rng, homogeneous=False):
        """Draw ``batch_size`` pairs.

        iid mode samples independently from rho.  Homogeneous mode
        first picks one instance (probability = its total rho mass),
        then fills the batch from that instance's pairs, with
        replacement once the styles run out.
        """
        if batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if not homogeneous:
            idx = rng.choice(len(self.pairs), size=batch_size, replace=True,
                             p=self.weights)
            return [self.pairs[i] for i in idx]
        by_instance = {}
        for i, p in enumerate(self.pairs):
            by_instance.setdefault(p.instance_id, []).append(i)
        ids = sorted(by_instance)
        mass = np.array([self.weights[by_instance[k]].sum() for k in ids])
        chosen = ids[int(rng.choice(len(ids), p=mass / mass.sum()))]
        members = by_instance[chosen]
        w = self.weights[members]
        idx = rng.choice(members, size=batch_size,
                         replace=batch_size > len(members), p=w / w.sum())
        return [self.pairs[i] for i in idx]


# ---------------------------------------------------------------------------
# contrastive objective

def cosine_distance(u, v):
    """G = (1 - cos(u, v)) / 2, in [0, 1]."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine distance undefined for zero vectors")
    cos = float(np.dot(u, v) / (nu * nv))
    return (1.0 - min(1.0, max(-1.0, cos))) / 2.0


def contrastive_loss(z_i, z_j, same_label, margin=DEFAULT_MARGIN):
    """Pull same-label embeddings together, push others past a margin."""
    g = cosine_distance(z_i, z_j)
    if same_label:
        return g
    return max(0.0, margin - g)


def batch_contrastive_loss(z, labels, margin=DEFAULT_MARGIN):
    """Mean pairwise loss over all unordered pairs in a batch."""
    z = np.asarray(z, dtype=float)
    if z.ndim != 2 or z.shape[0] != len(labels):
        raise ValueError("need one embedding row per label")
    n = z.shape[0]
    if n < 2:
        return 0.0
    total = 0.0
    count = 0
    for i in range(n):
        for j in range(i + 1, n):
            total += contrastive_loss(z[i], z[j], labels[i] == labels[j],
                                      margin)
            count += 1
    return total / count
