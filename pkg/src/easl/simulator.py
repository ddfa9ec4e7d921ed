"""Synthetic oracles, simulated annotators, and full campaign runs.

The harness replaces crowdworkers with noise models so the relative
efficiency of the elicitation methods can be measured against a known
ground truth at desk scale. Two effects drive the comparisons:

* Judging an item in isolation is harder than judging it alongside
  others: an annotator has to re-anchor their personal scale on every
  isolated judgment. ``AnnotatorModel.isolation_noise_factor`` multiplies
  the noise scale for single-item elicitation; batched (partial-ranking)
  elicitation uses the plain scale. At the default 0.15 noise scale the
  factor is calibrated so a 10-annotator direct-assessment pool shows rank
  agreement of roughly 0.3 pairwise / 0.48 annotator-vs-rest on the
  frequency-like oracle and 0.58 / 0.69 on the bimodal one.
* Batches are chosen adaptively (by uncertainty and match quality), so
  annotation effort concentrates where it is still informative.

Campaigns are deterministic given their seeds: identical seeds reproduce
byte-identical reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .metrics import CorrelationResult, bin_histogram, bootstrap_ci, pearson, spearman
from .models import (
    Method,
    ModelConfig,
    ModelState,
    PairwiseOutcome,
    ScalarJudgment,
    scores_to_outcomes,
)
from .persistence import ItemRecord, ObservationRecord, apply_record_to_model, load_items
from .scheduler import Hit, sample_hits

ORACLE_KINDS = ("log_frequency_like", "uniform", "skewed", "bimodal", "custom_file")
NOISE_KINDS = ("gaussian_clamped", "beta_concentration")


@dataclass(frozen=True)
class Oracle:
    """Ground-truth latent scalar per item, all values in [0, 1]."""

    latent: dict[str, float]
    kind: str

    def __post_init__(self) -> None:
        for item_id, value in self.latent.items():
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise ValueError(f"latent for {item_id!r} out of [0, 1]: {value}")

    @property
    def item_ids(self) -> list[str]:
        return list(self.latent)

    def values_for(self, item_ids: Sequence[str]) -> list[float]:
        return [self.latent[i] for i in item_ids]


def make_oracle(
    kind: str,
    n_items: int | None = None,
    rng_seed: int = 0,
    path: str | None = None,
) -> Oracle:
    """Construct a ground-truth latent assignment.

    * ``log_frequency_like``: heavy-tailed positive counts, log10-ed and
      divided by the maximum, so the top item sits exactly at 1.0.
    * ``uniform``: independent U[0, 1] draws.
    * ``skewed``: Beta(5, 2) draws; most of the mass above 0.5.
    * ``bimodal``: an even mixture of Beta(1.5, 10) and Beta(10, 1.5).
    * ``custom_file``: oracle values read from an items file (``path``).
    """
    if kind not in ORACLE_KINDS:
        raise ValueError(f"unknown oracle kind {kind!r}")
    if kind == "custom_file":
        if path is None:
            raise ValueError("custom_file oracle requires a path")
        items = load_items(path)
        missing = [i.item_id for i in items if i.oracle_value is None]
        if missing:
            raise ValueError(f"items without oracle_value: {missing[:5]}")
        if len(items) < 2:
            raise ValueError("need at least 2 items")
        return Oracle({i.item_id: float(i.oracle_value) for i in items}, kind)

    if n_items is None or n_items < 2:
        raise ValueError(f"need at least 2 items, got {n_items}")
    rng = np.random.default_rng(rng_seed)
    if kind == "uniform":
        values = rng.uniform(0.0, 1.0, n_items)
    elif kind == "skewed":
        values = rng.beta(5.0, 2.0, n_items)
    elif kind == "bimodal":
        low = rng.beta(1.5, 10.0, n_items)
        high = rng.beta(10.0, 1.5, n_items)
        values = np.where(rng.integers(0, 2, n_items) == 0, low, high)
    else:  # log_frequency_like
        log_counts = np.clip(rng.normal(2.8, 1.6, n_items), 0.0, None)
        values = log_counts / log_counts.max()
    values = np.clip(values, 0.0, 1.0)
    width = len(str(n_items - 1))
    return Oracle(
        {f"item-{i:0{width}d}": float(v) for i, v in enumerate(values)}, kind
    )


def oracle_items(oracle: Oracle) -> list[ItemRecord]:
    """Item records (payload = id) carrying the oracle values."""
    return [
        ItemRecord(item_id, item_id, value) for item_id, value in oracle.latent.items()
    ]


class AnnotatorModel:
    """A simulated annotator: a noise model over the true latents.

    ``noise_scale`` is the per-judgment noise when items are scored in the
    context of a batch; isolated single-item judgments are noisier by
    ``isolation_noise_factor``. Scores always land in [0, 1]; zero noise
    reproduces the latents exactly. ``tie_threshold`` is the score gap at
    or under which a derived pairwise comparison reads as a tie; it
    defaults to 0.1, mirroring the model's default tie-rate window.
    """

    def __init__(
        self,
        noise_kind: str = "gaussian_clamped",
        noise_scale: float = 0.15,
        tie_threshold: float = 0.1,
        rng_seed: int = 0,
        isolation_noise_factor: float = 2.3,
    ):
        if noise_kind not in NOISE_KINDS:
            raise ValueError(f"unknown noise kind {noise_kind!r}")
        if noise_scale < 0.0 or tie_threshold < 0.0 or isolation_noise_factor < 0.0:
            raise ValueError("noise_scale, tie_threshold and factor must be >= 0")
        self.noise_kind = noise_kind
        self.noise_scale = noise_scale
        self.tie_threshold = tie_threshold
        self.rng_seed = rng_seed
        self.isolation_noise_factor = isolation_noise_factor
        self._rng = np.random.default_rng(rng_seed)

    def fresh(self) -> "AnnotatorModel":
        """A copy with a rewound noise stream (same seed)."""
        return AnnotatorModel(
            self.noise_kind,
            self.noise_scale,
            self.tie_threshold,
            self.rng_seed,
            self.isolation_noise_factor,
        )

    def config_dict(self) -> dict:
        return {
            "noise_kind": self.noise_kind,
            "noise_scale": self.noise_scale,
            "tie_threshold": self.tie_threshold,
            "rng_seed": self.rng_seed,
            "isolation_noise_factor": self.isolation_noise_factor,
        }

    def perceive(self, latent: float, isolated: bool) -> float:
        """One noisy reading of a latent value, in [0, 1]."""
        scale = self.noise_scale * (self.isolation_noise_factor if isolated else 1.0)
        if scale == 0.0:
            return float(latent)
        if self.noise_kind == "gaussian_clamped":
            return float(np.clip(latent + scale * self._rng.standard_normal(), 0.0, 1.0))
        # beta_concentration: a draw around the latent with roughly the
        # requested standard deviation, naturally bounded.
        m = min(max(float(latent), 1e-6), 1.0 - 1e-6)
        kappa = max(m * (1.0 - m) / (scale * scale) - 1.0, 0.5)
        return float(self._rng.beta(m * kappa, (1.0 - m) * kappa))


def elicit_scalar(oracle: Oracle, annot: AnnotatorModel, item_id: str) -> ScalarJudgment:
    """One direct-assessment judgment: the item scored in isolation."""
    if item_id not in oracle.latent:
        raise KeyError(f"unknown item {item_id!r}")
    return ScalarJudgment(item_id, annot.perceive(oracle.latent[item_id], isolated=True))


def elicit_partial_ranking(
    oracle: Oracle, annot: AnnotatorModel, item_ids: Sequence[str]
) -> tuple[list[ScalarJudgment], list[PairwiseOutcome]]:
    """Score a batch of n distinct items together.

    Returns the n scalar judgments plus the C(n, 2) pairwise outcomes they
    imply (score gaps at or under the annotator's tie threshold read as
    ties).
    """
    if len(set(item_ids)) != len(item_ids):
        raise ValueError("duplicate items in batch")
    for item_id in item_ids:
        if item_id not in oracle.latent:
            raise KeyError(f"unknown item {item_id!r}")
    judgments = [
        ScalarJudgment(i, annot.perceive(oracle.latent[i], isolated=False))
        for i in item_ids
    ]
    outcomes = scores_to_outcomes(
        list(item_ids), [j.score for j in judgments], annot.tie_threshold
    )
    return judgments, outcomes


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


@dataclass
class IterationStats:
    iteration: int
    judgments_total: int
    spearman: CorrelationResult | None
    pearson: CorrelationResult | None

    def to_dict(self) -> dict:
        return {
            "iteration": self.iteration,
            "judgments_total": self.judgments_total,
            "spearman": None if self.spearman is None else self.spearman.to_dict(),
            "pearson": None if self.pearson is None else self.pearson.to_dict(),
        }


@dataclass
class ExperimentReport:
    method: str
    config: dict
    annotator: dict
    oracle_kind: str
    seed: int
    iterations: list[IterationStats] = field(default_factory=list)
    final_scores: list[dict] = field(default_factory=list)
    histogram: list[int] = field(default_factory=list)
    judgment_count: int = 0
    degenerate: bool = False

    def final_spearman(self) -> float | None:
        for stats in reversed(self.iterations):
            if stats.spearman is not None:
                return stats.spearman.point
        return None

    def scores_by_item(self) -> dict[str, float]:
        return {row["item_id"]: row["score"] for row in self.final_scores}

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "config": self.config,
            "annotator": self.annotator,
            "oracle_kind": self.oracle_kind,
            "seed": self.seed,
            "judgment_count": self.judgment_count,
            "degenerate": self.degenerate,
            "histogram": self.histogram,
            "iterations": [s.to_dict() for s in self.iterations],
            "final_scores": self.final_scores,
        }


def _correlations(
    oracle_values: Sequence[float],
    scores: Sequence[float],
    resamples: int,
    rng_seed: int,
) -> tuple[CorrelationResult | None, CorrelationResult | None]:
    pairs = list(zip(oracle_values, scores))
    try:
        sp = bootstrap_ci(pairs, spearman, resamples=resamples, rng_seed=rng_seed)
    except ValueError:
        sp = None
    try:
        pe = bootstrap_ci(pairs, pearson, resamples=resamples, rng_seed=rng_seed)
    except ValueError:
        pe = None
    return sp, pe


def _final_artifacts(model: ModelState, report: ExperimentReport) -> None:
    rows = model.scores_table()
    report.final_scores = [
        {"item_id": r.item_id, "score": r.score, "variance": r.variance, "count": r.count}
        for r in rows
    ]
    # Gaussian read-outs are unbounded; clip only for the histogram view.
    report.histogram = bin_histogram(
        [min(max(r.score, 0.0), 1.0) for r in rows], bins=5
    )


# ---------------------------------------------------------------------------
# Campaigns
# ---------------------------------------------------------------------------


def run_campaign(
    oracle: Oracle,
    annot: AnnotatorModel,
    cfg: ModelConfig,
    iterations: int,
    hits_per_iteration: int | None = None,
    rng_seed: int = 0,
    bootstrap_resamples: int = 100,
    allow_anchor_comparators: bool = False,
    on_hits_sampled: Callable[[int, list[Hit], ModelState], None] | None = None,
    on_iteration_end: Callable[[int, ModelState], None] | None = None,
) -> ExperimentReport:
    """Run one full elicitation campaign against a synthetic oracle.

    For the batched methods each iteration samples HITs from the current
    state (anchored by uncertainty, filled by match quality), elicits a
    partial ranking per HIT, and applies the updates the method consumes.
    DA instead gives every item one more isolated annotation per
    iteration. Correlations against the oracle are recorded after every
    iteration. Deterministic given (rng_seed, annotator seed).
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    annot = annot.fresh()
    item_ids = oracle.item_ids
    oracle_values = oracle.values_for(item_ids)
    model = ModelState(cfg, item_ids)
    report = ExperimentReport(
        method=cfg.method.value,
        config={
            **cfg.to_dict(),
            "iterations": iterations,
            "hits_per_iteration": hits_per_iteration,
        },
        annotator=annot.config_dict(),
        oracle_kind=oracle.kind,
        seed=rng_seed,
    )
    scheduler_seeds = np.random.SeedSequence(rng_seed).generate_state(
        max(iterations, 1), dtype=np.uint32
    )

    judgments_total = 0
    for iteration in range(iterations):
        if cfg.method == Method.DA:
            for item_id in item_ids:
                judgment = elicit_scalar(oracle, annot, item_id)
                record = ObservationRecord(
                    kind="scalar",
                    hit_id=f"pass-{iteration:04d}",
                    annotator_id="sim",
                    item_id=item_id,
                    score=judgment.score * 100.0,
                )
                apply_record_to_model(model, record)
                judgments_total += 1
        else:
            hits = sample_hits(
                model.states(),
                cfg,
                rng_seed=int(scheduler_seeds[iteration]),
                iteration=iteration,
                num_hits=hits_per_iteration,
                allow_anchor_comparators=allow_anchor_comparators,
            )
            if on_hits_sampled is not None:
                on_hits_sampled(iteration, hits, model)
            for hit in hits:
                judgments, outcomes = elicit_partial_ranking(
                    oracle, annot, hit.item_ids
                )
                judgments_total += len(judgments)
                if cfg.method == Method.EASL:
                    for judgment in judgments:
                        record = ObservationRecord(
                            kind="scalar",
                            hit_id=hit.hit_id,
                            annotator_id="sim",
                            item_id=judgment.item_id,
                            score=judgment.score * 100.0,
                        )
                        apply_record_to_model(model, record)
                else:
                    for outcome in outcomes:
                        record = ObservationRecord(
                            kind="pairwise",
                            hit_id=hit.hit_id,
                            annotator_id="sim",
                            winner=outcome.winner_id,
                            loser=outcome.loser_id,
                            tie=outcome.kind == "tie",
                        )
                        apply_record_to_model(model, record)
                hit.status = "completed"

        scores = [model.score(i) for i in item_ids]
        sp, pe = _correlations(
            oracle_values, scores, bootstrap_resamples, rng_seed + iteration
        )
        report.iterations.append(IterationStats(iteration, judgments_total, sp, pe))
        if on_iteration_end is not None:
            on_iteration_end(iteration, model)

    report.judgment_count = judgments_total
    _final_artifacts(model, report)
    return report


def make_system_latents(
    n_systems: int,
    n_segments: int,
    rng_seed: int = 0,
    quality_range: tuple[float, float] = (0.2, 0.9),
    concentration: float = 20.0,
) -> tuple[list[str], list[str], dict[str, dict[str, float]]]:
    """Synthetic system-evaluation ground truth.

    System qualities are evenly spaced over ``quality_range`` (assignment
    shuffled by seed); each system's per-segment latent is a Beta draw
    around its quality, so segments vary realistically around the system
    mean.
    """
    if n_systems < 2 or n_segments < 1:
        raise ValueError("need at least 2 systems and 1 segment")
    rng = np.random.default_rng(rng_seed)
    system_ids = [f"sys-{i:02d}" for i in range(n_systems)]
    segment_ids = [f"seg-{i:04d}" for i in range(n_segments)]
    qualities = np.linspace(quality_range[0], quality_range[1], n_systems)
    rng.shuffle(qualities)
    latents: dict[str, dict[str, float]] = {}
    for sys_id, q in zip(system_ids, qualities):
        a, b = concentration * q, concentration * (1.0 - q)
        latents[sys_id] = {
            seg: float(np.clip(rng.beta(a, b), 0.0, 1.0)) for seg in segment_ids
        }
    return system_ids, segment_ids, latents


def run_system_ranking(
    system_ids: Sequence[str],
    segment_ids: Sequence[str],
    per_segment_latent: dict[str, dict[str, float]],
    annot: AnnotatorModel,
    cfg: ModelConfig,
    budget: int,
    rng_seed: int = 0,
    checkpoint_every: int | None = None,
    bootstrap_resamples: int = 0,
) -> ExperimentReport:
    """Rank systems from per-segment output judgments under a budget.

    Every observation scores one system's output on one segment; a
    system's state accumulates across segments. The batched methods show
    n systems' outputs for the same segment per HIT; DA scores one output
    at a time, sampling (system, segment) pairs without replacement.
    Correlation of the recovered ranking against the latent system ranking
    is recorded at every checkpoint. ``budget == 0`` returns a degenerate
    report (no information, no correlation).
    """
    system_ids = list(system_ids)
    segment_ids = list(segment_ids)
    m = len(system_ids)
    if m < 2:
        raise ValueError("need at least 2 systems")
    if budget < 0 or (0 < budget < m):
        raise ValueError(f"budget must be 0 or >= {m}, got {budget}")
    for sys_id in system_ids:
        if sys_id not in per_segment_latent:
            raise ValueError(f"missing latents for system {sys_id!r}")

    annot = annot.fresh()
    oracle_means = [
        float(np.mean([per_segment_latent[s][g] for g in segment_ids]))
        for s in system_ids
    ]
    model = ModelState(cfg, system_ids)
    report = ExperimentReport(
        method=cfg.method.value,
        config={**cfg.to_dict(), "budget": budget, "systems": m},
        annotator=annot.config_dict(),
        oracle_kind="system-latents",
        seed=rng_seed,
    )
    if budget == 0:
        report.degenerate = True
        _final_artifacts(model, report)
        return report

    checkpoint = checkpoint_every or m
    rng = np.random.default_rng(rng_seed)
    used = 0
    next_checkpoint = checkpoint

    def record_point() -> None:
        scores = [model.score(s) for s in system_ids]
        sp, pe = _correlations(oracle_means, scores, bootstrap_resamples, rng_seed + used)
        report.iterations.append(IterationStats(len(report.iterations), used, sp, pe))

    if cfg.method == Method.DA:
        pairs = [(s, g) for s in system_ids for g in segment_ids]
        order: list[tuple[str, str]] = []
        while len(order) < budget:  # reshuffle the pool if the budget exceeds it
            idx = rng.permutation(len(pairs))
            order.extend(pairs[i] for i in idx)
        for sys_id, seg_id in order[:budget]:
            score = annot.perceive(per_segment_latent[sys_id][seg_id], isolated=True)
            model.apply_scalar(sys_id, score)
            used += 1
            if used >= next_checkpoint or used == budget:
                record_point()
                next_checkpoint += checkpoint
    else:
        n = cfg.n
        if n > m:
            raise ValueError(f"HIT size {n} exceeds system count {m}")
        seeds = np.random.SeedSequence(rng_seed).generate_state(
            budget // n + 1, dtype=np.uint32
        )
        seg_cursor = 0
        iteration = 0
        while used + n <= budget:
            hits = sample_hits(
                model.states(),
                cfg,
                rng_seed=int(seeds[iteration % len(seeds)]),
                iteration=iteration,
                allow_anchor_comparators=(m < 2 * n),
            )
            iteration += 1
            for hit in hits:
                if used + n > budget:
                    break
                seg_id = segment_ids[seg_cursor % len(segment_ids)]
                seg_cursor += 1
                segment_oracle = Oracle(
                    {s: per_segment_latent[s][seg_id] for s in hit.item_ids},
                    kind="system-latents",
                )
                judgments, outcomes = elicit_partial_ranking(
                    segment_oracle, annot, hit.item_ids
                )
                if cfg.method == Method.EASL:
                    for judgment in judgments:
                        model.apply_scalar(judgment.item_id, judgment.score)
                else:
                    for outcome in outcomes:
                        model.apply_pairwise(outcome)
                used += n
                if used >= next_checkpoint or used + n > budget:
                    record_point()
                    next_checkpoint += checkpoint

    report.judgment_count = used
    _final_artifacts(model, report)
    return report
