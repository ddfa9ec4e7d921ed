"""Active batch construction: anchor the most uncertain items, fill each
HIT with comparators sampled by match quality."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .models import InstanceState, ModelConfig, match_quality, state_variance


@dataclass
class Hit:
    """An ordered batch of n distinct items presented together."""

    hit_id: str
    iteration: int
    anchor_id: str
    item_ids: list[str]
    status: str = "pending"  # "pending" | "completed"

    def __post_init__(self) -> None:
        if len(set(self.item_ids)) != len(self.item_ids):
            raise ValueError(f"duplicate items in HIT {self.hit_id}")
        if self.anchor_id not in self.item_ids:
            raise ValueError(f"anchor {self.anchor_id!r} not in HIT {self.hit_id}")


@dataclass(frozen=True)
class SchedulePlan:
    """Budget arithmetic for an iterated campaign."""

    n_items: int
    hit_size: int
    iterations: int
    hits_per_iteration: int
    judgments_per_iteration: int
    total_judgments: int
    coverage_per_iteration: float  # judgments per iteration / item count


def iteration_plan(
    n_items: int,
    hit_size: int,
    iterations: int,
    hits_per_iteration: int | None = None,
) -> SchedulePlan:
    """Summarize a campaign's budget so it can be matched against a
    per-item redundancy budget. Defaults to floor(N/n) HITs per iteration."""
    if n_items < 1 or hit_size < 1 or iterations < 1:
        raise ValueError("n_items, hit_size and iterations must be positive")
    k = n_items // hit_size if hits_per_iteration is None else hits_per_iteration
    if k < 1:
        raise ValueError("hits_per_iteration must be >= 1")
    per_iter = k * hit_size
    return SchedulePlan(
        n_items=n_items,
        hit_size=hit_size,
        iterations=iterations,
        hits_per_iteration=k,
        judgments_per_iteration=per_iter,
        total_judgments=per_iter * iterations,
        coverage_per_iteration=per_iter / n_items,
    )


def sample_hits(
    states: Sequence[InstanceState],
    cfg: ModelConfig,
    rng_seed: int,
    iteration: int = 0,
    num_hits: int | None = None,
    allow_anchor_comparators: bool = False,
) -> list[Hit]:
    """Build one iteration's batch of HITs from a state snapshot.

    The top-k items by variance (ties broken by item id) anchor the k HITs
    (k defaults to floor(N/n)); each anchor draws its n-1 comparators
    without replacement from the non-anchor pool, with probability
    proportional to match quality against the anchor. Bit-reproducible for
    a fixed seed.

    ``allow_anchor_comparators`` widens each anchor's pool to every other
    item (anchors included), for collections too small to exclude them.
    """
    states = list(states)
    if not states:
        raise ValueError("empty state set")
    n = cfg.n
    if n < 2:
        raise ValueError(f"HIT size must be >= 2 for pairwise batches, got {n}")
    if len(states) < n:
        raise ValueError(f"need at least n={n} items, got {len(states)}")
    k = len(states) // n if num_hits is None else num_hits
    if k < 1:
        raise ValueError("num_hits must be >= 1")
    if k > len(states):
        raise ValueError(f"cannot anchor {k} HITs with {len(states)} items")

    by_uncertainty = sorted(states, key=lambda s: (-state_variance(s), s.item_id))
    anchors = by_uncertainty[:k]
    anchor_ids = {s.item_id for s in anchors}

    rng = np.random.default_rng(rng_seed)
    hits: list[Hit] = []
    for idx, anchor in enumerate(anchors):
        if allow_anchor_comparators:
            pool = [s for s in states if s.item_id != anchor.item_id]
        else:
            pool = [s for s in states if s.item_id not in anchor_ids]
        if len(pool) < n - 1:
            raise ValueError(
                f"comparator pool has {len(pool)} items, need {n - 1}; "
                "use allow_anchor_comparators for small collections"
            )
        weights = np.array(
            [match_quality(anchor, s, cfg.gamma) for s in pool], dtype=float
        )
        p = weights / weights.sum()
        chosen = rng.choice(len(pool), size=n - 1, replace=False, p=p)
        item_ids = [anchor.item_id] + [pool[int(c)].item_id for c in chosen]
        hits.append(
            Hit(
                hit_id=f"hit-{iteration:04d}-{idx:03d}",
                iteration=iteration,
                anchor_id=anchor.item_id,
                item_ids=item_ids,
            )
        )
    return hits
