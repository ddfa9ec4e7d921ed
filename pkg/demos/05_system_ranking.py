#!/usr/bin/env python3
"""Rank 10 competing systems from per-output quality judgments.

Every observation scores one system's output on one segment. The adaptive
method batches five outputs of the same segment per HIT; the baseline
scores outputs one at a time. We race them to a Spearman of 0.9 against
the latent system ranking.
"""

import numpy as np

from easl import (
    AnnotatorModel,
    Method,
    ModelConfig,
    make_system_latents,
    run_system_ranking,
)

systems, segments, latents = make_system_latents(10, 200, rng_seed=21)
truth = {s: float(np.mean(list(latents[s].values()))) for s in systems}
print("latent system quality:")
for s in sorted(systems, key=lambda s: -truth[s]):
    print(f"  {s}: {truth[s]:.3f}")

budgets = {}
for method in ("easl", "da"):
    annot = AnnotatorModel(noise_scale=0.2, rng_seed=22)
    report = run_system_ranking(
        systems, segments, latents, annot,
        ModelConfig(method=Method(method)),
        budget=6000, rng_seed=23, checkpoint_every=50,
    )
    crossing = next(
        (s.judgments_total for s in report.iterations
         if s.spearman and s.spearman.point >= 0.9),
        None,
    )
    budgets[method] = crossing
    curve = [(s.judgments_total, round(s.spearman.point, 3))
             for s in report.iterations[:12] if s.spearman]
    print(f"\n{method}: early correlation curve {curve}")

print("\njudgments needed to reach spearman >= 0.9 over the system ranking:")
for method, budget in budgets.items():
    print(f"  {method:<5} {budget}")
if budgets["easl"] and budgets["da"]:
    print(f"\nadaptive batching needs {budgets['easl'] / budgets['da']:.0%} "
          "of the baseline's annotation budget here.")
