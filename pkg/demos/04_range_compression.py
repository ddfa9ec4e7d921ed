#!/usr/bin/env python3
"""Why bounded scalar elicitation beats pure ranking for distributions.

Pairwise ranking aggregation only sees relative order, so its recovered
scores drift toward a narrow band around the middle; scalar elicitation
keeps the distances to the scale's ends. We run both on a skewed ground
truth and print five-bin histograms of the final scores.
"""

import numpy as np

from easl import (
    AnnotatorModel,
    Method,
    ModelConfig,
    bin_histogram,
    make_oracle,
    run_campaign,
    total_variation,
)

oracle = make_oracle("skewed", 150, rng_seed=11)
annot = AnnotatorModel(noise_scale=0.15, rng_seed=12)

oracle_hist = bin_histogram(list(oracle.latent.values()), 5)
results = {"oracle": (oracle_hist, list(oracle.latent.values()))}

for method in ("ra-beta", "easl"):
    report = run_campaign(
        oracle, annot, ModelConfig(method=Method(method)),
        iterations=10, hits_per_iteration=20, rng_seed=13,
    )
    scores = [row["score"] for row in report.final_scores]
    results[method] = (report.histogram, scores)

BAR = 40
print("five-bin histograms of final scores (left bin = [0, 0.2) ... right = [0.8, 1])\n")
for name, (hist, scores) in results.items():
    print(f"{name}:")
    for b, count in enumerate(hist):
        bar = "#" * int(BAR * count / max(sum(hist), 1) * 2)
        print(f"  [{b/5:.1f}-{(b+1)/5:.1f}) {count:>4} {bar}")
    lo, hi = np.percentile(scores, [10, 90])
    print(f"  interdecile range: {hi - lo:.3f}\n")

tv_ra = total_variation(results["ra-beta"][0], oracle_hist)
tv_easl = total_variation(results["easl"][0], oracle_hist)
print(f"distance to the oracle histogram (total variation):")
print(f"  ra-beta  {tv_ra:.3f}")
print(f"  easl     {tv_easl:.3f}")
print("\nThe ranking-only model squeezes everything toward the middle;")
print("the scalar hybrid tracks the skewed shape of the truth.")
