#!/usr/bin/env python3
"""Reproduce the annotation-efficiency comparison at desk scale.

150 items with frequency-like ground truth, 20 five-item HITs per
iteration, simulated noisy annotators. Direct assessment gets the same
number of judgments via whole-collection passes. Prints the Spearman
correlation trajectory per method and writes the plot-ready CSV.
"""

import csv
import sys

from easl import AnnotatorModel, Method, ModelConfig, make_oracle, run_campaign

SEED = int(sys.argv[1]) if len(sys.argv) > 1 else 0

oracle = make_oracle("log_frequency_like", 150, rng_seed=SEED)
annot = AnnotatorModel(noise_scale=0.15, rng_seed=SEED + 1)

reports = {}
for method in ("da", "ra-gaussian", "ra-beta", "easl"):
    cfg = ModelConfig(method=Method(method))
    reports[method] = run_campaign(
        oracle, annot, cfg,
        iterations=10,
        hits_per_iteration=None if method == "da" else 20,
        rng_seed=SEED,
    )

print("spearman correlation with the oracle, by judgments spent")
print(f"{'judgments':>10} | " + " | ".join(f"{m:>12}" for m in reports))
rows = []
for k in range(10):
    cells = []
    for method, report in reports.items():
        stats = report.iterations[k]
        point = stats.spearman.point if stats.spearman else float("nan")
        cells.append(f"{point:>12.3f}")
        rows.append([method, k, stats.judgments_total, point])
    judgments = reports["easl"].iterations[k].judgments_total
    da_judgments = reports["da"].iterations[k].judgments_total
    print(f"{judgments:>5}/{da_judgments:<5} | " + " | ".join(cells))

with open("method_comparison.csv", "w", newline="") as fh:
    writer = csv.writer(fh)
    writer.writerow(["method", "iteration", "judgments", "spearman"])
    writer.writerows(rows)

print("\nwrote method_comparison.csv")
print("\nReading the table: the batched methods reach a given correlation")
print("with far fewer judgments than direct assessment; two adaptive")
print("iterations (200 judgments) roughly match three whole-collection")
print("assessment passes (450 judgments).")
