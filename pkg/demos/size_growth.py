"""How large do matrices get during elimination as instances grow?

Builds a seeded corpus, records the peak literal count of every run and
fits log(peak) against log(instance size).

Run: python demos/size_growth.py
"""
import numpy as np

from chainbench.elim import CorpusItem, condition_b_report
from chainbench.harness import instance_seeds
from chainbench.qbf import random_qbf

corpus = []
for n in (4, 6, 8, 10, 12):
    for i, seed in enumerate(instance_seeds(1000 + n, 15)):
        corpus.append(CorpusItem(f"n{n}-{i}", random_qbf(n, 2 * n, 3, "strict", seed), seed))

for level in ("L0", "L1"):
    report = condition_b_report(corpus, level)
    peaks = np.array([r["max_size"] for r in report["instances"]])
    sizes = np.array([r["n"] for r in report["instances"]])
    agg = report["aggregate"]
    print(f"{level}: median peak {np.median(peaks):.0f}, largest {peaks.max()} "
          f"(instance sizes {sizes.min()}..{sizes.max()})")
    print(f"    log-log slope {agg['slope']:.3f}, residual {agg['residual']:.3f}, "
          f"{agg['monotone_after_peak_count']}/{agg['instances']} shrink steadily after their peak")
