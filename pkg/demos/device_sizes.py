"""Sizes of reachable-set representations as inputs grow, via the experiment harness.

Run: python demos/device_sizes.py
"""
import tempfile

from chainbench.harness import build_config, experiment_aprime

with tempfile.TemporaryDirectory() as out:
    cfg = build_config({"experiment": "aprime-minrep", "machines": "fixture:m_first0,fixture:m_sweep",
                        "n_min": "1", "n_max": "3", "out": out, "verify": "true"})
    report = experiment_aprime(cfg)

print("machine            n  reachable  exact  with cycles")
for g in report["growth"]:
    print(f"{g['machine']:<18} {g['n']}  {g['max_reachable']:>9}  {g['max_exact_terms']!s:>5}  "
          f"{g['max_augmented_terms']!s:>11}")
print("verification failures:", report["aggregate"]["verify_failures"])
