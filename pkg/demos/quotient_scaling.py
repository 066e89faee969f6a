"""
Improvement quotient against dimension
======================================

Samples random pairs for a few qubit counts and prints the summary
statistics of the quotients. The mean of the trace-norm quotient at
one qubit is dominated by rare near-degenerate draws; the median and
the Frobenius quotient show the growth with dimension more cleanly.
"""

import numpy as np

from biolmr.campaigns import ExperimentConfig, run_sweep_q

cfg = ExperimentConfig(q_range=[1, 2, 3, 4], samples=500, master_seed=7)
rows, summary = run_sweep_q(cfg)

print(f"{'q':>2} {'mean Q1':>9} {'median Q1':>10} {'min Q1':>8} {'mean Q2':>9}")
for s in summary:
    q1s = np.array([r["q1"] for r in rows if r["q"] == s["q"] and r["status"] == "ok"])
    print(f"{s['q']:>2} {s['mean_q1']:9.3f} {np.median(q1s):10.3f} {s['min_q1']:8.3f} {s['mean_q2']:9.3f}")
