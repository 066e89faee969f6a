"""
When are clones cheaper than fresh copies?
==========================================

For one random pair per qubit count, prints how many extra original
copies plain exponentiation needs to match n copies with k clones
each, and the largest copy-to-clone cost ratio at which cloning wins.
"""

import numpy as np

from biolmr.analysis import abc_decomposition, copies_lower_bound, cost_threshold
from biolmr.states import random_hs_state

rng = np.random.default_rng(5)
n = 4
for q in (1, 2, 3):
    d = 2 ** q
    abc = abc_decomposition(random_hs_state(d, rng), random_hs_state(d, rng))
    print(f"q={q}  Q1={abc.a_norm / abc.b_norm:.3f}")
    for k in (2, 8, 64):
        extra = copies_lower_bound(n, k, abc)
        threshold, asymptote = cost_threshold(n, k, abc)
        print(f"   k={k:>3}: extra copies >= {extra:8.2f}, "
              f"cost ratio threshold {threshold:.4f} (large-nk {asymptote:.4f})")
