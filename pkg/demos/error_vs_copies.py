"""
Simulation error against the number of clones
=============================================

For a random two-qubit pair, compares plain density-matrix
exponentiation with n copies, the clone-assisted version with k clones
per copy, and the infinite-clone limit, all against exact evolution.
"""

import numpy as np

from biolmr.analysis import abc_decomposition, eps_bio_exact, eps_lmr_exact
from biolmr.campaigns import k_sweep_rows
from biolmr.states import random_hs_state

rng = np.random.default_rng(11)
rho = np.asarray(random_hs_state(4, rng))
sigma = np.asarray(random_hs_state(4, rng))
t, n = 0.2, 4

rows = k_sweep_rows(rho, sigma, t, n, [1, 2, 4, 8, 16, 64, 256])
print(f"{'k':>5} {'lmr(n)':>10} {'bio(n,k)':>10} {'lmr(nk)':>10} {'bio limit':>10}")
for r in rows:
    print(f"{r['k']:>5} {r['eps_lmr_n']:10.3e} {r['eps_bio_n_to_nk']:10.3e} "
          f"{r['eps_lmr_nk']:10.3e} {r['eps_bio_limit']:10.3e}")

# second-order coefficients: n eps / t^2 tends to ||A||/2 and ||B||/2
abc = abc_decomposition(rho, sigma)
for n_big in (16, 64, 256):
    lmr = n_big * eps_lmr_exact(rho, sigma, t, n_big) / t ** 2
    bio = n_big * eps_bio_exact(rho, sigma, t, n_big) / t ** 2
    print(f"n={n_big:>3}: {lmr:.4f} (-> {abc.a_norm / 2:.4f})  {bio:.4f} (-> {abc.b_norm / 2:.4f})")
