"""
Exponentiation with a known spectrum
====================================

When the eigenvalues of rho are known, exp(-i rho t) can be applied by
writing each eigenvalue into an m-bit ancilla register, kicking back a
phase bit by bit, and uncomputing. Averaged over inputs the infidelity
falls by about four per extra bit; single runs fluctuate.
"""

import numpy as np

from biolmr.analysis import phase_oracle_exponentiation
from biolmr.states import random_pure_state

rng = np.random.default_rng(2)
d, t = 32, 1.0
p = rng.uniform(0, 1, d)
psi = random_pure_state(d, rng).amplitudes
exact = np.exp(-1j * t * p) * psi

prev = None
for m in range(2, 11):
    out = phase_oracle_exponentiation(p, t, m, psi).amplitudes
    infid = 1 - abs(np.vdot(exact, out)) ** 2
    ratio = "" if prev is None else f"  ratio {prev / infid:5.2f}"
    print(f"m={m:>2}  infidelity {infid:.3e}{ratio}")
    prev = infid
