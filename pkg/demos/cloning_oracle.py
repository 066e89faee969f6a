"""
Biomimetic copies and the cloning circuit
=========================================

Builds k copies of a random qubit state that agree with it on the
diagonal of a chosen basis, and checks them against the gate-level
circuit (basis change, CNOT ladder, basis change back).
"""

import numpy as np
from scipy.stats import unitary_group

from biolmr.cloning import CloningBasis, biomimetic_copies, oracle_circuit
from biolmr.matcore import kron, partial_trace
from biolmr.states import random_hs_state

rng = np.random.default_rng(3)
rho = np.asarray(random_hs_state(2, rng))
basis = CloningBasis(unitary_group.rvs(2, random_state=rng), label="random")
print("rho =\n", np.round(rho, 4))

# three copies, written down directly
k = 3
copies = biomimetic_copies(rho, basis, k)

# the same state from the circuit acting on rho and two blank registers
blank = np.zeros((4, 4))
blank[0, 0] = 1
u = oracle_circuit(1, k, basis)
from_circuit = u @ kron(rho, blank) @ u.conj().T
print("circuit vs direct, max deviation:", np.max(np.abs(from_circuit - copies)))

# every single register sees rho with its off-diagonals (in the basis) removed
marginal = partial_trace(copies, [2, 2, 2], 1)
pinched = basis.from_basis(np.diag(np.diag(basis.to_basis(rho))))
print("marginal of register 2 =\n", np.round(marginal, 4))
print("deviation from pinched rho:", np.max(np.abs(marginal - pinched)))
