"""Biomimetic cloning in a preferred basis.

A cloning basis is a unitary whose columns are the preferred basis
vectors. Cloning copies those basis vectors exactly,
``|psi_j>|0> -> |psi_j>|psi_j>``, which turns a state ``rho`` into the
correlated k-register state ``sum_ij rho_ij (|psi_i><psi_j|)^{(x)k}``.
"""

from dataclasses import dataclass, field

import numpy as np

from .matcore import as_matrix, dagger, eig_herm, kron
from .states import is_unitary

DEFAULT_SIZE_CAP = 2 ** 12


class SizeCapError(ValueError):
    pass


def check_size(dim: int, size_cap: int = DEFAULT_SIZE_CAP) -> None:
    if dim > size_cap:
        raise SizeCapError(f"dimension {dim} exceeds size cap {size_cap}")


@dataclass(frozen=True, eq=False)
class CloningBasis:
    u_psi: np.ndarray = field(repr=False)
    label: str = "custom"

    def __post_init__(self):
        u = as_matrix(self.u_psi).copy()
        if not is_unitary(u):
            raise ValueError("cloning basis matrix is not unitary")
        u.setflags(write=False)
        object.__setattr__(self, "u_psi", u)

    @property
    def dim(self) -> int:
        return self.u_psi.shape[0]

    @classmethod
    def computational(cls, d: int) -> "CloningBasis":
        return cls(np.eye(d, dtype=np.complex128), "computational")

    def to_basis(self, m) -> np.ndarray:
        """Matrix elements ``<psi_i| m |psi_j>``."""
        return dagger(self.u_psi) @ np.asarray(m) @ self.u_psi

    def from_basis(self, m) -> np.ndarray:
        return self.u_psi @ np.asarray(m) @ dagger(self.u_psi)


def _fix_column_phases(v: np.ndarray) -> np.ndarray:
    # first component above round-off made real positive, column by column
    v = v.copy()
    for j in range(v.shape[1]):
        col = v[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size:
            a = col[nz[0]]
            v[:, j] = col * (abs(a) / a)
    return v


def rho_eigenbasis(rho) -> CloningBasis:
    """Cloning basis that diagonalizes ``rho``.

    Eigenvectors come in ascending eigenvalue order. Degenerate subspaces
    are left as the eigensolver returns them, with deterministic column
    phases. States that are already diagonal get a permutation of the
    computational basis, so ``I/d`` maps to the identity.
    """
    m = as_matrix(rho)
    d = m.shape[0]
    off = m - np.diag(np.diag(m))
    if np.max(np.abs(off), initial=0.0) <= 1e-14:
        order = np.argsort(np.diag(m).real, kind="stable")
        u = np.eye(d, dtype=np.complex128)[:, order]
    else:
        u = _fix_column_phases(eig_herm(m)[1])
    return CloningBasis(u, "rho-eigenbasis")


def _ghz_indices(d: int, k: int) -> np.ndarray:
    # flat index of |j j ... j> (k registers) for every j
    return np.arange(d) * sum(d ** r for r in range(k))


def biomimetic_copies(rho, basis: CloningBasis, k: int,
                      size_cap: int = DEFAULT_SIZE_CAP) -> np.ndarray:
    """The k-register output of the cloning oracle applied to ``rho``."""
    m = as_matrix(rho)
    if k < 1:
        raise ValueError("number of copies must be at least 1")
    if basis.dim != m.shape[0]:
        raise ValueError("basis and state dimensions differ")
    if k == 1:
        return m.copy()
    d = m.shape[0]
    check_size(d ** k, size_cap)
    idx = _ghz_indices(d, k)
    core = np.zeros((d ** k, d ** k), dtype=np.complex128)
    core[np.ix_(idx, idx)] = basis.to_basis(m)
    u = kron(*([basis.u_psi] * k))
    return u @ core @ dagger(u)


def cnot_permutation(n_qubits: int, control: int, target: int) -> np.ndarray:
    """Index map of a CNOT on ``n_qubits`` (qubit 0 most significant)."""
    x = np.arange(2 ** n_qubits)
    cbit = (x >> (n_qubits - 1 - control)) & 1
    return x ^ (cbit << (n_qubits - 1 - target))


def _perm_matrix(perm: np.ndarray) -> np.ndarray:
    p = np.zeros((perm.size, perm.size), dtype=np.complex128)
    p[perm, np.arange(perm.size)] = 1.0
    return p


def copy_ladder(q: int, k: int, order=None) -> np.ndarray:
    """The CNOT ladder copying register 1 into registers 2..k.

    ``order`` optionally lists ``(register, qubit)`` pairs giving the gate
    sequence; the gates commute so the product never depends on it.
    """
    n = q * k
    gates = order if order is not None else [
        (i, m) for i in range(1, k) for m in range(q)
    ]
    u = np.eye(2 ** n, dtype=np.complex128)
    for reg, m in gates:
        u = _perm_matrix(cnot_permutation(n, m, reg * q + m)) @ u
    return u


def oracle_circuit(q: int, k: int, basis: CloningBasis,
                   size_cap: int = DEFAULT_SIZE_CAP) -> np.ndarray:
    """Gate-level unitary of the k-copy cloning oracle on ``k`` q-qubit registers.

    Undo the basis change on register 1, copy it into the other registers
    with CNOTs, then apply the basis change to every register.
    """
    if basis.dim != 2 ** q:
        raise ValueError("basis dimension does not match the register size")
    check_size(2 ** (q * k), size_cap)
    rest = np.eye(2 ** (q * (k - 1)), dtype=np.complex128)
    prepare = np.kron(dagger(basis.u_psi), rest)
    finish = kron(*([basis.u_psi] * k))
    return finish @ copy_ladder(q, k) @ prepare
