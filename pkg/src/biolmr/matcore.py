"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Nothing here is quantum specific except the register conventions:
a register list ``[d0, d1, ...]`` describes a tensor product space with
register 0 as the most significant factor (``kron(a0, a1, ...)``).
"""

from functools import reduce

import numpy as np

HERMITIAN_ATOL = 1e-10


class NotHermitianError(ValueError):
    pass


def as_matrix(a) -> np.ndarray:
    """Return ``a`` as a square complex128 array, raising on bad shapes."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    return m


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def dagger(a) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def hermiticity_defect(a) -> float:
    """Largest entrywise deviation ``max |a - a^dagger|``."""
    a = np.asarray(a)
    return float(np.max(np.abs(a - dagger(a))))


def is_hermitian(a, atol: float = HERMITIAN_ATOL) -> bool:
    return hermiticity_defect(a) <= atol


def kron(*mats) -> np.ndarray:
    """Kronecker product of one or more matrices, left factor most significant."""
    if not mats:
        raise ValueError("kron needs at least one matrix")
    return reduce(np.kron, (as_matrix(m) for m in mats))


def _check_regs(dim: int, reg_dims) -> list:
    reg_dims = [int(r) for r in reg_dims]
    if any(r < 1 for r in reg_dims):
        raise ValueError(f"register dimensions must be positive: {reg_dims}")
    if int(np.prod(reg_dims)) != dim:
        raise ValueError(f"register dims {reg_dims} do not factor dimension {dim}")
    return reg_dims


def partial_trace(m, reg_dims, keep: int) -> np.ndarray:
    """Reduce ``m`` onto register ``keep``, tracing out every other register.

    Args:
        m: square matrix on the full tensor product space.
        reg_dims: dimension of each register, register 0 most significant.
        keep: index of the register that survives.

    Returns:
        The ``reg_dims[keep]`` square reduced matrix.
    """
    m = as_matrix(m)
    reg_dims = _check_regs(m.shape[0], reg_dims)
    nreg = len(reg_dims)
    if not 0 <= keep < nreg:
        raise IndexError(f"keep={keep} out of range for {nreg} registers")
    t = m.reshape(reg_dims + reg_dims)
    # collapse the register we keep to the front, contract the rest pairwise
    rows = list(range(nreg))
    cols = [nreg + i if i == keep else i for i in range(nreg)]
    return np.einsum(t, rows + cols, [keep, nreg + keep])


def swap_permutation(reg_dims, i: int, j: int) -> np.ndarray:
    """Index map ``perm`` with ``(S @ v)[x] == v[perm[x]]`` for the register swap S."""
    reg_dims = [int(r) for r in reg_dims]
    if i == j:
        raise ValueError("swap needs two distinct registers")
    if reg_dims[i] != reg_dims[j]:
        raise ValueError(
            f"cannot swap registers of unequal size {reg_dims[i]} and {reg_dims[j]}"
        )
    axes = list(range(len(reg_dims)))
    axes[i], axes[j] = axes[j], axes[i]
    idx = np.arange(int(np.prod(reg_dims))).reshape(reg_dims)
    return np.transpose(idx, axes).reshape(-1)


def swap_on_registers(reg_dims, i: int, j: int) -> np.ndarray:
    """Permutation unitary exchanging registers ``i`` and ``j``."""
    perm = swap_permutation(reg_dims, i, j)
    s = np.zeros((perm.size, perm.size), dtype=np.complex128)
    s[np.arange(perm.size), perm] = 1.0
    return s


def hadamard_product(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _same_dim(a, b)
    return a * b


def commutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _same_dim(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    _same_dim(a, b)
    return a @ b + b @ a


def nested_commutator(rho, sigma, k: int) -> np.ndarray:
    """``[rho, sigma]_k`` with ``[rho, sigma]_0 = sigma`` and
    ``[rho, sigma]_{k+1} = [rho, [rho, sigma]_k]``."""
    if k < 0:
        raise ValueError("nesting depth must be non-negative")
    rho, out = as_matrix(rho), as_matrix(sigma)
    _same_dim(rho, out)
    for _ in range(k):
        out = rho @ out - out @ rho
    return out


def _symmetrized(h, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    h = as_matrix(h)
    defect = hermiticity_defect(h)
    if defect > atol:
        raise NotHermitianError(f"matrix is not Hermitian (max defect {defect:.3e})")
    return 0.5 * (h + dagger(h))


def eig_herm(h):
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized before decomposition, so round-off that has
    accumulated through long channel compositions is tolerated up to
    ``HERMITIAN_ATOL``.

    Returns:
        ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and the
        eigenvectors as the columns of a unitary matrix.
    """
    h = _symmetrized(h)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"Hermitian eigensolver failed: {exc}") from exc
    return w, v


def herm_expm(h, t: float) -> np.ndarray:
    """``exp(-i h t)`` for Hermitian ``h`` via its spectral decomposition."""
    w, v = eig_herm(h)
    return (v * np.exp(-1j * w * t)) @ dagger(v)


def trace_norm(a) -> float:
    """Sum of singular values; Hermitian inputs take the eigenvalue route."""
    a = as_matrix(a)
    if is_hermitian(a):
        return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (a + dagger(a))))))
    return float(np.sum(np.linalg.svd(a, compute_uv=False)))


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(as_matrix(a), "fro"))
