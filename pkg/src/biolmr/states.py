"""Density matrices, pure states and the random ensembles used in experiments."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .matcore import (
    HERMITIAN_ATOL,
    as_matrix,
    dagger,
    eig_herm,
    hermiticity_defect,
)

TRACE_ATOL = 1e-10
PSD_ATOL = 1e-9
UNITARY_ATOL = 1e-10
NORM_ATOL = 1e-10


class InvalidStateError(ValueError):
    pass


def check_density_matrix(mat, psd_atol: float = PSD_ATOL) -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; return the matrix."""
    mat = as_matrix(mat)
    defect = hermiticity_defect(mat)
    if defect > HERMITIAN_ATOL:
        raise InvalidStateError(f"not Hermitian (max defect {defect:.3e})")
    tr = np.trace(mat)
    if abs(tr - 1.0) > TRACE_ATOL:
        raise InvalidStateError(f"trace {tr:.12g} differs from 1")
    lo = eig_herm(mat)[0][0]
    if lo < -psd_atol:
        raise InvalidStateError(f"negative eigenvalue {lo:.3e}")
    return mat


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated quantum state.

    ``np.asarray(state)`` yields the underlying matrix, so instances can be
    passed anywhere a plain array is accepted.
    """

    mat: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = check_density_matrix(self.mat).copy()
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def qubits(self):
        """Number of qubits, or ``None`` when the dimension is not a power of two."""
        q = self.dim.bit_length() - 1
        return q if 1 << q == self.dim else None

    @cached_property
    def spectrum(self) -> np.ndarray:
        return eig_herm(self.mat)[0]

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=np.complex128).reshape(-1)
        if abs(np.vdot(a, a).real - 1.0) > NORM_ATOL:
            raise InvalidStateError("state vector is not normalized")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    def __array__(self, dtype=None, copy=None):
        return self.amplitudes if dtype is None else self.amplitudes.astype(dtype)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density_matrix(self) -> DensityMatrix:
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex normal samples, ``(N(0,1) + i N(0,1)) / sqrt(2)``."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_hs_state(d: int, rng: np.random.Generator) -> DensityMatrix:
    """Hilbert-Schmidt random mixed state, ``G G^dagger / tr(G G^dagger)`` for Ginibre ``G``."""
    if d < 1:
        raise ValueError("dimension must be positive")
    g = complex_gaussian(rng, (d, d))
    m = g @ dagger(g)
    m = 0.5 * (m + dagger(m))
    return DensityMatrix(m / np.trace(m).real)


def random_pure_state(d: int, rng: np.random.Generator) -> PureState:
    if d < 1:
        raise ValueError("dimension must be positive")
    v = complex_gaussian(rng, d)
    return PureState(v / np.linalg.norm(v))


def _capped_simplex(x: np.ndarray, cap: float) -> np.ndarray:
    # clip entries at the cap, rescale the free ones, repeat until nothing overflows
    x = np.asarray(x, dtype=float)
    capped = np.zeros(x.size, dtype=bool)
    for _ in range(100):
        free_mass = 1.0 - cap * capped.sum()
        free_sum = x[~capped].sum()
        y = np.where(capped, cap, x * (free_mass / free_sum))
        over = (y > cap) & ~capped
        if not over.any():
            return y
        capped |= over
    raise RuntimeError("capped simplex projection did not converge")


def bounded_spectrum_state(d: int, rng: np.random.Generator) -> DensityMatrix:
    """Diagonal state with every eigenvalue in ``[0, 4/d]``."""
    if d < 2:
        raise ValueError("bounded spectrum states need d >= 2")
    cap = 4.0 / d
    eps = _capped_simplex(rng.uniform(0.0, cap, size=d), cap)
    return DensityMatrix(np.diag(eps).astype(np.complex128))


def single_qubit_min_case(c: float, d_coef: float):
    """The qubit pair ``rho = I/2`` and ``sigma = [[1/2, c + i d], [c - i d, 1/2]]``.

    This configuration attains the smallest improvement quotient, 2.
    """
    if c * c + d_coef * d_coef > 0.25 + 1e-12:
        raise InvalidStateError(
            f"c^2 + d^2 = {c * c + d_coef * d_coef:.6g} exceeds 1/4, sigma is not PSD"
        )
    rho = maximally_mixed(2)
    sigma = np.array([[0.5, c + 1j * d_coef], [c - 1j * d_coef, 0.5]])
    return rho, DensityMatrix(sigma)


def maximally_mixed(d: int) -> DensityMatrix:
    if d < 1:
        raise ValueError("dimension must be positive")
    return DensityMatrix(np.eye(d, dtype=np.complex128) / d)


def is_unitary(u, atol: float = UNITARY_ATOL) -> bool:
    u = as_matrix(u)
    return bool(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[0]))) <= atol)


def conjugate_by(state, u) -> DensityMatrix:
    """``u state u^dagger`` for unitary ``u``."""
    u = as_matrix(u)
    if not is_unitary(u):
        raise ValueError("conjugating matrix is not unitary")
    m = u @ np.asarray(state) @ dagger(u)
    return DensityMatrix(0.5 * (m + dagger(m)))
