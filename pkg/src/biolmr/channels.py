"""Density-matrix exponentiation channels.

Every function maps a system state ``sigma`` to a new state, given the
state ``rho`` being exponentiated. Outputs are plain complex arrays; they
are valid states up to accumulated round-off (see ``check_channel_output``).

Conventions shared by the cloning-assisted channels: a single original
copy is cloned into ``k`` registers and each register drives one partial
swap of duration ``delta_t``, so one original copy covers ``k * delta_t``.
"""

import warnings
from dataclasses import dataclass
from math import comb

import numpy as np

from .cloning import (
    DEFAULT_SIZE_CAP,
    CloningBasis,
    biomimetic_copies,
    check_size,
    rho_eigenbasis,
)
from .matcore import (
    anticommutator,
    as_matrix,
    commutator,
    dagger,
    hadamard_product,
    herm_expm,
    kron,
    partial_trace,
    swap_permutation,
)
from .states import PSD_ATOL, check_density_matrix


class DomainWarning(UserWarning):
    """Closed-form evaluation outside the regime where it is unambiguous."""


@dataclass(frozen=True)
class ProtocolParams:
    t: float
    n: int
    k: int = 1

    def __post_init__(self):
        if not np.isfinite(self.t):
            raise ValueError("evolution time must be finite")
        if self.n < 1 or self.k < 1:
            raise ValueError("n and k must be at least 1")

    @property
    def dt(self) -> float:
        return self.t / self.n

    @property
    def delta_t(self) -> float:
        return self.dt / self.k


def check_channel_output(m) -> np.ndarray:
    """Validate a channel image with the relaxed positivity tolerance."""
    return check_density_matrix(m, psd_atol=PSD_ATOL)


def _pair(sigma, rho):
    s, r = as_matrix(sigma), as_matrix(rho)
    if s.shape != r.shape:
        raise ValueError(f"dimension mismatch: sigma {s.shape}, rho {r.shape}")
    return s, r


def lmr_step(sigma, rho, dt: float) -> np.ndarray:
    """One partial-swap step with a fresh copy of ``rho``."""
    s, r = _pair(sigma, rho)
    c, sn = np.cos(dt), np.sin(dt)
    return c * c * s + sn * sn * np.trace(s) * r - 1j * sn * c * commutator(r, s)


def lmr_n(sigma, rho, params: ProtocolParams) -> np.ndarray:
    """``params.n`` successive LMR steps of length ``t/n`` (``params.k`` ignored)."""
    s, r = _pair(sigma, rho)
    for _ in range(params.n):
        s = lmr_step(s, r, params.dt)
    return s


def lmr_n_closed(sigma, rho, params: ProtocolParams) -> np.ndarray:
    """Binomial expansion of ``n`` LMR steps over nested commutators."""
    s, r = _pair(sigma, rho)
    n, dt = params.n, params.dt
    c, sn = np.cos(dt), np.sin(dt)
    out = (1.0 - c ** (2 * n)) * np.trace(s) * r
    term = s
    for j in range(n + 1):
        out = out + comb(n, j) * (-1j * sn) ** j * c ** (2 * n - j) * term
        term = commutator(r, term)
    return out


def exact_target(sigma, rho, t: float) -> np.ndarray:
    """``exp(-i rho t) sigma exp(i rho t)``."""
    s, r = _pair(sigma, rho)
    u = herm_expm(r, t)
    return u @ s @ dagger(u)


def _one_minus_cos_pow(x: float, power: int) -> float:
    c2 = np.cos(x) ** 2
    if c2 > 0.0:
        return float(-np.expm1(0.5 * power * np.log(c2)))
    return 1.0


def _closed_step(s: np.ndarray, p: np.ndarray, delta_t: float, k: int) -> np.ndarray:
    # s is sigma in the cloning basis, p the diagonal of rho in that basis
    rbar = np.diag(p).astype(np.complex128)
    ck = np.cos(delta_t) ** k
    one_minus_ck2 = _one_minus_cos_pow(delta_t, 2 * k)
    return (
        (1.0 - one_minus_ck2) * s
        - 1j * ck * np.sin(k * delta_t) * commutator(rbar, s)
        + one_minus_ck2 * np.trace(s) * rbar
        + ck * (np.cos(k * delta_t) - ck)
        * (anticommutator(rbar, s) - 2.0 * hadamard_product(rbar, s))
    )


def _limit_step(s: np.ndarray, p: np.ndarray, dt: float) -> np.ndarray:
    rbar = np.diag(p).astype(np.complex128)
    return (
        s
        - 1j * np.sin(dt) * commutator(rbar, s)
        + 2.0 * np.sin(dt / 2) ** 2
        * (2.0 * hadamard_product(rbar, s) - anticommutator(rbar, s))
    )


def _is_diagonal(m: np.ndarray, atol: float = 1e-10) -> bool:
    off = m - np.diag(np.diag(m))
    return float(np.max(np.abs(off), initial=0.0)) <= atol


def _k1_fallback(s, r, rt, delta_t):
    if not _is_diagonal(rt):
        warnings.warn(
            "closed form at k=1 with rho not diagonal in the cloning basis; "
            "evaluating plain LMR with the full rho",
            DomainWarning,
            stacklevel=3,
        )
    return lmr_step(s, r, delta_t)


def bio_channel_closed(sigma, rho, basis: CloningBasis, delta_t: float,
                       k: int) -> np.ndarray:
    """Closed form of one original copy cloned ``k`` times, each clone used
    for a partial swap of length ``delta_t``.

    Only the diagonal of ``rho`` in the cloning basis enters when
    ``k >= 2``. At ``k = 1`` there is no cloning and the map is the plain
    LMR step with the full ``rho``; a ``DomainWarning`` is issued if
    ``rho`` is not diagonal in the basis, since the two readings differ.
    """
    s, r = _pair(sigma, rho)
    if k < 1:
        raise ValueError("k must be at least 1")
    if basis.dim != s.shape[0]:
        raise ValueError("basis and state dimensions differ")
    rt = basis.to_basis(r)
    if k == 1:
        return _k1_fallback(s, r, rt, delta_t)
    p = np.diag(rt).real
    return basis.from_basis(_closed_step(basis.to_basis(s), p, delta_t, k))


def bio_channel_brute(sigma, rho, basis: CloningBasis, delta_t: float, k: int,
                      size_cap: int = DEFAULT_SIZE_CAP) -> np.ndarray:
    """Brute-force evaluation of the same channel on the full register space.

    Builds ``sigma (x) rho^(k)`` explicitly, applies the partial swaps
    between register 0 and registers 1..k (register 1 first), and traces
    out the clones. Each partial swap is ``cos(dt) I - i sin(dt) S``, exact
    because the swap squares to the identity.
    """
    s, r = _pair(sigma, rho)
    d = s.shape[0]
    check_size(d ** (k + 1), size_cap)
    regs = [d] * (k + 1)
    state = kron(s, biomimetic_copies(r, basis, k, size_cap=size_cap))
    c, sn = np.cos(delta_t), np.sin(delta_t)
    for j in range(1, k + 1):
        perm = swap_permutation(regs, 0, j)
        state = c * state - 1j * sn * state[perm, :]
        state = c * state + 1j * sn * state[:, perm]
    return partial_trace(state, regs, 0)


def bio_limit_step(sigma, rho, dt: float) -> np.ndarray:
    """Infinitely many clones of one copy of ``rho``, cloned in its eigenbasis."""
    s, r = _pair(sigma, rho)
    basis = rho_eigenbasis(r)
    p = np.diag(basis.to_basis(r)).real
    return basis.from_basis(_limit_step(basis.to_basis(s), p, dt))


def bio_protocol(sigma, rho, params: ProtocolParams, basis: CloningBasis = None,
                 path: str = "closed", size_cap: int = DEFAULT_SIZE_CAP) -> np.ndarray:
    """``n`` original copies, each cloned ``k`` times, total time ``t``.

    The closed path works in the cloning basis throughout and rotates back
    once at the end. ``basis`` defaults to the eigenbasis of ``rho``.
    """
    s, r = _pair(sigma, rho)
    if basis is None:
        basis = rho_eigenbasis(r)
    delta_t, k = params.delta_t, params.k
    if path == "brute":
        for _ in range(params.n):
            s = bio_channel_brute(s, r, basis, delta_t, k, size_cap=size_cap)
        return s
    if path != "closed":
        raise ValueError(f"unknown path {path!r}")
    rt = basis.to_basis(r)
    if k == 1:
        if not _is_diagonal(rt):
            warnings.warn("k=1 with rho not diagonal in the cloning basis; "
                          "running plain LMR", DomainWarning, stacklevel=2)
        return lmr_n(s, r, params)
    p = np.diag(rt).real
    st = basis.to_basis(s)
    for _ in range(params.n):
        st = _closed_step(st, p, delta_t, k)
    return basis.from_basis(st)


def bio_protocol_limit(sigma, rho, params: ProtocolParams) -> np.ndarray:
    """``n`` steps of the infinite-clone channel, each of length ``t/n``."""
    s, r = _pair(sigma, rho)
    basis = rho_eigenbasis(r)
    p = np.diag(basis.to_basis(r)).real
    st = basis.to_basis(s)
    for _ in range(params.n):
        st = _limit_step(st, p, params.dt)
    return basis.from_basis(st)


def eigenbasis(h, label: str = "eigenbasis") -> CloningBasis:
    b = rho_eigenbasis(h)
    return CloningBasis(b.u_psi, label)


def theta_expectation_under_cloning(sigma, rho, theta, delta_t: float,
                                    k: int) -> float:
    """``tr(T_k(sigma) theta)`` when cloning in the eigenbasis of ``theta``."""
    th = as_matrix(theta)
    basis = eigenbasis(th, "theta-eigenbasis")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DomainWarning)
        out = bio_channel_closed(sigma, rho, basis, delta_t, k)
    val = np.trace(out @ th)
    if abs(val.imag) > 1e-10:
        raise ValueError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


__all__ = [
    "DomainWarning",
    "ProtocolParams",
    "bio_channel_brute",
    "bio_channel_closed",
    "bio_limit_step",
    "bio_protocol",
    "bio_protocol_limit",
    "check_channel_output",
    "eigenbasis",
    "exact_target",
    "lmr_n",
    "lmr_n_closed",
    "lmr_step",
    "theta_expectation_under_cloning",
]
