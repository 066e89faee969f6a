"""Error metrics, improvement quotients, bounds and the cost model.

Hadamard products are always taken in the eigenbasis of ``rho``, which
makes every quantity here a basis-independent function of ``(rho, sigma)``.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .channels import (
    ProtocolParams,
    bio_protocol,
    bio_protocol_limit,
    exact_target,
    lmr_n,
)
from .cloning import rho_eigenbasis
from .matcore import (
    anticommutator,
    as_matrix,
    frobenius_norm,
    hadamard_product,
    nested_commutator,
    trace_norm,
)
from .states import PureState

DEGENERATE_ATOL = 1e-12


class DegenerateQuotient(ArithmeticError):
    """Both error coefficients vanish, so the quotient is undefined."""


@dataclass(frozen=True, eq=False)
class AbcDecomposition:
    """Second-order error operators of plain and clone-assisted LMR.

    ``a_mat`` drives the plain protocol error, ``b_mat`` the error with
    infinitely many clones, and ``c_mat = a_mat - b_mat`` the finite-k
    remainder.
    """

    a_mat: np.ndarray
    b_mat: np.ndarray
    c_mat: np.ndarray

    @cached_property
    def a_norm(self) -> float:
        return trace_norm(self.a_mat)

    @cached_property
    def b_norm(self) -> float:
        return trace_norm(self.b_mat)

    @cached_property
    def c_norm(self) -> float:
        return trace_norm(self.c_mat)


def abc_decomposition(rho, sigma) -> AbcDecomposition:
    r, s = as_matrix(rho), as_matrix(sigma)
    basis = rho_eigenbasis(r)
    rt, st = basis.to_basis(r), basis.to_basis(s)
    rt = np.diag(np.diag(rt))
    nested = nested_commutator(rt, st, 2)
    had = hadamard_product(rt, st)
    anti = anticommutator(rt, st)
    a = nested + 2.0 * (rt - st)
    b = nested + 2.0 * had - anti
    c = 2.0 * (rt - st) + anti - 2.0 * had
    return AbcDecomposition(*(basis.from_basis(m) for m in (a, b, c)))


def _quotient(num: float, den: float) -> float:
    if den <= DEGENERATE_ATOL:
        raise DegenerateQuotient(
            f"denominator norm {den:.3e} vanishes (numerator {num:.3e})"
        )
    return num / den


def q1(rho, sigma) -> float:
    """Trace-norm improvement quotient ``||A||_1 / ||B||_1``."""
    abc = abc_decomposition(rho, sigma)
    return _quotient(abc.a_norm, abc.b_norm)


def q2(rho, sigma) -> float:
    """Frobenius-norm improvement quotient ``||A||_2 / ||B||_2``."""
    abc = abc_decomposition(rho, sigma)
    return _quotient(frobenius_norm(abc.a_mat), frobenius_norm(abc.b_mat))


def eps_lmr_exact(rho, sigma, t: float, n: int) -> float:
    """Trace distance between ``n``-copy LMR and the exact evolution."""
    params = ProtocolParams(t, n)
    return trace_norm(lmr_n(sigma, rho, params) - exact_target(sigma, rho, t))


def eps_bio_exact(rho, sigma, t: float, n: int, k=None) -> float:
    """Trace distance of the clone-assisted protocol from the exact evolution.

    ``k=None`` selects the infinite-clone limit.
    """
    if k is None:
        out = bio_protocol_limit(sigma, rho, ProtocolParams(t, n))
    else:
        out = bio_protocol(sigma, rho, ProtocolParams(t, n, k))
    return trace_norm(out - exact_target(sigma, rho, t))


def mkr_coefficient(p_k: float, p_r: float) -> float:
    """Coefficient whose non-negativity gives the Frobenius quotient bound.

    With ``p_plus = p_k + p_r`` and ``p_minus = (p_k - p_r)**2`` this is
    ``4 (1 - p_plus**2) + (8 p_plus - 3 p_minus - 4) p_minus``.
    """
    if p_k < 0 or p_r < 0 or p_k + p_r > 1 + 1e-12:
        raise ValueError(f"need p_k, p_r >= 0 and p_k + p_r <= 1, got {p_k}, {p_r}")
    p_plus = p_k + p_r
    p_minus = (p_k - p_r) ** 2
    return 4.0 * (1.0 - p_plus ** 2) + (8.0 * p_plus - 3.0 * p_minus - 4.0) * p_minus


def q1_mixedlike_bound(rho, sigma, atol: float = 1e-9):
    """Check the quotient lower bound for a state with spectrum in ``[0, 4/d]``.

    Returns:
        ``(q1, bound, holds)`` where ``bound`` is
        ``(d/8) (||rho - sigma||_1 - 32/d**2) / (1 + 4/d)``.
    """
    r, s = as_matrix(rho), as_matrix(sigma)
    d = r.shape[0]
    if np.max(np.abs(r - np.diag(np.diag(r)))) > 1e-12:
        raise ValueError("rho must be diagonal")
    if np.max(np.diag(r).real) > 4.0 / d + 1e-12:
        raise ValueError("rho has an eigenvalue above 4/d")
    lhs = q1(r, s)
    rhs = (d / 8.0) * (trace_norm(r - s) - 32.0 / d ** 2) / (1.0 + 4.0 / d)
    return lhs, rhs, bool(lhs >= rhs - atol)


def copies_lower_bound(n: int, k: int, abc: AbcDecomposition) -> float:
    """Extra original copies plain LMR needs to match ``n`` copies cloned ``k`` times."""
    den = n * k * abc.b_norm + abc.c_norm
    if abc.b_norm <= DEGENERATE_ATOL or den <= DEGENERATE_ATOL:
        raise DegenerateQuotient("clone-assisted error coefficient vanishes")
    return n * (n * k * abc.a_norm / den - 1.0)


def cost_threshold(n: int, k: int, abc: AbcDecomposition):
    """Largest source-to-clone cost ratio at which cloning is the cheaper option.

    Returns:
        ``(threshold, asymptote)``; the asymptote ``(Q1 - 1)/(k - 1)`` is
        the large ``n*k`` form.
    """
    if k < 2:
        raise ValueError("cost threshold needs k >= 2")
    nk = n * k
    den = nk * abc.b_norm + abc.c_norm
    if abc.b_norm <= DEGENERATE_ATOL:
        raise DegenerateQuotient("clone-assisted error coefficient vanishes")
    threshold = (nk * abc.a_norm - nk * abc.b_norm - abc.c_norm) / den / (k - 1)
    asymptote = (abc.a_norm / abc.b_norm - 1.0) / (k - 1)
    return threshold, asymptote


def phase_oracle_exponentiation(p_values, t: float, m: int, psi,
                                size_cap: int = 2 ** 24) -> PureState:
    """Apply ``exp(-i rho t)`` to a pure state using known eigenvalues of ``rho``.

    The state is written in the eigenbasis of ``rho``. An m-qubit ancilla
    register receives the truncated binary expansion of each eigenvalue,
    one controlled phase per ancilla bit (angle ``t / 2**s`` for bit ``s``,
    most significant first) imprints the phase, and the encoding is then
    uncomputed. The ancilla must come back in ``|0...0>``.
    """
    p = np.asarray(p_values, dtype=float)
    amps = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if m < 1:
        raise ValueError("need at least one bit of precision")
    if p.shape != amps.shape:
        raise ValueError("p_values and psi lengths differ")
    if np.any(p < 0) or np.any(p >= 1):
        raise ValueError("eigenvalues must lie in [0, 1)")
    d, na = amps.size, 2 ** m
    if d * na > size_cap:
        raise ValueError(f"statevector of size {d * na} exceeds cap {size_cap}")

    codes = np.floor(p * na).astype(np.int64)
    j = np.arange(d)[:, None]
    a = np.arange(na)[None, :]

    state = np.zeros((d, na), dtype=np.complex128)
    state[:, 0] = amps
    # encode: |j>|a> -> |j>|a xor code(j)>
    state = state[j, a ^ codes[:, None]]
    for s in range(1, m + 1):
        bit = (a >> (m - s)) & 1
        state = state * np.exp(-1j * t * 2.0 ** -s * bit)
    state = state[j, a ^ codes[:, None]]

    residual = np.linalg.norm(state[:, 1:])
    if residual > 1e-12:
        raise RuntimeError(f"ancilla register not restored (residual {residual:.3e})")
    return PureState(state[:, 0])
