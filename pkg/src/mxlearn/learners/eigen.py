"""Eigen-based exponential learning.

Instead of carrying a score matrix, each user evolves the eigenvalues and
eigenvectors of its covariance matrix by an Euler step of the induced
eigen-dynamics, then re-orthonormalizes the eigenvectors.
"""

from dataclasses import dataclass

import numpy as np

from ..hermitian import from_eig, hermitian, orthonormalize

__all__ = ["EigenState", "StepRejected", "init_exl", "exl_step", "exl_step_backoff", "random_unitary"]

# eigenvalue pairs with |log q_a - log q_b| below this are not coupled
DEGENERATE_TOL = 1e-8


class StepRejected(ValueError):
    """An eigenvalue update would turn negative; retry with a smaller step."""


@dataclass(frozen=True)
class EigenState:
    q: tuple
    U: tuple
    P: np.ndarray
    n: int = 0

    @property
    def Q(self):
        return tuple(from_eig(q, U) for q, U in zip(self.q, self.U))


def random_unitary(rng, m):
    Z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    Qm, R = np.linalg.qr(Z)
    return Qm * (np.diag(R) / np.abs(np.diag(R)))


def init_exl(model, rng, jitter=1e-6):
    """Near-uniform eigenvalues with a random eigenbasis.

    The relative ``jitter`` keeps eigenvalues distinct so that the first
    step already couples every pair of eigenvectors.
    """
    qs, Us = [], []
    for m, p in zip(model.M, model.P):
        q = 1.0 + jitter * rng.uniform(-1.0, 1.0, m)
        qs.append(p * q / q.sum())
        Us.append(random_unitary(rng, m))
    return EigenState(tuple(qs), tuple(Us), np.array(model.P, dtype=float), 0)


def _user_step(q, U, V, gamma, p):
    Vt = U.conj().T @ hermitian(V) @ U
    d = np.real(np.diag(Vt))
    dq = gamma * q * (d - q @ d / p)
    q_new = q + dq
    if np.any(q_new < 0):
        raise StepRejected(f"step {gamma:.3g} drives an eigenvalue negative")
    with np.errstate(divide="ignore"):
        logq = np.log(q)
    # D[a, b] = log q_a - log q_b ; C[b, a] = V_ba / D[a, b]
    D = logq[:, None] - logq[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        C = Vt / D.T
    skip = ~np.isfinite(D.T) | (np.abs(D.T) < DEGENERATE_TOL)
    C[skip] = 0.0
    np.fill_diagonal(C, 0.0)
    U_new = orthonormalize(U + gamma * U @ C)
    q_new = q_new * (p / q_new.sum())
    return q_new, U_new


def exl_step(state, V, gamma):
    """One Euler step of the eigen-dynamics for every user.

    Raises
    ------
    StepRejected
        If some updated eigenvalue would be negative.
    """
    if len(V) != len(state.q):
        raise ValueError(f"expected {len(state.q)} gradients, got {len(V)}")
    qs, Us = [], []
    for q, U, v, p in zip(state.q, state.U, V, state.P):
        qn, Un = _user_step(q, U, v, gamma, p)
        qs.append(qn)
        Us.append(Un)
    return EigenState(tuple(qs), tuple(Us), state.P, state.n + 1)


def exl_step_backoff(state, V, gamma, shrink=0.5, max_tries=60):
    """:func:`exl_step`, halving ``gamma`` until the step is accepted.

    Returns the new state and the step size actually used.
    """
    for _ in range(max_tries):
        try:
            return exl_step(state, V, gamma), gamma
        except StepRejected:
            gamma *= shrink
    raise StepRejected("no admissible step size found")
