"""Synchronous matrix exponential learning."""

from dataclasses import dataclass

import numpy as np

from ..hermitian import exp_map, hermitian

__all__ = ["MxlState", "init_mxl", "mxl_step"]


@dataclass(frozen=True)
class MxlState:
    """Score matrices ``Y`` and the covariances ``Q = exp_map(Y, P)``
    derived from them, after ``n`` updates."""

    Y: tuple
    Q: tuple
    P: np.ndarray
    n: int = 0


def init_mxl(model):
    """Zero scores, hence the uniform profile ``(P_k / M_k) I``."""
    Y = tuple(np.zeros((m, m), dtype=complex) for m in model.M)
    Q = tuple(exp_map(y, p) for y, p in zip(Y, model.P))
    return MxlState(Y, Q, np.array(model.P, dtype=float), 0)


def mxl_step(state, V_hat, gamma, users=None):
    """One update ``Y_k <- Y_k + gamma V_hat_k``, ``Q_k <- exp_map(Y_k, P_k)``.

    Parameters
    ----------
    state : MxlState
    V_hat : sequence of ndarray
        Hermitian gradient estimates, one per user.
    gamma : float or sequence of float
        Step size, or per-user step sizes.
    users : iterable of int, optional
        Restrict the update to these users; the others are returned
        unchanged (same array objects).
    """
    K = len(state.Y)
    if len(V_hat) != K:
        raise ValueError(f"expected {K} gradient estimates, got {len(V_hat)}")
    gammas = np.broadcast_to(np.asarray(gamma, dtype=float), (K,))
    active = range(K) if users is None else users
    Y, Q = list(state.Y), list(state.Q)
    for k in active:
        v = np.asarray(V_hat[k])
        if not np.all(np.isfinite(v)):
            raise ValueError(f"non-finite gradient estimate for user {k}")
        Y[k] = state.Y[k] + gammas[k] * hermitian(v)
        Q[k] = exp_map(Y[k], state.P[k])
    return MxlState(tuple(Y), tuple(Q), state.P, state.n + 1)
