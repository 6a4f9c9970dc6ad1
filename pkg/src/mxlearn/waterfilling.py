"""Water-filling baselines: single-user, iterative and simultaneous."""

from typing import NamedTuple

import numpy as np

from .hermitian import from_eig, herm_eig, inv_sqrt
from .model import aggregate_covariance

__all__ = [
    "WaterfillResult",
    "waterfill_gains",
    "waterfill_single",
    "best_response",
    "iwf_step",
    "swf_step",
    "covariance_from_precision",
]


class WaterfillResult(NamedTuple):
    Q: np.ndarray
    level: float
    active_modes: int


def waterfill_gains(g, P):
    """Power allocation ``q_i = max(0, mu - 1/g_i)`` with ``sum q = P``.

    The water level is found exactly by scanning the gains in decreasing
    order. Returns ``(q, mu, active)`` with ``q`` aligned with ``g``.
    Subnormal gains are treated as zero.
    """
    if not P > 0:
        raise ValueError(f"power must be positive, got {P}")
    g = np.asarray(g, dtype=float)
    order = np.argsort(g)[::-1]
    gs = g[order]
    q = np.zeros_like(g)
    tiny = np.finfo(float).tiny
    if gs[0] < tiny:
        q[:] = P / g.size
        return q, np.inf, g.size
    inv = np.full_like(gs, np.inf)
    pos = gs >= tiny
    inv[pos] = 1.0 / gs[pos]
    csum = np.cumsum(np.where(pos, inv, 0.0))
    active, mu = 1, P + inv[0]
    for m in range(pos.sum(), 0, -1):
        level = (P + csum[m - 1]) / m
        if level > inv[m - 1]:
            active, mu = m, level
            break
    # mu - 1/g_i rewritten to avoid cancellation when 1/g_i >> P
    act = inv[:active]
    q[order[:active]] = (P + (act[None, :] - act[:, None]).sum(axis=1)) / active
    return q, float(mu), active


def waterfill_single(H_eff, P):
    """Capacity-achieving covariance for ``log det(I + H Q H^H)`` with
    ``tr Q = P``.

    An all-zero channel yields the uniform allocation by convention.
    """
    H_eff = np.asarray(H_eff, dtype=complex)
    g, U = herm_eig(H_eff.conj().T @ H_eff)
    scale = max(g[-1], 1.0)
    g = np.where(g > 1e-14 * scale, g, 0.0)
    q, mu, active = waterfill_gains(g, P)
    return WaterfillResult(from_eig(q, U), mu, active)


def covariance_from_precision(P_hat):
    """Turn a (possibly noisy) precision estimate into a usable ``W``.

    A valid precision has eigenvalues in ``(0, 1]`` since ``W >= I``; the
    estimate's eigenvalues are clipped to ``[1e-6, 1]`` before inversion.
    """
    w, U = herm_eig(P_hat)
    return from_eig(1.0 / np.clip(w, 1e-6, 1.0), U)


def best_response(model, Q, k, W=None):
    """Water-filling best response of user ``k`` against the others.

    ``W`` overrides the exact aggregate covariance (noisy feedback); the
    resulting interference covariance is floored at the identity.
    """
    if W is None:
        W = aggregate_covariance(model, Q)
    h = model.H[k]
    Wk = W - h @ Q[k] @ h.conj().T
    w, U = herm_eig(Wk)
    Wk = from_eig(np.maximum(w, 1.0), U)
    return waterfill_single(inv_sqrt(Wk) @ h, model.P[k]).Q


def iwf_step(model, Q, k, W=None):
    """Round-robin water-filling: replace only ``Q_k`` by its best response."""
    out = list(Q)
    out[k] = best_response(model, Q, k, W)
    return out


def swf_step(model, Q, W=None):
    """Simultaneous water-filling: every user best-responds to the same
    old profile."""
    if W is None:
        W = aggregate_covariance(model, Q)
    return [best_response(model, Q, k, W) for k in range(model.K)]
