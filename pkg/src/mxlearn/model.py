"""Gaussian vector multiple-access channel: rates, gradients and profiles.

A transmit profile is a list ``Q`` of per-user covariance matrices, with
``Q[k]`` of shape ``(M_k, M_k)``. Rates are in nats; the noise covariance
at the receiver is the identity.
"""

from dataclasses import dataclass, field

import numpy as np

from .hermitian import from_eig, herm_eig, hermitian, logdet

__all__ = [
    "NetworkModel",
    "uniform_profile",
    "check_profile",
    "aggregate_covariance",
    "mui_covariance",
    "user_rate",
    "sum_rate",
    "gradient",
    "precision",
    "sample_static_channel",
    "random_model",
    "potential_residual",
]


@dataclass(frozen=True)
class NetworkModel:
    """One channel instance: ``K`` users with channels ``H[k]`` of shape
    ``(N, M_k)`` and power budgets ``P[k]``."""

    H: tuple
    P: np.ndarray = field(default=None)

    def __post_init__(self):
        H = tuple(np.asarray(h, dtype=complex) for h in self.H)
        if len(H) == 0:
            raise ValueError("need at least one user")
        N = H[0].shape[0]
        for k, h in enumerate(H):
            if h.ndim != 2 or h.shape[0] != N or h.shape[1] < 1 or N < 1:
                raise ValueError(f"channel {k} has shape {h.shape}, expected ({N}, M_k)")
            if not np.all(np.isfinite(h)):
                raise ValueError(f"channel {k} has non-finite entries")
        P = np.ones(len(H)) if self.P is None else np.broadcast_to(
            np.asarray(self.P, dtype=float), (len(H),)).copy()
        if np.any(~(P > 0)):
            raise ValueError("powers must be positive")
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "P", P)

    @property
    def K(self):
        return len(self.H)

    @property
    def N(self):
        return self.H[0].shape[0]

    @property
    def M(self):
        return tuple(h.shape[1] for h in self.H)

    def with_channels(self, H):
        """Same users and powers on a new channel realization."""
        return NetworkModel(tuple(H), self.P)


def uniform_profile(model):
    """The benchmark profile ``Q_k = (P_k / M_k) I``."""
    return [p / m * np.eye(m, dtype=complex) for p, m in zip(model.P, model.M)]


def check_profile(model, Q, rtol=1e-8):
    """Raise ``ValueError`` unless ``Q`` is feasible for ``model``."""
    if len(Q) != model.K:
        raise ValueError(f"expected {model.K} covariance matrices, got {len(Q)}")
    for k, (q, p, m) in enumerate(zip(Q, model.P, model.M)):
        q = np.asarray(q)
        if q.shape != (m, m):
            raise ValueError(f"Q[{k}] has shape {q.shape}, expected ({m}, {m})")
        w = herm_eig(q).eigenvalues
        if w[0] < -1e-10 * p:
            raise ValueError(f"Q[{k}] is not positive semidefinite")
        if abs(w.sum() - p) > rtol * p:
            raise ValueError(f"Q[{k}] has trace {w.sum():.6g}, expected {p:.6g}")


def _check_dims(model, Q):
    if len(Q) != model.K:
        raise ValueError(f"expected {model.K} covariance matrices, got {len(Q)}")
    for k, (q, m) in enumerate(zip(Q, model.M)):
        if np.shape(q) != (m, m):
            raise ValueError(f"Q[{k}] has shape {np.shape(q)}, expected ({m}, {m})")


def _signal(h, q):
    return h @ q @ h.conj().T


def aggregate_covariance(model, Q):
    """Received signal-plus-noise covariance ``W = I + sum_l H_l Q_l H_l^H``."""
    _check_dims(model, Q)
    W = np.eye(model.N, dtype=complex)
    for h, q in zip(model.H, Q):
        W += _signal(h, q)
    return 0.5 * (W + W.conj().T)


def _check_user(model, k):
    if not (isinstance(k, (int, np.integer)) and 0 <= k < model.K):
        raise ValueError(f"invalid user index {k!r} for K={model.K}")


def mui_covariance(model, Q, k):
    """Interference-plus-noise covariance ``W_{-k}`` seen by user ``k``."""
    _check_user(model, k)
    W = np.eye(model.N, dtype=complex)
    for l, (h, q) in enumerate(zip(model.H, Q)):
        if l != k:
            W += _signal(h, q)
    return 0.5 * (W + W.conj().T)


def user_rate(model, Q, k):
    """Single-user-decoding rate of user ``k`` in nats."""
    _check_dims(model, Q)
    Wk = mui_covariance(model, Q, k)
    full = Wk + _signal(model.H[k], Q[k])
    return logdet(full) - logdet(Wk)


def sum_rate(model, Q):
    """Sum rate ``log det(I + sum_k H_k Q_k H_k^H)`` in nats."""
    return logdet(aggregate_covariance(model, Q))


def precision(model, Q):
    """``W^{-1}`` computed through the eigendecomposition of ``W``."""
    w, U = herm_eig(aggregate_covariance(model, Q))
    return from_eig(1.0 / w, U)


def gradient(model, Q, P_hat=None):
    """Per-user gradients ``V_k = H_k^H W^{-1} H_k`` of the sum rate.

    ``P_hat`` replaces the exact precision ``W^{-1}`` when given (used to
    feed an estimated precision through the same formula).
    """
    Wi = precision(model, Q) if P_hat is None else P_hat
    out = []
    for h in model.H:
        v = h.conj().T @ Wi @ h
        out.append(0.5 * (v + v.conj().T))
    return out


def sample_static_channel(rng, N, M, scale=1.0):
    """``N x M`` matrix of i.i.d. circularly-symmetric complex Gaussian
    entries with variance ``scale**2``."""
    z = rng.standard_normal((N, M)) + 1j * rng.standard_normal((N, M))
    return scale / np.sqrt(2.0) * z


def random_model(rng, K, N, M, P=1.0, scale=1.0):
    """Draw a static model; ``M`` is an int, a per-user sequence, or a
    ``(lo, hi)`` range given as a ``range`` object to sample from."""
    if isinstance(M, range):
        Ms = [int(rng.integers(M.start, M.stop)) for _ in range(K)]
    elif np.ndim(M) == 0:
        Ms = [int(M)] * K
    else:
        Ms = [int(m) for m in M]
    H = [sample_static_channel(rng, N, m, scale) for m in Ms]
    return NetworkModel(tuple(H), P)


def potential_residual(model, Q, k, Qk_alt):
    """Deviation from the potential-game identity for user ``k``.

    Returns ``|[R_k(Q) - R_k(Q')] - [R(Q) - R(Q')]|`` where ``Q'`` swaps
    ``Q_k`` for ``Qk_alt``.
    """
    _check_user(model, k)
    Q_alt = list(Q)
    Q_alt[k] = hermitian(Qk_alt)
    own = user_rate(model, Q, k) - user_rate(model, Q_alt, k)
    total = sum_rate(model, Q) - sum_rate(model, Q_alt)
    return abs(own - total)
