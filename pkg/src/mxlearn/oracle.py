"""Reference solutions of the sum-rate problem with optimality certificates.

The certificate is the Frank-Wolfe gap

    gap(Q) = sum_k [P_k lambda_max(V_k) - tr(Q_k V_k)],

which bounds ``R_max - R(Q)`` from above by concavity and vanishes exactly
at maximizers.
"""

from typing import NamedTuple

import numpy as np

from .hermitian import exp_map, herm_eig
from .learners.schedules import optimal_constant_step
from .model import NetworkModel, uniform_profile
from .waterfilling import iwf_step

__all__ = [
    "ChannelPool",
    "CapacitySolution",
    "fw_gap",
    "solve_capacity",
    "solve_ergodic_capacity",
    "step_constant",
]


class ChannelPool:
    """Sum rate averaged over a fixed pool of channel draws.

    ``H[k]`` has shape ``(S, N, M_k)``; a static model is a pool of one.
    """

    def __init__(self, H, P):
        self.H = [np.asarray(h, dtype=complex) for h in H]
        if any(h.ndim != 3 for h in self.H):
            raise ValueError("pooled channels must have shape (S, N, M_k)")
        self.P = np.asarray(P, dtype=float)
        self.S, self.N = self.H[0].shape[:2]
        self.M = tuple(h.shape[2] for h in self.H)
        self.K = len(self.H)

    @classmethod
    def from_model(cls, model):
        return cls([h[None] for h in model.H], model.P)

    def _W(self, Q):
        W = np.broadcast_to(np.eye(self.N, dtype=complex), (self.S, self.N, self.N)).copy()
        for h, q in zip(self.H, Q):
            W += h @ q @ h.conj().transpose(0, 2, 1)
        return 0.5 * (W + W.conj().transpose(0, 2, 1))

    def rate(self, Q):
        w = np.linalg.eigvalsh(self._W(Q))
        return float(np.log(w).sum(axis=1).mean())

    def gradient(self, Q):
        w, U = np.linalg.eigh(self._W(Q))
        Wi = (U / w[:, None, :]) @ U.conj().transpose(0, 2, 1)
        out = []
        for h in self.H:
            v = (h.conj().transpose(0, 2, 1) @ Wi @ h).mean(axis=0)
            out.append(0.5 * (v + v.conj().T))
        return out


def _as_pool(obj):
    return obj if isinstance(obj, ChannelPool) else ChannelPool.from_model(obj)


def fw_gap(model, Q, V=None):
    """Frank-Wolfe gap of profile ``Q`` (model or :class:`ChannelPool`)."""
    pool = _as_pool(model)
    if V is None:
        V = pool.gradient(Q)
    gap = 0.0
    for p, q, v in zip(pool.P, Q, V):
        top = herm_eig(v).eigenvalues[-1]
        gap += p * top - np.real(np.sum(q * v.conj()))
    return max(float(gap), 0.0)


class CapacitySolution(NamedTuple):
    Q: list
    rate: float
    gap: float
    iterations: int
    converged: bool


def step_constant(pool, Q):
    """``L = sqrt(sum_k P_k^2 ||V_k||_F^2)`` at ``Q``."""
    V = pool.gradient(Q)
    return float(np.sqrt(sum(p**2 * np.linalg.norm(v) ** 2 for p, v in zip(pool.P, V))))


def solve_capacity(model, tol=1e-8, max_iter=20000, gamma0=None, schedule="adaptive", method="auto"):
    """Maximize the (pooled) sum rate and certify the result.

    method
        ``"mxl"``: noiseless matrix exponential learning (below);
        ``"iwf"``: round-robin water-filling sweeps, only for a single
        static channel, where each sweep is exact block ascent;
        ``"auto"``: ``"iwf"`` for a static model, ``"mxl"`` for a pool.

    Either way the loop stops once the Frank-Wolfe gap reaches ``tol``,
    so the returned certificate does not depend on the method. The MXL
    solver starts from the uniform profile with ``gamma0`` (default: the
    single-step optimal constant step).

    schedule
        ``"adaptive"`` (default): constant step that grows by 1.5 after
        every accepted step and is halved whenever the trial point
        ``Q'`` has ``sum_k tr[V_k(Q') (Q'_k - Q_k)] < 0``. By concavity an
        accepted step never lowers the sum rate, and the test stays
        meaningful long after rate differences drop below round-off.
        If the step collapses below 1e-12 the solver stops early.
        ``"sqrt"``: plain ``gamma0 / sqrt(n)``.

    When ``max_iter`` is exhausted the last iterate is returned with
    ``converged=False``.
    """
    pool = _as_pool(model)
    if method == "auto":
        method = "iwf" if pool.S == 1 else "mxl"
    if method == "iwf":
        return _solve_iwf(pool, tol, max_iter)
    if method != "mxl":
        raise ValueError(f"unknown method {method!r}")
    Y = [np.zeros((m, m), dtype=complex) for m in pool.M]
    Q = [exp_map(y, p) for y, p in zip(Y, pool.P)]
    V = pool.gradient(Q)
    if gamma0 is None:
        gamma0 = optimal_constant_step(step_constant(pool, Q), pool.M, 1)
    gamma = gamma0
    n = 0
    gap = fw_gap(pool, Q, V)
    while gap > tol and n < max_iter:
        n += 1
        if schedule == "sqrt":
            Y = [_center(y + gamma0 / np.sqrt(n) * v) for y, v in zip(Y, V)]
            Q = [exp_map(y, p) for y, p in zip(Y, pool.P)]
            V = pool.gradient(Q)
        else:
            while gamma >= 1e-12:
                Yt = [_center(y + gamma * v) for y, v in zip(Y, V)]
                Qt = [exp_map(y, p) for y, p in zip(Yt, pool.P)]
                Vt = pool.gradient(Qt)
                # tr(Q' - Q) = 0, so centering V' leaves the slope unchanged
                # while removing the round-off of its isotropic part
                slope = sum(np.real(np.sum((qt - q) * _center(vt).conj())) for q, qt, vt in zip(Q, Qt, Vt))
                if slope >= 0:
                    break
                gamma *= 0.5
            else:
                break  # no admissible step left: report the stall
            Y, Q, V = Yt, Qt, Vt
            gamma *= 1.5
        gap = fw_gap(pool, Q, V)
    return CapacitySolution(Q, pool.rate(Q), gap, n, gap <= tol)


def _solve_iwf(pool, tol, max_sweeps):
    if pool.S != 1:
        raise ValueError("water-filling sweeps need a single static channel")
    model = NetworkModel(tuple(h[0] for h in pool.H), pool.P)
    Q = uniform_profile(model)
    gap = fw_gap(pool, Q)
    n = 0
    while gap > tol and n < max_sweeps:
        n += 1
        for k in range(model.K):
            Q = iwf_step(model, Q, k)
        gap = fw_gap(pool, Q)
    return CapacitySolution(Q, pool.rate(Q), gap, n, gap <= tol)


def _center(Y):
    # the exponential map ignores multiples of the identity
    return Y - np.trace(Y).real / Y.shape[0] * np.eye(Y.shape[0])


def solve_ergodic_capacity(channel_law, P, tol=1e-8, samples=10000, rng=None, max_iter=20000):
    """Sample-average approximation of the ergodic sum-rate problem.

    ``channel_law(rng)`` returns one realization (list of ``H_k``); a pool
    of ``samples`` draws is fixed and the averaged objective is solved with
    :func:`solve_capacity`. Returns the solution and the pool.
    """
    rng = np.random.default_rng() if rng is None else rng
    draws = [channel_law(rng) for _ in range(samples)]
    K = len(draws[0])
    H = [np.stack([d[k] for d in draws]) for k in range(K)]
    pool = ChannelPool(H, np.broadcast_to(np.asarray(P, dtype=float), (K,)))
    return solve_capacity(pool, tol=tol, max_iter=max_iter), pool
