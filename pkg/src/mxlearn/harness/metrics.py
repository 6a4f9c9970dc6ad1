"""Performance metrics computed from traces."""

import numpy as np

__all__ = [
    "normalized_throughput",
    "weighted_average",
    "mean_guarantee_eps",
    "outage_frequency",
    "iterations_to_fraction",
    "measurement_bound",
]


def normalized_throughput(R_n, R_0):
    """Throughput gain ``R_n / R_0`` over the uniform profile."""
    return np.asarray(R_n, dtype=float) / R_0


def weighted_average(R, gammas):
    """Running averages ``sum_{j<=n} gamma_j R_j / sum_{j<=n} gamma_j``."""
    R = np.asarray(R, dtype=float)
    g = np.asarray(gammas, dtype=float)
    return np.cumsum(g * R) / np.cumsum(g)


def mean_guarantee_eps(schedule, M, L, n):
    """Mean performance guarantee after ``n`` updates.

    ``eps_n = (sum_k log M_k + L^2 / 2 * sum_j gamma_j^2) / t_n`` with
    ``t_n = sum_j gamma_j``.

    Parameters
    ----------
    schedule : callable
        ``gamma_j = schedule(j)`` for ``j >= 1``.
    M : sequence of int
    L : float
    n : int or array of int
        Horizon(s); an array returns one value per horizon.
    """
    ns = np.atleast_1d(np.asarray(n, dtype=int))
    if np.any(ns < 1):
        raise ValueError("n must be at least 1")
    g = np.array([schedule(j) for j in range(1, int(ns.max()) + 1)], dtype=float)
    t = np.cumsum(g)[ns - 1]
    s2 = np.cumsum(g**2)[ns - 1]
    eps = (np.sum(np.log(M)) + 0.5 * L**2 * s2) / t
    return float(eps[0]) if np.ndim(n) == 0 else eps


def outage_frequency(traces, z, n, eps):
    """Fraction of runs with ``R_max - Rbar_n >= eps + z``.

    ``traces`` is a sequence of :class:`~mxlearn.harness.runner.Trace`
    (with an oracle). ``eps`` is a scalar shared by all runs or one value
    per run, e.g. each run's :func:`mean_guarantee_eps` at horizon ``n``.
    """
    if not traces:
        raise ValueError("need at least one trace")
    eps = np.broadcast_to(np.asarray(eps, dtype=float), (len(traces),))
    hits = [t.R_max - t.Rbar[n] >= e + z for t, e in zip(traces, eps)]
    return float(np.mean(hits))


def iterations_to_fraction(R, R_max, fraction=0.99):
    """First ``n`` with ``R[n] >= fraction * R_max``, or ``None``."""
    idx = np.flatnonzero(np.asarray(R) >= fraction * R_max)
    return int(idx[0]) if idx.size else None


def measurement_bound(draws, P):
    """Empirical ``L = sqrt(sum_k P_k^2 V_k^2)`` for the mean guarantee.

    ``draws`` is a sequence of gradient-estimate lists (one matrix per
    user); ``V_k^2`` is the largest observed ``||V_hat_k||_F^2``.
    """
    V2 = np.zeros(len(P))
    for V in draws:
        V2 = np.maximum(V2, [np.linalg.norm(v) ** 2 for v in V])
    return float(np.sqrt(np.sum(np.asarray(P, dtype=float) ** 2 * V2)))
