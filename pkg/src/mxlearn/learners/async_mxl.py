"""Asynchronous matrix exponential learning with delayed feedback.

At every event ``n`` a subset ``K_n`` of users updates, driven by a
homogeneous Markov chain over subsets; each user ``k`` in ``K_n`` uses its
own step ``gamma_{n_k}`` where ``n_k`` counts its updates so far. The
gradient is evaluated at the stale profile ``(Q_l(n - d_l(n)))_l``.
"""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ..model import gradient
from .mxl import MxlState, init_mxl, mxl_step

__all__ = ["AsyncScheduler", "AmxlState", "init_amxl", "scheduler_next", "amxl_step", "exact_feedback"]


@dataclass
class AsyncScheduler:
    """Update-set chain, per-user counters and bounded random delays.

    kernel
        ``"all"``: every user at every event (no randomness consumed);
        ``"uniform"``: one user drawn uniformly at random;
        ``"sticky"``: one user, repeating the previous one with probability
        ``stay`` and otherwise drawn uniformly.
    delay
        Bound ``D``; delays are uniform on ``{0, ..., D}`` and clipped to
        the available history.
    """

    K: int
    kernel: str = "uniform"
    delay: int = 0
    stay: float = 0.5
    counts: np.ndarray = field(default=None)
    events: int = 0
    current: tuple = ()

    def __post_init__(self):
        if self.K < 1:
            raise ValueError("K must be positive")
        if self.kernel not in ("all", "uniform", "sticky"):
            raise ValueError(f"unknown kernel {self.kernel!r}")
        if self.delay < 0:
            raise ValueError("delay bound must be nonnegative")
        if self.counts is None:
            self.counts = np.zeros(self.K, dtype=int)


def scheduler_next(sched, rng):
    """Advance the chain one event.

    Returns the updating users ``K_n`` (sorted tuple) and the delays
    ``d_k(n)`` for all users; increments ``n_k`` for ``k`` in ``K_n``.
    """
    K = sched.K
    if sched.kernel == "all":
        users = tuple(range(K))
    elif sched.kernel == "uniform" or not sched.current:
        users = (int(rng.integers(K)),)
    else:
        users = sched.current if rng.random() < sched.stay else (int(rng.integers(K)),)
    if sched.delay > 0:
        d = rng.integers(0, sched.delay + 1, size=K)
        d = np.minimum(d, sched.events)
    else:
        d = np.zeros(K, dtype=int)
    sched.current = users
    sched.counts[list(users)] += 1
    sched.events += 1
    return users, d


@dataclass(frozen=True)
class AmxlState:
    mxl: MxlState
    history: deque

    @property
    def Q(self):
        return self.mxl.Q

    @property
    def Y(self):
        return self.mxl.Y


def init_amxl(model, delay):
    st = init_mxl(model)
    return AmxlState(st, deque([st.Q], maxlen=delay + 1))


def exact_feedback(model, Q, rng):
    return gradient(model, Q)


def amxl_step(state, sched, model, schedule, rng, feedback=exact_feedback):
    """Process one update event.

    ``feedback(model, Q_stale, rng)`` returns gradient estimates for all
    users at the stale profile; only users in ``K_n`` use theirs.
    """
    users, d = scheduler_next(sched, rng)
    hist = state.history
    if np.any(d >= len(hist)):
        raise ValueError(f"requested delay {int(d.max())} exceeds buffer of {len(hist)} profiles")
    stale = [hist[-1 - d[l]][l] for l in range(model.K)]
    V_hat = feedback(model, stale, rng)
    gammas = np.array([schedule(max(int(c), 1)) for c in sched.counts])
    new = mxl_step(state.mxl, V_hat, gammas, users=users)
    history = deque(hist, maxlen=hist.maxlen)
    history.append(new.Q)
    return AmxlState(new, history), users
