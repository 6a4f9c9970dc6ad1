"""Run a scenario and record its trace.

Seeding: the scenario seed is split with :class:`numpy.random.SeedSequence`
into independent streams for the topology (antenna counts and initial
channels), the channel evolution, the feedback noise, the update
scheduler, the ergodic sample pool and the pre-pass that sizes the
measurement bound ``L``. Two scenarios that differ only in
the algorithm therefore see the same channels and the same noise draws.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from ..estimation import pipeline_feedback, synthetic_noise
from ..fading import jakes_advance, jakes_init
from ..hermitian import fenchel_coupling, from_eig
from ..learners import (
    AsyncScheduler,
    StepSchedule,
    amxl_step,
    exl_step_backoff,
    init_amxl,
    init_exl,
    init_mxl,
    mxl_step,
)
from ..model import NetworkModel, gradient, precision, sample_static_channel, sum_rate, uniform_profile
from ..oracle import ChannelPool, fw_gap, solve_capacity
from ..waterfilling import covariance_from_precision, iwf_step, swf_step
from .metrics import iterations_to_fraction, measurement_bound

__all__ = ["Trace", "CSV_COLUMNS", "PREPASS_DRAWS", "run_scenario", "draw_antennas", "tune_constant_step"]

CSV_COLUMNS = ("n", "R_n", "Rbar_n", "r_n", "fw_gap", "fenchel", "wall_ms")

_TOPOLOGY, _CHANNEL, _NOISE, _SCHEDULER, _POOL, _PREPASS = range(6)

# gradient-estimate draws used to size L (see measurement_bound)
PREPASS_DRAWS = 100


@dataclass
class Trace:
    """Per-iteration record of one run; row ``n = 0`` is the initial profile.

    Attributes
    ----------
    scenario : dict
        Echo of the scenario (``Scenario.to_dict()``).
    R_max, R_0 : float
        Oracle sum capacity (NaN without oracle or under fading) and the
        uniform-profile rate at ``n = 0``.
    L : float
        Measurement bound for the mean guarantee, from a pre-pass of
        :data:`PREPASS_DRAWS` gradient estimates at the uniform profile.
    M : tuple of int
        Antenna counts actually drawn.
    R, Rbar, r, fw_gap, fenchel, wall_ms, gammas : ndarray
        Columns indexed by ``n``; ``gammas[0]`` is 0.
    R_uniform, R_oracle : ndarray
        Uniform-profile rate and per-step capacity at each ``n`` (fading
        runs; ``R_oracle`` is NaN without oracle).
    """

    scenario: dict
    R_max: float
    R_0: float
    L: float
    M: tuple
    R: np.ndarray
    Rbar: np.ndarray
    r: np.ndarray
    fw_gap: np.ndarray
    fenchel: np.ndarray
    wall_ms: np.ndarray
    gammas: np.ndarray
    R_uniform: np.ndarray = None
    R_oracle: np.ndarray = None
    Q_final: list = field(default=None, repr=False)
    Q_avg: list = field(default=None, repr=False)
    Q_star: list = field(default=None, repr=False)

    @property
    def n(self):
        return np.arange(self.R.size)

    def __len__(self):
        return self.R.size

    def records(self):
        """Rows in :data:`CSV_COLUMNS` order."""
        cols = (self.R, self.Rbar, self.r, self.fw_gap, self.fenchel, self.wall_ms)
        return [(i, *(float(c[i]) for c in cols)) for i in range(self.R.size)]

    def iterations_to(self, fraction=0.99):
        if not np.isfinite(self.R_max):
            return None
        return iterations_to_fraction(self.R, self.R_max, fraction)


def draw_antennas(M, K, rng):
    """Resolve a scenario's antenna spec to one count per user."""
    if isinstance(M, range):
        return tuple(int(rng.integers(M.start, M.stop)) for _ in range(K))
    if isinstance(M, tuple):
        return tuple(int(m) for m in M)
    return (int(M),) * K


class _Feedback:
    """Noisy gradient and aggregate-covariance feedback for one run."""

    def __init__(self, noise, rng):
        self.noise = noise
        self.rng = rng

    def __call__(self, model, Q):
        """Return gradient estimates and the receiver's covariance estimate
        (``None`` means exact)."""
        kind = self.noise.kind
        if kind == "none":
            return gradient(model, Q), None
        if kind == "synthetic" and self.noise.target == "gradient":
            return [synthetic_noise(v, self.noise.eta, self.rng) for v in gradient(model, Q)], None
        if kind == "synthetic":
            P_hat = synthetic_noise(precision(model, Q), self.noise.eta, self.rng)
            return gradient(model, Q, P_hat), covariance_from_precision(P_hat)
        P_hat, V_hat, _ = pipeline_feedback(model, Q, self.rng, self.noise.estimator)
        return V_hat, covariance_from_precision(P_hat)


class _Channels:
    """Channel sequence of a run: ``model(n)`` is the realization used at
    iteration ``n`` (``n = 0`` for the initial row)."""

    def __init__(self, cfg, Ms, rngs):
        c = cfg.channel
        self.cfg = cfg
        self.P = np.broadcast_to(np.asarray(cfg.P, dtype=float), (cfg.K,))
        self.Ms = Ms
        self.rng = rngs[_CHANNEL]
        topo = rngs[_TOPOLOGY]
        self.pool = None
        if c.mode == "jakes":
            self.fading = jakes_init(topo, cfg.N, Ms, c.velocity, c.carrier, c.oscillators)
            self.current = self._jakes_model()
        else:
            self.current = NetworkModel(tuple(sample_static_channel(topo, cfg.N, m, c.scale) for m in Ms), self.P)
        if c.mode == "iid":
            pool_rng = rngs[_POOL]
            draws = [[sample_static_channel(pool_rng, cfg.N, m, c.scale) for m in Ms] for _ in range(c.pool)]
            self.pool = ChannelPool([np.stack([d[k] for d in draws]) for k in range(cfg.K)], self.P)

    def _jakes_model(self):
        return NetworkModel(tuple(self.cfg.channel.scale * h for h in self.fading.H), self.P)

    def advance(self):
        mode = self.cfg.channel.mode
        if mode == "jakes":
            self.fading = jakes_advance(self.fading, self.cfg.channel.period)
            self.current = self._jakes_model()
        elif mode == "iid":
            H = tuple(sample_static_channel(self.rng, self.cfg.N, m, self.cfg.channel.scale) for m in self.Ms)
            self.current = NetworkModel(H, self.P)
        return self.current

    def objective(self):
        """Model or pool on which rates and gaps are evaluated."""
        return self.pool if self.pool is not None else self.current

    def rate(self, Q):
        if self.pool is not None:
            return self.pool.rate(Q)
        return sum_rate(self.current, Q)


def _scores_from_eig(state):
    with np.errstate(divide="ignore"):
        return [from_eig(np.log(q / q.sum()), U) for q, U in zip(state.q, state.U)]


def _coupling(Q_star, Y, P):
    return float(sum(p * fenchel_coupling(qs / p, y) for qs, y, p in zip(Q_star, Y, P)))


def run_scenario(cfg, timing=False, diagnostics=True):
    """Run ``cfg`` and return its :class:`Trace`.

    One row is logged per iteration (per update event for ``"mxl-a"``;
    per single-user update for ``"iwf"``). ``Rbar`` weighs rates by the
    step sizes actually used (unit weights for water-filling). With
    ``timing`` the ``wall_ms`` column holds elapsed milliseconds; it is
    zero otherwise so that traces are reproducible byte for byte.
    ``diagnostics=False`` leaves the ``fw_gap`` and ``fenchel`` columns
    as NaN, except for the gap on the last row and wherever ``cfg.tol``
    needs it; this roughly halves the cost of long runs.
    """
    cfg.validate()
    start = time.perf_counter()
    rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(cfg.seed).spawn(6)]
    Ms = draw_antennas(cfg.M, cfg.K, rngs[_TOPOLOGY])
    channels = _Channels(cfg, Ms, rngs)
    feedback = _Feedback(cfg.noise, rngs[_NOISE])
    schedule = cfg.schedule.fresh()
    fading = cfg.channel.mode == "jakes"
    model = channels.current
    P = model.P

    prepass = _Feedback(cfg.noise, rngs[_PREPASS])
    Q_unif = uniform_profile(model)
    L = measurement_bound([prepass(model, Q_unif)[0] for _ in range(PREPASS_DRAWS)], P)

    Q_star, R_max = None, np.nan
    if cfg.oracle and not fading:
        sol = solve_capacity(channels.objective())
        Q_star, R_max = sol.Q, sol.rate

    algo = cfg.algorithm
    state = None
    if algo == "mxl":
        state = init_mxl(model)
        Q = list(state.Q)
    elif algo == "mxl-a":
        state = init_amxl(model, cfg.delay)
        sched = AsyncScheduler(cfg.K, cfg.kernel, cfg.delay, cfg.stay)
        Q = list(state.Q)
    elif algo == "mxl-eig":
        state = init_exl(model, rngs[_SCHEDULER])
        Q = list(state.Q)
    else:
        Q = uniform_profile(model)

    rows = {k: [] for k in ("R", "gap", "fenchel", "wall", "gamma", "R_unif", "R_orc")}

    def log(Q, gamma):
        obj = channels.objective()
        rows["R"].append(channels.rate(Q))
        rows["gap"].append(fw_gap(obj, Q) if diagnostics or cfg.tol is not None else np.nan)
        rows["gamma"].append(gamma)
        if not diagnostics:
            rows["fenchel"].append(np.nan)
        elif Q_star is not None and algo in ("mxl", "mxl-a"):
            rows["fenchel"].append(_coupling(Q_star, state.Y, P))
        elif Q_star is not None and algo == "mxl-eig":
            rows["fenchel"].append(_coupling(Q_star, _scores_from_eig(state), P))
        else:
            rows["fenchel"].append(np.nan)
        rows["wall"].append((time.perf_counter() - start) * 1e3 if timing else 0.0)
        m = channels.current
        if cfg.channel.mode == "static" and rows["R_unif"]:
            rows["R_unif"].append(rows["R_unif"][0])
        else:
            rows["R_unif"].append(channels.rate(uniform_profile(m)))
        if fading:
            rows["R_orc"].append(solve_capacity(m).rate if cfg.oracle else np.nan)

    log(Q, 0.0)
    Q_sum = [np.zeros_like(q) for q in Q]
    for n in range(1, cfg.iterations + 1):
        model = channels.advance()
        if algo == "mxl":
            gamma = schedule(n)
            V, _ = feedback(model, list(state.Q))
            state = mxl_step(state, V, gamma)
            Q = list(state.Q)
        elif algo == "mxl-a":
            state, users = amxl_step(state, sched, model, schedule, rngs[_SCHEDULER],
                                     feedback=lambda m, q, _rng: feedback(m, q)[0])
            gamma = float(np.mean([schedule(int(sched.counts[k])) for k in users]))
            Q = list(state.Q)
        elif algo == "mxl-eig":
            V, _ = feedback(model, list(state.Q))
            state, gamma = exl_step_backoff(state, V, schedule(n))
            Q = list(state.Q)
        elif algo == "iwf":
            _, W = feedback(model, Q)
            Q = iwf_step(model, Q, (n - 1) % cfg.K, W)
            gamma = 1.0
        else:
            _, W = feedback(model, Q)
            Q = swf_step(model, Q, W)
            gamma = 1.0
        Q_sum = [s + gamma * q for s, q in zip(Q_sum, Q)]
        log(Q, gamma)
        schedule.observe(n, rows["R"][-1])
        if cfg.tol is not None and rows["gap"][-1] <= cfg.tol:
            break

    if np.isnan(rows["gap"][-1]):
        rows["gap"][-1] = fw_gap(channels.objective(), Q)
    R = np.array(rows["R"])
    g = np.array(rows["gamma"])
    Rbar = R.copy()
    t = np.cumsum(g[1:])
    Rbar[1:] = np.cumsum(g[1:] * R[1:]) / t
    R_unif = np.array(rows["R_unif"])
    R_0 = float(R_unif[0])
    r = R / R_unif if fading else R / R_0
    T = t[-1] if t.size else 0.0
    return Trace(
        scenario=cfg.to_dict(),
        R_max=float(R_max),
        R_0=R_0,
        L=L,
        M=Ms,
        R=R,
        Rbar=Rbar,
        r=r,
        fw_gap=np.array(rows["gap"]),
        fenchel=np.array(rows["fenchel"]),
        wall_ms=np.array(rows["wall"]),
        gammas=g,
        R_uniform=R_unif,
        R_oracle=np.array(rows["R_orc"]) if fading else None,
        Q_final=Q,
        Q_avg=[s / T for s in Q_sum] if T > 0 else list(Q),
        Q_star=Q_star,
    )


def tune_constant_step(cfg, grid=None, horizon=20):
    """Pick a constant step for ``cfg`` without consulting the oracle.

    Each candidate runs noiselessly for ``horizon`` iterations and is
    scored by the mean sum rate over iterations ``1..horizon``, which
    rewards fast ascent and penalizes oscillation. ``grid`` defaults to
    powers of two from 1/16 to 16.
    """
    grid = [2.0**e for e in range(-4, 5)] if grid is None else list(grid)
    base = cfg.replace(noise=type(cfg.noise)(), oracle=False, tol=None, iterations=horizon)
    scores = []
    for gamma in grid:
        trace = run_scenario(base.replace(schedule=StepSchedule("constant", gamma)))
        scores.append(np.mean(trace.R[1:]))
    return grid[int(np.argmax(scores))]
