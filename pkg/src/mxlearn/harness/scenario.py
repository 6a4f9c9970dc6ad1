"""Scenario description, validation and versioned JSON persistence.

A scenario file is a JSON object with a ``"version"`` field; the current
schema version is :data:`SCHEMA_VERSION`. Example::

    {
      "version": 1,
      "K": 20, "N": 24, "M": {"min": 2, "max": 8}, "P": 1.0,
      "algorithm": "mxl",
      "schedule": {"kind": "constant", "gamma": 2.0},
      "noise": {"kind": "synthetic", "eta": 0.5, "target": "precision"},
      "channel": {"mode": "static"},
      "iterations": 100,
      "seed": 7
    }

``M`` is an int (same for everyone), a list (one per user) or an
inclusive range ``{"min": a, "max": b}`` from which each user's antenna
count is drawn. ``P`` is a float or a list.
"""

import json
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from ..estimation import EstimatorConfig
from ..learners.schedules import StepSchedule

__all__ = [
    "SCHEMA_VERSION",
    "ALGORITHMS",
    "ScenarioError",
    "NoiseConfig",
    "ChannelConfig",
    "Scenario",
    "load_scenario",
    "save_scenario",
]

SCHEMA_VERSION = 1
ALGORITHMS = ("mxl", "mxl-a", "mxl-eig", "iwf", "swf")
_NOISE_KINDS = ("none", "synthetic", "pipeline")
_NOISE_TARGETS = ("gradient", "precision")
_CHANNEL_MODES = ("static", "jakes", "iid")
_KERNELS = ("uniform", "all", "sticky")


class ScenarioError(ValueError):
    """Invalid scenario; the message names the offending field."""

    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class NoiseConfig:
    """Feedback noise.

    kind
        ``"none"``: exact gradients;
        ``"synthetic"``: relative error ``eta`` added to ``target``, either
        every user's gradient or the broadcast precision matrix ``W^{-1}``;
        ``"pipeline"``: sampled signals and channel measurements per
        ``estimator``.
    """

    kind: str = "none"
    eta: float = 0.0
    target: str = "gradient"
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)

    def to_dict(self):
        d = {"kind": self.kind}
        if self.kind == "synthetic":
            d.update(eta=self.eta, target=self.target)
        if self.kind == "pipeline":
            d["estimator"] = asdict(self.estimator)
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if "estimator" in d:
            d["estimator"] = EstimatorConfig(**d["estimator"])
        return cls(**d)


@dataclass(frozen=True)
class ChannelConfig:
    """Channel evolution.

    mode
        ``"static"``: one draw for the whole run;
        ``"jakes"``: Jakes fading advanced by ``period`` seconds per
        iteration;
        ``"iid"``: a fresh Rayleigh draw at every iteration, with the
        ergodic rate estimated on a fixed pool of ``pool`` draws.
    """

    mode: str = "static"
    scale: float = 1.0
    velocity: float = 5.0
    carrier: float = 2e9
    period: float = 5e-3
    oscillators: int = 32
    pool: int = 10000

    def to_dict(self):
        d = {"mode": self.mode, "scale": self.scale}
        if self.mode == "jakes":
            d.update(velocity=self.velocity, carrier=self.carrier, period=self.period,
                     oscillators=self.oscillators)
        if self.mode == "iid":
            d["pool"] = self.pool
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


@dataclass(frozen=True)
class Scenario:
    """Everything needed to reproduce one run.

    Attributes
    ----------
    K, N : int
        Users and receive antennas.
    M : int, tuple of int or range
        Transmit antennas; a ``range`` is sampled per user.
    P : float or tuple of float
        Power budgets.
    algorithm : str
        One of :data:`ALGORITHMS`.
    schedule : StepSchedule
        Step sizes (ignored by the water-filling baselines).
    iterations : int
        Iteration budget (update events for ``"mxl-a"``).
    oracle : bool
        Solve for ``R_max`` and ``Q*`` (static and iid modes) or for the
        per-step capacity (jakes mode).
    tol : float or None
        Early stop once the Frank-Wolfe gap falls to ``tol``.
    kernel, delay, stay
        Update-set chain and delay bound for ``"mxl-a"``.
    """

    K: int = 2
    N: int = 4
    M: object = 2
    P: object = 1.0
    algorithm: str = "mxl"
    schedule: StepSchedule = field(default_factory=lambda: StepSchedule("constant", 1.0))
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    iterations: int = 100
    seed: int = 0
    oracle: bool = True
    tol: object = None
    kernel: str = "uniform"
    delay: int = 0
    stay: float = 0.5

    def __post_init__(self):
        if isinstance(self.M, list):
            object.__setattr__(self, "M", tuple(self.M))
        if isinstance(self.P, list):
            object.__setattr__(self, "P", tuple(self.P))
        self.validate()

    def validate(self):
        for name in ("K", "N", "iterations"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ScenarioError(name, f"must be a positive integer, got {v!r}")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ScenarioError("seed", f"must be a nonnegative integer, got {self.seed!r}")
        M = self.M
        if isinstance(M, range):
            if len(M) == 0 or M.start < 1 or M.step != 1:
                raise ScenarioError("M", f"range must be nonempty, start at >= 1 and have step 1, got {M}")
        elif isinstance(M, tuple):
            if len(M) != self.K or any(int(m) < 1 for m in M):
                raise ScenarioError("M", f"need {self.K} positive entries, got {M}")
        elif not isinstance(M, (int, np.integer)) or M < 1:
            raise ScenarioError("M", f"must be a positive int, list or range, got {M!r}")
        P = np.asarray(self.P, dtype=float)
        if P.ndim > 1 or (P.ndim == 1 and P.size != self.K) or np.any(~(P > 0)):
            raise ScenarioError("P", f"must be positive, scalar or one per user, got {self.P!r}")
        if self.algorithm not in ALGORITHMS:
            raise ScenarioError("algorithm", f"must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if not isinstance(self.schedule, StepSchedule):
            raise ScenarioError("schedule", "must be a StepSchedule")
        n = self.noise
        if n.kind not in _NOISE_KINDS:
            raise ScenarioError("noise.kind", f"must be one of {_NOISE_KINDS}, got {n.kind!r}")
        if n.target not in _NOISE_TARGETS:
            raise ScenarioError("noise.target", f"must be one of {_NOISE_TARGETS}, got {n.target!r}")
        if not n.eta >= 0:
            raise ScenarioError("noise.eta", f"must be nonnegative, got {n.eta!r}")
        if self.algorithm in ("iwf", "swf") and n.kind == "synthetic" and n.target == "gradient":
            raise ScenarioError("noise.target", "water-filling acts on the precision matrix, not on gradients")
        if self.algorithm == "mxl-eig" and n.kind != "none":
            raise ScenarioError("noise.kind", "eigen-based learning runs on exact gradients only")
        c = self.channel
        if c.mode not in _CHANNEL_MODES:
            raise ScenarioError("channel.mode", f"must be one of {_CHANNEL_MODES}, got {c.mode!r}")
        if not c.scale > 0:
            raise ScenarioError("channel.scale", "must be positive")
        if c.mode == "jakes":
            for name in ("velocity", "carrier", "period"):
                if not getattr(c, name) > 0:
                    raise ScenarioError(f"channel.{name}", "must be positive")
            if c.oscillators < 16:
                raise ScenarioError("channel.oscillators", "must be at least 16")
        if c.mode == "iid" and c.pool < 1:
            raise ScenarioError("channel.pool", "must be positive")
        if self.tol is not None and not self.tol > 0:
            raise ScenarioError("tol", f"must be positive or null, got {self.tol!r}")
        if self.kernel not in _KERNELS:
            raise ScenarioError("kernel", f"must be one of {_KERNELS}, got {self.kernel!r}")
        if not isinstance(self.delay, (int, np.integer)) or self.delay < 0:
            raise ScenarioError("delay", f"must be a nonnegative integer, got {self.delay!r}")
        if not 0 <= self.stay <= 1:
            raise ScenarioError("stay", "must lie in [0, 1]")

    def replace(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        d = {"version": SCHEMA_VERSION}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "M":
                v = {"min": v.start, "max": v.stop - 1} if isinstance(v, range) else (
                    list(v) if isinstance(v, tuple) else int(v))
            elif f.name == "P":
                v = [float(p) for p in v] if isinstance(v, tuple) else float(v)
            elif hasattr(v, "to_dict"):
                v = v.to_dict()
            d[f.name] = v
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        version = d.pop("version", None)
        if version != SCHEMA_VERSION:
            raise ScenarioError("version", f"unsupported schema version {version!r} (expected {SCHEMA_VERSION})")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ScenarioError(unknown[0], "unknown field")
        if isinstance(d.get("M"), dict):
            m = d["M"]
            if set(m) != {"min", "max"}:
                raise ScenarioError("M", "a range needs exactly the keys 'min' and 'max'")
            d["M"] = range(int(m["min"]), int(m["max"]) + 1)
        for name, parser in (("schedule", StepSchedule), ("noise", NoiseConfig), ("channel", ChannelConfig)):
            if name in d:
                try:
                    d[name] = parser.from_dict(d[name])
                except (TypeError, ValueError) as exc:
                    raise ScenarioError(name, str(exc)) from None
        return cls(**d)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def load_scenario(path):
    with open(path) as fh:
        return Scenario.from_json(fh.read())


def save_scenario(scenario, path):
    with open(path, "w") as fh:
        fh.write(scenario.to_json() + "\n")
