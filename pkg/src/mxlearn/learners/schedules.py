"""Step-size sequences."""

from collections import deque
from dataclasses import dataclass, field

import numpy as np

__all__ = ["StepSchedule", "step_size", "optimal_constant_step", "optimal_constant_guarantee"]

_KINDS = ("constant", "power", "adaptive")


@dataclass
class StepSchedule:
    """Nonincreasing step sizes indexed from ``n = 1``.

    kind
        ``"constant"``: ``gamma``;
        ``"power"``: ``gamma / n**exponent`` with ``exponent`` in (0, 1];
        ``"adaptive"``: ``gamma`` until oscillation is detected, then
        ``gamma * rho`` for the rest of the run. Oscillation means the
        observed rate decreased in ``hits`` of the last ``window``
        iterations; the drop happens at most once.

    The adaptive kind keeps state fed through :meth:`observe`; use
    :meth:`fresh` to get a reset copy for a new run.
    """

    kind: str = "power"
    gamma: float = 1.0
    exponent: float = 1.0
    rho: float = 0.1
    window: int = 5
    hits: int = 3
    _history: deque = field(default=None, init=False, repr=False, compare=False)
    _dropped_after: int = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if self.kind == "power" and not 0 < self.exponent <= 1:
            raise ValueError("exponent must lie in (0, 1]")
        if self.kind == "adaptive" and not 0 < self.rho < 1:
            raise ValueError("rho must lie in (0, 1)")
        self._history = deque(maxlen=self.window + 1)

    def __call__(self, n):
        if n < 1:
            raise ValueError("step index starts at 1")
        if self.kind == "constant":
            return self.gamma
        if self.kind == "power":
            return self.gamma / n**self.exponent
        if self._dropped_after is not None and n > self._dropped_after:
            return self.gamma * self.rho
        return self.gamma

    @property
    def square_summable(self):
        """True when ``sum gamma_n^2 < sum gamma_n = inf``."""
        return self.kind == "power" and 0.5 < self.exponent <= 1

    def observe(self, n, rate):
        """Record the rate reached after step ``n`` (adaptive kind only)."""
        if self.kind != "adaptive" or self._dropped_after is not None:
            return
        self._history.append(rate)
        h = list(self._history)
        drops = sum(b < a for a, b in zip(h, h[1:]))
        if len(h) > self.window and drops >= self.hits:
            self._dropped_after = n

    @property
    def dropped_after(self):
        return self._dropped_after

    def fresh(self):
        return StepSchedule(self.kind, self.gamma, self.exponent, self.rho, self.window, self.hits)

    def to_dict(self):
        d = {"kind": self.kind, "gamma": self.gamma}
        if self.kind == "power":
            d["exponent"] = self.exponent
        if self.kind == "adaptive":
            d.update(rho=self.rho, window=self.window, hits=self.hits)
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def step_size(schedule, n):
    return schedule(n)


def optimal_constant_step(L, M, n):
    """Constant step minimizing the mean guarantee after a fixed horizon
    ``n``: ``sqrt(2 sum_k log M_k / n) / L``."""
    return np.sqrt(2.0 * np.sum(np.log(M)) / n) / L


def optimal_constant_guarantee(L, M, n):
    """Value ``L sqrt(2 sum_k log M_k / n)`` of the guarantee at that step."""
    return L * np.sqrt(2.0 * np.sum(np.log(M)) / n)
