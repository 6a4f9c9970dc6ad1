"""Single-tap Jakes (sum-of-sinusoids) Rayleigh fading for every channel entry.

Each entry is an independent process

    h(t) = Nosc^{-1/2} sum_n exp(j (2 pi f_D t cos(a_n) + phi_n))

with arrival angles ``a_n = (2 pi n + theta) / Nosc`` stratified around
the circle (one random offset ``theta`` per entry) and i.i.d. uniform
phases. The marginal is unit-variance and close to complex Gaussian, and
the autocorrelation is a Riemann sum of ``J0(2 pi f_D tau)``.
"""

from dataclasses import dataclass, replace

import numpy as np

from .model import NetworkModel

__all__ = ["SPEED_OF_LIGHT", "doppler_frequency", "JakesFadingState", "jakes_init", "jakes_advance"]

SPEED_OF_LIGHT = 2.998e8


def doppler_frequency(velocity, carrier):
    """Maximum Doppler shift ``v f / c`` in Hz."""
    return velocity * carrier / SPEED_OF_LIGHT


@dataclass(frozen=True)
class JakesFadingState:
    carrier: float
    velocity: float
    doppler: float
    t: float
    # per user: arrays of shape (N, M_k, Nosc)
    cos_angles: tuple
    phases: tuple

    @property
    def H(self):
        """Channel matrices at the current time."""
        w = 2.0 * np.pi * self.doppler * self.t
        out = []
        for ca, ph in zip(self.cos_angles, self.phases):
            nosc = ca.shape[-1]
            out.append(np.exp(1j * (w * ca + ph)).sum(axis=-1) / np.sqrt(nosc))
        return out

    def model(self, P):
        return NetworkModel(tuple(self.H), P)


def jakes_init(rng, N, M, velocity=5.0, carrier=2e9, oscillators=32, t0=0.0):
    """Fading state for users with ``M[k]`` antennas and ``N`` receive
    antennas."""
    if oscillators < 16:
        raise ValueError("need at least 16 oscillators")
    n = np.arange(oscillators)
    cos_angles, phases = [], []
    for m in M:
        theta = rng.uniform(-np.pi, np.pi, size=(N, m, 1))
        cos_angles.append(np.cos((2.0 * np.pi * n + theta) / oscillators))
        phases.append(rng.uniform(-np.pi, np.pi, size=(N, m, oscillators)))
    return JakesFadingState(
        carrier=float(carrier),
        velocity=float(velocity),
        doppler=doppler_frequency(velocity, carrier),
        t=float(t0),
        cos_angles=tuple(cos_angles),
        phases=tuple(phases),
    )


def jakes_advance(state, dt):
    """Move the fading process forward by ``dt`` seconds."""
    if dt < 0:
        raise ValueError(f"dt must be nonnegative, got {dt}")
    return replace(state, t=state.t + dt)
