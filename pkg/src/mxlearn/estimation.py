"""Noisy gradient feedback.

Two routes produce gradient estimates:

* the measurement pipeline, where the receiver samples ``y``, forms a
  bias-adjusted precision estimate and broadcasts it, and each transmitter
  combines it with independent noisy measurements of its own channel;
* a synthetic relative-error model that perturbs a Hermitian matrix by
  zero-mean complex Gaussian noise of prescribed relative Frobenius size.
"""

from dataclasses import dataclass
from math import exp, lgamma

import numpy as np

from .hermitian import from_eig, herm_eig, hermitian, hermitize

__all__ = [
    "EstimatorConfig",
    "sample_signals",
    "sample_covariance",
    "precision_bias_factor",
    "precision_estimate",
    "sample_channels",
    "gradient_estimate",
    "synthetic_noise",
    "synthetic_noise_power",
    "pipeline_feedback",
]


@dataclass(frozen=True)
class EstimatorConfig:
    """Settings for the measurement pipeline.

    ``samples`` is used both for received-signal snapshots and for channel
    measurements per user; ``noise_law`` selects the law of the channel
    measurement error (``"gaussian"`` is conditionally symmetric,
    ``"uniform"`` is bounded).
    """

    samples: int = 64
    channel_error_std: float = 0.0
    noise_law: str = "gaussian"

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("need at least 2 samples")
        if self.channel_error_std < 0:
            raise ValueError("channel_error_std must be nonnegative")
        if self.noise_law not in ("gaussian", "uniform"):
            raise ValueError(f"unknown noise law {self.noise_law!r}")


def _cn(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def _psd_sqrt(A):
    w, U = herm_eig(A)
    return from_eig(np.sqrt(np.clip(w, 0.0, None)), U)


def sample_signals(model, Q, rng, S):
    """Draw ``S`` received vectors ``y = sum_k H_k x_k + z``.

    Returns an ``(S, N)`` array; ``x_k ~ CN(0, Q_k)`` and ``z ~ CN(0, I)``.
    """
    if S < 1:
        raise ValueError("S must be positive")
    y = _cn(rng, (S, model.N))
    for h, q in zip(model.H, Q):
        x = _cn(rng, (S, h.shape[1])) @ _psd_sqrt(q).T
        y += x @ h.T
    return y


def sample_covariance(samples):
    """``(1/S) sum_s y_s y_s^H`` without the ``S/(S-1)`` correction (the
    mean of ``y`` is known to be zero)."""
    y = np.atleast_2d(np.asarray(samples, dtype=complex))
    W = y.T @ y.conj() / y.shape[0]
    return 0.5 * (W + W.conj().T)


def precision_bias_factor(S, N, dof="real"):
    """Scale turning ``inv(W_hat)`` into an unbiased precision estimate.

    ``dof="real"`` gives ``(S - N - 1) / S``, the classical correction for
    the inverse of a real Wishart matrix. For circularly-symmetric complex
    samples the inverse complex Wishart mean calls for ``(S - N) / S``
    (``dof="complex"``).
    """
    offset = {"real": 1, "complex": 0}[dof]
    if S <= N + offset:
        raise ValueError(f"need S > N + {offset} (got S={S}, N={N})")
    return (S - N - offset) / S


def precision_estimate(W_hat, S, N, dof="real"):
    """Bias-adjusted precision estimate ``c(S, N) * inv(W_hat)``.

    See :func:`precision_bias_factor` for ``dof``.
    """
    c = precision_bias_factor(S, N, dof)
    w, U = herm_eig(W_hat)
    if w[0] <= 1e-12 * max(w[-1], 1e-300):
        raise ValueError("sample covariance is singular")
    return from_eig(c / w, U)


def sample_channels(H, rng, config):
    """``S`` independent noisy measurements ``H + err`` of one channel,
    stacked along the first axis."""
    H = np.asarray(H, dtype=complex)
    shape = (config.samples,) + H.shape
    if config.channel_error_std == 0:
        return np.broadcast_to(H, shape).copy()
    if config.noise_law == "gaussian":
        err = _cn(rng, shape)
    else:
        # unit-variance complex noise with independent uniform parts
        a = np.sqrt(6.0) / 2.0
        err = rng.uniform(-a, a, shape) + 1j * rng.uniform(-a, a, shape)
    return H + config.channel_error_std * err


def gradient_estimate(channel_samples, P_hat):
    """Unbiased estimate of ``H^H W^{-1} H`` from ``S >= 2`` independent
    channel measurements and a precision estimate.

    Uses ``[S(S-1)]^{-1} sum_{s != s'} H_s^H P H_{s'}``, evaluated as
    ``(T^H P T - sum_s H_s^H P H_s) / (S(S-1))`` with ``T = sum_s H_s``,
    then hermitized.
    """
    Hs = np.asarray(channel_samples, dtype=complex)
    if Hs.ndim != 3 or Hs.shape[0] < 2:
        raise ValueError("need at least 2 channel samples stacked as (S, N, M)")
    S = Hs.shape[0]
    P_hat = np.asarray(P_hat, dtype=complex)
    T = Hs.sum(axis=0)
    full = T.conj().T @ P_hat @ T
    diag = np.einsum("sji,jk,skl->il", Hs.conj(), P_hat, Hs)
    return hermitize((full - diag) / (S * (S - 1)))


def synthetic_noise(V, eta, rng):
    """Perturb a Hermitian matrix by relative error ``eta``.

    Adds zero-mean Hermitian Gaussian noise ``Z`` (a GUE-type draw) scaled
    so that ``E||Z||_F = eta ||V||_F``. The law of ``Z`` is symmetric and
    independent of the past.
    """
    V = hermitian(V)
    if eta < 0:
        raise ValueError("eta must be nonnegative")
    if eta == 0:
        return V.copy()
    m = V.shape[0]
    Z = hermitize(_cn(rng, (m, m))) / _mean_gue_norm(m)
    return V + eta * np.linalg.norm(V) * Z


def _mean_gue_norm(m):
    # ||hermitize(CN(0,1) m x m)||_F^2 is chi^2 with m^2 dof, halved
    k = m * m
    return exp(lgamma((k + 1) / 2.0) - lgamma(k / 2.0))


def synthetic_noise_power(m):
    """``E||Z||_F^2 / (eta ||V||_F)^2`` for the noise of :func:`synthetic_noise`
    on ``m x m`` matrices (slightly above 1 since the mean norm is fixed)."""
    return (m * m / 2.0) / _mean_gue_norm(m) ** 2


def pipeline_feedback(model, Q, rng, config, dof="real"):
    """Run one round of the measurement pipeline.

    The receiver samples ``config.samples`` signals and broadcasts the
    precision estimate; every user then measures its channel
    ``config.samples`` times (independently of the signal draw).

    Returns
    -------
    P_hat : ndarray
        Broadcast precision estimate.
    V_hat : list of ndarray
        Per-user gradient estimates.
    H_hat : list of ndarray
        Per-user average channel measurement.
    """
    S = config.samples
    y = sample_signals(model, Q, rng, S)
    P_hat = precision_estimate(sample_covariance(y), S, model.N, dof)
    V_hat, H_hat = [], []
    for h in model.H:
        Hs = sample_channels(h, rng, config)
        V_hat.append(gradient_estimate(Hs, P_hat))
        H_hat.append(Hs.mean(axis=0))
    return P_hat, V_hat, H_hat
