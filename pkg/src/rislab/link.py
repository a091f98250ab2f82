"""Transceiver path: received-sample construction under imperfect CSI and
residual loop interference, instantaneous SINR, and the ML detector over
antenna hypotheses.

Symbols are fixed to 1; all information rides on the active antenna index.
Every operation accepts the same optional batch axes as :mod:`channel`.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .channel import CascadeGains, ChannelRealization, SystemParams

__all__ = [
    "NoiseParts",
    "RxSample",
    "DetectionOutcome",
    "residual_li_sample",
    "build_rx",
    "ml_detect",
    "sinr",
]


@dataclasses.dataclass(frozen=True)
class NoiseParts:
    """The three additive impairments of one received sample, kept separate
    for diagnostics: estimation-error leakage, residual loop interference,
    and thermal noise."""

    est_err: np.ndarray | complex
    loop_int: np.ndarray | complex
    thermal: np.ndarray | complex

    def total(self):
        return self.est_err + self.loop_int + self.thermal


@dataclasses.dataclass(frozen=True)
class RxSample:
    """Received sample y plus its additive parts; y reconstructs as
    sqrt(P*xi^2)*chi_l + sum of parts to floating precision."""

    y: np.ndarray | complex
    w_parts: NoiseParts


@dataclasses.dataclass(frozen=True)
class DetectionOutcome:
    """ML decision: detected antenna index (argmin of metrics, ties to the
    lowest index) and the per-hypothesis metric values."""

    detected: np.ndarray | int
    metrics: np.ndarray


def residual_li_sample(params: SystemParams, rng: np.random.Generator, trials: int | None = None):
    """Residual loop interference after cancellation: zero-mean complex
    Gaussian with variance li_level * p_tx (exactly zero at li_level 0)."""
    shape = () if trials is None else (int(trials),)
    var = params.li_level * params.p_effective
    scale = math.sqrt(var / 2.0)
    sample = scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    return complex(sample) if trials is None else sample


def build_rx(
    real: ChannelRealization,
    gains: CascadeGains,
    l: int | np.ndarray,
    params: SystemParams,
    rng: np.random.Generator,
) -> RxSample:
    """Construct the received sample for transmit antenna ``l``.

    y = sqrt(P*xi^2)*chi_l
        + sqrt(P*(1-xi^2)) * sum_n err_n * b_{n,l} * exp(i*psi_n)
        + residual loop interference + thermal noise.

    The estimation-error term is drawn per realization (true physics); the
    analytical chain replaces it by its average power downstream.
    """
    p = params.p_effective
    xi2 = params.xi2
    if np.ndim(l) == 0:
        b_row = real.b[..., int(l), :]
        chi_l = gains.chi[..., int(l)]
    else:
        idx = np.asarray(l)[..., None, None]
        b_row = np.take_along_axis(real.b, idx, axis=-2)[..., 0, :]
        chi_l = np.take_along_axis(gains.chi, np.asarray(l)[..., None], axis=-1)[..., 0]
    est = math.sqrt(p * (1.0 - xi2)) * np.einsum(
        "...n,...n->...", real.err * np.exp(1j * real.psi), b_row
    )
    trials = None if est.ndim == 0 else est.shape[0]
    loop = residual_li_sample(params, rng, trials)
    shape = () if trials is None else (trials,)
    thermal_scale = math.sqrt(params.noise_power / 2.0)
    thermal = thermal_scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
    if trials is None:
        est = complex(est)
        thermal = complex(thermal)
    y = math.sqrt(p * xi2) * chi_l + est + loop + thermal
    return RxSample(y=y, w_parts=NoiseParts(est_err=est, loop_int=loop, thermal=thermal))


def ml_detect(y, gains: CascadeGains, params: SystemParams) -> DetectionOutcome:
    """Minimum-distance decision over the aligned hypothesis row:
    metric_m = |y - sqrt(P*xi^2) * mismatch(l, m)|^2."""
    amp = math.sqrt(params.p_effective * params.xi2)
    candidates = gains.hypothesis_row()  # (..., N_t)
    metrics = np.abs(np.asarray(y)[..., None] - amp * candidates) ** 2
    detected = np.argmin(metrics, axis=-1)
    if metrics.ndim == 1:
        return DetectionOutcome(detected=int(detected), metrics=metrics)
    return DetectionOutcome(detected=detected, metrics=metrics)


def sinr(gains: CascadeGains, params: SystemParams):
    """Instantaneous SINR with the estimation-error term at its average
    power: rho*xi^2*chi_l^2 / (rho*(1-xi^2)*N*sigma_e2 + rho*k^2 + 1)."""
    rho = params.rho
    xi2 = params.xi2
    n = params.n_elements
    denom = rho * (1.0 - xi2) * n * params.sigma_e2 + rho * params.li_level + 1.0
    chi_l = gains.aligned_chi()
    return rho * xi2 * chi_l**2 / denom
