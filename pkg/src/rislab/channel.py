"""Random channel generation: Rayleigh links, estimated-vs-true channel
decomposition, optimal per-element phase alignment, and the cascaded gains
consumed by the detector and the analytical chain.

All sampling takes an explicit ``numpy.random.Generator``; every operation
accepts an optional leading batch axis so the Monte Carlo engine can run the
exact same code vectorized over trials.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

__all__ = [
    "EstimationErrorMode",
    "SystemParams",
    "ChannelRealization",
    "CascadeGains",
    "sample_realization",
    "align_phases",
    "phase_diff_pdf",
]

_RAYLEIGH_SCALE = math.sqrt(0.5)  # magnitude of a unit-power complex Gaussian


@dataclasses.dataclass(frozen=True)
class EstimationErrorMode:
    """Channel estimation quality: perfect, fixed variance, or pilot-driven.

    The variable mode models training with ``pilots`` symbols, where the
    estimation error variance shrinks with SNR as 1/(rho*pilots).
    """

    kind: str  # "perfect" | "fixed" | "variable"
    sigma_e2: float = 0.0
    pilots: int = 1

    def __post_init__(self):
        if self.kind not in ("perfect", "fixed", "variable"):
            raise ValueError(f"unknown estimation error mode {self.kind!r}")
        if self.kind == "fixed" and self.sigma_e2 < 0:
            raise ValueError("fixed mode requires sigma_e2 >= 0")
        if self.kind == "variable" and self.pilots < 1:
            raise ValueError("variable mode requires pilots >= 1")

    @classmethod
    def perfect(cls) -> "EstimationErrorMode":
        return cls(kind="perfect")

    @classmethod
    def fixed(cls, sigma_e2: float) -> "EstimationErrorMode":
        return cls(kind="fixed", sigma_e2=float(sigma_e2))

    @classmethod
    def variable(cls, pilots: int) -> "EstimationErrorMode":
        return cls(kind="variable", pilots=int(pilots))

    def resolve(self, rho: float) -> float:
        """Estimation error variance at average SNR ``rho`` (linear)."""
        if self.kind == "perfect":
            return 0.0
        if self.kind == "fixed":
            return self.sigma_e2
        return 1.0 / (rho * self.pilots)


@dataclasses.dataclass(frozen=True)
class SystemParams:
    """Every scalar knob of the link.

    ``snr_db`` is the average SNR rho = P/N0 in dB.  Transmit power and noise
    power are normalized so that rho is carried by ``p_tx`` against a unit
    ``noise_power``; pass ``p_tx`` explicitly only to denormalize.
    """

    n_elements: int
    n_tx: int = 2
    snr_db: float = 0.0
    li_level: float = 0.0  # residual loop-interference level k^2
    err_mode: EstimationErrorMode = EstimationErrorMode.perfect()
    p_tx: float | None = None
    noise_power: float = 1.0

    def __post_init__(self):
        if self.n_elements < 1:
            raise ValueError("n_elements must be a positive integer")
        if self.n_tx < 2:
            raise ValueError("n_tx must be at least 2")
        if self.li_level < 0:
            raise ValueError("li_level must be nonnegative")
        if self.noise_power <= 0:
            raise ValueError("noise_power must be positive")
        if self.p_tx is not None and self.p_tx <= 0:
            raise ValueError("p_tx must be positive")

    @property
    def rho(self) -> float:
        """Average SNR in linear scale."""
        return 10.0 ** (self.snr_db / 10.0)

    @property
    def p_effective(self) -> float:
        """Transmit power; defaults to rho * noise_power."""
        return self.rho * self.noise_power if self.p_tx is None else self.p_tx

    @property
    def sigma_e2(self) -> float:
        """Estimation error variance resolved at this SNR point."""
        return self.err_mode.resolve(self.rho)

    @property
    def xi2(self) -> float:
        """Squared correlation between true and estimated channel, 1/(1+sigma_e2)."""
        return 1.0 / (1.0 + self.sigma_e2)

    @property
    def xi(self) -> float:
        return math.sqrt(self.xi2)

    @property
    def bits_per_symbol(self) -> int:
        b = self.n_tx.bit_length() - 1
        if 1 << b != self.n_tx:
            raise ValueError("n_tx must be a power of two for bit mapping")
        return b


@dataclasses.dataclass(frozen=True)
class ChannelRealization:
    """One draw of all per-element quantities for one link direction.

    ``a``/``psi`` are amplitude and phase of the RIS-to-receiver estimates,
    ``b``/``theta_g`` those of the transmit-array-to-RIS estimates per
    antenna, and ``err`` the complex estimation error samples.  Leading axes
    are batch axes.
    """

    a: np.ndarray        # (..., N) nonnegative amplitudes
    psi: np.ndarray      # (..., N) phases in (-pi, pi]
    b: np.ndarray        # (..., N_t, N) nonnegative amplitudes
    theta_g: np.ndarray  # (..., N_t, N) phases in (-pi, pi]
    err: np.ndarray      # (..., N) complex estimation errors


@dataclasses.dataclass(frozen=True)
class CascadeGains:
    """Cascaded channel gains after RIS phase alignment for one antenna.

    ``chi[..., l]`` is the fully aligned (real, positive) gain when antenna l
    transmits; ``mismatch[..., l, m]`` is the complex gain the detector's
    hypothesis m sees when the surface is aligned for antenna l.  The
    diagonal of ``mismatch`` equals ``chi``.  ``aligned_for`` records which
    antenna the surface is configured for (scalar, or one index per trial).
    """

    chi: np.ndarray       # (..., N_t) real
    mismatch: np.ndarray  # (..., N_t, N_t) complex
    aligned_for: np.ndarray | int

    def hypothesis_row(self) -> np.ndarray:
        """Detector candidate gains: the mismatch row for the aligned antenna."""
        if np.ndim(self.aligned_for) == 0:
            return self.mismatch[..., int(self.aligned_for), :]
        idx = np.asarray(self.aligned_for)[..., None, None]
        return np.take_along_axis(self.mismatch, idx, axis=-2)[..., 0, :]

    def aligned_chi(self) -> np.ndarray:
        """The true aligned gain chi_l for the configured antenna."""
        if np.ndim(self.aligned_for) == 0:
            return self.chi[..., int(self.aligned_for)]
        idx = np.asarray(self.aligned_for)[..., None]
        return np.take_along_axis(self.chi, idx, axis=-1)[..., 0]


def _uniform_phase(rng: np.random.Generator, shape) -> np.ndarray:
    # maps [0,1) draws onto (-pi, pi]
    return np.pi - 2.0 * np.pi * rng.random(shape)


def sample_realization(
    params: SystemParams, rng: np.random.Generator, trials: int | None = None
) -> ChannelRealization:
    """Draw one channel realization (or a batch of ``trials`` of them).

    Amplitudes are Rayleigh with scale 1/sqrt(2) (unit-power complex
    Gaussian magnitudes), phases uniform on (-pi, pi], and estimation errors
    zero-mean complex Gaussian with per-element variance sigma_e2, all
    mutually independent.
    """
    n, n_tx = params.n_elements, params.n_tx
    prefix = () if trials is None else (int(trials),)
    a = rng.rayleigh(_RAYLEIGH_SCALE, prefix + (n,))
    psi = _uniform_phase(rng, prefix + (n,))
    b = rng.rayleigh(_RAYLEIGH_SCALE, prefix + (n_tx, n))
    theta_g = _uniform_phase(rng, prefix + (n_tx, n))
    sigma_e2 = params.sigma_e2
    if sigma_e2 > 0:
        scale = math.sqrt(sigma_e2 / 2.0)
        err = scale * (rng.standard_normal(prefix + (n,)) + 1j * rng.standard_normal(prefix + (n,)))
    else:
        err = np.zeros(prefix + (n,), dtype=complex)
    return ChannelRealization(a=a, psi=psi, b=b, theta_g=theta_g, err=err)


def align_phases(real: ChannelRealization, l: int | np.ndarray) -> CascadeGains:
    """Configure the surface for antenna ``l`` and collect cascade gains.

    Per-element phase shifts cancel psi_n + theta_{n,l} exactly, so the
    aligned gain is chi_l = sum_n a_n b_{n,l} while a wrong hypothesis m
    keeps the residual rotation theta_{n,l} - theta_{n,m} per element.
    ``l`` may be an array with one index per batched trial.
    """
    n_tx = real.b.shape[-2]
    l_arr = np.asarray(l)
    if np.any(l_arr < 0) or np.any(l_arr >= n_tx):
        raise IndexError(f"antenna index out of range for n_tx={n_tx}")
    chi = np.einsum("...n,...ln->...l", real.a, real.b).real
    # mismatch[l, m] = sum_n a_n b_{n,m} e^{i (theta_{n,l} - theta_{n,m})}
    if n_tx == 2:
        # only the phase difference matters, so one exp per element suffices
        rot = np.exp(1j * (real.theta_g[..., 0, :] - real.theta_g[..., 1, :]))
        mismatch = np.empty(chi.shape[:-1] + (2, 2), dtype=complex)
        mismatch[..., 0, 1] = np.einsum("...n,...n,...n->...", real.a, real.b[..., 1, :], rot)
        mismatch[..., 1, 0] = np.einsum("...n,...n,...n->...", real.a, real.b[..., 0, :], rot.conj())
    else:
        phasor = np.exp(1j * real.theta_g)  # (..., N_t, N)
        u = real.a[..., None, :] * phasor
        v = real.b * phasor.conj()
        mismatch = np.einsum("...ln,...mn->...lm", u, v)
    # pin the diagonal to the exactly real aligned gains
    idx = np.arange(n_tx)
    mismatch[..., idx, idx] = chi
    return CascadeGains(chi=chi, mismatch=mismatch, aligned_for=l if np.ndim(l) else int(l))


def phase_diff_pdf(z):
    """Density of the residual phase difference of two independent uniform
    phases, triangular on (-2*pi, 2*pi) with peak 1/(2*pi) at zero.
    """
    z = np.asarray(z, dtype=float)
    two_pi = 2.0 * np.pi
    out = np.where(
        (z > -two_pi) & (z <= 0.0),
        (two_pi + z) / (4.0 * np.pi**2),
        np.where((z > 0.0) & (z < two_pi), (two_pi - z) / (4.0 * np.pi**2), 0.0),
    )
    return out
