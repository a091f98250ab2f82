"""Deterministic Monte Carlo trial engine for BER, outage, and throughput.

Trials are processed in fixed-size blocks; block ``i`` draws all of its
randomness from a counter-based generator keyed by ``(master_seed, i)``, so
results are a pure function of (params, plan): bit-identical regardless of
how blocks would be partitioned across workers, and merging block tallies is
associative and order-independent.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .channel import ChannelRealization, EstimationErrorMode, SystemParams, align_phases, sample_realization
from .link import build_rx, ml_detect, sinr
from .specfun import q_func

__all__ = [
    "EstimateResult",
    "TrialPlan",
    "ThroughputResult",
    "MomentCheck",
    "MomentAudit",
    "run_ber",
    "run_outage",
    "run_throughput",
    "moment_audit",
    "hd_baseline",
]

BLOCK = 4096  # trials per RNG block; fixed so results never depend on scheduling
SLOT_SECONDS = 1.0  # time-slot normalization for throughput

_POPCOUNT = np.array([bin(i).count("1") for i in range(1 << 8)], dtype=np.int64)


@dataclasses.dataclass(frozen=True)
class EstimateResult:
    """Monte Carlo tally over Bernoulli trials."""

    trials: int
    events: int
    estimate: float
    std_error: float
    seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.events <= self.trials:
            raise ValueError("events must lie in [0, trials]")


@dataclasses.dataclass(frozen=True)
class TrialPlan:
    """How much to simulate: total trials, optional early-stop event floor."""

    master_seed: int
    n_trials: int
    min_events: int = 0

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError("n_trials must be >= 1")
        if self.min_events < 0:
            raise ValueError("min_events must be >= 0")


@dataclasses.dataclass(frozen=True)
class ThroughputResult:
    """Measured throughput in bits per slot, with the BER tally behind it."""

    value: float
    std_error: float
    ber: EstimateResult


def _block_rng(master_seed: int, block_index: int) -> np.random.Generator:
    key = np.array([np.uint64(master_seed & 0xFFFFFFFFFFFFFFFF), np.uint64(block_index)])
    return np.random.Generator(np.random.Philox(key=key))


def _block_sizes(n_trials: int):
    full, rem = divmod(n_trials, BLOCK)
    for i in range(full):
        yield i, BLOCK
    if rem:
        yield full, rem


def _tally(trials: int, events: int, seed: int) -> EstimateResult:
    estimate = events / trials
    std_error = math.sqrt(estimate * (1.0 - estimate) / trials)
    return EstimateResult(trials=trials, events=events, estimate=estimate, std_error=std_error, seed=seed)


def run_ber(params: SystemParams, plan: TrialPlan) -> EstimateResult:
    """Bit error rate of the full detector path.

    Per trial: draw the active antenna uniformly, sample a realization,
    align the surface, build the received sample, detect, and count bit
    errors under natural binary labeling of antenna indices.  Trials and
    events are counted in bits.
    """
    bits = params.bits_per_symbol
    n_tx = params.n_tx
    bit_trials = 0
    bit_errors = 0
    for block_index, size in _block_sizes(plan.n_trials):
        rng = _block_rng(plan.master_seed, block_index)
        l_true = rng.integers(0, n_tx, size)
        real = sample_realization(params, rng, trials=size)
        gains = align_phases(real, l_true)
        rx = build_rx(real, gains, l_true, params, rng)
        outcome = ml_detect(rx.y, gains, params)
        bit_errors += int(_POPCOUNT[np.bitwise_xor(l_true, outcome.detected)].sum())
        bit_trials += size * bits
        if plan.min_events and bit_errors >= plan.min_events:
            break
    return _tally(bit_trials, bit_errors, plan.master_seed)


def _sample_aligned_chi(params: SystemParams, rng: np.random.Generator, size: int) -> np.ndarray:
    # Outage events depend on the realization only through the aligned gain
    # chi_l = sum_n a_n b_{n,l}, so draw just that marginal for speed.
    n = params.n_elements
    a = rng.rayleigh(math.sqrt(0.5), (size, n))
    b = rng.rayleigh(math.sqrt(0.5), (size, n))
    return np.einsum("tn,tn->t", a, b)


def run_outage(params: SystemParams, rate_bps: float, plan: TrialPlan) -> EstimateResult:
    """Outage frequency: SINR at or below the threshold implied by the
    target rate, gamma_th = 2^(rate - log2(N_t)) - 1."""
    gamma_th = 2.0 ** (rate_bps - params.bits_per_symbol) - 1.0
    rho = params.rho
    denom = rho * (1.0 - params.xi2) * params.n_elements * params.sigma_e2 + rho * params.li_level + 1.0
    gain_scale = rho * params.xi2 / denom
    trials = 0
    events = 0
    for block_index, size in _block_sizes(plan.n_trials):
        rng = _block_rng(plan.master_seed, block_index)
        chi = _sample_aligned_chi(params, rng, size)
        events += int(np.count_nonzero(gain_scale * chi**2 <= gamma_th))
        trials += size
        if plan.min_events and events >= plan.min_events:
            break
    return _tally(trials, events, plan.master_seed)


def run_throughput(params: SystemParams, plan: TrialPlan) -> ThroughputResult:
    """Measured throughput (1 - BER) * log2(N_t) / T_s with T_s = 1 slot."""
    ber = run_ber(params, plan)
    bits = params.bits_per_symbol
    value = (1.0 - ber.estimate) * bits / SLOT_SECONDS
    return ThroughputResult(value=value, std_error=bits * ber.std_error / SLOT_SECONDS, ber=ber)


@dataclasses.dataclass(frozen=True)
class MomentCheck:
    """One empirical-vs-theoretical comparison; ``error`` is relative to the
    theoretical value, or absolute when the target is zero on a unit scale."""

    name: str
    empirical: float
    theoretical: float
    error: float


@dataclasses.dataclass(frozen=True)
class MomentAudit:
    n_elements: int
    samples: int
    checks: tuple[MomentCheck, ...]

    def by_name(self, name: str) -> MomentCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)

    def worst_error(self) -> float:
        """Largest error across the moment checks.  The Gaussian-fit distance
        is a model diagnostic on its own scale, not an estimator error, and
        is excluded here."""
        return max(check.error for check in self.checks if check.name != "chi_gaussian_ks")


def _check(name: str, empirical: float, theoretical: float) -> MomentCheck:
    scale = abs(theoretical) if theoretical != 0 else 1.0
    return MomentCheck(name, float(empirical), float(theoretical), abs(empirical - theoretical) / scale)


def moment_audit(n_elements: int, samples: int, seed: int = 0) -> MomentAudit:
    """Empirical check of the Gaussian-limit statistics the analytical chain
    rests on: aligned-gain moments, detection-difference moments, the
    per-element misaligned-term statistics, and a Gaussian-fit distance for
    the aligned gain (which flags small-N departures from normality).
    """
    if samples < 10_000:
        raise ValueError("moment_audit needs at least 1e4 samples")
    n = n_elements
    params = SystemParams(n_elements=n, n_tx=2, err_mode=EstimationErrorMode.perfect())
    chi_sum = 0.0
    chi_sq = 0.0
    u_sum = 0.0 + 0.0j
    u_abs2 = 0.0
    elem_sum = 0.0 + 0.0j
    elem_abs2 = 0.0
    elem_count = 0
    chi_all = np.empty(samples)
    done = 0
    block_index = 0
    while done < samples:
        size = min(BLOCK, samples - done)
        rng = _block_rng(seed, block_index)
        real = sample_realization(params, rng, trials=size)
        gains = align_phases(real, 0)
        chi = gains.chi[:, 0]
        u = chi - gains.mismatch[:, 0, 1]
        chi_all[done : done + size] = chi
        chi_sum += chi.sum()
        chi_sq += (chi**2).sum()
        u_sum += u.sum()
        u_abs2 += (np.abs(u) ** 2).sum()
        elem = real.b[:, 1, :] * np.exp(1j * (real.theta_g[:, 0, :] - real.theta_g[:, 1, :]))
        elem_sum += elem.sum()
        elem_abs2 += (np.abs(elem) ** 2).sum()
        elem_count += elem.size
        done += size
        block_index += 1
    mean_chi = chi_sum / samples
    var_chi = chi_sq / samples - mean_chi**2
    mean_u = u_sum / samples
    var_u = u_abs2 / samples - abs(mean_u) ** 2
    mean_elem = elem_sum / elem_count
    var_elem = elem_abs2 / elem_count - abs(mean_elem) ** 2
    mu_th = n * math.pi / 4.0
    var_th = n * (16.0 - math.pi**2) / 16.0
    std_chi = (chi_all - mu_th) / math.sqrt(var_th)
    # KS distance of the standardized aligned gain against the normal law
    z = np.sort((chi_all - mean_chi) / math.sqrt(var_chi))
    cdf = 1.0 - q_func(z)
    grid = np.arange(1, samples + 1) / samples
    ks = float(np.max(np.maximum(np.abs(grid - cdf), np.abs(grid - 1.0 / samples - cdf))))
    checks = (
        _check("chi_mean", mean_chi, mu_th),
        _check("chi_var", var_chi, var_th),
        _check("u_mean", mean_u.real, n * math.pi / 4.0),
        _check("u_var", var_u, n * (32.0 - math.pi**2) / 16.0),
        _check("standardized_mean", float(std_chi.mean()), 0.0),
        _check("standardized_var", float(std_chi.var()), 1.0),
        _check("element_mean", abs(mean_elem), 0.0),
        _check("element_var", var_elem, 1.0),
        _check("chi_gaussian_ks", ks, 0.0),
    )
    return MomentAudit(n_elements=n, samples=samples, checks=checks)


def hd_baseline(params: SystemParams) -> SystemParams:
    """Half-duplex comparison convention: no loop interference, and the
    antenna set squared so both systems carry equal bits per channel use
    across the two-way exchange."""
    return dataclasses.replace(params, li_level=0.0, n_tx=params.n_tx**2)
