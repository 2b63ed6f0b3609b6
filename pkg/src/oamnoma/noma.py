"""Per-mode power allocation and two-user power-domain NOMA SINRs."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

# A mode whose gain sits this far below the strongest mode is numerically
# indistinguishable from a null (amplitude ratio 1e-10).
DEGENERATE_GAIN_RTOL = 1e-20


class DegenerateModeError(ValueError):
    """An active mode has (numerically) zero channel gain."""

    def __init__(self, mode: int, gain: float):
        self.mode = mode
        self.gain = gain
        super().__init__(
            f"mode {mode} has zero channel gain ({gain:.3e}); the configuration is "
            "rank-deficient, shrink the active mode set"
        )


class PowerConstraint(str, enum.Enum):
    SUM_OF_SQUARES = "sum_of_squares"
    SUM = "sum"


@dataclass(frozen=True)
class PowerSplit:
    """Fractions of each mode's power given to the CCU (``p_1``) and CEU (``p_2``)."""

    ccu_fraction: float
    ceu_fraction: float

    def __post_init__(self):
        problems = split_problems(self.ccu_fraction, self.ceu_fraction)
        if problems:
            raise ValueError("invalid power split: " + "; ".join(problems))


def split_problems(p1, p2) -> list[str]:
    problems = []
    for name, value in (("p_1", p1), ("p_2", p2)):
        if not 0 < value < 1:
            problems.append(f"{name} must lie in (0, 1), got {value!r}")
    if abs(p1 + p2 - 1.0) > 1e-12:
        problems.append(f"p_1 + p_2 must equal 1, got {p1 + p2!r}")
    if not p1 < p2:
        problems.append(f"NOMA ordering requires p_1 < p_2, got p_1={p1!r}, p_2={p2!r}")
    return problems


def allocate_mode_powers(
    total_power: float,
    mode_gains,
    constraint: PowerConstraint | str = PowerConstraint.SUM_OF_SQUARES,
    modes=None,
) -> np.ndarray:
    """Per-mode power ``P_l`` inversely weighted by the mode gain ``|xi_l|^2``.

    ``P_l**2 = (P / g_l) / sum_m (1 / g_m)``, so ``sum_l P_l**2 == P`` and the
    received power ``P_l**2 * g_l`` is the same on every mode.  With
    ``constraint="sum"`` the result is rescaled so that ``sum_l P_l == P``.

    ``modes`` optionally restricts the allocation to a subset of indices; the
    other entries of the returned length-N array are zero.

    Raises
    ------
    DegenerateModeError
        If an allocated mode has zero gain.
    """
    if total_power < 0:
        raise ValueError(f"total_power must be >= 0, got {total_power!r}")
    gains = np.asarray(mode_gains, dtype=float)
    idx = np.arange(gains.size) if modes is None else np.asarray(list(modes), dtype=int)
    active = gains[idx]
    floor = DEGENERATE_GAIN_RTOL * float(np.max(active)) if active.size else 0.0
    for l, g in zip(idx, active):
        if not g > floor:
            raise DegenerateModeError(int(l), float(g))

    inv = 1.0 / active
    powers = np.zeros(gains.size)
    powers[idx] = np.sqrt(total_power * inv / inv.sum())
    if PowerConstraint(constraint) is PowerConstraint.SUM and total_power > 0:
        powers *= total_power / powers.sum()
    return powers


@dataclass(frozen=True, eq=False)
class ModePowerAllocation:
    total_power: float
    per_mode_power: np.ndarray
    noise_variance: float
    per_mode_snr: np.ndarray
    total_snr: float

    @classmethod
    def with_noise(cls, total_power, per_mode_power, noise_variance) -> "ModePowerAllocation":
        if not noise_variance > 0:
            raise ValueError(f"noise_variance must be > 0, got {noise_variance!r}")
        powers = np.asarray(per_mode_power, dtype=float)
        snr = powers / noise_variance
        return cls(float(total_power), powers, float(noise_variance), snr, float(snr.sum()))

    @classmethod
    def with_total_snr(cls, total_power, per_mode_power, total_snr) -> "ModePowerAllocation":
        """Pick the noise variance so the per-mode SNRs add up to ``total_snr``."""
        if total_snr < 0:
            raise ValueError(f"total_snr must be >= 0, got {total_snr!r}")
        powers = np.asarray(per_mode_power, dtype=float)
        if total_snr == 0:
            return cls(float(total_power), powers, np.inf, np.zeros_like(powers), 0.0)
        return cls.with_noise(total_power, powers, powers.sum() / total_snr)


def sinr_ue1_own(rho_l, ccu_mode_gain, split: PowerSplit):
    """SINR of the CCU's own symbol after SIC has removed the CEU symbol."""
    return rho_l * ccu_mode_gain * split.ccu_fraction


def sinr_ue1_ceu_symbol(rho_l, ccu_mode_gain, split: PowerSplit):
    """SINR of the CEU symbol at the CCU, the first SIC stage."""
    x = rho_l * ccu_mode_gain
    return x * split.ceu_fraction / (x * split.ccu_fraction + 1.0)


def sinr_ue2(rho_l, ceu_mode_gain, split: PowerSplit):
    """SINR of the CEU symbol at the CEU, with the CCU symbol treated as noise."""
    x = rho_l * ceu_mode_gain
    return x * split.ceu_fraction / (x * split.ccu_fraction + 1.0)


@dataclass(frozen=True, eq=False)
class SinrReport:
    x1_at_ue1: np.ndarray
    x2_at_ue1: np.ndarray
    x2_at_ue2: np.ndarray


def sinr_report(allocation: ModePowerAllocation, ccu_gains, ceu_gains, split: PowerSplit) -> SinrReport:
    rho = allocation.per_mode_snr
    ccu_gains = np.asarray(ccu_gains, dtype=float)
    ceu_gains = np.asarray(ceu_gains, dtype=float)
    return SinrReport(
        sinr_ue1_own(rho, ccu_gains, split),
        sinr_ue1_ceu_symbol(rho, ccu_gains, split),
        sinr_ue2(rho, ceu_gains, split),
    )
