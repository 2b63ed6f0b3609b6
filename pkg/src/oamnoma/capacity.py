"""Closed-form user and sum capacities (bits/s/Hz, with T normalised to 1)."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .channel import LinkChannel
from .noma import ModePowerAllocation, PowerSplit, SinrReport, sinr_report
from .oam_mux import ModeSet

_LN2 = np.log(2.0)


class Scheme(str, enum.Enum):
    NOMA_OAM_MDMA = "noma_oam_mdma"
    OMA_OAM_MDMA = "oma_oam_mdma"
    CONVENTIONAL_NOMA = "conventional_noma"


class MuMode(str, enum.Enum):
    SINGULAR_VALUE = "singular_value"
    UNITY = "unity"


class OmaTimeFraction(str, enum.Enum):
    # Eight slots regardless of N, as in the original benchmark.
    LITERAL_ONE_EIGHTH = "literal_one_eighth"
    # Modes are spatially concurrent; only the two users are time-split.
    GENERALIZED = "generalized"

    @property
    def share(self) -> float:
        return 0.125 if self is OmaTimeFraction.LITERAL_ONE_EIGHTH else 0.5


@dataclass(frozen=True, eq=False)
class CapacityReport:
    scheme: Scheme
    mode_count: int
    ccu_capacity: float
    ceu_capacity: float
    sum_capacity: float
    ccu_per_mode: np.ndarray
    ceu_per_mode: np.ndarray
    sinr: Optional[SinrReport] = None


def _log2_1p(x):
    # log1p keeps precision for the tiny SINRs typical of far-field links.
    return np.log1p(x) / _LN2


def noma_user_capacity(per_mode_sinr, per_mode_mu) -> float:
    """``sum_l log2(1 + mu_l * gamma_l)``."""
    sinr = np.asarray(per_mode_sinr, dtype=float)
    mu = np.asarray(per_mode_mu, dtype=float)
    if sinr.shape != mu.shape:
        raise ValueError(f"sinr and mu lengths differ: {sinr.shape} vs {mu.shape}")
    return float(np.sum(_log2_1p(mu * sinr)))


def mode_mu(link: LinkChannel, mu_mode: MuMode | str) -> np.ndarray:
    if MuMode(mu_mode) is MuMode.UNITY:
        return np.ones(link.element_count)
    return link.singular_values


def _mask(modes: ModeSet) -> np.ndarray:
    mask = np.zeros(modes.element_count, dtype=bool)
    mask[list(modes)] = True
    return mask


def _check_sizes(ccu_link, ceu_link, allocation, modes):
    n = modes.element_count
    sizes = {ccu_link.element_count, ceu_link.element_count, allocation.per_mode_power.size}
    if sizes != {n}:
        raise ValueError(f"links, allocation and mode set disagree on N: {sorted(sizes)} vs {n}")


def _report(scheme, n, ccu_terms, ceu_terms, sinr=None) -> CapacityReport:
    ccu = float(np.sum(ccu_terms))
    ceu = float(np.sum(ceu_terms))
    return CapacityReport(scheme, n, ccu, ceu, ccu + ceu, ccu_terms, ceu_terms, sinr)


def evaluate_noma(
    ccu_link: LinkChannel,
    ceu_link: LinkChannel,
    allocation: ModePowerAllocation,
    split: PowerSplit,
    modes: ModeSet,
    mu_mode: MuMode | str = MuMode.SINGULAR_VALUE,
) -> CapacityReport:
    """NOMA over every active OAM mode.

    The CCU decodes its own symbol after SIC; the CEU decodes directly,
    treating the CCU symbol as noise.  Inactive modes contribute zero.
    """
    _check_sizes(ccu_link, ceu_link, allocation, modes)
    sinr = sinr_report(allocation, ccu_link.mode_gains, ceu_link.mode_gains, split)
    mask = _mask(modes)
    ccu_terms = np.where(mask, _log2_1p(mode_mu(ccu_link, mu_mode) * sinr.x1_at_ue1), 0.0)
    ceu_terms = np.where(mask, _log2_1p(mode_mu(ceu_link, mu_mode) * sinr.x2_at_ue2), 0.0)
    return _report(Scheme.NOMA_OAM_MDMA, modes.element_count, ccu_terms, ceu_terms, sinr)


def evaluate_oma(
    ccu_link: LinkChannel,
    ceu_link: LinkChannel,
    allocation: ModePowerAllocation,
    split: PowerSplit,
    modes: ModeSet,
    mu_mode: MuMode | str = MuMode.SINGULAR_VALUE,
    time_fraction: OmaTimeFraction | str = OmaTimeFraction.LITERAL_ONE_EIGHTH,
) -> CapacityReport:
    """Time-division benchmark: each user gets the full mode power in its own slot.

    ``split`` is accepted for a uniform call signature and not used.
    """
    _check_sizes(ccu_link, ceu_link, allocation, modes)
    share = OmaTimeFraction(time_fraction).share
    rho = allocation.per_mode_snr
    mask = _mask(modes)
    ccu_snr = mode_mu(ccu_link, mu_mode) * rho * ccu_link.mode_gains
    ceu_snr = mode_mu(ceu_link, mu_mode) * rho * ceu_link.mode_gains
    ccu_terms = np.where(mask, share * _log2_1p(ccu_snr), 0.0)
    ceu_terms = np.where(mask, share * _log2_1p(ceu_snr), 0.0)
    return _report(Scheme.OMA_OAM_MDMA, modes.element_count, ccu_terms, ceu_terms)


def evaluate_conventional_noma(
    ccu_link: LinkChannel,
    ceu_link: LinkChannel,
    allocation: ModePowerAllocation,
    split: PowerSplit,
    mu_mode: MuMode | str = MuMode.SINGULAR_VALUE,
) -> CapacityReport:
    """Single-antenna NOMA baseline: the same pipeline restricted to one element, mode 0.

    The links must already be built with ``element_count == 1``.
    """
    if ccu_link.element_count != 1 or ceu_link.element_count != 1:
        raise ValueError("conventional NOMA needs single-element links")
    report = evaluate_noma(ccu_link, ceu_link, allocation, split, ModeSet.full(1), mu_mode)
    return _report(
        Scheme.CONVENTIONAL_NOMA, 1, report.ccu_per_mode, report.ceu_per_mode, report.sinr
    )
