"""Turn a :class:`SystemConfig` into links, a power allocation and capacity reports."""

from __future__ import annotations

from dataclasses import dataclass

from .capacity import (
    CapacityReport,
    Scheme,
    evaluate_conventional_noma,
    evaluate_noma,
    evaluate_oma,
)
from .channel import LinkChannel, PropagationParams, UcaGeometry, build_link
from .config import AllocationReference, SystemConfig
from .noma import ModePowerAllocation, PowerSplit, allocate_mode_powers
from .oam_mux import ModeSet


@dataclass(frozen=True, eq=False)
class Scenario:
    config: SystemConfig
    ccu_link: LinkChannel
    ceu_link: LinkChannel
    modes: ModeSet
    allocation: ModePowerAllocation
    split: PowerSplit


def build_links(config: SystemConfig) -> tuple[LinkChannel, LinkChannel]:
    params = PropagationParams(config.wavelength_m, config.beta)
    links = []
    for distance in (config.ccu_distance_m, config.ceu_distance_m):
        geometry = UcaGeometry(
            config.mode_count, config.tx_radius_m, config.rx_radius_m, distance
        )
        links.append(build_link(params, geometry, config.phase_distance_mode))
    return links[0], links[1]


def resolve(config: SystemConfig) -> Scenario:
    """Build both links and allocate power over the active modes.

    With an SNR target the noise variance is chosen so that the per-mode
    transmit SNRs sum to that target.

    Raises
    ------
    DegenerateModeError
        If an active mode of the allocation reference link has zero gain.
    """
    ccu_link, ceu_link = build_links(config)
    modes = ModeSet(config.modes, config.mode_count)
    reference = ccu_link if config.allocation_reference == AllocationReference.CCU.value else ceu_link
    powers = allocate_mode_powers(
        config.total_power, reference.mode_gains, config.power_constraint, modes
    )
    if config.snr_db is not None:
        allocation = ModePowerAllocation.with_total_snr(config.total_power, powers, config.snr_linear)
    else:
        allocation = ModePowerAllocation.with_noise(config.total_power, powers, config.noise_variance)
    return Scenario(config, ccu_link, ceu_link, modes, allocation, PowerSplit(config.p_1, config.p_2))


def evaluate_scheme(config: SystemConfig, scheme: Scheme | str, mode_count: int | None = None) -> CapacityReport:
    """Capacity of one scheme; ``mode_count`` overrides the configured N.

    Conventional NOMA always runs on single-element arrays.
    """
    scheme = Scheme(scheme)
    if scheme is Scheme.CONVENTIONAL_NOMA:
        mode_count = 1
    if mode_count is not None:
        config = config.with_mode_count(mode_count)
    sc = resolve(config)
    args = (sc.ccu_link, sc.ceu_link, sc.allocation, sc.split)
    if scheme is Scheme.NOMA_OAM_MDMA:
        return evaluate_noma(*args, sc.modes, config.mu_mode)
    if scheme is Scheme.OMA_OAM_MDMA:
        return evaluate_oma(*args, sc.modes, config.mu_mode, config.oma_time_fraction)
    return evaluate_conventional_noma(*args, config.mu_mode)
