"""Capacity simulator for two-user NOMA downlink multiplexed over OAM modes."""

from .capacity import CapacityReport, Scheme, evaluate_conventional_noma, evaluate_noma, evaluate_oma
from .channel import LinkChannel, PhaseDistanceMode, PropagationParams, UcaGeometry, build_link
from .config import ConfigError, SystemConfig, load_config
from .noma import DegenerateModeError, PowerSplit, allocate_mode_powers
from .oam_mux import ModeSet, demultiplex, diagonalize_oracle, precode
from .scenario import evaluate_scheme, resolve

__version__ = "0.1.0"
