"""Scenario configuration: defaults, ``key = value`` parsing and validation.

Defaults reproduce the reference operating point: lambda = 0.03 m, CCU at 500
wavelengths, CEU at 1000 wavelengths, P = 1, p = (0.4, 0.6), N = 4.  The UCA
radii are not part of that operating point; the default 0.335 m satisfies
``r_tx * r_rx ~= lambda * d_ccu / N`` for N = 4, the spacing at which the
OAM mode gains of the CCU link are balanced.
"""

from __future__ import annotations

import enum
import hashlib
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Iterable, Mapping, Optional, Union

from .capacity import MuMode, OmaTimeFraction
from .channel import PhaseDistanceMode, geometry_problems
from .noma import PowerConstraint, split_problems


class ConfigError(ValueError):
    """Aggregated validation failure; ``problems`` names every offending key."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.problems))


class AllocationReference(str, enum.Enum):
    """Which link's mode gains drive the per-mode power allocation."""

    CCU = "ccu"
    CEU = "ceu"


SWITCHES = {
    "phase_distance_mode": PhaseDistanceMode,
    "power_constraint": PowerConstraint,
    "allocation_reference": AllocationReference,
    "mu_mode": MuMode,
    "oma_time_fraction": OmaTimeFraction,
}


@dataclass(frozen=True)
class SystemConfig:
    wavelength_m: float = 0.03
    beta: float = 1.0
    tx_radius_m: float = 0.335
    rx_radius_m: float = 0.335
    ccu_distance_m: float = 15.0
    ceu_distance_m: float = 30.0
    mode_count: int = 4
    # None means every mode 0..N-1.
    active_modes: Optional[tuple[int, ...]] = None
    total_power: float = 1.0
    p_1: float = 0.4
    p_2: float = 0.6
    snr_db: Optional[float] = 25.0
    noise_variance: Optional[float] = None
    phase_distance_mode: str = PhaseDistanceMode.COSINE.value
    power_constraint: str = PowerConstraint.SUM_OF_SQUARES.value
    allocation_reference: str = AllocationReference.CEU.value
    mu_mode: str = MuMode.SINGULAR_VALUE.value
    oma_time_fraction: str = OmaTimeFraction.LITERAL_ONE_EIGHTH.value

    def __post_init__(self):
        # Canonical types keep fingerprints independent of how values were passed.
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if f.name in SWITCHES:
                value = value.value if isinstance(value, enum.Enum) else str(value)
            elif f.name == "active_modes":
                value = tuple(int(m) for m in value)
            elif f.name != "mode_count" and isinstance(value, (int, float)):
                value = float(value)
            object.__setattr__(self, f.name, value)
        problems = self.problems()
        if problems:
            raise ConfigError(problems)
        if self.active_modes == tuple(range(self.mode_count)):
            object.__setattr__(self, "active_modes", None)

    def problems(self) -> list[str]:
        out = []
        if not self.wavelength_m > 0:
            out.append(f"wavelength_m: must be > 0, got {self.wavelength_m!r}")
        if not self.beta > 0:
            out.append(f"beta: must be > 0, got {self.beta!r}")
        if not self.total_power >= 0:
            out.append(f"total_power: must be >= 0, got {self.total_power!r}")
        if int(self.mode_count) != self.mode_count or self.mode_count < 1:
            out.append(f"mode_count: must be an integer >= 1, got {self.mode_count!r}")
        else:
            for link, distance in (("ccu", self.ccu_distance_m), ("ceu", self.ceu_distance_m)):
                for p in geometry_problems(
                    self.mode_count, self.tx_radius_m, self.rx_radius_m, distance
                ):
                    out.append(f"{link}_distance_m/tx_radius_m/rx_radius_m: {p}")
        if self.ccu_distance_m > 0 and not self.ccu_distance_m < self.ceu_distance_m:
            out.append(
                f"ccu_distance_m: CCU must be closer than CEU, got {self.ccu_distance_m!r} "
                f">= {self.ceu_distance_m!r}"
            )
        if self.active_modes is not None:
            modes = self.active_modes
            if not modes:
                out.append("active_modes: must not be empty")
            elif len(set(modes)) != len(modes):
                out.append(f"active_modes: duplicate entries in {modes}")
            elif any(not 0 <= m < self.mode_count for m in modes):
                out.append(f"active_modes: {modes} must lie in [0, {self.mode_count - 1}]")
        out.extend(f"p_1/p_2: {p}" for p in split_problems(self.p_1, self.p_2))
        if (self.snr_db is None) == (self.noise_variance is None):
            out.append("snr_db/noise_variance: exactly one must be set")
        if self.snr_db is not None and not math.isfinite(self.snr_db):
            out.append(f"snr_db: must be finite, got {self.snr_db!r}")
        if self.noise_variance is not None and not self.noise_variance > 0:
            out.append(f"noise_variance: must be > 0, got {self.noise_variance!r}")
        for key, kind in SWITCHES.items():
            value = getattr(self, key)
            if value not in {m.value for m in kind}:
                allowed = "|".join(m.value for m in kind)
                out.append(f"{key}: must be one of {allowed}, got {value!r}")
        return out

    @property
    def modes(self) -> tuple[int, ...]:
        if self.active_modes is None:
            return tuple(range(self.mode_count))
        return self.active_modes

    @property
    def snr_linear(self) -> Optional[float]:
        return None if self.snr_db is None else 10.0 ** (self.snr_db / 10.0)

    def with_mode_count(self, n: int) -> "SystemConfig":
        """Same scenario with ``n`` elements; active modes reset to all of ``0..n-1``
        unless ``n`` equals the current count."""
        if n == self.mode_count:
            return self
        return replace(self, mode_count=n, active_modes=None)

    def with_snr_db(self, snr_db: float) -> "SystemConfig":
        return replace(self, snr_db=snr_db, noise_variance=None)

    def switches(self) -> dict[str, str]:
        return {key: getattr(self, key) for key in SWITCHES}

    def items(self) -> list[tuple[str, str]]:
        """Effective ``(key, text value)`` pairs in field order."""
        out = []
        for f in fields(self):
            value = self.modes if f.name == "active_modes" else getattr(self, f.name)
            out.append((f.name, format_value(value)))
        return out

    def to_text(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.items())

    def fingerprint(self) -> str:
        text = "\n".join(f"{k}={v}" for k, v in sorted(self.items()))
        return hashlib.sha256(text.encode("ascii")).hexdigest()[:12]

    def switch_fingerprint(self) -> str:
        return "/".join(self.switches().values()) + "#" + self.fingerprint()


def format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, tuple):
        return ",".join(str(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_float(text):
    value = float(text)
    if math.isnan(value):
        raise ValueError("nan is not allowed")
    return value


def _parse_optional_float(text):
    return None if text.lower() == "none" else _parse_float(text)


def _parse_int(text):
    return int(text)


def _parse_modes(text):
    if text.lower() == "none":
        return None
    cleaned = text.strip("{}[]() ").replace(",", " ").split()
    return tuple(int(t) for t in cleaned)


_PARSERS = {
    "wavelength_m": _parse_float,
    "beta": _parse_float,
    "tx_radius_m": _parse_float,
    "rx_radius_m": _parse_float,
    "ccu_distance_m": _parse_float,
    "ceu_distance_m": _parse_float,
    "mode_count": _parse_int,
    "active_modes": _parse_modes,
    "total_power": _parse_float,
    "p_1": _parse_float,
    "p_2": _parse_float,
    "snr_db": _parse_optional_float,
    "noise_variance": _parse_optional_float,
    **{key: str for key in SWITCHES},
}
KEYS = tuple(f.name for f in fields(SystemConfig))
assert set(_PARSERS) == set(KEYS)


def parse_lines(lines: Iterable[str], source: str = "<config>") -> tuple[dict[str, str], list[str]]:
    """Split ``key = value`` lines into a raw mapping; returns (values, problems)."""
    values, problems = {}, []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            problems.append(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            continue
        values[key] = value
    return values, problems


def parse_overrides(pairs: Iterable[str]) -> tuple[dict[str, str], list[str]]:
    return parse_lines(pairs, source="--set")


Overrides = Union[Mapping[str, object], Iterable[str], None]


def load_config(path: Union[str, Path, None] = None, overrides: Overrides = None) -> SystemConfig:
    """Build a validated :class:`SystemConfig`.

    ``path`` is a ``key = value`` file; ``overrides`` are applied on top, either
    as a mapping or as ``"key=value"`` strings.  Every unknown key, unparsable
    value and invariant violation is collected into one :class:`ConfigError`.
    """
    raw, problems = {}, []
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        file_values, file_problems = parse_lines(text.splitlines(), source=str(path))
        raw.update(file_values)
        problems.extend(file_problems)
    if overrides is not None:
        if isinstance(overrides, Mapping):
            raw.update({k: format_value(v) if not isinstance(v, str) else v for k, v in overrides.items()})
        else:
            set_values, set_problems = parse_overrides(overrides)
            raw.update(set_values)
            problems.extend(set_problems)

    kwargs = {}
    for key, text in raw.items():
        if key not in _PARSERS:
            problems.append(f"{key}: unknown key")
            continue
        try:
            kwargs[key] = _PARSERS[key](text)
        except ValueError as exc:
            problems.append(f"{key}: cannot parse {text!r} ({exc})")

    # Setting a noise variance replaces the default SNR rather than clashing with it.
    if kwargs.get("noise_variance") is not None and "snr_db" not in kwargs:
        kwargs["snr_db"] = None

    if problems:
        # Report invariant violations of the parsable keys alongside parse errors.
        try:
            SystemConfig(**kwargs)
        except ConfigError as exc:
            problems.extend(exc.problems)
        except TypeError:
            pass
        raise ConfigError(problems)
    return SystemConfig(**kwargs)
