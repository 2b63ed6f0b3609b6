"""Parameter sweeps reproducing the capacity figures, and the oracle report."""

from __future__ import annotations

import csv
import enum
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .capacity import Scheme
from .config import ConfigError, SystemConfig
from .noma import DegenerateModeError
from .oam_mux import ModeSet, diagonalize_oracle
from .scenario import build_links, evaluate_scheme

CSV_HEADER = (
    "swept_var",
    "swept_value",
    "scheme",
    "mode_count",
    "ccu_capacity_bps_hz",
    "ceu_capacity_bps_hz",
    "sum_capacity_bps_hz",
    "switch_fingerprint",
)
ORACLE_HEADER = (
    "link",
    "mode_count",
    "mode",
    "gain_real",
    "gain_imag",
    "eigenvalue_rel_error",
    "leakage_rel",
    "status",
    "switch_fingerprint",
)
ORACLE_RTOL = 1e-10

ERR_DEGENERATE_MODE = "ERR_DEGENERATE_MODE"
ERR_INVALID_CONFIG = "ERR_INVALID_CONFIG"


class SweepVariable(str, enum.Enum):
    TRANSMIT_SNR_DB = "transmit_snr_db"
    NORMALIZED_CCU_DISTANCE = "normalized_ccu_distance"


FIGURE_SCHEMES: tuple[tuple[Scheme, int], ...] = (
    (Scheme.NOMA_OAM_MDMA, 4),
    (Scheme.NOMA_OAM_MDMA, 2),
    (Scheme.CONVENTIONAL_NOMA, 1),
    (Scheme.OMA_OAM_MDMA, 4),
    (Scheme.OMA_OAM_MDMA, 2),
)
SNR_GRID_DB = tuple(float(v) for v in range(0, 41, 5))
DISTANCE_GRID = tuple(round(0.1 * i, 10) for i in range(1, 10))

# name -> (swept variable, metric the figure plots)
FIGURES = {
    "fig2": (SweepVariable.TRANSMIT_SNR_DB, "ccu"),
    "fig3": (SweepVariable.TRANSMIT_SNR_DB, "ceu"),
    "fig4": (SweepVariable.TRANSMIT_SNR_DB, "sum"),
    "fig5": (SweepVariable.NORMALIZED_CCU_DISTANCE, "ccu"),
    "fig6": (SweepVariable.NORMALIZED_CCU_DISTANCE, "ceu"),
    "fig7": (SweepVariable.NORMALIZED_CCU_DISTANCE, "sum"),
}
DISTANCE_SWEEP_SNR_DB = 25.0


@dataclass(frozen=True)
class SweepSpec:
    swept_variable: SweepVariable
    grid: tuple[float, ...]
    fixed_params: SystemConfig
    schemes: tuple[tuple[Scheme, int], ...] = FIGURE_SCHEMES
    metric: str = "sum"
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "swept_variable", SweepVariable(self.swept_variable))
        object.__setattr__(self, "grid", tuple(float(v) for v in self.grid))
        object.__setattr__(
            self, "schemes", tuple((Scheme(s), int(n)) for s, n in self.schemes)
        )
        if len(self.grid) < 2:
            raise ValueError(f"sweep grid needs at least 2 points, got {len(self.grid)}")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError(f"sweep grid must be strictly increasing: {self.grid}")
        if self.swept_variable is SweepVariable.NORMALIZED_CCU_DISTANCE:
            bad = [v for v in self.grid if not 0 < v < 1]
            if bad:
                raise ValueError(f"normalized distances must lie in (0, 1): {bad}")
        if not self.schemes:
            raise ValueError("sweep needs at least one scheme")

    def config_at(self, value: float) -> SystemConfig:
        """Effective configuration at one grid point (may raise ConfigError)."""
        base = self.fixed_params
        if self.swept_variable is SweepVariable.TRANSMIT_SNR_DB:
            return base.with_snr_db(value)
        return replace(base, ccu_distance_m=value * base.ceu_distance_m)


@dataclass(frozen=True)
class SweepRow:
    swept_var: str
    swept_value: float
    scheme: Scheme
    mode_count: int
    ccu_capacity: float
    ceu_capacity: float
    sum_capacity: float
    switch_fingerprint: str
    error: Optional[str] = None

    def cells(self) -> list[str]:
        if self.error:
            caps = [self.error] * 3
        else:
            caps = [_fmt(self.ccu_capacity), _fmt(self.ceu_capacity), _fmt(self.sum_capacity)]
        return [
            self.swept_var,
            _fmt(self.swept_value),
            self.scheme.value,
            str(self.mode_count),
            *caps,
            self.switch_fingerprint,
        ]


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    rows: tuple[SweepRow, ...]

    @property
    def errors(self) -> list[SweepRow]:
        return [r for r in self.rows if r.error]

    def column(self, scheme: Scheme | str, mode_count: int, metric: str) -> np.ndarray:
        """Values of ``metric`` (``ccu``/``ceu``/``sum``) for one scheme, in grid order."""
        scheme = Scheme(scheme)
        return np.array(
            [
                getattr(r, f"{metric}_capacity")
                for r in self.rows
                if r.scheme is scheme and r.mode_count == mode_count
            ]
        )

    def to_csv(self) -> str:
        return _csv_text(CSV_HEADER, (r.cells() for r in self.rows))

    def write_csv(self, path) -> None:
        _write_text(path, self.to_csv())


def _fmt(x: float) -> str:
    return format(x, ".12g")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _write_text(path, text: str) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(text)


def _grid_point(spec: SweepSpec, value: float) -> list[SweepRow]:
    var = spec.swept_variable.value
    fingerprint = spec.fixed_params.switch_fingerprint()
    try:
        config = spec.config_at(value)
    except ConfigError:
        config, point_error = None, ERR_INVALID_CONFIG
    else:
        point_error = None

    rows = []
    for scheme, n in spec.schemes:
        error = point_error
        if error is None:
            try:
                report = evaluate_scheme(config, scheme, n)
            except DegenerateModeError:
                error = ERR_DEGENERATE_MODE
            except ConfigError:
                error = ERR_INVALID_CONFIG
        if error:
            nan = float("nan")
            rows.append(SweepRow(var, value, scheme, n, nan, nan, nan, fingerprint, error))
        else:
            rows.append(
                SweepRow(
                    var,
                    value,
                    scheme,
                    n,
                    report.ccu_capacity,
                    report.ceu_capacity,
                    report.ccu_capacity + report.ceu_capacity,
                    fingerprint,
                )
            )
    return rows


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Evaluate every scheme at every grid point.

    Grid points are independent and may run on ``workers`` threads; rows are
    always assembled in grid order, then scheme order.  A grid point whose
    geometry is degenerate or invalid yields rows carrying an error code
    instead of aborting the sweep.
    """
    if workers <= 1:
        chunks = [_grid_point(spec, v) for v in spec.grid]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(lambda v: _grid_point(spec, v), spec.grid))
    return SweepResult(spec, tuple(row for chunk in chunks for row in chunk))


def figure_preset(
    name: str, base: Optional[SystemConfig] = None, grid: Optional[Sequence[float]] = None
) -> SweepSpec:
    """Sweep reproducing one of the capacity figures (``fig2`` ... ``fig7``).

    ``base`` defaults to the reference operating point.  Distance sweeps run at
    25 dB and hold the CEU where ``base`` puts it.
    """
    if name not in FIGURES:
        raise ValueError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    variable, metric = FIGURES[name]
    base = SystemConfig() if base is None else base
    if variable is SweepVariable.TRANSMIT_SNR_DB:
        default_grid = SNR_GRID_DB
    else:
        default_grid = DISTANCE_GRID
        if base.snr_db is None:
            base = base.with_snr_db(DISTANCE_SWEEP_SNR_DB)
    return SweepSpec(
        variable,
        tuple(default_grid if grid is None else grid),
        base,
        FIGURE_SCHEMES,
        metric,
        name,
    )


@dataclass(frozen=True)
class OracleRow:
    link: str
    mode_count: int
    mode: int
    gain: complex
    eigenvalue_error: float
    leakage_rel: float

    @property
    def passed(self) -> bool:
        return self.leakage_rel <= ORACLE_RTOL and self.eigenvalue_error <= ORACLE_RTOL


@dataclass(frozen=True)
class OracleReport:
    config: SystemConfig
    rows: tuple[OracleRow, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_csv(self) -> str:
        fp = self.config.switch_fingerprint()
        body = [
            [
                r.link,
                str(r.mode_count),
                str(r.mode),
                _fmt(r.gain.real),
                _fmt(r.gain.imag),
                _fmt(r.eigenvalue_error),
                _fmt(r.leakage_rel),
                "PASS" if r.passed else "FAIL",
                fp,
            ]
            for r in self.rows
        ]
        body.append(["summary", "", "", "", "", "", "", "PASS" if self.passed else "FAIL", fp])
        return _csv_text(ORACLE_HEADER, body)

    def write_csv(self, path) -> None:
        _write_text(path, self.to_csv())


def run_oracle_report(
    config: SystemConfig, mode_counts: Optional[Sequence[int]] = None
) -> OracleReport:
    """Run the diagonalization oracle on both links for each element count.

    Leakage is reported per injected mode, relative to the largest mode gain
    of that link.
    """
    counts = (config.mode_count,) if mode_counts is None else tuple(mode_counts)
    rows = []
    for n in counts:
        cfg = config.with_mode_count(n)
        for name, link in zip(("ccu", "ceu"), build_links(cfg)):
            modes = ModeSet(cfg.modes, n)
            result = diagonalize_oracle(link, modes)
            top = result.max_gain
            for i, mode in enumerate(result.modes):
                leak = result.mode_leakage[i] / top if top > 0 else 0.0
                rows.append(
                    OracleRow(
                        name,
                        n,
                        mode,
                        complex(result.gains[i]),
                        float(result.eigenvalue_errors[i]),
                        float(leak),
                    )
                )
    return OracleReport(config, tuple(rows))
