import numpy as np
import pytest

from oamnoma.capacity import Scheme
from oamnoma.config import SystemConfig
from oamnoma.experiments import (
    CSV_HEADER,
    ERR_DEGENERATE_MODE,
    ERR_INVALID_CONFIG,
    FIGURE_SCHEMES,
    SweepSpec,
    figure_preset,
    run_oracle_report,
    run_sweep,
)


def small_spec(**kw):
    args = dict(
        swept_variable="transmit_snr_db",
        grid=(0.0, 10.0),
        fixed_params=SystemConfig(),
        schemes=((Scheme.NOMA_OAM_MDMA, 4),),
    )
    args.update(kw)
    return SweepSpec(**args)


def test_row_count():
    assert len(run_sweep(small_spec()).rows) == 2


def test_rows_ordered_by_grid_then_scheme():
    result = run_sweep(figure_preset("fig2"))
    assert len(result.rows) == 45
    expected = [(v, s, n) for v in result.spec.grid for s, n in FIGURE_SCHEMES]
    assert [(r.swept_value, r.scheme, r.mode_count) for r in result.rows] == expected
    for r in result.rows:
        assert r.sum_capacity == r.ccu_capacity + r.ceu_capacity


def test_rerun_is_byte_identical():
    spec = figure_preset("fig2")
    assert run_sweep(spec).to_csv() == run_sweep(spec).to_csv()


@pytest.mark.parametrize("workers", [2, 4, 9])
def test_worker_count_does_not_change_output(workers):
    spec = figure_preset("fig7")
    assert run_sweep(spec, workers).to_csv() == run_sweep(spec, 1).to_csv()


def test_csv_layout():
    result = run_sweep(small_spec())
    text = result.to_csv()
    lines = text.split("\n")
    assert lines[0] == ",".join(CSV_HEADER)
    assert text.endswith("\n") and "\r" not in text
    text.encode("ascii")
    cells = lines[1].split(",")
    assert cells[:4] == ["transmit_snr_db", "0", "noma_oam_mdma", "4"]
    assert cells[4] == format(result.rows[0].ccu_capacity, ".12g")
    assert float(cells[4]) == pytest.approx(result.rows[0].ccu_capacity, rel=1e-11)


@pytest.mark.parametrize("name", ["fig2", "fig3", "fig4"])
def test_snr_presets_fixed_parameters(name):
    spec = figure_preset(name)
    cfg = spec.fixed_params
    assert spec.swept_variable.value == "transmit_snr_db"
    assert spec.grid[:2] == (0.0, 5.0) and spec.grid[-1] == 40.0
    assert (cfg.wavelength_m, cfg.total_power, cfg.p_1, cfg.p_2) == (0.03, 1.0, 0.4, 0.6)
    assert cfg.ccu_distance_m == 500 * 0.03 and cfg.ceu_distance_m == 1000 * 0.03
    assert spec.schemes == FIGURE_SCHEMES


@pytest.mark.parametrize("name, metric", [("fig5", "ccu"), ("fig6", "ceu"), ("fig7", "sum")])
def test_distance_presets(name, metric):
    spec = figure_preset(name)
    assert spec.swept_variable.value == "normalized_ccu_distance"
    assert spec.metric == metric
    assert spec.fixed_params.snr_db == 25.0
    assert spec.grid == (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    assert spec.config_at(0.5).ccu_distance_m == 15.0
    assert spec.config_at(0.5).ceu_distance_m == 30.0


def test_fig4_reports_sum_capacity():
    assert figure_preset("fig4").metric == "sum"


def test_unknown_preset():
    with pytest.raises(ValueError, match="unknown figure"):
        figure_preset("fig9")


@pytest.mark.parametrize(
    "kw",
    [
        dict(grid=(1.0,)),
        dict(grid=(2.0, 1.0)),
        dict(schemes=()),
        dict(swept_variable="normalized_ccu_distance", grid=(0.5, 1.0)),
        dict(swept_variable="wavelength"),
    ],
)
def test_spec_validation(kw):
    with pytest.raises(ValueError):
        small_spec(**kw)


def test_ccu_capacity_falls_as_ccu_moves_out():
    result = run_sweep(figure_preset("fig5"))
    for scheme, n in FIGURE_SCHEMES:
        ccu = result.column(scheme, n, "ccu")
        assert np.all(np.diff(ccu) <= 0), (scheme, n)


def test_ceu_capacity_flat_in_distance():
    result = run_sweep(figure_preset("fig6"))
    for scheme, n in FIGURE_SCHEMES:
        ceu = result.column(scheme, n, "ceu")
        assert np.ptp(ceu) <= 1e-12 * ceu.max()


def test_invalid_grid_point_marks_rows_and_continues():
    # d = 0.01 * 30 m puts the CCU closer than the array aperture.
    spec = figure_preset("fig5", grid=(0.01, 0.5))
    result = run_sweep(spec)
    assert [r.error for r in result.rows[:5]] == [ERR_INVALID_CONFIG] * 5
    assert all(r.error is None for r in result.rows[5:])
    assert ERR_INVALID_CONFIG in result.to_csv().split("\n")[1]


def test_degenerate_geometry_marks_rows():
    base = SystemConfig(tx_radius_m=1e-12)
    result = run_sweep(figure_preset("fig2", base=base, grid=(0.0, 5.0)))
    by_scheme = {(r.scheme, r.mode_count): r.error for r in result.rows}
    assert by_scheme[Scheme.NOMA_OAM_MDMA, 4] == ERR_DEGENERATE_MODE
    # A single element has no higher modes to lose.
    assert by_scheme[Scheme.CONVENTIONAL_NOMA, 1] is None


def test_oracle_report_default_passes():
    report = run_oracle_report(SystemConfig())
    assert report.passed
    assert len(report.rows) == 8
    assert report.to_csv().rstrip("\n").split("\n")[-1].startswith("summary,")


def test_oracle_report_single_element():
    report = run_oracle_report(SystemConfig(), mode_counts=[1])
    assert report.passed
    assert {r.link for r in report.rows} == {"ccu", "ceu"}
    assert all(r.mode_count == 1 for r in report.rows)


def test_oracle_report_literal_fails():
    report = run_oracle_report(SystemConfig(phase_distance_mode="literal"))
    assert not report.passed
    assert "FAIL" in report.to_csv()
