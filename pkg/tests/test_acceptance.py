"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line (visible even under output
capture) before asserting, so ``pytest tests/test_acceptance.py`` doubles as
a readable checklist.
"""

import csv
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from oamnoma.capacity import MuMode, Scheme, evaluate_noma
from oamnoma.channel import LinkChannel
from oamnoma.cli import EXIT_RUNTIME, EXIT_VALIDATION, main
from oamnoma.config import ConfigError, SystemConfig, load_config
from oamnoma.experiments import FIGURES, FIGURE_SCHEMES, figure_preset, run_sweep
from oamnoma.noma import (
    DegenerateModeError,
    ModePowerAllocation,
    PowerSplit,
    allocate_mode_powers,
    sinr_ue1_ceu_symbol,
    sinr_ue1_own,
    sinr_ue2,
)
from oamnoma.oam_mux import ModeSet, diagonalize_oracle
from oamnoma.scenario import build_links, resolve

GOLDEN = Path(__file__).parent / "golden"
NOMA4, NOMA2 = (Scheme.NOMA_OAM_MDMA, 4), (Scheme.NOMA_OAM_MDMA, 2)
CONV = (Scheme.CONVENTIONAL_NOMA, 1)
OMA4, OMA2 = (Scheme.OMA_OAM_MDMA, 4), (Scheme.OMA_OAM_MDMA, 2)


@pytest.fixture
def verdict(capsys):
    def report(criterion, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        assert ok, detail

    return report


def test_criterion_1_diagonalization_oracle(verdict):
    start = time.perf_counter()
    worst_leak = worst_err = 0.0
    for n in (2, 4):
        for link in build_links(SystemConfig().with_mode_count(n)):
            result = diagonalize_oracle(link, ModeSet.full(n))
            worst_leak = max(worst_leak, result.relative_leakage)
            worst_err = max(worst_err, result.eigenvalue_errors.max())
    elapsed = time.perf_counter() - start
    ok = worst_leak <= 1e-10 and worst_err <= 1e-10 and elapsed < 1.0
    verdict(1, ok, f"leakage {worst_leak:.2e}, gain error {worst_err:.2e}, {elapsed:.3f} s")


def test_criterion_2_eigenvalues_match_dense(verdict):
    start = time.perf_counter()
    worst = 0.0
    for n in (1, 2, 4, 8):
        for link in build_links(SystemConfig().with_mode_count(n)):
            dense = np.linalg.eigvals(link.matrix)
            cost = np.abs(np.subtract.outer(link.mode_eigenvalues, dense))
            rows, cols = linear_sum_assignment(cost)
            worst = max(worst, cost[rows, cols].max() / np.abs(dense).max())
    elapsed = time.perf_counter() - start
    verdict(2, worst <= 1e-10 and elapsed < 1.0, f"max relative mismatch {worst:.2e}, {elapsed:.3f} s")


def test_criterion_3_power_allocation(verdict):
    rng = np.random.default_rng(20240601)
    start = time.perf_counter()
    worst_sum = worst_flat = 0.0
    draws = 1000
    for _ in range(draws):
        n = int(rng.integers(1, 17))
        gains = 10 ** rng.uniform(-10, 2, size=n)
        p = allocate_mode_powers(1.0, gains)
        worst_sum = max(worst_sum, abs((p**2).sum() - 1.0))
        received = p**2 * gains
        worst_flat = max(worst_flat, np.ptp(received) / received.max())
    elapsed = time.perf_counter() - start
    ok = worst_sum <= 1e-10 and worst_flat <= 1e-10 and elapsed < 5.0
    verdict(3, ok, f"{draws} draws, |sum-P| {worst_sum:.1e}, spread {worst_flat:.1e}, {elapsed:.3f} s")


def test_criterion_4_closed_form_spot_values(verdict):
    split = PowerSplit(0.4, 0.6)
    unit = LinkChannel.from_matrix([[1.0]])
    alloc = ModePowerAllocation.with_noise(1.0, [1.0], 1.0)
    sc = evaluate_noma(unit, unit, alloc, split, ModeSet.full(1), MuMode.UNITY).sum_capacity
    values = {
        "own SINR": (sinr_ue1_own(10, 1, split), 4.0),
        "CEU symbol at CCU": (sinr_ue1_ceu_symbol(10, 1, split), 1.2),
        "CEU SINR": (sinr_ue2(10, 0.25, split), 0.75),
        "N=1 sum capacity": (sc, 1.0),
    }
    errors = {k: abs(got - want) for k, (got, want) in values.items()}
    detail = ", ".join(f"{k} off by {e:.1e}" for k, e in errors.items())
    verdict(4, all(e <= 1e-12 for e in errors.values()), detail)


def _strictly_increasing(x):
    return bool(np.all(np.diff(x) > 0))


def test_criterion_5_figure_trends(verdict):
    start = time.perf_counter()
    results = {name: run_sweep(figure_preset(name)) for name in FIGURES}
    failures = []
    metrics = ("ccu", "ceu", "sum")

    # (a) every capacity strictly increasing in SNR.
    for name in ("fig2", "fig3", "fig4"):
        for scheme, n in FIGURE_SCHEMES:
            for m in metrics:
                if not _strictly_increasing(results[name].column(scheme, n, m)):
                    failures.append(f"(a) {name} {scheme.value} N={n} {m}")

    # (b) NOMA N=4 > NOMA N=2 > conventional, and NOMA above OMA at equal N.
    pairs = [(NOMA4, NOMA2), (NOMA2, CONV), (NOMA4, OMA4), (NOMA2, OMA2)]
    for name, result in results.items():
        for m in metrics:
            for hi, lo in pairs:
                if not np.all(result.column(*hi, m) > result.column(*lo, m)):
                    failures.append(f"(b) {name} {m}: {hi[0].value}{hi[1]} vs {lo[0].value}{lo[1]}")

    # (c) CCU non-increasing and CEU flat across normalized distance.
    for scheme, n in FIGURE_SCHEMES:
        if np.any(np.diff(results["fig5"].column(scheme, n, "ccu")) > 0):
            failures.append(f"(c) fig5 {scheme.value} N={n} CCU rises")
        ceu = results["fig6"].column(scheme, n, "ceu")
        if np.ptp(ceu) > 1e-12 * ceu.max():
            failures.append(f"(c) fig6 {scheme.value} N={n} CEU varies")

    # (d) sum capacity non-increasing across normalized distance.
    for scheme, n in FIGURE_SCHEMES:
        if np.any(np.diff(results["fig7"].column(scheme, n, "sum")) > 0):
            failures.append(f"(d) fig7 {scheme.value} N={n} SC rises")

    elapsed = time.perf_counter() - start
    if elapsed >= 10.0:
        failures.append(f"runtime {elapsed:.2f} s")
    detail = "; ".join(failures) if failures else f"all trends hold, {elapsed:.3f} s"
    verdict(5, not failures, detail)


def test_criterion_6_determinism(tmp_path, verdict):
    paths = []
    for i, workers in enumerate((1, 1, 4)):
        out = tmp_path / f"fig4_{i}.csv"
        code = subprocess.call(
            [sys.executable, "-m", "oamnoma", "figure", "fig4", "--out", str(out),
             "--workers", str(workers)],
            stdout=subprocess.DEVNULL,
        )
        assert code == 0
        paths.append(out)
    blobs = [p.read_bytes() for p in paths]
    ok = blobs[0] == blobs[1] == blobs[2]
    verdict(6, ok, "two runs and a 4-worker run are byte-identical" if ok else "outputs differ")


def _golden_mismatches(name):
    with open(GOLDEN / f"{name}.csv", newline="") as fh:
        golden = list(csv.reader(fh))
    current = list(csv.reader(run_sweep(figure_preset(name)).to_csv().splitlines()))
    if len(golden) != len(current):
        return [f"{name}: {len(current)} rows, golden has {len(golden)}"]
    bad = []
    for i, (g_row, c_row) in enumerate(zip(golden, current)):
        for j, (g, c) in enumerate(zip(g_row, c_row)):
            try:
                gv, cv = float(g), float(c)
            except ValueError:
                same = g == c
            else:
                same = math.isclose(gv, cv, rel_tol=1e-9, abs_tol=0.0)
            if not same:
                bad.append(f"{name} row {i} col {j}: {c} vs golden {g}")
    return bad


def test_criterion_7_golden_regression(verdict):
    missing = [n for n in FIGURES if not (GOLDEN / f"{n}.csv").exists()]
    bad = [f"{n}: golden file missing" for n in missing]
    for name in FIGURES:
        if name not in missing:
            bad.extend(_golden_mismatches(name))
    detail = "; ".join(bad[:5]) if bad else "fig2-fig7 match golden files to 1e-9"
    verdict(7, not bad, detail)


VALIDATION_CASES = {
    "p_1 >= p_2": (["p_1=0.6", "p_2=0.4"], ConfigError, EXIT_VALIDATION),
    "d <= r_tx + r_rx": (["ccu_distance_m=0.6"], ConfigError, EXIT_VALIDATION),
    "empty mode set": (["active_modes="], ConfigError, EXIT_VALIDATION),
    "zero-gain mode": (["tx_radius_m=1e-12"], DegenerateModeError, EXIT_RUNTIME),
}


def test_criterion_8_validation_surface(verdict, capsys):
    failures = []
    for label, (overrides, error, exit_code) in VALIDATION_CASES.items():
        try:
            resolve(load_config(overrides=overrides))
        except error:
            pass
        except Exception as exc:  # any other class counts as a failure
            failures.append(f"{label}: raised {type(exc).__name__}")
        else:
            failures.append(f"{label}: accepted")
        argv = ["point"] + [a for o in overrides for a in ("--set", o)]
        code = main(argv)
        capsys.readouterr()
        if code != exit_code:
            failures.append(f"{label}: exit {code}, expected {exit_code}")
    detail = "; ".join(failures) if failures else f"{len(VALIDATION_CASES)} malformed configs rejected"
    verdict(8, not failures, detail)
