"""Rewrite the pinned figure CSVs in tests/golden.

Run only after a deliberate, reviewed change to the model:

    python3 tests/regen_golden.py
"""

from pathlib import Path

from oamnoma.experiments import FIGURES, figure_preset, run_sweep

GOLDEN = Path(__file__).parent / "golden"


def main():
    GOLDEN.mkdir(exist_ok=True)
    for name in FIGURES:
        run_sweep(figure_preset(name)).write_csv(GOLDEN / f"{name}.csv")
        print(f"wrote {GOLDEN / name}.csv")


if __name__ == "__main__":
    main()
