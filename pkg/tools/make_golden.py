#!/usr/bin/env python3
"""Regenerate the reference coefficient table used by the golden test.

The table is bit-compared in CI, so rerun this only when the quadrature
engine intentionally changes, and review the diff before committing.
"""

from pathlib import Path

from qbmzeno.coefficients import tabulate_coefficients
from qbmzeno.spectral import ReservoirParams

TARGET = Path(__file__).resolve().parent.parent / "tests" / "data" / "golden_coefficients_theta100_r05.csv"


def main() -> None:
    params = ReservoirParams(r=0.5, theta=100.0, alpha=0.1)
    series = tabulate_coefficients(params, params.spectral_model(), 30.0, 300)
    TARGET.parent.mkdir(parents=True, exist_ok=True)
    series.to_csv(TARGET)
    print(f"wrote {TARGET}")


if __name__ == "__main__":
    main()
