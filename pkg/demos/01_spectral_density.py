"""Bath spectral density and thermal weighting.

The reservoir seen by the oscillator is summarized by the Ohmic
Lorentz-Drude spectral density J(w) = (w/pi) wc^2/(wc^2 + w^2).  The
cutoff ratio r = wc/w0 controls where the bath has weight relative to
the system frequency; temperature enters only through the coth factor
that multiplies J inside every coefficient integral.
"""

import numpy as np

from qbmzeno import (
    OhmicLorentzDrude,
    ReservoirParams,
    spectral_density,
    thermal_factor,
    weighted_spectral_density,
)

omegas = np.linspace(0.0, 4.0, 9)

print("=== Spectral density for three cutoff ratios (omega0 = 1) ===")
print(f"{'omega':>8} " + " ".join(f"J(r={r:g})".rjust(12) for r in (0.5, 1.0, 10.0)))
for w in omegas:
    row = [spectral_density(OhmicLorentzDrude(r), w) for r in (0.5, 1.0, 10.0)]
    print(f"{w:8.2f} " + " ".join(f"{v:12.6f}" for v in row))

# A narrow bath (r < 1) has most of its weight below the oscillator
# frequency; a wide bath (r >> 1) is almost flat across it.  J peaks at
# w = wc with value wc/(2 pi).

print()
print("=== Thermal factor coth(w / 2 theta) at w = 1 ===")
for theta in (0.0, 0.5, 1.0, 10.0, 100.0):
    value = 1.0 if theta == 0.0 else thermal_factor(1.0, theta)
    print(f"theta = {theta:6.1f}: coth = {value:12.4f}")
# At theta = 0 the factor is exactly 1 (vacuum); for theta >> 1 it
# approaches the classical 2*theta/w.

print()
print("=== Weighted density J(w) coth(w / 2 theta), finite at w -> 0 ===")
params = ReservoirParams(r=1.0, theta=1.0, alpha=0.1)
model = params.spectral_model()
for w in (0.0, 1e-6, 0.1, 1.0, 4.0):
    print(f"w = {w:8.1e}: {weighted_spectral_density(model, params, w):10.6f}")
print(f"analytic w->0 limit 2 theta/pi = {2.0 / np.pi:10.6f}")
