"""The decoherence budget behind the Zeno/anti-Zeno crossover.

At high temperature the decay-rate ratio collapses to
Int_0^tau Delta / (tau Delta_M): the average environment-induced
decoherence accumulated between two measurements, relative to its
Markovian pace.  Measurements restart the coefficient clock, so whether
they slow or speed the decay is decided purely by whether that average
undershoots or overshoots the stationary value: the regime label and the
EID budget carry the same sign for every tau and every initial state.
"""

import warnings

import numpy as np

from qbmzeno import (
    ReservoirParams,
    eid_attenuation,
    high_t_ratio,
    zeno_ratio,
)

warnings.filterwarnings("ignore", message="escape probability")

params = ReservoirParams(r=0.5, theta=100.0, alpha=0.1)
model = params.spectral_model()

print("=== State-independent (EID) ratio vs the n-resolved ratio ===")
print(f"{'tau':>8} {'eid_ratio':>11} {'n=0':>11} {'n=50':>11} {'same side of 1':>15}")
for tau in np.geomspace(0.03, 30.0, 8):
    eid = high_t_ratio(params, model, float(tau))
    r0 = zeno_ratio(params, model, 0, float(tau))
    r50 = zeno_ratio(params, model, 50, float(tau))
    same = np.sign(eid - 1.0) == np.sign(r0 - 1.0) == np.sign(r50 - 1.0)
    print(f"{tau:8.3f} {eid:11.5f} {r0:11.5f} {r50:11.5f} {str(same):>15}")
# The columns are nearly indistinguishable: the decay of a Fock state is
# driven by the same integrated diffusion that erases position
# coherences, so the QZE/AZE decision is a decoherence statement.

print()
print("=== Coherence attenuation exp(-dx^2 Int Delta) between measurements ===")
print(f"{'tau':>7} " + " ".join(f"dx={dx:g}".rjust(11) for dx in (0.5, 1.0, 2.0)))
for tau in (0.1, 0.5, 1.0, 2.0):
    row = [eid_attenuation(params, model, dx, tau) for dx in (0.5, 1.0, 2.0)]
    print(f"{tau:7.2f} " + " ".join(f"{v:11.6f}" for v in row))
# Wide superpositions (large dx) lose coherence fastest; the attenuation
# exponent is exactly the quantity whose between-measurement average
# sets the Zeno-versus-anti-Zeno verdict above.
