"""Master-equation diffusion and damping coefficients for the damped oscillator.

The second-order coefficients are double integrals (bath frequency times
evolution time).  The time integration is carried out in closed form, so
every quantity here is a single semi-infinite frequency integral:

  Delta(t)    = alpha^2 * (t/2)   * Int J coth [sinc(u-) + sinc(u+)] domega
  gamma(t)    = alpha^2 * (t/2)   * Int J      [sinc(u-) - sinc(u+)] domega
  IDelta(tau) = alpha^2 * (tau^2/4) * Int J coth [sinc^2(v-) + sinc^2(v+)] domega
  Igamma(tau) = alpha^2 * (tau^2/4) * Int J      [sinc^2(v-) - sinc^2(v+)] domega

with u± = (omega ± omega0) t, v± = (omega ± omega0) tau / 2 and
sinc(x) = sin(x)/x (sinc(0) = 1).  The removable point omega = omega0 is
handled by the sinc forms themselves, never by an epsilon guard.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .numerics import QuadratureSpec, integrate_semi_infinite
from .spectral import (
    BaseSpectralDensity,
    ReservoirParams,
    check_model_consistency,
    weighted_spectral_density,
)

__all__ = [
    "CoefficientSeries",
    "MarkovianLimits",
    "diffusion_coefficient",
    "damping_coefficient",
    "integrated_diffusion",
    "integrated_damping",
    "markovian_limits",
    "markovian_limits_numerical",
    "tabulate_coefficients",
]

_TWO_PI = 2.0 * np.pi


def sinc(x):
    """Unnormalized sinc: sin(x)/x with sinc(0) = 1."""
    return np.sinc(np.asarray(x, dtype=float) / np.pi)


def coth_weight(model: BaseSpectralDensity, params: ReservoirParams):
    """J(omega) coth(omega / 2 theta omega0) as a vectorized callable."""
    if params.theta == 0.0:
        return lambda omega: model.density(omega)
    return lambda omega: weighted_spectral_density(model, params, omega)


def half_kernel_integral(
    weight,
    omega0: float,
    scale: float,
    kernel: str,
    shift: int,
    spec: QuadratureSpec | None = None,
    tail_exponent: float = 1.0,
) -> float:
    """One half of a coefficient integral, in oscillation coordinates.

    Evaluates Int_0^inf weight(omega) * k((omega + shift*omega0) * scale)
    domega for k = sinc or sinc^2, substituting u = (omega + shift*omega0)
    * scale so the oscillation period is constant (2 pi resp. pi) and the
    engine's quarter-period panelling and period-segment tail apply
    uniformly for any measurement interval.

    ``tail_exponent`` is the declared envelope exponent of the weight
    (J ~ C/omega for Ohmic Lorentz-Drude).
    """
    spec = spec or QuadratureSpec()
    if kernel == "sinc":
        period, kpow = _TWO_PI, 1.0
    elif kernel == "sinc2":
        period, kpow = np.pi, 2.0
    else:
        raise ValueError(f"unknown kernel {kernel!r}")
    u0 = shift * omega0 * scale

    def integrand(u):
        omega = np.maximum(u / scale - shift * omega0, 0.0)
        s = sinc(u)
        k = s if kernel == "sinc" else s * s
        return weight(omega) * k / scale

    value, _ = integrate_semi_infinite(
        integrand,
        spec,
        lower=u0,
        oscillation_period=period,
        tail_exponent=tail_exponent + kpow,
    )
    return value


def diffusion_coefficient(
    params: ReservoirParams,
    model: BaseSpectralDensity,
    t: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """Time-dependent diffusion coefficient Delta(t); vanishes at t = 0."""
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if t == 0.0:
        return 0.0
    check_model_consistency(params, model)
    w = coth_weight(model, params)
    lower = half_kernel_integral(w, params.omega0, t, "sinc", -1, spec, model.tail_exponent)
    upper = half_kernel_integral(w, params.omega0, t, "sinc", +1, spec, model.tail_exponent)
    return params.alpha**2 * 0.5 * t * (lower + upper)


def damping_coefficient(
    params: ReservoirParams,
    model: BaseSpectralDensity,
    t: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """Time-dependent damping coefficient gamma(t); temperature-free."""
    if t < 0.0:
        raise ValueError("t must be nonnegative")
    if t == 0.0:
        return 0.0
    check_model_consistency(params, model)
    w = model.density
    lower = half_kernel_integral(w, params.omega0, t, "sinc", -1, spec, model.tail_exponent)
    upper = half_kernel_integral(w, params.omega0, t, "sinc", +1, spec, model.tail_exponent)
    return params.alpha**2 * 0.5 * t * (lower - upper)


def integrated_diffusion(
    params: ReservoirParams,
    model: BaseSpectralDensity,
    tau: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """Running integral Int_0^tau Delta(t) dt via the closed sinc^2 kernel."""
    if tau < 0.0:
        raise ValueError("tau must be nonnegative")
    if tau == 0.0:
        return 0.0
    check_model_consistency(params, model)
    w = coth_weight(model, params)
    half = 0.5 * tau
    lower = half_kernel_integral(w, params.omega0, half, "sinc2", -1, spec, model.tail_exponent)
    upper = half_kernel_integral(w, params.omega0, half, "sinc2", +1, spec, model.tail_exponent)
    return params.alpha**2 * 0.25 * tau**2 * (lower + upper)


def integrated_damping(
    params: ReservoirParams,
    model: BaseSpectralDensity,
    tau: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """Running integral Int_0^tau gamma(t) dt via the closed sinc^2 kernel."""
    if tau < 0.0:
        raise ValueError("tau must be nonnegative")
    if tau == 0.0:
        return 0.0
    check_model_consistency(params, model)
    w = model.density
    half = 0.5 * tau
    lower = half_kernel_integral(w, params.omega0, half, "sinc2", -1, spec, model.tail_exponent)
    upper = half_kernel_integral(w, params.omega0, half, "sinc2", +1, spec, model.tail_exponent)
    return params.alpha**2 * 0.25 * tau**2 * (lower - upper)


@dataclass(frozen=True)
class MarkovianLimits:
    """Long-time (resonance) values of the diffusion and damping coefficients."""

    delta_m: float
    gamma_m: float


def markovian_limits(params: ReservoirParams, model: BaseSpectralDensity) -> MarkovianLimits:
    """Resonance (Fermi golden rule) limits of Delta(t) and gamma(t).

    The sinc kernels concentrate at omega = omega0 as t -> infinity, so

      Delta_M = (pi/2) alpha^2 J(omega0) coth(omega0 / 2 theta omega0)
      gamma_M = (pi/2) alpha^2 J(omega0)

    At theta = 0 the two coincide exactly.  These closed forms are
    canonical; ``markovian_limits_numerical`` provides the large-t
    quadrature cross-check (slowly convergent, diagnostic only).
    """
    check_model_consistency(params, model)
    pref = 0.5 * np.pi * params.alpha**2
    gamma_m = pref * float(model.density(params.omega0))
    if params.theta == 0.0:
        delta_m = gamma_m
    else:
        delta_m = pref * float(weighted_spectral_density(model, params, params.omega0))
    return MarkovianLimits(delta_m=delta_m, gamma_m=gamma_m)


def markovian_limits_numerical(
    params: ReservoirParams,
    model: BaseSpectralDensity,
    t: float = 200.0,
    spec: QuadratureSpec | None = None,
) -> MarkovianLimits:
    """Large-t quadrature estimate of the Markovian limits.

    Converges only like 1/(omega0 t) because of oscillatory resonance
    tails; intended as a cross-check of the closed forms, not as input
    to ratio denominators.
    """
    if not (t > 0.0):
        raise ValueError("t must be positive")
    return MarkovianLimits(
        delta_m=diffusion_coefficient(params, model, t, spec),
        gamma_m=damping_coefficient(params, model, t, spec),
    )


@dataclass(frozen=True)
class CoefficientSeries:
    """Tabulated Delta, gamma and their running integrals on a time grid."""

    times: np.ndarray
    delta: np.ndarray
    gamma: np.ndarray
    int_delta: np.ndarray
    int_gamma: np.ndarray
    params: ReservoirParams

    def __post_init__(self) -> None:
        n = len(self.times)
        for name in ("delta", "gamma", "int_delta", "int_gamma"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"column {name} length differs from times")
        if n < 1 or self.times[0] != 0.0:
            raise ValueError("time grid must start at 0")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("time grid must be strictly increasing")
        for name in ("delta", "gamma", "int_delta", "int_gamma"):
            if getattr(self, name)[0] != 0.0:
                raise ValueError(f"{name} must vanish at t = 0")

    def to_csv(self, path) -> None:
        """Write the table with header t,delta,gamma,int_delta,int_gamma
        at 17 significant digits."""
        lines = ["t,delta,gamma,int_delta,int_gamma"]
        for i in range(len(self.times)):
            lines.append(
                ",".join(
                    format(v, ".16e")
                    for v in (
                        self.times[i],
                        self.delta[i],
                        self.gamma[i],
                        self.int_delta[i],
                        self.int_gamma[i],
                    )
                )
            )
        Path(path).write_text("\n".join(lines) + "\n")


def _tabulation_row(args) -> tuple[float, float, float, float]:
    params, model, t, spec = args
    return (
        diffusion_coefficient(params, model, t, spec),
        damping_coefficient(params, model, t, spec),
        integrated_diffusion(params, model, t, spec),
        integrated_damping(params, model, t, spec),
    )


def tabulate_coefficients(
    params: ReservoirParams,
    model: BaseSpectralDensity,
    t_max: float,
    n_points: int,
    spec: QuadratureSpec | None = None,
    jobs: int = 1,
) -> CoefficientSeries:
    """Uniform-grid tabulation of Delta, gamma and their running integrals.

    Each integral column is evaluated by the closed sinc^2 kernel at the
    grid time, not by chaining trapezoids, so every row is independently
    accurate.  ``jobs > 1`` parallelizes rows over processes with
    deterministic ordered assembly.
    """
    if not (t_max > 0.0):
        raise ValueError("t_max must be positive")
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    times = np.linspace(0.0, t_max, n_points)
    tasks = [(params, model, float(t), spec) for t in times[1:]]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_tabulation_row, tasks))
    else:
        rows = [_tabulation_row(task) for task in tasks]
    table = np.vstack([np.zeros(4), np.array(rows)])
    return CoefficientSeries(
        times=times,
        delta=table[:, 0],
        gamma=table[:, 1],
        int_delta=table[:, 2],
        int_gamma=table[:, 3],
        params=params,
    )
