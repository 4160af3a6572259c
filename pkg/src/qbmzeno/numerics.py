"""Adaptive quadrature and bracketed root finding.

Physics-agnostic engines used by every coefficient and decay-rate
computation: a semi-infinite integrator with oscillation-aware panelling
and tail completion, plus deterministic bisection on sign-change brackets.
All routines are pure functions of their inputs and bit-reproducible for
a fixed spec on one platform (fixed evaluation and summation order).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "QuadratureError",
    "NonFiniteError",
    "NonConvergenceError",
    "InvalidBracketError",
    "QuadratureSpec",
    "RootBracket",
    "integrate_adaptive",
    "integrate_semi_infinite",
    "bisect",
    "scan_for_bracket",
]


class QuadratureError(Exception):
    """Base class for quadrature engine failures."""


class NonFiniteError(QuadratureError):
    """The integrand returned NaN or infinity at an evaluation point."""


class NonConvergenceError(QuadratureError):
    """Subdivision budget exhausted with the error estimate above tolerance."""


class InvalidBracketError(Exception):
    """A root bracket without a sign change was supplied."""


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and budgets for the integration engines.

    ``tail_cut_omega`` forces the split point between the adaptively
    panelled head and the tail estimate; by default the cut is chosen
    from samples of the integrand so that the tail contribution can be
    completed (oscillatory case) or bounded (monotone decay) below
    ``abs_tol``.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 2000
    tail_cut_omega: float | None = None

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0):
            raise ValueError("abs_tol must be positive")
        if not (self.rel_tol > 0.0):
            raise ValueError("rel_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be at least 1")
        if self.tail_cut_omega is not None and not (self.tail_cut_omega > 0.0):
            raise ValueError("tail_cut_omega must be positive when given")


@dataclass(frozen=True)
class RootBracket:
    """An interval [lo, hi] on which f changes sign (or touches zero)."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self) -> None:
        if not (self.lo < self.hi):
            raise InvalidBracketError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")
        if self.f_lo * self.f_hi > 0.0:
            raise InvalidBracketError(
                f"no sign change on [{self.lo}, {self.hi}]: f_lo={self.f_lo}, f_hi={self.f_hi}"
            )


# 15-point Kronrod extension of 7-point Gauss on [-1, 1].  The embedded
# G7 weights are zero on Kronrod-only nodes so both rules share one
# evaluation batch.
_GK_NODES = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0, 0.207784955007898, 0.405845151377397,
    0.586087235467691, 0.741531185599394, 0.864864423359769,
    0.949107912342759, 0.991455371120813,
])
_K15_WEIGHTS = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529,
])
_G7_WEIGHTS = np.array([
    0.0, 0.129484966168870, 0.0, 0.279705391489277, 0.0,
    0.381830050505119, 0.0, 0.417959183673469, 0.0,
    0.381830050505119, 0.0, 0.279705391489277, 0.0,
    0.129484966168870, 0.0,
])

_MAX_INITIAL_PANELS = 20000
# Tail segments span a quarter oscillation (keeps the embedded-rule error
# per segment near machine precision); blocks end on whole-period
# boundaries so the partial sums are smooth in 1/u.
_TAIL_SEGMENTS_PER_PERIOD = 4
_TAIL_BLOCK_PERIODS = 128
_TAIL_MAX_BLOCKS = 96
_NEVILLE_POINTS = 6


def _as_evaluator(f: Callable) -> Callable[[np.ndarray], np.ndarray]:
    """Wrap ``f`` so it maps an ndarray to an ndarray of the same shape.

    Vectorized integrands are used directly; scalar-only callables fall
    back to a Python loop.
    """
    state = {"vectorized": None}

    def evaluate(x: np.ndarray) -> np.ndarray:
        if state["vectorized"] is not False:
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    y = np.asarray(f(x), dtype=float)
                if y.shape == x.shape:
                    state["vectorized"] = True
                    return y
            except Exception:
                pass
            state["vectorized"] = False
        return np.array([float(f(xi)) for xi in x], dtype=float)

    return evaluate


def _gk_panels(evaluate, lo: np.ndarray, hi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Apply the GK15 pair on a batch of panels; returns (values, errors)."""
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = mid[:, None] + half[:, None] * _GK_NODES[None, :]
    y = evaluate(nodes.ravel()).reshape(nodes.shape)
    if not np.all(np.isfinite(y)):
        bad = nodes.ravel()[~np.isfinite(y.ravel())][0]
        raise NonFiniteError(f"integrand returned a non-finite value near x={bad!r}")
    kron = half * (y @ _K15_WEIGHTS)
    gauss = half * (y @ _G7_WEIGHTS)
    return kron, np.abs(kron - gauss)


def integrate_adaptive(
    f: Callable,
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
    max_panel_width: float | None = None,
) -> tuple[float, float]:
    """Adaptive GK15 panel quadrature of f on the finite interval [a, b].

    Panels whose error exceeds their width-share of the tolerance are
    bisected until the summed estimate meets max(abs_tol, rel_tol*|I|)
    or the subdivision budget is exhausted (NonConvergenceError).
    ``max_panel_width`` pre-splits the interval so no initial panel spans
    more than that width (used to keep oscillations resolved).
    """
    spec = spec or QuadratureSpec()
    if b == a:
        return 0.0, 0.0
    if b < a:
        raise ValueError("integration bounds must satisfy a <= b")
    evaluate = _as_evaluator(f)

    if max_panel_width is not None and max_panel_width > 0.0:
        n0 = min(int(math.ceil((b - a) / max_panel_width)), _MAX_INITIAL_PANELS)
    else:
        n0 = 1
    edges = np.linspace(a, b, n0 + 1)
    lo, hi = edges[:-1], edges[1:]
    vals, errs = _gk_panels(evaluate, lo, hi)

    splits_used = 0
    span = b - a
    while True:
        total = float(np.sum(vals))
        err_total = float(np.sum(errs))
        tol = max(spec.abs_tol, spec.rel_tol * abs(total))
        if err_total <= tol:
            return total, err_total
        # Refine every panel above its width-share of half the budget;
        # skip panels already at floating-point resolution.
        widths = hi - lo
        splittable = widths > 64.0 * np.finfo(float).eps * np.maximum(np.abs(lo), np.abs(hi))
        mask = (errs > 0.5 * tol * widths / span) & splittable
        n_split = int(np.count_nonzero(mask))
        if n_split == 0:
            if err_total <= 2.0 * tol:
                return total, err_total
            raise NonConvergenceError(
                f"error estimate {err_total:.3e} above tolerance {tol:.3e} "
                "with no splittable panel left"
            )
        if splits_used + n_split > spec.max_subdivisions:
            raise NonConvergenceError(
                f"subdivision budget {spec.max_subdivisions} exhausted "
                f"(error estimate {err_total:.3e}, tolerance {tol:.3e})"
            )
        splits_used += n_split
        mid = 0.5 * (lo[mask] + hi[mask])
        new_lo = np.concatenate([lo[mask], mid])
        new_hi = np.concatenate([mid, hi[mask]])
        new_vals, new_errs = _gk_panels(evaluate, new_lo, new_hi)
        lo = np.concatenate([lo[~mask], new_lo])
        hi = np.concatenate([hi[~mask], new_hi])
        vals = np.concatenate([vals[~mask], new_vals])
        errs = np.concatenate([errs[~mask], new_errs])
        order = np.argsort(lo, kind="stable")
        lo, hi, vals, errs = lo[order], hi[order], vals[order], errs[order]


def _estimate_decay_cut(evaluate, lower: float, abs_tol: float) -> float:
    """Pick a head/tail split from geometric samples of |f|."""
    base = max(lower, 0.0) + 1.0
    cut = None
    for j in range(41):
        x = base * 2.0**j
        y = evaluate(np.array([x]))[0]
        if abs(y) > abs_tol:
            cut = x
    if cut is None:
        return lower + 16.0
    return min(cut * 4.0, base * 2.0**42)


def _neville_to_zero(xs: np.ndarray, ys: np.ndarray) -> tuple[float, float]:
    """Polynomial extrapolation of (xs, ys) to x = 0, with an error guess."""
    n = len(xs)
    tableau = [float(y) for y in ys]
    best = tableau[0]
    correction = abs(best)
    for level in range(1, n):
        for i in range(n - level):
            x_lo, x_hi = xs[i], xs[i + level]
            tableau[i] = (x_hi * tableau[i] - x_lo * tableau[i + 1]) / (x_hi - x_lo)
        correction = abs(tableau[0] - best)
        best = tableau[0]
    return best, correction


def _oscillatory_tail(
    evaluate, start: float, period: float, tol: float
) -> tuple[float, float]:
    """Integral of f over [start, inf) for an oscillation of known period.

    Sums quarter-period segments in whole-period blocks (one GK15 batch
    per block, so the embedded-rule error per segment stays near machine
    precision) and extrapolates the block-boundary partial sums in 1/u
    to their limit.  Accurate whenever the per-period sums decay like a
    power law, which covers smooth-envelope trigonometric tails down to
    conditionally convergent 1/u envelopes.
    """
    partial = 0.0
    rule_err = 0.0
    boundary_u: list[float] = []
    boundary_s: list[float] = []
    u = start
    best_val = 0.0
    best_err = math.inf
    n_segments = _TAIL_BLOCK_PERIODS * _TAIL_SEGMENTS_PER_PERIOD
    width = period / _TAIL_SEGMENTS_PER_PERIOD
    for _ in range(_TAIL_MAX_BLOCKS):
        edges = u + width * np.arange(n_segments + 1, dtype=float)
        vals, errs = _gk_panels(evaluate, edges[:-1], edges[1:])
        partial += float(np.sum(vals))
        rule_err += float(np.sum(errs))
        u = float(edges[-1])
        boundary_u.append(u)
        boundary_s.append(partial)
        if len(boundary_u) >= 3:
            k = min(_NEVILLE_POINTS, len(boundary_u))
            xs = 1.0 / np.array(boundary_u[-k:])
            ys = np.array(boundary_s[-k:])
            value, correction = _neville_to_zero(xs, ys)
            last_block = abs(boundary_s[-1] - boundary_s[-2])
            est_err = rule_err + correction + 1e-3 * last_block
            if est_err < best_err:
                best_val, best_err = value, est_err
            if est_err <= tol:
                return value, est_err
    return best_val, best_err


def _substitution_tail(evaluate, start: float, spec: QuadratureSpec) -> tuple[float, float]:
    """Integral of f over [start, inf) via the map u -> 1/u.

    Valid for integrands that decay at least like 1/u^2 without
    oscillation; the transformed integrand is then smooth on (0, 1/start].
    """

    def transformed(v: np.ndarray) -> np.ndarray:
        return evaluate(1.0 / v) / v**2

    inner = QuadratureSpec(
        abs_tol=spec.abs_tol,
        rel_tol=spec.rel_tol,
        max_subdivisions=max(spec.max_subdivisions // 4, 50),
    )
    return integrate_adaptive(transformed, 1e-300, 1.0 / start, inner)


def integrate_semi_infinite(
    f: Callable,
    spec: QuadratureSpec | None = None,
    *,
    lower: float = 0.0,
    oscillation_period: float | None = None,
    tail_exponent: float = 2.0,
) -> tuple[float, float]:
    """Integrate f over [lower, inf); returns (value, error_estimate).

    The interval is split into an adaptively panelled head and a tail.
    For integrands with a persistent oscillation, pass its period: the
    head is pre-split so no panel spans more than a quarter oscillation,
    and the tail is completed by period-segment summation with
    extrapolation.  Otherwise the integrand must decay monotonically in
    envelope, at least like C/omega**tail_exponent with
    ``tail_exponent >= 2``; the cut is placed where sampled values drop
    below abs_tol and the remainder is evaluated under the 1/omega
    substitution.  Removable singularities must already be regularized
    by the caller (e.g. expressed through sinc).
    """
    spec = spec or QuadratureSpec()
    if not math.isfinite(lower):
        raise ValueError("lower bound must be finite")
    if tail_exponent < 2.0:
        raise ValueError("tail handling requires an envelope exponent >= 2")
    evaluate = _as_evaluator(f)

    if oscillation_period is not None:
        if not (oscillation_period > 0.0):
            raise ValueError("oscillation_period must be positive")
        period = oscillation_period
        if spec.tail_cut_omega is not None:
            cut = max(spec.tail_cut_omega, lower + 4.0 * period)
        else:
            cut = lower + max(96.0, 1.5 * abs(lower) + 32.0, 12.0 * period)
        # Align the cut to a whole number of quarter periods.
        n_quarters = int(math.ceil((cut - lower) / (0.25 * period)))
        cut = lower + 0.25 * period * n_quarters
        head, head_err = integrate_adaptive(
            evaluate, lower, cut, spec, max_panel_width=0.25 * period
        )
        share = 0.5 * max(spec.abs_tol, spec.rel_tol * abs(head))
        tail, tail_err = _oscillatory_tail(evaluate, cut, period, share)
    else:
        if spec.tail_cut_omega is not None:
            cut = spec.tail_cut_omega
            if cut <= lower:
                raise ValueError("tail_cut_omega must exceed the lower bound")
        else:
            cut = _estimate_decay_cut(evaluate, lower, spec.abs_tol)
        head, head_err = integrate_adaptive(evaluate, lower, cut, spec)
        tail, tail_err = _substitution_tail(evaluate, cut, spec)

    value = head + tail
    err = head_err + tail_err
    if err > 4.0 * max(spec.abs_tol, spec.rel_tol * abs(value)):
        raise NonConvergenceError(
            f"semi-infinite integral error estimate {err:.3e} above tolerance "
            f"{max(spec.abs_tol, spec.rel_tol * abs(value)):.3e}"
        )
    return value, err


def bisect(f: Callable[[float], float], bracket: RootBracket, tol: float) -> float:
    """Bisection on a validated bracket down to an interval of width tol.

    Deterministic: the returned value is the midpoint of the final
    interval, and the sign-change invariant holds at every iteration.
    """
    if not (tol > 0.0):
        raise ValueError("tol must be positive")
    lo, hi = bracket.lo, bracket.hi
    f_lo, f_hi = bracket.f_lo, bracket.f_hi
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break  # interval at floating-point resolution
        f_mid = f(mid)
        if not math.isfinite(f_mid):
            raise NonFiniteError(f"function returned a non-finite value at x={mid!r}")
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return 0.5 * (lo + hi)


def brackets_from_samples(xs: np.ndarray, ys: np.ndarray) -> list[RootBracket]:
    """Sign-change brackets from already-evaluated samples (xs increasing)."""
    brackets = []
    for i in range(len(xs) - 1):
        y0, y1 = ys[i], ys[i + 1]
        if y0 * y1 < 0.0:
            brackets.append(RootBracket(float(xs[i]), float(xs[i + 1]), float(y0), float(y1)))
        elif y1 == 0.0 and y0 != 0.0:
            # Root pinned at the right edge; emitted once for this zero.
            brackets.append(RootBracket(float(xs[i]), float(xs[i + 1]), float(y0), 0.0))
        elif y0 == 0.0 and y1 != 0.0 and i == 0:
            brackets.append(RootBracket(float(xs[i]), float(xs[i + 1]), 0.0, float(y1)))
    return brackets


def scan_for_bracket(f: Callable[[float], float], grid: Sequence[float]) -> list[RootBracket]:
    """Return a RootBracket for every adjacent grid pair where f changes sign.

    The grid must be strictly increasing with at least two points.  A
    zero exactly on a grid point yields a single bracket ending there.
    """
    xs = np.asarray(grid, dtype=float)
    if xs.ndim != 1 or xs.size < 2:
        raise ValueError("grid must contain at least two points")
    if not np.all(np.diff(xs) > 0.0):
        raise ValueError("grid must be strictly increasing")
    ys = _as_evaluator(f)(xs)
    if not np.all(np.isfinite(ys)):
        bad = xs[~np.isfinite(ys)][0]
        raise NonFiniteError(f"function returned a non-finite value at x={bad!r}")
    return brackets_from_samples(xs, ys)
