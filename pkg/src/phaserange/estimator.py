"""Least squares range estimation from wrapped phase measurements.

The observed fractional phases determine the range only up to whole
wavelength counts.  Projecting the observation orthogonally to the integer
vector v turns the search over wrapping integers into a closest-point
query in the projected lattice; lifting the answer back through the
unimodular matrix recovers the wrapping integers, the scaled range, and
finally the range itself inside [0, P).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError
from .lattice import DualBasis, RangingPlan, closest_point

# Snap the scaled range to 0 when it sits within this distance of an
# integer, keeping the estimate inside the half-open interval [0, P).
_BETA_SNAP = 1e-12


def wrap(x: float) -> float:
    """Centered fractional part x - floor(x + 1/2), always in [-1/2, 1/2)."""
    r = x - math.floor(x + 0.5)
    # floor(x + 0.5) can land one off at representation boundaries
    if r < -0.5:
        r += 1.0
    elif r >= 0.5:
        r -= 1.0
    return r


def wrap_array(x: np.ndarray) -> np.ndarray:
    """Vectorized wrap with the same boundary convention."""
    x = np.asarray(x, dtype=float)
    r = x - np.floor(x + 0.5)
    r[r < -0.5] += 1.0
    r[r >= 0.5] -= 1.0
    return r


@dataclass(frozen=True)
class PhaseObservation:
    """Measured fractional phase differences, one per wavelength."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).copy()
        if vals.ndim != 1:
            raise InputError("phase observation must be a 1-d vector")
        if not np.isfinite(vals).all():
            raise InputError("phase observation must be finite")
        if (vals < -0.5).any() or (vals >= 0.5).any():
            raise InputError("phases must lie in [-1/2, 1/2)")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def wrapped(cls, values: Sequence[float]) -> "PhaseObservation":
        """Build an observation, wrapping the inputs into [-1/2, 1/2) first."""
        return cls(wrap_array(np.asarray(values, dtype=float)))

    def __len__(self) -> int:
        return len(self.values)


def observation_trusted(values: np.ndarray) -> PhaseObservation:
    """Build an observation from pre-validated phases without copying.

    Simulation hot path.  Caller guarantees a 1-d float64 array with
    entries in [-1/2, 1/2), typically a row of a wrap_array result.
    """
    obs = PhaseObservation.__new__(PhaseObservation)
    object.__setattr__(obs, "values", values)
    return obs


@dataclass(frozen=True)
class RangeEstimate:
    """Estimated range in [0, P), with the recovered wrapping integers."""

    r_hat: float
    beta_hat: float
    z_hat: tuple[int, ...]
    residual: float


def ls_objective(plan: RangingPlan, obs: PhaseObservation, r: float) -> float:
    """Sum of squared wrapped residuals at range hypothesis r."""
    beta = float(r) / plan.period_float
    e = wrap_array(obs.values - beta * plan.v_float)
    return float(e @ e)


def synthesize_observation(
    plan: RangingPlan, r0: float, phase_noise: Sequence[float]
) -> PhaseObservation:
    """Wrapped phases a range r0 would produce under the given phase noise."""
    if not math.isfinite(float(r0)):
        raise InputError("r0 must be finite")
    noise = np.asarray(phase_noise, dtype=float)
    if noise.shape != (plan.size,):
        raise InputError(f"noise length {noise.shape} != number of wavelengths {plan.size}")
    beta0 = float(r0) / plan.period_float
    return PhaseObservation(wrap_array(beta0 * plan.v_float + noise))


def estimate(plan: RangingPlan, basis: DualBasis, obs: PhaseObservation) -> RangeEstimate:
    """Global least squares range estimate over [0, P).

    Projects the observation orthogonally to v, solves the closest-point
    problem, lifts the coefficients to wrapping integers z, and maps the
    conditional minimizer beta(z) back into the fundamental interval.
    The inner product z.v is taken in exact integer arithmetic before
    demotion so large v cannot cancel catastrophically.
    """
    n = plan.size
    first_col = tuple(basis.lift.U[i][0] for i in range(len(basis.lift.U)))
    if first_col != plan.v:
        raise InputError("basis was not built from this plan (v mismatch)")
    y = obs.values
    if y.shape != (n,):
        raise InputError(f"observation has {y.shape[0]} phases, plan has {n} wavelengths")

    vf = plan.v_float
    vsq = float(plan.v_norm_sq)
    yv = float(vf @ y)
    t = y - vf * (yv / vsq)

    sol = closest_point(basis, t)
    u2 = basis.lift.U2
    z = tuple(sum(u2[i][j] * sol.w[j] for j in range(n - 1)) for i in range(n))

    zv = sum(z[i] * plan.v[i] for i in range(n))
    beta = (yv - float(zv)) / vsq
    # z.v can be large along v without moving the lattice point; reduce it
    # modulo |v|^2 exactly so the fractional part keeps full precision.
    rem = zv % plan.v_norm_sq
    frac = (yv - float(rem)) / vsq
    frac -= math.floor(frac)
    if frac < _BETA_SNAP or frac > 1.0 - _BETA_SNAP:
        r_hat = 0.0
    else:
        r_hat = plan.period_float * frac
    return RangeEstimate(
        r_hat=r_hat,
        beta_hat=beta,
        z_hat=z,
        residual=ls_objective(plan, obs, r_hat),
    )
