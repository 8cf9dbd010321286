"""Monte Carlo sweeps of estimator error versus phase noise variance.

Phase noise is wrapped normal: a zero-mean normal draw reduced to
[-1/2, 1/2).  Each variance grid point owns a Philox stream keyed by the
seed and counter-indexed by the grid position, and each trial owns a
fixed-size slice of that stream; normal deviates come from the inverse
CDF applied to fixed-count uniform draws.  Results are therefore a pure
function of (seed, sigma index, trial index), bit-reproducible, and
independent of any batching of the trial loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO

import numpy as np
from scipy.special import ndtri

from .errors import InputError
from .estimator import estimate, observation_trusted, wrap_array
from .lattice import RangingPlan, build_dual_basis

# Second Philox key word, fixed so streams are a pure function of
# (seed, sigma index, trial index).
_KEY_SALT = 0x9E3779B97F4A7C15
_U64 = 0xFFFFFFFFFFFFFFFF

DEFAULT_SIGMA2_MIN = 1e-5
DEFAULT_SIGMA2_MAX = 1e-2
DEFAULT_SIGMA2_POINTS = 25

CSV_HEADER = "sigma2,mse,trials,mean_error,max_abs_error"


def default_sigma2_grid(
    lo: float = DEFAULT_SIGMA2_MIN,
    hi: float = DEFAULT_SIGMA2_MAX,
    points: int = DEFAULT_SIGMA2_POINTS,
) -> tuple[float, ...]:
    """Logarithmically spaced variance grid (defaults span 1e-5 to 1e-2)."""
    if points < 1:
        raise InputError("need at least one grid point")
    if not (0 < lo <= hi):
        raise InputError("variance bounds must be positive with lo <= hi")
    if points == 1:
        return (lo,)
    return tuple(np.logspace(math.log10(lo), math.log10(hi), points))


@dataclass(frozen=True)
class SimConfig:
    """A sweep: plan, true range, variance grid, trial count, seed."""

    plan: RangingPlan
    r0: float
    sigma2_grid: tuple[float, ...]
    trials: int
    seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise InputError("trials must be >= 1")
        if not self.sigma2_grid:
            raise InputError("sigma2 grid is empty")
        if any(s <= 0 for s in self.sigma2_grid):
            raise InputError("sigma2 values must be positive")
        if not (0 <= self.r0 < self.plan.period_float):
            raise InputError(f"r0 must lie in [0, {self.plan.period_float})")
        if not (0 <= self.seed <= _U64):
            raise InputError("seed must fit in 64 bits")


@dataclass(frozen=True)
class SweepPoint:
    sigma2: float
    mse: float
    trials: int
    mean_error: float
    max_abs_error: float
    failed_trials: int = 0


@dataclass(frozen=True)
class SweepResult:
    points: tuple[SweepPoint, ...]


def point_generator(seed: int, sigma_index: int) -> np.random.Generator:
    """Philox stream for one variance grid point.

    The key is (seed, fixed salt) and the 256-bit counter starts at block
    (0, 0, 0, sigma_index), so streams for different grid points never
    overlap.  Trial t owns words [t*N, t*N + N) of this stream; any
    batching or partitioning of the trial loop must preserve that
    assignment, which makes results a pure function of
    (seed, sigma_index, trial_index).
    """
    key = np.array([seed & _U64, _KEY_SALT], dtype=np.uint64)
    counter = np.array([0, 0, 0, sigma_index & _U64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def sample_wrapped_normal(sigma2: float, rng: np.random.Generator, size=None):
    """Wrapped normal draw(s): wrap(X) with X ~ Normal(0, sigma2).

    Uniforms come from 64-bit integer midpoints, (k + 1/2) / 2^64, so the
    inverse CDF never sees 0 or 1 and each variate costs exactly one
    64-bit draw (no rejection, fixed draw count).
    """
    if sigma2 <= 0:
        raise InputError("sigma2 must be positive")
    shape = 1 if size is None else size
    k = rng.integers(0, _U64, size=shape, dtype=np.uint64, endpoint=True)
    u = (k.astype(np.float64) + 0.5) * 2.0**-64
    x = ndtri(u) * math.sqrt(sigma2)
    w = wrap_array(x)
    return float(w[0]) if size is None else w


def noise_matrix(seed: int, sigma_index: int, trials: int, n: int, sigma2: float) -> np.ndarray:
    """Wrapped normal noise for a whole grid point, one row per trial."""
    rng = point_generator(seed, sigma_index)
    return sample_wrapped_normal(sigma2, rng, size=(trials, n))


def run_sweep(config: SimConfig) -> SweepResult:
    """Estimate config.trials noisy observations at every variance.

    Error is the plain difference r_hat - r0 (no modular reduction), so a
    wrapping failure near the interval ends scores as a large error.  Per
    trial estimator exceptions are counted, not fatal.
    """
    plan = config.plan
    basis = build_dual_basis(plan)
    beta0 = config.r0 / plan.period_float
    points = []
    for si, sigma2 in enumerate(config.sigma2_grid):
        noise = noise_matrix(config.seed, si, config.trials, plan.size, sigma2)
        phases = wrap_array(beta0 * plan.v_float + noise)
        sq_sum = 0.0
        err_sum = 0.0
        max_abs = 0.0
        failed = 0
        for trial in range(config.trials):
            obs = observation_trusted(phases[trial])
            try:
                est = estimate(plan, basis, obs)
            except Exception:
                failed += 1
                continue
            e = est.r_hat - config.r0
            sq_sum += e * e
            err_sum += e
            if abs(e) > max_abs:
                max_abs = abs(e)
        done = config.trials - failed
        if done == 0:
            raise InputError(f"all trials failed at sigma2 = {sigma2}")
        points.append(
            SweepPoint(
                sigma2=float(sigma2),
                mse=sq_sum / done,
                trials=config.trials,
                mean_error=err_sum / done,
                max_abs_error=max_abs,
                failed_trials=failed,
            )
        )
    return SweepResult(points=tuple(points))


def detect_threshold(result: SweepResult, jump_factor: float) -> float | None:
    """Smallest variance whose MSE jumps by >= jump_factor over its neighbor.

    Returns None when the sweep never jumps.  The sweep must be sorted by
    variance and contain at least two points.
    """
    pts = result.points
    if len(pts) < 2:
        raise InputError("need at least two grid points")
    if any(pts[i].sigma2 >= pts[i + 1].sigma2 for i in range(len(pts) - 1)):
        raise InputError("sweep must be sorted by sigma2")
    for prev, cur in zip(pts, pts[1:]):
        if prev.mse == 0.0:
            if cur.mse > 0.0:
                return cur.sigma2
        elif cur.mse >= jump_factor * prev.mse:
            return cur.sigma2
    return None


def write_csv(result: SweepResult, out: IO[str]) -> None:
    """Emit one row per variance, floats at 12 significant digits."""
    out.write(CSV_HEADER + "\n")
    for p in result.points:
        out.write(
            f"{p.sigma2:.12g},{p.mse:.12g},{p.trials},"
            f"{p.mean_error:.12g},{p.max_abs_error:.12g}\n"
        )


def mse_at(plan: RangingPlan, r0: float, sigma2: float, trials: int, seed: int) -> float:
    """Convenience single-variance MSE (used for crossover comparisons)."""
    cfg = SimConfig(plan=plan, r0=r0, sigma2_grid=(sigma2,), trials=trials, seed=seed)
    return run_sweep(cfg).points[0].mse
