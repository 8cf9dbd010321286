"""Command line front end: basis inspection, estimation, Monte Carlo sweeps.

Exit codes: 0 success, 2 invalid input (bad files, flags, preconditions),
3 broken internal invariant.  JSON goes to stdout and matches the schemas
shipped under schemas/.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import InputError, InternalCheckError
from .estimator import PhaseObservation, estimate
from .exactmath import (
    format_rational,
    minimal_integer_scale,
    parse_rational,
    scale_to_coprime_check,
    scaled_integers,
)
from .lattice import RangingPlan, build_dual_basis, build_plan, gcd_chain
from .oracle import grid_argmin
from .simulate import (
    DEFAULT_SIGMA2_MAX,
    DEFAULT_SIGMA2_MIN,
    DEFAULT_SIGMA2_POINTS,
    SimConfig,
    default_sigma2_grid,
    run_sweep,
    write_csv,
)

VERIFY_GRID_POINTS = 1_000_000
VERIFY_SLACK = 1e-9


def read_plan_file(path: str) -> RangingPlan:
    """Parse a plan file: one rational per line, # starts a comment."""
    ws = []
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read plan file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        try:
            ws.append(parse_rational(s))
        except InputError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from exc
    try:
        return build_plan(ws)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def read_phases_file(path: str, expected: int) -> PhaseObservation:
    """Parse a phase file: one real per line, # starts a comment."""
    vals = []
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read phase file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        try:
            vals.append(float(s))
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: not a real number: {s!r}") from exc
    if len(vals) != expected:
        raise InputError(f"{path}: {len(vals)} phases but the plan has {expected} wavelengths")
    try:
        return PhaseObservation(vals)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from exc


def cmd_basis(args: argparse.Namespace) -> int:
    plan = read_plan_file(args.plan)
    basis = build_dual_basis(plan)
    out = {
        "wavelengths": [format_rational(w) for w in plan.wavelengths],
        "P": format_rational(plan.period),
        "v": list(plan.v),
        "gcd_chain": gcd_chain(plan.v),
        "U": [list(row) for row in basis.lift.U],
        "U2": [list(row) for row in basis.lift.U2],
        "B": [[float(f"{x:.17g}") for x in row] for row in basis.B.tolist()],
        "pairwise_coprime_scalable": scale_to_coprime_check(plan.wavelengths),
        "integer_scale": format_rational(minimal_integer_scale(plan.wavelengths)),
        "scaled_wavelengths": scaled_integers(plan.wavelengths),
    }
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_estimate(args: argparse.Namespace) -> int:
    plan = read_plan_file(args.plan)
    obs = read_phases_file(args.phases, plan.size)
    basis = build_dual_basis(plan)
    est = estimate(plan, basis, obs)
    out = {
        "r_hat": est.r_hat,
        "beta_hat": est.beta_hat,
        "z_hat": list(est.z_hat),
        "residual": est.residual,
    }
    if args.verify:
        r_oracle, val_oracle = grid_argmin(plan, obs, VERIFY_GRID_POINTS)
        out["oracle"] = {
            "r": r_oracle,
            "value": val_oracle,
            "grid_points": VERIFY_GRID_POINTS,
        }
        out["oracle_agrees"] = bool(est.residual <= val_oracle + VERIFY_SLACK)
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    plan = read_plan_file(args.plan)
    grid = default_sigma2_grid(args.sigma2_min, args.sigma2_max, args.sigma2_points)
    config = SimConfig(
        plan=plan,
        r0=args.r0,
        sigma2_grid=grid,
        trials=args.trials,
        seed=args.seed,
    )
    result = run_sweep(config)
    if args.out == "-":
        write_csv(result, sys.stdout)
    else:
        with open(args.out, "w") as fh:
            write_csv(result, fh)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phaserange",
        description="Multi-wavelength phase ranging: basis construction, "
        "estimation, Monte Carlo sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_basis = sub.add_parser("basis", help="print the lattice construction as JSON")
    p_basis.add_argument("plan", help="plan file (one rational wavelength per line)")
    p_basis.set_defaults(func=cmd_basis)

    p_est = sub.add_parser("estimate", help="estimate the range from a phase file")
    p_est.add_argument("plan", help="plan file")
    p_est.add_argument("phases", help="phase file (one real in [-1/2, 1/2) per line)")
    p_est.add_argument(
        "--verify",
        action="store_true",
        help="cross-check against the dense grid oracle",
    )
    p_est.set_defaults(func=cmd_estimate)

    p_sim = sub.add_parser("simulate", help="MSE-versus-variance Monte Carlo sweep")
    p_sim.add_argument("--plan", required=True, help="plan file")
    p_sim.add_argument("--r0", type=float, default=20.0, help="true range (default 20)")
    p_sim.add_argument("--trials", type=int, default=10_000, help="trials per variance")
    p_sim.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
    p_sim.add_argument("--sigma2-min", type=float, default=DEFAULT_SIGMA2_MIN)
    p_sim.add_argument("--sigma2-max", type=float, default=DEFAULT_SIGMA2_MAX)
    p_sim.add_argument("--sigma2-points", type=int, default=DEFAULT_SIGMA2_POINTS)
    p_sim.add_argument("--out", default="-", help="CSV path, - for stdout")
    p_sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalCheckError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
