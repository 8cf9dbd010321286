from pathlib import Path

import pytest

from phaserange import build_dual_basis, build_plan
from phaserange.wavelength_sets import ALL_SETS

REPO_ROOT = Path(__file__).resolve().parent.parent

PLAN_FILES = {
    name: REPO_ROOT / "plans" / f"{name}.txt" for name in ALL_SETS
}


@pytest.fixture(scope="session")
def plans():
    """The four benchmark plans, built once."""
    return {name: build_plan(ws) for name, ws in ALL_SETS.items()}


@pytest.fixture(scope="session")
def bases(plans):
    """Dual bases for the four benchmark plans, built once."""
    return {name: build_dual_basis(plan) for name, plan in plans.items()}
