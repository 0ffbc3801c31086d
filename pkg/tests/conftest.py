from __future__ import annotations

import time
from pathlib import Path

import pytest

from dehnfill import bivar, lab

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "dehnfill" / "fixtures"


@pytest.fixture(scope="session")
def figure_eight() -> bivar.BivarLaurentPoly:
    return bivar.parse(FIXTURES / "figure_eight.json")


@pytest.fixture(scope="session")
def figure_eight_polygon(figure_eight):
    return bivar.newton_polygon(figure_eight)


@pytest.fixture(scope="session")
def full_sweep(figure_eight):
    """The acceptance sweep: all coprime (p, q) with p <= 60, q <= 12.

    Shared by several acceptance criteria; elapsed time is recorded so the
    runtime limits can be asserted against the actual sweep cost.
    """
    plan = lab.SweepPlan.build(
        figure_eight, "figure_eight", range(1, 61), range(1, 13)
    )
    t0 = time.monotonic()
    records = lab.run_survey(plan)
    elapsed = time.monotonic() - t0
    return plan, records, elapsed
