"""Bundled reference schedules.

``table2`` is the published 2-qubit, 4-chunk parameter set; ``table3``
is the 7-qubit fully symmetric set. Values are dimensionless (hbar = 1)
with total evolution time 1.58.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..hamiltonian import Schedule, schedule_from_json

FIXTURE_NAMES = ("table2", "table3")


def fixture_path(name: str) -> Path:
    if name not in FIXTURE_NAMES:
        raise ValueError(f"unknown fixture {name!r}, expected one of {FIXTURE_NAMES}")
    return Path(str(resources.files(__name__) / f"{name}.json"))


def fixture_schedule(name: str) -> Schedule:
    return schedule_from_json(fixture_path(name).read_text())
