"""Golden fixture storage: plain CSV, env-overridable location.

Fixtures freeze values computed once by the oracles so later runs can detect
drift. They ship inside the package; CAPUTO_FIXTURES points the loader at an
alternative directory (used by tests to inject corrupted data).
"""

from __future__ import annotations

import csv
import os
from importlib import resources
from pathlib import Path

from .errors import DomainError

__all__ = ["fixtures_dir", "fixture_path", "load_rows", "ENV_VAR"]

ENV_VAR = "CAPUTO_FIXTURES"


def fixtures_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        path = Path(override)
        if not path.is_dir():
            raise DomainError(
                f"{ENV_VAR} points at {override!r}, which is not a directory"
            )
        return path
    return Path(resources.files("caputo_ode") / "fixtures")


def fixture_path(name: str) -> Path:
    return fixtures_dir() / name


def load_rows(name: str) -> list[dict[str, str]]:
    path = fixture_path(name)
    if not path.is_file():
        raise DomainError(f"fixture {name!r} not found at {path}")
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
