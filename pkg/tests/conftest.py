"""Shared fixtures. Heavy objects are module-scoped; tests that mutate
session state build their own copies."""

from __future__ import annotations

from pathlib import Path

import pytest

from rulescope.datasets import SplitSpec, discretize_target, load_csv, stratified_split
from rulescope.session import build_session

DATA = Path(__file__).resolve().parent.parent / "data" / "happiness.csv"


@pytest.fixture(scope="session")
def happiness_raw():
    return load_csv(str(DATA), "Score")


@pytest.fixture(scope="session")
def happiness(happiness_raw):
    return discretize_target(happiness_raw, 3)


@pytest.fixture(scope="session")
def happiness_split(happiness):
    return stratified_split(happiness, SplitSpec(train_fraction=0.9, seed=42))


@pytest.fixture(scope="session")
def shared_session():
    """Read-only session for payload shape tests. Do not mutate."""
    return build_session(str(DATA), "Score", bins=3, seed=42, iterations=4)


@pytest.fixture()
def fresh_session():
    """Small session safe to mutate."""
    return build_session(str(DATA), "Score", bins=3, seed=42, iterations=2)


def pytest_terminal_summary(terminalreporter):
    """Verdict lines collected by the release-gate checks, one per criterion."""
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None) if mod else None
    if lines:
        terminalreporter.section("acceptance checks")
        for line in lines:
            terminalreporter.write_line(line)
