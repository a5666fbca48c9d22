from __future__ import annotations

from pathlib import Path

import pytest

from nilcomm.catalog import registry, shipped_entries, verify_catalog

DATA = Path(__file__).with_name("data")


@pytest.fixture(scope="session")
def dim3():
    return shipped_entries("dim3")


@pytest.fixture(scope="session")
def dim4():
    return shipped_entries("dim4")


@pytest.fixture(scope="session")
def dim5():
    return shipped_entries("dim5")


@pytest.fixture(scope="session")
def reg():
    return registry()


@pytest.fixture(scope="session")
def table(reg):
    """Look up a 3- or 4-dimensional table by catalog name."""
    def get(name):
        return reg[name].table()
    return get


@pytest.fixture(scope="session")
def summaries(reg):
    return {name: verify_catalog(shipped_entries(name), reg) for name in ("dim3", "dim4", "dim5")}


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 11):
        if n not in RESULTS:
            terminalreporter.write_line(f"criterion {n:2d}: NOT RUN")
            continue
        title, ok, note = RESULTS[n]
        line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  ({note})" if note else ""))
