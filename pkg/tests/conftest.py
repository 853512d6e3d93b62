"""Shared fixtures: the offline fixture corpus, a hard network guard, and
the acceptance summary printed at the end of the run."""

from __future__ import annotations

import re
import socket
from pathlib import Path

import pytest

from graphqa.graph import ingest, load_kv_file, load_parent_child_file
from graphqa.service import build_runtime, load_config

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(autouse=True)
def no_network(monkeypatch):
    """Every test runs with outbound connections disabled; anything that
    tries to reach the network fails loudly."""

    def refuse(*args, **kwargs):
        raise RuntimeError("test attempted network access")

    monkeypatch.setattr(socket.socket, "connect", refuse)
    monkeypatch.setattr(socket, "create_connection", refuse)


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_graph():
    return ingest(
        FIXTURES / "graph" / "nodes.tsv",
        FIXTURES / "graph" / "edges.tsv",
        relation_descriptions=load_kv_file(FIXTURES / "graph" / "relation_descriptions.tsv"),
        parent_child=load_parent_child_file(FIXTURES / "graph" / "parent_child.tsv"),
        preferred_terms=load_kv_file(FIXTURES / "graph" / "preferred_terms.tsv"),
    )


@pytest.fixture(scope="session")
def fixture_config():
    return load_config(FIXTURES / "config.yaml")


@pytest.fixture()
def fixture_runtime(fixture_config):
    # Function-scoped on purpose: the scripted backend records calls, and a
    # shared instance would leak state between tests.
    return build_runtime(fixture_config)


# -- acceptance summary --------------------------------------------------------

_ACCEPT_DETAILS: dict[str, str] = {}


@pytest.fixture
def acceptance(request):
    """Record a detail string shown next to this criterion's PASS/FAIL line."""

    def record(detail: str = "") -> None:
        _ACCEPT_DETAILS[request.node.name] = detail

    return record


def _criterion_label(test_name: str) -> str:
    match = re.match(r"test_c(\d+)_(.*)", test_name)
    if not match:
        return test_name
    number = int(match.group(1))
    return f"criterion {number:2d} {match.group(2).replace('_', '-')}"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows: list[tuple[str, str]] = []
    for status, flag in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::" in nodeid and getattr(report, "when", "call") == "call":
                rows.append((nodeid.split("::")[-1], flag))
    if not rows:
        return
    rows.sort()
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, flag in rows:
        detail = _ACCEPT_DETAILS.get(name, "")
        suffix = f" - {detail}" if detail else ""
        terminalreporter.write_line(f"{_criterion_label(name)}: {flag}{suffix}")
