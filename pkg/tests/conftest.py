"""Shared corpus helpers; analyses are cached for the whole session."""

from __future__ import annotations

import functools
import itertools
import json
import sys
from pathlib import Path

import pytest

from pathlens.driver import AnalyzerConfig, analyze_program
from pathlens.frontend import SourceProgram

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"
MANIFEST = json.loads((CORPUS / "manifest.json").read_text())


def entries(section: str) -> list:
    return MANIFEST[section]


def entry(section: str, name: str) -> dict:
    return next(e for e in MANIFEST[section] if e["name"] == name)


def path_of(e: dict) -> Path:
    return CORPUS / e["file"]


def inputs(e: dict):
    """Every argument tuple in the entry's concrete domain."""
    return itertools.product(*e["domain"])


@functools.lru_cache(maxsize=None)
def analysis(section: str, name: str, backward: bool = True, skip: bool = True):
    e = entry(section, name)
    src = SourceProgram.from_paths([path_of(e)], e["entry"])
    return analyze_program(src, AnalyzerConfig(entry=e["entry"], backward=backward, skip=skip))


def analyze_text(text: str, entry_fn: str = "main", **options):
    return analyze_program(SourceProgram.from_text(text, entry_fn), AnalyzerConfig(entry=entry_fn, **options))


@pytest.fixture
def corpus_analysis():
    return analysis


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
