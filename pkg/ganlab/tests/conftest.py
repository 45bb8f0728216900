"""Helpers for exercising the level-toolkit file surfaces.

Corpora are produced by invoking the toolkit CLI in a subprocess, so these
tests only touch the documented external interfaces.
"""

from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

TOOLKIT = [sys.executable, "-m", "matchgrid"]


def run_toolkit(*argv: str) -> subprocess.CompletedProcess:
    proc = subprocess.run(
        TOOLKIT + [str(a) for a in argv], capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
    return proc


def synth_corpus(path: Path, count: int, seed: int, strength: float = 1.0,
                 symmetry: str = "vertical") -> Path:
    run_toolkit(
        "synth", "--count", count, "--seed", seed, "--symmetry", symmetry,
        "--strength", strength,
        "--tile-weights", "empty=0.5,regular=0.3,block=0.2",
        "--jelly-rate", "0.15", "-o", path,
    )
    return path


def merge_corpora(out: Path, *parts: Path) -> Path:
    levels = []
    for part in parts:
        levels.extend(json.loads(part.read_text())["levels"])
    out.write_text(json.dumps({"format_version": 1, "levels": levels},
                              separators=(",", ":")) + "\n")
    return out


@pytest.fixture(scope="session")
def small_corpus(tmp_path_factory) -> Path:
    return synth_corpus(tmp_path_factory.mktemp("data") / "corpus.json",
                        count=20, seed=13)
