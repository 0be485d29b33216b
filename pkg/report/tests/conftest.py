"""Fixtures: simulation output directories produced through the tokensim CLI.

The report tool consumes only the files the simulator writes, so the
fixtures generate them the same way a user would, via subprocess.
"""

import shutil
import subprocess

import pytest


def _simulate(out_dir, *extra):
    exe = shutil.which("tokensim")
    if exe is None:
        pytest.skip("tokensim CLI not installed")
    subprocess.run(
        [exe, "simulate", "--preset", "baseline", "--out", str(out_dir), *extra],
        check=True, capture_output=True)
    return out_dir


@pytest.fixture(scope="session")
def baseline_dir(tmp_path_factory):
    """Full baseline output: 100 runs x 1040 weeks."""
    return _simulate(tmp_path_factory.mktemp("full") / "baseline")


@pytest.fixture(scope="session")
def small_dir(tmp_path_factory):
    """Fast output for unit-level checks: 5 runs x 120 weeks."""
    return _simulate(tmp_path_factory.mktemp("small") / "out",
                     "--runs", "5", "--steps", "120")
