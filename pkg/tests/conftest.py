"""Shared fixtures. The action log is redirected before the package is imported."""

import os
import tempfile

os.environ["HIERCON_LOG_FILE"] = os.path.join(tempfile.mkdtemp(prefix="hiercon-test-"), "hiercon.log")

import pytest  # noqa: E402

from src.graph import add_reverse_edges, gen_path, gen_path_reverse, gen_star  # noqa: E402


@pytest.fixture
def path3():
    """1 -> 2 -> 3, unit weights, no reverse edges."""
    return add_reverse_edges(gen_path(3), [])


@pytest.fixture
def ring6():
    """P6 plus reverse edge (1, 6): the unit directed ring on 6 vertices."""
    return gen_path_reverse(6)


@pytest.fixture
def ring10():
    return gen_path_reverse(10)


@pytest.fixture
def star4():
    """Hub 1, rho = 1, reverse edges (1, 3, 2.0) and (2, 4, 0.5)."""
    return add_reverse_edges(gen_star(4, 1.0), [(1, 3, 2.0), (2, 4, 0.5)])
