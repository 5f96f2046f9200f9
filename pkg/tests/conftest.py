"""Shared fixtures: cached sieve and zero tables, repo-local data directory."""

import os
import pathlib

# Point the data cache at a repo-local directory before the package reads it,
# so expensive sieves and zero scans are computed once per checkout.
_CACHE = pathlib.Path(__file__).resolve().parent.parent / ".zetalab_cache"
os.environ.setdefault("ZETALAB_DATA", str(_CACHE))

import pytest

from zetalab import primes, zeros


@pytest.fixture(scope="session")
def prime_table_1e6():
    return primes.cached_sieve(10**6, os.environ["ZETALAB_DATA"])


@pytest.fixture(scope="session")
def zeros_2e4():
    """Zero table covering (0, 2e4]; enough for t = 1e4 experiments."""
    return zeros.cached_zero_table(20004.0)


@pytest.fixture(scope="session")
def zeros_2e5():
    """Zero table covering (0, 2e5]; enough for t = 1e5 experiments."""
    return zeros.cached_zero_table(200004.0)
