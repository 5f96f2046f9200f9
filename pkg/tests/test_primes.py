"""Sieve, von Mangoldt and tapered-weight tests against independent oracles."""

import math
import os

import numpy as np
import pytest

from zetalab import primes
from zetalab.errors import DomainError


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def test_sieve_small_enumeration():
    assert primes.sieve(10).primes.tolist() == [2, 3, 5, 7]


def test_sieve_100_against_trial_division():
    table = primes.sieve(100)
    assert len(table) == 25
    oracle = [n for n in range(2, 101) if trial_division_is_prime(n)]
    assert table.primes.tolist() == oracle


def test_sieve_1e6_count(prime_table_1e6):
    assert len(prime_table_1e6) == 78498


def test_sieve_domain_error():
    with pytest.raises(DomainError):
        primes.sieve(1)


def test_power_index_complete():
    table = primes.sieve(1000)
    for n in range(2, 1001):
        pk = table.prime_power(n)
        # oracle: factor n fully
        m, p = n, None
        for q in range(2, math.isqrt(n) + 1):
            if m % q == 0:
                p = q
                break
        if p is None:
            assert pk == (n, 1)
        else:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            if m == 1:
                assert pk == (p, k)
            else:
                assert pk is None


def test_von_mangoldt_examples():
    assert primes.von_mangoldt(1) == 0.0
    assert primes.von_mangoldt(8) == pytest.approx(math.log(2), abs=1e-12)
    assert primes.von_mangoldt(6) == 0.0
    with pytest.raises(DomainError):
        primes.von_mangoldt(0)


def test_von_mangoldt_with_table_matches_fallback(prime_table_1e6):
    for n in (2, 9, 12, 97, 128, 3125, 999983):
        assert primes.von_mangoldt(n, prime_table_1e6) == pytest.approx(
            primes.von_mangoldt(n), abs=1e-12
        )


def test_lambda_u_examples():
    assert primes.lambda_u(9, 10.0) == pytest.approx(math.log(3), abs=1e-9)
    # taper denominator is log(u); with log(n) the four-term log-derivative
    # decomposition would miss by ~0.1/u
    assert primes.lambda_u(4, 3.0) == pytest.approx(
        math.log(2) * math.log(9 / 4) / math.log(3), abs=1e-9
    )
    assert primes.lambda_u(101, 10.0) == 0.0
    with pytest.raises(DomainError):
        primes.lambda_u(5, 1.0)


def test_lambda_u_bounds_and_continuity():
    u = 7.0
    for n in range(2, 60):
        lam_u = primes.lambda_u(n, u)
        lam = primes.von_mangoldt(n)
        assert 0.0 <= lam_u <= lam + 1e-15
        assert lam <= math.log(n) + 1e-15
    # branch agreement at the breakpoints: n = u and n = u^2
    assert primes.lambda_u(7, 7.0) == pytest.approx(math.log(7), abs=1e-12)
    assert primes.lambda_u(49, 7.0) == pytest.approx(0.0, abs=1e-12)


def test_lambda_u_pointwise_limit(prime_table_1e6):
    for n in range(2, 10001):
        assert primes.lambda_u(n, 1e5, prime_table_1e6) == primes.von_mangoldt(
            n, prime_table_1e6
        )


def test_chebyshev_trend(prime_table_1e6):
    n, _logn, lam = prime_table_1e6.power_arrays()
    ratios = []
    for cut in (1e4, 1e5, 1e6):
        ratios.append(float(np.sum(lam[n <= cut])) / cut)
    assert abs(ratios[-1] - 1.0) <= 0.02
    # the trend approaches 1
    assert abs(ratios[2] - 1.0) <= abs(ratios[0] - 1.0)


def test_lambda_u_array_matches_scalar(prime_table_1e6):
    n, _logn, logp = prime_table_1e6.power_arrays()
    sel = n <= 5000
    vec = primes.lambda_u_array(n[sel], logp[sel], 50.0)
    for i in np.random.default_rng(0).choice(np.flatnonzero(sel), 50):
        assert vec[i] == pytest.approx(
            primes.lambda_u(int(n[i]), 50.0, prime_table_1e6), abs=1e-12
        )


def test_cache_round_trip(tmp_path):
    table = primes.sieve(10000)
    path = tmp_path / "sieve.bin"
    primes.save_cache(table, path)
    loaded = primes.load_cache(path, 10000)
    assert loaded is not None
    assert np.array_equal(loaded.primes, table.primes)
    assert loaded.power_index == table.power_index
    assert primes.load_cache(path, 20000) is None  # limit mismatch regenerates


def test_cached_sieve_creates_and_reuses(tmp_path):
    t1 = primes.cached_sieve(5000, tmp_path)
    assert os.path.exists(tmp_path / "sieve_5000.bin")
    t2 = primes.cached_sieve(5000, tmp_path)
    assert np.array_equal(t1.primes, t2.primes)
