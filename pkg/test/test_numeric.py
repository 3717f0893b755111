import hashlib

from scipy.stats import chisquare
import numpy as np
import pytest

from secureagg.utils.numeric import (Rng, mod_exp, mod_inv, rand_range,
                                     is_probable_prime, gen_prime,
                                     SMALL_PRIMES)
from secureagg.errors import ParameterError, NonInvertible


def test_mod_exp():
    assert mod_exp(2, 10, 1000) == 24
    assert mod_exp(3, 0, 7) == 1
    assert mod_exp(0, 5, 7) == 0

    expected = 1
    for _ in range(847):
        expected = expected * 2 % 847
    assert mod_exp(2, 847, 847) == expected

    with pytest.raises(ParameterError):
        mod_exp(2, 3, 1)
    with pytest.raises(ParameterError):
        mod_exp(2, -1, 7)


def test_mod_exp_adds_exponents():
    rng = Rng(5)
    for _ in range(1000):
        m = rand_range(rng, 2, 2 ** 64)
        b = rand_range(rng, 0, m)
        e_1, e_2 = rand_range(rng, 0, 2 ** 32), rand_range(rng, 0, 2 ** 32)
        assert mod_exp(b, e_1 + e_2, m) == \
            mod_exp(b, e_1, m) * mod_exp(b, e_2, m) % m
        assert mod_exp(b, e_1, m) == pow(b, e_1, m)


def test_mod_inv():
    for m in [2, 11, 19, 847, 2 ** 61 - 1]:
        assert mod_inv(1, m) == 1
    assert mod_inv(5, 11) == 9
    assert mod_inv(16, 11) == 9
    for a in range(1, 19):
        assert a * mod_inv(a, 19) % 19 == 1
    with pytest.raises(NonInvertible):
        mod_inv(4, 8)
    with pytest.raises(NonInvertible):
        mod_inv(0, 11)
    with pytest.raises(ParameterError):
        mod_inv(3, 1)


def test_rng_is_counter_mode_sha256():
    expected = hashlib.sha256(bytes(8) + bytes(8)).digest()
    assert Rng(0).random_bytes(32) == expected

    rng = Rng(5)
    assert rng.random_bytes(10) + rng.random_bytes(22) == \
        Rng(5).random_bytes(32)
    assert Rng(5).random_bytes(64) != Rng(6).random_bytes(64)

    with pytest.raises(ParameterError):
        Rng(-1)
    with pytest.raises(ParameterError):
        Rng(2 ** 64)


def test_rng_fork():
    rng = Rng(1)
    a = rng.fork("a").random_bytes(16)
    assert rng.random_bytes(8) == Rng(1).random_bytes(8)
    assert a == Rng(1).fork("a").random_bytes(16)
    assert a != Rng(1).fork("b").random_bytes(16)


def test_rand_range():
    rng = Rng(2)
    values = [rand_range(rng, 3, 7) for _ in range(1000)]
    assert min(values) == 3
    assert max(values) == 6
    assert rand_range(rng, 5, 6) == 5
    with pytest.raises(ParameterError):
        rand_range(rng, 5, 5)


def test_rand_range_is_uniform():
    rng = Rng(12)
    draws = np.array([rand_range(rng, 0, 10) for _ in range(10 ** 4)])
    counts = np.bincount(draws, minlength=10)
    assert counts.sum() == 10 ** 4
    _, p_value = chisquare(counts)
    assert p_value > 1e-4


def test_is_probable_prime():
    for p in [2, 3, 17, 19, 997, 1009, 7919, 2 ** 61 - 1, 2 ** 127 - 1]:
        assert is_probable_prime(p)
    # 561 and 41041 are carmichael numbers
    for n in [-7, 0, 1, 4, 561, 1001, 41041, 2 ** 61 + 1, 1009 * 1013]:
        assert not is_probable_prime(n)
    assert SMALL_PRIMES[:5] == [2, 3, 5, 7, 11]
    assert SMALL_PRIMES[-1] == 997


def test_gen_prime():
    rng = Rng(8)
    for _ in range(1000):
        p = gen_prime(8, rng)
        assert 2 ** 7 <= p < 2 ** 8
        assert all(p % d for d in range(2, 16))
    for _ in range(1000):
        p = gen_prime(16, rng)
        assert p.bit_length() == 16
        assert all(p % d for d in range(2, 256))
    p = gen_prime(128, rng)
    assert p.bit_length() == 128
    assert is_probable_prime(p)
    assert gen_prime(128, Rng(9)) == gen_prime(128, Rng(9))
    with pytest.raises(ParameterError):
        gen_prime(3, rng)
