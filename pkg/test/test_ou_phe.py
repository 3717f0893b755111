import pytest

from secureagg.analysis.selftest import check_ou_example
from secureagg.crypto.ou_phe import (OuCiphertext, ou_keys_from_primes,
                                     ou_keygen, raw_encrypt, ou_encrypt,
                                     ou_decrypt, ou_add, ou_add_many,
                                     public_key_to_record,
                                     public_key_from_record,
                                     private_key_to_record,
                                     private_key_from_record)
from secureagg.utils.numeric import Rng, rand_range
from secureagg.errors import (ParameterError, PlaintextOutOfRange,
                              MalformedCiphertext)


def test_toy_key(toy_ou):
    pk, sk = toy_ou
    assert pk.n == 847
    assert pk.h_elem == pow(2, 847, 847)
    assert sk.g_p == 56
    assert (sk.g_p - 1) // 11 == 5
    assert sk.l_inv == 9
    assert pk.capacity == 4


def test_toy_worked_example(toy_ou):
    pk, sk = toy_ou
    ct = ou_add(pk, raw_encrypt(pk, 3, 10), raw_encrypt(pk, 4, 20))
    assert ou_decrypt(sk, ct) == 7
    assert check_ou_example() == []


def test_toy_capacity(toy_ou):
    pk, sk = toy_ou
    rng = Rng(0)
    assert ou_decrypt(sk, ou_encrypt(pk, 3, rng)) == 3
    with pytest.raises(PlaintextOutOfRange):
        ou_encrypt(pk, 4, rng)
    with pytest.raises(PlaintextOutOfRange):
        ou_encrypt(pk, -1, rng)
    # r = 0 drops the blinding factor
    assert raw_encrypt(pk, 3, 0).c == pow(2, 3, 847)


def test_toy_homomorphism(toy_ou):
    pk, sk = toy_ou
    rng = Rng(21)
    for _ in range(1000):
        a, b = rand_range(rng, 0, 6), rand_range(rng, 0, 6)
        ct_a = raw_encrypt(pk, a, rand_range(rng, 1, pk.n))
        ct_b = raw_encrypt(pk, b, rand_range(rng, 1, pk.n))
        assert ou_decrypt(sk, ou_add(pk, ct_a, ct_b)) == a + b


def test_standard_homomorphism(standard_ou):
    pk, sk = standard_ou
    assert pk.n.bit_length() >= 1534
    rng = Rng(22)
    half = pk.capacity // 2
    for _ in range(1000):
        a, b = rand_range(rng, 0, half), rand_range(rng, 0, half)
        ct = ou_add(pk, ou_encrypt(pk, a, rng), ou_encrypt(pk, b, rng))
        assert ou_decrypt(sk, ct) == a + b


def test_add_many(small_ou):
    pk, sk = small_ou
    rng = Rng(23)
    values = [rand_range(rng, 0, 1000) for _ in range(50)]
    ct = ou_add_many(pk, [ou_encrypt(pk, v, rng) for v in values])
    assert ou_decrypt(sk, ct) == sum(values)
    # multiplying by g adds one
    assert ou_decrypt(sk, OuCiphertext(ct.c * pk.g % pk.n)) == sum(values) + 1
    with pytest.raises(ParameterError):
        ou_add_many(pk, [])


def test_encryption_is_probabilistic(small_ou):
    pk, sk = small_ou
    rng = Rng(24)
    n_distinct = 0
    for _ in range(1000):
        m = rand_range(rng, 0, 1000)
        a, b = ou_encrypt(pk, m, rng), ou_encrypt(pk, m, rng)
        n_distinct += a != b
        assert ou_decrypt(sk, a) == ou_decrypt(sk, b) == m
    assert n_distinct == 1000


def test_decryption_wraps_above_capacity(toy_ou):
    pk, sk = toy_ou
    rng = Rng(26)
    for m in range(pk.capacity, 60):
        ct = raw_encrypt(pk, m, rand_range(rng, 1, pk.n))
        assert ou_decrypt(sk, ct) == m % 11
    assert ou_decrypt(sk, raw_encrypt(pk, 11, 5)) == 0
    assert ou_decrypt(sk, raw_encrypt(pk, 29, 5)) == 7


def test_malformed_ciphertexts(toy_ou):
    pk, sk = toy_ou
    for c in [0, 11, 7, 847, 900]:
        with pytest.raises(MalformedCiphertext):
            ou_decrypt(sk, OuCiphertext(c))


def test_keygen(small_ou):
    pk, sk = small_ou
    assert sk.p_ou.bit_length() == sk.q_ou.bit_length() == 64
    assert pk.n == sk.p_ou ** 2 * sk.q_ou
    assert pk.capacity == 2 ** 62
    assert pk.capacity < sk.p_ou
    pk_16, sk_16 = ou_keygen(16, Rng(25))
    assert pk_16.capacity == 2 ** 14
    assert ou_keygen(16, Rng(25)) == (pk_16, sk_16)
    with pytest.raises(ParameterError):
        ou_keygen(7, Rng(25))


def test_keys_from_primes_checks():
    with pytest.raises(ParameterError):
        ou_keys_from_primes(11, 11, 2)
    # 3^10 = 1 mod 121, so 3 has the wrong order
    with pytest.raises(ParameterError):
        ou_keys_from_primes(11, 7, 3)
    with pytest.raises(ParameterError):
        ou_keys_from_primes(11, 7, 847)


def test_key_records(small_ou):
    pk, sk = small_ou
    assert public_key_from_record(public_key_to_record(pk)) == pk
    assert private_key_from_record(private_key_to_record(sk, pk)) == (pk, sk)
    record = public_key_to_record(pk)
    record["h"] = hex(pk.h_elem + 1)
    with pytest.raises(ParameterError):
        public_key_from_record(record)
