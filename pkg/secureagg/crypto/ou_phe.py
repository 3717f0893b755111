"""
Okamoto-Uchiyama public-key encryption over n = p^2 q.

Encryption is C = g^m h^r mod n with h = g^n mod n, decryption is
m = L(C^(p-1) mod p^2) * L(g^(p-1) mod p^2)^-1 mod p with L(x) = (x - 1) / p.
Multiplying ciphertexts adds plaintexts, which is all an aggregating node
needs to combine readings it cannot read.
"""
from dataclasses import dataclass
from functools import reduce
from math import gcd
import logging

from secureagg.utils.numeric import mod_exp, mod_inv, gen_prime, rand_range
from secureagg.errors import (ParameterError, PlaintextOutOfRange,
                              MalformedCiphertext, NonInvertible)

log = logging.getLogger(__name__)


def _bits_per_prime(n):
    # p and q have the same bit length b, so n has between 3b - 2 and 3b bits
    return (n.bit_length() + 2) // 3


@dataclass(frozen=True)
class OuPublicKey:
    n: int
    g: int
    h_elem: int

    @property
    def capacity(self):
        """ plaintext bound B = 2^(b-2) < p for b-bit primes. sums below it
        decrypt exactly """
        return 1 << (_bits_per_prime(self.n) - 2)

    @property
    def n_bytes(self):
        return (self.n.bit_length() + 7) // 8

    def __repr__(self):
        return "<OuPublicKey {}-bit n>".format(self.n.bit_length())


@dataclass(frozen=True)
class OuPrivateKey:
    p_ou: int
    q_ou: int
    g_p: int
    l_inv: int

    @property
    def n(self):
        return self.p_ou * self.p_ou * self.q_ou

    def __repr__(self):
        return "<OuPrivateKey {}-bit p>".format(self.p_ou.bit_length())


@dataclass(frozen=True)
class OuCiphertext:
    c: int


def _l(x, p):
    return (x - 1) // p


def _derive_keys(p, q, g):
    """ check the order condition on g and assemble the key pair. returns
    None if g is unsuitable """
    n = p * p * q
    if not 1 < g < n or gcd(g, n) != 1:
        return None
    p_square = p * p
    g_p = mod_exp(g, p - 1, p_square)
    # g_p = 1 mod p always holds, order exactly p needs g_p != 1 mod p^2
    if g_p == 1:
        return None
    try:
        l_inv = mod_inv(_l(g_p, p), p)
    except NonInvertible:
        return None
    pk = OuPublicKey(n=n, g=g, h_elem=mod_exp(g, n, n))
    sk = OuPrivateKey(p_ou=p, q_ou=q, g_p=g_p, l_inv=l_inv)
    return pk, sk


def ou_keys_from_primes(p, q, g):
    """ key pair from fixed primes and generator, e.g. the p=11, q=7, g=2
    test instance """
    if p == q:
        raise ParameterError("p and q have to differ")
    keys = _derive_keys(p, q, g)
    if keys is None:
        raise ParameterError("g = {} does not satisfy the order condition"
                             .format(g))
    return keys


def ou_keygen(bits, rng):
    """
    Generate a key pair with two fresh bits-bit primes.

    Parameters
    ----------
    bits: int
        bit length of each prime, at least 8
    rng: :class:`.Rng`

    Returns
    -------
    pk, sk: OuPublicKey, OuPrivateKey
    """
    if bits < 8:
        raise ParameterError("need at least 8 bits per prime, got {}"
                             .format(bits))
    log.info("generating okamoto-uchiyama keys with {}-bit primes".format(
        bits))
    p = gen_prime(bits, rng)
    q = gen_prime(bits, rng)
    while q == p:
        q = gen_prime(bits, rng)
    n = p * p * q
    n_tries = 0
    while True:
        n_tries += 1
        keys = _derive_keys(p, q, rand_range(rng, 2, n))
        if keys is not None:
            break
    if n_tries > 1:
        log.debug("sampled g {} times".format(n_tries))
    return keys


def raw_encrypt(pk, m, r):
    """ g^m h^r mod n without any range check on m or r """
    return OuCiphertext(
        mod_exp(pk.g, m, pk.n) * mod_exp(pk.h_elem, r, pk.n) % pk.n)


def ou_encrypt(pk, m, rng):
    if not 0 <= m < pk.capacity:
        raise PlaintextOutOfRange("plaintext {} outside [0, {})".format(
            m, pk.capacity))
    return raw_encrypt(pk, m, rand_range(rng, 1, pk.n))


def ou_decrypt(sk, ct):
    n, p = sk.n, sk.p_ou
    if not 0 < ct.c < n or gcd(ct.c, n) != 1:
        raise MalformedCiphertext("ciphertext is not a unit modulo n")
    c_p = mod_exp(ct.c, p - 1, p * p)
    if c_p % p != 1:
        raise MalformedCiphertext("ciphertext is not in the p-subgroup")
    return _l(c_p, p) * sk.l_inv % p


def ou_add(pk, a, b):
    return OuCiphertext(a.c * b.c % pk.n)


def ou_add_many(pk, cts):
    cts = list(cts)
    if not cts:
        raise ParameterError("need at least one ciphertext")
    return reduce(lambda a, b: ou_add(pk, a, b), cts)


def public_key_to_record(pk):
    return {"n": hex(pk.n), "g": hex(pk.g), "h": hex(pk.h_elem)}


def public_key_from_record(record):
    pk = OuPublicKey(n=int(record["n"], 16), g=int(record["g"], 16),
                     h_elem=int(record["h"], 16))
    if pk.h_elem != mod_exp(pk.g, pk.n, pk.n):
        raise ParameterError("public key record: h != g^n mod n")
    return pk


def private_key_to_record(sk, pk):
    return {"p": hex(sk.p_ou), "q": hex(sk.q_ou), "g": hex(pk.g)}


def private_key_from_record(record):
    """ returns the full key pair, the public half is derived """
    return ou_keys_from_primes(int(record["p"], 16), int(record["q"], 16),
                               int(record["g"], 16))
