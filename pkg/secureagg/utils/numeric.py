""" arbitrary-precision integer helpers: modular arithmetic, primes and a
seedable random number generator.

The generator in here is deterministic on purpose so that every simulation
can be replayed bit by bit from its seed. It is NOT a cryptographically
secure source of randomness and must not be used to protect real data.
"""
import hashlib
import logging

from secureagg.errors import ParameterError, NonInvertible

log = logging.getLogger(__name__)

MILLER_RABIN_ROUNDS = 40
SEED_BITS = 64


def _sieve(maximum):
    """ primes below maximum (sieve of eratosthenes) """
    is_prime = [True] * maximum
    is_prime[0] = is_prime[1] = False
    for i in range(2, int(maximum ** .5) + 1):
        if is_prime[i]:
            for j in range(i * i, maximum, i):
                is_prime[j] = False
    return [i for i, prime in enumerate(is_prime) if prime]


# trial division by these runs before miller-rabin
SMALL_PRIMES = _sieve(1000)


class Rng(object):
    """
    Deterministic pseudorandom generator in counter mode: block i of the
    stream is SHA-256(seed || i), both as 8 byte big-endian integers.

    Same seed gives the same stream on every platform and every run. Not
    suitable for cryptographic use.

    Parameters
    ----------
    seed: int
        64-bit unsigned seed
    """
    def __init__(self, seed):
        if not isinstance(seed, int) or not 0 <= seed < 2 ** SEED_BITS:
            raise ParameterError(
                "seed has to be a 64-bit unsigned integer, got {}"
                .format(seed))
        self.seed = seed
        self._key = seed.to_bytes(8, "big")
        self._counter = 0
        self._buffer = b""

    def __repr__(self):
        return "Rng(seed={}, counter={})".format(self.seed, self._counter)

    def random_bytes(self, n_bytes):
        while len(self._buffer) < n_bytes:
            block = hashlib.sha256(
                self._key + self._counter.to_bytes(8, "big")).digest()
            self._counter += 1
            self._buffer += block
        out, self._buffer = self._buffer[:n_bytes], self._buffer[n_bytes:]
        return out

    def random_bits(self, n_bits):
        """ uniform integer in [0, 2**n_bits) """
        n_bytes = (n_bits + 7) // 8
        value = int.from_bytes(self.random_bytes(n_bytes), "big")
        return value >> (8 * n_bytes - n_bits)

    def fork(self, label):
        """ derive an independent generator for a named sub-stream. does
        not advance this generator """
        digest = hashlib.sha256(
            self._key + b"/fork/" + str(label).encode("utf-8")).digest()
        return Rng(int.from_bytes(digest[:8], "big"))


def mod_exp(base, exp, modulus):
    """ base**exp mod modulus by square-and-multiply """
    if modulus < 2:
        raise ParameterError("modulus has to be >= 2, got {}".format(modulus))
    if base < 0 or exp < 0:
        raise ParameterError("base and exponent have to be non-negative")
    return pow(base, exp, modulus)


def mod_inv(a, m):
    """ x in [1, m) with a * x = 1 mod m """
    if m < 2:
        raise ParameterError("modulus has to be >= 2, got {}".format(m))
    try:
        return pow(a % m, -1, m)
    except ValueError:
        raise NonInvertible("{} is not invertible modulo {}".format(a, m))


def rand_range(rng, lo, hi):
    """ uniform integer in [lo, hi) using rejection sampling """
    if lo >= hi:
        raise ParameterError("empty range [{}, {})".format(lo, hi))
    span = hi - lo
    n_bits = (span - 1).bit_length()
    while True:
        candidate = rng.random_bits(n_bits)
        if candidate < span:
            return lo + candidate


def _miller_rabin(n, rounds, rng):
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        a = rand_range(rng, 2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = pow(x, 2, n)
            if x == n - 1:
                break
        else:
            return False
    return True


def is_probable_prime(n, rounds=MILLER_RABIN_ROUNDS, rng=None):
    """ trial division by primes below 1000 followed by miller-rabin.
    witnesses are drawn from rng, a fixed-seed generator if none is given """
    if n < 2:
        return False
    for p in SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if rng is None:
        rng = Rng(0)
    return _miller_rabin(n, rounds, rng)


def gen_prime(bits, rng):
    """ random prime with exactly bits bits (top bit set) """
    if bits < 4:
        raise ParameterError("need at least 4 bits, got {}".format(bits))
    n_candidates = 0
    while True:
        n_candidates += 1
        candidate = rng.random_bits(bits) | (1 << (bits - 1)) | 1
        if is_probable_prime(candidate, rng=rng):
            log.debug("found {}-bit prime after {} candidates".format(
                bits, n_candidates))
            return candidate
