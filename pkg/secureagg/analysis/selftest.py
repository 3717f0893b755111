"""
Exhaustive checks on the toy parameters: the 19-point curve over F_17 and
the Okamoto-Uchiyama instance p=11, q=7, g=2. The oracles here do their own
small-modulus arithmetic and share no code with the group law or the
decryption they check.
"""
from collections import OrderedDict
from functools import lru_cache
from itertools import product
import logging
import time

import pandas as pd

from secureagg.crypto.agg_sig import (AggSignature, VerifyKey,
                                      keys_from_scalar, nonce_from_scalar,
                                      sign, combine_sigs, combine_keys,
                                      verify)
from secureagg.crypto.ec_group import (INFINITY, Point, get_curve,
                                       enumerate_points, point_add)
from secureagg.crypto.ou_phe import (ou_keys_from_primes, raw_encrypt,
                                     ou_add, ou_decrypt)
from secureagg.errors import DegenerateOutcome

log = logging.getLogger(__name__)

TOY_CURVE = "toy"
TOY_OU = {"p": 11, "q": 7, "g": 2}


def _divide(num, den, q):
    """ the lam with lam * den = num mod q, by search """
    for lam in range(q):
        if lam * den % q == num % q:
            return lam
    raise ArithmeticError("{} has no inverse mod {}".format(den, q))


def oracle_add(c, P, Q):
    """ chord-and-tangent addition without modular inverses """
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    q = c.q
    if P.x == Q.x and (P.y + Q.y) % q == 0:
        return INFINITY
    if P == Q:
        lam = _divide(3 * P.x * P.x + c.a, 2 * P.y, q)
    else:
        lam = _divide(Q.y - P.y, Q.x - P.x, q)
    x3 = (lam * lam - P.x - Q.x) % q
    return Point(x3, (lam * (P.x - x3) - P.y) % q)


def check_addition_table(c):
    """ compare point_add to the oracle on every pair of points. returns
    (number of pairs, list of mismatching pairs) """
    points = enumerate_points(c)
    mismatches = [(P, Q) for P, Q in product(points, repeat=2)
                  if point_add(c, P, Q) != oracle_add(c, P, Q)]
    return len(points) ** 2, mismatches


def check_completeness(c):
    """
    Every admissible (z_1, z_2, k, m_1, m_2) on a small curve: the summed
    signature has to verify against the summed key.

    Tuples are skipped where k gives r_x = 0, where a single signature is
    zero, where the signature sum is zero or where the keys cancel.

    Returns
    -------
    n_checked: int
    n_skipped: int
    failures: list of tuples
    """
    p = c.p_ord
    keys = {z: keys_from_scalar(c, z)[1] for z in range(1, p)}
    nonces = {k: nonce_from_scalar(c, 0, k) for k in range(1, p)}
    signatures = {}
    for z, k, m in product(range(1, p), range(1, p), range(p)):
        if nonces[k] is None:
            continue
        try:
            signatures[(z, k, m)] = sign(c, keys_from_scalar(c, z)[0], m,
                                         nonces[k])
        except DegenerateOutcome:
            pass

    # ~2e6 tuples over few distinct sums and verify inputs
    @lru_cache(maxsize=None)
    def key_sum(z_1, z_2):
        try:
            return combine_keys(c, [keys[z_1], keys[z_2]]).Z
        except DegenerateOutcome:
            return None

    @lru_cache(maxsize=None)
    def signature_sum(s_1, s_2):
        try:
            return combine_sigs(c, [s_1, s_2]).s
        except DegenerateOutcome:
            return None

    @lru_cache(maxsize=None)
    def cached_verify(m, s, Z, r_x):
        return verify(c, m, AggSignature(s, 2), VerifyKey(Z), r_x)

    n_checked, n_skipped, failures = 0, 0, []
    for z_1, z_2, k, m_1, m_2 in product(range(1, p), range(1, p),
                                         range(1, p), range(p), range(p)):
        s_1 = signatures.get((z_1, k, m_1))
        s_2 = signatures.get((z_2, k, m_2))
        if s_1 is None or s_2 is None:
            n_skipped += 1
            continue
        s, Z = signature_sum(s_1, s_2), key_sum(z_1, z_2)
        if s is None or Z is None:
            n_skipped += 1
            continue
        n_checked += 1
        if not cached_verify((m_1 + m_2) % p, s, Z, nonces[k].r_x):
            failures.append((z_1, z_2, k, m_1, m_2))
    return n_checked, n_skipped, failures


def check_ou_example():
    """ Dec(Enc(3) * Enc(4) mod 847) = 7 with g_p = 56, L(56) = 5 and
    5^-1 mod 11 = 9, against hand arithmetic. returns a list of failed
    checks """
    p, q, g = TOY_OU["p"], TOY_OU["q"], TOY_OU["g"]
    n = p * p * q
    pk, sk = ou_keys_from_primes(p, q, g)
    failed = []
    if n != 847 or pk.n != 847:
        failed.append("n")
    if sk.g_p != pow(g, p - 1, p * p) or sk.g_p != 56:
        failed.append("g_p")
    if (sk.g_p - 1) // p != 5 or sk.l_inv != 9 or 5 * 9 % 11 != 1:
        failed.append("L(g_p)^-1")

    # 4 is at the capacity bound, so the unchecked path encrypts it
    ct = ou_add(pk, raw_encrypt(pk, 3, 5), raw_encrypt(pk, 4, 2))
    h = pow(g, n, n)
    by_hand = pow(g, 3, n) * pow(h, 5, n) * pow(g, 4, n) * pow(h, 2, n) % n
    if ct.c != by_hand:
        failed.append("ciphertext product")
    c_p = pow(by_hand, p - 1, p * p)
    if (c_p - 1) // p * 9 % p != 7:
        failed.append("hand decryption")
    if ou_decrypt(sk, ct) != 7:
        failed.append("decryption")
    return failed


def run_selftest():
    """
    Run all toy checks.

    Returns
    -------
    df: pd.DataFrame
        one row per check with name, checked cases, failures and duration
    """
    c = get_curve(TOY_CURVE)
    rows = []

    start = time.time()
    n_pairs, mismatches = check_addition_table(c)
    rows.append(OrderedDict([("check", "addition table"),
                             ("cases", n_pairs),
                             ("failures", len(mismatches)),
                             ("duration [s]", time.time() - start)]))
    log.info("addition table: {} pairs, {} mismatches".format(
        n_pairs, len(mismatches)))

    start = time.time()
    n_checked, n_skipped, failures = check_completeness(c)
    rows.append(OrderedDict([("check", "aggregate signature completeness"),
                             ("cases", n_checked),
                             ("failures", len(failures)),
                             ("duration [s]", time.time() - start)]))
    log.info("completeness: {} tuples checked, {} not admissible, {} "
             "failures".format(n_checked, n_skipped, len(failures)))

    start = time.time()
    failed = check_ou_example()
    rows.append(OrderedDict([("check", "okamoto-uchiyama worked example"),
                             ("cases", 1),
                             ("failures", len(failed)),
                             ("duration [s]", time.time() - start)]))
    if failed:
        log.error("worked example failed at {}".format(", ".join(failed)))
    return pd.DataFrame(rows)
