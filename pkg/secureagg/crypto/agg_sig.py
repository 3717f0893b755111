"""
Additively aggregatable ECDSA-style signatures.

All signers of an epoch share the nonce k (R = k * T, r_x = R.x mod p_ord)
and sign their raw reading m_i without hashing:

    s_i = k^-1 (m_i + z_i r_x) mod p_ord

Because every s_i is linear in (m_i, z_i), the sum s = sum(s_i) verifies
against m = sum(m_i) and Z = sum(z_i T) like a single ECDSA signature.

Sharing k has a price: anyone knowing k and a node's s_i recovers that
node's z_i = (s_i k - m_i) r_x^-1. The scheme is implemented as specified
and this is not mitigated here.
"""
from dataclasses import dataclass
from functools import reduce
import logging

from secureagg.crypto.ec_group import (INFINITY, Point, point_add,
                                       scalar_mul, x_mod_order,
                                       is_on_curve)
from secureagg.utils.numeric import mod_inv, rand_range
from secureagg.errors import (ParameterError, NonInvertible,
                              DegenerateSignature, DegenerateAggregate,
                              DegenerateKeySum)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SigningKey:
    z: int


@dataclass(frozen=True)
class VerifyKey:
    Z: Point


@dataclass(frozen=True)
class EpochNonce:
    epoch_id: int
    k: int
    R: Point
    r_x: int


@dataclass(frozen=True)
class AggSignature:
    s: int
    count: int = 1


def keygen(c, rng):
    z = rand_range(rng, 1, c.p_ord)
    return keys_from_scalar(c, z)


def keys_from_scalar(c, z):
    if not 1 <= z < c.p_ord:
        raise ParameterError("signing scalar has to lie in [1, p_ord)")
    return SigningKey(z), VerifyKey(scalar_mul(c, z, c.T))


def nonce_from_scalar(c, epoch_id, k):
    """ returns None when k gives r_x = 0 """
    if not 1 <= k < c.p_ord:
        raise ParameterError("nonce scalar has to lie in [1, p_ord)")
    R = scalar_mul(c, k, c.T)
    r_x = x_mod_order(c, R)
    if r_x == 0:
        return None
    return EpochNonce(epoch_id=epoch_id, k=k, R=R, r_x=r_x)


def epoch_setup(c, epoch_id, rng):
    """ draw the shared epoch nonce, resampling k until r_x != 0 """
    if not 0 <= epoch_id < 2 ** 64:
        raise ParameterError("epoch id has to be a 64-bit unsigned integer")
    while True:
        nonce = nonce_from_scalar(c, epoch_id, rand_range(rng, 1, c.p_ord))
        if nonce is not None:
            return nonce
        log.warning("epoch {}: nonce with r_x = 0, resampling".format(
            epoch_id))


def sign(c, sk, m, nonce):
    if not 0 <= m < c.p_ord:
        raise ParameterError("message has to lie in [0, p_ord)")
    # k^-1 is the intermediate V of the signing steps
    v = mod_inv(nonce.k, c.p_ord)
    s_i = v * (m + sk.z * nonce.r_x) % c.p_ord
    if s_i == 0:
        raise DegenerateSignature(
            "signature is zero, epoch {} needs a fresh nonce".format(
                nonce.epoch_id))
    return s_i


def combine_sigs(c, sigs):
    """ sum of signature scalars mod p_ord. accepts plain scalars or
    AggSignature values (whose counts add up) """
    sigs = list(sigs)
    if not sigs:
        raise ParameterError("need at least one signature")
    scalars = [sig.s if isinstance(sig, AggSignature) else sig
               for sig in sigs]
    counts = [sig.count if isinstance(sig, AggSignature) else 1
              for sig in sigs]
    for s_i in scalars:
        if not 1 <= s_i < c.p_ord:
            raise ParameterError("signature scalar outside [1, p_ord)")
    s = sum(scalars) % c.p_ord
    if s == 0:
        raise DegenerateAggregate("aggregate signature is zero")
    return AggSignature(s=s, count=sum(counts))


def combine_keys(c, keys):
    keys = list(keys)
    if not keys:
        raise ParameterError("need at least one verify key")
    Z = reduce(lambda P, Q: point_add(c, P, Q), [key.Z for key in keys])
    if Z.is_infinity:
        raise DegenerateKeySum("verify keys sum to the point at infinity")
    return VerifyKey(Z)


def verify(c, m, sig, Z, r_x):
    """
    Verify an (aggregate) signature.

    Parameters
    ----------
    c: :class:`.CurveParams`
    m: int
        (aggregate) message in [0, p_ord)
    sig: AggSignature
    Z: VerifyKey
        (aggregate) public key
    r_x: int
        x-coordinate of the epoch's R reduced mod p_ord

    Returns
    -------
    accepted: bool
    """
    p = c.p_ord
    if not 0 <= m < p:
        raise ParameterError("message has to lie in [0, p_ord)")
    if not 0 < r_x < p:
        raise ParameterError("r_x has to lie in (0, p_ord)")
    if not 0 < sig.s < p or not is_on_curve(c, Z.Z) or Z.Z.is_infinity:
        return False
    try:
        w = mod_inv(sig.s, p)
    except NonInvertible:
        return False
    u_1 = m * w % p
    u_2 = r_x * w % p
    X = point_add(c, scalar_mul(c, u_1, c.T), scalar_mul(c, u_2, Z.Z))
    if X == INFINITY:
        return False
    return x_mod_order(c, X) == r_x


def scalar_to_bytes(c, s):
    return s.to_bytes(c.order_bytes, "big")


def scalar_from_bytes(c, data):
    if len(data) != c.order_bytes:
        raise ParameterError("scalar encoding has to be {} bytes".format(
            c.order_bytes))
    return int.from_bytes(data, "big")
