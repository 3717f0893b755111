"""
Binary wire format of the upward aggregation message. All integers are
big-endian:

    version (1) | epoch_id (8) | count (2) | contributor ids (2 each,
    strictly ascending) | ct length (2) | ct (minimal bytes) |
    s (fixed, byte length of p_ord) | 0x04 | X | Y (fixed, byte length of q)

Ascending ids and minimal ciphertext bytes make the encoding canonical.
"""
from dataclasses import dataclass
from math import gcd
import struct

from secureagg.crypto.agg_sig import (AggSignature, VerifyKey,
                                      scalar_to_bytes, scalar_from_bytes)
from secureagg.crypto.ec_group import point_to_bytes, point_from_bytes
from secureagg.crypto.ou_phe import OuCiphertext
from secureagg.errors import (MalformedMessage, Truncated, UnsupportedVersion,
                              InvalidPoint, InvalidCiphertext,
                              PointNotOnCurve)

WIRE_VERSION = 1
MAX_NODE_ID = 2 ** 16 - 1

_HEADER = struct.Struct(">BQH")
_UINT16 = struct.Struct(">H")


@dataclass(frozen=True)
class AggMessage:
    epoch_id: int
    contributors: frozenset
    ct: OuCiphertext
    s: AggSignature
    Z: VerifyKey
    version: int = WIRE_VERSION

    def __post_init__(self):
        object.__setattr__(self, "contributors", frozenset(self.contributors))
        if self.version != WIRE_VERSION:
            raise UnsupportedVersion("wire version {} is not supported".format(
                self.version))
        if not self.contributors:
            raise MalformedMessage("message without contributors")
        if self.s.count != len(self.contributors):
            raise MalformedMessage(
                "signature count {} does not match {} contributors".format(
                    self.s.count, len(self.contributors)))


def encode(msg, dep):
    """ serialize msg. dep supplies the curve for the fixed-width fields """
    c = dep.curve
    ids = sorted(msg.contributors)
    ct_bytes = msg.ct.c.to_bytes((msg.ct.c.bit_length() + 7) // 8, "big")
    parts = [_HEADER.pack(msg.version, msg.epoch_id, len(ids))]
    parts.extend(_UINT16.pack(node_id) for node_id in ids)
    parts.append(_UINT16.pack(len(ct_bytes)))
    parts.append(ct_bytes)
    parts.append(scalar_to_bytes(c, msg.s.s))
    parts.append(point_to_bytes(c, msg.Z.Z))
    return b"".join(parts)


class _Reader(object):
    def __init__(self, data):
        self.data = bytes(data)
        self.offset = 0

    def take(self, n_bytes, what):
        end = self.offset + n_bytes
        if end > len(self.data):
            raise Truncated("buffer ends inside {} (need {} bytes at offset "
                            "{}, have {})".format(what, n_bytes, self.offset,
                                                  len(self.data)))
        chunk = self.data[self.offset:end]
        self.offset = end
        return chunk

    def uint16(self, what):
        return _UINT16.unpack(self.take(2, what))[0]


def decode(data, dep):
    """
    Parse and validate a wire message.

    Parameters
    ----------
    data: bytes
    dep: :class:`.Deployment`
        supplies curve and OU public key for range checks

    Returns
    -------
    msg: AggMessage
    """
    c, pk = dep.curve, dep.ou_pk
    reader = _Reader(data)
    if len(reader.data) < 1:
        raise Truncated("empty buffer")
    if reader.data[0] != WIRE_VERSION:
        raise UnsupportedVersion("wire version {} is not supported".format(
            reader.data[0]))
    version, epoch_id, count = _HEADER.unpack(
        reader.take(_HEADER.size, "header"))
    if count == 0:
        raise MalformedMessage("message without contributors")
    ids = [reader.uint16("contributor ids") for _ in range(count)]
    if any(a >= b for a, b in zip(ids, ids[1:])):
        raise MalformedMessage("contributor ids are not strictly ascending")

    ct_len = reader.uint16("ciphertext length")
    ct_bytes = reader.take(ct_len, "ciphertext")
    if ct_len == 0 or ct_bytes[0] == 0:
        raise MalformedMessage("ciphertext is not minimally encoded")
    ct = int.from_bytes(ct_bytes, "big")
    if not 0 < ct < pk.n or gcd(ct, pk.n) != 1:
        raise InvalidCiphertext("ciphertext is not a unit modulo n")

    s = scalar_from_bytes(c, reader.take(c.order_bytes, "signature"))
    if not 0 < s < c.p_ord:
        raise MalformedMessage("signature scalar outside [1, p_ord)")

    point_bytes = reader.take(1 + 2 * c.field_bytes, "public key")
    try:
        Z = point_from_bytes(c, point_bytes)
    except PointNotOnCurve as e:
        raise InvalidPoint(str(e))

    if reader.offset != len(reader.data):
        raise MalformedMessage("{} trailing bytes".format(
            len(reader.data) - reader.offset))
    return AggMessage(epoch_id=epoch_id, contributors=frozenset(ids),
                      ct=OuCiphertext(ct), s=AggSignature(s=s, count=count),
                      Z=VerifyKey(Z), version=version)
