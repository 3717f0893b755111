""" short-weierstrass elliptic curves y^2 = x^3 + ax + b over prime fields,
in affine coordinates """
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional
import json
import logging
import os

from secureagg.utils.numeric import is_probable_prime, mod_inv
from secureagg.errors import (
    ParameterError, FieldNotPrime, UnsupportedFieldRepresentation,
    SingularCurve, BasePointOffCurve, CompositeOrder, BadBasePointOrder,
    BadCofactor, PointNotOnCurve, InfinityHasNoX)

log = logging.getLogger(__name__)

PRIME_FIELD = "prime-field"
CURVE_FIELDS = ["q", "a", "b", "Tx", "Ty", "order", "cofactor"]
CURVE_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "data",
                         "curves")


@dataclass(frozen=True)
class Point:
    """ affine point, x = y = None is the point at infinity """
    x: Optional[int] = None
    y: Optional[int] = None

    @property
    def is_infinity(self):
        return self.x is None

    def __repr__(self):
        if self.is_infinity:
            return "Point(Infinity)"
        return "Point({}, {})".format(self.x, self.y)


INFINITY = Point()


@dataclass(frozen=True)
class CurveParams:
    """ curve domain (q, FR, a, b, T, p_ord, h). build through load_curve,
    which validates every field """
    q: int
    a: int
    b: int
    T: Point
    p_ord: int
    h: int
    fr: str = PRIME_FIELD
    name: str = ""

    @property
    def field_bytes(self):
        return (self.q.bit_length() + 7) // 8

    @property
    def order_bytes(self):
        return (self.p_ord.bit_length() + 7) // 8


def is_on_curve(c, P):
    if P.is_infinity:
        return True
    if not (0 <= P.x < c.q and 0 <= P.y < c.q):
        return False
    return (P.y * P.y - (P.x * P.x * P.x + c.a * P.x + c.b)) % c.q == 0


def validate_point(c, P, strict=False):
    """ raise PointNotOnCurve unless P is on c. strict additionally checks
    membership in the subgroup generated by T (p_ord * P = infinity) """
    if not is_on_curve(c, P):
        raise PointNotOnCurve("{} is not on curve {}".format(P, c.name))
    if strict and not _mul(c, c.p_ord, P).is_infinity:
        raise PointNotOnCurve("{} is not in the subgroup of order {}".format(
            P, c.p_ord))


def _parse_hex(record, field):
    try:
        value = record[field]
    except KeyError:
        raise ParameterError("curve record misses field '{}'".format(field))
    if isinstance(value, int):
        return value
    try:
        return int(value, 16)
    except (TypeError, ValueError):
        raise ParameterError("curve field '{}' is not a hex string: {}"
                             .format(field, value))


def load_curve(config):
    """
    Build validated CurveParams from a parameter record.

    Parameters
    ----------
    config: dict
        hex strings under q, a, b, Tx, Ty, order, cofactor, the field
        representation tag under fr (defaults to "prime-field") and an
        optional name

    Returns
    -------
    curve: CurveParams
    """
    fr = config.get("fr", PRIME_FIELD)
    if fr != PRIME_FIELD:
        raise UnsupportedFieldRepresentation(
            "field representation has to be '{}', got '{}'".format(
                PRIME_FIELD, fr))
    values = {field: _parse_hex(config, field) for field in CURVE_FIELDS}
    q, a, b = values["q"], values["a"], values["b"]
    if q < 3 or not is_probable_prime(q):
        raise FieldNotPrime("q = {} is not an odd prime".format(q))
    if not (0 <= a < q and 0 <= b < q):
        raise ParameterError("coefficients have to lie in [0, q)")
    if (4 * a ** 3 + 27 * b ** 2) % q == 0:
        raise SingularCurve("4a^3 + 27b^2 = 0 mod q")
    if values["cofactor"] < 1:
        raise BadCofactor("cofactor has to be positive")
    curve = CurveParams(q=q, a=a, b=b, T=Point(values["Tx"], values["Ty"]),
                        p_ord=values["order"], h=values["cofactor"], fr=fr,
                        name=config.get("name", ""))
    if not is_on_curve(curve, curve.T):
        raise BasePointOffCurve("base point {} is not on the curve".format(
            curve.T))
    if not is_probable_prime(curve.p_ord):
        raise CompositeOrder("order {} is not prime".format(curve.p_ord))
    if not _mul(curve, curve.p_ord, curve.T).is_infinity:
        raise BadBasePointOrder("order * T is not the point at infinity")
    log.debug("loaded curve {} with {}-bit order".format(
        curve.name, curve.p_ord.bit_length()))
    return curve


def load_curve_file(path):
    with open(path, "r") as json_file:
        return load_curve(json.load(json_file))


@lru_cache(maxsize=None)
def get_curve(name):
    """ load one of the bundled curves, 'toy' or 'secp256r1', validated once
    per process """
    path = os.path.join(CURVE_DIR, name + ".json")
    if not os.path.exists(path):
        raise ParameterError("unknown curve '{}', available: {}".format(
            name, ", ".join(sorted(f[:-5] for f in os.listdir(CURVE_DIR)))))
    return load_curve_file(path)


def curve_to_record(c):
    return {"name": c.name, "fr": c.fr, "q": hex(c.q), "a": hex(c.a),
            "b": hex(c.b), "Tx": hex(c.T.x), "Ty": hex(c.T.y),
            "order": hex(c.p_ord), "cofactor": hex(c.h)}


def _add(c, P, Q):
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    q = c.q
    if P.x == Q.x:
        if (P.y + Q.y) % q == 0:
            return INFINITY
        lam = (3 * P.x * P.x + c.a) * mod_inv(2 * P.y, q) % q
    else:
        lam = (Q.y - P.y) * mod_inv(Q.x - P.x, q) % q
    x3 = (lam * lam - P.x - Q.x) % q
    y3 = (lam * (P.x - x3) - P.y) % q
    return Point(x3, y3)


def _mul(c, k, P):
    result, addend = INFINITY, P
    while k:
        if k & 1:
            result = _add(c, result, addend)
        addend = _add(c, addend, addend)
        k >>= 1
    return result


def point_add(c, P, Q):
    """ group law, covers doubling, inverse pairs and the identity """
    validate_point(c, P)
    validate_point(c, Q)
    return _add(c, P, Q)


def scalar_mul(c, k, P):
    """ k * P by double-and-add. k is reduced mod p_ord for points of the
    base point's subgroup (every point when the cofactor is 1) """
    if k < 0:
        raise ParameterError("scalar has to be non-negative, got {}".format(k))
    validate_point(c, P)
    if c.h == 1 or P == c.T:
        k %= c.p_ord
    return _mul(c, k, P)


def negate(c, P):
    validate_point(c, P)
    if P.is_infinity:
        return INFINITY
    return Point(P.x, (c.q - P.y) % c.q)


def x_mod_order(c, P):
    if P.is_infinity:
        raise InfinityHasNoX("the point at infinity has no x-coordinate")
    return P.x % c.p_ord


def enumerate_points(c):
    """ every point of a (small) curve by brute force, infinity first """
    squares = {}
    for y in range(c.q):
        squares.setdefault(y * y % c.q, []).append(y)
    points = [INFINITY]
    for x in range(c.q):
        rhs = (x ** 3 + c.a * x + c.b) % c.q
        for y in squares.get(rhs, []):
            points.append(Point(x, y))
    return points


def point_to_bytes(c, P):
    """ uncompressed encoding 0x04 || X || Y with fixed-width coordinates """
    if P.is_infinity:
        raise ParameterError("cannot encode the point at infinity")
    width = c.field_bytes
    return b"\x04" + P.x.to_bytes(width, "big") + P.y.to_bytes(width, "big")


def point_from_bytes(c, data):
    width = c.field_bytes
    if len(data) != 1 + 2 * width or data[0] != 4:
        raise PointNotOnCurve("not an uncompressed point encoding")
    P = Point(int.from_bytes(data[1:1 + width], "big"),
              int.from_bytes(data[1 + width:], "big"))
    validate_point(c, P)
    return P
