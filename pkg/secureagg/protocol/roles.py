"""
The three node roles of an aggregation tree.

Leaves encrypt their reading under the base station's public key and sign
it with the shared epoch nonce. Aggregators combine what their children
send (ciphertext product, signature sum, public key sum) and add their own
reading; they never hold the private key. The base station decrypts the
final aggregate and verifies its signature against either the carried key
sum (permissive mode) or the key sum recomputed from its registry over the
declared contributors (strict mode).
"""
from dataclasses import dataclass, field
import logging

from secureagg.crypto.agg_sig import (AggSignature, VerifyKey, sign,
                                      combine_sigs, combine_keys, verify)
from secureagg.crypto.ec_group import (point_to_bytes, point_from_bytes,
                                       curve_to_record, load_curve)
from secureagg.crypto.ou_phe import (ou_encrypt, ou_decrypt, ou_add_many,
                                     public_key_to_record,
                                     public_key_from_record)
from secureagg.protocol.wire import AggMessage, MAX_NODE_ID
from secureagg.errors import (ParameterError, ConfigurationError, RoleError,
                              ReadingOutOfRange, EpochAbort, EpochMismatch,
                              DuplicateContributor, CapacityExceeded,
                              UnknownContributor, DegenerateOutcome)

log = logging.getLogger(__name__)

LEAF = "leaf"
AGGREGATOR = "aggregator"
BASE = "base"
ROLES = [LEAF, AGGREGATOR, BASE]


@dataclass(frozen=True)
class NodeIdentity:
    id: int
    signing: object
    verify: VerifyKey
    role: str

    def __post_init__(self):
        assert self.role in ROLES, "unknown role {}".format(self.role)
        assert 0 <= self.id <= MAX_NODE_ID, "node id {} out of range".format(
            self.id)


@dataclass(frozen=True)
class Deployment:
    """
    Public deployment parameters known to every node.

    max_nodes bounds the number of contributors of one aggregate, so
    max_nodes * max_reading stays below both the plaintext capacity and
    the curve order and sums never wrap around.
    """
    curve: object
    ou_pk: object
    registry: dict
    max_reading: int
    strict_mode: bool = False
    max_nodes: int = field(default=0)

    def __post_init__(self):
        if self.max_nodes == 0:
            object.__setattr__(self, "max_nodes", max(len(self.registry), 1))
        bound = self.max_nodes * self.max_reading
        if self.max_reading < 0:
            raise ParameterError("max_reading has to be non-negative")
        if bound >= self.ou_pk.capacity:
            raise CapacityExceeded(
                "{} nodes * max reading {} exceed plaintext capacity {}"
                .format(self.max_nodes, self.max_reading,
                        self.ou_pk.capacity))
        if bound >= self.curve.p_ord:
            raise CapacityExceeded(
                "{} nodes * max reading {} exceed the curve order".format(
                    self.max_nodes, self.max_reading))

    @property
    def sum_bound(self):
        return min(self.ou_pk.capacity, self.curve.p_ord)


@dataclass(frozen=True)
class EpochResult:
    sum: int
    verified: bool
    contributors: frozenset


def _check_reading(reading, dep):
    if not 0 <= reading <= dep.max_reading:
        raise ReadingOutOfRange("reading {} outside [0, {}]".format(
            reading, dep.max_reading))


def leaf_emit(node, reading, nonce, dep, rng):
    """ encrypt and sign one reading """
    if node.role == BASE:
        raise RoleError("the base station does not emit readings")
    _check_reading(reading, dep)
    ct = ou_encrypt(dep.ou_pk, reading, rng)
    try:
        s_i = sign(dep.curve, node.signing, reading, nonce)
    except DegenerateOutcome as e:
        raise EpochAbort("node {}: {}".format(node.id, e))
    return AggMessage(epoch_id=nonce.epoch_id,
                      contributors=frozenset([node.id]), ct=ct,
                      s=AggSignature(s=s_i, count=1), Z=node.verify)


def _combine(messages, epoch_id, dep):
    contributors = set()
    for msg in messages:
        if msg.epoch_id != epoch_id:
            raise EpochMismatch("message of epoch {} in epoch {}".format(
                msg.epoch_id, epoch_id))
        overlap = contributors & msg.contributors
        if overlap:
            raise DuplicateContributor("contributors {} appear twice".format(
                sorted(overlap)))
        contributors |= msg.contributors
    if len(contributors) * dep.max_reading >= dep.sum_bound:
        raise CapacityExceeded(
            "{} contributors may overflow the plaintext space".format(
                len(contributors)))
    if len(messages) == 1:
        return messages[0]
    try:
        s = combine_sigs(dep.curve, [msg.s for msg in messages])
        Z = combine_keys(dep.curve, [msg.Z for msg in messages])
    except DegenerateOutcome as e:
        raise EpochAbort(str(e))
    ct = ou_add_many(dep.ou_pk, [msg.ct for msg in messages])
    return AggMessage(epoch_id=epoch_id, contributors=frozenset(contributors),
                      ct=ct, s=s, Z=Z)


def aggregate(node, own_reading, children, nonce, dep, rng):
    """
    Combine the children's messages, plus the node's own reading if given.

    Parameters
    ----------
    node: NodeIdentity
        an aggregator
    own_reading: int or None
        None for a pure relay
    children: list of AggMessage
    nonce: :class:`.EpochNonce`
    dep: Deployment
    rng: :class:`.Rng`
        randomness for encrypting the own reading

    Returns
    -------
    msg: AggMessage
    """
    if node.role != AGGREGATOR:
        raise RoleError("node {} is a {}, not an aggregator".format(
            node.id, node.role))
    children = list(children)
    if not children:
        raise ParameterError("an aggregator needs at least one child message")
    messages = list(children)
    if own_reading is not None:
        messages.append(leaf_emit(node, own_reading, nonce, dep, rng))
    return _combine(messages, nonce.epoch_id, dep)


def combine_at_base(dep, nonce, messages):
    """ merge the messages arriving at the base station into the single
    aggregate handed to base_receive """
    messages = list(messages)
    if not messages:
        raise ParameterError("no message reached the base station")
    return _combine(messages, nonce.epoch_id, dep)


def effective_key(dep, msg):
    """ the key the base station verifies against """
    if not dep.strict_mode:
        return msg.Z
    unknown = sorted(i for i in msg.contributors if i not in dep.registry)
    if unknown:
        raise UnknownContributor("contributors {} are not registered".format(
            unknown))
    return combine_keys(dep.curve,
                        [dep.registry[i] for i in sorted(msg.contributors)])


def base_receive(dep, sk, nonce, msg):
    """ decrypt the aggregate and verify its signature """
    if msg.epoch_id != nonce.epoch_id:
        raise EpochMismatch("message of epoch {} in epoch {}".format(
            msg.epoch_id, nonce.epoch_id))
    total = ou_decrypt(sk, msg.ct)
    try:
        Z = effective_key(dep, msg)
    except DegenerateOutcome:
        log.warning("registry keys of the contributors cancel out")
        return EpochResult(sum=total, verified=False,
                           contributors=msg.contributors)
    verified = verify(dep.curve, total % dep.curve.p_ord, msg.s, Z,
                      nonce.r_x)
    return EpochResult(sum=total, verified=verified,
                       contributors=msg.contributors)


def make_deployment(curve, ou_pk, identities, max_reading,
                    strict_mode=False):
    """ deployment whose registry holds the verify key of every non-base
    identity """
    registry = {}
    for node in identities:
        if node.role == BASE:
            continue
        if node.id in registry:
            raise ParameterError("node id {} is not unique".format(node.id))
        registry[node.id] = node.verify
    return Deployment(curve=curve, ou_pk=ou_pk, registry=registry,
                      max_reading=max_reading, strict_mode=strict_mode)


def deployment_to_record(dep, parents, roles):
    """ deployment file content: curve, public key, limits and one entry
    per node with role, parent and hex verify key """
    nodes = []
    for node_id in sorted(roles):
        entry = {"id": node_id, "role": roles[node_id],
                 "parent": parents.get(node_id)}
        if node_id in dep.registry:
            entry["verify_key"] = point_to_bytes(
                dep.curve, dep.registry[node_id].Z).hex()
        nodes.append(entry)
    return {"curve": curve_to_record(dep.curve),
            "ou_public_key": public_key_to_record(dep.ou_pk),
            "max_reading": dep.max_reading,
            "max_nodes": dep.max_nodes,
            "strict_mode": dep.strict_mode,
            "nodes": nodes}


def _entry_field(entry, name):
    try:
        return entry[name]
    except (KeyError, TypeError):
        raise ConfigurationError(name, "missing in node entry {}".format(
            entry))


def deployment_from_record(record):
    """ returns (deployment, parents, roles) """
    try:
        curve = load_curve(record["curve"])
        ou_pk = public_key_from_record(record["ou_public_key"])
        nodes = record["nodes"]
        max_reading = record["max_reading"]
    except KeyError as e:
        raise ConfigurationError(e.args[0], "missing in deployment record")
    registry, parents, roles = {}, {}, {}
    for entry in nodes:
        node_id, role = _entry_field(entry, "id"), _entry_field(entry, "role")
        if node_id in roles:
            raise ConfigurationError("nodes", "duplicate node id {}".format(
                node_id))
        if role not in ROLES:
            raise ConfigurationError("role", "unknown role {}".format(role))
        roles[node_id] = role
        if entry.get("parent") is not None:
            parents[node_id] = entry["parent"]
        if role != BASE:
            verify_key = _entry_field(entry, "verify_key")
            try:
                point = point_from_bytes(curve, bytes.fromhex(verify_key))
            except (ValueError, TypeError) as e:
                raise ConfigurationError(
                    "verify_key", "node {}: {}".format(node_id, e))
            registry[node_id] = VerifyKey(point)
    dep = Deployment(curve=curve, ou_pk=ou_pk, registry=registry,
                     max_reading=max_reading,
                     strict_mode=record.get("strict_mode", False),
                     max_nodes=record.get("max_nodes", 0))
    return dep, parents, roles

