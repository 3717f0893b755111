import pytest

from secureagg.crypto.agg_sig import keygen
from secureagg.crypto.ec_group import get_curve
from secureagg.crypto.ou_phe import ou_keygen, ou_keys_from_primes
from secureagg.protocol.roles import (NodeIdentity, Deployment, LEAF,
                                      AGGREGATOR)
from secureagg.utils.numeric import Rng


@pytest.fixture(scope="session")
def toy_curve():
    return get_curve("toy")


@pytest.fixture(scope="session")
def p256():
    return get_curve("secp256r1")


@pytest.fixture(scope="session")
def toy_ou():
    """ p=11, q=7, g=2, n=847 """
    return ou_keys_from_primes(11, 7, 2)


@pytest.fixture(scope="session")
def small_ou():
    return ou_keygen(64, Rng(3))


@pytest.fixture(scope="session")
def standard_ou():
    """ 512-bit primes, 1536-bit modulus """
    return ou_keygen(512, Rng(4))


def make_nodes(c, ids, roles=None, seed=10):
    """ NodeIdentity per id with deterministic keys. roles maps id to role,
    missing ids are aggregators """
    roles = roles or {}
    nodes = {}
    for node_id in ids:
        sk, vk = keygen(c, Rng(seed + node_id))
        nodes[node_id] = NodeIdentity(id=node_id, signing=sk, verify=vk,
                                      role=roles.get(node_id, AGGREGATOR))
    return nodes


def make_deployment(c, pk, nodes, max_reading=1000, strict_mode=False):
    return Deployment(curve=c, ou_pk=pk,
                      registry={i: n.verify for i, n in nodes.items()},
                      max_reading=max_reading, strict_mode=strict_mode)


@pytest.fixture(scope="session")
def chain(p256, small_ou):
    """ base <- 1 <- 2 <- 3 on secp256r1 with 64-bit OU primes """
    nodes = make_nodes(p256, [1, 2, 3], roles={3: LEAF})
    return nodes, make_deployment(p256, small_ou[0], nodes), small_ou[1]
