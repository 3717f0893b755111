""" adversarial manipulations of an in-flight aggregation message """
from dataclasses import dataclass, replace
from typing import Optional
import logging

from secureagg.crypto.agg_sig import AggSignature, keygen, sign
from secureagg.crypto.ou_phe import OuCiphertext, ou_encrypt
from secureagg.protocol.wire import AggMessage
from secureagg.simulation.scenario import (ATTACKS, NO_ATTACK, TAMPER_CT,
                                           TAMPER_SIG, FORGE_SUBTREE,
                                           REPLAY_EPOCH)
from secureagg.utils.numeric import rand_range
from secureagg.errors import ParameterError, DegenerateSignature

log = logging.getLogger(__name__)


@dataclass
class AttackContext:
    """
    What the attacker knows: the public deployment, the broadcast epoch
    nonce, its own randomness and, for replays, a message it recorded in an
    earlier epoch.
    """
    dep: object
    nonce: object
    rng: object
    prior_message: Optional[AggMessage] = None


def _forge(msg, context):
    """ replace the subtree's message by one built from attacker-fresh keys
    that claims the same contributors """
    c, dep = context.dep.curve, context.dep
    claimed = len(msg.contributors)
    forged_sum = rand_range(context.rng, 0, claimed * dep.max_reading + 1)
    while True:
        sk, vk = keygen(c, context.rng)
        try:
            s = sign(c, sk, forged_sum, context.nonce)
            break
        except DegenerateSignature:
            continue
    log.debug("forged subtree {} with sum {}".format(
        sorted(msg.contributors), forged_sum))
    return AggMessage(epoch_id=msg.epoch_id, contributors=msg.contributors,
                      ct=ou_encrypt(dep.ou_pk, forged_sum, context.rng),
                      s=AggSignature(s=s, count=claimed), Z=vk)


def inject_attack(kind, msg, context):
    """
    Apply one of the closed set of attacks to msg.

    Parameters
    ----------
    kind: str
        none, tamper-ct (plaintext + 1 via ct * g), tamper-sig (s + 1),
        forge-subtree or replay-epoch
    msg: AggMessage
    context: AttackContext

    Returns
    -------
    msg: AggMessage
    """
    if kind not in ATTACKS:
        raise ParameterError("unknown attack {}".format(kind))
    dep = context.dep
    if kind == NO_ATTACK:
        return msg
    if kind == TAMPER_CT:
        return replace(msg, ct=OuCiphertext(msg.ct.c * dep.ou_pk.g %
                                            dep.ou_pk.n))
    if kind == TAMPER_SIG:
        return replace(msg, s=AggSignature(
            s=(msg.s.s + 1) % dep.curve.p_ord, count=msg.s.count))
    if kind == FORGE_SUBTREE:
        return _forge(msg, context)
    assert kind == REPLAY_EPOCH, "unhandled attack {}".format(kind)
    if context.prior_message is None:
        raise ParameterError("replay needs a message of an earlier epoch")
    return context.prior_message
