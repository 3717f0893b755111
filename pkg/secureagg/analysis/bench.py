from collections import OrderedDict
import logging
import time

import pandas as pd
import numpy as np

from secureagg.crypto.agg_sig import (AggSignature, keygen, epoch_setup,
                                      sign, verify)
from secureagg.crypto.ec_group import get_curve, scalar_mul
from secureagg.crypto.ou_phe import (ou_keygen, ou_encrypt, ou_decrypt,
                                     ou_add)
from secureagg.simulation.scenario import Scenario, load_parameter_sets
from secureagg.simulation.simulate import run_epoch
from secureagg.utils.numeric import Rng

log = logging.getLogger(__name__)

default_bench_params = {
    "params": "toy",
    "repeat": 5,
    "epoch_nodes": [4, 16, 64],
    "epoch_fanout": 4,
}


def _time(f, repeat):
    durations = []
    for _ in range(repeat):
        start = time.perf_counter()
        f()
        durations.append(time.perf_counter() - start)
    return np.array(durations)


def _row(name, durations):
    return OrderedDict([("operation", name),
                        ("runs", len(durations)),
                        ("mean [ms]", 1e3 * np.mean(durations)),
                        ("std [ms]", 1e3 * np.std(durations)),
                        ("min [ms]", 1e3 * np.min(durations))])


def bench(params="toy", repeat=5, epoch_nodes=(4, 16, 64), epoch_fanout=4,
          seed=0):
    """
    Time primitive operations and whole epochs of one parameter set.

    Parameters
    ----------
    params: str
        name of a parameter set
    repeat: int
        runs per operation
    epoch_nodes: iterable of int
        tree sizes for the whole-epoch timings
    epoch_fanout: int
    seed: int

    Returns
    -------
    df: pd.DataFrame
        mean, std and min duration in milliseconds per operation
    """
    assert repeat >= 1, "need at least one run"
    parameter_set = load_parameter_sets()[params]
    c = get_curve(parameter_set["curve"])
    rng = Rng(seed)
    log.info("benchmarking parameter set {}".format(params))

    rows = []
    keys = []
    rows.append(_row("ou_keygen", _time(
        lambda: keys.append(ou_keygen(parameter_set["ou_bits"], rng)),
        repeat)))
    pk, sk = keys[0]
    ct = ou_encrypt(pk, 42, rng)
    rows.append(_row("ou_encrypt", _time(lambda: ou_encrypt(pk, 42, rng),
                                         repeat)))
    rows.append(_row("ou_decrypt", _time(lambda: ou_decrypt(sk, ct),
                                         repeat)))
    rows.append(_row("ou_add", _time(lambda: ou_add(pk, ct, ct), repeat)))

    signing, verify_key = keygen(c, rng)
    nonce = epoch_setup(c, 1, rng)
    s = AggSignature(sign(c, signing, 42, nonce))
    rows.append(_row("scalar_mul", _time(
        lambda: scalar_mul(c, c.p_ord - 1, c.T), repeat)))
    rows.append(_row("sign", _time(lambda: sign(c, signing, 42, nonce),
                                   repeat)))
    rows.append(_row("verify", _time(
        lambda: verify(c, 42, s, verify_key, nonce.r_x), repeat)))

    for n_nodes in epoch_nodes:
        scenario = Scenario(params=params, nodes=n_nodes,
                            fanout=epoch_fanout, seed=seed)
        rows.append(_row("epoch n={}".format(n_nodes), _time(
            lambda: run_epoch(scenario), repeat)))
    return pd.DataFrame(rows)
