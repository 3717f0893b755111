""" scenario definitions for the simulator and the bundled parameter sets """
from dataclasses import dataclass, asdict
from typing import List, Optional
import os

from secureagg.utils.file_util import json_load
from secureagg.utils.numeric import Rng, rand_range, SEED_BITS
from secureagg.errors import ConfigurationError

PARAMS_FILE = os.path.join(os.path.dirname(os.path.dirname(__file__)),
                           "data", "params.json")

NO_ATTACK = "none"
TAMPER_CT = "tamper-ct"
TAMPER_SIG = "tamper-sig"
FORGE_SUBTREE = "forge-subtree"
REPLAY_EPOCH = "replay-epoch"
ATTACKS = [NO_ATTACK, TAMPER_CT, TAMPER_SIG, FORGE_SUBTREE, REPLAY_EPOCH]

default_scenario_params = {
    "params": "toy",
    "nodes": 4,
    "fanout": 1,
    "readings": None,
    "max_reading": None,
    "attack": NO_ATTACK,
    "strict_mode": False,
    "seed": 0,
    "epoch_id": 1,
}


def load_parameter_sets(path=PARAMS_FILE):
    return json_load(path)


@dataclass(frozen=True)
class Scenario:
    """
    One simulator run.

    readings is either a fixed list with one reading per non-base node
    (assigned in ascending node id order) or None for readings drawn
    uniformly from [0, max_reading] with the scenario seed. max_reading
    None takes the parameter set's default.
    """
    params: str = "toy"
    nodes: int = 4
    fanout: int = 1
    readings: Optional[List[int]] = None
    max_reading: Optional[int] = None
    attack: str = NO_ATTACK
    strict_mode: bool = False
    seed: int = 0
    epoch_id: int = 1

    def to_record(self):
        return asdict(self)


def _require(condition, field_name, reason):
    if not condition:
        raise ConfigurationError(field_name, reason)


def _is_int(value):
    return isinstance(value, int) and not isinstance(value, bool)


def validate_scenario(scenario, parameter_sets=None):
    """ raise ConfigurationError naming the first bad field """
    if parameter_sets is None:
        parameter_sets = load_parameter_sets()
    _require(scenario.params in parameter_sets, "params",
             "unknown parameter set '{}', choose from {}".format(
                 scenario.params, sorted(parameter_sets)))
    _require(_is_int(scenario.nodes) and scenario.nodes >= 2, "nodes",
             "need an integer >= 2, got {}".format(scenario.nodes))
    _require(_is_int(scenario.fanout) and scenario.fanout >= 1, "fanout",
             "need an integer >= 1, got {}".format(scenario.fanout))
    _require(scenario.attack in ATTACKS, "attack",
             "unknown attack '{}', choose from {}".format(
                 scenario.attack, ATTACKS))
    _require(scenario.strict_mode in [True, False], "strict_mode",
             "has to be boolean")
    _require(_is_int(scenario.seed) and 0 <= scenario.seed < 2 ** SEED_BITS,
             "seed", "need a 64-bit unsigned integer")
    # replay needs a previous epoch
    _require(_is_int(scenario.epoch_id) and
             1 <= scenario.epoch_id < 2 ** 64, "epoch_id",
             "need an integer in [1, 2^64)")
    max_reading = resolve_max_reading(scenario, parameter_sets)
    _require(_is_int(max_reading) and max_reading >= 0, "max_reading",
             "need a non-negative integer")
    if scenario.readings is not None:
        _require(len(scenario.readings) == scenario.nodes - 1, "readings",
                 "need one reading per non-base node ({}), got {}".format(
                     scenario.nodes - 1, len(scenario.readings)))
        for reading in scenario.readings:
            _require(_is_int(reading) and 0 <= reading <= max_reading,
                     "readings", "reading {} outside [0, {}]".format(
                         reading, max_reading))
    return scenario


def resolve_max_reading(scenario, parameter_sets=None):
    if scenario.max_reading is not None:
        return scenario.max_reading
    if parameter_sets is None:
        parameter_sets = load_parameter_sets()
    return parameter_sets[scenario.params]["max_reading"]


def resolve_readings(scenario, node_ids, max_reading):
    """ map every non-base node id to its reading """
    node_ids = sorted(node_ids)
    if scenario.readings is not None:
        return dict(zip(node_ids, scenario.readings))
    rng = Rng(scenario.seed).fork("readings")
    return {node_id: rand_range(rng, 0, max_reading + 1)
            for node_id in node_ids}


def scenario_from_record(record):
    unknown = sorted(set(record) - set(default_scenario_params))
    if unknown:
        raise ConfigurationError(unknown[0], "unknown scenario field")
    values = dict(default_scenario_params)
    values.update(record)
    if values["readings"] is not None:
        _require(isinstance(values["readings"], list), "readings",
                 "has to be a list of integers or null")
    return validate_scenario(Scenario(**values))


def load_scenario(path):
    _require(os.path.exists(path), "scenario",
             "file not found {}".format(path))
    try:
        record = json_load(path)
    except ValueError as e:
        raise ConfigurationError("scenario", "{} is not valid json: {}"
                                 .format(path, e))
    _require(isinstance(record, dict), "scenario",
             "{} has to contain a json object".format(path))
    return scenario_from_record(record)


def expected_detection(scenario):
    """ verdict a correct implementation produces for this scenario. a
    forged subtree goes unnoticed when the base station trusts the carried
    key sum """
    if scenario.attack == NO_ATTACK:
        return "n/a"
    if scenario.attack == FORGE_SUBTREE and not scenario.strict_mode:
        return "missed"
    return "detected"
