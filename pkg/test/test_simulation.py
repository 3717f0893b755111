from dataclasses import replace

import numpy as np
import pytest

from secureagg.analysis.report import report_to_json
from secureagg.crypto.agg_sig import epoch_setup
from secureagg.crypto.ou_phe import OuCiphertext
from secureagg.protocol.roles import LEAF, AGGREGATOR, BASE, leaf_emit
from secureagg.simulation.attacks import AttackContext, inject_attack
from secureagg.simulation.scenario import (Scenario, validate_scenario,
                                           scenario_from_record,
                                           resolve_readings,
                                           load_parameter_sets,
                                           expected_detection)
from secureagg.simulation.simulate import Simulation, run_epoch, run_batch
from secureagg.simulation.topology import (BASE_ID, Topology, build_tree,
                                           check_topology)
from secureagg.utils.numeric import Rng
from secureagg.errors import ParameterError, ConfigurationError

CHAIN = Scenario(params="toy", nodes=4, fanout=1, readings=[10, 20, 30])


def test_build_tree():
    t = build_tree(2, 1)
    assert t.parents == {1: 0}
    assert (t.depth, t.leaves(), t.roles()) == (1, [1], {0: BASE, 1: LEAF})

    t = build_tree(7, 2)
    assert t.depth == 2
    assert t.leaves() == [3, 4, 5, 6]
    assert t.children(BASE_ID) == [1, 2]
    assert t.levels() == [[3, 4, 5, 6], [1, 2]]

    t = build_tree(4, 1)
    assert t.parents == {1: 0, 2: 1, 3: 2}
    assert t.roles() == {0: BASE, 1: AGGREGATOR, 2: AGGREGATOR, 3: LEAF}

    t = build_tree(64, 4)
    assert len(t.parents) == 63
    assert len(t.leaves()) == 48
    assert t.depth == 3
    assert max(t.depth_of(i) for i in t.parents) == 3
    check_topology(t)

    with pytest.raises(ParameterError):
        build_tree(1, 1)
    with pytest.raises(ParameterError):
        build_tree(4, 0)


def test_shuffled_tree_keeps_shape():
    plain, shuffled = build_tree(20, 3), build_tree(20, 3, seed=5)
    assert shuffled == build_tree(20, 3, seed=5)
    assert shuffled.parents != plain.parents
    assert len(shuffled.leaves()) == len(plain.leaves())
    assert [len(level) for level in shuffled.levels()] == \
        [len(level) for level in plain.levels()]


def test_check_topology():
    with pytest.raises(ParameterError):
        check_topology(Topology(n_nodes=3, parents={1: 2, 2: 1}, fanout=1,
                                depth=2))
    with pytest.raises(ParameterError):
        check_topology(Topology(n_nodes=3, parents={1: 5}, fanout=1,
                                depth=1))


def test_scenario_validation():
    sets = load_parameter_sets()
    assert sorted(sets) == ["standard", "toy"]
    validate_scenario(CHAIN)
    bad = [({"params": "huge"}, "params"),
           ({"nodes": 1}, "nodes"),
           ({"fanout": 0}, "fanout"),
           ({"attack": "jam"}, "attack"),
           ({"seed": -1}, "seed"),
           ({"epoch_id": 0}, "epoch_id"),
           ({"readings": [1, 2]}, "readings"),
           ({"readings": [1, 2, 1001]}, "readings"),
           ({"max_reading": -1}, "max_reading")]
    for change, field in bad:
        with pytest.raises(ConfigurationError) as e:
            validate_scenario(replace(CHAIN, **change))
        assert e.value.field == field
    with pytest.raises(ConfigurationError) as e:
        scenario_from_record({"nodes": 4, "colour": "red"})
    assert e.value.field == "colour"
    assert scenario_from_record({"nodes": 5}) == Scenario(nodes=5)


def test_readings():
    assert resolve_readings(CHAIN, [3, 1, 2], 1000) == {1: 10, 2: 20, 3: 30}
    uniform = Scenario(nodes=50, seed=3)
    readings = resolve_readings(uniform, range(1, 50), 5)
    assert readings == resolve_readings(uniform, range(1, 50), 5)
    assert set(readings.values()) <= set(range(6))


def test_chain_example():
    report = run_epoch(CHAIN)
    assert report.decrypted_sum == report.expected_sum == 60
    assert report.verified
    assert report.detection == report.expected_detection == "n/a"
    assert report.error is None
    assert report.ok
    assert [link["child"] for link in report.link_bytes] == [1, 2, 3]
    assert all(link["bytes"] > 0 for link in report.link_bytes)
    assert (report.packets_at_root_aggregated,
            report.packets_at_root_unaggregated) == (1, 1)
    assert report.packets_into_root == 1


def test_two_node_tree():
    report = run_epoch(Scenario(nodes=2, readings=[7]))
    assert (report.decrypted_sum, report.verified) == (7, True)
    assert (report.packets_at_root_aggregated,
            report.packets_at_root_unaggregated) == (1, 1)


def test_attacks():
    cases = [("tamper-ct", False, "detected"),
             ("tamper-sig", False, "detected"),
             ("replay-epoch", False, "detected"),
             ("forge-subtree", False, "missed"),
             ("forge-subtree", True, "detected")]
    for attack, strict, verdict in cases:
        scenario = replace(CHAIN, attack=attack, strict_mode=strict)
        report = run_epoch(scenario)
        assert report.detection == verdict
        assert expected_detection(scenario) == verdict
        assert report.ok
    tampered = run_epoch(replace(CHAIN, attack="tamper-ct"))
    assert tampered.decrypted_sum == 61
    replayed = run_epoch(replace(CHAIN, attack="replay-epoch"))
    assert replayed.error.startswith("EpochMismatch")
    assert replayed.packets_at_root_aggregated == 0
    assert tampered.packets_at_root_aggregated == 1


def test_inject_attack(chain):
    nodes, dep, sk = chain
    nonce = epoch_setup(dep.curve, 1, Rng(70))
    msg = leaf_emit(nodes[3], 5, nonce, dep, Rng(0))
    context = AttackContext(dep=dep, nonce=nonce, rng=Rng(71))

    assert inject_attack("none", msg, context) == msg
    tampered = inject_attack("tamper-ct", msg, context)
    assert tampered.ct == OuCiphertext(msg.ct.c * dep.ou_pk.g % dep.ou_pk.n)
    assert inject_attack("tamper-sig", msg, context).s.s == \
        (msg.s.s + 1) % dep.curve.p_ord
    forged = inject_attack("forge-subtree", msg, context)
    assert forged.contributors == msg.contributors
    assert forged.Z != msg.Z
    with pytest.raises(ParameterError):
        inject_attack("replay-epoch", msg, context)
    with pytest.raises(ParameterError):
        inject_attack("jam", msg, context)
    prior = replace(context, prior_message=msg)
    assert inject_attack("replay-epoch", tampered, prior) == msg


def test_determinism():
    scenario = Scenario(params="toy", nodes=12, fanout=3, seed=9,
                        attack="tamper-sig")
    assert report_to_json(run_epoch(scenario)) == \
        report_to_json(run_epoch(scenario))
    other = report_to_json(run_epoch(replace(scenario, seed=10)))
    assert other != report_to_json(run_epoch(scenario))


def test_standard_tree_of_64():
    scenario = Scenario(params="standard", nodes=64, fanout=4, seed=1)
    report = run_epoch(scenario)
    assert report.decrypted_sum == report.expected_sum
    assert report.verified
    assert report.packets_at_root_aggregated == 1
    assert report.packets_at_root_unaggregated == 48
    assert report.packets_into_root == 4
    assert len(report.link_bytes) == 63
    assert report.upward_bytes_total == sum(
        link["bytes"] for link in report.link_bytes)


def test_honest_runs_are_exact():
    sizes = [2, 3, 4, 7, 12, 20, 33, 64]
    scenarios = [Scenario(params=["toy", "standard"][i % 2],
                          nodes=sizes[i % len(sizes)],
                          fanout=1 + i % 4, seed=100 + i)
                 for i in range(100)]
    reports = run_batch(scenarios)
    assert sum(r.verified and r.decrypted_sum == r.expected_sum
               for r in reports) == 100


def test_detection_rates():
    base = Scenario(params="toy", nodes=5, fanout=2)
    rates = {}
    for attack, strict in [("tamper-ct", False), ("tamper-sig", False),
                           ("forge-subtree", True), ("forge-subtree", False)]:
        reports = run_batch([replace(base, attack=attack, strict_mode=strict,
                                     seed=seed) for seed in range(100)])
        rates[(attack, strict)] = np.mean(
            [r.detection == "detected" for r in reports])
        assert all(r.ok for r in reports)
    assert rates[("tamper-ct", False)] == 1
    assert rates[("tamper-sig", False)] == 1
    assert rates[("forge-subtree", True)] == 1
    assert rates[("forge-subtree", False)] == 0


def test_run_batch_in_parallel():
    scenarios = [replace(CHAIN, seed=seed) for seed in range(4)]
    sequential = run_batch(scenarios, n_jobs=1)
    parallel = run_batch(scenarios, n_jobs=2)
    assert [report_to_json(r) for r in sequential] == \
        [report_to_json(r) for r in parallel]


def test_capacity_is_a_configuration_error():
    params = {"tiny": {"curve": "secp256r1", "ou_bits": 8,
                       "max_reading": 1000}}
    with pytest.raises(ConfigurationError) as e:
        Simulation(Scenario(params="tiny", nodes=4), params).set_up()
    assert e.value.field == "max_reading"
