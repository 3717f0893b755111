""" command line front end: keygen, run, selftest and bench """
from dataclasses import replace
import argparse
import logging
import os
import sys

from secureagg.analysis.bench import bench, default_bench_params
from secureagg.analysis.report import (summary_table, link_table,
                                       detection_summary, store_reports,
                                       report_to_json)
from secureagg.analysis.selftest import run_selftest
from secureagg.crypto.agg_sig import scalar_to_bytes
from secureagg.crypto.ou_phe import private_key_to_record
from secureagg.protocol.roles import deployment_to_record
from secureagg.simulation.scenario import (Scenario, ATTACKS,
                                           default_scenario_params,
                                           load_parameter_sets,
                                           load_scenario, validate_scenario)
from secureagg.simulation.simulate import Simulation, run_batch
from secureagg.utils.file_util import json_store, text_store, replace_extension
from secureagg.errors import ConfigurationError, SecureAggError

log = logging.getLogger(__name__)

VERBOSITY_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIGURATION = 2


def _parse_readings(value):
    try:
        return [int(reading) for reading in value.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(
            "readings have to be comma-separated integers, got {}".format(
                value))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="secureagg",
        description="secure data aggregation with homomorphic encryption "
                    "and aggregate signatures")
    parser.add_argument("--verbosity", default="WARNING", type=str.upper,
                        choices=VERBOSITY_LEVELS)
    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True
    parameter_sets = sorted(load_parameter_sets())

    keygen = subparsers.add_parser(
        "keygen", help="write deployment and key files")
    keygen.add_argument("--params", default="toy", choices=parameter_sets)
    keygen.add_argument("--nodes", default=4, type=int)
    keygen.add_argument("--fanout", default=1, type=int)
    keygen.add_argument("--seed", default=0, type=int)
    keygen.add_argument("--max-reading", dest="max_reading", type=int)
    keygen.add_argument("--strict", dest="strict_mode", action="store_true")
    keygen.add_argument("--out", required=True, type=str)

    # no defaults here, unset flags do not override the scenario file
    run = subparsers.add_parser("run", help="simulate a scenario")
    run.add_argument("--scenario", type=str)
    run.add_argument("--params", choices=parameter_sets)
    run.add_argument("--nodes", type=int)
    run.add_argument("--fanout", type=int)
    run.add_argument("--attack", choices=ATTACKS)
    run.add_argument("--strict", dest="strict_mode", action="store_true",
                     default=None)
    run.add_argument("--permissive", dest="strict_mode",
                     action="store_false")
    run.add_argument("--seed", type=int)
    run.add_argument("--readings", type=_parse_readings)
    run.add_argument("--max-reading", dest="max_reading", type=int)
    run.add_argument("--epoch", dest="epoch_id", type=int)
    run.add_argument("--report", type=str)
    run.add_argument("--timing", action="store_true",
                     help="include wall-clock durations in the report")
    run.add_argument("--summary", action="store_true")
    run.add_argument("--repeat", default=1, type=int,
                     help="run seeds seed .. seed + repeat - 1")
    run.add_argument("--n-jobs", dest="n_jobs", default=1, type=int)

    subparsers.add_parser("selftest", help="exhaustive checks on the toy "
                                           "curve and toy OU instance")

    bench_parser = subparsers.add_parser("bench", help="time primitives "
                                                       "and epochs")
    bench_parser.add_argument("--params", default=default_bench_params[
        "params"], choices=parameter_sets)
    bench_parser.add_argument("--repeat", default=default_bench_params[
        "repeat"], type=int)
    return parser


def scenario_from_args(args):
    """ scenario file (or defaults) overridden by the given flags """
    if args.scenario is not None:
        scenario = load_scenario(args.scenario)
    else:
        scenario = Scenario(**default_scenario_params)
    overrides = {name: getattr(args, name)
                 for name in default_scenario_params
                 if getattr(args, name, None) is not None}
    return validate_scenario(replace(scenario, **overrides))


def _keygen(args):
    scenario = validate_scenario(Scenario(
        params=args.params, nodes=args.nodes, fanout=args.fanout,
        seed=args.seed, max_reading=args.max_reading,
        strict_mode=args.strict_mode))
    simulation = Simulation(scenario)
    simulation.set_up()
    dep, topology = simulation.deployment, simulation.topology
    record = deployment_to_record(dep, topology.parents, topology.roles())
    json_store(record, os.path.join(args.out, "deployment.json"))
    json_store(private_key_to_record(simulation.ou_private_key, dep.ou_pk),
               os.path.join(args.out, "base_key.json"))
    node_keys = {str(node.id): scalar_to_bytes(dep.curve,
                                               node.signing.z).hex()
                 for node in simulation.identities.values()
                 if node.signing is not None}
    json_store(node_keys, os.path.join(args.out, "node_keys.json"))
    log.info("wrote deployment of {} nodes to {}".format(args.nodes,
                                                         args.out))
    return EXIT_OK


def _run(args):
    if args.repeat < 1:
        raise ConfigurationError("repeat", "has to be >= 1")
    if args.report is not None and not args.report.endswith(".json"):
        raise ConfigurationError("report", "has to be a .json file")
    scenario = scenario_from_args(args)
    scenarios = [replace(scenario, seed=scenario.seed + i)
                 for i in range(args.repeat)]
    for s in scenarios:
        validate_scenario(s)
    reports = run_batch(scenarios, n_jobs=args.n_jobs)

    if args.report is not None:
        store_reports(reports, args.report, timing=args.timing)
    elif len(reports) == 1:
        print(report_to_json(reports[0], timing=args.timing))
    if args.summary:
        tables = [summary_table(reports).to_string()]
        if len(reports) == 1:
            tables.append(link_table(reports[0]).to_string(index=False))
        elif scenario.attack != "none":
            tables.append(detection_summary(reports).to_string(index=False))
        summary = "\n\n".join(tables)
        print(summary)
        if args.report is not None:
            text_store(summary + "\n", replace_extension(args.report, ".txt"))

    n_failed = sum(not report.ok for report in reports)
    if n_failed:
        log.error("{} of {} runs did not match the expectation".format(
            n_failed, len(reports)))
        return EXIT_MISMATCH
    return EXIT_OK


def _selftest(args):
    df = run_selftest()
    print(df.to_string(index=False))
    return EXIT_OK if (df.failures == 0).all() else EXIT_MISMATCH


def _bench(args):
    if args.repeat < 1:
        raise ConfigurationError("repeat", "has to be >= 1")
    df = bench(params=args.params, repeat=args.repeat,
               epoch_nodes=default_bench_params["epoch_nodes"],
               epoch_fanout=default_bench_params["epoch_fanout"])
    print(df.to_string(index=False))
    return EXIT_OK


COMMANDS = {"keygen": _keygen, "run": _run, "selftest": _selftest,
            "bench": _bench}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.verbosity,
                        format="%(asctime)s %(levelname)s %(name)s: "
                               "%(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as e:
        log.error("configuration error: {}".format(e))
        return EXIT_CONFIGURATION
    except SecureAggError as e:
        log.error("{}: {}".format(type(e).__name__, e))
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
