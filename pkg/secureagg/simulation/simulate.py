from datetime import datetime, date
import logging
import time

from joblib import Parallel, delayed

from secureagg.analysis.report import RunReport, measure
from secureagg.crypto.agg_sig import epoch_setup, keygen
from secureagg.crypto.ec_group import get_curve
from secureagg.crypto.ou_phe import ou_keygen
from secureagg.protocol.roles import (NodeIdentity, LEAF, BASE, leaf_emit,
                                      aggregate, combine_at_base,
                                      base_receive, make_deployment)
from secureagg.protocol.wire import encode, decode
from secureagg.simulation.attacks import AttackContext, inject_attack
from secureagg.simulation.scenario import (load_parameter_sets,
                                           validate_scenario,
                                           resolve_max_reading,
                                           resolve_readings,
                                           expected_detection, NO_ATTACK,
                                           REPLAY_EPOCH)
from secureagg.simulation.topology import BASE_ID, build_tree
from secureagg.utils.numeric import Rng
from secureagg.errors import (ConfigurationError, CapacityExceeded,
                              EpochAbort, ProtocolError, MalformedCiphertext)

log = logging.getLogger(__name__)

MAX_EPOCH_RESTARTS = 8


class Simulation(object):
    def __init__(self, scenario, parameter_sets=None,
                 max_restarts=MAX_EPOCH_RESTARTS):
        if parameter_sets is None:
            parameter_sets = load_parameter_sets()
        self._parameter_sets = parameter_sets
        self._max_restarts = max_restarts
        self._scenario = scenario

        self._rng = None
        self.topology = None
        self._roles = None
        self.identities = {}
        self._readings = {}
        self.deployment = None
        self.ou_private_key = None
        self._prior = None

        self.link_bytes = {}
        self.restarts = 0
        self.root_aggregates = 0
        self.times = {}

        self._run_checks()
    """
    Simulates one epoch of secure aggregation over a complete tree.

    It is structured as follows:

    1. Set up the deployment: OU key pair of the base station, one signing
       key pair per node, the tree and the readings.
    2. The base station draws the epoch nonce and broadcasts it for free.
    3. Levels are processed deepest first. Every node emits or aggregates,
       encodes its message and the parent decodes it, so every upward link
       carries real wire bytes. The base station's first child is the
       attacker if the scenario names an attack.
    4. The base station combines its children's messages, decrypts and
       verifies. A degenerate outcome restarts the epoch with a fresh nonce.

    All randomness is derived from the scenario seed.

    Parameters
    ----------
    scenario: :class:`.Scenario`
    parameter_sets: dict, optional
        parameter set name to {curve, ou_bits, max_reading}, defaults to the
        bundled params.json
    max_restarts: int, optional
        epoch restarts before giving up
    """

    def _run_checks(self):
        validate_scenario(self._scenario, self._parameter_sets)
        assert self._max_restarts >= 0, "max_restarts has to be >= 0"

    def run(self):
        """
        Run the complete epoch.

        Returns
        -------
        report: :class:`.RunReport`
        """
        start = time.time()
        today, now = date.today(), datetime.time(datetime.now())
        log.info("Started epoch {} on {} at {}".format(
            self._scenario.epoch_id, today, now))
        self.set_up()

        decrypted_sum, verified, error = None, False, None
        try:
            result = self._run_epoch()
            decrypted_sum, verified = result.sum, result.verified
        except (ProtocolError, MalformedCiphertext) as e:
            error = "{}: {}".format(type(e).__name__, e)
            log.warning("epoch failed with {}".format(error))
        self.times["total"] = time.time() - start

        report = self._report(decrypted_sum, verified, error)
        today, now = date.today(), datetime.time(datetime.now())
        log.info("Finished on {} at {}. sum {}, verified {}, detection {}"
                 .format(today, now, report.decrypted_sum, report.verified,
                         report.detection))
        return report

    def set_up(self):
        start = time.time()
        scenario = self._scenario
        params = self._parameter_sets[scenario.params]
        self._rng = Rng(scenario.seed)
        curve = get_curve(params["curve"])
        ou_pk, self.ou_private_key = ou_keygen(params["ou_bits"],
                                               self._rng.fork("ou"))
        self.times["ou_keygen"] = time.time() - start

        self.topology = build_tree(scenario.nodes, scenario.fanout)
        self._roles = self.topology.roles()
        for node_id in self.topology.node_ids():
            if node_id == BASE_ID:
                self.identities[node_id] = NodeIdentity(
                    id=node_id, signing=None, verify=None, role=BASE)
                continue
            sk, vk = keygen(curve, self._rng.fork("node-{}".format(node_id)))
            self.identities[node_id] = NodeIdentity(
                id=node_id, signing=sk, verify=vk,
                role=self._roles[node_id])

        max_reading = resolve_max_reading(scenario, self._parameter_sets)
        try:
            self.deployment = make_deployment(
                curve, ou_pk, self.identities.values(), max_reading,
                strict_mode=scenario.strict_mode)
        except CapacityExceeded as e:
            raise ConfigurationError("max_reading", str(e))
        self._readings = resolve_readings(
            scenario, list(self.topology.parents), max_reading)
        self.times["set_up"] = time.time() - start
        log.debug("deployment with {} nodes on {}, {}".format(
            scenario.nodes, curve.name, ou_pk))

    def _attacker(self):
        return self.topology.children(BASE_ID)[0]

    def _upward(self, nonce, attempt, attack, record_links=True):
        """ process all levels and return the messages that reach the base
        station, plus the attacker's outgoing message before the attack """
        dep, epoch_id = self.deployment, nonce.epoch_id
        attacker = self._attacker()
        inbox = {node_id: [] for node_id in self.topology.node_ids()}
        recorded = None
        for level in self.topology.levels():
            log.debug("epoch {}: level with {} nodes".format(
                epoch_id, len(level)))
            for node_id in level:
                node = self.identities[node_id]
                rng = self._rng.fork("encrypt-{}-{}-{}".format(
                    epoch_id, attempt, node_id))
                if node.role == LEAF:
                    msg = leaf_emit(node, self._readings[node_id], nonce, dep,
                                    rng)
                else:
                    msg = aggregate(node, self._readings[node_id],
                                    inbox[node_id], nonce, dep, rng)
                if node_id == attacker:
                    recorded = msg
                    if attack != NO_ATTACK:
                        msg = inject_attack(attack, msg, self._attack_context(
                            nonce, attempt))
                parent = self.topology.parents[node_id]
                data = encode(msg, dep)
                if record_links:
                    self.link_bytes[(node_id, parent)] = len(data)
                inbox[parent].append(decode(data, dep))
        return inbox[BASE_ID], recorded

    def _attack_context(self, nonce, attempt):
        rng = self._rng.fork("attacker-{}-{}".format(nonce.epoch_id, attempt))
        return AttackContext(dep=self.deployment, nonce=nonce, rng=rng,
                             prior_message=self._prior)

    def _record_prior_epoch(self):
        """ the attacker's message of the previous epoch, for replays """
        epoch_id = self._scenario.epoch_id - 1
        nonce = epoch_setup(self.deployment.curve, epoch_id,
                            self._rng.fork("nonce-{}".format(epoch_id)))
        _, self._prior = self._upward(nonce, 0, NO_ATTACK, record_links=False)

    def _run_epoch(self):
        scenario, dep = self._scenario, self.deployment
        if scenario.attack == REPLAY_EPOCH:
            self._record_prior_epoch()
        start = time.time()
        for attempt in range(self._max_restarts + 1):
            nonce = epoch_setup(dep.curve, scenario.epoch_id, self._rng.fork(
                "nonce-{}-{}".format(scenario.epoch_id, attempt)))
            self.link_bytes = {}
            self.root_aggregates = 0
            try:
                messages, _ = self._upward(nonce, attempt, scenario.attack)
                msg = combine_at_base(dep, nonce, messages)
                result = base_receive(dep, self.ou_private_key, nonce, msg)
                self.root_aggregates += 1
            except EpochAbort as e:
                self.restarts += 1
                log.warning("epoch {} aborted ({}), restarting with a fresh "
                            "nonce".format(scenario.epoch_id, e))
                continue
            self.times["epoch"] = time.time() - start
            return result
        raise EpochAbort("epoch {} aborted {} times".format(
            scenario.epoch_id, self._max_restarts + 1))

    def _report(self, decrypted_sum, verified, error):
        scenario = self._scenario
        expected_sum = sum(self._readings.values())
        if scenario.attack == NO_ATTACK:
            detection = "n/a"
        elif error is not None or not verified:
            detection = "detected"
        else:
            detection = "missed"
        if detection == "detected":
            log.warning("attack {} detected".format(scenario.attack))
        metrics = measure(self.topology, self.link_bytes,
                          self.root_aggregates)
        return RunReport(
            scenario=scenario.to_record(),
            decrypted_sum=decrypted_sum,
            expected_sum=expected_sum,
            verified=verified,
            detection=detection,
            expected_detection=expected_detection(scenario),
            error=error,
            epoch_restarts=self.restarts,
            duration_s=self.times["total"],
            **metrics)


def run_epoch(scenario, parameter_sets=None):
    """ simulate one epoch of scenario and return its :class:`.RunReport` """
    return Simulation(scenario, parameter_sets).run()


def run_batch(scenarios, n_jobs=1, parameter_sets=None):
    """
    Run independent scenarios, possibly in parallel processes.

    Parameters
    ----------
    scenarios: list of :class:`.Scenario`
    n_jobs: int, optional
        number of jobs, as in joblib
    parameter_sets: dict, optional

    Returns
    -------
    reports: list of :class:`.RunReport`
        in the order of scenarios
    """
    log.info("running {} scenarios with {} jobs".format(len(scenarios),
                                                         n_jobs))
    return Parallel(n_jobs=n_jobs)(
        delayed(run_epoch)(scenario, parameter_sets)
        for scenario in scenarios)
