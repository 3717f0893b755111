"""
Run reports of the simulator.

A serialized report is a JSON object whose fields always appear in the
order of REPORT_FIELDS. The epoch nonce broadcast of the base station is
not upward traffic and is not counted in link_bytes. duration_s is only
serialized when timing is requested, so reports of the same scenario are
byte-identical.
"""
from collections import OrderedDict
from dataclasses import dataclass
from typing import Optional
import json
import logging

from scipy.stats import binomtest
import pandas as pd
import numpy as np

from secureagg.simulation.topology import BASE_ID
from secureagg.utils.file_util import json_store

log = logging.getLogger(__name__)

REPORT_FIELDS = [
    "scenario", "decrypted_sum", "expected_sum", "verified", "detection",
    "expected_detection", "error", "epoch_restarts", "link_bytes",
    "upward_bytes_total", "packets_into_root", "packets_at_root_aggregated",
    "packets_at_root_unaggregated", "nonce_broadcast_excluded", "duration_s"]


@dataclass(frozen=True)
class RunReport:
    scenario: dict
    decrypted_sum: Optional[int]
    expected_sum: int
    verified: bool
    detection: str
    expected_detection: str
    error: Optional[str]
    epoch_restarts: int
    link_bytes: list
    upward_bytes_total: int
    packets_into_root: int
    packets_at_root_aggregated: int
    packets_at_root_unaggregated: int
    nonce_broadcast_excluded: bool = True
    duration_s: float = 0.

    @property
    def ok(self):
        """ honest run with the exact sum, or attack run whose verdict
        matches the expected one """
        if self.detection == "n/a":
            return (self.error is None and self.verified and
                    self.decrypted_sum == self.expected_sum)
        return self.detection == self.expected_detection


def measure(topology, link_bytes, root_aggregates):
    """
    Communication metrics of one epoch.

    Parameters
    ----------
    topology: :class:`.Topology`
    link_bytes: dict
        (child, parent) to the length of the encoded message on that link
    root_aggregates: int
        aggregates the base station decrypted and verified, 0 if the
        epoch failed before that

    Returns
    -------
    metrics: dict
        link_bytes as a list ordered by child id, their total, the packets
        arriving on the base station's links, the aggregates it processed
        and the messages it would receive without aggregation (one per
        leaf)
    """
    links = sorted(link_bytes.items())
    counts = np.array([n_bytes for _, n_bytes in links], dtype=np.int64)
    assert np.all(counts > 0), "empty message on a link"
    assert root_aggregates >= 0, "negative number of aggregates"
    return {
        "link_bytes": [{"child": child, "parent": parent, "bytes": int(n)}
                       for (child, parent), n in links],
        "upward_bytes_total": int(counts.sum()),
        "packets_into_root": sum(parent == BASE_ID
                                 for (_, parent), _ in links),
        "packets_at_root_aggregated": root_aggregates,
        "packets_at_root_unaggregated": len(topology.leaves()),
    }



def report_to_record(report, timing=False):
    record = OrderedDict((name, getattr(report, name))
                         for name in REPORT_FIELDS)
    if not timing:
        del record["duration_s"]
    return record


def report_to_json(report, timing=False):
    return json.dumps(report_to_record(report, timing), indent=4)


def store_report(report, path, timing=False):
    json_store(report_to_record(report, timing), path, sort_keys=False)


def store_reports(reports, path, timing=False):
    """ store one report as an object, several as a list """
    if len(reports) == 1:
        store_report(reports[0], path, timing)
    else:
        json_store([report_to_record(r, timing) for r in reports], path,
                   sort_keys=False)


def summary_table(reports):
    """ one row per report """
    rows = []
    for report in reports:
        scenario = report.scenario
        rows.append(OrderedDict([
            ("params", scenario["params"]),
            ("nodes", scenario["nodes"]),
            ("fanout", scenario["fanout"]),
            ("attack", scenario["attack"]),
            ("strict", scenario["strict_mode"]),
            ("seed", scenario["seed"]),
            ("sum", report.decrypted_sum),
            ("expected", report.expected_sum),
            ("verified", report.verified),
            ("detection", report.detection),
            ("upward bytes", report.upward_bytes_total),
            ("packets into root", report.packets_into_root),
            ("root packets", report.packets_at_root_aggregated),
            ("root packets w/o agg", report.packets_at_root_unaggregated),
            ("duration [s]", round(report.duration_s, 3)),
            ("ok", report.ok),
        ]))
    return pd.DataFrame(rows)


def link_table(report):
    return pd.DataFrame(report.link_bytes, columns=["child", "parent",
                                                   "bytes"])


def detection_summary(reports, confidence_level=.95):
    """
    Detection rates of a batch, grouped by attack and verification mode,
    with a confidence interval on each rate.

    Returns
    -------
    df: pd.DataFrame
    """
    df = summary_table(reports)
    df = df[df.attack != "none"]
    rows = []
    for (attack, strict), group in df.groupby(["attack", "strict"]):
        n_detected = int((group.detection == "detected").sum())
        interval = binomtest(n_detected, len(group)).proportion_ci(
            confidence_level=confidence_level)
        rows.append(OrderedDict([
            ("attack", attack), ("strict", strict), ("runs", len(group)),
            ("detected", n_detected),
            ("rate", n_detected / len(group)),
            ("ci low", interval.low), ("ci high", interval.high)]))
    return pd.DataFrame(rows)
