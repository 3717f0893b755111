""" aggregation tree shapes. node 0 is always the base station """
from dataclasses import dataclass
import logging

from secureagg.protocol.roles import LEAF, AGGREGATOR, BASE
from secureagg.protocol.wire import MAX_NODE_ID
from secureagg.utils.numeric import Rng, rand_range
from secureagg.errors import ParameterError

log = logging.getLogger(__name__)

BASE_ID = 0


@dataclass(frozen=True)
class Topology:
    n_nodes: int
    parents: dict
    fanout: int
    depth: int

    def children(self, node_id):
        return sorted(child for child, parent in self.parents.items()
                      if parent == node_id)

    def node_ids(self):
        return [BASE_ID] + sorted(self.parents)

    def leaves(self):
        with_children = set(self.parents.values())
        return [node_id for node_id in sorted(self.parents)
                if node_id not in with_children]

    def depth_of(self, node_id):
        depth = 0
        while node_id != BASE_ID:
            node_id = self.parents[node_id]
            depth += 1
        return depth

    def levels(self):
        """ node ids grouped by depth, deepest level first, base excluded """
        by_depth = {}
        for node_id in sorted(self.parents):
            by_depth.setdefault(self.depth_of(node_id), []).append(node_id)
        return [by_depth[d] for d in sorted(by_depth, reverse=True)]

    def roles(self):
        with_children = set(self.parents.values())
        roles = {BASE_ID: BASE}
        for node_id in self.parents:
            roles[node_id] = AGGREGATOR if node_id in with_children else LEAF
        return roles


def check_topology(topology):
    """ single root, every node reaches it, no cycles """
    for node_id in topology.parents:
        seen = {node_id}
        current = node_id
        while current != BASE_ID:
            if current not in topology.parents:
                raise ParameterError("node {} does not reach the base".format(
                    node_id))
            current = topology.parents[current]
            if current in seen:
                raise ParameterError("cycle through node {}".format(current))
            seen.add(current)


def build_tree(n, fanout, seed=None):
    """
    Complete fanout-ary tree over n nodes, filled level by level.

    Parameters
    ----------
    n: int
        number of nodes including the base station, at least 2
    fanout: int
        children per inner node, 1 gives a chain
    seed: int, optional
        if given, the ids 1..n-1 are shuffled over the tree positions.
        the shape does not depend on it

    Returns
    -------
    topology: Topology
    """
    if n < 2:
        raise ParameterError("need at least 2 nodes, got {}".format(n))
    if fanout < 1:
        raise ParameterError("fanout has to be >= 1, got {}".format(fanout))
    if n - 1 > MAX_NODE_ID:
        raise ParameterError("node ids are limited to 16 bits")
    ids = list(range(n))
    if seed is not None:
        rng = Rng(seed).fork("topology")
        for i in range(n - 1, 1, -1):
            j = rand_range(rng, 1, i + 1)
            ids[i], ids[j] = ids[j], ids[i]
    parents = {ids[position]: ids[(position - 1) // fanout]
               for position in range(1, n)}
    depth, last = 0, n - 1
    while last > 0:
        last = (last - 1) // fanout
        depth += 1
    topology = Topology(n_nodes=n, parents=parents, fanout=fanout,
                        depth=depth)
    check_topology(topology)
    log.debug("built tree with {} nodes, fanout {}, depth {}".format(
        n, fanout, depth))
    return topology
