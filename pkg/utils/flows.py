#!/usr/bin/env python3
"""
Flow Network Module
Builds the unit-capacity networks used for separable solutions and for the
four-terminal guesses, and solves them by successive shortest paths.
"""

import heapq
import logging
from dataclasses import dataclass
from typing import Dict, Hashable, List, Mapping, Optional, Tuple

from utils.errors import BadSelection, NegativeCycleDetected, NonIntegralFlow
from utils.graph_core import NegativeForest, NegTree, Path, WeightedInstance, negative_forest

logger = logging.getLogger(__name__)

INFINITY = 10 ** 18

SOURCE = ('source', -1)
SINK = ('sink', -1)

NodeLabel = Tuple[str, int]


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    capacity: int
    cost: int
    tag: str = ''


class FlowNetwork:
    """Directed network with parallel arcs; nodes are addressed by label"""

    def __init__(self, split: frozenset = frozenset()):
        self.labels: List[NodeLabel] = []
        self.index: Dict[NodeLabel, int] = {}
        self.arcs: List[Arc] = []
        self.split = split
        self.source: Optional[int] = None
        self.sink: Optional[int] = None

    def node(self, label: NodeLabel) -> int:
        if label not in self.index:
            self.index[label] = len(self.labels)
            self.labels.append(label)
        return self.index[label]

    def add_arc(self, tail: NodeLabel, head: NodeLabel, capacity: int, cost: int, tag: str = '') -> int:
        self.arcs.append(Arc(self.node(tail), self.node(head), capacity, cost, tag))
        return len(self.arcs) - 1

    def entry(self, v: int) -> NodeLabel:
        return ('in', v) if v in self.split else ('v', v)

    def exit(self, v: int) -> NodeLabel:
        return ('out', v) if v in self.split else ('v', v)

    def add_vertex(self, v: int) -> None:
        if v in self.split:
            self.add_arc(('in', v), ('out', v), 1, 0)
        else:
            self.node(('v', v))

    def arcs_between(self, u: int, v: int) -> List[Arc]:
        """Arcs realizing the original edge direction u -> v"""
        tail, head = self.index.get(self.exit(u)), self.index.get(self.entry(v))
        return [a for a in self.arcs if a.tail == tail and a.head == head]

    def __repr__(self) -> str:
        return f"FlowNetwork(nodes={len(self.labels)}, arcs={len(self.arcs)})"


@dataclass(frozen=True)
class Flow:
    arc_flow: Tuple[int, ...]
    value: int
    cost: int


def _orient(net: FlowNetwork, T: NegTree, root: int, away: bool) -> None:
    depth = T.hop_depths(root)
    for (u, v), w in T.weights.items():
        near, far = (u, v) if depth[u] < depth[v] else (v, u)
        tail, head = (near, far) if away else (far, near)
        net.add_arc(net.exit(tail), net.entry(head), 1, w)


def build_Nz(inst: WeightedInstance, Z: Mapping[int, int], forest: Optional[NegativeForest] = None,
             toward_t: bool = False) -> FlowNetwork:
    """Network for strongly separable solutions; Z maps tree index -> chosen vertex.

    A tree containing both terminals is directed away from s unless toward_t is set.
    """
    forest = forest or negative_forest(inst)
    s, t = inst.s, inst.t
    free = [T for T in forest.trees if s not in T.vertices and t not in T.vertices]
    if set(Z) != {T.index for T in free}:
        raise BadSelection(f"Z covers trees {sorted(Z)}, expected {[T.index for T in free]}")
    for T in free:
        if Z[T.index] not in T.vertices:
            raise BadSelection(f"vertex {Z[T.index]} is not in tree {T.index}")

    net = FlowNetwork(split=frozenset(v for v in inst.vertices if v not in (s, t)))
    for v in inst.vertices:
        net.add_vertex(v)
    for (u, v), w in inst.weights.items():
        if w >= 0:
            net.add_arc(net.exit(u), net.entry(v), 1, w)
            net.add_arc(net.exit(v), net.entry(u), 1, w)
    for T in forest.trees:
        if s in T.vertices and not (toward_t and t in T.vertices):
            _orient(net, T, s, away=True)
        elif t in T.vertices:
            _orient(net, T, t, away=False)
        else:
            _orient(net, T, Z[T.index], away=True)

    net.source = net.index[('v', s)]
    net.sink = net.index[('v', t)]
    return net


def build_Naabb(inst: WeightedInstance, a1: int, b1: int, a2: int, b2: int,
                forest: Optional[NegativeForest] = None) -> FlowNetwork:
    """Four-terminal network: s*, t* plus the non-negative part of G outside the trees"""
    forest = forest or negative_forest(inst)
    s, t = inst.s, inst.t
    keep = {a1, a2, b1, b2}
    gone = forest.vertices() - keep

    net = FlowNetwork(split=frozenset(v for v in inst.vertices if v not in (s, t)))
    for v in inst.vertices:
        if v not in gone:
            net.add_vertex(v)
    for (u, v), w in inst.weights.items():
        if w < 0 or u in gone or v in gone:
            continue
        net.add_arc(net.exit(u), net.entry(v), 1, w)
        net.add_arc(net.exit(v), net.entry(u), 1, w)

    net.add_arc(SOURCE, net.entry(s), 2, 0)
    net.add_arc(SOURCE, net.entry(t), 2, 0)
    for tag, x in (('a1', a1), ('b1', b1), ('a2', a2), ('b2', b2)):
        net.add_arc(net.exit(x), SINK, 1, 0, tag)

    net.source = net.index[SOURCE]
    net.sink = net.index[SINK]
    return net


class _Residual:
    """Paired forward/backward residual edges (edge 2i is arc i, 2i+1 its reverse)"""

    def __init__(self, net: FlowNetwork):
        size = len(net.labels)
        self.head: List[int] = []
        self.cap: List[int] = []
        self.cost: List[int] = []
        self.out: List[List[int]] = [[] for _ in range(size)]
        for arc in net.arcs:
            self.out[arc.tail].append(len(self.head))
            self.head += [arc.head, arc.tail]
            self.cap += [arc.capacity, 0]
            self.cost += [arc.cost, -arc.cost]
            self.out[arc.head].append(len(self.head) - 1)
        self.size = size

    def tail(self, e: int) -> int:
        return self.head[e ^ 1]

    def bellman_ford(self, source: int) -> Tuple[List[int], List[int]]:
        dist = [INFINITY] * self.size
        via = [-1] * self.size
        dist[source] = 0
        for rounds in range(self.size):
            changed = False
            for x in range(self.size):
                if dist[x] == INFINITY:
                    continue
                for e in self.out[x]:
                    if self.cap[e] > 0 and dist[x] + self.cost[e] < dist[self.head[e]]:
                        dist[self.head[e]] = dist[x] + self.cost[e]
                        via[self.head[e]] = e
                        changed = True
            if not changed:
                return dist, via
        raise NegativeCycleDetected("negative-cost cycle reachable from the source")

    def dijkstra(self, source: int, potential: List[int]) -> Tuple[List[int], List[int]]:
        dist = [INFINITY] * self.size
        via = [-1] * self.size
        dist[source] = 0
        heap = [(0, source)]
        while heap:
            d, x = heapq.heappop(heap)
            if d > dist[x]:
                continue
            for e in self.out[x]:
                if self.cap[e] <= 0:
                    continue
                y = self.head[e]
                nd = d + self.cost[e] + potential[x] - potential[y]
                if nd < dist[y]:
                    dist[y] = nd
                    via[y] = e
                    heapq.heappush(heap, (nd, y))
        return dist, via


def min_cost_flow(net: FlowNetwork, target: int) -> Optional[Flow]:
    """Minimum-cost flow of exactly `target` units, or None if none exists"""
    if target == 0:
        return Flow(tuple(0 for _ in net.arcs), 0, 0)
    res = _Residual(net)
    source, sink = net.source, net.sink

    dist, via = res.bellman_ford(source)
    reach = max(d for d in dist if d < INFINITY)
    potential = [d if d < INFINITY else reach for d in dist]
    value = 0
    cost = 0
    while True:
        if dist[sink] >= INFINITY:
            logger.debug(f"Flow stops at value {value} < {target}")
            return None
        path = []
        x = sink
        while x != source:
            e = via[x]
            path.append(e)
            x = res.tail(e)
        push = min([target - value] + [res.cap[e] for e in path])
        for e in path:
            res.cap[e] -= push
            res.cap[e ^ 1] += push
            cost += push * res.cost[e]
        value += push
        if value == target:
            break
        dist, via = res.dijkstra(source, potential)
        # nodes cut off by this augmentation get the largest label so reduced costs stay non-negative
        reach = max(d for d in dist if d < INFINITY)
        potential = [p + (d if d < INFINITY else reach) for p, d in zip(potential, dist)]

    arc_flow = tuple(res.cap[2 * i + 1] for i in range(len(net.arcs)))
    return Flow(arc_flow, value, cost)


def _vertex_of(label: NodeLabel) -> Optional[int]:
    return None if label in (SOURCE, SINK) else label[1]


def decompose_flow(net: FlowNetwork, flow: Flow) -> List[Path]:
    """Split an integral flow into `value` source->sink paths in the original graph"""
    for f, arc in zip(flow.arc_flow, net.arcs):
        if not isinstance(f, int) or not 0 <= f <= arc.capacity:
            raise NonIntegralFlow(f"flow {f!r} on arc {arc}")
    remaining = list(flow.arc_flow)
    out: Dict[int, List[int]] = {}
    for i, arc in enumerate(net.arcs):
        out.setdefault(arc.tail, []).append(i)

    paths: List[Path] = []
    for _ in range(flow.value):
        walk = [net.source]
        position = {net.source: 0}
        while walk[-1] != net.sink:
            step = next((i for i in out.get(walk[-1], ()) if remaining[i] > 0), None)
            if step is None:
                raise NonIntegralFlow(f"flow is not conserved at {net.labels[walk[-1]]}")
            remaining[step] -= 1
            y = net.arcs[step].head
            if y in position:
                # cancel a circulation picked up on the way
                for x in walk[position[y] + 1:]:
                    del position[x]
                del walk[position[y] + 1:]
            else:
                position[y] = len(walk)
                walk.append(y)
        vertices: List[int] = []
        for node in walk:
            v = _vertex_of(net.labels[node])
            if v is not None and (not vertices or vertices[-1] != v):
                vertices.append(v)
        paths.append(tuple(vertices))
    return paths
