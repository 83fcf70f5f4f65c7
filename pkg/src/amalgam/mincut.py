"""Minimum predimension over supersets as a min-cut problem.

Picking a superset Y of the seed X to minimize |Y| - #instances inside Y is a
maximum-closure / project-selection instance: every instance is a unit profit
available once all its points are selected, every point outside X costs one,
seed points are free.  The reduction: source -> instance node (capacity 1),
instance node -> each of its points (infinite), point -> sink (capacity 1,
omitted for seed points).  Then

    min over Y >= X of (|Y| - instances inside Y) = |X| - (T - maxflow)

where T is the total instance count, and the union of all minimizers is
recovered from the residual graph: a point belongs to it exactly when no
residual path from the point reaches the sink.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence


class Dinic:
    def __init__(self, n: int):
        self.n = n
        self.heads: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, capacity: int) -> None:
        self.heads[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(capacity)
        self.heads[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.heads[u]:
                v = self.to[e]
                if self.cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _augment(self, u: int, t: int, limit: int, level, it) -> int:
        if u == t:
            return limit
        while it[u] < len(self.heads[u]):
            e = self.heads[u][it[u]]
            v = self.to[e]
            if self.cap[e] > 0 and level[v] == level[u] + 1:
                pushed = self._augment(v, t, min(limit, self.cap[e]), level, it)
                if pushed:
                    self.cap[e] -= pushed
                    self.cap[e ^ 1] += pushed
                    return pushed
            it[u] += 1
        return 0

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return flow
            it = [0] * self.n
            while True:
                pushed = self._augment(s, t, 1 << 60, level, it)
                if not pushed:
                    break
                flow += pushed

    def co_reachable(self, t: int) -> list[bool]:
        """Nodes with a residual path to t (walk residual edges backwards)."""
        seen = [False] * self.n
        seen[t] = True
        queue = deque([t])
        while queue:
            v = queue.popleft()
            for e in self.heads[v]:
                # slot e stores v->u, so its pair e^1 stores u->v; a residual
                # edge u->v exists iff that paired slot has capacity left
                u = self.to[e]
                if not seen[u] and self.cap[e ^ 1] > 0:
                    seen[u] = True
                    queue.append(u)
        return seen


def min_superset_delta(
    num_points: int,
    instances: Sequence[Sequence[int]],
    seed: Iterable[int],
) -> tuple[int, frozenset[int]]:
    """(minimum predimension over supersets of seed, union of all minimizers)."""
    seed = frozenset(seed)
    t_count = len(instances)
    source = t_count + num_points
    sink = source + 1
    net = Dinic(sink + 1)
    infinite = t_count + num_points + 2
    for i, tup in enumerate(instances):
        net.add_edge(source, i, 1)
        for p in set(tup):
            net.add_edge(i, t_count + p, infinite)
    for p in range(num_points):
        if p not in seed:
            net.add_edge(t_count + p, sink, 1)
    flow = net.max_flow(source, sink)
    minimum = len(seed) - (t_count - flow)
    reach_sink = net.co_reachable(sink)
    chosen = frozenset(
        p for p in range(num_points) if p in seed or not reach_sink[t_count + p]
    )
    return minimum, chosen
