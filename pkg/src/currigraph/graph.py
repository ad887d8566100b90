"""Read-only queries over a CurriculumGraph.

Transitive queries, cycles, topological order and levels only follow
PREREQUISITE edges; corequisite pairs may legitimately point at each other.
Direct queries report the adjacency maps as stored (all edge kinds).
"""

from __future__ import annotations

import enum
import heapq
from collections import deque
from dataclasses import dataclass

from .model import CourseCode, CurriculumGraph, CurrigraphError, EdgeKind

DEFAULT_MAX_LEN = 16
DEFAULT_MAX_PATHS = 100


class UnknownCourse(CurrigraphError, KeyError):
    def __init__(self, code):
        super().__init__(f"unknown course {str(code)!r}")
        self.code = code

    def __str__(self):
        return self.args[0]


class SameCourse(CurrigraphError, ValueError):
    pass


class CyclicGraph(CurrigraphError):
    def __init__(self, report: "CycleReport"):
        shown = "; ".join(" -> ".join(map(str, c)) for c in report.cycles[:3])
        super().__init__(f"prerequisite graph has {len(report.cycles)} cycle(s): {shown}")
        self.report = report


class Direction(enum.Enum):
    FORWARD = "FORWARD"
    BACKWARD = "BACKWARD"
    NONE = "NONE"


@dataclass(frozen=True)
class PathResult:
    paths: tuple
    direction: Direction
    truncated: bool = False


@dataclass(frozen=True)
class CycleReport:
    cycles: tuple

    def __bool__(self):
        return bool(self.cycles)

    def __len__(self):
        return len(self.cycles)


def require_node(g: CurriculumGraph, c: CourseCode):
    if c not in g:
        raise UnknownCourse(c)


def prerequisite_adjacency(g: CurriculumGraph, reverse: bool = False) -> dict:
    """Sorted adjacency lists over PREREQUISITE edges only."""
    adj = {n: [] for n in g.nodes}
    for e in g.edges:
        if e.kind is EdgeKind.PREREQUISITE:
            if reverse:
                adj[e.target].append(e.source)
            else:
                adj[e.source].append(e.target)
    for lst in adj.values():
        lst.sort()
    return adj


def direct_prerequisites(g: CurriculumGraph, c: CourseCode) -> tuple:
    require_node(g, c)
    return g.reverse_adjacency[c]


def direct_successors(g: CurriculumGraph, c: CourseCode) -> tuple:
    require_node(g, c)
    return g.forward_adjacency[c]


def _reach(adj, start, max_depth):
    seen = {start}
    frontier = [start]
    depth = 0
    while frontier and (max_depth is None or depth < max_depth):
        depth += 1
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    seen.discard(start)
    return tuple(sorted(seen))


def transitive_prerequisites(g: CurriculumGraph, c: CourseCode, max_depth: int | None = None) -> tuple:
    """Everything ``c`` depends on within ``max_depth`` hops (``None`` = unbounded)."""
    require_node(g, c)
    return _reach(prerequisite_adjacency(g, reverse=True), c, max_depth)


def transitive_successors(g: CurriculumGraph, c: CourseCode, max_depth: int | None = None) -> tuple:
    require_node(g, c)
    return _reach(prerequisite_adjacency(g), c, max_depth)


def transitive_closure(g: CurriculumGraph) -> dict:
    """Unbounded transitive prerequisites of every node."""
    adj = prerequisite_adjacency(g, reverse=True)
    return {n: _reach(adj, n, None) for n in adj}


def _distances_to(adj_rev, target):
    dist = {target: 0}
    queue = deque([target])
    while queue:
        u = queue.popleft()
        for v in adj_rev[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def _enumerate(adj, adj_rev, a, b, max_len, limit):
    """Simple paths a->b in (length, lexicographic) order, at most ``limit``.

    Iterative deepening on exact length; DFS over sorted successors yields
    equal-length paths in lexicographic order. ``dist`` prunes branches that
    cannot reach ``b`` in the remaining budget.
    """
    dist = _distances_to(adj_rev, b)
    if a not in dist:
        return []
    found = []
    for length in range(max(1, dist[a]), max_len + 1):
        path = [a]
        on_path = {a}

        def extend(u, left):
            for v in adj[u]:
                if left == 1:
                    if v == b:
                        found.append(tuple(path) + (b,))
                        if len(found) >= limit:
                            return True
                    continue
                if v == b or v in on_path or v not in dist or dist[v] > left - 1:
                    continue
                path.append(v)
                on_path.add(v)
                stop = extend(v, left - 1)
                path.pop()
                on_path.discard(v)
                if stop:
                    return True
            return False

        if extend(a, length):
            break
    return found


def paths_between(g: CurriculumGraph, a: CourseCode, b: CourseCode,
                  max_len: int = DEFAULT_MAX_LEN, max_paths: int = DEFAULT_MAX_PATHS) -> PathResult:
    """Simple prerequisite paths from ``a`` to ``b``, or from ``b`` to ``a``.

    The forward direction is tried first; BACKWARD results list paths that
    start at ``b``. Only paths of at most ``max_len`` edges are considered and
    the ``max_paths`` smallest by (length, code sequence) are returned;
    ``truncated`` is set when more exist.
    """
    require_node(g, a)
    require_node(g, b)
    if a == b:
        raise SameCourse(f"both endpoints are {a}")
    if max_len < 1 or max_paths < 1:
        raise ValueError("max_len and max_paths must be positive")
    adj = prerequisite_adjacency(g)
    adj_rev = prerequisite_adjacency(g, reverse=True)
    for src, dst, direction in ((a, b, Direction.FORWARD), (b, a, Direction.BACKWARD)):
        found = _enumerate(adj, adj_rev, src, dst, max_len, max_paths + 1)
        if found:
            return PathResult(tuple(found[:max_paths]), direction, len(found) > max_paths)
    return PathResult((), Direction.NONE, False)


def strongly_connected_components(adj) -> list:
    """Tarjan's algorithm, iterative. Components come out in reverse topological order."""
    index = {}
    low = {}
    stack = []
    on_stack = set()
    comps = []
    counter = 0
    for root in adj:
        if root in index:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[node] = min(low[node], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                comps.append(sorted(comp))
    return comps


def _shortest_cycle_through(adj, start, members):
    parent = {start: None}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v == start:
                cycle = [u]
                while parent[cycle[-1]] is not None:
                    cycle.append(parent[cycle[-1]])
                return tuple(reversed(cycle))
            if v in members and v not in parent:
                parent[v] = u
                queue.append(v)
    raise AssertionError("component without a cycle")


def detect_cycles(g: CurriculumGraph) -> CycleReport:
    """One representative cycle per non-trivial strongly connected component.

    Each cycle starts at the smallest code of its component and is the
    shortest cycle through that node; cycles are sorted.
    """
    adj = prerequisite_adjacency(g)
    cycles = []
    for comp in strongly_connected_components(adj):
        if len(comp) > 1 or comp[0] in adj[comp[0]]:
            cycles.append(_shortest_cycle_through(adj, comp[0], set(comp)))
    return CycleReport(tuple(sorted(cycles)))


def topological_order(g: CurriculumGraph) -> list:
    """Kahn's algorithm; among ready nodes the smallest code goes first."""
    adj = prerequisite_adjacency(g)
    indeg = {n: 0 for n in adj}
    for u in adj:
        for v in adj[u]:
            indeg[v] += 1
    ready = [n for n, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for v in adj[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    if len(order) != len(adj):
        raise CyclicGraph(detect_cycles(g))
    return order


def level_assignment(g: CurriculumGraph) -> dict:
    """Longest prerequisite path ending at each node; sources are level 0."""
    level = {}
    rev = prerequisite_adjacency(g, reverse=True)
    for n in topological_order(g):
        level[n] = max((level[p] + 1 for p in rev[n]), default=0)
    return dict(sorted(level.items()))


def condensed_levels(g: CurriculumGraph) -> dict:
    """Like :func:`level_assignment`, but defined on cyclic graphs too.

    Nodes of one strongly connected component share a level, computed as the
    longest path in the component DAG.
    """
    adj = prerequisite_adjacency(g)
    comps = strongly_connected_components(adj)
    comp_of = {n: i for i, comp in enumerate(comps) for n in comp}
    comp_level = {}
    # Tarjan emits sinks first, so walk the list backwards to see sources first.
    for i in range(len(comps) - 1, -1, -1):
        comp_level.setdefault(i, 0)
        for n in comps[i]:
            for v in adj[n]:
                j = comp_of[v]
                if j != i:
                    comp_level[j] = max(comp_level.get(j, 0), comp_level[i] + 1)
    return {n: comp_level[comp_of[n]] for n in sorted(adj)}
