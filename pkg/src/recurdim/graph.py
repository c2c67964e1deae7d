"""Address digraph of an instance, its strongly connected pieces and the
position ordering between them.

Vertices are the map indices 1..N.  There is an edge j -> i exactly when the
source interval I_j is contained in the target domain D_i, i.e. when the
values of the function on I_j feed the recursion on interval i.
"""
from __future__ import annotations

from dataclasses import dataclass

from .config import RfifSpec


class RatioError(ValueError):
    """Raised when |D_n|/|I_n| is not an integer >= 2 shared across a piece."""

    def __init__(self, message: str, map_index: int | None = None):
        self.map_index = map_index
        super().__init__(message)


@dataclass(frozen=True)
class AddressGraph:
    n_vertices: int
    # edges[j] = sorted tuple of i with j -> i
    edges: tuple[tuple[int, ...], ...]

    def successors(self, j: int) -> tuple[int, ...]:
        return self.edges[j - 1]

    def predecessors(self, i: int) -> tuple[int, ...]:
        return tuple(j for j in range(1, self.n_vertices + 1) if i in self.edges[j - 1])


@dataclass(frozen=True)
class Component:
    """A strongly connected set of vertices with its common subdivision ratio."""

    index: int
    members: tuple[int, ...]
    ratio: int
    position: int = 0


def build_address_graph(spec: RfifSpec) -> AddressGraph:
    edges: list[tuple[int, ...]] = []
    for j in range(1, spec.N + 1):
        I_j = spec.interval(j)
        out = tuple(
            i for i in range(1, spec.N + 1) if spec.domain(i).contains(I_j)
        )
        edges.append(out)
    return AddressGraph(n_vertices=spec.N, edges=tuple(edges))


def _tarjan_sccs(graph: AddressGraph) -> list[list[int]]:
    """Strongly connected components in reverse topological order (iterative)."""
    n = graph.n_vertices
    index = [0] * (n + 1)
    low = [0] * (n + 1)
    on_stack = [False] * (n + 1)
    visited = [False] * (n + 1)
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 1

    for root in range(1, n + 1):
        if visited[root]:
            continue
        work = [(root, iter(graph.successors(root)))]
        visited[root] = True
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if not visited[w]:
                    visited[w] = True
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(graph.successors(w))))
                    advanced = True
                    break
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(sorted(comp))
    return sccs


def is_strongly_connected(graph: AddressGraph, members: tuple[int, ...]) -> bool:
    """Every vertex of ``members`` reaches every other through ``members``."""
    mset = set(members)
    if not members:
        return False

    def reach(start: int, succ) -> set[int]:
        seen = {start}
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for w in succ(v):
                if w in mset and w not in seen:
                    seen.add(w)
                    frontier.append(w)
        return seen

    fwd = reach(members[0], graph.successors)
    bwd = reach(members[0], graph.predecessors)
    return fwd >= mset and bwd >= mset


def components(graph: AddressGraph, spec: RfifSpec) -> list[Component]:
    """Nontrivial strongly connected pieces, each with its subdivision ratio.

    A singleton counts only if it carries a self loop.  The ratio
    |D_n| / |I_n| must be one integer >= 2 shared by the whole piece.
    """
    raw = _tarjan_sccs(graph)
    comps: list[Component] = []
    for members in raw:
        if len(members) == 1 and members[0] not in graph.successors(members[0]):
            continue
        ratios = set()
        for n in members:
            ratio = spec.domain(n).length / spec.interval(n).length
            if ratio.denominator != 1 or ratio < 2:
                raise RatioError(
                    f"|D_{n}|/|I_{n}| = {ratio} is not an integer >= 2", map_index=n
                )
            ratios.add(int(ratio))
        if len(ratios) != 1:
            raise RatioError(
                f"members {members} disagree on subdivision ratio: {sorted(ratios)}",
                map_index=members[0],
            )
        comps.append(Component(index=0, members=tuple(members), ratio=ratios.pop()))
    comps.sort(key=lambda c: c.members)
    comps = [
        Component(index=k + 1, members=c.members, ratio=c.ratio, position=0)
        for k, c in enumerate(comps)
    ]
    return comps


@dataclass(frozen=True)
class PositionMap:
    values: dict[int, int]

    def __call__(self, i: int) -> int:
        return self.values[i]


def positions(graph: AddressGraph, spec: RfifSpec) -> PositionMap:
    """P(i) = 1 if no vertex outside i's strong class reaches i, else
    1 + max over such feeders."""
    n = graph.n_vertices
    # transitive closure of reachability: reach[j] = set of i reachable from j
    reach: list[set[int]] = [set() for _ in range(n + 1)]
    for j in range(1, n + 1):
        seen: set[int] = set()
        frontier = [j]
        while frontier:
            v = frontier.pop()
            for w in graph.successors(v):
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        reach[j] = seen

    # feeders[i] = vertices j with a path j -> i but no path i -> j
    feeders: list[list[int]] = [[] for _ in range(n + 1)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if j == i:
                continue
            if i in reach[j] and j not in reach[i]:
                feeders[i].append(j)

    values: dict[int, int] = {}

    def value(i: int) -> int:
        if i in values:
            return values[i]
        v = 1 if not feeders[i] else 1 + max(value(j) for j in feeders[i])
        values[i] = v
        return v

    for i in range(1, n + 1):
        value(i)
    return PositionMap(values=values)
