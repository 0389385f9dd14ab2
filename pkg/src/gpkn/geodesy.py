"""General-position machinery for finite connected graphs.

A vertex set S is in general position when no member lies on a shortest
path between two other members; with a distance matrix in hand this is the
metric condition d(x,z) + d(z,y) == d(x,y).  The module provides the
definition-based checker, the component-based checker (cliques, constant
inter-component distances, no metric triangle between components), and two
exact solvers for the largest such set: a subset-enumeration oracle and a
branch-and-bound search over the 3-uniform hypergraph of blocked triples.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import ParseError, ResourceCapError, iter_bits
from .kneser import DistanceMatrix, KneserParams, KneserUniverse, bitset_apsp

NAIVE_CAP = 20
EXACT_CAP = 2000
_VECTOR_MIN = 64  # subset size above which the numpy witness scan pays off


@dataclass(frozen=True, eq=False)
class SimpleGraph:
    """Undirected loop-free connected graph with bitmask adjacency rows."""

    order: int
    adjacency: tuple[int, ...]

    def __post_init__(self):
        if self.order < 1 or len(self.adjacency) != self.order:
            raise ValueError("SimpleGraph: adjacency length must equal order")
        for v, row in enumerate(self.adjacency):
            if row >> self.order:
                raise ValueError(f"SimpleGraph: vertex {v} has neighbors out of range")
            if row >> v & 1:
                raise ValueError(f"SimpleGraph: loop at vertex {v}")
        for v, row in enumerate(self.adjacency):
            for u in iter_bits(row):
                if not self.adjacency[u] >> v & 1:
                    raise ValueError(f"SimpleGraph: edge {v}-{u} not symmetric")
        if not self._connected():
            raise ValueError("SimpleGraph: graph is disconnected")

    def _connected(self) -> bool:
        visited = 1
        frontier = 1
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= self.adjacency[v]
            frontier = nxt & ~visited
            visited |= frontier
        return visited.bit_count() == self.order

    @classmethod
    def from_edges(cls, order: int, edges) -> "SimpleGraph":
        rows = [0] * order
        for u, v in edges:
            if not (0 <= u < order and 0 <= v < order):
                raise ValueError(f"edge {u}-{v} out of range for order {order}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(order, tuple(rows))

    @classmethod
    def from_kneser(cls, p: KneserParams) -> "SimpleGraph":
        uni = KneserUniverse(p)
        return cls(uni.order, tuple(uni.adjacency_bitsets()))

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()


def parse_edge_list(text: str) -> SimpleGraph:
    """Edge-list format: first line ``order=<int>``, then one 0-based ``u v`` per line."""
    lines = text.splitlines()
    if not lines or not lines[0].strip().startswith("order="):
        raise ParseError(1, "missing header 'order=<int>'")
    try:
        order = int(lines[0].strip()[len("order="):])
    except ValueError:
        raise ParseError(1, f"bad header {lines[0]!r}") from None
    edges = []
    for line_no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        parts = line.split()
        try:
            if len(parts) != 2:
                raise ValueError
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ParseError(line_no, f"bad edge line {raw!r}") from None
    try:
        return SimpleGraph.from_edges(order, edges)
    except ValueError as exc:
        raise ParseError(len(lines), str(exc)) from None


def distance_matrix(g: SimpleGraph) -> DistanceMatrix:
    """All-pairs BFS distances of a connected graph."""
    d = bitset_apsp(list(g.adjacency), g.order)
    return DistanceMatrix(order=g.order, d=d)


@dataclass(frozen=True)
class GPWitness:
    """Ordered triple (x, z, y) with z on a geodesic between x and y."""

    x: int
    z: int
    y: int


@dataclass(frozen=True, eq=False)
class ComponentDecomposition:
    """Components of the induced subgraph plus their constant distance table."""

    components: tuple[tuple[int, ...], ...]
    dist_table: np.ndarray  # int16, symmetric, -1 on the diagonal


def on_geodesic(dm: DistanceMatrix, x: int, z: int, y: int) -> bool:
    """True iff z lies on some shortest x-y path (metric betweenness)."""
    for v in (x, z, y):
        if not 0 <= v < dm.order:
            raise ValueError(f"on_geodesic: vertex {v} out of range 0..{dm.order - 1}")
    if x == y or z == x or z == y:
        raise ValueError("on_geodesic: vertices must be pairwise distinct")
    d = dm.d
    return int(d[x, z]) + int(d[z, y]) == int(d[x, y])


def _witness_scan_python(d, S):
    for x in S:
        dx = d[x]
        for z in S:
            if z == x:
                continue
            dz = d[z]
            a = dx[z]
            for y in S:
                if y == x or y == z:
                    continue
                if a + dz[y] == dx[y]:
                    return GPWitness(x, z, y)
    return None


def _witness_scan_numpy(dm, S):
    sub = dm.d[np.ix_(S, S)].astype(np.int32)
    m = len(S)
    for xi in range(m):
        row = sub[xi]
        cond = row[:, None] + sub == row[None, :]
        cond[xi, :] = False
        cond[:, xi] = False
        np.fill_diagonal(cond, False)
        if cond.any():
            zi, yi = np.argwhere(cond)[0]
            return GPWitness(S[xi], S[int(zi)], S[int(yi)])
    return None


def check_gp_direct(dm: DistanceMatrix, S) -> GPWitness | None:
    """Definition-based check: None when S is in general position, else the
    lexicographically first violating triple (x, z, y) by vertex rank."""
    verts = sorted(set(int(v) for v in S))
    if not verts:
        raise ValueError("check_gp_direct: S must be nonempty")
    if verts[0] < 0 or verts[-1] >= dm.order:
        raise ValueError("check_gp_direct: vertex out of range")
    if len(verts) <= 2:
        return None
    if len(verts) >= _VECTOR_MIN:
        return _witness_scan_numpy(dm, verts)
    rows = dm.d[np.ix_(verts, verts)].astype(np.int64).tolist()
    local = _witness_scan_python(rows, range(len(verts)))
    if local is None:
        return None
    return GPWitness(verts[local.x], verts[local.z], verts[local.y])


def check_gp_components(
    g: SimpleGraph, dm: DistanceMatrix, S
) -> tuple[bool, ComponentDecomposition | None]:
    """Component-based check: S is in general position iff the components of
    the induced subgraph are cliques, distances between two components are
    constant, and no component lies metrically between two others.  Returns
    the decomposition when all three conditions hold."""
    verts = sorted(set(int(v) for v in S))
    if not verts:
        raise ValueError("check_gp_components: S must be nonempty")
    smask = 0
    for v in verts:
        if not 0 <= v < g.order:
            raise ValueError("check_gp_components: vertex out of range")
        smask |= 1 << v

    components = []
    remaining = smask
    while remaining:
        start = remaining & -remaining
        comp = start
        frontier = start
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= g.adjacency[v] & smask
            frontier = nxt & ~comp
            comp |= frontier
        components.append(tuple(iter_bits(comp)))
        remaining &= ~comp
    components.sort(key=lambda c: c[0])

    # Condition 1: each component induces a clique.
    for comp in components:
        cmask = 0
        for v in comp:
            cmask |= 1 << v
        for v in comp:
            if g.adjacency[v] & cmask != cmask & ~(1 << v):
                return False, None

    # Condition 2: inter-component distances are constant.
    h = len(components)
    table = np.full((h, h), -1, dtype=np.int16)
    d = dm.d
    for i in range(h):
        for j in range(i + 1, h):
            vals = {int(d[u, v]) for u in components[i] for v in components[j]}
            if len(vals) != 1:
                return False, None
            table[i, j] = table[j, i] = vals.pop()

    # Condition 3: no component lies metrically between two others.
    if h >= 3:
        t = table.astype(np.int32)
        for mid in range(h):
            cond = t[:, mid][:, None] + t[mid, :][None, :] == t
            cond[mid, :] = False
            cond[:, mid] = False
            np.fill_diagonal(cond, False)
            if cond.any():
                return False, None

    return True, ComponentDecomposition(tuple(components), table)


def _blocked_pair_masks(dm: DistanceMatrix) -> tuple[dict[tuple[int, int], int], list[int]]:
    """Conflict table of the blocked-triple hypergraph.

    conflicts[(a, b)] (a < b) is the bitmask of vertices c such that one of
    a, b, c lies on a geodesic between the other two; degrees counts the
    blocked triples through each vertex.
    """
    n = dm.order
    d = dm.d.astype(np.int32)
    conflicts: dict[tuple[int, int], int] = {}
    degrees = [0] * n
    for mid in range(n):
        cond = d[:, mid][:, None] + d[mid, :][None, :] == d
        cond[mid, :] = False
        cond[:, mid] = False
        np.fill_diagonal(cond, False)
        xs, ys = np.nonzero(cond)
        bit_mid = 1 << mid
        for x, y in zip(xs.tolist(), ys.tolist()):
            if x >= y:
                continue  # betweenness is symmetric in the endpoints
            conflicts[(x, y)] = conflicts.get((x, y), 0) | bit_mid
            degrees[x] += 1
            degrees[y] += 1
            degrees[mid] += 1
    return conflicts, degrees


@dataclass(frozen=True)
class GpResult:
    """Result of a general-position solver; ``optimal`` is False only when a
    time limit cut the search short and the value is a lower bound."""

    size: int
    vertices: tuple[int, ...]
    optimal: bool


def gp_solve_naive(g: SimpleGraph, cap: int = NAIVE_CAP) -> GpResult:
    """Exact maximum by enumerating all 2^order subsets through the
    definition-based checker.  Intentionally unsophisticated: this is the
    oracle the branch-and-bound solver is validated against."""
    if g.order > cap:
        raise ResourceCapError(f"gp_solve_naive: order {g.order} exceeds cap {cap}")
    dm = distance_matrix(g)
    rows = dm.d.tolist()
    best = 1
    best_set = (0,)
    for mask in range(1, 1 << g.order):
        if mask.bit_count() <= best:
            continue
        verts = list(iter_bits(mask))
        if _witness_scan_python(rows, verts) is None:
            best = len(verts)
            best_set = tuple(verts)
    return GpResult(best, best_set, True)


class _Deadline:
    def __init__(self, limit: float | None):
        self.expiry = None if limit is None else time.monotonic() + limit
        self.hit = False

    def expired(self) -> bool:
        if self.expiry is not None and time.monotonic() > self.expiry:
            self.hit = True
        return self.hit


def gp_solve_exact(
    g: SimpleGraph,
    lower_hint: int | None = None,
    time_limit: float | None = None,
    cap: int = EXACT_CAP,
) -> GpResult:
    """Exact maximum general-position set via branch and bound.

    The search is an independent-set search in the 3-uniform hypergraph of
    blocked triples: vertices are branched in descending blocked-triple
    degree, the incumbent only improves, and branches whose remaining
    candidates cannot beat it are pruned.  The returned set is canonicalized
    to the lexicographically smallest optimum by a second, target-driven
    search.  ``lower_hint`` must be an achievable size if given.
    """
    if g.order > cap:
        raise ResourceCapError(f"gp_solve_exact: order {g.order} exceeds cap {cap}")
    dm = distance_matrix(g)
    conflicts, degrees = _blocked_pair_masks(dm)
    n = g.order
    deadline = _Deadline(time_limit)

    order_desc = sorted(range(n), key=lambda v: (-degrees[v], v))
    position = [0] * n
    for idx, v in enumerate(order_desc):
        position[v] = idx

    def pair_mids(v: int, chosen: list[int]) -> int:
        """Union of middle-vertex masks of blocked triples whose endpoint pair
        is (a, v) for some already-chosen a."""
        acc = 0
        for a in chosen:
            m = conflicts.get((a, v) if a < v else (v, a))
            if m:
                acc |= m
        return acc

    # Adding v to a chosen set C completes a blocked triple in two ways:
    # v is the middle of endpoints already in C (prevented by candidate
    # removal below), or v is an endpoint whose triple's middle is already
    # in C (detected by pair_mids(v, C) & cmask != 0).

    # Greedy incumbent: scan vertices by ascending degree, keep what fits.
    chosen: list[int] = []
    cmask = 0
    blocked = 0
    for v in sorted(range(n), key=lambda u: (degrees[u], u)):
        if blocked >> v & 1:
            continue
        mids = pair_mids(v, chosen)
        if mids & cmask:
            continue
        chosen.append(v)
        cmask |= 1 << v
        blocked |= mids
    best = len(chosen)
    best_set = tuple(sorted(chosen))
    if lower_hint is not None and lower_hint > best:
        best = lower_hint - 1  # prune below the hint but admit hint-sized optima
        best_set = ()

    full = (1 << n) - 1

    def search(cands: int, chosen: list[int], cmask: int) -> None:
        nonlocal best, best_set
        while cands:
            if deadline.expired():
                return
            if len(chosen) + cands.bit_count() <= best:
                return
            # branch vertex: highest blocked-triple degree among candidates
            v = min(iter_bits(cands), key=lambda u: position[u])
            vbit = 1 << v
            cands &= ~vbit
            mids = pair_mids(v, chosen)
            if mids & cmask == 0:
                chosen.append(v)
                if len(chosen) > best:
                    best = len(chosen)
                    best_set = tuple(sorted(chosen))
                search(cands & ~mids, chosen, cmask | vbit)
                chosen.pop()
            # v stays excluded in the continuing loop; if it completed a
            # triple it can never be added anywhere below this node

    search(full, [], 0)

    if deadline.hit:
        if best_set == ():
            raise ValueError("gp_solve_exact: lower_hint not achieved before timeout")
        return GpResult(best, best_set, False)
    if best_set == ():
        raise ValueError(f"gp_solve_exact: lower_hint {lower_hint} exceeds the optimum")

    # Canonicalization: first size-`best` set found by an ascending-index,
    # include-before-exclude search is the lexicographically smallest optimum.
    target = best
    found: list[int] | None = None

    def lex_search(cands: int, chosen: list[int], cmask: int) -> bool:
        nonlocal found
        if len(chosen) == target:
            found = sorted(chosen)
            return True
        if len(chosen) + cands.bit_count() < target:
            return False
        vbit = cands & -cands
        v = vbit.bit_length() - 1
        mids = pair_mids(v, chosen)
        if mids & cmask == 0:
            chosen.append(v)
            if lex_search(cands & ~vbit & ~mids, chosen, cmask | vbit):
                return True
            chosen.pop()
        return lex_search(cands & ~vbit, chosen, cmask)

    lex_search(full, [], 0)
    assert found is not None
    return GpResult(best, tuple(found), True)
