"""Kneser graphs Kn_{n,k}: adjacency, BFS distance oracles, all-pairs
distance matrices with a binary disk cache, the closed-form odd-graph
distance and the diameter-3 threshold.

Vertices are the k-subsets of [n] indexed by colex rank.  Only the
connected regime n >= 2k+1 is supported.  Every distance reported by this
module is grounded in breadth-first search; the closed forms are verified
against BFS, never substituted for it.
"""

from __future__ import annotations

import itertools
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import (
    MAX_GROUND,
    KSet,
    ResourceCapError,
    binomial,
    enumerate_ksets,
    iter_bits,
)

BFS_CAP = 100_000  # vertex-count bound for BFS-based operations

_MAGIC = b"GPKN1"


@dataclass(frozen=True)
class KneserParams:
    """Parameters (n, k) of a Kneser graph in the connected regime."""

    n: int
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"KneserParams: k={self.k} must be >= 1")
        if self.n > MAX_GROUND:
            raise ValueError(f"KneserParams: n={self.n} exceeds supported ground size {MAX_GROUND}")
        if self.n < 2 * self.k + 1:
            raise ValueError(f"KneserParams: n={self.n} < 2k+1={2 * self.k + 1} (disconnected regime rejected)")

    @property
    def order(self) -> int:
        return binomial(self.n, self.k)


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """All-pairs hop distances of a connected graph, indexed by vertex rank."""

    order: int
    d: np.ndarray  # uint8, symmetric, zero diagonal

    def dist(self, i: int, j: int) -> int:
        return int(self.d[i, j])

    def max_distance(self) -> int:
        return int(self.d.max())


def adjacent(a: KSet, b: KSet) -> bool:
    """Edge test: two vertices are adjacent iff the subsets are disjoint."""
    if a.n != b.n or a.k != b.k:
        raise ValueError(f"adjacent: mismatched parameters (n={a.n},k={a.k}) vs (n={b.n},k={b.k})")
    return a.mask & b.mask == 0


class KneserUniverse:
    """Vertex tables for one Kn_{n,k}: colex-ordered masks, per-vertex element
    rows, and vectorized on-the-fly neighbor-rank generation (no stored
    adjacency beyond the row being expanded)."""

    def __init__(self, params: KneserParams):
        self.params = params
        n, k = params.n, params.k
        order = params.order
        self.order = order
        masks = []
        elem = np.empty((order, k), dtype=np.int8)
        member = np.zeros((order, n), dtype=bool)
        for r, s in enumerate(enumerate_ksets(n, k)):
            masks.append(s.mask)
            row = [i for i in iter_bits(s.mask)]
            elem[r] = row
            member[r, row] = True
        self.masks = masks
        self.elements = elem  # 0-based elements, ascending per row
        self.membership = member
        self.rank_of_mask = {m: r for r, m in enumerate(masks)}
        # Pascal table and index combinations used to rank neighbors in bulk.
        pascal = np.zeros((n + 1, k + 2), dtype=np.int64)
        pascal[:, 0] = 1
        for i in range(1, n + 1):
            for j in range(1, min(i, k + 1) + 1):
                pascal[i, j] = pascal[i - 1, j - 1] + pascal[i - 1, j]
        self._pascal = pascal
        self._idx_combos = np.array(list(itertools.combinations(range(n - k), k)), dtype=np.int64)
        self._rank_cols = np.arange(1, k + 1, dtype=np.int64)

    def rank(self, s: KSet) -> int:
        if s.n != self.params.n or s.k != self.params.k:
            raise ValueError("rank: set does not belong to this Kneser graph")
        return self.rank_of_mask[s.mask]

    def vertex(self, r: int) -> KSet:
        return KSet(self.masks[r], self.params.n)

    def neighbor_ranks(self, v: int) -> np.ndarray:
        """Colex ranks of all k-subsets of the complement of vertex ``v``."""
        compl = np.nonzero(~self.membership[v])[0]
        rows = compl[self._idx_combos]  # ascending within each row
        return self._pascal[rows, self._rank_cols].sum(axis=1)

    def adjacency_bitsets(self) -> list[int]:
        """Per-vertex neighbor bitmasks over vertex ranks (built row by row)."""
        out = []
        buf = np.zeros(self.order, dtype=bool)
        for v in range(self.order):
            ranks = self.neighbor_ranks(v)
            buf[:] = False
            buf[ranks] = True
            out.append(int.from_bytes(np.packbits(buf, bitorder="little").tobytes(), "little"))
        return out

    def bfs_distances(self, source: int) -> np.ndarray:
        """Single-source BFS distances as a uint8 vector."""
        dist = np.full(self.order, 255, dtype=np.uint8)
        dist[source] = 0
        frontier = np.array([source], dtype=np.int64)
        d = 0
        while frontier.size:
            d += 1
            cand = np.concatenate([self.neighbor_ranks(int(v)) for v in frontier])
            cand = cand[dist[cand] == 255]
            if cand.size == 0:
                break
            frontier = np.unique(cand)
            dist[frontier] = d
        return dist


def bitset_apsp(adjacency: list[int], order: int) -> np.ndarray:
    """All-pairs BFS over bitmask adjacency; returns a uint8 matrix.

    255 marks unreachable vertices, which callers treat as an error for the
    connected graphs this package works with.
    """
    nbytes = (order + 7) // 8
    d = np.full((order, order), 255, dtype=np.uint8)
    for src in range(order):
        row = d[src]
        row[src] = 0
        visited = 1 << src
        frontier = visited
        level = 0
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= adjacency[v]
            nxt &= ~visited
            if nxt == 0:
                break
            level += 1
            visited |= nxt
            sel = np.unpackbits(
                np.frombuffer(nxt.to_bytes(nbytes, "little"), dtype=np.uint8),
                bitorder="little",
            )[:order].view(bool)
            row[sel] = level
            frontier = nxt
    return d


def all_pairs_distances(p: KneserParams, cap: int = BFS_CAP) -> DistanceMatrix:
    """Exact hop distances of Kn_{n,k} by BFS from every vertex."""
    order = p.order
    if order > cap:
        raise ResourceCapError(f"all_pairs_distances: {order} vertices exceeds cap {cap}")
    uni = KneserUniverse(p)
    d = bitset_apsp(uni.adjacency_bitsets(), order)
    if d.max() == 255:
        raise AssertionError("Kneser graph unexpectedly disconnected")  # n >= 2k+1 forbids this
    return DistanceMatrix(order=order, d=d)


def distance_closed_form_2k1(k: int, s: int) -> int:
    """Closed-form distance in Kn_{2k+1,k} between sets with intersection s."""
    if not 0 <= s <= k:
        raise ValueError(f"distance_closed_form_2k1: intersection {s} out of range 0..{k}")
    return min(2 * (k - s), 2 * s + 1)


def diameter(p: KneserParams, cache: "MatrixCache | None" = None, cap: int = BFS_CAP) -> int:
    """Diameter of Kn_{n,k}.

    Uses the max entry of a cached distance matrix when one is available.
    Otherwise runs a single-source BFS: the graph is vertex-transitive, so
    every vertex has the same eccentricity and one source suffices.  The two
    routes are cross-checked against each other in the test suite.
    """
    if cache is not None:
        dm = cache.peek(p)
        if dm is not None:
            return dm.max_distance()
    if p.order > cap:
        raise ResourceCapError(f"diameter: {p.order} vertices exceeds cap {cap}")
    row = KneserUniverse(p).bfs_distances(0)
    ecc = int(row.max())
    if ecc == 255:
        raise AssertionError("Kneser graph unexpectedly disconnected")
    return ecc


def diam3_threshold(k: int, verify: bool = True, cap: int = BFS_CAP) -> int:
    """Minimal n with diam(Kn_{n,k}) <= 3, clamped into the n >= 2k+1 regime.

    The value is ceil(2.5k - 0.5) == (5k) // 2.  With ``verify`` the result
    is confirmed by BFS (diameter <= 3 at n, > 3 at n-1) whenever the graphs
    fit under the size cap.
    """
    if k < 2:
        raise ValueError("diam3_threshold: k must be >= 2")
    n_min = max(5 * k // 2, 2 * k + 1)
    if verify:
        if binomial(n_min, k) <= cap:
            d = diameter(KneserParams(n_min, k), cap=cap)
            if d > 3:
                raise AssertionError(f"diam3_threshold: diameter {d} > 3 at n={n_min}, k={k}")
        if n_min - 1 >= 2 * k + 1 and binomial(n_min - 1, k) <= cap:
            d = diameter(KneserParams(n_min - 1, k), cap=cap)
            if d <= 3:
                raise AssertionError(f"diam3_threshold: diameter {d} <= 3 already at n={n_min - 1}, k={k}")
    return n_min


class MatrixCache:
    """Distance matrices keyed by (n, k), memoized and optionally persisted.

    Cache file layout: ``GPKN1`` magic, then n and k as unsigned 16-bit
    little-endian, then the row-major uint8 distance matrix.
    """

    def __init__(self, cache_dir: str | os.PathLike | None = None):
        self.cache_dir = Path(cache_dir) if cache_dir is not None else None
        self._mem: dict[tuple[int, int], DistanceMatrix] = {}

    def _path(self, p: KneserParams) -> Path:
        assert self.cache_dir is not None
        return self.cache_dir / f"kn-{p.n}-{p.k}.gpkn"

    def peek(self, p: KneserParams) -> DistanceMatrix | None:
        """Return the matrix if already in memory or on disk, else None."""
        key = (p.n, p.k)
        if key in self._mem:
            return self._mem[key]
        if self.cache_dir is not None:
            dm = self._load(p)
            if dm is not None:
                self._mem[key] = dm
                return dm
        return None

    def get(self, p: KneserParams, cap: int = BFS_CAP) -> DistanceMatrix:
        dm = self.peek(p)
        if dm is None:
            dm = all_pairs_distances(p, cap=cap)
            self._mem[(p.n, p.k)] = dm
            if self.cache_dir is not None:
                self._store(p, dm)
        return dm

    def _load(self, p: KneserParams) -> DistanceMatrix | None:
        path = self._path(p)
        try:
            blob = path.read_bytes()
        except OSError:
            return None
        order = p.order
        expected = len(_MAGIC) + 4 + order * order
        if len(blob) != expected or not blob.startswith(_MAGIC):
            return None  # stale or corrupt cache entries are recomputed
        n, k = struct.unpack_from("<HH", blob, len(_MAGIC))
        if (n, k) != (p.n, p.k):
            return None
        d = np.frombuffer(blob, dtype=np.uint8, offset=len(_MAGIC) + 4).reshape(order, order).copy()
        return DistanceMatrix(order=order, d=d)

    def _store(self, p: KneserParams, dm: DistanceMatrix) -> None:
        assert self.cache_dir is not None
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        path = self._path(p)
        tmp = path.with_suffix(".tmp")
        tmp.write_bytes(_MAGIC + struct.pack("<HH", p.n, p.k) + dm.d.tobytes())
        tmp.replace(path)
