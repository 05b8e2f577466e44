"""Simple undirected graphs: graph6 I/O, benchmark-set enumeration, coloring oracles.

Vertices are 0..n-1.  Edge bit-strings are ordered row-major over the upper
triangle: (0,1), (0,2), ..., (0,n-1), (1,2), ..., (n-2,n-1).  The canonical
form of a graph is the lexicographically minimal such bit-string over all
vertex permutations.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

MAX_ENUM_N = 7
CACHE_ENV = "XYCOLOR_CACHE_DIR"


class Graph6Error(ValueError):
    pass


class ResourceLimitError(RuntimeError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset  # frozenset of sorted (u, v) tuples

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")

    @staticmethod
    def from_edges(n, edges) -> "Graph":
        return Graph(n, frozenset(tuple(sorted(e)) for e in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> list:
        d = [0] * self.n
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return d

    def edge_list(self) -> list:
        return sorted(self.edges)

    def has_edge(self, u, v) -> bool:
        return tuple(sorted((u, v))) in self.edges

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n

    def permuted(self, perm) -> "Graph":
        """Relabel: vertex v becomes perm[v]."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def edge_mask(self) -> int:
        pos = _edge_positions(self.n)
        mask = 0
        for e in self.edges:
            mask |= 1 << pos[e]
        return mask

    @staticmethod
    def from_edge_mask(n, mask) -> "Graph":
        pairs = _edge_pairs(n)
        return Graph(n, frozenset(pairs[k] for k in range(len(pairs)) if (mask >> k) & 1))


@dataclass
class GraphSet:
    members: list  # canonical-form Graphs
    n: int
    constraint: str  # "connected" or "chromatic=<chi>"


@lru_cache(maxsize=None)
def _edge_pairs(n):
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


@lru_cache(maxsize=None)
def _edge_positions(n):
    return {e: k for k, e in enumerate(_edge_pairs(n))}


# ---------------------------------------------------------------------------
# graph6 (format spec: McKay's "graph6" ASCII interchange format)

def parse_graph6(text: str) -> Graph:
    line = text.strip()
    if not line:
        raise Graph6Error("empty graph6 string (byte 0)")
    data = [ord(c) - 63 for c in line]
    for off, val in enumerate(data):
        if not (0 <= val <= 63):
            raise Graph6Error(f"invalid graph6 byte at offset {off}: {line[off]!r}")
    if data[0] == 63:
        raise Graph6Error("graphs with n > 62 not supported (byte 0)")
    n = data[0]
    bits_needed = n * (n - 1) // 2
    bytes_needed = (bits_needed + 5) // 6
    body = data[1:]
    if len(body) < bytes_needed:
        raise Graph6Error(
            f"truncated bit-vector: need {bytes_needed} data bytes, got {len(body)} "
            f"(byte {1 + len(body)})"
        )
    if len(body) > bytes_needed:
        raise Graph6Error(f"trailing bytes after bit-vector (byte {1 + bytes_needed})")
    bits = []
    for val in body:
        bits.extend((val >> (5 - k)) & 1 for k in range(6))
    # graph6 orders bits column-major: for j in 1..n-1, i in 0..j-1
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i, j))
            idx += 1
    return Graph.from_edges(n, edges)


def to_graph6(g: Graph) -> str:
    n = g.n
    if n > 62:
        raise Graph6Error("graphs with n > 62 not supported")
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if g.has_edge(i, j) else 0)
    while len(bits) % 6:
        bits.append(0)
    out = [chr(n + 63)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k:k + 6]:
            val = (val << 1) | b
        out.append(chr(val + 63))
    return "".join(out)


def write_graph6_file(graphs, path):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        for g in graphs:
            fh.write(to_graph6(g) + "\n")


def read_graph6_file(path):
    with open(path) as fh:
        return [parse_graph6(line) for line in fh if line.strip()]


# ---------------------------------------------------------------------------
# Canonicalization by full permutation minimization

@lru_cache(maxsize=None)
def _perm_tables(n):
    """For every permutation p of range(n): src[p, k] is the bit position, in the
    original graph, of bit k of the relabeled graph (vertex v -> p[v])."""
    pairs = _edge_pairs(n)
    pos = _edge_positions(n)
    perms = list(itertools.permutations(range(n)))
    src = np.empty((len(perms), len(pairs)), dtype=np.int64)
    for pi, p in enumerate(perms):
        inv = [0] * n
        for v, t in enumerate(p):
            inv[t] = v
        for k, (i, j) in enumerate(pairs):
            a, b = inv[i], inv[j]
            src[pi, k] = pos[(a, b) if a < b else (b, a)]
    return perms, src


@lru_cache(maxsize=None)
def _pow2(nbits):
    return (np.int64(1) << np.arange(nbits, dtype=np.int64))


def canonical_mask(n: int, mask: int) -> int:
    """Minimal edge bit-string over all vertex relabelings."""
    _, src = _perm_tables(n)
    bits = (np.int64(mask) >> src) & 1
    return int((bits * _pow2(src.shape[1])).sum(axis=1).min())


def canonical_form(g: Graph) -> Graph:
    return Graph.from_edge_mask(g.n, canonical_mask(g.n, g.edge_mask()))


def _mask_connected(n, mask) -> bool:
    if n <= 1:
        return True
    pairs = _edge_pairs(n)
    adj = [0] * n
    for k, (i, j) in enumerate(pairs):
        if (mask >> k) & 1:
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        v = 0
        f = frontier
        while f:
            if f & 1:
                nxt |= adj[v]
            f >>= 1
            v += 1
        frontier = nxt & ~seen
        seen |= frontier
    return seen == (1 << n) - 1


def enumerate_connected_graphs(n: int, cache_dir=None) -> GraphSet:
    """One canonical representative per isomorphism class of connected graphs.

    Built by vertex augmentation: every connected graph on n vertices arises
    from a connected graph on n-1 vertices by attaching a new vertex to a
    nonempty neighbor set.  Isomorphism rejection is by full permutation
    minimization of the edge bit-string.
    """
    if not (1 <= n <= MAX_ENUM_N):
        raise ValueError(f"n must be in [1, {MAX_ENUM_N}], got {n}")
    cached = _load_cache(n, None, cache_dir)
    if cached is not None:
        return cached
    if n == 1:
        gs = GraphSet([Graph.from_edges(1, [])], 1, "connected")
    else:
        parents = enumerate_connected_graphs(n - 1, cache_dir).members
        pos = _edge_positions(n)
        seen = set()
        for parent in parents:
            base = 0
            for e in parent.edges:
                base |= 1 << pos[e]
            for nbrs in range(1, 1 << (n - 1)):
                mask = base
                for v in range(n - 1):
                    if (nbrs >> v) & 1:
                        mask |= 1 << pos[(v, n - 1)]
                seen.add(canonical_mask(n, mask))
        gs = GraphSet([Graph.from_edge_mask(n, m) for m in sorted(seen)], n, "connected")
    _store_cache(gs, n, None, cache_dir)
    return gs


# ---------------------------------------------------------------------------
# Coloring oracles

def _proper_coloring_exists(g: Graph, kappa: int) -> bool:
    n = g.n
    nbrs_lower = [[u for u in range(v) if g.has_edge(u, v)] for v in range(n)]
    colors = [0] * n

    def assign(v, used):
        if v == n:
            return True
        # first-use symmetry pruning: new colors tried once
        limit = min(kappa, used + 1)
        for c in range(limit):
            if all(colors[u] != c for u in nbrs_lower[v]):
                colors[v] = c
                if assign(v + 1, max(used, c + 1)):
                    return True
        return False

    return assign(0, 0)


def chromatic_number(g: Graph) -> int:
    if g.n == 0:
        return 0
    for kappa in range(1, g.n + 1):
        if _proper_coloring_exists(g, kappa):
            return kappa
    return g.n


def max_colorable_subgraph(g: Graph, kappa: int) -> int:
    """C_max: max number of properly colored edges over all kappa^n assignments."""
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    if kappa ** g.n > 10 ** 8:
        raise ResourceLimitError(f"search space {kappa}^{g.n} exceeds 1e8")
    if _proper_coloring_exists(g, kappa):
        return g.m
    edges = g.edge_list()
    best = 0
    for assign in itertools.product(range(kappa), repeat=g.n):
        proper = sum(1 for u, v in edges if assign[u] != assign[v])
        if proper > best:
            best = proper
            if best == g.m:
                break
    return best


def filter_by_chromatic(gset: GraphSet, chi: int, cache_dir=None) -> GraphSet:
    cached = _load_cache(gset.n, chi, cache_dir)
    if cached is not None:
        return cached
    out = GraphSet(
        [g for g in gset.members if chromatic_number(g) == chi],
        gset.n,
        f"chromatic={chi}",
    )
    _store_cache(out, gset.n, chi, cache_dir)
    return out


# ---------------------------------------------------------------------------
# Disk cache

def _cache_path(n, chi, cache_dir):
    base = cache_dir or os.environ.get(CACHE_ENV)
    if base is None:
        return None
    name = f"connected_n{n}.g6" if chi is None else f"chromatic_n{n}_chi{chi}.g6"
    return Path(base) / name


def _load_cache(n, chi, cache_dir):
    path = _cache_path(n, chi, cache_dir)
    if path is None or not path.exists():
        return None
    constraint = "connected" if chi is None else f"chromatic={chi}"
    return GraphSet(read_graph6_file(path), n, constraint)


def _store_cache(gset, n, chi, cache_dir):
    path = _cache_path(n, chi, cache_dir)
    if path is not None:
        write_graph6_file(gset.members, path)


# ---------------------------------------------------------------------------
# Named built-in graphs

def _prism() -> Graph:
    # K3 x K2: two triangles joined by a perfect matching
    return Graph.from_edges(
        6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)]
    )


def _envelope() -> Graph:
    # Octahedron K_{2,2,2} (parts {0,1},{2,3},{4,5}) minus the edge (0,2):
    # 6 vertices, 11 edges, chromatic number 3.
    parts = [(0, 1), (2, 3), (4, 5)]
    edges = []
    for a in range(3):
        for b in range(a + 1, 3):
            for u in parts[a]:
                for v in parts[b]:
                    edges.append((u, v))
    edges.remove((0, 2))
    return Graph.from_edges(6, edges)


def named_graph(name: str) -> Graph:
    name = name.strip().lower()
    if name == "triangle":
        return named_graph("c3")
    if name == "prism":
        return _prism()
    if name == "envelope":
        return _envelope()
    if name.startswith("k") and name[1:].isdigit():
        n = int(name[1:])
        return Graph.from_edges(n, itertools.combinations(range(n), 2))
    if name.startswith("c") and name[1:].isdigit():
        n = int(name[1:])
        if n < 3:
            raise ValueError(f"cycle needs >= 3 vertices, got {n}")
        return Graph.from_edges(n, [(v, (v + 1) % n) for v in range(n)])
    raise KeyError(f"unknown graph name: {name!r}")
