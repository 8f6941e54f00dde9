"""Planar maximally filtered graph (PMFG) and maximum spanning tree."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import networkx as nx
import numpy as np

from .corrmatrix import CorrelationMatrix


@dataclass(frozen=True, eq=False)
class Pmfg:
    """Undirected simple graph on named nodes; edges are (i, j, weight) with i < j."""

    label: str
    nodes: tuple[str, ...]
    edges: tuple[tuple[int, int, float], ...]

    @classmethod
    def from_edges(cls, n_or_nodes, edges: Iterable, label: str = "") -> "Pmfg":
        if isinstance(n_or_nodes, int):
            nodes = tuple(str(k) for k in range(n_or_nodes))
        else:
            nodes = tuple(n_or_nodes)
        norm = []
        for e in edges:
            i, j = int(e[0]), int(e[1])
            w = float(e[2]) if len(e) > 2 else 1.0
            norm.append((min(i, j), max(i, j), w))
        return cls(label, nodes, tuple(norm))

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j, _ in self.edges]

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.nodes]
        for i, j, _ in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def adjacency(self, weighted: bool = False) -> np.ndarray:
        a = np.zeros((self.n_nodes, self.n_nodes))
        for i, j, w in self.edges:
            a[i, j] = a[j, i] = w if weighted else 1.0
        return a

    def is_connected(self) -> bool:
        if self.n_nodes == 0:
            return True
        adj = self.neighbors()
        seen = {0}
        stack = [0]
        while stack:
            for v in adj[stack.pop()]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.n_nodes


def _check_simple(n: int, edges: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    seen = set()
    out = []
    for e in edges:
        i, j = int(e[0]), int(e[1])
        if i == j:
            raise ValueError(f"self-loop at node {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"edge ({i}, {j}) outside node range 0..{n - 1}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ValueError(f"duplicate edge {key}")
        seen.add(key)
        out.append(key)
    return out


def is_planar(n: int, edges: Sequence[tuple[int, int]]) -> bool:
    """Planarity of a simple undirected graph on nodes 0..n-1 (left-right algorithm)."""
    pairs = _check_simple(n, edges)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(pairs)
    planar, _ = nx.check_planarity(g)
    return planar


def edge_order(values: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Upper-triangle pairs sorted by descending weight, ties by (i, j) ascending."""
    n = values.shape[0]
    iu, ju = np.triu_indices(n, 1)
    w = values[iu, ju]
    if not np.all(np.isfinite(w)):
        raise ValueError("correlation matrix has non-finite off-diagonal entries")
    order = np.lexsort((ju, iu, -w))
    return iu[order], ju[order], w[order]


def _values(C) -> tuple[np.ndarray, tuple[str, ...], str]:
    if isinstance(C, CorrelationMatrix):
        return C.values, C.assets, C.label
    values = np.asarray(C, dtype=np.float64)
    return values, tuple(str(k) for k in range(values.shape[0])), ""


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def build_pmfg(C, label: Optional[str] = None) -> Pmfg:
    """Greedy PMFG: insert pairs by descending correlation, keep those that leave the graph planar.

    An edge joining two components can never break planarity, so those
    skip the planarity test.
    """
    values, nodes, default_label = _values(C)
    n = values.shape[0]
    if n < 3:
        raise ValueError(f"PMFG needs at least 3 nodes, got {n}")
    target = 3 * (n - 2)
    g = nx.Graph()
    g.add_nodes_from(range(n))
    components = _UnionFind(n)
    kept: list[tuple[int, int, float]] = []
    for i, j, w in zip(*edge_order(values)):
        i, j = int(i), int(j)
        if components.union(i, j):
            g.add_edge(i, j)
        else:
            g.add_edge(i, j)
            if not nx.check_planarity(g)[0]:
                g.remove_edge(i, j)
                continue
        kept.append((i, j, float(w)))
        if len(kept) == target:
            break
    return Pmfg(default_label if label is None else label, nodes, tuple(kept))


def max_spanning_tree(C) -> list[tuple[int, int, float]]:
    """Kruskal on descending weights with the PMFG tie-break."""
    values, _, _ = _values(C)
    n = values.shape[0]
    if n < 2:
        raise ValueError("spanning tree needs at least 2 nodes")
    uf = _UnionFind(n)
    tree = []
    for i, j, w in zip(*edge_order(values)):
        if uf.union(int(i), int(j)):
            tree.append((int(i), int(j), float(w)))
            if len(tree) == n - 1:
                break
    return tree
