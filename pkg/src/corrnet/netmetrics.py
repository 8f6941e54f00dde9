"""Vertex degree, vertex betweenness and link mutual information of PMFGs."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .corrmatrix import MonthMatrix, _symmetric_from_upper
from .pmfg import Pmfg


@dataclass(frozen=True, eq=False)
class MonthlyNodeSeries:
    metric: str  # 'degree' | 'betweenness'
    labels: tuple[str, ...]
    nodes: tuple[str, ...]
    values: np.ndarray  # months x nodes


def degrees(graph: Pmfg) -> np.ndarray:
    deg = np.zeros(graph.n_nodes, dtype=np.int64)
    for i, j, _ in graph.edges:
        deg[i] += 1
        deg[j] += 1
    return deg


def betweenness(graph: Pmfg) -> np.ndarray:
    """Non-normalized vertex betweenness on unweighted shortest paths.

    Brandes accumulation; each unordered source-target pair is counted once.
    """
    n = graph.n_nodes
    adj = graph.neighbors()
    cb = np.zeros(n)
    for s in range(n):
        stack = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[s] = 1
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                cb[w] += delta[w]
    return cb / 2.0


def _edge_codes(graph: Pmfg) -> np.ndarray:
    n = graph.n_nodes
    return np.unique(np.array([i * n + j for i, j, _ in graph.edges], dtype=np.int64))


def mi_from_counts(n11: int, n10: int, n01: int, n00: int, base: float = math.e) -> float:
    """Mutual information of two binary indicators from their 2x2 count table (0 log 0 = 0)."""
    total = n11 + n10 + n01 + n00
    if total <= 0:
        raise ValueError("empty contingency table")
    px = ((n10 + n11) / total, (n00 + n01) / total)  # X = 1, X = 0
    py = ((n01 + n11) / total, (n00 + n10) / total)
    mi = 0.0
    for count, x, y in ((n11, 0, 0), (n10, 0, 1), (n01, 1, 0), (n00, 1, 1)):
        if count:
            pxy = count / total
            mi += pxy * math.log(pxy / (px[x] * py[y]))
    return max(mi, 0.0) / math.log(base)


def mi_from_overlap(n_pairs: int, m1: int, m2: int, overlap: int, base: float = math.e) -> float:
    return mi_from_counts(overlap, m1 - overlap, m2 - overlap, n_pairs - m1 - m2 + overlap, base)


def link_mutual_information(g1: Pmfg, g2: Pmfg, base: float = math.e) -> float:
    """MI of the edge-presence indicators of two graphs over all node pairs (nats by default)."""
    if g1.nodes != g2.nodes:
        raise ValueError("graphs have different node sets")
    n = g1.n_nodes
    e1, e2 = _edge_codes(g1), _edge_codes(g2)
    overlap = len(np.intersect1d(e1, e2, assume_unique=True))
    return mi_from_overlap(n * (n - 1) // 2, len(e1), len(e2), overlap, base)


def edge_indicators(graphs: Sequence[Pmfg]) -> np.ndarray:
    """graphs x pairs 0/1 matrix over upper-triangle pairs in row-major order."""
    n = graphs[0].n_nodes
    iu = np.triu_indices(n, 1)
    pair_index = np.full((n, n), -1, dtype=np.int64)
    pair_index[iu] = np.arange(len(iu[0]))
    out = np.zeros((len(graphs), len(iu[0])), dtype=np.int64)
    for g, graph in enumerate(graphs):
        for i, j, _ in graph.edges:
            out[g, pair_index[i, j]] = 1
    return out


def mi_month_matrix(graphs: Sequence[Pmfg], base: float = math.e) -> MonthMatrix:
    """Link MI for every pair of graphs; overlaps come from one indicator product."""
    if not graphs:
        raise ValueError("no graphs")
    nodes = graphs[0].nodes
    for g in graphs:
        if g.nodes != nodes:
            raise ValueError(f"{g.label}: node set differs from {graphs[0].label}")
    ind = edge_indicators(graphs)
    n_pairs = ind.shape[1]
    overlap = ind @ ind.T
    m = ind.sum(axis=1)
    k = len(graphs)
    values = np.zeros((k, k))
    for a in range(k):
        for b in range(a, k):
            values[a, b] = mi_from_overlap(n_pairs, int(m[a]), int(m[b]), int(overlap[a, b]), base)
    diag = values.diagonal().copy()
    values = _symmetric_from_upper(values, 0.0)
    values[np.diag_indices(k)] = diag
    values.flags.writeable = False
    return MonthMatrix(tuple(g.label for g in graphs), values, "link_mi")


def node_series(graphs: Sequence[Pmfg], metric: str) -> MonthlyNodeSeries:
    fn = {"degree": degrees, "betweenness": betweenness}[metric]
    values = np.array([fn(g) for g in graphs], dtype=np.float64)
    return MonthlyNodeSeries(metric, tuple(g.label for g in graphs), graphs[0].nodes, values)
