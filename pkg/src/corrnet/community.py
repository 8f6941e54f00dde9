"""Two-level map equation and a multi-restart Infomap-style optimizer.

Flow is the stationary distribution of a random walk on the undirected
graph (no teleportation): node visit rate k_i / 2m and per-direction edge
flow w_ij / 2W.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .pmfg import Pmfg

TOLERANCE = 1e-12
MAX_SWEEPS = 100
MAX_OUTER = 50


@dataclass(frozen=True)
class Partition:
    assignment: tuple[int, ...]
    n_communities: int
    codelength: float

    def members(self) -> list[list[int]]:
        groups: list[list[int]] = [[] for _ in range(self.n_communities)]
        for node, c in enumerate(self.assignment):
            groups[c].append(node)
        return groups

    def sizes(self) -> list[int]:
        return [len(g) for g in self.members()]


def _plogp(x: float) -> float:
    return x * math.log2(x) if x > 0.0 else 0.0


def _edge_weights(graph: Pmfg, weighted: bool) -> list[tuple[int, int, float]]:
    edges = []
    for i, j, w in graph.edges:
        if weighted:
            if not w > 0:
                raise ValueError(f"weighted walk needs positive weights, edge ({i}, {j}) has {w}")
            edges.append((i, j, float(w)))
        else:
            edges.append((i, j, 1.0))
    return edges


def stationary_distribution(graph: Pmfg, weighted: bool = False) -> np.ndarray:
    """Visit rates of the undirected random walk: strength / (2 * total weight)."""
    if graph.n_edges == 0 or not graph.is_connected():
        raise ValueError("stationary distribution needs a connected graph with edges")
    strength = np.zeros(graph.n_nodes)
    total = 0.0
    for i, j, w in _edge_weights(graph, weighted):
        strength[i] += w
        strength[j] += w
        total += w
    return strength / (2.0 * total)


def _check_assignment(graph: Pmfg, assignment: Sequence[int]) -> np.ndarray:
    a = np.asarray(assignment)
    if a.shape != (graph.n_nodes,):
        raise ValueError(f"assignment has {a.size} entries for {graph.n_nodes} nodes")
    if a.size == 0:
        raise ValueError("empty assignment")
    return a


def map_equation(graph: Pmfg, assignment: Sequence[int], weighted: bool = False) -> float:
    """Codelength in bits: q H(Q) + sum_m p_m H(P^m)."""
    a = _check_assignment(graph, assignment)
    p = stationary_distribution(graph, weighted)
    total = sum(w for _, _, w in _edge_weights(graph, weighted))
    modules = sorted(set(a.tolist()))
    exit_flow = {m: 0.0 for m in modules}
    for i, j, w in _edge_weights(graph, weighted):
        if a[i] != a[j]:
            f = w / (2.0 * total)
            exit_flow[a[i]] += f
            exit_flow[a[j]] += f
    q = sum(exit_flow.values())

    index_term = 0.0
    if q > 0.0:
        index_term = -q * sum(
            (qm / q) * math.log2(qm / q) for qm in exit_flow.values() if qm > 0.0
        )

    module_term = 0.0
    for m in modules:
        inside = p[a == m]
        usage = exit_flow[m] + inside.sum()
        probs = [exit_flow[m] / usage] + [x / usage for x in inside]
        module_term -= usage * sum(x * math.log2(x) for x in probs if x > 0.0)
    return float(index_term + module_term)


class _Level:
    """Flow graph over current vertices (original nodes or merged modules)."""

    def __init__(self, flow: list[float], nbrs: list[dict[int, float]]):
        self.flow = flow
        self.nbrs = nbrs
        self.exit = [sum(d.values()) for d in nbrs]

    def __len__(self) -> int:
        return len(self.flow)

    def aggregate(self, module_of: list[int]) -> "_Level":
        k = max(module_of) + 1
        flow = [0.0] * k
        nbrs: list[dict[int, float]] = [dict() for _ in range(k)]
        for v, m in enumerate(module_of):
            flow[m] += self.flow[v]
            for u, f in self.nbrs[v].items():
                mu = module_of[u]
                if mu != m:
                    nbrs[m][mu] = nbrs[m].get(mu, 0.0) + f
        return _Level(flow, nbrs)


def _module_stats(level: _Level, module_of: list[int], k: int):
    flow = [0.0] * k
    exit_ = [0.0] * k
    for v, m in enumerate(module_of):
        flow[m] += level.flow[v]
        for u, f in level.nbrs[v].items():
            if module_of[u] != m:
                exit_[m] += f
    return flow, exit_


def _compact(labels: list[int]) -> list[int]:
    remap: dict[int, int] = {}
    return [remap.setdefault(x, len(remap)) for x in labels]


def _local_moves(level: _Level, module_of: list[int], rng: np.random.Generator) -> bool:
    """Greedy single-vertex moves until a sweep brings no gain; returns True if anything moved."""
    n = len(level)
    k = n  # module ids live in 0..n-1 so every vertex can open its own module
    flow_m, exit_m = _module_stats(level, module_of, k)
    members = [0] * k
    for m in module_of:
        members[m] += 1
    total_exit = sum(exit_m)
    moved_any = False

    for _ in range(MAX_SWEEPS):
        moved = False
        for v in rng.permutation(n):
            v = int(v)
            old = module_of[v]
            pv, ev = level.flow[v], level.exit[v]
            to_module: dict[int, float] = {}
            for u, f in level.nbrs[v].items():
                mu = module_of[u]
                to_module[mu] = to_module.get(mu, 0.0) + f
            f_old = to_module.get(old, 0.0)

            q_old_new = exit_m[old] - ev + 2.0 * f_old
            p_old_new = flow_m[old] - pv
            base = (
                -2.0 * _plogp(exit_m[old]) + _plogp(exit_m[old] + flow_m[old])
                + 2.0 * _plogp(q_old_new) - _plogp(q_old_new + p_old_new)
            )

            candidates = [m for m in to_module if m != old]
            if members[old] > 1:
                empty = next((m for m in range(k) if members[m] == 0), None)
                if empty is not None:
                    candidates.append(empty)

            best_delta, best_m = 0.0, old
            for m in sorted(candidates):
                f_new = to_module.get(m, 0.0)
                q_new = exit_m[m] + ev - 2.0 * f_new
                p_new = flow_m[m] + pv
                new_total = total_exit - exit_m[old] - exit_m[m] + q_old_new + q_new
                delta = (
                    _plogp(new_total) - _plogp(total_exit)
                    - base
                    + 2.0 * _plogp(exit_m[m]) - _plogp(exit_m[m] + flow_m[m])
                    - 2.0 * _plogp(q_new) + _plogp(q_new + p_new)
                )
                if delta < best_delta - TOLERANCE:
                    best_delta, best_m = delta, m

            if best_m != old:
                f_new = to_module.get(best_m, 0.0)
                q_new = exit_m[best_m] + ev - 2.0 * f_new
                total_exit += q_old_new + q_new - exit_m[old] - exit_m[best_m]
                exit_m[old], flow_m[old] = q_old_new, p_old_new
                exit_m[best_m], flow_m[best_m] = q_new, flow_m[best_m] + pv
                members[old] -= 1
                members[best_m] += 1
                module_of[v] = best_m
                moved = moved_any = True
        if not moved:
            break
        # refresh sums to keep rounding drift out of later comparisons
        flow_m, exit_m = _module_stats(level, module_of, k)
        total_exit = sum(exit_m)
    return moved_any


def _level_codelength(level: _Level, module_of: list[int], node_entropy: float) -> float:
    k = max(module_of) + 1
    flow_m, exit_m = _module_stats(level, module_of, k)
    return (
        _plogp(sum(exit_m))
        - 2.0 * sum(_plogp(q) for q in exit_m)
        + sum(_plogp(q + p) for q, p in zip(exit_m, flow_m))
        + node_entropy
    )


def _optimize_once(base: _Level, node_entropy: float, rng: np.random.Generator) -> list[int]:
    n = len(base)
    assignment = list(range(n))
    best_len = _level_codelength(base, assignment, node_entropy)
    for _ in range(MAX_OUTER):
        # node-level moves from the current partition
        module_of = _compact(assignment)
        _local_moves(base, module_of, rng)
        assignment = _compact(module_of)
        # merge passes: move whole modules until nothing changes
        while True:
            level = base.aggregate(assignment)
            super_of = list(range(len(level)))
            if not _local_moves(level, super_of, rng):
                break
            super_of = _compact(super_of)
            assignment = [super_of[m] for m in assignment]
        new_len = _level_codelength(base, assignment, node_entropy)
        if new_len > best_len - TOLERANCE:
            break
        best_len = new_len
    return assignment


def canonical_assignment(assignment: Sequence[int], flow: np.ndarray) -> tuple[int, ...]:
    """Relabel modules 0..k-1 by descending flow, ties by smallest member."""
    modules: dict[int, list[int]] = {}
    for node, m in enumerate(assignment):
        modules.setdefault(m, []).append(node)
    order = sorted(modules, key=lambda m: (-float(flow[modules[m]].sum()), modules[m][0]))
    relabel = {m: c for c, m in enumerate(order)}
    return tuple(relabel[m] for m in assignment)


def infomap(
    graph: Pmfg,
    restarts: int = 100,
    seed: int = 0,
    weighted: bool = False,
) -> Partition:
    """Best two-level partition over `restarts` randomized runs (restart r uses seed + r)."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    p = stationary_distribution(graph, weighted)
    total = sum(w for _, _, w in _edge_weights(graph, weighted))
    nbrs: list[dict[int, float]] = [dict() for _ in range(graph.n_nodes)]
    for i, j, w in _edge_weights(graph, weighted):
        f = w / (2.0 * total)
        nbrs[i][j] = nbrs[i].get(j, 0.0) + f
        nbrs[j][i] = nbrs[j].get(i, 0.0) + f
    base = _Level([float(x) for x in p], nbrs)
    node_entropy = -sum(_plogp(float(x)) for x in p)

    best: Optional[tuple[float, tuple[int, ...]]] = None
    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        raw = _optimize_once(base, node_entropy, rng)
        assignment = canonical_assignment(raw, p)
        key = (map_equation(graph, assignment, weighted), assignment)
        if best is None or key < best:
            best = key
    codelength, assignment = best
    return Partition(assignment, max(assignment) + 1, codelength)


def rank_order(partition: Partition, flow: np.ndarray) -> list[int]:
    """Nodes grouped by community id; inside a community by descending flow, ties by index."""
    order = []
    for group in partition.members():
        order.extend(sorted(group, key=lambda v: (-float(flow[v]), v)))
    return order


def rank_within(partition: Partition, flow: np.ndarray) -> list[int]:
    """Position of each node inside its community ordering (0 = highest flow)."""
    ranks = [0] * len(partition.assignment)
    for group in partition.members():
        for r, v in enumerate(sorted(group, key=lambda v: (-float(flow[v]), v))):
            ranks[v] = r
    return ranks
