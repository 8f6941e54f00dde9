"""Brute-force reference computations used by the tests.

Each routine is deliberately naive and shares no code with the package.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from functools import lru_cache

import numpy as np


# --- planarity: K5 / K3,3 minor search ------------------------------------

def _adjacency_masks(n, edges):
    adj = [0] * n
    for i, j in edges:
        adj[i] |= 1 << j
        adj[j] |= 1 << i
    return tuple(adj)


def _has_k5_or_k33_subgraph(adj) -> bool:
    n = len(adj)
    deg = [bin(a).count("1") for a in adj]
    cand5 = [v for v in range(n) if deg[v] >= 4]
    for sub in itertools.combinations(cand5, 5):
        if all(adj[a] >> b & 1 for a, b in itertools.combinations(sub, 2)):
            return True
    cand3 = [v for v in range(n) if deg[v] >= 3]
    for sub in itertools.combinations(cand3, 6):
        first = sub[0]
        for rest in itertools.combinations(sub[1:], 2):
            side_a = (first,) + rest
            side_b = tuple(v for v in sub if v not in side_a)
            if all(adj[a] >> b & 1 for a in side_a for b in side_b):
                return True
    return False


def _contract(adj, u, v):
    """Merge v into u, drop v, relabel vertices above v down by one."""
    n = len(adj)
    merged = (adj[u] | adj[v]) & ~(1 << u) & ~(1 << v)
    new = []
    for w in range(n):
        if w == v:
            continue
        if w == u:
            a = merged
        elif adj[w] >> v & 1:
            a = (adj[w] & ~(1 << v)) | (1 << u)
        else:
            a = adj[w]
        # squeeze out bit v
        low = a & ((1 << v) - 1)
        high = a >> (v + 1)
        new.append(low | (high << v))
    return tuple(new)


@lru_cache(maxsize=None)
def _nonplanar(adj) -> bool:
    n = len(adj)
    m = sum(bin(a).count("1") for a in adj) // 2
    if n < 5 or m < 9:
        return False
    if _has_k5_or_k33_subgraph(adj):
        return True
    for u in range(n):
        for v in range(u + 1, n):
            if adj[u] >> v & 1 and _nonplanar(_contract(adj, u, v)):
                return True
    return False


def brute_force_planar(n, edges) -> bool:
    """Wagner: planar iff no K5 or K3,3 minor (subgraph of some contraction)."""
    return not _nonplanar(_adjacency_masks(n, edges))


# --- spanning trees ---------------------------------------------------------

def _is_spanning_tree(n, edges):
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def brute_max_spanning_tree(C):
    n = C.shape[0]
    pairs = list(itertools.combinations(range(n), 2))
    best, best_w = None, -math.inf
    for subset in itertools.combinations(pairs, n - 1):
        if _is_spanning_tree(n, subset):
            w = sum(C[i, j] for i, j in subset)
            if w > best_w:
                best, best_w = set(subset), w
    return best, best_w


# --- betweenness ------------------------------------------------------------

def all_shortest_paths(adj, s, t):
    dist = {s: 0}
    q = deque([s])
    while q:
        v = q.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    if t not in dist:
        return []
    paths = []

    def extend(path):
        v = path[-1]
        if v == t:
            paths.append(list(path))
            return
        for w in adj[v]:
            if dist.get(w) == dist[v] + 1 and len(path) <= dist[t]:
                extend(path + [w])

    extend([s])
    return [p for p in paths if len(p) - 1 == dist[t]]


def brute_betweenness(n, edges):
    adj = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    out = np.zeros(n)
    for s, t in itertools.combinations(range(n), 2):
        paths = all_shortest_paths(adj, s, t)
        for p in paths:
            for v in p[1:-1]:
                out[v] += 1.0 / len(paths)
    return out


# --- ranks / correlation ----------------------------------------------------

def brute_average_ranks(x):
    x = list(x)
    ranks = []
    for v in x:
        less = sum(1 for u in x if u < v)
        equal = sum(1 for u in x if u == v)
        ranks.append(less + (equal + 1) / 2.0)
    return ranks


def direct_pearson(x, y):
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


# --- map equation -----------------------------------------------------------

def literal_map_equation(n, edges, assignment):
    """Independent two-level codelength: index codebook + module codebooks, entropies in bits."""
    deg = [0] * n
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    m = len(edges)
    p = [d / (2 * m) for d in deg]
    modules = sorted(set(assignment))
    q = {a: 0.0 for a in modules}
    for i, j in edges:
        if assignment[i] != assignment[j]:
            q[assignment[i]] += 1 / (2 * m)
            q[assignment[j]] += 1 / (2 * m)

    def H(ps):
        s = sum(ps)
        return -sum(x / s * math.log2(x / s) for x in ps if x > 0)

    qsum = sum(q.values())
    L = qsum * H(list(q.values())) if qsum > 0 else 0.0
    for a in modules:
        inner = [p[v] for v in range(n) if assignment[v] == a]
        L += (q[a] + sum(inner)) * H([q[a]] + inner)
    return L


def set_partitions(items):
    """All set partitions as assignment tuples (restricted growth strings)."""
    n = len(items)

    def rec(k, current, maxlabel):
        if k == n:
            yield tuple(current)
            return
        for lab in range(maxlabel + 2):
            current.append(lab)
            yield from rec(k + 1, current, max(maxlabel, lab))
            current.pop()

    yield from rec(0, [], -1)


# --- eigen ------------------------------------------------------------------

def jacobi_eigenvalues(a, tol=1e-13, max_sweeps=100):
    """Cyclic Jacobi rotations; returns eigenvalues sorted descending."""
    a = np.array(a, dtype=np.float64)
    n = a.shape[0]
    for _ in range(max_sweeps):
        off = math.sqrt(sum(a[i, j] ** 2 for i in range(n) for j in range(n) if i != j))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2 * a[p, q])
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    return np.sort(np.diag(a))[::-1]
