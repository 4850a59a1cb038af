"""Maximum-weight spanning trees and arborescences, plus brute-force enumerators.

Weights may be passed either as a plain square array or as an
:class:`~causaltree.info.WeightMatrix`; in the latter case its ``kind`` is
checked against the optimizer.
"""

import itertools
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import KindMismatch, TooLarge, ValidationError

NEGATIVE_TOL = 1e-9
MAX_ENUMERATION_NODES = 7
SYMMETRIC_KINDS = ("MI", "MIvar")


@dataclass(frozen=True)
class ProcessTree:
    """A spanning tree over ``node_count`` nodes.

    For directed trees ``edges`` holds ``(parent, child)`` pairs and ``root``
    is the unique node without a parent. Undirected trees store each edge as
    ``(min, max)`` and have ``root=None``. Edges are kept sorted.
    """

    node_count: int
    edges: tuple
    directed: bool
    root: int | None = None
    score: float = 0.0

    def __post_init__(self):
        n = int(self.node_count)
        if n < 1:
            raise ValidationError("a tree needs at least one node")
        edges = [tuple(int(x) for x in e) for e in self.edges]
        if not self.directed:
            edges = [(min(a, b), max(a, b)) for a, b in edges]
        edges = tuple(sorted(edges))
        object.__setattr__(self, "edges", edges)
        if len(edges) != n - 1:
            raise ValidationError(f"{n}-node tree needs {n - 1} edges, got {len(edges)}")
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n) or a == b:
                raise ValidationError(f"bad edge {(a, b)} for {n} nodes")
        if self.directed:
            if self.root is None or not 0 <= self.root < n:
                raise ValidationError(f"directed tree needs a root in [0, {n})")
            indeg = np.bincount([b for _, b in edges], minlength=n)
            if indeg[self.root] != 0 or np.any(np.delete(indeg, self.root) != 1):
                raise ValidationError("every non-root node needs exactly one parent")
        elif self.root is not None:
            raise ValidationError("undirected trees carry no root")
        seen = _reachable(n, edges, 0 if self.root is None else self.root, self.directed)
        if len(seen) != n:
            raise ValidationError("edges do not connect every node")

    def adjacency(self):
        adj = [[] for _ in range(self.node_count)]
        for a, b in self.edges:
            adj[a].append(b)
            if not self.directed:
                adj[b].append(a)
        return adj

    def parents(self, root=None):
        """Parent of every node (``-1`` for the root), orienting undirected trees away from ``root``."""
        root = self._pick_root(root)
        parent = np.full(self.node_count, -1, dtype=int)
        for u, v in self._bfs_edges(root):
            parent[v] = u
        return parent

    def topological_order(self, root=None):
        """Breadth-first node order from the root, children visited in index order."""
        root = self._pick_root(root)
        return [root] + [v for _, v in self._bfs_edges(root)]

    def skeleton(self):
        return frozenset((min(a, b), max(a, b)) for a, b in self.edges)

    def _pick_root(self, root):
        if self.directed:
            if root is not None and root != self.root:
                raise ValidationError(f"directed tree is rooted at {self.root}, not {root}")
            return self.root
        return 0 if root is None else int(root)

    def _bfs_edges(self, root):
        adj = self.adjacency()
        seen = {root}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in sorted(adj[u]):
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
                    yield u, v


def _reachable(n, edges, start, directed):
    adj = [[] for _ in range(n)]
    for a, b in edges:
        adj[a].append(b)
        if not directed:
            adj[b].append(a)
    seen = {start}
    stack = [start]
    while stack:
        for v in adj[stack.pop()]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def _weights(W, allowed_kinds=None, symmetric=False):
    kind = getattr(W, "kind", None)
    if allowed_kinds is not None and kind is not None and kind not in allowed_kinds:
        raise KindMismatch(f"weight kind {kind!r} not usable here (need one of {allowed_kinds})")
    w = np.array(getattr(W, "weights", W), dtype=float)
    if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
        raise ValidationError(f"weights must be a non-empty square matrix, got {w.shape}")
    off = w[~np.eye(w.shape[0], dtype=bool)]
    if not np.all(np.isfinite(off)):
        raise ValidationError("weights must be finite")
    if off.size and off.min() < -NEGATIVE_TOL:
        raise ValidationError(f"negative weight {off.min():g}")
    if symmetric and not np.allclose(w, w.T, rtol=0, atol=1e-9):
        raise KindMismatch("undirected tree needs a symmetric weight matrix")
    np.fill_diagonal(w, 0.0)
    return w


class UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, k):
        root = k
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[k] != root:
            self.parent[k], k = root, self.parent[k]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def kruskal_max_tree(W):
    """Maximum-weight undirected spanning tree.

    Edges are scanned by decreasing weight, equal weights in lexicographic
    ``(min, max)`` order, so the result is fully deterministic.
    """
    w = _weights(W, SYMMETRIC_KINDS, symmetric=True)
    n = w.shape[0]
    a, b = np.triu_indices(n, k=1)
    order = np.lexsort((b, a, -w[a, b]))
    uf = UnionFind(n)
    chosen = []
    for k in order:
        if uf.union(a[k], b[k]):
            chosen.append((int(a[k]), int(b[k])))
            if len(chosen) == n - 1:
                break
    score = math.fsum(w[e] for e in sorted(chosen))
    return ProcessTree(n, tuple(chosen), directed=False, score=score)


def _find_cycle(parent, root):
    """Nodes of one cycle in the functional graph ``v -> parent[v]``, or None."""
    n = len(parent)
    state = np.zeros(n, dtype=np.int8)  # 0 new, 1 on current path, 2 done
    state[root] = 2
    for start in range(n):
        path = []
        v = start
        while state[v] == 0:
            state[v] = 1
            path.append(v)
            v = parent[v]
        if state[v] == 1:
            return sorted(path[path.index(v):])
        for u in path:
            state[u] = 2
    return None


def _arborescence(S, root):
    """Chu-Liu/Edmonds on score matrix ``S`` (``-inf`` marks missing edges)."""
    n = S.shape[0]
    S = S.copy()
    np.fill_diagonal(S, -np.inf)
    S[:, root] = -np.inf
    # first maximum -> smallest source index
    parent = np.argmax(S, axis=0)
    parent[root] = -1
    cycle = _find_cycle(parent, root)
    if cycle is None:
        return parent

    cyc = np.array(cycle)
    mask = np.zeros(n, dtype=bool)
    mask[cyc] = True
    others = np.flatnonzero(~mask)
    k = others.size
    c = k
    best_in = S[parent[cyc], cyc]

    R = np.full((k + 1, k + 1), -np.inf)
    R[:k, :k] = S[np.ix_(others, others)]
    enter = S[np.ix_(others, cyc)] - best_in
    enter_at = np.argmax(enter, axis=1)
    R[:k, c] = enter[np.arange(k), enter_at]
    leave = S[np.ix_(cyc, others)]
    leave_from = np.argmax(leave, axis=0)
    R[c, :k] = leave[leave_from, np.arange(k)]

    new_root = int(np.searchsorted(others, root))
    sub = _arborescence(R, new_root)

    result = parent.copy()
    for j, v in enumerate(others):
        p = sub[j]
        if p == -1:
            continue
        result[v] = cyc[leave_from[j]] if p == c else others[p]
    src = sub[c]
    result[cyc[enter_at[src]]] = others[src]
    return result


def edmonds_max_arborescence(W, root):
    """Maximum-weight spanning arborescence rooted at ``root``.

    ``W[u, v]`` is the weight of the edge ``u -> v``. Cycles in the greedy
    best-incoming-edge graph are contracted and expanded in the classic
    Chu-Liu/Edmonds manner.
    """
    w = _weights(W, ("DI", "MI", "MIvar"))
    n = w.shape[0]
    if not 0 <= root < n:
        raise ValidationError(f"root {root} outside [0, {n})")
    parent = _arborescence(w, int(root))
    edges = tuple((int(parent[v]), v) for v in range(n) if v != root)
    return ProcessTree(n, edges, directed=True, root=int(root), score=_score(w, edges))


def _score(w, edges):
    return math.fsum(w[e] for e in sorted(edges))


def best_causal_tree(W, workers=None):
    """Best arborescence over every possible root; ties go to the smallest root.

    ``workers`` > 1 runs the per-root searches in a thread pool; the reduction
    is done afterwards in root order so the answer does not depend on it.
    """
    w = _weights(W, ("DI", "MI", "MIvar"))
    n = w.shape[0]
    if workers and workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(workers) as pool:
            trees = list(pool.map(lambda r: edmonds_max_arborescence(w, r), range(n)))
    else:
        trees = [edmonds_max_arborescence(w, r) for r in range(n)]
    best = trees[0]
    for t in trees[1:]:
        if t.score > best.score:
            best = t
    return best


def _parent_sequences(m, root):
    others = [v for v in range(m) if v != root]
    choices = [[u for u in range(m) if u != v] for v in others]
    for combo in itertools.product(*choices):
        parent = [-1] * m
        for v, p in zip(others, combo):
            parent[v] = p
        if _find_cycle(parent, root) is None:
            yield tuple((parent[v], v) for v in others)


def enumerate_causal_trees(m, weights=None):
    """Yield every rooted directed spanning tree on ``m`` labelled nodes (``m ** (m - 1)`` of them).

    With ``weights`` each tree's ``score`` is filled in.
    """
    if m > MAX_ENUMERATION_NODES:
        raise TooLarge(f"refusing to enumerate {m}^{m - 1} trees (limit m <= {MAX_ENUMERATION_NODES})")
    w = None if weights is None else _weights(weights)
    for root in range(m):
        for edges in _parent_sequences(m, root):
            score = 0.0 if w is None else _score(w, edges)
            yield ProcessTree(m, edges, directed=True, root=root, score=score)


def enumerate_spanning_trees(m, weights=None):
    """Yield every undirected spanning tree on ``m`` labelled nodes (``m ** (m - 2)`` of them)."""
    if m > MAX_ENUMERATION_NODES:
        raise TooLarge(f"refusing to enumerate spanning trees on {m} nodes")
    w = None if weights is None else _weights(weights)
    for edges in _parent_sequences(m, 0):
        score = 0.0 if w is None else _score(w, edges)
        yield ProcessTree(m, edges, directed=False, score=score)


def count_dependencies(m, n, kind):
    """Number of variable-to-variable dependencies kept by each model family.

    ``full``: every pair of the ``m * n`` variables.
    ``chowliu_var``: a spanning tree over variables, ``m * n - 1``.
    ``causal``: a complete graph inside each process plus, for the ``m - 1``
    conditioned processes, ``k`` edges from the variable at time ``k`` to the
    parent's variables at times ``1 .. k``.
    ``causal_strict``: same, but only strictly earlier parent variables.
    """
    if m < 1 or n < 1:
        raise ValidationError("m and n must be positive")
    N = m * n
    if kind == "full":
        return N * (N - 1) // 2
    if kind == "chowliu_var":
        return N - 1
    if kind == "causal":
        return m * n * (n - 1) // 2 + (m - 1) * n * (n + 1) // 2
    if kind == "causal_strict":
        return m * n * (n - 1) // 2 + (m - 1) * n * (n - 1) // 2
    raise ValidationError(f"unknown dependency kind {kind!r}")
