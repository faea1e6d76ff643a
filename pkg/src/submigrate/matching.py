"""Maximum-cardinality bipartite matching.

`hopcroft_karp` is the reference implementation (O(E sqrt(V)) phase
structure).  `max_matching_masks` is a small augmenting-path routine on
bitmask adjacency used by the exact coordination oracle; the Monte Carlo
simulator has a batched counterpart in `_kernels`.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable, List, Sequence, Tuple

INF = float("inf")


def hopcroft_karp(left_count: int, right_count: int,
                  edges: Iterable[Tuple[int, int]]) -> int:
    """Size of a maximum matching of a bipartite graph given as an edge list."""
    adj: List[List[int]] = [[] for _ in range(left_count)]
    for u, v in edges:
        if not (0 <= u < left_count and 0 <= v < right_count):
            raise IndexError(f"edge ({u}, {v}) endpoint out of range")
        adj[u].append(v)

    match_l = [-1] * left_count
    match_r = [-1] * right_count
    dist = [0.0] * left_count

    def bfs() -> bool:
        queue = deque()
        for u in range(left_count):
            if match_l[u] == -1:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_r[v]
            if w == -1 or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = INF
        return False

    size = 0
    while bfs():
        for u in range(left_count):
            if match_l[u] == -1 and dfs(u):
                size += 1
    return size


def max_matching_masks(masks: Sequence[int], n_right: int) -> int:
    """Maximum matching where row u's neighbors are the set bits of masks[u]."""
    match_r = [-1] * n_right

    def try_augment(u: int, visited: List[bool]) -> bool:
        m = masks[u]
        v = 0
        while m >> v:
            if (m >> v) & 1 and not visited[v]:
                visited[v] = True
                if match_r[v] == -1 or try_augment(match_r[v], visited):
                    match_r[v] = u
                    return True
            v += 1
        return False

    size = 0
    for u in range(len(masks)):
        if try_augment(u, [False] * n_right):
            size += 1
    return size
