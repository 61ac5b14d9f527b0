"""Maximum bipartite matching (Hopcroft-Karp) and minimum vertex cover.

The graph is given as adjacency lists from the left side: adj[u] lists the
right-side vertices joined to left vertex u. All routines are iterative, so
deep alternating paths cannot exhaust the interpreter stack.
"""
from __future__ import annotations

from collections import deque

_FREE = -1


def max_bipartite_matching(adj: list[list[int]], n_right: int):
    """Hopcroft-Karp. Returns (size, match_left, match_right).

    match_left[u] is the right vertex matched to u (or -1); match_right
    mirrors it. Runs in O(E sqrt(V)) phases of BFS layering plus DFS
    augmentation.
    """
    n_left = len(adj)
    match_left = [_FREE] * n_left
    match_right = [_FREE] * n_right
    INF = float("inf")
    dist = [0.0] * n_left

    def bfs() -> bool:
        queue = deque()
        for u in range(n_left):
            if match_left[u] == _FREE:
                dist[u] = 0.0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_right[v]
                if w == _FREE:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(root: int) -> bool:
        # iterative DFS over the layered graph. Each stack frame is
        # [left vertex, resume position in its adjacency list]; chosen[u]
        # remembers the right vertex u is currently trying, so that on
        # success the whole stack can be flipped into the matching.
        stack = [[root, 0]]
        chosen: dict[int, int] = {}
        while stack:
            frame = stack[-1]
            u, i = frame
            descended = False
            while i < len(adj[u]):
                v = adj[u][i]
                i += 1
                w = match_right[v]
                if w == _FREE:
                    chosen[u] = v
                    for fu, _ in stack:
                        cv = chosen[fu]
                        match_left[fu] = cv
                        match_right[cv] = fu
                    return True
                if dist[w] == dist[u] + 1:
                    frame[1] = i
                    chosen[u] = v
                    stack.append([w, 0])
                    descended = True
                    break
            if not descended:
                dist[u] = INF  # dead end for this phase
                stack.pop()
        return False

    size = 0
    while bfs():
        for u in range(n_left):
            if match_left[u] == _FREE and dfs(u):
                size += 1
    return size, match_left, match_right


def min_vertex_cover(adj: list[list[int]], n_right: int):
    """Minimum vertex cover of a bipartite graph via Koenig's theorem.

    After a maximum matching, collect Z = vertices reachable from free left
    vertices by alternating paths (unmatched edges left-to-right, matched
    edges right-to-left); the cover is (L minus Z) united with (R intersect
    Z), and its size equals the matching size. Returns
    (left_cover, right_cover) as sorted lists.
    """
    n_left = len(adj)
    size, match_left, match_right = max_bipartite_matching(adj, n_right)

    visited_left = [False] * n_left
    visited_right = [False] * n_right
    queue = deque(u for u in range(n_left) if match_left[u] == _FREE)
    for u in queue:
        visited_left[u] = True
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v == match_left[u] or visited_right[v]:
                continue
            visited_right[v] = True
            w = match_right[v]
            if w != _FREE and not visited_left[w]:
                visited_left[w] = True
                queue.append(w)

    left_cover = sorted(u for u in range(n_left) if not visited_left[u])
    right_cover = sorted(v for v in range(n_right) if visited_right[v])
    assert len(left_cover) + len(right_cover) == size
    return left_cover, right_cover
