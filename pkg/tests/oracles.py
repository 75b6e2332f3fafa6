"""Independent reference implementations used only to check production code.

Everything here is written straight from first principles (full-matrix DP,
union-find, exhaustive recursion) and must stay independent of the code
paths it validates.
"""

from __future__ import annotations

import statistics
from functools import lru_cache


def dp_levenshtein(a, b) -> int:
    """Full-matrix quadratic edit distance over any two sequences."""
    n, m = len(a), len(b)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dist[i][0] = i
    for j in range(m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            dist[i][j] = min(dist[i - 1][j] + 1,
                             dist[i][j - 1] + 1,
                             dist[i - 1][j - 1] + cost)
    return dist[n][m]


class UnionFind:
    def __init__(self, items):
        self.parent = {item: item for item in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def brute_force_paragraph_partition(page, overlap_threshold=0.30, spacing_multiplier=1.0):
    """Partition line ids by union-find over the edge predicate, computed
    directly from the definition: baselines sorted, median positive gap
    (fallback median height), pairwise O(n^2) scan."""
    lines = list(page.lines)
    baselines = sorted(ln.bbox.y + ln.bbox.height for ln in lines)
    gaps = [b - a for a, b in zip(baselines, baselines[1:]) if b - a > 0]
    if gaps:
        median_spacing = statistics.median(gaps)
    else:
        median_spacing = statistics.median(ln.bbox.height for ln in lines)
    max_gap = spacing_multiplier * median_spacing

    uf = UnionFind([ln.line_id for ln in lines])
    for i in range(len(lines)):
        for j in range(len(lines)):
            if i == j:
                continue
            a, b = lines[i], lines[j]
            base_a = a.bbox.y + a.bbox.height
            base_b = b.bbox.y + b.bbox.height
            if base_a >= base_b:
                continue  # a must be the geometric upper line
            gap = base_b - base_a
            if gap > max_gap:
                continue
            left = max(a.bbox.x, b.bbox.x)
            right = min(a.bbox.x + a.bbox.width, b.bbox.x + b.bbox.width)
            overlap = max(0.0, right - left) / a.bbox.width
            if overlap >= overlap_threshold:
                uf.union(a.line_id, b.line_id)

    groups = {}
    for ln in lines:
        groups.setdefault(uf.find(ln.line_id), set()).add(ln.line_id)
    return {frozenset(g) for g in groups.values()}


def exhaustive_tree_edit_distance(t1, t2, rename_cost) -> float:
    """Exhaustive edit-script search over ordered forests (memoized).

    Trees are TableTree-like: .children, plus whatever rename_cost reads.
    Costs: delete 1, insert 1, rename per callback.
    """

    def freeze(tree):
        return (id(tree), tree)

    @lru_cache(maxsize=None)
    def forest_dist(f1, f2):
        if not f1 and not f2:
            return 0.0
        if not f1:
            _, w = f2[-1]
            return forest_dist(f1, f2[:-1] + tuple(freeze(c) for c in w.children)) + 1.0
        if not f2:
            _, v = f1[-1]
            return forest_dist(f1[:-1] + tuple(freeze(c) for c in v.children), f2) + 1.0
        _, v = f1[-1]
        _, w = f2[-1]
        delete = forest_dist(f1[:-1] + tuple(freeze(c) for c in v.children), f2) + 1.0
        insert = forest_dist(f1, f2[:-1] + tuple(freeze(c) for c in w.children)) + 1.0
        match = (forest_dist(tuple(freeze(c) for c in v.children),
                             tuple(freeze(c) for c in w.children))
                 + forest_dist(f1[:-1], f2[:-1])
                 + rename_cost(v, w))
        return min(delete, insert, match)

    result = forest_dist((freeze(t1),), (freeze(t2),))
    forest_dist.cache_clear()
    return result


def linear_scan_fit(segment, box, font, measurer, min_size, max_size, step=0.25, padding=0.02):
    """Largest grid size that fits, found by scanning every candidate."""
    limit_w = box.width * (1.0 - padding)
    limit_h = box.height * (1.0 - padding)
    best = None
    steps = int(round((max_size - min_size) / step))
    for k in range(steps + 1):
        size = min_size + k * step
        w, h = measurer.measure(segment, font, size)
        if w <= limit_w and h <= limit_h:
            best = size
    return best
