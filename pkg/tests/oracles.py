"""Slow reference implementations used to validate the fast kernels."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from mdeval.metrics import eds
from mdeval.structures import Node


def dp_edit_distance(a: str, b: str) -> int:
    """Classic O(n*m) Levenshtein DP."""
    n = len(b)
    prev = list(range(n + 1))
    for i, ca in enumerate(a, 1):
        cur = [i] + [0] * n
        for j, cb in enumerate(b, 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb))
        prev = cur
    return prev[n]


def node_to_tuple(node: Node):
    return (node.label, tuple(node_to_tuple(c) for c in node.children))


def _tuple_size(t) -> int:
    return 1 + sum(_tuple_size(c) for c in t[1])


def brute_tree_distance(t1: Node, t2: Node, relabel: str = "graded") -> float:
    """Memoized forest recurrence over nested tuples (exponential, tiny trees only)."""
    if relabel == "graded":
        gamma = lambda u, v: 0.0 if u == v else 1.0 - eds(u, v)
    else:
        gamma = lambda u, v: 0.0 if u == v else 1.0

    @lru_cache(maxsize=None)
    def forest(f1, f2) -> float:
        if not f1 and not f2:
            return 0.0
        if not f1:
            return float(sum(_tuple_size(t) for t in f2))
        if not f2:
            return float(sum(_tuple_size(t) for t in f1))
        rest1, last1 = f1[:-1], f1[-1]
        rest2, last2 = f2[:-1], f2[-1]
        return min(
            forest(rest1 + last1[1], f2) + 1.0,
            forest(f1, rest2 + last2[1]) + 1.0,
            forest(rest1, rest2) + forest(last1[1], last2[1]) + gamma(last1[0], last2[0]),
        )

    return forest((node_to_tuple(t1),), (node_to_tuple(t2),))


def brute_discordant(pred_positions) -> int:
    seq = list(pred_positions)
    return sum(
        1
        for i in range(len(seq))
        for j in range(i + 1, len(seq))
        if seq[i] > seq[j]
    )


def brute_assignment_total(weights) -> float:
    """Max assignment total by enumerating permutations of a zero-padded square."""
    rows = len(weights)
    cols = len(weights[0]) if rows else 0
    n = max(rows, cols)
    if n == 0:
        return 0.0
    sq = [
        [float(weights[r][c]) if r < rows and c < cols else 0.0 for c in range(n)]
        for r in range(n)
    ]
    return max(
        sum(sq[r][perm[r]] for r in range(n))
        for perm in itertools.permutations(range(n))
    )


def random_tree(rng: random.Random, max_nodes: int, labels=("a", "b", "c", "ab", "xy")) -> Node:
    """Random ordered tree with 1..max_nodes nodes and random parent attachment."""
    nodes = [Node(rng.choice(labels))]
    for _ in range(rng.randint(1, max_nodes) - 1):
        child = Node(rng.choice(labels))
        parent = rng.choice(nodes)
        parent.children.insert(rng.randint(0, len(parent.children)), child)
        nodes.append(child)
    return nodes[0]
