"""Similarity kernels: string, tree, ordering, and vocabulary comparisons.

All four graded scores (eds, teds, ktds, vocab_f1) live in [0, 1] with 1
meaning identical.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .structures import Node


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance via Myers' bit-parallel algorithm.

    Exact for arbitrary lengths; Python integers serve as unbounded bit
    vectors, so one pass over ``b`` costs O(len(a)/64) word ops per char.
    """
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) > len(b):
        a, b = b, a
    m = len(a)
    peq: dict[str, int] = {}
    for i, ch in enumerate(a):
        peq[ch] = peq.get(ch, 0) | (1 << i)
    mask = (1 << m) - 1
    high = 1 << (m - 1)
    pv = mask
    mv = 0
    score = m
    for ch in b:
        eq = peq.get(ch, 0)
        xv = eq | mv
        xh = (((eq & pv) + pv) ^ pv) | eq
        ph = mv | (~(xh | pv) & mask)
        mh = pv & xh
        if ph & high:
            score += 1
        elif mh & high:
            score -= 1
        ph = ((ph << 1) | 1) & mask
        mh = (mh << 1) & mask
        pv = mh | (~(xv | ph) & mask)
        mv = ph & xv
    return score


def eds(a: str, b: str) -> float:
    """Edit-distance similarity: 1 - ED(a, b) / max(|a|, |b|); 1.0 for two empties."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - edit_distance(a, b) / longest


def _annotate(root: Node) -> tuple[list[str], list[int], list[int]]:
    """Postorder labels, leftmost-leaf-descendant indexes, and keyroots."""
    labels: list[str] = []
    lmds: list[int] = []
    lmd_of: dict[int, int] = {}
    stack: list[tuple[Node, bool]] = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            idx = len(labels)
            lmd = lmd_of[id(node.children[0])] if node.children else idx
            lmd_of[id(node)] = lmd
            labels.append(node.label)
            lmds.append(lmd)
        else:
            stack.append((node, True))
            for child in reversed(node.children):
                stack.append((child, False))
    last_with_lmd: dict[int, int] = {}
    for i, l in enumerate(lmds):
        last_with_lmd[l] = i
    return labels, lmds, sorted(last_with_lmd.values())


def _relabel_cost(mode: str) -> Callable[[str, str], float]:
    if mode == "graded":
        base = lambda u, v: 0.0 if u == v else 1.0 - eds(u, v)
    elif mode == "exact":
        base = lambda u, v: 0.0 if u == v else 1.0
    else:
        raise ValueError(f"unknown relabel mode: {mode!r}")
    cache: dict[tuple[str, str], float] = {}

    def gamma(u: str, v: str) -> float:
        key = (u, v)
        got = cache.get(key)
        if got is None:
            got = cache[key] = base(u, v)
        return got

    return gamma


def tree_edit_distance(t1: Node, t2: Node, relabel: str = "graded") -> float:
    """Zhang-Shasha ordered tree edit distance.

    Insert and delete cost 1; relabel costs 1 - eds(labels) in ``graded``
    mode or 0/1 in ``exact`` mode.
    """
    la, lma, kra = _annotate(t1)
    lb, lmb, krb = _annotate(t2)
    gamma = _relabel_cost(relabel)
    td = [[0.0] * len(lb) for _ in la]
    for i in kra:
        for j in krb:
            _treedist(i, j, la, lb, lma, lmb, td, gamma)
    return td[-1][-1]


def _treedist(i, j, la, lb, lma, lmb, td, gamma):
    m = i - lma[i] + 2
    n = j - lmb[j] + 2
    fd = [[0.0] * n for _ in range(m)]
    ioff = lma[i] - 1
    joff = lmb[j] - 1
    for x in range(1, m):
        fd[x][0] = fd[x - 1][0] + 1
    for y in range(1, n):
        fd[0][y] = fd[0][y - 1] + 1
    for x in range(1, m):
        fdx = fd[x]
        fdx1 = fd[x - 1]
        for y in range(1, n):
            if lma[x + ioff] == lma[i] and lmb[y + joff] == lmb[j]:
                best = min(
                    fdx1[y] + 1,
                    fdx[y - 1] + 1,
                    fdx1[y - 1] + gamma(la[x + ioff], lb[y + joff]),
                )
                td[x + ioff][y + joff] = best
            else:
                p = lma[x + ioff] - 1 - ioff
                q = lmb[y + joff] - 1 - joff
                best = min(
                    fdx1[y] + 1,
                    fdx[y - 1] + 1,
                    fd[p][q] + td[x + ioff][y + joff],
                )
            fdx[y] = best


def teds(t1: Node, t2: Node, relabel: str = "graded") -> float:
    """Tree-edit-distance similarity: 1 - TED / max(|t1|, |t2|), clamped at 0.

    The clamp matters only for grossly mismatched shapes, where unit
    insert/delete costs can push TED past the larger node count.
    """
    dist = tree_edit_distance(t1, t2, relabel=relabel)
    return max(0.0, 1.0 - dist / max(t1.size(), t2.size()))


@dataclass(frozen=True)
class AlignedRanking:
    """Matched positions (gt_position, pred_position), sorted by gt side.

    gt positions must be strictly increasing and pred positions distinct,
    so the pred column is a permutation fragment whose disorder is what
    the Kendall metrics measure.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(g), int(p)) for g, p in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        gts = [g for g, _ in pairs]
        if any(b <= a for a, b in zip(gts, gts[1:])):
            raise ValueError("gt positions must be strictly increasing")
        preds = [p for _, p in pairs]
        if len(set(preds)) != len(preds):
            raise ValueError("pred positions must be distinct")

    @property
    def n(self) -> int:
        return len(self.pairs)

    @classmethod
    def from_sequences(cls, gt_positions: Iterable[int], pred_positions: Iterable[int]) -> "AlignedRanking":
        return cls(tuple(zip(gt_positions, pred_positions)))


def _count_inversions(seq: list[int]) -> tuple[list[int], int]:
    n = len(seq)
    if n < 2:
        return seq, 0
    mid = n // 2
    left, a = _count_inversions(seq[:mid])
    right, b = _count_inversions(seq[mid:])
    merged: list[int] = []
    count = a + b
    i = j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            merged.append(right[j])
            j += 1
            count += len(left) - i
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged, count


def kendall_discordant(ranking: AlignedRanking) -> int:
    """Number of discordant pairs: inversions in the pred column."""
    _, count = _count_inversions([p for _, p in ranking.pairs])
    return count


def ktds(ranking: AlignedRanking) -> float:
    """Kendall-tau distance similarity: 1 - 2*discordant / (n*(n-1)); 1.0 for n <= 1."""
    n = ranking.n
    if n <= 1:
        return 1.0
    return 1.0 - 2.0 * kendall_discordant(ranking) / (n * (n - 1))


def vocab_f1(pred: Mapping[str, int], gt: Mapping[str, int]) -> float:
    """Multiset F1 over token counts.

    Overlap is the sum of per-token minimum counts. Two empty vocabularies
    score 1.0; exactly one empty, or zero overlap, scores 0.0.
    """
    pred_total = sum(pred.values())
    gt_total = sum(gt.values())
    if pred_total == 0 and gt_total == 0:
        return 1.0
    if pred_total == 0 or gt_total == 0:
        return 0.0
    overlap = 0
    smaller, larger = (pred, gt) if len(pred) <= len(gt) else (gt, pred)
    for token, count in smaller.items():
        other = larger.get(token, 0)
        if other:
            overlap += min(count, other)
    if overlap == 0:
        return 0.0
    precision = overlap / pred_total
    recall = overlap / gt_total
    return 2.0 * precision * recall / (precision + recall)


_TIE_EPS = 1e-9


def max_weight_assignment(weights: Sequence[Sequence[float]] | np.ndarray) -> dict[int, int]:
    """Maximum-total-weight row-to-column assignment, deterministic under ties.

    Ties between optimal assignments are broken lexicographically: rows are
    fixed in ascending order, each taking the smallest column that still
    allows an optimal completion (within 1e-9).
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 2 or 0 in w.shape:
        return {}
    n_rows, n_cols = w.shape
    n = max(n_rows, n_cols)
    sq = np.zeros((n, n))
    sq[:n_rows, :n_cols] = w

    def best_total(matrix: np.ndarray) -> float:
        if matrix.size == 0:
            return 0.0
        rows, cols = linear_sum_assignment(matrix, maximize=True)
        return float(matrix[rows, cols].sum())

    target = best_total(sq)
    assign: dict[int, int] = {}
    available = set(range(n))
    fixed = 0.0
    for r in range(n):
        rest_rows = list(range(r + 1, n))
        for c in sorted(available):
            rest_cols = sorted(available - {c})
            residual = best_total(sq[np.ix_(rest_rows, rest_cols)]) if rest_rows else 0.0
            if fixed + sq[r, c] + residual >= target - _TIE_EPS:
                if r < n_rows and c < n_cols:
                    assign[r] = c
                fixed += sq[r, c]
                available.remove(c)
                break
    return assign


def vocabulary(tokens: Iterable[str]) -> Counter:
    """Token multiset used by vocab_f1."""
    return Counter(tokens)
