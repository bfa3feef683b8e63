"""Bottleneck distance, epsilon-smoothing and interleaving checks on barcodes.

Distances are computed exactly on whatever number type the bars carry
(``Fraction`` in, ``Fraction`` out).  Infinite bars only ever match infinite
bars; finite bars either match a finite bar or are dropped, which costs half
their length.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import NegativeEpsilon
from .persistence import INF, Barcode


@dataclass
class Matching:
    """A partial matching between two barcodes' bar lists (indices into ``.bars``)."""

    pairs: list = field(default_factory=list)
    unmatched1: list = field(default_factory=list)
    unmatched2: list = field(default_factory=list)
    delta: object = 0

    def to_json(self):
        return {
            "delta": _out(self.delta),
            "pairs": [list(p) for p in self.pairs],
            "unmatched1": list(self.unmatched1),
            "unmatched2": list(self.unmatched2),
        }


def _out(x):
    if x == INF:
        return None
    return x if isinstance(x, (int, float)) else float(x)


def _bars(D):
    return list(D.bars) if isinstance(D, Barcode) else [tuple(b) for b in D]


def endpoint_distance(bar1, bar2):
    """Sup-distance of two bars with |inf - inf| = 0 and |finite - inf| = inf."""
    (b1, d1), (b2, d2) = bar1, bar2
    if d1 == INF and d2 == INF:
        dd = 0
    elif d1 == INF or d2 == INF:
        return INF
    else:
        dd = abs(d1 - d2)
    return max(abs(b1 - b2), dd)


def half_length(bar):
    b, d = bar
    return INF if d == INF else (d - b) / 2


def _feasible(fin1, fin2, delta):
    """Perfect matching in the usual diagonal-augmented bipartite graph, or None."""
    n1, n2 = len(fin1), len(fin2)
    n = n1 + n2
    rows, cols = [], []
    for i, a in enumerate(fin1):
        for j, b in enumerate(fin2):
            if endpoint_distance(a, b) <= delta:
                rows.append(i)
                cols.append(j)
        if half_length(a) <= delta:
            rows.append(i)
            cols.append(n2 + i)
    for j, b in enumerate(fin2):
        if half_length(b) <= delta:
            rows.append(n1 + j)
            cols.append(j)
        for i in range(n1):
            rows.append(n1 + j)
            cols.append(n2 + i)
    if n == 0:
        return []
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
    match = maximum_bipartite_matching(graph, perm_type="column")
    if (match < 0).any():
        return None
    return [(i, int(match[i])) for i in range(n1) if match[i] < n2]


def bottleneck_distance(D1, D2, return_matching=False):
    """Least delta admitting a delta-matching; ``inf`` if infinite-bar counts differ.

    The optimum is one of finitely many candidates (endpoint differences and
    half-lengths), so a binary search over the sorted candidate list with a
    bipartite feasibility test at each step gives the exact value.
    """
    bars1, bars2 = _bars(D1), _bars(D2)
    inf1 = sorted((b, i) for i, (b, d) in enumerate(bars1) if d == INF)
    inf2 = sorted((b, i) for i, (b, d) in enumerate(bars2) if d == INF)
    if len(inf1) != len(inf2):
        if return_matching:
            return INF, Matching(delta=INF)
        return INF
    fin1_idx = [i for i, (b, d) in enumerate(bars1) if d != INF]
    fin2_idx = [i for i, (b, d) in enumerate(bars2) if d != INF]
    fin1 = [bars1[i] for i in fin1_idx]
    fin2 = [bars2[i] for i in fin2_idx]

    # sorted births are an optimal matching of the infinite parts
    inf_pairs = [(i, j) for (_, i), (_, j) in zip(inf1, inf2)]
    inf_delta = max((abs(bars1[i][0] - bars2[j][0]) for i, j in inf_pairs), default=0)

    cands = {0}
    for a in fin1 + fin2:
        cands.add(half_length(a))
    for a in fin1:
        for b in fin2:
            cands.add(abs(a[0] - b[0]))
            cands.add(abs(a[1] - b[1]))
    cands = sorted(c for c in cands if c >= inf_delta)
    if not cands or cands[0] != inf_delta:
        cands.insert(0, inf_delta)

    lo, hi = 0, len(cands) - 1
    best = _feasible(fin1, fin2, cands[hi])
    while lo < hi:
        mid = (lo + hi) // 2
        m = _feasible(fin1, fin2, cands[mid])
        if m is None:
            lo = mid + 1
        else:
            hi, best = mid, m
    delta = cands[hi]
    if not return_matching:
        return delta
    if len(fin1) + len(fin2) and best is None:
        best = _feasible(fin1, fin2, delta)
    pairs = inf_pairs + [(fin1_idx[i], fin2_idx[j]) for i, j in best or []]
    used1 = {i for i, _ in pairs}
    used2 = {j for _, j in pairs}
    return delta, Matching(
        pairs=sorted(pairs),
        unmatched1=[i for i in range(len(bars1)) if i not in used1],
        unmatched2=[j for j in range(len(bars2)) if j not in used2],
        delta=delta,
    )


def check_matching(D1, D2, m):
    """True iff ``m`` is a valid ``m.delta``-matching between D1 and D2.

    Unmatched bars must have length at most 2*delta; matched pairs must lie
    within sup-distance delta.
    """
    bars1, bars2 = _bars(D1), _bars(D2)
    seen1, seen2 = set(), set()
    for i, j in m.pairs:
        if i in seen1 or j in seen2:
            return False
        seen1.add(i)
        seen2.add(j)
        if endpoint_distance(bars1[i], bars2[j]) > m.delta:
            return False
    if seen1 | set(m.unmatched1) != set(range(len(bars1))) or seen1 & set(m.unmatched1):
        return False
    if seen2 | set(m.unmatched2) != set(range(len(bars2))) or seen2 & set(m.unmatched2):
        return False
    for i in m.unmatched1:
        if half_length(bars1[i]) > m.delta:
            return False
    for j in m.unmatched2:
        if half_length(bars2[j]) > m.delta:
            return False
    return True


def interleaving_distance(D1, D2):
    """Interleaving distance of the interval modules; equals the bottleneck distance."""
    return bottleneck_distance(D1, D2)


def smooth(D, eps):
    """Interval-level action of the eps-smoothing functor: (b, d) -> (b+eps, d-eps)."""
    if eps < 0:
        raise NegativeEpsilon(f"eps={eps} < 0")
    out = []
    for b, d in _bars(D):
        if d == INF:
            out.append((b + eps, INF))
        elif d - b > 2 * eps:
            out.append((b + eps, d - eps))
    degree = D.degree if isinstance(D, Barcode) else 0
    return Barcode(degree, tuple(out))


def max_finite_length(D):
    return max((d - b for b, d in _bars(D) if d != INF), default=0)
