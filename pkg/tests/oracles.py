"""Independent brute-force oracles used by the tests.

None of these call into the reduction, the matching search, or the pruned
enumeration they check.
"""

import itertools
import random
from fractions import Fraction

from lipph.persistence import INF, Cell, build_filtered_complex

# -- filtered complexes ------------------------------------------------------------


def random_complex(rng, max_cells=12, n_vertices=5, values=6, field_char=2):
    """Random simplicial complex (<= max_cells cells) with a valid integer filtration."""
    n = rng.randint(1, n_vertices)
    simplices = [(v,) for v in range(n)]
    pool = [s for k in (2, 3) for s in itertools.combinations(range(n), k)]
    rng.shuffle(pool)
    for s in pool:
        if len(simplices) >= max_cells:
            break
        faces = list(itertools.combinations(s, len(s) - 1))
        if all(f in simplices for f in faces) and rng.random() < 0.7:
            simplices.append(s)
    simplices = simplices[:max_cells]
    ids = {s: i for i, s in enumerate(simplices)}
    filt = {}
    for s in simplices:
        lo = max((filt[f] for f in itertools.combinations(s, len(s) - 1) if len(s) > 1), default=0)
        filt[s] = lo + rng.randint(0, values // 2)
    cells = []
    for s in simplices:
        bd = []
        if len(s) > 1:
            for j in range(len(s)):
                f = s[:j] + s[j + 1:]
                bd.append((ids[f], (-1) ** j % field_char))
        cells.append(Cell(ids[s], len(s) - 1, tuple(bd), filt[s]))
    return build_filtered_complex(cells, field_char), simplices, filt


def perturb(simplices, filt, eps, rng):
    """Perturb filtration values by at most eps while keeping faces before cofaces."""
    new = {}
    for s in simplices:  # faces come first in the list
        want = filt[s] + Fraction(rng.randint(-100, 100), 100) * eps
        lo = max((new[f] for f in itertools.combinations(s, len(s) - 1) if len(s) > 1), default=None)
        if lo is not None and want < lo:
            want = lo  # lo <= filt[face] + eps <= filt[s] + eps, so still within eps
        new[s] = want
    return new


def complex_from(simplices, filt, field_char=2):
    ids = {s: i for i, s in enumerate(simplices)}
    cells = []
    for s in simplices:
        bd = [(ids[s[:j] + s[j + 1:]], (-1) ** j % field_char) for j in range(len(s))] if len(s) > 1 else []
        cells.append(Cell(ids[s], len(s) - 1, tuple(bd), filt[s]))
    return build_filtered_complex(cells, field_char)


def gf2_rank(rows):
    """Rank over GF(2) of a list of int bitmasks."""
    rank, rows = 0, [r for r in rows if r]
    while rows:
        pivot = rows.pop()
        if not pivot:
            continue
        rank += 1
        low = pivot & -pivot
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rank


def brute_betti(simplices, filt, degree, t):
    """Betti number of the sublevel complex at t over GF(2), by direct ranks."""
    sub = [s for s in simplices if filt[s] <= t]
    k_cells = [s for s in sub if len(s) == degree + 1]
    lower = {s: i for i, s in enumerate(x for x in sub if len(x) == degree)}
    upper = [s for s in sub if len(s) == degree + 2]
    kidx = {s: i for i, s in enumerate(k_cells)}

    def bd_mask(s, idx):
        m = 0
        for j in range(len(s)):
            m ^= 1 << idx[s[:j] + s[j + 1:]]
        return m

    rank_k = gf2_rank([bd_mask(s, lower) for s in k_cells]) if degree > 0 else 0
    rank_up = gf2_rank([bd_mask(s, kidx) for s in upper])
    return len(k_cells) - rank_k - rank_up


# -- diagrams ---------------------------------------------------------------------


def _dist(a, b):
    if (a[1] == INF) != (b[1] == INF):
        return INF
    dd = 0 if a[1] == INF else abs(a[1] - b[1])
    return max(abs(a[0] - b[0]), dd)


def _half(a):
    return INF if a[1] == INF else (a[1] - a[0]) / 2


def exhaustive_bottleneck(D1, D2):
    """Minimum over every partial matching of the largest cost it incurs."""
    D1, D2 = list(D1), list(D2)
    best = INF
    n1, n2 = len(D1), len(D2)
    for k in range(min(n1, n2) + 1):
        for left in itertools.combinations(range(n1), k):
            for right in itertools.permutations(range(n2), k):
                cost = max([_dist(D1[i], D2[j]) for i, j in zip(left, right)], default=0)
                cost = max([cost] + [_half(D1[i]) for i in range(n1) if i not in left])
                cost = max([cost] + [_half(D2[j]) for j in range(n2) if j not in right])
                best = min(best, cost)
    return best


def random_diagram(rng, max_bars=5, values=8, infinite=True):
    bars = []
    for _ in range(rng.randint(0, max_bars)):
        b = Fraction(rng.randint(0, values * 2), 2)
        if infinite and rng.random() < 0.15:
            bars.append((b, INF))
        else:
            bars.append((b, b + Fraction(rng.randint(1, values * 2), 2)))
    return bars


# -- maps and words --------------------------------------------------------------


def brute_force_maps(spec):
    """Every assignment of target vertices, filtered without any pruning."""
    X, Y = spec.domain, spec.target
    out = []
    for vals in itertools.product(range(Y.n_vertices), repeat=X.n_vertices):
        if spec.basepoint and vals[spec.basepoint[0]] != spec.basepoint[1]:
            continue
        if spec.coherence == "edge" and any(frozenset((vals[u], vals[v])) not in Y.simplex_set for u, v, _ in X.edges):
            continue
        lip = max((Y.dist[vals[u]][vals[v]] / le for u, v, le in X.edges), default=Fraction(0))
        length = sum(Y.dist[vals[u]][vals[v]] for u, v, _ in X.edges)
        value = {"lip": lip, "length": length}[spec.functional]
        if value <= spec.cap:
            out.append((vals, value))
    return out


def brute_force_cells(spec, max_dim):
    """All product cells (one target simplex per domain vertex) and their filtrations."""
    X, Y = spec.domain, spec.target
    maps = dict(brute_force_maps(spec))
    sims = Y.simplices()
    out = {}
    for sigma in itertools.product(sims, repeat=X.n_vertices):
        dim = sum(len(s) - 1 for s in sigma)
        if dim > max_dim:
            continue
        if spec.basepoint and sigma[spec.basepoint[0]] != (spec.basepoint[1],):
            continue
        if spec.coherence == "edge" and any(frozenset(sigma[u] + sigma[v]) not in Y.simplex_set for u, v, _ in X.edges):
            continue
        corners = list(itertools.product(*sigma))
        if any(c not in maps for c in corners):
            continue
        out[tuple(sigma)] = max(maps[c] for c in corners)
    return out


def reduced_words(max_len):
    """Reduced words in the free group on a, b (A, B are inverses), up to max_len."""
    inv = {"a": "A", "A": "a", "b": "B", "B": "b"}
    words = [""]
    frontier = [""]
    for _ in range(max_len):
        nxt = [w + x for w in frontier for x in "aAbB" if not w or inv[x] != w[-1]]
        words += nxt
        frontier = nxt
    return words


def cyclically_reduced_count(n):
    """Number of cyclically reduced words of length exactly n (n >= 1)."""
    inv = {"a": "A", "A": "a", "b": "B", "B": "b"}
    return sum(1 for w in reduced_words(n) if len(w) == n and inv[w[0]] != w[-1])


def seeded(seed):
    return random.Random(seed)
