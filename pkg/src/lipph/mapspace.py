"""Discretized mapping spaces and loop spaces as filtered simplicial complexes.

A vertex map sends each domain vertex to a target vertex.  Maps whose
functional value (Lipschitz constant, loop length, or log+ of the Lipschitz
constant) is at most ``cap`` are the vertices of the map complex.  Higher
cells are products of target simplices, one simplex sigma_v per domain
vertex v, present when every vertex map in the product is admissible and the
coherence rule holds:

``"edge"`` (default)
    for every domain edge {u, v}, sigma_u and sigma_v together span a target
    simplex.  This is the Hom complex; it also forces each single map to send
    edges to simplices.
``"vertex"``
    no further condition: the sublevel set of the full product complex.
    Any vertex map is admissible.

Under the vertex rule every based loop contracts without its length ever
increasing (a coordinate can always slide toward its predecessor), which
erases the loop-space structure; see the README.

A cell enters the filtration at the largest functional value among its
corner maps.
"""

import heapq
import math
import multiprocessing
import os
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import Explosion, FunctionalMismatch, NotSimplyConnectedAtScale
from .persistence import Cell, build_filtered_complex, compute_barcode
from .targets import cycle_graph

FUNCTIONALS = ("lip", "length", "logpluslip")
DEFAULT_LIMIT = 5_000_000


def _default_limit():
    return int(os.environ.get("MAPSPACE_PH_LIMIT", DEFAULT_LIMIT))


@dataclass(frozen=True)
class VertexMap:
    values: tuple
    lip: Fraction
    length: Fraction

    def verify(self, domain, target):
        lip, length = map_invariants(domain, target, self.values)
        return lip == self.lip and length == self.length


def map_invariants(domain, target, values):
    """(lip, length) of a vertex map, recomputed from scratch."""
    lip, length = Fraction(0), Fraction(0)
    for e, le in domain.edge_length.items():
        u, v = tuple(e)
        d = target.dist[values[u]][values[v]]
        lip = max(lip, d / le)
        length += d
    return lip, length


def log_plus(x):
    if x <= 1:
        return 0.0
    x = Fraction(x)
    return math.log(x.numerator) - math.log(x.denominator)


@dataclass
class MapComplexSpec:
    domain: object
    target: object
    functional: str = "lip"
    cap: object = 1
    basepoint: tuple = None  # (domain vertex, target vertex)
    component_seed: object = None  # VertexMap or tuple of values
    coherence: str = "edge"
    max_dim: int = 2
    limit: int = None

    def __post_init__(self):
        if self.functional not in FUNCTIONALS:
            raise ValueError(f"functional must be one of {FUNCTIONALS}")
        if self.coherence not in ("edge", "vertex"):
            raise ValueError("coherence must be 'edge' or 'vertex'")
        if self.functional == "length" and not self.domain.is_cycle():
            raise FunctionalMismatch("the length functional needs a cycle-graph domain")
        if self.functional != "logpluslip":
            self.cap = Fraction(self.cap)
        if not self.cap > 0:
            raise ValueError("cap must be positive")
        if self.basepoint is not None:
            dv, tv = self.basepoint
            if not (0 <= dv < self.domain.n_vertices and 0 <= tv < self.target.n_vertices):
                raise ValueError(f"basepoint {self.basepoint} out of range")
        if self.limit is None:
            self.limit = _default_limit()

    def value(self, vm):
        if self.functional == "lip":
            return vm.lip
        if self.functional == "length":
            return vm.length
        return log_plus(vm.lip)


def loop_spec(target, steps, functional="length", cap=None, basepoint=0, **kw):
    """Spec for loops of ``steps`` unit steps in ``target``; ``basepoint=None`` gives free loops."""
    if cap is None:
        cap = steps * target.mesh if functional == "length" else target.mesh
    pin = None if basepoint is None else (0, basepoint)
    return MapComplexSpec(cycle_graph(steps, steps), target, functional, cap, basepoint=pin, **kw)


# -- enumeration -------------------------------------------------------------


class _Plan:
    """Domain traversal order with each vertex's already-placed neighbors."""

    def __init__(self, spec):
        X = spec.domain
        root = spec.basepoint[0] if spec.basepoint else 0
        order, seen = [root], {root}
        q = deque([root])
        while q:
            u = q.popleft()
            for w in sorted(X.neighbors[u]):
                if w not in seen:
                    seen.add(w)
                    order.append(w)
                    q.append(w)
        self.order = order
        placed = set()
        self.back = []
        for v in order:
            self.back.append([(u, X.edge_length[frozenset((u, v))]) for u in sorted(X.neighbors[v]) if u in placed])
            placed.add(v)
        self.pin = spec.basepoint
        if spec.functional == "length":
            self.bound = spec.cap
        elif spec.functional == "lip":
            self.bound = spec.cap
        else:
            self.bound = Fraction(math.exp(spec.cap)) * (1 + Fraction(1, 10**9))


def _candidates(spec, plan, k, vals):
    v = plan.order[k]
    if plan.pin is not None and plan.pin[0] == v:
        return [plan.pin[1]]
    Y = spec.target
    if spec.coherence == "vertex" or not plan.back[k]:
        return range(Y.n_vertices)
    cand = None
    for u, _ in plan.back[k]:
        s = Y.closed_star[vals[u]]
        cand = s if cand is None else cand & s
    return sorted(cand)


def _dfs(spec, plan, vals, k, acc, out, limit):
    """Extend the partial assignment ``vals`` (set on order[:k]); acc is lip or length so far."""
    n = len(plan.order)
    if k == n:
        out.append(tuple(vals))
        if len(out) > limit:
            raise Explosion(f"more than {limit} maps; raise the limit or lower the cap")
        return
    v = plan.order[k]
    D = spec.target.dist
    is_len = spec.functional == "length"
    for w in _candidates(spec, plan, k, vals):
        a = acc
        ok = True
        for u, le in plan.back[k]:
            d = D[vals[u]][w]
            a = a + d if is_len else max(a, d / le)
            if a > plan.bound:
                ok = False
                break
        if ok:
            vals[v] = w
            _dfs(spec, plan, vals, k + 1, a, out, limit)
    vals[v] = None


def _roots(spec, plan):
    """Partial assignments of the first one or two traversal vertices, used as shards."""
    n = len(plan.order)
    vals = [None] * spec.domain.n_vertices
    roots = []
    for w in _candidates(spec, plan, 0, vals):
        if n == 1:
            roots.append(((w,), Fraction(0)))
            continue
        vals[plan.order[0]] = w
        for w2 in _candidates(spec, plan, 1, vals):
            acc = Fraction(0)
            for u, le in plan.back[1]:
                d = spec.target.dist[w][w2]
                acc = acc + d if spec.functional == "length" else max(acc, d / le)
            if acc <= plan.bound:
                roots.append(((w, w2), acc))
    return roots


def _run_shard(args):
    spec, prefix, acc = args
    plan = _Plan(spec)
    vals = [None] * spec.domain.n_vertices
    for k, w in enumerate(prefix):
        vals[plan.order[k]] = w
    out = []
    _dfs(spec, plan, vals, len(prefix), acc, out, spec.limit)
    return out


def _pool(workers):
    ctx = multiprocessing.get_context("fork")
    return ctx.Pool(workers)


def enumerate_maps(spec, workers=1):
    """All admissible vertex maps with functional value <= cap, sorted by values.

    The search runs depth-first over domain vertices in BFS order from the
    basepoint, cutting partial assignments whose partial Lipschitz constant
    or partial length already exceeds the cap.  With ``workers > 1`` the
    root branches are split across processes; the sorted output is the same.
    """
    plan = _Plan(spec)
    roots = _roots(spec, plan)
    jobs = [(spec, p, a) for p, a in roots]
    if workers > 1 and len(jobs) > 1:
        with _pool(workers) as pool:
            parts = pool.map(_run_shard, jobs)
    else:
        parts = [_run_shard(j) for j in jobs]
    raw = [vals for part in parts for vals in part]
    if len(raw) > spec.limit:
        raise Explosion(f"more than {spec.limit} maps; raise the limit or lower the cap")
    raw.sort()
    maps = []
    for vals in raw:
        lip, length = map_invariants(spec.domain, spec.target, vals)
        vm = VertexMap(vals, lip, length)
        if spec.value(vm) <= spec.cap:
            maps.append(vm)
    return maps


# -- cells -------------------------------------------------------------------
#
# A cell is a tuple (sigma_v) of target simplices, one per domain vertex; its
# vertices are the vertex maps in the product of the sigma_v and its
# dimension is the sum of their dimensions.  Each cell is generated exactly
# once, from its lowest corner: the map taking every v to min(sigma_v).


def _upward(Y):
    """For each target vertex a, the simplices whose smallest vertex is a."""
    up = [[] for _ in range(Y.n_vertices)]
    for s in Y.simplices():
        up[s[0]].append(s)
    return up


def _cells_at(spec, f, index, values, up, max_dim):
    """Cells (with filtration) whose lowest corner is the map ``f``."""
    X, Y = spec.domain, spec.target
    M = X.n_vertices
    pin = spec.basepoint
    edge_mode = spec.coherence == "edge"
    lower = [[u for u in X.neighbors[v] if u < v] for v in range(M)]
    sigma = [None] * M
    out = []

    def rec(v, extra):
        if v == M:
            corners = [index.get(c) for c in _corners(sigma)]
            if None in corners:
                return
            out.append((tuple(sigma), extra, max(values[i] for i in corners)))
            return
        if pin is not None and pin[0] == v:
            options = ((f[v],),)
        else:
            options = up[f[v]]
        for s in options:
            d = len(s) - 1
            if extra + d > max_dim:
                continue
            if edge_mode and any(frozenset(s + sigma[u]) not in Y.simplex_set for u in lower[v]):
                continue
            sigma[v] = s
            rec(v + 1, extra + d)
        sigma[v] = None

    rec(0, 0)
    return out


def _corners(sigma):
    out = [()]
    for s in sigma:
        out = [c + (a,) for c in out for a in s]
    return out


def _cell_boundary(cell, ids):
    """Faces of a product cell with the usual product-orientation signs."""
    bd = []
    shift = 0
    for v, s in enumerate(cell):
        k = len(s) - 1
        for j in range(len(s) if k else 0):
            face = cell[:v] + (s[:j] + s[j + 1:],) + cell[v + 1:]
            bd.append((ids[face], (-1) ** (shift + j)))
        shift += k
    return tuple(bd)


@dataclass
class MapComplex:
    spec: MapComplexSpec
    maps: list
    values: list  # filtration value per map
    cells: list = field(default_factory=list)  # cells[k] = list of (cell, filtration)
    complex: object = None

    def edges(self):
        """1-cells as pairs of map indices."""
        index = {m.values: i for i, m in enumerate(self.maps)}
        return [tuple(index[c] for c in _corners(cell)) for cell, _ in self.cells[1]]


def _shard_cells(args):
    spec, fs, index, values, max_dim = args
    up = _upward(spec.target)
    return [c for f in fs for c in _cells_at(spec, f, index, values, up, max_dim)]


def map_complex(spec, workers=1, max_dim=None, field_char=2):
    """Enumerate maps and product cells; returns a :class:`MapComplex`."""
    max_dim = spec.max_dim if max_dim is None else max_dim
    maps = enumerate_maps(spec, workers=workers)
    index = {m.values: i for i, m in enumerate(maps)}
    values = [spec.value(m) for m in maps]
    fs = [m.values for m in maps]
    if workers > 1 and len(fs) > 1:
        chunks = [fs[i::workers] for i in range(workers)]
        with _pool(workers) as pool:
            parts = pool.map(_shard_cells, [(spec, c, index, values, max_dim) for c in chunks])
    else:
        parts = [_shard_cells((spec, fs, index, values, max_dim))]
    cells = [[] for _ in range(max_dim + 1)]
    for part in parts:
        for cell, dim, filt in part:
            cells[dim].append((cell, filt))
    for layer in cells:
        layer.sort()
    mc = MapComplex(spec, maps, values, cells)
    if spec.component_seed is not None:
        _restrict(mc)
    mc.complex = _to_filtered(mc, field_char)
    return mc


def _restrict(mc):
    seed = mc.spec.component_seed
    seed = tuple(seed.values if isinstance(seed, VertexMap) else seed)
    index = {m.values: i for i, m in enumerate(mc.maps)}
    if seed not in index:
        raise ValueError("component_seed is not an admissible map")
    adj = [[] for _ in mc.maps]
    for i, j in mc.edges():
        adj[i].append(j)
        adj[j].append(i)
    keep = {index[seed]}
    q = deque(keep)
    while q:
        for j in adj[q.popleft()]:
            if j not in keep:
                keep.add(j)
                q.append(j)
    kept = {mc.maps[i].values for i in keep}
    mc.maps = [m for m in mc.maps if m.values in kept]
    mc.values = [mc.spec.value(m) for m in mc.maps]
    mc.cells = [[(c, v) for c, v in layer if _corners(c)[0] in kept] for layer in mc.cells]


def _to_filtered(mc, field_char=2):
    cells, ids = [], {}
    for layer in mc.cells:
        for cell, filt in layer:
            cid = len(cells)
            ids[cell] = cid
            cells.append(Cell(cid, sum(len(s) - 1 for s in cell), _cell_boundary(cell, ids), filt))
    return build_filtered_complex(cells, field_char, check_boundary=len(cells) <= 5000)


def build_map_complex(spec, workers=1, field_char=2):
    return map_complex(spec, workers=workers, field_char=field_char).complex


def ph_of_mapspace(spec, degree, workers=1):
    mc = map_complex(spec, workers=workers, max_dim=max(spec.max_dim, degree + 1))
    return compute_barcode(mc.complex, degree)


def _components(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = n
    for i, j in edges:
        a, b = find(i), find(j)
        if a != b:
            parent[a] = b
            count -= 1
    return count


def count_components(spec, L, workers=1):
    """Connected components of the sublevel complex at L, by union-find."""
    cap = min(spec.cap, L)
    mc = map_complex(replace(spec, cap=cap if cap > 0 else spec.cap), workers=workers, max_dim=1)
    keep = {i for i, v in enumerate(mc.values) if v <= L}
    edges = [(i, j) for i, j in mc.edges() if i in keep and j in keep]
    return _components(len(mc.maps), edges) - (len(mc.maps) - len(keep))


def estimate_contraction_constant(target, maxlen, steps=6, basepoint=0, workers=1):
    """Empirical contraction constant S of based loops in ``target``.

    For every loop of length at most ``maxlen`` in the full ``steps``-step
    loop complex, find a path to the constant loop minimizing the largest
    loop length met along the way (minimax Dijkstra); S is the largest excess
    of that bottleneck over the starting length.
    """
    spec = loop_spec(target, steps, "length", steps * target.mesh, basepoint=basepoint)
    mc = map_complex(spec, workers=workers, max_dim=1)
    n = len(mc.maps)
    adj = [[] for _ in range(n)]
    for i, j in mc.edges():
        adj[i].append(j)
        adj[j].append(i)
    const = tuple([basepoint] * steps)
    src = next(i for i, m in enumerate(mc.maps) if m.values == const)
    best = [None] * n
    best[src] = mc.values[src]
    heap = [(best[src], src)]
    while heap:
        c, i = heapq.heappop(heap)
        if c > best[i]:
            continue
        for j in adj[i]:
            nc = max(c, mc.values[j])
            if best[j] is None or nc < best[j]:
                best[j] = nc
                heapq.heappush(heap, (nc, j))
    S = Fraction(0)
    for i, m in enumerate(mc.maps):
        if m.length > maxlen:
            continue
        if best[i] is None:
            raise NotSimplyConnectedAtScale(f"loop {m.values} of length {m.length} does not contract")
        S = max(S, best[i] - m.length)
    return S
