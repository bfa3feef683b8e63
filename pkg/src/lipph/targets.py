"""Finite metric simplicial complexes and the example spaces used as targets.

Edge lengths are stored as exact ``Fraction`` values (floats are converted
exactly), and the vertex metric is the shortest-path metric on the
1-skeleton.
"""

import heapq
import itertools
from fractions import Fraction

from .errors import InvalidMetricComplex, TooSmall


def _exact(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


class MetricComplex:
    """Finite simplicial complex with positive edge lengths.

    ``simplices`` may list any faces; the set is closed downward and always
    contains every vertex and edge.  Multi-edges and self-loops are rejected.
    """

    def __init__(self, n_vertices, edges, simplices=(), name=None):
        if n_vertices < 1:
            raise InvalidMetricComplex("need at least one vertex")
        self.n_vertices = int(n_vertices)
        self.name = name
        self.edge_length = {}
        for u, v, length in edges:
            u, v = int(u), int(v)
            length = _exact(length)
            if u == v:
                raise InvalidMetricComplex(f"self-loop at {u}")
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise InvalidMetricComplex(f"edge ({u}, {v}) out of range")
            if length <= 0:
                raise InvalidMetricComplex(f"edge ({u}, {v}) has non-positive length")
            key = frozenset((u, v))
            if key in self.edge_length:
                raise InvalidMetricComplex(f"repeated edge ({u}, {v})")
            self.edge_length[key] = length

        faces = {frozenset((v,)) for v in range(n_vertices)} | set(self.edge_length)
        for s in simplices:
            s = frozenset(int(v) for v in s)
            if not s:
                continue
            if len(s) <= 2 and s not in faces:
                raise InvalidMetricComplex(f"simplex {sorted(s)} uses a missing edge")
            for k in range(1, len(s) + 1):
                for f in itertools.combinations(sorted(s), k):
                    f = frozenset(f)
                    if len(f) == 2 and f not in self.edge_length:
                        raise InvalidMetricComplex(f"simplex {sorted(s)} uses missing edge {sorted(f)}")
                    faces.add(f)
        self.simplex_set = frozenset(faces)
        self.neighbors = [set() for _ in range(n_vertices)]
        for e in self.edge_length:
            u, v = tuple(e)
            self.neighbors[u].add(v)
            self.neighbors[v].add(u)
        self.closed_star = [frozenset(self.neighbors[v] | {v}) for v in range(n_vertices)]
        self.dist = self._shortest_paths()
        self._check_metric()

    def _shortest_paths(self):
        inf = None
        rows = []
        for src in range(self.n_vertices):
            d = [inf] * self.n_vertices
            d[src] = Fraction(0)
            heap = [(Fraction(0), src)]
            while heap:
                du, u = heapq.heappop(heap)
                if du > d[u]:
                    continue
                for w in self.neighbors[u]:
                    nd = du + self.edge_length[frozenset((u, w))]
                    if d[w] is None or nd < d[w]:
                        d[w] = nd
                        heapq.heappush(heap, (nd, w))
            if any(x is None for x in d):
                raise InvalidMetricComplex("complex is not connected")
            rows.append(tuple(d))
        return tuple(rows)

    def _check_metric(self):
        d = self.dist
        n = self.n_vertices
        for i in range(n):
            if d[i][i] != 0:
                raise InvalidMetricComplex("nonzero diagonal")
            for j in range(n):
                if d[i][j] != d[j][i]:
                    raise InvalidMetricComplex("asymmetric metric")
        if n <= 200:
            for i, j, k in itertools.product(range(n), repeat=3):
                if d[i][k] > d[i][j] + d[j][k]:
                    raise InvalidMetricComplex("triangle inequality fails")

    @property
    def edges(self):
        return sorted((min(e), max(e), length) for e, length in self.edge_length.items())

    @property
    def diameter(self):
        return max(max(row) for row in self.dist)

    @property
    def mesh(self):
        return max(self.edge_length.values(), default=Fraction(0))

    def simplices(self, dim=None):
        out = [tuple(sorted(s)) for s in self.simplex_set if dim is None or len(s) == dim + 1]
        return sorted(out, key=lambda s: (len(s), s))

    def is_simplex(self, vertices):
        return frozenset(vertices) in self.simplex_set

    @property
    def dim(self):
        return max(len(s) for s in self.simplex_set) - 1

    def counts(self):
        """(vertices, edges, triangles) counts."""
        return (self.n_vertices, len(self.edge_length), len(self.simplices(2)))

    def scaled(self, c):
        c = _exact(c)
        return MetricComplex(
            self.n_vertices,
            [(u, v, length * c) for u, v, length in self.edges],
            self.simplices(),
            name=self.name,
        )

    def is_cycle(self):
        """True if the 1-skeleton is a single cycle and there are no 2-cells."""
        return (
            self.n_vertices >= 3
            and len(self.edge_length) == self.n_vertices
            and all(len(nb) == 2 for nb in self.neighbors)
            and self.dim == 1
        )

    def to_json(self):
        return {
            "name": self.name,
            "vertices": self.n_vertices,
            "edges": [[u, v, _num(length)] for u, v, length in self.edges],
            "simplices": [list(s) for s in self.simplices() if len(s) >= 3],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(
            obj["vertices"],
            [(u, v, length) for u, v, length in obj["edges"]],
            obj.get("simplices", []),
            name=obj.get("name"),
        )

    def __repr__(self):
        v, e, t = self.counts()
        return f"MetricComplex({self.name or 'unnamed'}: V={v}, E={e}, T={t})"


def _num(x):
    return x.numerator if x.denominator == 1 else float(x)


def point():
    return MetricComplex(1, [], name="point")


def interval(length=1, k=1):
    """Path graph with k edges of total length ``length``."""
    length = _exact(length)
    return MetricComplex(k + 1, [(i, i + 1, length / k) for i in range(k)], name="interval")


def cycle_graph(N, length):
    if N < 3:
        raise TooSmall(f"cycle_graph needs N >= 3, got {N}")
    step = _exact(length) / N
    return MetricComplex(N, [(i, (i + 1) % N, step) for i in range(N)], name=f"cycle{N}")


def filled_triangle(side=1):
    side = _exact(side)
    return MetricComplex(3, [(0, 1, side), (1, 2, side), (0, 2, side)], [(0, 1, 2)], name="triangle")


def flat_torus(m, n, l1, l2):
    """m x n grid on the torus, each square split along its (1,1) diagonal.

    Horizontal edges have length l1/m, vertical l2/n, diagonals the larger of
    the two; with square cells this is the equilateral (hexagonal) flat torus.
    Vertex (i, j) has index i + m*j.
    """
    if m < 3 or n < 3:
        raise TooSmall(f"flat_torus needs m, n >= 3, got {m}x{n}")
    h, v = _exact(l1) / m, _exact(l2) / n
    diag = max(h, v)

    def idx(i, j):
        return (i % m) + m * (j % n)

    edges, tris = [], []
    for i in range(m):
        for j in range(n):
            edges.append((idx(i, j), idx(i + 1, j), h))
            edges.append((idx(i, j), idx(i, j + 1), v))
            edges.append((idx(i, j), idx(i + 1, j + 1), diag))
            tris.append((idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)))
            tris.append((idx(i, j), idx(i, j + 1), idx(i + 1, j + 1)))
    return MetricComplex(m * n, edges, tris, name=f"torus{m}x{n}")


def figure_eight(l1, l2, k):
    """Wedge of two cycles of lengths l1, l2, each subdivided into k edges.

    Vertex 0 is the wedge point; loop 1 uses vertices 1..k-1, loop 2 uses k..2k-2.
    """
    if k < 3:
        raise TooSmall(f"figure_eight needs k >= 3 for a simplicial graph, got {k}")
    s1, s2 = _exact(l1) / k, _exact(l2) / k
    loop1 = [0] + list(range(1, k))
    loop2 = [0] + list(range(k, 2 * k - 1))
    edges = [(loop1[i], loop1[(i + 1) % k], s1) for i in range(k)]
    edges += [(loop2[i], loop2[(i + 1) % k], s2) for i in range(k)]
    return MetricComplex(2 * k - 1, edges, name=f"figure8_k{k}")


def octahedron_sphere(edge=1):
    """Vertex 0 north, 1..4 equator, 5 south; all edges of length ``edge``."""
    edge = _exact(edge)
    eq = [1, 2, 3, 4]
    edges, tris = [], []
    for a in range(4):
        x, y = eq[a], eq[(a + 1) % 4]
        edges += [(x, y, edge), (0, x, edge), (5, x, edge)]
        tris += [(0, x, y), (5, x, y)]
    return MetricComplex(6, edges, tris, name="octahedron")


def bubble_sphere(neck, body=1):
    """Sphere with a narrow waist: two octahedral caps joined through a short rim.

    The rim r0..r3 (vertices 0..3) is a 4-cycle of total length ``neck``.  It
    is joined by triangulated bands to two unit squares e (4..7) and f (9..12),
    coned off by poles s = 8 and n = 13.  All non-rim edges have length
    ``body``.  The rim is a short, nullhomotopic, locally minimal loop.
    """
    neck, body = _exact(neck), _exact(body)
    if neck <= 0:
        raise InvalidMetricComplex("neck must be positive")
    r = [0, 1, 2, 3]
    e = [4, 5, 6, 7]
    f = [9, 10, 11, 12]
    s, n = 8, 13
    edges, tris = [], []
    for i in range(4):
        j = (i + 1) % 4
        edges.append((r[i], r[j], neck / 4))
        for ring, pole in ((e, s), (f, n)):
            edges += [(ring[i], ring[j], body), (pole, ring[i], body)]
            edges += [(ring[i], r[i], body), (ring[j], r[i], body)]
            tris += [(pole, ring[i], ring[j]), (ring[i], ring[j], r[i]), (r[i], r[j], ring[j])]
    return MetricComplex(14, edges, tris, name=f"bubble{neck}")


# vertex sequence of the bubble rim
BUBBLE_RIM = (0, 1, 2, 3)


def wedge(Y1, Y2):
    """Identify vertex 0 of Y1 with vertex 0 of Y2; Y2's other vertices are shifted."""
    off = Y1.n_vertices - 1

    def m(v):
        return 0 if v == 0 else v + off

    edges = list(Y1.edges) + [(m(u), m(v), length) for u, v, length in Y2.edges]
    simp = list(Y1.simplices()) + [tuple(m(v) for v in s) for s in Y2.simplices()]
    return MetricComplex(Y1.n_vertices + Y2.n_vertices - 1, edges, simp, name="wedge")


TARGETS = {
    "point": point,
    "interval": interval,
    "cycle": cycle_graph,
    "triangle": filled_triangle,
    "flat-torus": flat_torus,
    "figure-eight": figure_eight,
    "octahedron": octahedron_sphere,
    "bubble-sphere": bubble_sphere,
}


def make_target(name, *params):
    if name not in TARGETS:
        raise KeyError(f"unknown target {name!r}; choose from {sorted(TARGETS)}")
    return TARGETS[name](*params)


def loop_length(Y, vertices):
    """Length of the closed vertex loop v0 -> v1 -> ... -> v0 in the path metric."""
    return sum(Y.dist[a][b] for a, b in zip(vertices, vertices[1:] + vertices[:1]))
