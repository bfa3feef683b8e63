import json
from collections import deque
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lipph.errors import InvalidMetricComplex, TooSmall
from lipph.targets import (
    BUBBLE_RIM,
    MetricComplex,
    bubble_sphere,
    cycle_graph,
    figure_eight,
    filled_triangle,
    flat_torus,
    interval,
    loop_length,
    make_target,
    octahedron_sphere,
    point,
    wedge,
)


def bfs_hops(Y, s):
    dist = {s: 0}
    q = deque([s])
    while q:
        u = q.popleft()
        for w in Y.neighbors[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def test_flat_torus_counts():
    Y = flat_torus(3, 3, 3, 3)
    assert Y.counts() == (9, 27, 18)
    assert Y.mesh == 1


def test_flat_torus_diameter_by_bfs():
    Y = flat_torus(4, 4, 4, 4)  # unit edges, so hop counts are distances
    assert Y.diameter == max(max(bfs_hops(Y, s).values()) for s in range(Y.n_vertices))


def test_flat_torus_symmetric():
    Y = flat_torus(3, 4, 1, 1)
    n = Y.n_vertices
    assert all(Y.dist[i][j] == Y.dist[j][i] for i in range(n) for j in range(n))
    assert all(Y.dist[i][i] == 0 for i in range(n))


def test_too_small():
    with pytest.raises(TooSmall):
        flat_torus(2, 3, 1, 1)
    with pytest.raises(TooSmall):
        cycle_graph(2, 1)
    with pytest.raises(TooSmall):
        figure_eight(1, 1, 2)


def test_figure_eight():
    Y = figure_eight(1, 1, 3)
    assert Y.counts()[:2] == (5, 6)
    assert Y.dim == 1
    Y = figure_eight(2, 1, 4)
    # antipode of loop 1 sits two edges from the wedge point
    assert Y.dist[0][2] == 1


def test_small_generators():
    assert octahedron_sphere().counts() == (6, 12, 8)
    assert point().counts() == (1, 0, 0)
    assert interval(2, 4).diameter == 2
    assert filled_triangle().counts() == (3, 3, 1)
    C = cycle_graph(5, 10)
    assert C.n_vertices == 5 and all(le == 2 for _, _, le in C.edges)
    assert C.is_cycle()
    W = wedge(cycle_graph(3, 3), cycle_graph(4, 4))
    assert W.n_vertices == 6


def test_bubble_rim():
    Y = bubble_sphere(Fraction(1, 2))
    rim = list(BUBBLE_RIM)
    base = loop_length(Y, rim)
    assert base == Fraction(1, 2)
    for i in range(len(rim)):
        for w in range(Y.n_vertices):
            moved = rim[:i] + [w] + rim[i + 1:]
            assert loop_length(Y, moved) >= base


def test_validation():
    with pytest.raises(InvalidMetricComplex):
        MetricComplex(2, [(0, 0, 1)])
    with pytest.raises(InvalidMetricComplex):
        MetricComplex(3, [(0, 1, 1)])  # disconnected
    with pytest.raises(InvalidMetricComplex):
        MetricComplex(3, [(0, 1, 1), (1, 2, 1)], [(0, 1, 2)])  # missing edge
    with pytest.raises(InvalidMetricComplex):
        MetricComplex(2, [(0, 1, -1)])


def test_json_round_trip():
    Y = bubble_sphere(Fraction(1, 2))
    Z = MetricComplex.from_json(json.loads(json.dumps(Y.to_json())))
    assert Z.dist == Y.dist and Z.counts() == Y.counts()


def test_registry():
    assert make_target("flat-torus", 3, 3, 3, 3).counts() == (9, 27, 18)
    with pytest.raises(KeyError):
        make_target("klein-bottle")


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["torus", "octa", "fig8", "bubble"]), st.fractions(min_value=Fraction(1, 10), max_value=10))
def test_rescaling(name, c):
    Y = {
        "torus": lambda: flat_torus(3, 3, 3, 3),
        "octa": octahedron_sphere,
        "fig8": lambda: figure_eight(1, 2, 3),
        "bubble": lambda: bubble_sphere(Fraction(1, 2)),
    }[name]()
    Z = Y.scaled(c)
    assert Z.diameter == c * Y.diameter
    n = Y.n_vertices
    assert all(Z.dist[i][j] == c * Y.dist[i][j] for i in range(n) for j in range(n))
