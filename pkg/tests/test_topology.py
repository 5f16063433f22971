import random
from collections import Counter, deque

import pytest

from treewave.errors import ParameterError, TruncationError
from treewave.topology import (
    Ball,
    VertexAddress,
    distance,
    omega,
    sphere,
    sphere_volume,
)


def addr(q, *labels):
    return VertexAddress(q, labels)


def test_distance_examples():
    origin = VertexAddress.origin(2)
    assert distance(origin, origin) == 0
    assert distance(addr(2, 0), addr(2, 0, 0)) == 1
    # "01" vs "1": empty common prefix, 2 + 1 - 0
    assert distance(addr(2, 0, 1), addr(2, 1)) == 3


def test_distance_q_mismatch():
    with pytest.raises(ParameterError):
        distance(VertexAddress.origin(2), VertexAddress.origin(3))


def test_invalid_labels_rejected():
    with pytest.raises(ParameterError):
        addr(2, 3)  # first label may reach q
    addr(2, 2)
    with pytest.raises(ParameterError):
        addr(2, 0, 2)  # later labels stop at q-1


def test_height_examples():
    assert VertexAddress.origin(2).height() == 0
    assert addr(2, 0, 0, 0).height() == 3
    assert addr(2, 1).height() == -1
    heights = Counter(v.height() for v in sphere(VertexAddress.origin(2), 1, Ball(2, 1)))
    assert heights == {1: 1, -1: 2}


def test_omega_is_geodesic():
    for j in range(5):
        for k in range(5):
            assert distance(omega(3, j), omega(3, k)) == abs(j - k)
    assert omega(2, 0) == VertexAddress.origin(2)
    assert omega(2, 3).height() == 3


def test_sphere_volumes():
    assert sphere_volume(2, 0) == 1
    assert len(sphere(VertexAddress.origin(2), 1, Ball(2, 1))) == 3
    assert len(sphere(VertexAddress.origin(2), 2, Ball(2, 2))) == 6
    for center in [VertexAddress.origin(3), addr(3, 1), addr(3, 2, 0)]:
        assert len(sphere(center, 2, Ball(3, 4))) == 12


def test_sphere_truncation_error():
    with pytest.raises(TruncationError):
        sphere(addr(2, 1, 0), 3, Ball(2, 4))


def test_ball_count_matches_sphere_sum():
    for q in (2, 3):
        ball = Ball(q, 4)
        assert ball.vertex_count() == sum(
            sphere_volume(q, n) for n in range(5)
        )
        assert ball.vertex_count() == len(list(ball.vertices()))


def test_height_partition_of_spheres():
    # heights present in S(0,n) are exactly {-n, -n+2, ..., n} and the
    # counts over all heights add up to the sphere volume
    for q in (2, 3):
        for n in range(5):
            counts = Counter(
                v.height() for v in sphere(VertexAddress.origin(q), n, Ball(q, n))
            )
            assert sum(counts.values()) == sphere_volume(q, n)
            assert set(counts) == set(range(-n, n + 1, 2))


def test_neighbor_height_orientation():
    # exactly one neighbour one level up, q neighbours one level down
    for q in (2, 3):
        for vertex in Ball(q, 3):
            ups = [nb for nb in vertex.neighbors() if nb.height() == vertex.height() + 1]
            downs = [nb for nb in vertex.neighbors() if nb.height() == vertex.height() - 1]
            assert len(ups) == 1
            assert len(downs) == q


def _bfs_distance(q, radius, source, target):
    seen = {source: 0}
    queue = deque([source])
    while queue:
        vertex = queue.popleft()
        if vertex == target:
            return seen[vertex]
        for nb in vertex.neighbors():
            if nb.depth <= radius and nb not in seen:
                seen[nb] = seen[vertex] + 1
                queue.append(nb)
    raise AssertionError("target not reached")


def test_distance_agrees_with_bfs():
    rng = random.Random(7)
    ball = list(Ball(3, 4))
    for _ in range(25):
        x, y = rng.choice(ball), rng.choice(ball)
        d = distance(x, y)
        assert d == distance(y, x)
        assert d == _bfs_distance(3, 8, x, y)


def test_triangle_inequality():
    rng = random.Random(11)
    ball = list(Ball(2, 5))
    for _ in range(50):
        x, y, z = (rng.choice(ball) for _ in range(3))
        assert distance(x, z) <= distance(x, y) + distance(y, z)


def test_serialization_round_trip():
    vertex = addr(3, 0, 1, 0)
    assert str(vertex) == "0,1,0"
    assert VertexAddress.parse("0,1,0", 3) == vertex
    assert VertexAddress.parse("", 3) == VertexAddress.origin(3)


def test_canonical_enumeration_is_sorted():
    listed = list(Ball(2, 3))
    assert listed == sorted(listed, key=VertexAddress.sort_key)
