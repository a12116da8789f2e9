"""Triangular-lattice geometry and object validation."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hullsim.lattice import (
    DIRS,
    ObjectError,
    ObjectShape,
    are_adjacent,
    boundary,
    clockwise_boundary_walk,
    delta,
    direction_between,
    has_width1_tunnel,
    is_connected,
    is_simply_connected,
    neighbor,
    neighbors,
    next_plane,
    opposite,
    parse_object_text,
    plane_to_dir,
    region_walk,
    tunnel_pinch_nodes,
    walk_step,
)

nodes_st = st.tuples(st.integers(-50, 50), st.integers(-50, 50))
dirs_st = st.integers(0, 5)


def test_direction_basis():
    assert DIRS == ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))
    assert [opposite(g) for g in range(6)] == [3, 4, 5, 0, 1, 2]


def test_delta_table():
    # Row i is the base row rotated by i; one +1..-1 wave per direction.
    assert delta(0) == (1, 1, 0, -1, -1, 0)
    assert delta(1) == (0, 1, 1, 0, -1, -1)
    assert delta(3) == (-1, -1, 0, 1, 1, 0)
    for i in range(6):
        assert sum(delta(i)) == 0
        assert sorted(delta(i)) == [-1, -1, 0, 0, 1, 1]


def test_plane_directions():
    assert [plane_to_dir(h) for h in range(6)] == [4, 5, 0, 1, 2, 3]
    assert [next_plane(h) for h in range(6)] == [1, 2, 3, 4, 5, 0]


@given(nodes_st, dirs_st)
def test_neighbor_roundtrip(v, g):
    w = neighbor(v, g)
    assert are_adjacent(v, w)
    assert direction_between(v, w) == g
    assert neighbor(w, opposite(g)) == v


@given(nodes_st, dirs_st)
def test_delta_is_antisymmetric(v, i):
    assert delta(opposite(i)) == tuple(-x for x in delta(i))


@given(nodes_st)
def test_six_distinct_neighbors(v):
    ns = neighbors(v)
    assert len(set(ns)) == 6
    assert v not in ns


def test_direction_between_rejects_non_neighbors():
    with pytest.raises(ValueError):
        direction_between((0, 0), (2, 0))
    with pytest.raises(ValueError):
        direction_between((0, 0), (0, 0))


def test_boundary_of_single_node():
    assert boundary({(0, 0)}) == set(neighbors((0, 0)))


def test_boundary_excludes_interior():
    tri = {(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)}
    b = boundary(tri)
    assert b.isdisjoint(tri)
    for v in b:
        assert any(w in tri for w in neighbors(v))


def test_connectivity():
    assert is_connected({(0, 0), (1, 0), (2, 0)})
    assert not is_connected({(0, 0), (2, 0)})
    assert is_connected(set())


def test_simply_connected_detects_hole():
    ring = set(neighbors((0, 0)))
    assert is_connected(ring)
    assert not is_simply_connected(ring)
    assert is_simply_connected(ring | {(0, 0)})


def test_width1_tunnel_detection():
    # Two close parallel bars pinch the free node between their tips.
    bar = {(x, 0) for x in range(4)} | {(x, 2) for x in range(4)}
    bridge = {(4, 0), (4, 1), (4, 2)}
    u_shape = bar | bridge
    assert is_simply_connected(u_shape)
    assert has_width1_tunnel(u_shape)
    pinches = tunnel_pinch_nodes(u_shape)
    assert pinches
    for v in pinches:
        assert v not in u_shape
        assert any(w in u_shape for w in neighbors(v))


def test_open_shapes_have_no_tunnel():
    assert not has_width1_tunnel({(0, 0)})
    assert not has_width1_tunnel({(x, 0) for x in range(6)})


def test_object_shape_validation():
    with pytest.raises(ObjectError):
        ObjectShape(set())
    with pytest.raises(ObjectError):
        ObjectShape({(0, 0), (3, 3)})
    with pytest.raises(ObjectError):
        ObjectShape(set(neighbors((0, 0))))
    o = ObjectShape({(0, 0), (1, 0)})
    assert (0, 0) in o and (5, 5) not in o
    assert len(o) == 2
    assert o.boundary_nodes == frozenset(boundary({(0, 0), (1, 0)}))


def test_walk_step_hugs_the_wall():
    occupied = {(0, 0)}
    # From (1, 0) the object sits in direction 3; first free clockwise
    # back-off from the wall is direction 2.
    assert walk_step(occupied, (1, 0)) == 2
    with pytest.raises(ValueError):
        walk_step(occupied, (3, 3))


def test_region_walk_single_node():
    ring = region_walk(frozenset({(0, 0)}), min(boundary({(0, 0)})))
    assert len(ring) == 6
    assert set(ring) == set(neighbors((0, 0)))
    # Consecutive ring nodes are adjacent, including the wrap-around.
    for a, b in zip(ring, ring[1:] + ring[:1]):
        assert are_adjacent(a, b)


def test_clockwise_boundary_walk_covers_boundary():
    o = ObjectShape({(0, 0), (1, 0), (0, 1)})
    start = min(o.boundary_nodes)
    walk = clockwise_boundary_walk(o, start)
    assert walk[0] == start
    assert set(walk) == set(o.boundary_nodes)
    with pytest.raises(ValueError):
        clockwise_boundary_walk(o, (0, 0))


def test_parse_object_text():
    text = "0 0\n1 0  # comment\n# full comment line\n\n2 0\n"
    assert parse_object_text(text) == {(0, 0), (1, 0), (2, 0)}


@pytest.mark.parametrize(
    "bad",
    ["0\n", "0 0 0\n", "a b\n", "0 0\n0 0\n"],
)
def test_parse_object_text_rejects(bad):
    with pytest.raises(ObjectError):
        parse_object_text(bad)
