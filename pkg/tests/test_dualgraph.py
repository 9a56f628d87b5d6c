import pytest

from conftest import random_braid_diagram

from ribbonwalk.diagram import UnknownArc, from_braid
from ribbonwalk.dualgraph import build_dual, faces_of_arc
from ribbonwalk.generators import figure_eight, square_knot, trefoil


def test_trefoil_dual_has_five_nodes():
    d = trefoil()
    g = build_dual(d)
    assert g.node_count == 5


def test_every_arc_separates_its_two_faces():
    d = square_knot()
    g = build_dual(d)
    for a in d.arcs:
        left, right = faces_of_arc(g, a)
        assert g.left_face(a) == left
        assert g.right_face(a) == right
        assert g.other_face(a, left) == right
        assert g.other_face(a, right) == left
        assert a in g.arcs_of_face(left)
        assert a in g.arcs_of_face(right)


def test_other_face_rejects_nonincident():
    d = trefoil()
    g = build_dual(d)
    a = d.arcs[0]
    left, right = faces_of_arc(g, a)
    other = next(f for f in range(g.node_count) if f not in (left, right))
    with pytest.raises(UnknownArc):
        g.other_face(a, other)


def test_face_components_cover_diagram():
    d = square_knot()
    g = build_dual(d)
    touched = set()
    for f in range(g.node_count):
        touched.update(g.components_of_face(f))
    assert touched == set(range(d.component_count()))


def test_build_is_deterministic():
    d = figure_eight()
    g1, g2 = build_dual(d), build_dual(d)
    assert g1.node_count == g2.node_count
    for f in range(g1.node_count):
        assert g1.arcs_of_face(f) == g2.arcs_of_face(f)
    for a in d.arcs:
        assert faces_of_arc(g1, a) == faces_of_arc(g2, a)


def test_kink_arc_can_bound_one_face_twice():
    d = from_braid((2, (1,)))
    g = build_dual(d)
    assert g.node_count == d.crossing_count + 2
    for a in d.arcs:
        left, right = faces_of_arc(g, a)
        assert 0 <= left < g.node_count
        assert 0 <= right < g.node_count


def test_random_duals_consistent(rng):
    for _ in range(30):
        d = random_braid_diagram(rng)
        g = build_dual(d)
        # disconnected pieces share one outer node on the sphere
        assert g.node_count == len(d.faces) - (len(d.pieces) - 1)
        for f in range(g.node_count):
            for a in g.arcs_of_face(f):
                assert f in faces_of_arc(g, a)
