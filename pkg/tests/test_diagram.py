import numpy as np
import pytest
from hypothesis import given, settings

from conftest import braid_words, random_braid_diagram
from oracles import determinant, jones

from ribbonwalk.diagram import (
    BraidWord,
    Crossing,
    InconsistentArcs,
    LinkDiagram,
    MalformedPd,
    OddStrandsForPlat,
    PdError,
    from_braid,
    make_crossing,
    parse_pd,
    serialize_pd,
)
from ribbonwalk.generators import figure_eight, square_knot, trefoil, unknot

TREFOIL_PD = "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]"


def test_parse_trefoil():
    d = parse_pd(TREFOIL_PD)
    assert d.crossing_count == 3
    assert d.component_count() == 1
    assert d.writhe == 3


def test_parse_serialize_round_trip():
    d = parse_pd(TREFOIL_PD)
    assert parse_pd(serialize_pd(d)) == d.normalize()


def test_serialize_is_normal_form():
    d = parse_pd(TREFOIL_PD)
    assert serialize_pd(d) == serialize_pd(d.normalize())
    assert d.normalize() == d.normalize().normalize()


def test_parse_rejects_garbage():
    with pytest.raises(PdError):
        parse_pd("X[1,2,3] X[4,5,6,7]")
    with pytest.raises(PdError):
        parse_pd("")
    with pytest.raises(PdError):
        parse_pd("hello world")


def test_parse_rejects_dangling_arc():
    # arc 9 appears once
    with pytest.raises(InconsistentArcs):
        LinkDiagram([(1, (1, 5, 2, 4)), (1, (3, 1, 4, 6)), (1, (5, 3, 9, 2))])


def test_parse_rejects_bad_orientation():
    # both endpoints of arc 2 are incoming
    with pytest.raises(InconsistentArcs):
        LinkDiagram([(1, (1, 2, 2, 1))])


def test_crossing_slots():
    c = make_crossing(1, 10, 11, 12, 13)
    assert c.arcs[0] == 10 and c.arcs[2] == 11
    assert c.arcs[c.over_in_slot] == 12
    assert c.arcs[c.over_out_slot] == 13
    m = make_crossing(-1, 10, 11, 12, 13)
    assert m.arcs[0] == 10 and m.arcs[2] == 11
    assert m.arcs[m.over_in_slot] == 12
    assert {c.over_in_slot, c.over_out_slot} == {1, 3}
    assert {m.over_in_slot, m.over_out_slot} == {1, 3}


def test_loops_are_components_and_pieces():
    d = LinkDiagram((), (1, 2, 3))
    assert d.component_count() == 3
    assert d.is_unlink_form()
    assert d.zero_crossing_circles == 3
    with pytest.raises(InconsistentArcs):
        LinkDiagram((), (1, 1))


def test_loop_and_crossing_arc_clash():
    with pytest.raises(InconsistentArcs):
        LinkDiagram([(1, (1, 5, 2, 4)), (1, (3, 1, 4, 6)), (1, (5, 3, 6, 2))], (4,))


def test_writhe_of_named_knots():
    assert trefoil().writhe == 3
    assert from_braid((2, (-1, -1, -1))).writhe == -3
    assert figure_eight().writhe == 0
    assert square_knot().writhe == 0


def test_successor_walk_closes():
    d = square_knot()
    for comp in d.components:
        a = comp[0]
        seen = [a]
        b = d.successor(a)
        while b != a:
            seen.append(b)
            b = d.successor(b)
        assert sorted(seen) == sorted(comp)


def test_darts_and_arcs_agree():
    d = figure_eight()
    for a in d.arcs:
        assert d.dart_arc(d.plus_dart(a)) == a
        assert d.dart_arc(d.minus_dart(a)) == a
        ci, s = d.head(a)
        assert d.crossings[ci].is_in_slot(s)
        cj, s2 = d.tail(a)
        assert not d.crossings[cj].is_in_slot(s2)


def test_face_count_small_knots():
    # connected diagram: f = c + 2
    for d in (trefoil(), figure_eight(), square_knot()):
        assert len(d.faces) == d.crossing_count + 2


def test_hopf_link():
    d = from_braid((2, (1, 1)))
    assert d.component_count() == 2
    assert d.crossing_count == 2
    assert d.writhe == 2


def test_braid_word_make_rejects_bad_letters():
    with pytest.raises(ValueError):
        BraidWord.make(3, (0,))
    with pytest.raises(ValueError):
        BraidWord.make(3, (3,))
    with pytest.raises(ValueError):
        BraidWord.make(1, (1,))


def test_braid_inverse_round_trip():
    w = BraidWord.make(3, (1, -2, 1))
    wi = w.inverse()
    assert wi.letters == (-1, 2, -1)
    assert wi.inverse() == w


def test_plat_needs_even_strands():
    with pytest.raises(OddStrandsForPlat):
        from_braid((3, (1, 2)), closure="plat")


def test_unknown_closure():
    with pytest.raises(ValueError):
        from_braid((2, (1,)), closure="weird")


@given(braid_words())
@settings(max_examples=60, deadline=None)
def test_trace_closure_writhe_is_letter_sum(w):
    d = from_braid(w)
    assert d.writhe == sum(1 if x > 0 else -1 for x in w.letters)


@given(braid_words())
@settings(max_examples=60, deadline=None)
def test_normalize_idempotent_and_stable(w):
    d = from_braid(w)
    n1 = d.normalize()
    assert n1 == n1.normalize()
    if n1.crossings or n1.loops:
        assert parse_pd(serialize_pd(d)) == n1
    arcs = [a for c in n1.crossings for a in c.arcs]
    if arcs:
        assert min(arcs) == 1
        assert max(arcs) == 2 * n1.crossing_count


def test_jones_distinguishes_named_knots():
    vals = {
        "unknot": tuple(sorted(jones(unknot()).items())),
        "trefoil": tuple(sorted(jones(trefoil()).items())),
        "fig8": tuple(sorted(jones(figure_eight()).items())),
        "square": tuple(sorted(jones(square_knot()).items())),
    }
    assert len(set(vals.values())) == 4
    assert determinant(trefoil()) == 3
    assert determinant(figure_eight()) == 5
    assert determinant(square_knot()) == 9


def test_face_euler_count_random(rng):
    for _ in range(40):
        d = random_braid_diagram(rng)
        pieces = [p for p in d.pieces if p[0] >= 0]
        for pi0, piece in enumerate(d.pieces):
            if piece[0] < 0:
                continue
            v = len(piece)
            arcs = set()
            for ci in piece:
                arcs.update(d.crossings[ci].arcs)
            f = sum(1 for face in d.faces if face.piece == pi0)
            assert f == len(arcs) - v + 2
        if len(pieces) == 1 and not d.loops:
            assert len(d.faces) == d.crossing_count + 2
