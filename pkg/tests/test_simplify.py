import numpy as np
import pytest

from conftest import random_braid_diagram
from oracles import jones

from ribbonwalk.diagram import from_braid, parse_pd
from ribbonwalk.generators import square_knot, trefoil, unknot
from ribbonwalk.simplify import (
    MOVE_DELTA,
    MOVE_KINDS,
    IllegalMove,
    SimplifyBudget,
    apply_move,
    find_moves,
    replay,
    simplify,
)


def test_kink_has_r1_site():
    d = from_braid((2, (1,)))
    sites = find_moves(d, "R1-")
    assert len(sites) == 1
    d2 = apply_move(d, sites[0])
    assert d2.crossing_count == 0
    assert d2.component_count() == 1


def test_trefoil_has_no_reducing_site():
    d = trefoil()
    assert find_moves(d, "R1-") == []
    assert find_moves(d, "R2-") == []


def test_r2_pair_cancels():
    d = from_braid((3, (1, -1)))
    sites = find_moves(d, "R2-")
    assert sites
    d2 = apply_move(d, sites[0])
    assert d2.crossing_count == 0


def test_r2_requires_one_strand_over():
    # sigma_1 sigma_1 bigons are clasps, not reducible bigons
    d = from_braid((2, (1, 1)))
    assert find_moves(d, "R2-") == []


def test_move_kind_table():
    assert set(MOVE_DELTA) == set(MOVE_KINDS)
    with pytest.raises(IllegalMove):
        find_moves(trefoil(), "R4")


def test_moves_preserve_components_and_writhe_law(rng):
    for _ in range(60):
        d = random_braid_diagram(rng)
        kind = MOVE_KINDS[int(rng.integers(len(MOVE_KINDS)))]
        sites = find_moves(d, kind)
        if not sites:
            continue
        m = sites[int(rng.integers(len(sites)))]
        d2 = apply_move(d, m)
        assert d2.component_count() == d.component_count()
        assert d2.crossing_count - d.crossing_count == MOVE_DELTA[kind]
        if kind == "R1-":
            ci, _ = d.head(m.site[0])
            assert d2.writhe == d.writhe - d.crossings[ci].sign
        elif kind == "R1+":
            assert d2.writhe == d.writhe + m.site[2]
        else:
            assert d2.writhe == d.writhe


def test_moves_preserve_jones(rng):
    hits = 0
    while hits < 25:
        d = random_braid_diagram(rng, max_strands=4, max_letters=8)
        if d.crossing_count > 9 or d.component_count() != 1:
            continue
        kind = MOVE_KINDS[int(rng.integers(len(MOVE_KINDS)))]
        sites = find_moves(d, kind)
        if not sites:
            continue
        d2 = apply_move(d, sites[int(rng.integers(len(sites)))])
        assert jones(d2) == jones(d), kind
        hits += 1


def test_stale_site_raises():
    d = from_braid((3, (1, -1)))
    m = find_moves(d, "R2-")[0]
    d2 = apply_move(d, m)
    with pytest.raises(IllegalMove):
        apply_move(d2, m)


def test_simplify_trefoil_stays():
    d2, trace = simplify(trefoil())
    assert d2.crossing_count == 3
    assert jones(d2) == jones(trefoil())


def test_simplify_square_knot_is_six():
    d2, _ = simplify(square_knot())
    assert d2.crossing_count == 6


def test_simplify_unknots_braid_garbage():
    # trivial braid words dressed up with conjugation
    for spec in ((2, (1, -1)), (3, (1, 2, -2, -1)), (4, (1, -2, 3, -3, 2, -1))):
        d2, _ = simplify(from_braid(spec))
        assert d2.is_unlink_form()


def test_simplify_inflated_unknot(rng):
    for trial in range(10):
        d = unknot()
        for _ in range(int(rng.integers(2, 6))):
            kind = ("R1+", "R2+")[int(rng.integers(2))]
            sites = find_moves(d, kind) or find_moves(d, "R1+")
            d = apply_move(d, sites[int(rng.integers(len(sites)))])
        d2, trace = simplify(d)
        assert d2.is_unlink_form()
        assert d2.component_count() == 1


def test_replay_reproduces_simplify(rng):
    for _ in range(15):
        d = random_braid_diagram(rng)
        d2, trace = simplify(d)
        assert replay(d.normalize(), trace) == d2


def test_replay_rejects_wrong_site():
    d = from_braid((3, (1, -1)))
    m = find_moves(d.normalize(), "R2-")[0]
    bad = m._replace(site=(m.site[0] + 7, m.site[1] + 7))
    with pytest.raises(IllegalMove):
        replay(d.normalize(), [bad])


def test_budget_limits_effort():
    d = from_braid((4, (1, -2, 3, -3, 2, -1)))
    tiny = SimplifyBudget(depth=0, width=1, r2plus=0, max_expansions=1)
    d2, _ = simplify(d, tiny)
    full, _ = simplify(d)
    assert full.crossing_count <= d2.crossing_count


def test_simplify_never_raises_crossing_count(rng):
    for _ in range(20):
        d = random_braid_diagram(rng)
        d2, _ = simplify(d)
        assert d2.crossing_count <= d.crossing_count
        assert d2.component_count() == d.component_count()
