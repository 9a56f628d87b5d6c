"""Reidemeister rewriting and heuristic crossing reduction.

Moves are recorded as (kind, site) pairs whose sites refer to the
normalized diagram they are applied to, so a recorded trace replays
byte-for-byte.  Site encodings:

  R1-  (arc,)                 kink arc occupying adjacent slots
  R2-  (ci, cj)               the two crossings of a reducible bigon
  R3   (a1, a2, a3, ci, s)    triangle arcs in face order from the
                              face's minimal dart (ci, s)
  R1+  (arc, side, sign)      throw a kink into the face on the given
                              side of the arc (0 right, 1 left)
  R2+  (ca, sa, cb, sb)       two darts of one face; the first dart's
                              arc is pushed over the second's

A bigon reduces iff one strand passes over at both its corners, which
in dart terms is: the two dart slots have odd sum.  A triangle admits
R3 iff some edge is over at both its corners (the all-mixed triangle,
as in an alternating diagram, is rigid).

simplify() alternates a greedy R1-/R2- fixpoint with a bounded beam
over R3 (plus a few temporary R2+ insertions) hunting for new
reductions; it is sound but deliberately incomplete, so a nonzero
result means "inconclusive", never "knotted".
"""

from __future__ import annotations

from typing import NamedTuple

from .diagram import Crossing, LinkDiagram, make_crossing


class IllegalMove(ValueError):
    pass


class MoveRecord(NamedTuple):
    kind: str
    site: tuple


MOVE_KINDS = ("R1-", "R2-", "R3", "R1+", "R2+")

# crossing-count delta per move kind
MOVE_DELTA = {"R1-": -1, "R2-": -2, "R3": 0, "R1+": 1, "R2+": 2}


class SimplifyBudget(NamedTuple):
    depth: int = 12
    width: int = 64
    r2plus: int = 2
    max_expansions: int = 4000


EPISODE_BUDGET = SimplifyBudget(depth=4, width=12, r2plus=0, max_expansions=400)


# -- site enumeration ---------------------------------------------------


def _r1m_sites(d):
    # a lone 1-crossing circle has two kink arcs smoothing the same
    # crossing; keep one site per crossing
    by_crossing = {}
    for a in d.arcs:
        if d.is_loop_arc(a):
            continue
        ci, s1 = d.head(a)
        cj, s2 = d.tail(a)
        if ci == cj and (s1 - s2) % 4 in (1, 3):
            if a < by_crossing.get(ci, a + 1):
                by_crossing[ci] = a
    return sorted((a,) for a in by_crossing.values())


def _r2m_sites(d):
    pairs = set()
    for f in d.faces:
        if len(f.darts) != 2:
            continue
        d1, d2 = f.darts
        if d1[0] == d2[0] or d1[0] < 0:
            continue
        if (d1[1] + d2[1]) % 2 == 1:
            pairs.add((min(d1[0], d2[0]), max(d1[0], d2[0])))
    return sorted(pairs)


def _r3_sites(d):
    out = []
    for f in d.faces:
        if len(f.darts) != 3:
            continue
        (c1, s1), (c2, s2), (c3, s3) = f.darts
        if len({c1, c2, c3}) != 3:
            continue
        arcs = tuple(d.dart_arc(dt) for dt in f.darts)
        if len(set(arcs)) != 3:
            continue
        # an edge is over at both corners iff its dart slot is odd and
        # the previous dart's departure slot is odd as well
        slots = (s1, s2, s3)
        if any(slots[i] % 2 == 1 and (slots[i - 1] + 1) % 2 == 1 for i in range(3)):
            out.append(arcs + f.darts[0])
    return sorted(out)


def _r1p_sites(d):
    return sorted((a, side, sign) for a in d.arcs for side in (0, 1) for sign in (-1, 1))


def _r2p_sites(d):
    out = []
    for f in d.faces:
        if len(f.darts) < 2 or f.darts[0][0] < 0:
            continue
        for da in f.darts:
            for db in f.darts:
                if da == db or d.dart_arc(da) == d.dart_arc(db):
                    continue
                out.append(da + db)
    return sorted(out)


_SITES = {
    "R1-": _r1m_sites,
    "R2-": _r2m_sites,
    "R3": _r3_sites,
    "R1+": _r1p_sites,
    "R2+": _r2p_sites,
}


def find_moves(d, kind):
    """All applicable sites of one move kind, in sorted order."""
    try:
        fn = _SITES[kind]
    except KeyError:
        raise IllegalMove("unknown move kind %r" % (kind,)) from None
    return [MoveRecord(kind, site) for site in fn(d)]


# -- application --------------------------------------------------------


def _smooth(d, remove):
    """Delete the crossings in `remove`, joining under-in to under-out
    and over-in to over-out; strand classes that lose every crossing
    occurrence close up into circles."""
    parent = {}

    def find(a):
        while parent.get(a, a) != a:
            parent[a] = parent.get(parent[a], parent[a])
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra

    for ci in remove:
        cr = d.crossings[ci]
        union(cr.arcs[0], cr.arcs[2])
        union(cr.arcs[1], cr.arcs[3])
    kept = [c for i, c in enumerate(d.crossings) if i not in remove]
    new_crossings = [Crossing(c.sign, tuple(find(a) for a in c.arcs)) for c in kept]
    used = {a for c in new_crossings for a in c.arcs}
    reps = {find(a) for ci in remove for a in d.crossings[ci].arcs}
    loops = list(d.loops) + [r for r in sorted(reps) if r not in used]
    return LinkDiagram(new_crossings, loops).normalize()


def _apply_r1m(d, site):
    (a,) = site
    return _smooth(d, {d.head(a)[0]})


def _apply_r2m(d, site):
    return _smooth(d, set(site))


def _face_at(d, dart):
    for f in d.faces:
        if f.darts[0] == dart:
            return f
    raise IllegalMove("no face with minimal dart %r" % (dart,))


def _apply_r3(d, site):
    a1, a2, a3, ci0, s0 = site
    f = _face_at(d, (ci0, s0))
    if len(f.darts) != 3 or tuple(d.dart_arc(dt) for dt in f.darts) != (a1, a2, a3):
        raise IllegalMove("stale R3 site %r" % (site,))
    darts = f.darts
    edge = [d.dart_arc(dt) for dt in darts]
    crossings = [list(c.arcs) for c in d.crossings]
    for i in range(3):
        ci, si = darts[i]
        old = d.crossings[ci].arcs
        u_next = d.crossings[darts[(i + 1) % 3][0]].arcs[(darts[(i + 1) % 3][1] + 2) % 4]
        v_prev = d.crossings[darts[(i - 1) % 3][0]].arcs[(darts[(i - 1) % 3][1] + 3) % 4]
        crossings[ci][si] = v_prev
        crossings[ci][(si + 1) % 4] = u_next
        crossings[ci][(si + 2) % 4] = edge[i]
        crossings[ci][(si + 3) % 4] = edge[(i + 1) % 3]
        del old
    new = [Crossing(d.crossings[k].sign, tuple(c)) for k, c in enumerate(crossings)]
    return LinkDiagram(new, d.loops).normalize()


def _apply_r1p(d, site):
    a, side, sign = site
    m = max(d.arcs) + 1
    if d.is_loop_arc(a):
        pre = post = a
        crossings = list(d.crossings)
        loops = [x for x in d.loops if x != a]
    else:
        pre, post = a, m + 1
        hc, hs = d.head(a)
        crossings = list(d.crossings)
        arcs = list(crossings[hc].arcs)
        arcs[hs] = post
        crossings[hc] = Crossing(crossings[hc].sign, tuple(arcs))
        loops = list(d.loops)
    over = (sign > 0) if side == 0 else (sign < 0)
    if side == 0 and over:
        kink = Crossing(1, (m, m, post, pre))
    elif side == 0:
        kink = Crossing(-1, (pre, m, m, post))
    elif over:
        kink = Crossing(-1, (m, pre, post, m))
    else:
        kink = Crossing(1, (pre, post, m, m))
    return LinkDiagram(crossings + [kink], loops).normalize()


def _apply_r2p(d, site):
    ca, sa_slot, cb, sb_slot = site
    da, db = (ca, sa_slot), (cb, sb_slot)
    x, y = d.dart_arc(da), d.dart_arc(db)
    sa = 1 if d.head(x) == da else -1
    sb = 1 if d.head(y) == db else -1
    base = max(d.arcs)
    x_mid, x_post, y_mid, y_post = base + 1, base + 2, base + 3, base + 4

    crossings = list(d.crossings)
    for arc, repl in ((x, x_post), (y, y_post)):
        hc, hs = d.head(arc)
        arcs = list(crossings[hc].arcs)
        arcs[hs] = repl
        crossings[hc] = Crossing(crossings[hc].sign, tuple(arcs))

    # order along each strand: x passes L first iff it runs with its
    # dart, y passes U first iff it runs with its dart
    if sa == 1:
        l_over, u_over = (x, x_mid), (x_mid, x_post)
    else:
        u_over, l_over = (x, x_mid), (x_mid, x_post)
    if sb == 1:
        u_under, l_under = (y, y_mid), (y_mid, y_post)
    else:
        l_under, u_under = (y, y_mid), (y_mid, y_post)
    cross_u = make_crossing(sa * sb, u_under[0], u_under[1], u_over[0], u_over[1])
    cross_l = make_crossing(-sa * sb, l_under[0], l_under[1], l_over[0], l_over[1])
    return LinkDiagram(crossings + [cross_u, cross_l], d.loops).normalize()


_APPLY = {
    "R1-": _apply_r1m,
    "R2-": _apply_r2m,
    "R3": _apply_r3,
    "R1+": _apply_r1p,
    "R2+": _apply_r2p,
}


def apply_move(d, m):
    """Apply a MoveRecord whose site is currently legal; the result is
    normalized, so consecutive records form a replayable trace."""
    if m.kind not in _APPLY:
        raise IllegalMove("unknown move kind %r" % (m.kind,))
    if not any(m.site == rec.site for rec in find_moves(d, m.kind)):
        raise IllegalMove("site %r is not a legal %s site" % (m.site, m.kind))
    return _APPLY[m.kind](d, m.site)


def replay(d, trace):
    """Re-apply a recorded trace, validating every step."""
    cur = d.normalize()
    for m in trace:
        cur = apply_move(cur, m)
    return cur


# -- reduction strategy --------------------------------------------------


def _greedy(cur, trace):
    while True:
        sites = _r1m_sites(cur)
        if sites:
            trace.append(MoveRecord("R1-", sites[0]))
            cur = _apply_r1m(cur, sites[0])
            continue
        sites = _r2m_sites(cur)
        if sites:
            trace.append(MoveRecord("R2-", sites[0]))
            cur = _apply_r2m(cur, sites[0])
            continue
        return cur


def _beam_hunt(start, budget, spent):
    """Search R3/R2+ sequences (each followed by a greedy fixpoint) for
    a strict crossing reduction below start; returns (trace, diagram)
    for the first one found in deterministic order, else None."""
    target = start.crossing_count
    frontier = [(start, (), 0)]
    seen = {start.serialize()}
    for _ in range(budget.depth):
        children = []
        for node, path, used in frontier:
            moves = [MoveRecord("R3", s) for s in _r3_sites(node)]
            if used < budget.r2plus:
                moves += [MoveRecord("R2+", s) for s in _r2p_sites(node)]
            for mv in moves:
                if spent[0] >= budget.max_expansions:
                    return None
                spent[0] += 1
                child = _APPLY[mv.kind](node, mv.site)
                gtrace = [mv]
                child = _greedy(child, gtrace)
                spent[0] += len(gtrace) - 1
                key = child.serialize()
                if key in seen:
                    continue
                seen.add(key)
                full = path + tuple(gtrace)
                if child.crossing_count < target:
                    return full, child
                children.append((child, full, used + (1 if mv.kind == "R2+" else 0)))
        children.sort(key=lambda t: (t[0].crossing_count, t[0].serialize()))
        frontier = children[: budget.width]
        if not frontier:
            return None
    return None


def simplify(d, budget=None):
    """Reduce crossings as far as the budget allows.

    Returns (diagram, trace); replaying the trace from d.normalize()
    reproduces the returned diagram exactly.  Component count is
    preserved.  Budget exhaustion returns the best diagram found.
    """
    if budget is None:
        budget = SimplifyBudget()
    trace = []
    cur = _greedy(d.normalize(), trace)
    spent = [0]
    while cur.crossing_count > 0:
        hit = _beam_hunt(cur, budget, spent)
        if hit is None:
            break
        path, cur = hit
        trace.extend(path)
        cur = _greedy(cur, trace)
    return cur, trace
