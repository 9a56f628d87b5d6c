"""Fixed-shape matrix encoding of a search state.

A state becomes four N x N integer matrices (N bounds the dual node
count).  Entries are arbitrary-precision, which lets G pack a whole
list of arc records per face pair instead of truncating anything:

  G[l][r]  all arcs whose left/right faces are l and r, as a count
           followed by 7-digit records (arc, tail crossing, tail slot,
           head crossing, head slot, head sign bit, loop flag) in a
           fixed radix
  C[i][j]  1 when faces i and j touch a common link component
  B        the active band's walk: B[f0][f0] holds the start arc and
           step k from face f to face f' stores +-(k * RADIX + arc),
           positive for over, negative for under
  T        the signed twist count, broadcast

The matrices determine the diagram and the active band exactly;
decode_state inverts encode_state bit for bit.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .band import BandState, PartialBand, new_state
from .diagram import Crossing, LinkDiagram, PdError
from .dualgraph import build_dual

RADIX = 1 << 20


class TooManyFaces(ValueError):
    pass


class UndecodableMatrix(ValueError):
    pass


class GcbtState(NamedTuple):
    g: np.ndarray
    c: np.ndarray
    b: np.ndarray
    t: np.ndarray

    @property
    def size(self):
        return self.g.shape[0]


def _pack(records):
    value = len(records)
    for rec in records:
        for field in rec:
            value = value * RADIX + field
    return value


def _unpack(value):
    if value == 0:
        return []
    digits = []
    while value:
        value, d = divmod(value, RADIX)
        digits.append(d)
    digits.reverse()
    count = digits[0]
    if len(digits) != 1 + 7 * count:
        raise UndecodableMatrix("record block has %d digits for count %d" % (len(digits), count))
    recs = []
    for i in range(count):
        recs.append(tuple(digits[1 + 7 * i : 8 + 7 * i]))
    return recs


def encode_state(s, n):
    """Encode a BandState into GcbtState with N = n faces."""
    d = s.diagram
    g = s.dual
    if g.node_count > n:
        raise TooManyFaces("dual has %d nodes, budget %d" % (g.node_count, n))
    if d.arcs and max(d.arcs) >= RADIX:
        raise TooManyFaces("arc ids exceed the packing radix")

    G = np.zeros((n, n), dtype=object)
    per_pair = {}
    for a in d.arcs:
        left, right = g.left_face(a), g.right_face(a)
        if d.is_loop_arc(a):
            rec = (a, 0, 0, 0, 0, 0, 1)
        else:
            tci, tsl = d.tail(a)
            hci, hsl = d.head(a)
            bit = 1 if d.crossings[hci].sign > 0 else 0
            rec = (a, tci, tsl, hci, hsl, bit, 0)
        per_pair.setdefault((left, right), []).append(rec)
    for (l, r), recs in per_pair.items():
        G[l][r] = _pack(sorted(recs))

    C = np.zeros((n, n), dtype=object)
    comps = [frozenset(g.components_of_face(f)) for f in range(g.node_count)]
    for i in range(g.node_count):
        for j in range(g.node_count):
            if comps[i] & comps[j]:
                C[i][j] = 1

    B = np.zeros((n, n), dtype=object)
    t_val = 0
    band = s.active_band
    if band is not None:
        B[band.face_path[0]][band.face_path[0]] = band.start_arc
        for k, (arc, omega) in enumerate(band.crossings_log, start=1):
            f_prev, f_next = band.face_path[k - 1], band.face_path[k]
            B[f_prev][f_next] = omega * (k * RADIX + arc)
        t_val = band.twist_count
    T = np.full((n, n), t_val, dtype=object)
    return GcbtState(G, C, B, T)


def decode_state(gc):
    """Rebuild the (diagram, active band) pair encoded by a GcbtState.

    The remaining BandState fields (history, budgets) are not part of
    the encoding; they come back empty."""
    n = gc.size
    crossings = {}
    signs = {}
    loops = []

    def place(ci, sl, arc):
        slots = crossings.setdefault(ci, [None] * 4)
        if not 0 <= sl < 4 or slots[sl] is not None:
            raise UndecodableMatrix("slot clash at crossing %d slot %d" % (ci, sl))
        slots[sl] = arc

    for l in range(n):
        for r in range(n):
            for arc, tci, tsl, hci, hsl, bit, loop in _unpack(int(gc.g[l][r])):
                if loop:
                    loops.append(arc)
                    continue
                place(tci, tsl, arc)
                place(hci, hsl, arc)
                want = 1 if bit else -1
                if signs.setdefault(hci, want) != want:
                    raise UndecodableMatrix("conflicting signs at crossing %d" % hci)
    if crossings and sorted(crossings) != list(range(len(crossings))):
        raise UndecodableMatrix("crossing indices are not contiguous")
    cr = []
    for ci in range(len(crossings)):
        slots = crossings[ci]
        if any(x is None for x in slots) or ci not in signs:
            raise UndecodableMatrix("crossing %d is underdetermined" % ci)
        cr.append(Crossing(signs[ci], tuple(slots)))
    try:
        d = LinkDiagram(cr, sorted(loops))
    except PdError as e:
        raise UndecodableMatrix("matrices do not describe a diagram: %s" % e)
    dual = build_dual(d)

    band = None
    starts = [(f, int(gc.b[f][f])) for f in range(n) if gc.b[f][f] != 0]
    if starts:
        if len(starts) > 1:
            raise UndecodableMatrix("band has %d start cells" % len(starts))
        f0, start_arc = starts[0]
        steps = {}
        for i in range(n):
            for j in range(n):
                v = int(gc.b[i][j])
                if v == 0 or i == j:
                    continue
                k, arc = divmod(abs(v), RADIX)
                if k in steps:
                    raise UndecodableMatrix("duplicate band step %d" % k)
                steps[k] = (i, j, arc, 1 if v > 0 else -1)
        face_path = [f0]
        log = []
        for k in range(1, len(steps) + 1):
            if k not in steps:
                raise UndecodableMatrix("band walk misses step %d" % k)
            i, j, arc, omega = steps[k]
            if i != face_path[-1]:
                raise UndecodableMatrix("band step %d starts off-path" % k)
            face_path.append(j)
            log.append((arc, omega))
        band = PartialBand(
            start_arc, tuple(face_path), tuple(log), int(gc.t[0][0]), frozenset(a for a, _ in log)
        )
    elif np.any(gc.b != 0):
        raise UndecodableMatrix("band walk without a start cell")

    return BandState(
        diagram=d,
        dual=dual,
        active_band=band,
        bands_completed=(),
        steps_taken=0,
        initial=d,
        pre_trace=(),
    )
