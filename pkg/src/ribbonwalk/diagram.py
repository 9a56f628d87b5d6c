"""Oriented link diagrams as combinatorial maps.

A diagram is a collection of signed 4-valent vertices (crossings) glued
along arcs, plus zero or more crossingless circles.  Crossing slots are
numbered 0..3 counterclockwise: slot 0 is the incoming under-strand and
slot 2 the outgoing under-strand.  The sign is +1 when the over-strand
enters at slot 3 and -1 when it enters at slot 1, which agrees with the
usual right-hand convention det[over_dir, under_dir] > 0 for +1.

Crossingless circles ("free loops") carry real arc ids so they can take
part in the face structure: each circle bounds a one-dart face on either
side.  Arc orientation is explicit; every non-loop arc has exactly one
head (an in-slot occurrence) and one tail (an out-slot occurrence).

Faces are traced with the dart rule "arrive into slot s, leave along
slot (s+1) mod 4", which puts the face on the right-hand side of every
dart on its boundary.  A dart is identified by its destination (crossing
index, slot); loop darts are (-arc, side) with side 0 the right of the
(conventional) circle orientation.  Per connected piece the traced face
count must satisfy Euler's formula F = E - V + 2; violations raise
NonPlanar, which is the self-check that guards every rewrite built on
top of this module.
"""

from __future__ import annotations

import re
from typing import Iterable, NamedTuple


class PdError(ValueError):
    """Base class for diagram construction failures."""


class MalformedPd(PdError):
    pass


class InconsistentArcs(PdError):
    pass


class NonPlanar(PdError):
    pass


class OddStrandsForPlat(PdError):
    pass


class UnknownArc(KeyError):
    pass


class Crossing(NamedTuple):
    sign: int
    arcs: tuple

    @property
    def over_in_slot(self):
        return 3 if self.sign > 0 else 1

    @property
    def over_out_slot(self):
        return 1 if self.sign > 0 else 3

    def in_slots(self):
        return (0, self.over_in_slot)

    def is_in_slot(self, slot):
        return slot == 0 or slot == self.over_in_slot


def make_crossing(sign, under_in, under_out, over_in, over_out):
    """Assemble a Crossing from strand roles instead of raw slots."""
    if sign > 0:
        return Crossing(1, (under_in, over_out, under_out, over_in))
    return Crossing(-1, (under_in, over_in, under_out, over_out))


# Strand continuation inside one crossing: the dart entering slot s
# leaves at the slot of the same strand on the far side.
_OPPOSITE_SLOT = {0: 2, 2: 0, 1: 3, 3: 1}


class Face(NamedTuple):
    darts: tuple      # destination darts, rotated so the smallest is first
    arcs: tuple       # sorted distinct arc ids on the boundary
    piece: int        # index of the connected piece this face belongs to


class LinkDiagram:
    """Immutable oriented link diagram.

    crossings: iterable of Crossing (or (sign, arcs) pairs).
    loops: arc ids of crossingless circles.

    Construction validates the arc pairing (every non-loop arc exactly
    one head and one tail) and planarity (per-piece Euler count).
    """

    def __init__(self, crossings=(), loops=(), validate=True):
        self.crossings = tuple(
            Crossing(int(c[0]), tuple(int(a) for a in c[1])) for c in crossings
        )
        self.loops = tuple(sorted(int(a) for a in loops))
        self._build()
        if validate:
            self._validate_faces()

    # -- construction ------------------------------------------------

    def _build(self):
        arc_slots = {}
        for ci, cr in enumerate(self.crossings):
            if cr.sign not in (1, -1):
                raise MalformedPd("crossing sign must be +1 or -1, got %r" % (cr.sign,))
            if len(cr.arcs) != 4:
                raise MalformedPd("crossing needs 4 arc slots, got %r" % (cr.arcs,))
            for s, a in enumerate(cr.arcs):
                if a <= 0:
                    raise MalformedPd("arc ids must be positive, got %r" % (a,))
                arc_slots.setdefault(a, []).append((ci, s))
        if len(set(self.loops)) != len(self.loops):
            raise InconsistentArcs("duplicate circle arc id")
        for a in self.loops:
            if a <= 0:
                raise MalformedPd("arc ids must be positive, got %r" % (a,))
            if a in arc_slots:
                raise InconsistentArcs("arc %d is both a circle and a crossing arc" % a)

        heads, tails = {}, {}
        for a, occ in arc_slots.items():
            if len(occ) != 2:
                raise InconsistentArcs("arc %d appears %d times, want 2" % (a, len(occ)))
            r0 = self.crossings[occ[0][0]].is_in_slot(occ[0][1])
            r1 = self.crossings[occ[1][0]].is_in_slot(occ[1][1])
            if r0 and not r1:
                heads[a], tails[a] = occ[0], occ[1]
            elif r1 and not r0:
                heads[a], tails[a] = occ[1], occ[0]
            else:
                raise InconsistentArcs(
                    "arc %d is %s at both endpoints" % (a, "incoming" if r0 else "outgoing")
                )

        self._arc_slots = arc_slots
        self._heads = heads
        self._tails = tails
        self.arcs = tuple(sorted(arc_slots)) + self.loops

        # successor along the component orientation
        succ = {}
        for a, (ci, s) in heads.items():
            cr = self.crossings[ci]
            out = 2 if s == 0 else cr.over_out_slot
            succ[a] = cr.arcs[out]
        self._succ = succ

        comps = []
        seen = set()
        for a in sorted(arc_slots):
            if a in seen:
                continue
            cyc = []
            b = a
            while b not in seen:
                seen.add(b)
                cyc.append(b)
                b = succ[b]
            if b != a:
                raise InconsistentArcs("arc successor walk does not close at %d" % a)
            comps.append(tuple(cyc))
        comps.extend((a,) for a in self.loops)
        self.components = tuple(comps)
        self._component_of = {}
        for k, comp in enumerate(comps):
            for a in comp:
                self._component_of[a] = k

        # connected pieces of the underlying 4-valent graph
        n = len(self.crossings)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, occ in arc_slots.items():
            r0, r1 = find(occ[0][0]), find(occ[1][0])
            if r0 != r1:
                parent[r1] = r0
        groups = {}
        for ci in range(n):
            groups.setdefault(find(ci), []).append(ci)
        piece_list = [tuple(g) for g in groups.values()]
        piece_list.extend((-a,) for a in self.loops)  # loops are their own pieces

        def piece_key(p):
            if p[0] < 0:
                return -p[0]
            return min(min(self.crossings[ci].arcs) for ci in p)

        piece_list.sort(key=piece_key)
        self.pieces = tuple(piece_list)
        self._piece_of_crossing = {}
        for pi, p in enumerate(self.pieces):
            if p[0] >= 0:
                for ci in p:
                    self._piece_of_crossing[ci] = pi

        self.faces = self._trace_faces()

    def _next_dart(self, dart):
        ci, s = dart
        s2 = (s + 1) % 4
        a = self.crossings[ci].arcs[s2]
        o1, o2 = self._arc_slots[a]
        return o2 if o1 == (ci, s2) else o1

    def _trace_faces(self):
        faces = []
        seen = set()
        for ci in range(len(self.crossings)):
            for s in range(4):
                if (ci, s) in seen:
                    continue
                cyc = []
                d = (ci, s)
                while d not in seen:
                    seen.add(d)
                    cyc.append(d)
                    d = self._next_dart(d)
                k = cyc.index(min(cyc))
                cyc = tuple(cyc[k:] + cyc[:k])
                arcs = tuple(sorted({self.crossings[c].arcs[(sl + 1) % 4] for c, sl in cyc}))
                faces.append(Face(cyc, arcs, self._piece_of_crossing[ci]))
        for a in self.loops:
            pi = self.pieces.index((-a,))
            faces.append(Face(((-a, 0),), (a,), pi))
            faces.append(Face(((-a, 1),), (a,), pi))
        faces.sort(key=lambda f: (min(f.arcs), f.darts))
        return tuple(faces)

    def _validate_faces(self):
        for pi, piece in enumerate(self.pieces):
            if piece[0] < 0:
                continue
            v = len(piece)
            arcs = set()
            for ci in piece:
                arcs.update(self.crossings[ci].arcs)
            e = len(arcs)
            f = sum(1 for face in self.faces if face.piece == pi)
            if f != e - v + 2:
                raise NonPlanar(
                    "piece with %d crossings traces %d faces, expected %d" % (v, f, e - v + 2)
                )

    # -- queries -----------------------------------------------------

    @property
    def crossing_count(self):
        return len(self.crossings)

    @property
    def zero_crossing_circles(self):
        return len(self.loops)

    def component_count(self):
        return len(self.components)

    def component_of(self, arc):
        try:
            return self._component_of[arc]
        except KeyError:
            raise UnknownArc(arc) from None

    def is_unlink_form(self):
        return not self.crossings

    @property
    def writhe(self):
        return sum(c.sign for c in self.crossings)

    def head(self, arc):
        return self._heads[arc]

    def tail(self, arc):
        return self._tails[arc]

    def is_loop_arc(self, arc):
        return arc in self.loops and arc not in self._arc_slots

    def successor(self, arc):
        if arc in self.loops:
            return arc
        return self._succ[arc]

    def plus_dart(self, arc):
        """Dart traversing the arc along its orientation (face on its right)."""
        if arc in self._heads:
            return self._heads[arc]
        if arc in self.loops:
            return (-arc, 0)
        raise UnknownArc(arc)

    def minus_dart(self, arc):
        """Dart traversing against the orientation (face on the arc's left)."""
        if arc in self._tails:
            return self._tails[arc]
        if arc in self.loops:
            return (-arc, 1)
        raise UnknownArc(arc)

    def dart_arc(self, dart):
        if dart[0] < 0:
            return -dart[0]
        ci, s = dart
        return self.crossings[ci].arcs[s]

    # -- canonical form ----------------------------------------------

    def normalize(self):
        """Relabel arcs to 1..2c (circles after), canonical over-only
        orientations, crossings sorted.  Deterministic bytes for equal
        diagrams; idempotent."""
        real = sorted(self._arc_slots)
        ren = {a: i + 1 for i, a in enumerate(real)}
        base = len(real)
        for j, a in enumerate(self.loops):
            ren[a] = base + j + 1
        crossings = [
            Crossing(c.sign, tuple(ren[a] for a in c.arcs)) for c in self.crossings
        ]
        loops = [ren[a] for a in self.loops]
        d = LinkDiagram(crossings, loops, validate=False)
        flip = [comp for comp in d.components if _overonly_misoriented(d, comp)]
        if flip:
            crossings = list(d.crossings)
            for comp in flip:
                for a in comp:
                    ci, s = d._heads[a]
                    cr = crossings[ci]
                    # reversing the over strand flips the crossing sign; the
                    # arcs stay in their slots and the sign convention then
                    # reads the over in/out roles the other way around
                    crossings[ci] = Crossing(-cr.sign, cr.arcs)
            d = LinkDiagram(crossings, loops, validate=False)
        order = sorted(range(len(d.crossings)), key=lambda i: (d.crossings[i].arcs, d.crossings[i].sign))
        return LinkDiagram([d.crossings[i] for i in order], loops, validate=False)

    def serialize(self):
        d = self.normalize()
        parts = ["X[%d,%d,%d,%d]" % c.arcs for c in d.crossings]
        if d.loops:
            parts.append("circles:%d" % len(d.loops))
        if not parts:
            raise MalformedPd("refusing to serialize the empty diagram")
        return " ".join(parts)

    def __eq__(self, other):
        return (
            isinstance(other, LinkDiagram)
            and self.crossings == other.crossings
            and self.loops == other.loops
        )

    def __hash__(self):
        return hash((self.crossings, self.loops))

    def __repr__(self):
        return "<LinkDiagram c=%d comps=%d circles=%d>" % (
            self.crossing_count,
            self.component_count(),
            len(self.loops),
        )


def _overonly_misoriented(d, comp):
    """True when comp never runs under a crossing and its orientation does
    not match the canonical choice (head of the minimal arc at its smallest
    slot occurrence).  Such components are exactly the ones whose direction
    a PD code cannot pin down."""
    if len(comp) == 1 and comp[0] in d.loops:
        return False
    for a in comp:
        ci, s = d._heads[a]
        if s == 0:
            return False
        ci, s = d._tails[a]
        if s == 2:
            return False
    a = min(comp)
    return d._heads[a] != min(d._arc_slots[a])


# ---------------------------------------------------------------------------
# PD text format


_PD_TUPLE = re.compile(r"[Xx]\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")
_PD_CIRCLES = re.compile(r"circles\s*:\s*(\d+)")


def parse_pd(text):
    """Parse a PD-code string into a LinkDiagram.

    Grammar: whitespace-separated X[a,b,c,d] tuples, optionally followed by
    circles:n for extra crossingless circles.  The literal "unknot" stands
    for circles:1.  Orientation is inferred from the tuples: slot 0 is the
    incoming under-strand, slot 2 its continuation, and over-strand
    directions propagate from those anchors.
    """
    if not isinstance(text, str):
        raise MalformedPd("PD code must be a string")
    s = text.strip()
    if not s:
        raise MalformedPd("empty PD code")
    if s.lower() == "unknot":
        return LinkDiagram((), (1,))
    tuples = [tuple(int(g) for g in m.groups()) for m in _PD_TUPLE.finditer(s)]
    circles = 0
    mc = _PD_CIRCLES.search(s)
    if mc:
        circles = int(mc.group(1))
    leftover = _PD_CIRCLES.sub("", _PD_TUPLE.sub("", s)).strip()
    if leftover:
        raise MalformedPd("unrecognized PD syntax near %r" % leftover[:40])
    if not tuples and circles == 0:
        raise MalformedPd("PD code describes nothing")

    occ = {}
    for ci, t in enumerate(tuples):
        for sl, a in enumerate(t):
            if a <= 0:
                raise MalformedPd("arc labels must be positive")
            occ.setdefault(a, []).append((ci, sl))
    for a, os in occ.items():
        if len(os) != 2:
            raise InconsistentArcs("arc %d appears %d times, want 2" % (a, len(os)))

    # role[(ci, slot)] = True for incoming (head), False for outgoing
    role = {}
    pending = []
    for ci, t in enumerate(tuples):
        role[(ci, 0)] = True
        role[(ci, 2)] = False
        pending.append((ci, 0))
        pending.append((ci, 2))

    def assign(pos, val):
        if pos in role:
            if role[pos] != val:
                raise InconsistentArcs("orientation conflict at crossing %d slot %d" % pos)
            return
        role[pos] = val
        pending.append(pos)

    def propagate():
        while pending:
            ci, sl = pending.pop()
            val = role[(ci, sl)]
            # the arc's other endpoint plays the opposite role
            a = tuples[ci][sl]
            o1, o2 = occ[a]
            other = o2 if o1 == (ci, sl) else o1
            assign(other, not val)
            # the crossing's over pair is one in, one out
            if sl in (1, 3):
                assign((ci, 4 - sl), not val)

    propagate()
    # components with no under-strand anchor stay unresolved: orient them
    # by the same canonical rule normalize() enforces
    while True:
        free = sorted(a for a in occ if occ[a][0] not in role)
        if not free:
            break
        a = min(free)
        assign(min(occ[a]), True)
        propagate()

    crossings = []
    for ci, t in enumerate(tuples):
        in3 = role[(ci, 3)]
        sign = 1 if in3 else -1
        crossings.append(Crossing(sign, t))
    loop_base = (max(occ) if occ else 0)
    loops = range(loop_base + 1, loop_base + 1 + circles)
    return LinkDiagram(crossings, loops).normalize()


def serialize_pd(d):
    return d.serialize()


def component_count(d):
    return d.component_count()


def is_unlink_form(d):
    return d.is_unlink_form()


# ---------------------------------------------------------------------------
# Braid words


class BraidWord(NamedTuple):
    strand_count: int
    letters: tuple

    @staticmethod
    def make(strand_count, letters):
        w = BraidWord(int(strand_count), tuple(int(x) for x in letters))
        if w.strand_count < 1:
            raise MalformedPd("braid needs at least one strand")
        for x in w.letters:
            if x == 0 or abs(x) >= w.strand_count:
                raise MalformedPd("generator index %d out of range for %d strands" % (x, w.strand_count))
        return w

    def inverse(self):
        return BraidWord(self.strand_count, tuple(-x for x in reversed(self.letters)))


# corner encoding, counterclockwise: NW, SW, SE, NE
_NW, _SW, _SE, _NE = 0, 1, 2, 3
_OPPOSITE_CORNER = {_NW: _SE, _SE: _NW, _SW: _NE, _NE: _SW}


class _ProtoCrossing:
    __slots__ = ("corners", "right_over")

    def __init__(self, nw, sw, se, ne, right_over):
        self.corners = [nw, sw, se, ne]
        self.right_over = right_over


def assemble_braid(word, top_caps=(), bottom_caps=(), trace_pairs=(), extra_letters=(), normalize=True):
    """Build a LinkDiagram from a braid word with explicit closure data.

    top_caps / bottom_caps: iterables of (p, q) strand position pairs
    (0-based) joined by an arc above / below the braid.  trace_pairs:
    positions whose top and bottom ends are joined around the braid
    (a plain trace closure uses (p, p) for all p).  extra_letters are
    appended to the word.  Every strand end must be closed exactly once.
    With normalize=False crossing i is letter i, which callers that
    need to target a specific letter rely on.
    """
    n = word.strand_count
    letters = list(word.letters) + list(extra_letters)
    eid = [0]
    edges_occ = {}

    def fresh():
        eid[0] += 1
        edges_occ[eid[0]] = []
        return eid[0]

    top = [fresh() for _ in range(n)]
    for p, q in top_caps:
        # one shared arc caps the two positions
        cap = top[p]
        edges_occ.pop(top[q], None)
        top[q] = cap

    cur = list(top)
    protos = []
    for x in letters:
        i = abs(x) - 1
        ci = len(protos)
        e_nw, e_ne = cur[i], cur[i + 1]
        e_se, e_sw = fresh(), fresh()
        protos.append(_ProtoCrossing(e_nw, e_sw, e_se, e_ne, right_over=x > 0))
        edges_occ[e_nw].append((ci, _NW))
        edges_occ[e_ne].append((ci, _NE))
        edges_occ[e_se].append((ci, _SE))
        edges_occ[e_sw].append((ci, _SW))
        cur[i], cur[i + 1] = e_sw, e_se

    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            parent[ry] = rx

    for p, q in bottom_caps:
        union(cur[p], cur[q])
    for p, q in trace_pairs:
        union(cur[p], top[q])

    merged = {}
    for e, os in edges_occ.items():
        merged.setdefault(find(e), []).extend(os)
    for e in merged:
        merged[e].sort()

    # orient each component: prefer to start a walk downward out of a
    # crossing so trace closures keep sign(crossing) = sign(letter)
    heads, tails = {}, {}

    def orient_from(a, tail_occ):
        while True:
            occs = merged[a]
            tails[a] = tail_occ
            head_occ = occs[0] if occs[1] == tail_occ else occs[1]
            heads[a] = head_occ
            ci, corner = head_occ
            nxt_occ = (ci, _OPPOSITE_CORNER[corner])
            b = protos[ci].corners[_OPPOSITE_CORNER[corner]]
            b = find(b)
            if b in tails:
                return
            a, tail_occ = b, nxt_occ

    loops = []
    for a in sorted(merged):
        if a in tails:
            continue
        occs = merged[a]
        if not occs:
            loops.append(a)
            continue
        exits = [o for o in occs if o[1] in (_SW, _SE)]
        orient_from(a, exits[0] if exits else occs[0])

    crossings = []
    for ci, pc in enumerate(protos):
        arcs = [find(e) for e in pc.corners]
        over_corners = (_NE, _SW) if pc.right_over else (_NW, _SE)
        under_corners = (_NW, _SE) if pc.right_over else (_NE, _SW)
        c_in = [k for k in under_corners if heads[arcs[k]] == (ci, k)]
        o_in = [k for k in over_corners if heads[arcs[k]] == (ci, k)]
        if len(c_in) != 1 or len(o_in) != 1:
            raise InconsistentArcs("braid orientation walk failed at crossing %d" % ci)
        c0 = c_in[0]
        slot_arcs = tuple(arcs[(c0 + s) % 4] for s in range(4))
        sign = 1 if (o_in[0] - c0) % 4 == 3 else -1
        crossings.append(Crossing(sign, slot_arcs))
    d = LinkDiagram(crossings, loops)
    return d.normalize() if normalize else d


def from_braid(w, closure="trace"):
    """Close a braid word into a diagram.

    closure "trace" joins each strand's bottom to its own top; "plat"
    caps adjacent pairs (1-2, 3-4, ...) at both ends and needs an even
    strand count.
    """
    if not isinstance(w, BraidWord):
        w = BraidWord.make(*w)
    else:
        w = BraidWord.make(w.strand_count, w.letters)
    n = w.strand_count
    if closure == "trace":
        return assemble_braid(w, trace_pairs=[(p, p) for p in range(n)])
    if closure == "plat":
        if n % 2:
            raise OddStrandsForPlat("plat closure needs an even strand count, got %d" % n)
        pairs = [(p, p + 1) for p in range(0, n, 2)]
        return assemble_braid(w, top_caps=pairs, bottom_caps=pairs)
    raise MalformedPd("closure must be 'trace' or 'plat', got %r" % (closure,))
