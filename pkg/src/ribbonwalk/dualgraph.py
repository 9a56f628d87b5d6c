"""Face-adjacency graph of a diagram.

Band moves are routed as self-avoiding walks on the faces of the
diagram, stepping across one arc at a time.  Nodes of the dual graph
are the traced faces, except that the unbounded face is shared: when
the diagram has several connected pieces, each piece's outer face and
every circle's outer side collapse into a single node, since all of
them see the same region of the plane.

Nodes are numbered by minimal incident arc id (ties broken by the
deterministic face order of the diagram), so equal diagrams always get
equal numbering.  Each arc borders exactly two node slots: the face on
its right (walking along the orientation) and the face on its left; a
kink arc can border the same node twice.
"""

from __future__ import annotations

from .diagram import LinkDiagram, UnknownArc


class NonPlanarTrace(ValueError):
    pass


class DualGraph:
    """Immutable dual graph. Nodes are ints 0..n-1.

    faces: tuple of node ids (0..n-1).
    dual_edges: one (face_a, face_b, arc) triple per arc, a ≤ b.
    incidence: per node, bordering arcs in boundary-walk order.
    """

    def __init__(self, diagram, nodes, side_of_arc):
        self.diagram = diagram
        self._nodes = nodes                    # node -> tuple of diagram face indices
        self._side = side_of_arc              # arc -> (left_node, right_node)
        self.faces = tuple(range(len(nodes)))
        self.dual_edges = tuple(
            (min(lr), max(lr), a) for a, lr in sorted(side_of_arc.items())
        )
        inc = [[] for _ in nodes]
        for ni, fis in enumerate(nodes):
            for fi in fis:
                for dart in diagram.faces[fi].darts:
                    inc[ni].append(diagram.dart_arc(dart))
        self.incidence = tuple(tuple(r) for r in inc)
        self._arcs_of = tuple(frozenset(r) for r in self.incidence)
        nbr = [set() for _ in nodes]
        for a, b, _arc in self.dual_edges:
            if a != b:
                nbr[a].add(b)
                nbr[b].add(a)
        self.neighbors = tuple(tuple(sorted(s)) for s in nbr)

    @property
    def node_count(self):
        return len(self.faces)

    def arcs_of_face(self, node):
        return self._arcs_of[node]

    def left_face(self, arc):
        return self._face_pair(arc)[0]

    def right_face(self, arc):
        return self._face_pair(arc)[1]

    def _face_pair(self, arc):
        try:
            return self._side[arc]
        except KeyError:
            raise UnknownArc(arc) from None

    def other_face(self, arc, node):
        left, right = self._face_pair(arc)
        if node == left:
            return right
        if node == right:
            return left
        raise UnknownArc("arc %d does not border face %d" % (arc, node))

    def components_of_face(self, node):
        d = self.diagram
        return frozenset(d.component_of(a) for a in self._arcs_of[node])


def build_dual(d):
    """Trace the faces of d and assemble the dual graph.

    Every arc must be covered by exactly two darts over all faces; a
    violation means the face walk was inconsistent.
    """
    cover = {}
    for fi, f in enumerate(d.faces):
        for dart in f.darts:
            a = d.dart_arc(dart)
            cover.setdefault(a, []).append(fi)
    for a in d.arcs:
        if len(cover.get(a, ())) != 2:
            raise NonPlanarTrace("arc %d bordered %d times, want 2" % (a, len(cover.get(a, ()))))

    by_piece = {}
    for fi, f in enumerate(d.faces):
        by_piece.setdefault(f.piece, []).append(fi)

    def outer_key(fi):
        f = d.faces[fi]
        return (-len(f.darts), min(f.arcs), f.darts)

    outer = {pi: min(fis, key=outer_key) for pi, fis in by_piece.items()}

    groups = []
    if len(by_piece) > 1:
        groups.append(sorted(outer.values()))
        for pi, fis in by_piece.items():
            groups.extend([fi] for fi in fis if fi != outer[pi])
    else:
        groups.extend([fi] for fi in range(len(d.faces)))
    groups.sort(key=lambda g: (min(min(d.faces[fi].arcs) for fi in g), g[0]))
    nodes = tuple(tuple(g) for g in groups)

    node_of_face = {}
    for ni, g in enumerate(nodes):
        for fi in g:
            node_of_face[fi] = ni

    dart_face = {}
    for fi, f in enumerate(d.faces):
        for dart in f.darts:
            dart_face[dart] = fi

    side = {}
    for a in d.arcs:
        right = node_of_face[dart_face[d.plus_dart(a)]]
        left = node_of_face[dart_face[d.minus_dart(a)]]
        side[a] = (left, right)
    return DualGraph(d, nodes, side)


def faces_of_arc(g, a):
    """The (left, right) faces bordered by arc a, possibly equal."""
    return g._face_pair(a)
