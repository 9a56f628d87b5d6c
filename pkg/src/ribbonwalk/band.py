"""The band-attachment environment.

An episode walks a band across the diagram: Start picks an arc and one
of its two faces, Over/Under step the band into a neighboring face
across an arc, Twist winds the two band edges around each other, and
End attaches the free end to an arc of the current face.  End performs
the actual surgery, simplifies, and checks the win and loss limits.

Orientation bookkeeping runs on arc sides: eps(arc, face) is +1 when
the face lies on the arc's left.  A band from (S, f_S) to (E, f_E)
with t twists attaches consistently iff

    eps(S, f_S) * eps(E, f_E) * (-1)^t == +1

because the band's two boundary rails swap sides at every twist and
nowhere else.  The same side data drives the surgery: the forward rail
(carrying S's inflow to E's outflow) runs on the band's left iff
eps(S, f_S) = +1, which fixes the crossing order and signs where the
rails cross routed arcs and each other.

All twists are realized at the End side of the band; sliding them past
arc crossings changes only the diagram, not the attachment, so this is
a canonical choice.
"""

from __future__ import annotations

from itertools import count
from typing import NamedTuple, Optional

from .diagram import Crossing, LinkDiagram, make_crossing
from .dualgraph import build_dual
from .simplify import EPISODE_BUDGET, SimplifyBudget, simplify


class IllegalAction(ValueError):
    pass


class OrientationViolation(ValueError):
    pass


class DifferentComponents(ValueError):
    pass


class Action(NamedTuple):
    kind: str
    arc: int = 0
    face: int = -1
    sign: int = 0


def Start(arc, face):
    return Action("start", arc=arc, face=face)


def Over(arc):
    return Action("over", arc=arc)


def Under(arc):
    return Action("under", arc=arc)


def Twist(sign):
    return Action("twist", sign=sign)


def End(arc):
    return Action("end", arc=arc)


class PartialBand(NamedTuple):
    start_arc: int
    face_path: tuple          # visited faces, start face first, no repeats
    crossings_log: tuple      # (arc, +1 over / -1 under) per routing step
    twist_count: int
    arcs_crossed: frozenset

    @property
    def start_face(self):
        return self.face_path[0]


class CompletedBand(NamedTuple):
    start_arc: int
    start_face: int
    crossings_log: tuple
    twist_count: int
    end_arc: int
    trace: tuple              # MoveRecords of the post-attachment cleanup


class EpisodeConfig(NamedTuple):
    max_steps: int = 5500
    max_bands: int = 10
    max_components: int = 10
    max_dual_nodes: int = 0   # 0: derive max(c+2, 20) from the episode's knot
    simplify_budget: SimplifyBudget = EPISODE_BUDGET


class BandState(NamedTuple):
    diagram: LinkDiagram
    dual: object
    active_band: Optional[PartialBand]
    bands_completed: tuple
    steps_taken: int
    initial: LinkDiagram      # episode's starting diagram, for certificates
    pre_trace: tuple          # simplification applied to `initial` before search


LOSS_REASONS = (
    "StepLimit",
    "NoLegalAction",
    "TooManyDualNodes",
    "TooManyComponents",
    "TooManyBands",
    "Inconclusive",
)


class Outcome(NamedTuple):
    win: bool
    reason: Optional[str]
    certificate: object


def new_state(d, initial=None, pre_trace=()):
    d = d.normalize()
    return BandState(
        diagram=d,
        dual=build_dual(d),
        active_band=None,
        bands_completed=(),
        steps_taken=0,
        initial=(initial if initial is not None else d),
        pre_trace=tuple(pre_trace),
    )


def _eps(g, arc, face):
    return 1 if g.left_face(arc) == face else -1


def _node_limit(s, cfg):
    if cfg.max_dual_nodes > 0:
        return cfg.max_dual_nodes
    return max(s.initial.crossing_count + 2, 20)


def legal_actions(s, cfg):
    """Concrete legal actions in canonical order (Start, Over, Under,
    Twist, End; numeric fields ascending within a kind)."""
    b = s.active_band
    if b is None:
        if len(s.bands_completed) >= cfg.max_bands:
            return []
        out = []
        g = s.dual
        for a in s.diagram.arcs:
            left, right = g.left_face(a), g.right_face(a)
            for f in sorted({left, right}):
                out.append(Start(a, f))
        return out

    g = s.dual
    d = s.diagram
    cur = b.face_path[-1]
    comp_start = d.component_of(b.start_arc)
    eps_s = _eps(g, b.start_arc, b.start_face)
    parity = -1 if b.twist_count % 2 else 1
    overs, unders, ends = [], [], []
    endable_arcs = False
    for a in sorted(g.arcs_of_face(cur)):
        if a in b.arcs_crossed:
            continue
        if a != b.start_arc and g.other_face(a, cur) not in b.face_path:
            overs.append(Over(a))
            unders.append(Under(a))
        if d.component_of(a) == comp_start:
            endable_arcs = True
            if eps_s * _eps(g, a, cur) * parity == 1:
                ends.append(End(a))
    twists = []
    if endable_arcs:
        # a twist only helps when some attachment on this face is
        # reachable; otherwise twisting would stall the episode forever
        allowed = (-1, 1) if b.twist_count == 0 else ((1,) if b.twist_count > 0 else (-1,))
        twists = [Twist(sg) for sg in allowed]
    return overs + unders + twists + ends


def attach_band(d, b, end_arc, dual=None):
    """Realize the band as surgery on the diagram.

    The band is replaced by its two boundary rails: the forward rail
    carries S_pre to E_post and the backward rail E_pre to S_post.
    Every routed arc gains two crossings (one per rail, opposite
    signs), every twist one crossing between the rails.  Returns the
    new normalized diagram; component count rises by exactly one.
    """
    g = dual if dual is not None else build_dual(d)
    S, E = b.start_arc, end_arc
    fS, fE = b.face_path[0], b.face_path[-1]
    if E not in g.arcs_of_face(fE):
        raise IllegalAction("end arc %d does not border face %d" % (E, fE))
    if d.component_of(E) != d.component_of(S):
        raise DifferentComponents("band ends on different components")
    eps_S, eps_E = _eps(g, S, fS), _eps(g, E, fE)
    t = b.twist_count
    if eps_S * eps_E * (-1 if t % 2 else 1) != 1:
        raise OrientationViolation(
            "band sides %+d/%+d with %d twists reverse orientation" % (eps_S, eps_E, t)
        )

    k = len(b.crossings_log)
    ta = abs(t)
    nseg = k + ta
    ids = count(max(d.arcs) + 1)
    crossings = [list(c.arcs) for c in d.crossings]
    old_signs = [c.sign for c in d.crossings]
    loops = set(d.loops)

    def rehead(arc, repl):
        hc, hs = d.head(arc)
        crossings[hc][hs] = repl

    fw = [next(ids) for _ in range(nseg + 1)]
    bw = [next(ids) for _ in range(nseg + 1)]

    if S == E:
        if d.is_loop_arc(S):
            mid = next(ids)
            loops.discard(S)
            s_pre, s_post, e_pre, e_post = S, mid, mid, S
        else:
            # both attachments on one arc: start upstream, end downstream
            p2, p3 = next(ids), next(ids)
            rehead(S, p3)
            s_pre, s_post, e_pre, e_post = S, p2, p2, p3
    else:
        s_post, e_post = next(ids), next(ids)
        rehead(S, s_post)
        rehead(E, e_post)
        s_pre, e_pre = S, E

    unions = [(fw[0], s_pre), (fw[nseg], e_post), (bw[0], e_pre), (bw[nseg], s_post)]

    new_crossings = []
    for i, (a, omega) in enumerate(b.crossings_log, start=1):
        delta = _eps(g, a, b.face_path[i - 1])
        if d.is_loop_arc(a):
            mid = next(ids)
            loops.discard(a)
            a_pre = a_post = a
        else:
            mid, a_post = next(ids), next(ids)
            rehead(a, a_post)
            a_pre = a
        rails = (
            (delta * omega, (fw[i - 1], fw[i])),
            (-delta * omega, (bw[nseg - i], bw[nseg - i + 1])),
        )
        # the rail crossing a upstream is forward iff delta*eps_S == -1
        order = rails if delta * eps_S == -1 else rails[::-1]
        for (sign, rail), arcpair in zip(order, ((a_pre, mid), (mid, a_post))):
            if omega == 1:
                new_crossings.append(make_crossing(sign, arcpair[0], arcpair[1], rail[0], rail[1]))
            else:
                new_crossings.append(make_crossing(sign, rail[0], rail[1], arcpair[0], arcpair[1]))

    s_t = 1 if t > 0 else -1
    for j in range(1, ta + 1):
        fw_pair = (fw[k + j - 1], fw[k + j])
        bw_pair = (bw[ta - j], bw[ta - j + 1])
        fw_left = (eps_S == 1) ^ ((j - 1) % 2 == 1)
        over_fw = (s_t == -1 and fw_left) or (s_t == 1 and not fw_left)
        if over_fw:
            new_crossings.append(make_crossing(s_t, bw_pair[0], bw_pair[1], fw_pair[0], fw_pair[1]))
        else:
            new_crossings.append(make_crossing(s_t, fw_pair[0], fw_pair[1], bw_pair[0], bw_pair[1]))

    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    for x, y in unions:
        rx, ry = find(x), find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            parent[ry] = rx

    final = [
        Crossing(old_signs[i], tuple(find(a) for a in arcs)) for i, arcs in enumerate(crossings)
    ] + [Crossing(c.sign, tuple(find(a) for a in c.arcs)) for c in new_crossings]
    used = {a for c in final for a in c.arcs}
    candidates = {find(x) for pair in unions for x in pair}
    all_loops = sorted(loops) + sorted(r for r in candidates if r not in used)
    return LinkDiagram(final, all_loops).normalize()


def step(s, a, cfg, legal=None):
    """Apply one action; returns the next BandState, or an Outcome when
    the action finishes the episode."""
    if legal is None:
        legal = legal_actions(s, cfg)
    if a not in legal:
        raise IllegalAction("action %r is not legal here" % (a,))
    s = s._replace(steps_taken=s.steps_taken + 1)
    b = s.active_band
    if a.kind == "start":
        band = PartialBand(a.arc, (a.face,), (), 0, frozenset())
        return s._replace(active_band=band)
    if a.kind in ("over", "under"):
        nxt = s.dual.other_face(a.arc, b.face_path[-1])
        band = b._replace(
            face_path=b.face_path + (nxt,),
            crossings_log=b.crossings_log + ((a.arc, 1 if a.kind == "over" else -1),),
            arcs_crossed=b.arcs_crossed | {a.arc},
        )
        return s._replace(active_band=band)
    if a.kind == "twist":
        return s._replace(active_band=b._replace(twist_count=b.twist_count + a.sign))

    attached = attach_band(s.diagram, b, a.arc, dual=s.dual)
    reduced, trace = simplify(attached, cfg.simplify_budget)
    done = CompletedBand(
        b.start_arc, b.start_face, b.crossings_log, b.twist_count, a.arc, tuple(trace)
    )
    bands = s.bands_completed + (done,)
    if reduced.is_unlink_form():
        from .certificate import build_certificate

        cert = build_certificate(s.initial, s.pre_trace, bands, reduced)
        return Outcome(True, None, cert)
    if reduced.component_count() > cfg.max_components:
        return Outcome(False, "TooManyComponents", None)
    dual = build_dual(reduced)
    if dual.node_count > _node_limit(s, cfg):
        return Outcome(False, "TooManyDualNodes", None)
    if len(bands) >= cfg.max_bands:
        return Outcome(False, "TooManyBands", None)
    return s._replace(diagram=reduced, dual=dual, active_band=None, bands_completed=bands)


def run_episode(d0, policy, cfg=None, seed=0, initial=None, pre_trace=()):
    """Play one episode from d0 under the given action sampler.

    policy(state, legal, rng) -> Action.  Deterministic per seed.
    initial/pre_trace describe how d0 was derived from the original
    diagram so that certificates replay from the true starting knot.
    """
    import numpy as np

    if cfg is None:
        cfg = EpisodeConfig()
    rng = np.random.default_rng(seed)
    s = new_state(d0, initial=initial, pre_trace=pre_trace)
    if s.diagram.is_unlink_form():
        from .certificate import build_certificate

        return Outcome(True, None, build_certificate(s.initial, s.pre_trace, (), s.diagram))
    while True:
        if s.steps_taken >= cfg.max_steps:
            return Outcome(False, "StepLimit", None)
        legal = legal_actions(s, cfg)
        if not legal:
            reason = "NoLegalAction" if s.active_band is not None else "TooManyBands"
            return Outcome(False, reason, None)
        a = policy(s, legal, rng)
        nxt = step(s, a, cfg, legal=legal)
        if isinstance(nxt, Outcome):
            return nxt
        s = nxt
