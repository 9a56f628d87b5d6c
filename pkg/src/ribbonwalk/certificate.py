"""Self-contained proofs that a walk found a ribbon presentation.

A certificate records everything needed to replay a winning episode
from the initial diagram: the simplification applied before the search,
then per band its start arc and face, the over/under routing log, the
twist count, the end arc, and the cleanup moves applied after the
attachment.  Verification replays the whole thing with the same action
masking the walker faced and accepts only if the final diagram is a
crossingless unlink with the declared component count.

The text format is line-oriented:

    ribbonwalk-certificate v1
    initial X[1,4,2,5] X[3,6,4,1] X[5,2,6,3] circles:0
    presimplify R2-@1,3 R1-@2
    band 2 4 0 5
    route over:3 under:1
    cleanup R1-@4
    final components 2
    meta seed 17

`meta` lines carry free-form key/value pairs and are ignored by
verification.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, NamedTuple

from .diagram import LinkDiagram, PdError, parse_pd
from .simplify import MOVE_KINDS, IllegalMove, MoveRecord, replay
from .band import (
    BandState,
    CompletedBand,
    End,
    EpisodeConfig,
    Over,
    PartialBand,
    Start,
    Twist,
    Under,
    attach_band,
    legal_actions,
)
from .dualgraph import build_dual

FORMAT_HEADER = "ribbonwalk-certificate v1"


class ParseError(ValueError):
    pass


@dataclass
class RibbonCertificate:
    initial: LinkDiagram
    pre_trace: tuple
    bands: tuple
    final_components: int
    metadata: dict = field(default_factory=dict)

    @property
    def band_count(self):
        return len(self.bands)


class VerifyResult(NamedTuple):
    valid: bool
    step: Optional[int]       # 0: presimplify, 1..n: band index, n+1: final check
    reason: Optional[str]

    def __bool__(self):
        return self.valid


def build_certificate(initial, pre_trace, bands, final_diagram, metadata=None):
    return RibbonCertificate(
        initial=initial,
        pre_trace=tuple(pre_trace),
        bands=tuple(bands),
        final_components=final_diagram.component_count(),
        metadata=dict(metadata or {}),
    )


def _fmt_move(m):
    return "%s@%s" % (m.kind, ",".join(str(x) for x in m.site))


_MOVE_RE = re.compile(r"^(R1-|R2-|R3|R1\+|R2\+)@(-?\d+(?:,-?\d+)*)$")


def _parse_move(tok):
    m = _MOVE_RE.match(tok)
    if not m:
        raise ParseError("bad move token %r" % tok)
    return MoveRecord(m.group(1), tuple(int(x) for x in m.group(2).split(",")))


def serialize(cert):
    lines = [FORMAT_HEADER]
    lines.append("initial %s" % cert.initial.serialize())
    lines.append(("presimplify " + " ".join(_fmt_move(m) for m in cert.pre_trace)).rstrip())
    for b in cert.bands:
        lines.append("band %d %d %d %d" % (b.start_arc, b.start_face, b.twist_count, b.end_arc))
        route = " ".join(
            ("over:%d" if w > 0 else "under:%d") % a for a, w in b.crossings_log
        )
        lines.append(("route " + route).rstrip())
        lines.append(("cleanup " + " ".join(_fmt_move(m) for m in b.trace)).rstrip())
    lines.append("final components %d" % cert.final_components)
    for k in sorted(cert.metadata):
        lines.append("meta %s %s" % (k, cert.metadata[k]))
    return "\n".join(lines) + "\n"


def deserialize(text):
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0] != FORMAT_HEADER:
        raise ParseError("missing certificate header")
    pos = 1

    def take(prefix):
        nonlocal pos
        if pos >= len(lines) or not lines[pos].startswith(prefix):
            raise ParseError("expected %r at line %d" % (prefix, pos + 1))
        rest = lines[pos][len(prefix):].strip()
        pos += 1
        return rest

    try:
        initial = parse_pd(take("initial "))
    except PdError as e:
        raise ParseError("bad initial diagram: %s" % e)
    pre = take("presimplify")
    pre_trace = tuple(_parse_move(tok) for tok in pre.split()) if pre else ()

    bands = []
    while pos < len(lines) and lines[pos].startswith("band "):
        head = take("band ").split()
        if len(head) != 4:
            raise ParseError("band line needs 4 fields")
        try:
            start_arc, start_face, twists, end_arc = (int(x) for x in head)
        except ValueError:
            raise ParseError("band line fields must be integers")
        route_txt = take("route")
        log = []
        for tok in route_txt.split():
            m = re.match(r"^(over|under):(-?\d+)$", tok)
            if not m:
                raise ParseError("bad route token %r" % tok)
            log.append((int(m.group(2)), 1 if m.group(1) == "over" else -1))
        clean_txt = take("cleanup")
        trace = tuple(_parse_move(tok) for tok in clean_txt.split()) if clean_txt else ()
        bands.append(
            CompletedBand(start_arc, start_face, tuple(log), twists, end_arc, trace)
        )

    tail = take("final components")
    try:
        final_components = int(tail)
    except ValueError:
        raise ParseError("final components must be an integer")
    metadata = {}
    while pos < len(lines):
        rest = take("meta ")
        key, _, val = rest.partition(" ")
        if not key:
            raise ParseError("meta line needs a key")
        metadata[key] = val
    return RibbonCertificate(initial, pre_trace, tuple(bands), final_components, metadata)


_REPLAY_CFG = EpisodeConfig(
    max_steps=10**9, max_bands=10**9, max_components=10**9, max_dual_nodes=10**9
)


def verify(cert):
    """Replay a certificate under full action masking.

    Accepts a RibbonCertificate or its text form.  Returns a
    VerifyResult; parsing problems raise ParseError instead because a
    malformed certificate is not merely invalid, it says nothing.
    """
    if isinstance(cert, str):
        cert = deserialize(cert)
    try:
        d = cert.initial.normalize()
        try:
            d = replay(d, cert.pre_trace)
        except (IllegalMove, PdError) as e:
            return VerifyResult(False, 0, "presimplify replay failed: %s" % e)

        for i, b in enumerate(cert.bands, start=1):
            g = build_dual(d)
            state = BandState(d, g, None, (), 0, d, ())

            def legal_here(st):
                return legal_actions(st, _REPLAY_CFG)

            act = Start(b.start_arc, b.start_face)
            if act not in legal_here(state):
                return VerifyResult(False, i, "illegal start %r" % (act,))
            band = PartialBand(b.start_arc, (b.start_face,), (), 0, frozenset())
            state = state._replace(active_band=band)
            for arc, w in b.crossings_log:
                act = Over(arc) if w > 0 else Under(arc)
                if act not in legal_here(state):
                    return VerifyResult(False, i, "illegal route step %r" % (act,))
                band = band._replace(
                    face_path=band.face_path + (g.other_face(arc, band.face_path[-1]),),
                    crossings_log=band.crossings_log + ((arc, w),),
                    arcs_crossed=band.arcs_crossed | {arc},
                )
                state = state._replace(active_band=band)
            sign = 1 if b.twist_count > 0 else -1
            for _ in range(abs(b.twist_count)):
                if Twist(sign) not in legal_here(state):
                    return VerifyResult(False, i, "illegal twist")
                band = band._replace(twist_count=band.twist_count + sign)
                state = state._replace(active_band=band)
            if End(b.end_arc) not in legal_here(state):
                return VerifyResult(False, i, "illegal end %r" % (End(b.end_arc),))
            try:
                d = attach_band(d, band, b.end_arc, dual=g)
                d = replay(d, b.trace)
            except (IllegalMove, PdError, ValueError) as e:
                return VerifyResult(False, i, "band %d replay failed: %s" % (i, e))

        last = len(cert.bands) + 1
        if not d.is_unlink_form():
            return VerifyResult(False, last, "final diagram is not a crossingless unlink")
        if d.component_count() != cert.final_components:
            return VerifyResult(
                False,
                last,
                "final unlink has %d components, certificate claims %d"
                % (d.component_count(), cert.final_components),
            )
        return VerifyResult(True, None, None)
    except Exception as e:  # a malformed field should never escape as a crash
        return VerifyResult(False, None, "replay error: %s" % e)
