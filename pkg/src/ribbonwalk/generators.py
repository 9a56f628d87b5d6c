"""Random ribbon knot generators and a few fixed test knots.

Two sampling schemes, both emitting diagrams that bound ribbon disks
by construction:

gen_sym builds a fusion presentation.  Plat-closing B R B^-1 where R
is a product of single generators with pairwise index distance at
least two gives an unlink fused by one-crossing bands, so whenever
the result has one component it is a ribbon knot.  The conjugating
braid B hides the fusion sites.

gen_unsym double-strands a knot shadow.  Running two parallel copies
of a closed braid, cutting one doubled strand open with turnback
caps, and optionally twisting at the cut yields the boundary of a
disk dragged along the shadow; per-crossing sign patterns are
restricted to the six choices that keep the two copies exchangeable.
These diagrams carry no visible symmetry after simplification.

Both reject candidates outside the requested crossing window, so a
draw is a (diagram, attempts) story; RejectionExhausted reports a
window the sampler cannot hit.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .diagram import BraidWord, LinkDiagram, assemble_braid, from_braid, parse_pd
from .simplify import simplify


class RejectionExhausted(RuntimeError):
    pass


class GenConfig(NamedTuple):
    min_crossings: int = 15
    max_crossings: int = 30
    max_attempts: int = 800


# the four crossings doubling one shadow crossing, in emitted order
# sigma_2p, sigma_2p-1, sigma_2p+1, sigma_2p, cross strand copies
# (a2,b1), (a1,b1), (a2,b2), (a1,b2); the six usable sign patterns are
# uniform, split by the a copy, or split by the b copy
_CABLE_PATTERNS = (
    (-1, -1, -1, -1),
    (1, 1, 1, 1),
    (1, 1, -1, -1),
    (-1, -1, 1, 1),
    (1, -1, 1, -1),
    (-1, 1, -1, 1),
)


def _plat_component_count(strand_count, letters):
    # strand ends 0..n-1 on top, n..2n-1 on bottom, joined by caps and strands
    n = strand_count
    perm = list(range(n))
    for x in letters:
        i = abs(x) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    parent = list(range(2 * n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        parent[find(a)] = find(b)

    for p in range(n):
        union(p, n + perm[p])
    for p in range(0, n, 2):
        union(p, p + 1)
        union(n + p, n + p + 1)
    return len({find(a) for a in range(2 * n)})


def _accept(d, cfg):
    d2, _ = simplify(d)
    if d2.component_count() != 1:
        return None
    if not cfg.min_crossings <= d2.crossing_count <= cfg.max_crossings:
        return None
    return d2


def gen_sym(cfg=None, seed=0):
    """Sample a fusion-presented ribbon knot inside the crossing window."""
    cfg = cfg or GenConfig()
    rng = np.random.default_rng(seed)
    b_lo = max(2, cfg.min_crossings // 2)
    b_hi = max(3, cfg.max_crossings)
    for _ in range(cfg.max_attempts):
        m = int(rng.integers(1, 9))
        n = 2 * m
        fuse = []
        if m > 1:
            picks = np.sort(rng.choice(np.arange(1, m + 2), size=m - 1, replace=False))
            # shifting the k-th pick by k spreads indices two apart
            fuse = [int(c) + k for k, c in enumerate(picks)]
        r = [i * int(rng.choice((-1, 1))) for i in fuse]
        blen = int(rng.integers(b_lo, b_hi + 1))
        b = BraidWord.make(
            n,
            [int(rng.integers(1, n)) * int(rng.choice((-1, 1))) for _ in range(blen)],
        )
        word = BraidWord.make(n, b.letters + tuple(r) + b.inverse().letters)
        # most fusion sets leave the plat disconnected; catch that before
        # paying for diagram assembly and simplification
        if _plat_component_count(n, word.letters) != 1:
            continue
        got = _accept(from_braid(word, closure="plat"), cfg)
        if got is not None:
            return got
    raise RejectionExhausted(
        "no fusion knot with %d..%d crossings in %d attempts"
        % (cfg.min_crossings, cfg.max_crossings, cfg.max_attempts)
    )


def _is_knot_shadow(strand_count, letters):
    perm = list(range(strand_count))
    for x in letters:
        i = abs(x) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    seen, p, steps = 0, 0, 0
    while steps < strand_count:
        p = perm[p]
        seen += 1
        steps += 1
        if p == 0:
            break
    return seen == strand_count


def gen_unsym(cfg=None, seed=0):
    """Sample a doubled-shadow ribbon knot inside the crossing window."""
    cfg = cfg or GenConfig()
    rng = np.random.default_rng(seed)
    s_lo = max(2, cfg.min_crossings // 4)
    s_hi = max(3, cfg.max_crossings // 3)
    for _ in range(cfg.max_attempts):
        k = int(rng.integers(3, 9))
        slen = int(rng.integers(s_lo, s_hi + 1))
        shadow = [int(rng.integers(1, k)) * int(rng.choice((-1, 1))) for _ in range(slen)]
        if not _is_knot_shadow(k, shadow):
            continue
        letters = []
        for x in shadow:
            p = abs(x)
            pat = _CABLE_PATTERNS[int(rng.integers(len(_CABLE_PATTERNS)))]
            for idx, s in zip((2 * p, 2 * p - 1, 2 * p + 1, 2 * p), pat):
                letters.append(idx * s)
        tsign = int(rng.choice((-1, 1)))
        twists = [tsign] * int(rng.integers(0, 3))
        d = assemble_braid(
            BraidWord.make(2 * k, letters),
            top_caps=[(0, 1)],
            bottom_caps=[(0, 1)],
            trace_pairs=[(q, q) for q in range(2, 2 * k)],
            extra_letters=twists,
        )
        got = _accept(d, cfg)
        if got is not None:
            return got
    raise RejectionExhausted(
        "no doubled-shadow knot with %d..%d crossings in %d attempts"
        % (cfg.min_crossings, cfg.max_crossings, cfg.max_attempts)
    )


def dataset(method, count, cfg=None, seed=0):
    """Draw `count` knots; entry i depends only on (seed, i)."""
    gen = {"sym": gen_sym, "unsym": gen_unsym}[method]
    return tuple(gen(cfg, seed=[seed, i]) for i in range(count))


def two_bridge(p, q):
    """Alternating 4-plat of the rational knot p/q.

    Continued-fraction terms of p/q become twist runs, sigma_2 runs
    positive and sigma_1 runs negative; an even-length fraction is
    padded to odd length so the plat closes to one component.  The
    determinant of the result is p, which makes a cheap construction
    check.
    """
    if p % 2 == 0 or not 0 < q < p or math.gcd(p, q) != 1:
        raise ValueError("want odd p and coprime 0 < q < p, got %d/%d" % (p, q))
    terms = []
    a, b = p, q
    while b:
        t, r = divmod(a, b)
        terms.append(t)
        a, b = b, r
    if len(terms) % 2 == 0:
        terms[-1] -= 1
        terms.append(1)
    letters = []
    gen = 2
    for run in terms:
        letters.extend([(gen if gen == 2 else -gen)] * run)
        gen = 3 - gen
    return from_braid((4, letters), closure="plat")


def pretzel(*twists):
    """Pretzel link of vertical twist regions joined in a cycle.

    Region i is |twists[i]| crossings on its own strand pair; adjacent
    pairs are capped together top and bottom and the outermost ends
    close around everything.  Determinant of a three-region pretzel is
    |ab + bc + ca|.
    """
    if len(twists) < 2:
        raise ValueError("need at least two twist regions")
    letters = []
    for i, t in enumerate(twists):
        g = 2 * i + 1
        letters.extend([g if t > 0 else -g] * abs(t))
    n = 2 * len(twists)
    caps = [(2 * i + 1, 2 * i + 2) for i in range(len(twists) - 1)]
    caps.append((0, n - 1))
    return assemble_braid(
        BraidWord.make(n, letters), top_caps=caps, bottom_caps=caps
    )


def unknot():
    return LinkDiagram((), (1,))


def trefoil():
    return from_braid((2, (1, 1, 1)))


def figure_eight():
    return from_braid((3, (1, -2, 1, -2)))


def square_knot():
    """Two mirrored trefoils summed head to head.

    This presentation keeps the fusion strands anti-parallel, so a
    single twistless band already splits it into a two-component
    unlink.
    """
    return parse_pd(
        "X[4,6,5,3] X[6,1,2,5] X[7,4,3,2] "
        "X[8,1,10,9] X[9,10,12,11] X[11,12,7,8]"
    )
