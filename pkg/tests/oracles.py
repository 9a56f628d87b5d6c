"""Independent invariant oracles used only by the test suite.

Nothing here touches the walker: the Kauffman bracket is computed by
brute-force state sum, so it is slow (2^c terms) but has no shared
code or conventions with the package beyond reading a diagram's
crossings.  Jones here is a Laurent polynomial in t represented as an
exponent -> coefficient dict over quarter-integers scaled by 4 (so
key 4 means t^1); for knots all keys are multiples of 4.
"""

from __future__ import annotations

import itertools

from ribbonwalk.diagram import LinkDiagram


def _poly_mul(p, q):
    out = {}
    for ea, ca in p.items():
        for eb, cb in q.items():
            k = ea + eb
            out[k] = out.get(k, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _poly_add(p, q):
    out = dict(p)
    for e, c in q.items():
        out[e] = out.get(e, 0) + c
    return {e: c for e, c in out.items() if c}


# d = -A^2 - A^-2, the loop value
_LOOP = {2: -1, -2: -1}


def _loop_power(n):
    out = {0: 1}
    for _ in range(n):
        out = _poly_mul(out, _LOOP)
    return out


def kauffman_bracket(d):
    """State-sum bracket as a Laurent polynomial in A (dict exp -> coeff)."""
    n = d.crossing_count
    total = {}
    for choice in itertools.product((0, 1), repeat=n):
        # union-find over dart endpoints (ci, slot)
        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                parent[x] = parent.get(parent[x], parent[x])
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        # arcs connect their two endpoints
        ends = {}
        for ci, c in enumerate(d.crossings):
            for s, a in enumerate(c.arcs):
                ends.setdefault(a, []).append((ci, s))
        for a, occ in ends.items():
            if len(occ) == 2:
                union(occ[0], occ[1])
        a_count = 0
        for ci, (c, ch) in enumerate(zip(d.crossings, choice)):
            # the over strand always occupies the 1-3 diagonal here, so
            # the A-smoothing is the same end-pairing at every crossing
            # regardless of sign (the bracket ignores orientation)
            pairs = ((0, 1), (2, 3)) if ch == 0 else ((0, 3), (1, 2))
            if ch == 0:
                a_count += 1
            for x, y in pairs:
                union((ci, x), (ci, y))
        loops = len({find((ci, s)) for ci in range(n) for s in range(4)})
        loops += len(d.loops)
        exp = 2 * a_count - n  # A^(a-b) with a+b=n
        term = {exp: 1}
        term = _poly_mul(term, _loop_power(loops - 1)) if loops else term
        total = _poly_add(total, term)
    if n == 0:
        total = _loop_power(len(d.loops) - 1) if d.loops else {0: 1}
    return total


def jones(d):
    """Jones polynomial; keys are 4*exponent of t (t^1 is key 4)."""
    w = d.writhe
    br = kauffman_bracket(d)
    # multiply by (-A^3)^(-w), then substitute A = t^(-1/4)
    shifted = {e - 3 * w: c * (-1) ** (w % 2) for e, c in br.items()}
    return {-e: c for e, c in shifted.items()}


def jones_mirror(j):
    return {-e: c for e, c in j.items()}


def determinant(d):
    """|V(-1)|, the knot determinant."""
    j = jones(d)
    val = 0
    for e4, c in j.items():
        if e4 % 4:
            raise ValueError("quarter-integer exponent on a knot polynomial")
        val += c * (-1) ** ((e4 // 4) % 2)
    return abs(val)


def jones_str(j):
    parts = []
    for e4 in sorted(j):
        e = e4 / 4
        e = int(e) if float(e).is_integer() else e
        parts.append("%+d t^%s" % (j[e4], e))
    return " ".join(parts) if parts else "0"


def signature(d):
    """Knot signature from the Goeritz form with the type-II correction.

    Both checkerboard colorings are computed and must agree, which
    catches sign-convention slips in the correction term.
    """
    import numpy as np

    faces = d.faces
    nf = len(faces)
    arc_faces = {}
    for fi, f in enumerate(faces):
        for a in f.arcs:
            arc_faces.setdefault(a, []).append(fi)
    color = [None] * nf
    color[0] = 0
    stack = [0]
    while stack:
        fi = stack.pop()
        for a in faces[fi].arcs:
            for fj in arc_faces[a]:
                if fj != fi and color[fj] is None:
                    color[fj] = 1 - color[fi]
                    stack.append(fj)
    assert all(c is not None for c in color)

    dart_face = {}
    for fi, f in enumerate(faces):
        for dart in f.darts:
            dart_face[dart] = fi

    out = []
    for white in (0, 1):
        wfaces = [fi for fi in range(nf) if color[fi] == white]
        wix = {fi: i for i, fi in enumerate(wfaces)}
        G = np.zeros((len(wfaces), len(wfaces)))
        mu = 0
        for ci, c in enumerate(d.crossings):
            corners = [dart_face[(ci, s)] for s in range(4)]
            diag02 = color[corners[0]] == white
            eta = 1 if diag02 else -1
            if diag02 == (c.sign == 1):
                mu += eta
            pair = (corners[0], corners[2]) if diag02 else (corners[1], corners[3])
            i, j = wix[pair[0]], wix[pair[1]]
            G[i, j] -= eta
            G[j, i] -= eta
            G[i, i] += eta
            G[j, j] += eta
        minor = G[1:, 1:]
        ev = np.linalg.eigvalsh(minor) if len(minor) else np.array([])
        assert all(abs(e) > 1e-9 for e in ev)
        out.append(int(np.sum(ev > 0) - np.sum(ev < 0)) - mu)
    assert out[0] == out[1], out
    return out[0]


def alexander(d):
    """Alexander polynomial of a knot diagram, exact over Fraction.

    Coefficients low degree first, trailing powers stripped, sign
    normalized so the coefficients sum to +1.  Computed from the
    Wirtinger presentation: determinant samples at small integers,
    then Lagrange interpolation.
    """
    from fractions import Fraction

    cs = d.crossings
    if not cs:
        return [1]
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for c in cs:
        union(c.arcs[c.over_in_slot], c.arcs[c.over_out_slot])
    gens = sorted({find(a) for c in cs for a in c.arcs})
    gix = {g: i for i, g in enumerate(gens)}
    m = len(gens)

    def det_at(tv):
        t = Fraction(tv)
        mat = []
        for c in cs[: m - 1]:
            r = [Fraction(0)] * m
            over = gix[find(c.arcs[c.over_in_slot])]
            if c.sign > 0:
                r[over] += 1 - t
                r[gix[find(c.arcs[0])]] += t
                r[gix[find(c.arcs[2])]] -= 1
            else:
                r[over] += t - 1
                r[gix[find(c.arcs[0])]] += 1
                r[gix[find(c.arcs[2])]] -= t
            mat.append(r[:-1])
        k = len(mat)
        det = Fraction(1)
        for col in range(k):
            piv = next((r for r in range(col, k) if mat[r][col] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                mat[col], mat[piv] = mat[piv], mat[col]
                det = -det
            det *= mat[col][col]
            inv = 1 / mat[col][col]
            for r in range(col + 1, k):
                f = mat[r][col] * inv
                if f:
                    mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
        return det

    def pmul(p, q):
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for i, a in enumerate(p):
            for j, b in enumerate(q):
                out[i + j] += a * b
        return out

    pts = [(x, det_at(x)) for x in range(2, m + 2)]
    poly = [Fraction(0)]
    for i, (xi, yi) in enumerate(pts):
        term = [yi]
        for j, (xj, _) in enumerate(pts):
            if i == j:
                continue
            term = pmul(term, [Fraction(-xj, 1), Fraction(1)])
            term = [c / (xi - xj) for c in term]
        poly = [a + b for a, b in
                zip(poly + [Fraction(0)] * (len(term) - len(poly)),
                    term + [Fraction(0)] * (len(poly) - len(term)))]
    while poly and poly[-1] == 0:
        poly.pop()
    lead = next((i for i, c in enumerate(poly) if c != 0), 0)
    poly = poly[lead:]
    ints = [int(c) for c in poly]
    assert all(c == ic for c, ic in zip(poly, ints))
    if sum(ints) < 0:
        ints = [-c for c in ints]
    return ints


def fox_milnor(poly, bound=12):
    """Integer f with poly == +-t^deg * f(t) f(1/t), or None.

    Existence of such a factorization is necessary for a knot to be
    slice, so a missing factorization certifies non-ribbonness.
    """
    import itertools

    n = len(poly) - 1
    if n % 2:
        return None
    h = n // 2
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=h):
        for lead in range(1, bound + 1):
            f = (lead,) + coeffs
            if f[-1] == 0:
                continue
            conv = [0] * (n + 1)
            for i in range(h + 1):
                for j in range(h + 1):
                    conv[h + i - j] += f[i] * f[j]
            if conv == poly or conv == [-c for c in poly]:
                return f
    return None
