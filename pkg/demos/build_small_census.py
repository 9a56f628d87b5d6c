"""Build the small ribbon census frozen under tests/data/.

Candidates come from three local constructions:

  * two_bridge(m*m, q) for fractions in the slice families q = m*k +- 1
    and q = (m*k +- 1)/2, restricted to continued fractions with at
    most ten crossings (25/7 is the amphichiral member, fusion number
    one; its negative-CF lattice [4,3,2,2] embeds in Z^4, so no
    Donaldson-style obstruction stands against it);
  * pretzel(p, -p, q) with p, q odd, the classical one-band family;
  * gen_sym fusion knots drawn at each crossing count from 6 to 10.

Every candidate is deduplicated by Jones polynomial (mirror pairs
count once) and then certified by the walker.  Only entries with a
verified certificate are written; the certificate files land next to
the census so tests can re-check them without searching.

Run from the repository root:

    python3 demos/build_small_census.py
"""

import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
# the Jones and determinant oracles live with the tests on purpose;
# this script reuses them rather than growing a second implementation
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "tests"))

from oracles import determinant, jones, jones_mirror

from ribbonwalk.certificate import serialize, verify
from ribbonwalk.diagram import serialize_pd
from ribbonwalk.generators import GenConfig, gen_sym, pretzel, two_bridge
from ribbonwalk.simplify import simplify
from ribbonwalk.walker import BAYES_WEIGHTS, search

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "tests", "data")
CERT_DIR = os.path.join(DATA_DIR, "certs")
TARGET = 25
CERT_SEED = 7
STOP = {"episodes": 4000, "timeout": 120}


def jones_key(d):
    v = jones(d)
    a = tuple(sorted(v.items()))
    b = tuple(sorted(jones_mirror(v).items()))
    return min(a, b)


def main():
    t_start = time.time()
    pool = []

    for p, q, label in (
        (9, 2, "9/2"),
        (25, 9, "25/9"),
        (25, 4, "25/4"),
        (25, 7, "25/7"),
        (49, 15, "49/15"),
        (49, 22, "49/22"),
        (49, 18, "49/18"),
    ):
        d = two_bridge(p, q)
        assert determinant(d) == p, label
        pool.append(("b", "2bridge %s det=%d" % (label, p), d))

    for ts in ((3, -3, 1), (3, -3, 3), (3, -3, 5), (5, -5, 1)):
        d = pretzel(*ts)
        want = abs(ts[0] * ts[1] + ts[1] * ts[2] + ts[0] * ts[2])
        assert determinant(d) == want, str(ts)
        pool.append(("p", "pretzel %s det=%d" % (",".join(map(str, ts)), want), d))

    # fusion fillers, twenty seeds per crossing count so sizes spread
    for c in (6, 7, 8, 9, 10):
        for k in range(20):
            seed = [20260819, c, k]
            try:
                d = gen_sym(GenConfig(c, c, 400), seed=seed)
            except Exception as e:
                print("gen_sym c=%d k=%d: %s" % (c, k, e), flush=True)
                continue
            pool.append(("f", "fusion c=%d seed=20260819.%d.%d" % (c, c, k), d))

    print("pool: %d candidates" % len(pool), flush=True)

    seen = {}
    kept = []
    counters = {}
    for kind, meta, d in pool:
        d, _ = simplify(d)
        c = len(d.crossings)
        if not 3 <= c <= 10:
            print("drop [%s] window c=%d" % (meta, c), flush=True)
            continue
        key = jones_key(d)
        if key == ((0, 1),):
            print("drop [%s] trivial Jones" % meta, flush=True)
            continue
        if key in seen:
            print("drop [%s] same Jones as [%s]" % (meta, seen[key]), flush=True)
            continue
        seen[key] = meta
        t0 = time.time()
        res = search(d, BAYES_WEIGHTS, stop=dict(STOP), seed=CERT_SEED)
        dt = time.time() - t0
        if res.certificate is None:
            print("drop [%s] unsolved after %d episodes %.0fs" % (meta, res.episodes, dt), flush=True)
            continue
        chk = verify(res.certificate)
        assert chk.valid, chk.reason
        n = counters.get((kind, c), 0) + 1
        counters[(kind, c)] = n
        name = "%s%d.%d" % (kind, c, n)
        kept.append((name, meta, d, res, dt))
        print("keep %s [%s] bands=%d episodes=%d %.1fs" % (
            name, meta, res.certificate.band_count, res.episodes, dt), flush=True)
        if len(kept) >= TARGET + 3:
            break

    kept = kept[:TARGET]
    os.makedirs(CERT_DIR, exist_ok=True)
    out = os.path.join(DATA_DIR, "ribbon_small.pd")
    with open(out, "w") as fh:
        fh.write("# ribbonwalk-dataset v1\n")
        fh.write("# small ribbon census, locally constructed, <= 10 crossings\n")
        fh.write("# certified seed=%d budget=%s\n" % (CERT_SEED, STOP))
        for name, meta, d, res, dt in kept:
            fh.write("# %s %s bands=%d episodes=%d secs=%.1f\n" % (
                name, meta, res.certificate.band_count, res.episodes, dt))
            fh.write(serialize_pd(d) + "\n")
    for name, meta, d, res, dt in kept:
        with open(os.path.join(CERT_DIR, name + ".cert"), "w") as fh:
            fh.write(serialize(res.certificate))
    print("wrote %d entries to %s in %.0fs" % (len(kept), out, time.time() - t_start), flush=True)


if __name__ == "__main__":
    main()
