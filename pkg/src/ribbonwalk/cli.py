"""Command line front end.

Subcommands: search (hunt for a certificate), generate (sample knot
datasets), optimize (tune walker weights on a training set), verify
(replay certificates), bench (solve rates over a dataset).  Exit code
0 means the requested thing happened, 1 is an honest negative (no
certificate found, a certificate failed verification), 2 is bad input
or usage.

Output files are written to a temporary sibling and renamed into
place, so a killed run never leaves a half-written dataset or
history.  Set RIBBON_LOG=debug (or info, warning) to see progress on
stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor

from .band import EpisodeConfig
from .bayesopt import Observation, optimize
from .certificate import ParseError, deserialize, serialize, verify
from .diagram import PdError, parse_pd
from .generators import (GenConfig, RejectionExhausted, dataset, figure_eight,
                         square_knot, trefoil, unknot)
from .walker import BAYES_WEIGHTS, NAIVE_WEIGHTS, WeightVector, search

log = logging.getLogger("ribbonwalk")

NAMED_KNOTS = {
    "unknot": unknot,
    "trefoil": trefoil,
    "figure_eight": figure_eight,
    "fig8": figure_eight,
    "square_knot": square_knot,
    "square": square_knot,
}

HISTORY_HEADER = "# ribbonwalk-history v1"
BENCH_HEADER = "# ribbonwalk-bench v1"
DATASET_HEADER = "# ribbonwalk-dataset v1"

# optimize searches log10 of (w_end, w_twist, max_steps); the other
# weights stay at the gauge value 1
OPT_BOUNDS = [(-1.0, 2.0), (-1.0, 2.0), (1.0, 4.0)]


def _write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".ribbonwalk-")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _emit(text, out):
    if out:
        _write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _load_knot(spec):
    """A knot argument: a named knot, a PD string, or a file of one."""
    if spec in NAMED_KNOTS:
        return NAMED_KNOTS[spec]()
    if os.path.exists(spec):
        with open(spec) as f:
            lines = [l.strip() for l in f if l.strip() and not l.startswith("#")]
        if len(lines) != 1:
            raise PdError("%s holds %d diagrams, expected one" % (spec, len(lines)))
        return parse_pd(lines[0])
    return parse_pd(spec)


def _load_dataset(path):
    with open(path) as f:
        lines = [l.strip() for l in f if l.strip() and not l.startswith("#")]
    if not lines:
        raise PdError("no diagrams in %s" % path)
    return [parse_pd(l) for l in lines]


def _parse_weights(text):
    if text == "bayes":
        return BAYES_WEIGHTS
    if text == "naive":
        return NAIVE_WEIGHTS
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 5:
        raise ValueError(
            "weights must be 'bayes', 'naive', or five comma-separated values "
            "w_start,w_end,w_over,w_under,w_twist"
        )
    return WeightVector(*parts)


def _parse_range(text):
    lo, _, hi = text.partition(":")
    try:
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise ValueError("range must look like lo:hi, got %r" % text)
    if not 0 < lo <= hi:
        raise ValueError("range needs 0 < lo <= hi, got %s" % text)
    return lo, hi


def _parse_mode(text):
    kind, _, val = text.partition(":")
    if kind == "episodes":
        return {"episodes": int(val)}
    if kind == "timeout":
        return {"timeout": float(val)}
    raise ValueError("mode must be episodes:N or timeout:SECONDS, got %r" % text)


def _episode_cfg(args):
    cfg = EpisodeConfig()
    if getattr(args, "max_bands", 0):
        cfg = cfg._replace(max_bands=args.max_bands)
    if getattr(args, "max_steps", 0):
        cfg = cfg._replace(max_steps=args.max_steps)
    return cfg


def cmd_search(args):
    d = _load_knot(args.knot)
    if args.timeout_secs:
        stop = {"timeout": args.timeout_secs}
        log.warning("wall-clock stop: rerunning will not reproduce this result")
    else:
        stop = {"episodes": args.episodes}
    res = search(d, _parse_weights(args.weights), cfg=_episode_cfg(args), stop=stop, seed=args.seed)
    if res.solved:
        print(
            "solved in %d episodes (%.2fs)" % (res.episodes, res.seconds),
            file=sys.stderr,
        )
        text = serialize(res.certificate)
        _emit(text if text.endswith("\n") else text + "\n", args.out)
        return 0
    print("no certificate after %d episodes (%.2fs)" % (res.episodes, res.seconds), file=sys.stderr)
    print("losses: %s" % res.loss_line, file=sys.stderr)
    return 1


def cmd_generate(args):
    lo, hi = _parse_range(args.range)
    cfg = GenConfig(lo, hi)
    knots = dataset(args.method, args.count, cfg, seed=args.seed)
    head = "%s\n# method=%s count=%d seed=%d crossings=%d..%d\n" % (
        DATASET_HEADER,
        args.method,
        args.count,
        args.seed,
        lo,
        hi,
    )
    _emit(head + "".join(d.serialize() + "\n" for d in knots), args.out)
    return 0


def cmd_verify(args):
    bad = 0
    for path in args.certificate:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path) as f:
                text = f.read()
        cert = deserialize(text)
        res = verify(cert)
        if res.valid:
            print("%s: OK (%d bands)" % (path, cert.band_count))
        else:
            print("%s: FAIL at step %s: %s" % (path, res.step, res.reason))
            bad += 1
    return 1 if bad else 0


def _history_csv(history):
    buf = io.StringIO()
    buf.write(HISTORY_HEADER + "\n")
    w = csv.writer(buf)
    w.writerow(["iteration", "log10_w_end", "log10_w_twist", "log10_max_steps", "reward", "best_so_far"])
    best = float("-inf")
    for i, o in enumerate(history):
        best = max(best, o.y)
        w.writerow([i] + ["%.10g" % v for v in o.x] + ["%.10g" % o.y, "%.10g" % best])
    return buf.getvalue()


def _read_history(path):
    with open(path) as f:
        first = f.readline().rstrip("\n")
        if first != HISTORY_HEADER:
            raise ValueError("%s is not a ribbonwalk history file" % path)
        rows = list(csv.reader(f))
    out = []
    for row in rows[1:]:
        vals = [float(v) for v in row[1:-1]]
        out.append(Observation(tuple(vals[:-1]), vals[-1]))
    return out


def _weights_of(x):
    return WeightVector.from_free(10.0 ** x[0], 1.0, 10.0 ** x[1])


def _solve_reward(task):
    pd, x, stop, seed = task
    cfg = EpisodeConfig()._replace(max_steps=int(round(10.0 ** x[2])))
    res = search(parse_pd(pd), _weights_of(x), cfg=cfg, stop=stop, seed=seed)
    if not res.solved:
        return 0.0
    if "episodes" in stop:
        n = stop["episodes"]
        return (n - res.episodes + 1) / n
    return 1.0


def cmd_optimize(args):
    knots = [d.serialize() for d in _load_dataset(args.dataset)]
    if args.timeout_per_knot:
        stop = {"timeout": args.timeout_per_knot}
        log.warning("wall-clock objective: rewards will vary run to run")
    else:
        stop = {"episodes": args.episodes_per_knot}
    history = []
    if args.out and os.path.exists(args.out):
        history = _read_history(args.out)
        log.info("resuming from %d observations", len(history))
    pool = ProcessPoolExecutor(args.jobs) if args.jobs > 1 else None

    def objective(x):
        tasks = [(pd, x, stop, [args.seed, 5, i]) for i, pd in enumerate(knots)]
        rewards = list(pool.map(_solve_reward, tasks) if pool else map(_solve_reward, tasks))
        r = sum(rewards) / len(rewards)
        log.info("reward %.3f at %s", r, ["%.2f" % v for v in x])
        if args.out:
            _write_atomic(args.out, _history_csv(history + [Observation(tuple(x), r)]))
        return r

    try:
        best, history = optimize(
            objective,
            OPT_BOUNDS,
            n_init=args.n_init,
            n_iter=args.n_iter,
            seed=args.seed,
            history=history,
        )
    finally:
        if pool:
            pool.shutdown()
    if args.out:
        _write_atomic(args.out, _history_csv(history))
    wv = _weights_of(best)
    print(
        "best reward %.3f  weights %g,%g,%g,%g,%g  max_steps %d"
        % (
            max(o.y for o in history),
            wv.w_start,
            wv.w_end,
            wv.w_over,
            wv.w_under,
            wv.w_twist,
            int(round(10.0 ** best[2])),
        )
    )
    return 0


def _bench_one(task):
    i, pd, weights, stop, cfg, seed = task
    d = parse_pd(pd)
    res = search(d, weights, cfg=cfg, stop=stop, seed=seed)
    bands = res.certificate.band_count if res.solved else 0
    return (i, d.crossing_count, int(bool(res.solved)), bands, res.episodes, res.seconds, seed)


def cmd_bench(args):
    knots = [d.serialize() for d in _load_dataset(args.dataset)]
    stop = _parse_mode(args.mode)
    note = ""
    if "timeout" in stop:
        note = " (wall-clock; not reproducible)"
        log.warning("wall-clock stop: solve rates will vary run to run")
    wv = _parse_weights(args.weights)
    cfg = _episode_cfg(args)
    tasks = [(i, pd, wv, stop, cfg, [args.seed, i]) for i, pd in enumerate(knots)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_bench_one, tasks))
    else:
        rows = [_bench_one(t) for t in tasks]
    buf = io.StringIO()
    buf.write(BENCH_HEADER + "\n")
    buf.write("# mode=%s seed=%d weights=%s%s\n" % (args.mode, args.seed, args.weights, note))
    w = csv.writer(buf)
    w.writerow(["index", "crossings", "solved", "bands", "episodes", "seconds", "seed"])
    for r in sorted(rows):
        w.writerow(r[:5] + ("%.3f" % r[5], "%d:%d" % tuple(r[6])))
    if args.out:
        _write_atomic(args.out, buf.getvalue())
    solved = sum(r[2] for r in rows)
    print("solved %d/%d" % (solved, len(rows)))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="ribbonwalk", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("search", help="search one knot for a ribbon certificate")
    p.add_argument("knot", help="PD string, file with one PD line, or a named knot")
    p.add_argument("--weights", default="bayes", help="'bayes', 'naive', or five comma-separated weights")
    p.add_argument("--episodes", type=int, default=1000)
    p.add_argument("--timeout-secs", type=float, default=0.0, help="stop on wall clock instead (not reproducible)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-bands", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=0)
    p.add_argument("--out", help="write the certificate here instead of stdout")
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("generate", help="sample a ribbon knot dataset")
    p.add_argument("--method", required=True, choices=["sym", "unsym"])
    p.add_argument("--range", default="15:30", help="crossing window lo:hi")
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("optimize", help="tune walker weights on a dataset")
    p.add_argument("--dataset", required=True, help="dataset file of PD lines")
    p.add_argument("--episodes-per-knot", type=int, default=100, help="episode budget per knot")
    p.add_argument("--timeout-per-knot", type=float, default=0.0, help="seconds per knot instead (not reproducible)")
    p.add_argument("--n-init", type=int, default=10)
    p.add_argument("--n-iter", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="history CSV; reused to resume")
    p.set_defaults(fn=cmd_optimize)

    p = sub.add_parser("verify", help="replay certificates independently")
    p.add_argument("certificate", nargs="+", help="certificate files, or - for stdin")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bench", help="solve rates over a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--mode", default="episodes:100", help="episodes:N or timeout:SECONDS")
    p.add_argument("--weights", default="bayes", help="'bayes', 'naive', or five comma-separated weights")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-bands", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="write per-knot results CSV here")
    p.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None):
    level = os.environ.get("RIBBON_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (PdError, ParseError, RejectionExhausted, ValueError, OSError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
