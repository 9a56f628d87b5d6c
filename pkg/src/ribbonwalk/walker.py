"""Weighted random walk over the band actions.

The policy is as blunt as it looks: every legal action is weighted by
its kind, nothing else.  sample_action draws from that distribution.
The interesting behavior is entirely in which kinds get favored; the
shipped default strongly prefers ending a band over wandering, with a
mild taste for twisting, which is what tuning on generated ribbon
knots repeatedly lands on.
"""

from __future__ import annotations

import time
from collections import Counter
from typing import NamedTuple, Optional

import numpy as np

from .band import EpisodeConfig, legal_actions, run_episode
from .simplify import simplify


class NoLegalActions(ValueError):
    pass


class WeightVector(NamedTuple):
    w_start: float = 1.0
    w_end: float = 1.0
    w_over: float = 1.0
    w_under: float = 1.0
    w_twist: float = 1.0

    def of_kind(self, kind):
        return getattr(self, "w_" + kind)

    @staticmethod
    def from_free(w_end, w_under, w_twist):
        """The sampling distribution only sees weight ratios, so w_start
        and w_over stay pinned at 1."""
        return WeightVector(1.0, float(w_end), 1.0, float(w_under), float(w_twist))


BAYES_WEIGHTS = WeightVector(1.0, 17.0, 1.0, 1.0, 3.0)
NAIVE_WEIGHTS = WeightVector(1.0, 1.0, 1.0, 1.0, 1.0)


def sample_action(s, wv, rng, cfg=None, legal=None):
    """Draw one action; probability of each is proportional to the
    weight of its kind."""
    if legal is None:
        legal = legal_actions(s, cfg if cfg is not None else EpisodeConfig())
    if not legal:
        raise NoLegalActions("state offers no legal action")
    w = np.array([wv.of_kind(a.kind) for a in legal], dtype=float)
    return legal[rng.choice(len(legal), p=w / w.sum())]


def make_policy(wv):
    def policy(state, legal, rng):
        return sample_action(state, wv, rng, legal=legal)

    return policy


class SearchResult(NamedTuple):
    solved: bool
    certificate: object
    episodes: int
    seconds: float
    losses: dict
    seed: int

    @property
    def loss_line(self):
        return " ".join("%s:%d" % kv for kv in sorted(self.losses.items()))


def search(d, wv=BAYES_WEIGHTS, cfg=None, stop=None, seed=0):
    """Run episodes until one wins or the stop rule fires.

    stop: {"episodes": n} and/or {"timeout": seconds}.  With an episode
    bound alone the run is bit-reproducible: episode k draws from
    numpy's default_rng seeded with [seed, k].  A timeout makes the
    episode count depend on the clock, so reproducibility is lost.
    """
    if cfg is None:
        cfg = EpisodeConfig()
    if stop is None:
        stop = {"episodes": 1000}
    initial = d.normalize()
    searched, pre_trace = simplify(initial)
    policy = make_policy(wv)
    losses = Counter()
    t0 = time.perf_counter()
    ep = 0
    while True:
        if "episodes" in stop and ep >= stop["episodes"]:
            break
        if "timeout" in stop and time.perf_counter() - t0 >= stop["timeout"]:
            break
        out = run_episode(
            searched, policy, cfg, seed=[seed, ep], initial=initial, pre_trace=pre_trace
        )
        ep += 1
        if out.win:
            cert = out.certificate
            cert.metadata.setdefault("seed", str(seed))
            cert.metadata.setdefault("episode", str(ep - 1))
            cert.metadata.setdefault(
                "weights", ":".join("%g" % x for x in wv)
            )
            cert.metadata.setdefault("seconds", "%.3f" % (time.perf_counter() - t0))
            from . import __version__

            cert.metadata.setdefault("version", __version__)
            return SearchResult(True, cert, ep, time.perf_counter() - t0, dict(losses), seed)
        losses[out.reason] += 1
    return SearchResult(False, None, ep, time.perf_counter() - t0, dict(losses), seed)
