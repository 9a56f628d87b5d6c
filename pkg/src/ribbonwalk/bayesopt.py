"""Gaussian-process optimization of walker parameters.

Plain single-task Bayesian optimization: a Matern 5/2 kernel with
per-dimension lengthscales, hyperparameters set by maximizing the log
marginal likelihood from a few seeded restarts, and expected
improvement as the acquisition.  Rewards are treated as something to
maximize; objective evaluations that blow up count as reward 0 so one
bad parameter vector cannot stop a run.

Everything takes explicit seeds and is deterministic given them.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.optimize import minimize
from scipy.stats import norm

# numerical stabilizer always present; real jitter starts at 1e-6 and
# is added only when the factorization actually needs the help
STABILIZER = 1e-12
JITTER_LADDER = (0.0, 1e-6, 1e-5, 1e-4)


class SingularCovariance(ValueError):
    pass


class Observation(NamedTuple):
    x: tuple
    y: float


class GpModel(NamedTuple):
    x: np.ndarray          # (n, d) inputs
    y: np.ndarray          # (n,) raw rewards
    lengthscales: np.ndarray
    signal_var: float
    noise_var: float
    mean: float            # prior mean constant
    chol: object           # cho_factor of K, or None with no observations
    alpha: object          # K^-1 (y - mean) in standardized space
    y_scale: float


def _scaled_dist(xa, xb, ls):
    diff = xa[:, None, :] - xb[None, :, :]
    return np.sqrt(np.maximum((diff / ls) ** 2, 0.0).sum(-1))


def matern52(xa, xb, lengthscales, signal_var):
    r = _scaled_dist(np.asarray(xa, float), np.asarray(xb, float), lengthscales)
    s5r = math.sqrt(5.0) * r
    return signal_var * (1.0 + s5r + (5.0 / 3.0) * r * r) * np.exp(-s5r)


def _factor(x, ls, sv, nv):
    for bump in JITTER_LADDER:
        try:
            k = matern52(x, x, ls, sv) + (nv + bump + STABILIZER) * np.eye(len(x))
            return cho_factor(k, lower=True), nv + bump
        except LinAlgError:
            continue
    raise SingularCovariance("covariance not positive definite with jitter up to %g" % JITTER_LADDER[-1])


def make_gp(observations, lengthscales, signal_var, noise_var=0.0, mean=0.0):
    """Build a model at fixed hyperparameters; no observations is a prior."""
    obs = list(observations)
    d = len(lengthscales)
    ls = np.asarray(lengthscales, dtype=float)
    if not obs:
        e = np.empty((0, d))
        return GpModel(e, np.empty(0), ls, float(signal_var), float(noise_var), float(mean), None, None, 1.0)
    x = np.array([o.x for o in obs], dtype=float)
    y = np.array([o.y for o in obs], dtype=float)
    c, nv = _factor(x, ls, float(signal_var), float(noise_var))
    alpha = cho_solve(c, y - mean)
    return GpModel(x, y, ls, float(signal_var), nv, float(mean), c, alpha, 1.0)


def _nll(log_params, x, ys):
    d = x.shape[1]
    ls = np.exp(log_params[:d])
    sv = math.exp(log_params[d])
    nv = math.exp(log_params[d + 1]) + STABILIZER
    k = matern52(x, x, ls, sv) + nv * np.eye(len(x))
    try:
        c = cho_factor(k, lower=True)
    except LinAlgError:
        return 1e12
    alpha = cho_solve(c, ys)
    return float(0.5 * ys @ alpha + np.log(np.diag(c[0])).sum() + 0.5 * len(x) * math.log(2 * math.pi))


def fit_gp(observations, seed=0, restarts=4):
    """Fit kernel hyperparameters by maximizing the marginal likelihood."""
    x = np.array([o.x for o in observations], dtype=float)
    y = np.array([o.y for o in observations], dtype=float)
    if x.ndim != 2 or len(x) < 2:
        raise ValueError("need at least two observations to fit")
    y_mean = float(y.mean())
    y_scale = float(y.std()) or 1.0
    ys = (y - y_mean) / y_scale
    d = x.shape[1]
    span = np.maximum(x.max(0) - x.min(0), 1e-3)

    rng = np.random.default_rng([seed, len(observations)])
    best = None
    starts = [np.concatenate([np.log(span), [0.0, math.log(1e-3)]])]
    for _ in range(restarts - 1):
        starts.append(
            np.concatenate(
                [
                    np.log(span) + rng.normal(0, 1, d),
                    [rng.normal(0, 1), math.log(1e-3) + rng.normal(0, 1)],
                ]
            )
        )
    bounds = [(math.log(s) - 6, math.log(s) + 6) for s in span]
    bounds += [(-8.0, 8.0), (math.log(1e-12), 2.0)]
    for p0 in starts:
        res = minimize(_nll, p0, args=(x, ys), method="L-BFGS-B", bounds=bounds)
        if best is None or res.fun < best.fun:
            best = res
    p = best.x
    ls = np.exp(p[:d])
    sv = math.exp(p[d])
    c, nv = _factor(x, ls, sv, math.exp(p[d + 1]))
    alpha = cho_solve(c, ys)
    return GpModel(x, y, ls, sv, nv, y_mean, c, alpha, y_scale)


def gp_posterior(model, w):
    """Posterior mean and variance at w, in raw reward units.

    A single point gives scalars, a batch of rows gives arrays.
    """
    q = np.asarray(w, dtype=float)
    single = q.ndim == 1
    q = np.atleast_2d(q)
    prior_var = model.signal_var + model.noise_var
    if model.chol is None:
        mu = np.full(len(q), model.mean)
        var = np.full(len(q), prior_var)
    else:
        ks = matern52(q, model.x, model.lengthscales, model.signal_var)
        mu = ks @ model.alpha * model.y_scale + model.mean
        v = cho_solve(model.chol, ks.T)
        var = np.maximum(prior_var - np.einsum("ij,ji->i", ks, v), 0.0) * model.y_scale**2
    if single:
        return float(mu[0]), float(var[0])
    return mu, var


def _ei(mu, sigma, best):
    mu = np.asarray(mu, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    out = np.zeros_like(mu)
    live = sigma > 1e-12
    g = (mu[live] - best) / sigma[live]
    out[live] = sigma[live] * (g * norm.cdf(g) + norm.pdf(g))
    return np.maximum(out, 0.0)


def expected_improvement(model, w):
    """EI over the best observed reward; zero wherever sigma vanishes."""
    if model.chol is None:
        raise ValueError("expected improvement needs at least one observation")
    q = np.asarray(w, dtype=float)
    single = q.ndim == 1
    mu, var = gp_posterior(model, np.atleast_2d(q))
    out = _ei(mu, np.sqrt(var), float(model.y.max()))
    return float(out[0]) if single else out


def propose_next(model, bounds, seed=0, n_candidates=4096):
    """Argmax of EI over seeded uniform candidates plus a local polish."""
    lo = np.array([b[0] for b in bounds], dtype=float)
    hi = np.array([b[1] for b in bounds], dtype=float)
    rng = np.random.default_rng([seed, len(model.y)])
    cand = rng.uniform(lo, hi, size=(n_candidates, len(bounds)))
    ei = expected_improvement(model, cand)
    x0 = cand[int(np.argmax(ei))]

    def neg_ei(x):
        return -expected_improvement(model, np.asarray(x))

    res = minimize(neg_ei, x0, method="L-BFGS-B", bounds=bounds)
    x = np.clip(res.x if res.fun <= neg_ei(x0) else x0, lo, hi)
    return tuple(float(v) for v in x)


def optimize(objective, bounds, n_init=10, n_iter=50, seed=0, history=None):
    """Sequentially optimize a noisy objective over a box.

    objective(x: tuple) -> float reward; exceptions score 0.  Returns
    (best_x, history); pass a previous history back in to resume.
    """
    history = list(history or [])
    lo = np.array([b[0] for b in bounds], dtype=float)
    hi = np.array([b[1] for b in bounds], dtype=float)

    def run(x):
        try:
            return float(objective(tuple(x)))
        except Exception:
            return 0.0

    k = len(history)
    while len(history) < n_init:
        rng = np.random.default_rng([seed, 0, k])
        x = tuple(float(v) for v in rng.uniform(lo, hi))
        history.append(Observation(x, run(x)))
        k += 1
    for _ in range(max(0, n_init + n_iter - len(history))):
        try:
            model = fit_gp(history, seed=seed)
            x = propose_next(model, bounds, seed=seed)
        except (SingularCovariance, ValueError):
            rng = np.random.default_rng([seed, 3, len(history)])
            x = tuple(float(v) for v in rng.uniform(lo, hi))
        history.append(Observation(x, run(x)))
    best = max(history, key=lambda o: o.y)
    return best.x, history
