"""Beta-uniform mixture weight model.

Noise vertices have weights ~ U(0, 1) and module ("signal") vertices have
weights ~ Beta(alpha, 1), whose density is ``alpha * w**(alpha - 1)``. The
log of that density is the per-vertex score used by the rankers; the mixture
``lam + (1 - lam) * alpha * w**(alpha - 1)`` is what :func:`fit_bum` fits.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.stats import chi2

log = logging.getLogger(__name__)

#: Replacement for weights that are exactly zero when read from files.
ZERO_WEIGHT_CLAMP = 1e-12
#: Floor for sampled weights; ``u ** (1 / alpha)`` underflows for small alpha.
SAMPLE_FLOOR = float(np.finfo(float).tiny)

_EPS = 1e-6
_TOL = 1e-4
# chi-square(2) 95% quantile
_NOISE_LR_CRITICAL = float(chi2.ppf(0.95, 2))


@dataclass(frozen=True)
class BumParams:
    alpha: float
    lam: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError(f"alpha must be in (0, 1], got {self.alpha}")
        if not 0 <= self.lam <= 1:
            raise ValueError(f"lambda must be in [0, 1], got {self.lam}")


def vertex_score(w, alpha: float):
    """Log-likelihood score ``log(alpha * w**(alpha - 1))``.

    Works on scalars and arrays. Zero weights raise ``ValueError``; clamp
    them before scoring.
    """
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    arr = np.asarray(w, dtype=float)
    if np.any(arr <= 0) or np.any(arr > 1):
        raise ValueError("weights must lie in (0, 1]")
    out = np.log(alpha) + (alpha - 1.0) * np.log(arr)
    if np.ndim(w) == 0:
        return float(out)
    return out


def score_vector(weights, alpha: float) -> np.ndarray:
    return np.atleast_1d(vertex_score(np.asarray(weights, dtype=float), alpha))


def positive_score_threshold(alpha: float) -> float:
    """Weight below which a vertex score is positive."""
    return alpha ** (1.0 / (1.0 - alpha))


def sample_weights(n: int, module: Iterable[int], alpha: float,
                   rng_seed) -> np.ndarray:
    """Draw one weight per vertex: Beta(alpha, 1) on the module, U(0, 1) elsewhere.

    Beta draws use the inverse transform ``u ** (1 / alpha)`` of the same
    uniform stream, so the result depends only on the seed and the module.
    """
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    rng = np.random.default_rng(rng_seed)
    u = rng.random(n)
    w = u.copy()
    idx = np.fromiter(module, dtype=np.int64)
    if idx.size:
        w[idx] = u[idx] ** (1.0 / alpha)
    w = np.maximum(w, SAMPLE_FLOOR)
    # rng.random is in [0, 1): a 0.0 draw is floored above
    return w


def clamp_zero_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float).copy()
    zeros = w == 0
    if zeros.any():
        log.warning("clamping %d zero weight(s) to %g", int(zeros.sum()),
                    ZERO_WEIGHT_CLAMP)
        w[zeros] = ZERO_WEIGHT_CLAMP
    return w


def bum_loglik(weights, alpha: float, lam: float) -> float:
    """Log-likelihood of the mixture at ``(alpha, lam)``."""
    w = np.asarray(weights, dtype=float)
    dens = lam + (1.0 - lam) * alpha * np.power(w, alpha - 1.0)
    return float(np.sum(np.log(dens)))


def pure_beta_mle(weights) -> float:
    """Closed-form MLE of alpha when every weight is Beta(alpha, 1)."""
    w = np.asarray(weights, dtype=float)
    return float(-w.size / np.sum(np.log(w)))


def fit_bum(weights, grid: int = 40) -> BumParams:
    """Maximum-likelihood fit of the beta-uniform mixture.

    A coarse grid over ``(alpha, lam)`` picks the starting point, then
    bounded one-dimensional maximisation alternates between the two
    coordinates until neither moves by more than 1e-4. If a likelihood-ratio
    test (5% level) cannot tell the fit apart from pure noise, ``lam`` is
    reported as 1.
    """
    w = np.asarray(weights, dtype=float)
    if w.size < 10:
        raise ValueError("need at least 10 weights to fit the mixture")
    if np.any(w <= 0) or np.any(w > 1):
        raise ValueError("weights must lie in (0, 1]")
    if np.ptp(w) == 0:
        raise ValueError("cannot fit the mixture: all weights are identical")
    logw = np.log(w)

    def ll(a, lam):
        dens = lam + (1.0 - lam) * a * np.exp((a - 1.0) * logw)
        return float(np.sum(np.log(dens)))

    alphas = np.linspace(_EPS, 1 - _EPS, grid)
    lams = np.linspace(0.0, 1.0, grid + 1)
    best = (-np.inf, 0.5, 0.5)
    for a in alphas:
        for lam in lams:
            val = ll(a, lam)
            if val > best[0]:
                best = (val, a, lam)
    _, a, lam = best

    for _ in range(200):
        a_new = minimize_scalar(lambda x: -ll(x, lam), bounds=(_EPS, 1.0),
                                method="bounded", options={"xatol": _TOL / 10}).x
        lam_new = minimize_scalar(lambda x: -ll(a_new, x), bounds=(0.0, 1.0),
                                  method="bounded", options={"xatol": _TOL / 10}).x
        moved = max(abs(a_new - a), abs(lam_new - lam))
        a, lam = a_new, lam_new
        if moved < _TOL:
            break
    # pure noise (lam = 1) has log-likelihood 0 for any alpha; when the mixture
    # is not significantly better, lam is unidentifiable and noise is reported
    if 2.0 * ll(a, lam) < _NOISE_LR_CRITICAL:
        lam = 1.0
    return BumParams(float(min(max(a, _EPS), 1.0)), float(min(max(lam, 0.0), 1.0)))
