"""Adaptive erasing strategies for single-trial error/erasure decoding.

The number of errors among the n - tau non-erased symbols is a
Poisson-binomial random variable; its distribution is the coefficient
sequence of the product of the per-symbol generating polynomials
1 - h_i + rho * h_i. The residual codeword error probability after erasing
the tau most unreliable symbols and decoding once is the tail mass beyond
the decoder's capability eps0(tau). Three choosers for tau are provided:
the exact minimizer, a Hoeffding-window approximation, and the
two-coefficient eps0 approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .dcf import NO_CAPABILITY, DecoderCapability

#: below this unreliability the deflation recurrence (division by h) is
#: considered unstable and the caller recomputes from scratch
DEFLATION_THRESHOLD = 1e-3


class DeflationUnstable(ArithmeticError):
    """Signal that the removed factor is too small for stable deflation."""


class StrategyKind(Enum):
    EXACT = "exact"
    HOEFFDING = "hoeffding"
    EPS0 = "eps0"


@dataclass
class ErrorCountDistribution:
    """Pr(Y_tau = eps) for eps = 0..n-tau."""

    tau: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float)

    def normalization_defect(self) -> float:
        return abs(float(self.coeffs.sum()) - 1.0)


@dataclass(frozen=True)
class StrategyResult:
    tau_chosen: int
    predicted_p: float
    strategy_kind: StrategyKind


def check_sorted_unreliability(h) -> np.ndarray:
    h = np.asarray(h, dtype=float)
    if np.any(h < 0) or np.any(h >= 1):
        raise ValueError("unreliabilities must lie in [0, 1)")
    if np.any(np.diff(h) > 0):
        raise ValueError("unreliability vector must be sorted non-increasing")
    return h


def pgf_distribution(h, tau: int) -> ErrorCountDistribution:
    """Error-count distribution of the non-erased tail h[tau:].

    Iterative degree-growing polynomial multiplication, O((n - tau)^2).
    """
    h = check_sorted_unreliability(h)
    if not 0 <= tau <= len(h):
        raise ValueError(f"tau out of range: {tau}")
    coeffs = np.array([1.0])
    for p in h[tau:]:
        nxt = np.empty(len(coeffs) + 1)
        nxt[:-1] = coeffs * (1.0 - p)
        nxt[-1] = 0.0
        nxt[1:] += coeffs * p
        coeffs = nxt
    np.clip(coeffs, 0.0, None, out=coeffs)
    return ErrorCountDistribution(tau, coeffs)


def deflate(dist: ErrorCountDistribution, h_tau: float) -> ErrorCountDistribution:
    """Remove the Bernoulli factor with success probability h_tau.

    Divides the generating polynomial by 1 - h_tau + rho*h_tau with the
    top-down recurrence q_{j-1} = (p_j - (1-h) q_j) / h. Raises
    DeflationUnstable when h_tau is below the stability threshold; the
    caller then recomputes the distribution from scratch.
    """
    if h_tau < DEFLATION_THRESHOLD:
        raise DeflationUnstable(f"h_tau={h_tau} below deflation threshold")
    p = dist.coeffs
    deg = len(p) - 1
    if deg < 1:
        raise ValueError("cannot deflate a degree-0 distribution")
    q = np.empty(deg)
    one_minus = 1.0 - h_tau
    q[deg - 1] = p[deg] / h_tau
    for j in range(deg - 1, 0, -1):
        q[j - 1] = (p[j] - one_minus * q[j]) / h_tau
    np.clip(q, 0.0, None, out=q)
    return ErrorCountDistribution(dist.tau + 1, q)


def expectation(h, tau: int) -> float:
    """E{Y_tau} = sum of the non-erased unreliabilities."""
    h = check_sorted_unreliability(h)
    if not 0 <= tau <= len(h):
        raise ValueError(f"tau out of range: {tau}")
    return float(np.sum(h[tau:]))


def residual_error_prob(dist: ErrorCountDistribution, eps0: int) -> float:
    """1 - Pr(Y_tau <= eps0), clamped to [0, 1]; eps0 = -1 means no capability."""
    if eps0 < NO_CAPABILITY:
        raise ValueError(f"eps0 must be >= {NO_CAPABILITY}")
    if eps0 <= NO_CAPABILITY:
        return 1.0
    head = float(dist.coeffs[: eps0 + 1].sum())
    return min(1.0, max(0.0, 1.0 - head))


def _tau_range(cap: DecoderCapability) -> range:
    return range(0, cap.code.d_min)


def _head_coeffs(h, tau: int, width: int) -> np.ndarray:
    """First `width` coefficients of the tau-distribution by truncated
    convolution, O((n - tau) * width).

    Repeatedly deflating one distribution into the next would be cheaper,
    but polynomial deflation is badly conditioned over long chains (errors
    amplify through the shifting coefficient profile), so each tau is
    computed from scratch on the prefix that the approximations actually
    read.
    """
    coeffs = np.zeros(width)
    coeffs[0] = 1.0
    for p in h[tau:]:
        coeffs[1:] = coeffs[1:] * (1.0 - p) + coeffs[:-1] * p
        coeffs[0] *= 1.0 - p
    return coeffs


def tau_star_exact(h, cap: DecoderCapability) -> StrategyResult:
    """Minimize the exact residual error probability over tau (O(n^3))."""
    h = check_sorted_unreliability(h)
    best_tau = 0
    best_p = math.inf
    for tau in _tau_range(cap):
        dist = pgf_distribution(h, tau)
        p = residual_error_prob(dist, cap.epsilon0(tau))
        if p < best_p:
            best_p = p
            best_tau = tau
    return StrategyResult(best_tau, best_p, StrategyKind.EXACT)


def hoeffding_half_width(n: int) -> int:
    """Integer window half-width ceil(s) with s = sqrt(-ln(0.005) * 2n)."""
    return math.ceil(math.sqrt(-math.log(0.005) * 2.0 * n))


def tau_star_hoeffding(h, cap: DecoderCapability) -> StrategyResult:
    """Approximate each P(tau) by the window of Pr(Y_tau = eps) around E{Y_tau}."""
    h = check_sorted_unreliability(h)
    w = hoeffding_half_width(len(h))
    best_tau = 0
    best_p = math.inf
    mean = float(np.sum(h))
    for tau in _tau_range(cap):
        if tau > 0:
            mean -= float(h[tau - 1])
        eps0 = cap.epsilon0(tau)
        if eps0 <= NO_CAPABILITY:
            p = 1.0
        else:
            lo = max(0, math.ceil(mean - w))
            hi = min(int(math.floor(mean + w)), eps0, len(h) - tau)
            if hi >= lo:
                coeffs = _head_coeffs(h, tau, hi + 1)
                p = min(1.0, max(0.0, 1.0 - float(coeffs[lo:].sum())))
            else:
                p = 1.0
        if p < best_p:
            best_p = p
            best_tau = tau
    return StrategyResult(best_tau, best_p, StrategyKind.HOEFFDING)


def tau_star_eps0(h, cap: DecoderCapability) -> StrategyResult:
    """Two-coefficient surrogate: 1 - Pr(Y=eps0) when E{Y} > eps0, else
    Pr(Y=eps0+1); only the first eps0+2 coefficients are ever computed."""
    h = check_sorted_unreliability(h)
    best_tau = 0
    best_p = math.inf
    mean = float(np.sum(h))
    for tau in _tau_range(cap):
        if tau > 0:
            mean -= float(h[tau - 1])
        eps0 = cap.epsilon0(tau)
        deg = len(h) - tau
        if eps0 <= NO_CAPABILITY:
            p = 1.0
        elif mean > eps0:
            pk = float(_head_coeffs(h, tau, eps0 + 1)[eps0]) if eps0 <= deg else 0.0
            p = min(1.0, max(0.0, 1.0 - pk))
        else:
            if eps0 + 1 <= deg:
                p = float(_head_coeffs(h, tau, eps0 + 2)[eps0 + 1])
            else:
                p = 0.0
        if p < best_p:
            best_p = p
            best_tau = tau
    return StrategyResult(best_tau, best_p, StrategyKind.EPS0)


STRATEGIES = {
    StrategyKind.EXACT: tau_star_exact,
    StrategyKind.HOEFFDING: tau_star_hoeffding,
    StrategyKind.EPS0: tau_star_eps0,
}


def choose_tau(h, cap: DecoderCapability, kind: StrategyKind) -> StrategyResult:
    return STRATEGIES[kind](h, cap)


def p_profile(h, cap: DecoderCapability) -> np.ndarray:
    """Exact P(tau) for every tau in [0, d_min - 1]."""
    h = check_sorted_unreliability(h)
    return np.array(
        [
            residual_error_prob(pgf_distribution(h, tau), cap.epsilon0(tau))
            for tau in _tau_range(cap)
        ]
    )
