"""Regularized Euler product for the period invariant of Delta.

Per-prime factors lambda_p * L(1, pi_p, Ad) are mapped (optionally in
threads) and then reduced in log space in ascending prime order, so every
partial product is bitwise reproducible.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import archimedean
from .localfactors import delta_satake, normalized_factor
from .primes import first_primes, primes_upto

__all__ = [
    "L_AD_REFERENCE",
    "REFERENCE_TILDE_LAMBDA_100",
    "EulerAccumulator",
    "InvariantReport",
    "TailToleranceError",
    "prime_factor_logs",
    "tilde_lambda_partial",
    "partial_adjoint_L",
    "adjoint_accumulator",
    "envelope_constant",
    "prime_tail_sum_bound",
    "invariant_tail_estimate",
    "adjoint_tail_estimate",
    "invariant_lambda",
    "convergence_table",
    "hundred_primes_convention",
]

# L(1, pi_Delta, Ad), computed externally with an approximate functional equation.
L_AD_REFERENCE = 0.63179294573
REFERENCE_TILDE_LAMBDA_100 = 1.49154

# Rosser-Schoenfeld: pi(x) < 1.25506 x / log x for x > 1.
_PI_CONST = 1.25506
# |log L_p - (1 + s2)/p| <= _ADJ_SECOND_ORDER / p^2 for p >= 2 (checked in tests).
_ADJ_SECOND_ORDER = 4.0
# multiplier on the Sato-Tate standard deviation of the conditionally convergent tail
ADJ_TAIL_SIGMAS = 3.0


class TailToleranceError(ArithmeticError):
    pass


@dataclass
class EulerAccumulator:
    """Ascending-prime partial product kept as a sum of logs."""

    prime_bound: int = 1
    log_partial: float = 0.0
    n_terms: int = 0
    tail_estimate: float = math.inf

    def add(self, p: int, factor: float) -> None:
        if p <= self.prime_bound:
            raise ValueError(f"primes must be added in ascending order ({p} after {self.prime_bound})")
        if not factor > 0.0:
            raise ArithmeticError(f"non-positive Euler factor {factor!r} at p={p}")
        self.log_partial += math.log(factor)
        self.prime_bound = p
        self.n_terms += 1

    @property
    def value(self) -> float:
        return math.exp(self.log_partial)


class _FactorCache:
    """log(lambda_p L_p), log L_p and Q_p for every prime up to the largest bound seen."""

    def __init__(self):
        self._lock = threading.Lock()
        self.bound = 1
        self.primes = np.zeros(0, dtype=np.int64)
        self.log_normalized = np.zeros(0)
        self.log_adjoint = np.zeros(0)
        self.q_terms = np.zeros(0)

    def ensure(self, bound: int, threads: int = 1) -> None:
        with self._lock:
            if self.bound >= bound:
                return
            ps = primes_upto(bound)
            rows = _map_factors([int(p) for p in ps[len(self.primes):]], threads)
            self.primes = ps
            self.log_normalized = np.concatenate([self.log_normalized, [r[0] for r in rows]])
            self.log_adjoint = np.concatenate([self.log_adjoint, [r[1] for r in rows]])
            self.q_terms = np.concatenate([self.q_terms, [r[2] for r in rows]])
            self.bound = bound


def _factor_row(p: int) -> tuple[float, float, float]:
    rep = normalized_factor(delta_satake(p))
    return math.log(rep.normalized), math.log(rep.adjoint_L), rep.Q_term


def _map_factors(ps: list[int], threads: int) -> list[tuple[float, float, float]]:
    if not ps:
        return []
    # make sure tau is available before fanning out
    delta_satake(ps[-1])
    if threads <= 1:
        return [_factor_row(p) for p in ps]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_factor_row, ps, chunksize=max(1, len(ps) // (4 * threads))))


_CACHE = _FactorCache()


def prime_factor_logs(bound: int, threads: int = 1) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(primes, log(lambda_p L_p), log L_p, Q_p) for all p <= bound."""
    _CACHE.ensure(bound, threads)
    k = int(np.searchsorted(_CACHE.primes, bound, side="right"))
    return _CACHE.primes[:k], _CACHE.log_normalized[:k], _CACHE.log_adjoint[:k], _CACHE.q_terms[:k]


def _sequential_log_sum(logs: np.ndarray) -> float:
    # np.cumsum is a strict left-to-right loop, unlike np.sum's pairwise scheme
    return float(np.cumsum(logs)[-1]) if len(logs) else 0.0


def tilde_lambda_partial(prime_bound: int | None = None, first_k_primes: int | None = None,
                         threads: int = 1) -> float:
    """prod lambda_p(pi_p, psi_p) L(1, pi_p, Ad) over p <= prime_bound or the first k primes."""
    if (prime_bound is None) == (first_k_primes is None):
        raise ValueError("give exactly one of prime_bound, first_k_primes")
    if first_k_primes is not None:
        if first_k_primes < 1:
            raise ValueError("first_k_primes must be >= 1")
        prime_bound = int(first_primes(first_k_primes)[-1])
    if prime_bound < 2:
        raise ValueError("prime_bound must be >= 2")
    _, logs, _, _ = prime_factor_logs(prime_bound, threads)
    return math.exp(_sequential_log_sum(logs))


def prime_tail_sum_bound(N: float, exponent: float) -> float:
    """Upper bound for sum_{p > N} p^-exponent (exponent > 1) by partial summation."""
    if N < 2:
        raise ValueError("N must be >= 2")
    return _PI_CONST * exponent / ((exponent - 1.0) * math.log(N) * N ** (exponent - 1.0))


_ENVELOPE_FIT_BOUND = 10_000


def envelope_constant() -> float:
    """C with |Q_p| <= C p^{-3/2}, fitted as the max over p <= 10^4."""
    ps, _, _, q = prime_factor_logs(_ENVELOPE_FIT_BOUND)
    return float(np.max(np.abs(q) * ps.astype(float) ** 1.5))


def invariant_tail_estimate(N: int) -> float:
    """Bound on |sum_{p > N} log(1 - Q_p)| from the p^{-3/2} envelope."""
    C = envelope_constant()
    qmax = C * N ** -1.5
    return C * prime_tail_sum_bound(N, 1.5) / (1.0 - qmax)


def adjoint_tail_estimate(N: int) -> float:
    """Estimate of |log L(1, Ad) - sum_{p <= N} log L_p|.

    The leading terms (1 + s2)/p = U_2(cos theta_p)/p have mean 0 and
    variance 1 under Sato-Tate; the tail is modelled as a random walk and
    ADJ_TAIL_SIGMAS standard deviations are reported, plus an absolute bound
    on the second-order terms.  This is a heuristic, not a proof: at s = 1
    the product converges only conditionally.
    """
    sq = prime_tail_sum_bound(N, 2.0)
    return ADJ_TAIL_SIGMAS * math.sqrt(sq) + _ADJ_SECOND_ORDER * sq


def adjoint_accumulator(prime_bound: int) -> EulerAccumulator:
    if prime_bound < 2:
        raise ValueError("prime_bound must be >= 2")
    ps, _, log_adj, _ = prime_factor_logs(prime_bound)
    return EulerAccumulator(
        prime_bound=int(ps[-1]),
        log_partial=_sequential_log_sum(log_adj),
        n_terms=len(ps),
        tail_estimate=adjoint_tail_estimate(prime_bound),
    )


def partial_adjoint_L(prime_bound: int) -> float:
    """prod_{p <= N} L(1, pi_p, Ad)."""
    return adjoint_accumulator(prime_bound).value


@dataclass
class InvariantReport:
    prime_bound: int
    n_primes: int
    tilde_partial: float
    finite_part: float
    archimedean_part: float
    value: float
    tail_estimate: float
    L_reference: float = L_AD_REFERENCE
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def invariant_lambda(prime_bound: int, tolerance: float | None = None, threads: int = 1) -> InvariantReport:
    """lambda(Delta, e^{2 pi i x}) ~ [tilde lambda_N / L(1, pi, Ad)] * j_inf(1).

    ``tail_estimate`` bounds the log of the neglected factors; with
    ``tolerance`` set, a larger bound raises TailToleranceError.
    """
    if prime_bound < 100:
        raise ValueError("invariant_lambda needs prime_bound >= 100")
    ps, logs, _, _ = prime_factor_logs(prime_bound, threads)
    tilde = math.exp(_sequential_log_sum(logs))
    arch = archimedean.j_discrete(6, 1.0)
    finite = tilde / L_AD_REFERENCE
    tail = invariant_tail_estimate(prime_bound)
    if tolerance is not None and tail > tolerance:
        raise TailToleranceError(f"tail estimate {tail:.3e} exceeds tolerance {tolerance:.3e}")
    return InvariantReport(
        prime_bound=prime_bound,
        n_primes=len(ps),
        tilde_partial=tilde,
        finite_part=finite,
        archimedean_part=arch,
        value=finite * arch,
        tail_estimate=tail,
    )


def convergence_table(prime_bounds: list[int], threads: int = 1) -> list[tuple[int, float, float]]:
    """Rows (N, tilde lambda_N, running invariant) from one ascending pass."""
    bounds = list(prime_bounds)
    if not bounds:
        return []
    if any(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:])):
        raise ValueError("prime bounds must be strictly ascending")
    if bounds[0] < 2:
        raise ValueError("prime bounds must be >= 2")
    ps, logs, _, _ = prime_factor_logs(bounds[-1], threads)
    running = np.cumsum(logs)
    arch = archimedean.j_discrete(6, 1.0)
    rows = []
    for N in bounds:
        k = int(np.searchsorted(ps, N, side="right"))
        tilde = math.exp(float(running[k - 1]))
        rows.append((N, tilde, tilde / L_AD_REFERENCE * arch))
    return rows


def hundred_primes_convention() -> dict:
    """Both readings of "the first hundred primes" against the published 1.49154."""
    by_count = tilde_lambda_partial(first_k_primes=100)
    by_bound = tilde_lambda_partial(prime_bound=100)

    def digits_match(x: float) -> bool:
        return math.floor(x * 1e5) == round(REFERENCE_TILDE_LAMBDA_100 * 1e5)

    matched = [name for name, v in (("first_k_primes=100", by_count), ("prime_bound=100", by_bound))
               if digits_match(v)]
    return {
        "first_k_primes=100": by_count,
        "prime_bound=100": by_bound,
        "deviation_first_k": abs(by_count - REFERENCE_TILDE_LAMBDA_100),
        "deviation_bound": abs(by_bound - REFERENCE_TILDE_LAMBDA_100),
        "matching_convention": matched[0] if len(matched) == 1 else None,
    }
