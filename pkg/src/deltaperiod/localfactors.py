"""Unramified local factors at a finite prime, in real arithmetic.

Everything is written in terms of t = alpha + 1/alpha and
s2 = alpha^2 + alpha^-2 = t^2 - 2, which are real whenever the Satake
parameter is unitary.  Complex alpha never appears here.
"""

from __future__ import annotations

import math
import sys
import warnings
from dataclasses import asdict, dataclass

from . import qseries

__all__ = [
    "SatakeData",
    "LocalFactorReport",
    "NonUnitaryWarning",
    "DivergenceError",
    "delta_satake",
    "lambda_p",
    "adjoint_L_local",
    "q_term",
    "normalized_factor",
    "chebyshev_T",
    "chebyshev_U",
    "sym_power_L_local",
    "whittaker_unramified",
    "local_hecke_zeta_sum",
    "local_hecke_zeta_closed",
]


class NonUnitaryWarning(UserWarning):
    pass


class DivergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SatakeData:
    p: int
    t: float

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be a prime >= 2")
        if abs(self.t) > 2 + 1e-12:
            warnings.warn(f"non-unitary Satake data at p={self.p}: |t|={abs(self.t)}", NonUnitaryWarning, stacklevel=3)

    @property
    def s2(self) -> float:
        return self.t * self.t - 2.0

    @property
    def unitary(self) -> bool:
        return abs(self.t) <= 2 + 1e-12

    @classmethod
    def from_s2(cls, p: int, s2: float) -> "SatakeData":
        """Unitary data with alpha^2 + alpha^-2 = s2 (requires -2 <= s2 <= 2)."""
        return cls(p, math.sqrt(max(s2 + 2.0, 0.0)))


def delta_satake(p: int) -> SatakeData:
    return SatakeData(p, qseries.normalized_eigenvalue(p))


@dataclass(frozen=True)
class LocalFactorReport:
    p: int
    lambda_p: float
    adjoint_L: float
    normalized: float
    Q_term: float

    def to_dict(self) -> dict:
        return asdict(self)


def lambda_p(d: SatakeData) -> float:
    """1 - (1 + alpha^2 + alpha^-2)/p."""
    return 1.0 - (1.0 + d.s2) / d.p


def _adjoint_denominator(d: SatakeData) -> float:
    x = 1.0 / d.p
    return (1.0 - x) * (1.0 - d.s2 * x + x * x)


def adjoint_L_local(d: SatakeData) -> float:
    """L(1, pi_p, Ad) = 1 / [(1 - 1/p)(1 - alpha^2/p)(1 - alpha^-2/p)]."""
    den = _adjoint_denominator(d)
    # a few ulps from zero is a pole for all practical purposes
    if abs(den) <= 8 * sys.float_info.epsilon:
        raise ZeroDivisionError(f"adjoint local factor has a pole at p={d.p}, s2={d.s2}")
    return 1.0 / den


def q_term(d: SatakeData) -> float:
    """Q = p^-2 (1 + s2 - 1/p) L(1, pi_p, Ad), so lambda_p * L = 1 - Q."""
    x = 1.0 / d.p
    return x * x * (1.0 + d.s2 - x) * adjoint_L_local(d)


def normalized_factor(d: SatakeData) -> LocalFactorReport:
    lam = lambda_p(d)
    L = adjoint_L_local(d)
    return LocalFactorReport(p=d.p, lambda_p=lam, adjoint_L=L, normalized=lam * L, Q_term=q_term(d))


def chebyshev_T(n: int, x: float) -> float:
    """T_n(x) by the three-term recurrence (valid for |x| > 1 too)."""
    a, b = 1.0, x
    if n == 0:
        return a
    for _ in range(n - 1):
        a, b = b, 2.0 * x * b - a
    return b


def chebyshev_U(n: int, x: float) -> float:
    a, b = 1.0, 2.0 * x
    if n == 0:
        return a
    for _ in range(n - 1):
        a, b = b, 2.0 * x * b - a
    return b


def sym_power_L_local(d: SatakeData, l: int, s: float) -> float:
    """L(s, pi_p, Sym^{2l}) = prod_{i=-l}^{l} (1 - alpha^{2i} p^{-s})^{-1}.

    Conjugate factors i, -i are paired: (1 - 2 cos(2 i theta) X + X^2) with
    2 cos(2 i theta) = 2 T_{2i}(t/2).
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    X = d.p ** (-s)
    if not X < 1.0:
        raise DivergenceError(f"p^-s = {X} is not < 1")
    if l == 1 and s == 1:
        # same arithmetic path as the adjoint factor
        return adjoint_L_local(d)
    den = 1.0 - X
    half = d.t / 2.0
    for i in range(1, l + 1):
        pair = 1.0 - 2.0 * chebyshev_T(2 * i, half) * X + X * X
        if pair <= 0.0:
            raise DivergenceError(f"Sym^{2 * l} factor vanishes or changes sign at i={i}")
        den *= pair
    return 1.0 / den


def whittaker_unramified(d: SatakeData, n: int) -> float:
    """W_0(p^n) = p^{-n/2} (alpha^{n+1} - alpha^{-n-1})/(alpha - 1/alpha) = p^{-n/2} U_n(t/2)."""
    if n < 0:
        return 0.0
    return d.p ** (-n / 2) * chebyshev_U(n, d.t / 2.0)


def local_hecke_zeta_closed(d: SatakeData, X: float) -> float:
    """[(1 - alpha X p^{-1/2})(1 - alpha^{-1} X p^{-1/2})]^{-1}."""
    y = X / math.sqrt(d.p)
    return 1.0 / (1.0 - d.t * y + y * y)


def local_hecke_zeta_sum(d: SatakeData, X: float, terms: int) -> float:
    """sum_{n=0}^{terms} W_0(p^n) X^n, built from the Whittaker recurrence."""
    y = X / math.sqrt(d.p)
    # the coefficients U_n(t/2) are bounded by n+1 only for unitary data
    rho = abs(y) if d.unitary else abs(y) * (abs(d.t) + math.sqrt(max(d.t * d.t - 4.0, 0.0))) / 2.0
    if rho >= 1.0:
        raise DivergenceError(f"geometric series diverges: ratio {rho} >= 1")
    total = 0.0
    prev, cur = 0.0, 1.0  # W_0(p^{-1}) y-scaled, W_0(1)
    power = 1.0
    for n in range(terms + 1):
        total += cur * power
        prev, cur = cur, d.t * cur - prev  # U_{n+1}(t/2) = t U_n - U_{n-1}
        power *= y
    return total
