"""J-Bessel functions and the Bessel functions of GL(2, R) representations.

Below the crossover the power series is summed in exact rational arithmetic
(the double-precision sum loses everything to cancellation once z is a
few times the order), with a rigorous geometric bound on the tail.  Above
it the Hankel expansion is used, truncated at its smallest term.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import quad
from scipy.special import loggamma

__all__ = [
    "BesselEvalConfig",
    "BesselValue",
    "BesselToleranceError",
    "bessel_J",
    "bessel_J_series",
    "bessel_J_asymptotic",
    "j_discrete",
    "j_principal",
    "R_MIN",
]

MAX_ORDER = 200
R_MIN = 1e-3


class BesselToleranceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class BesselEvalConfig:
    """series_terms=None sums until the tail bound is below tol; crossover=None means max(20, order)."""

    series_terms: int | None = None
    crossover: float | None = None
    tol: float = 1e-14

    def crossover_for(self, order: int) -> float:
        return self.crossover if self.crossover is not None else max(20.0, float(order))


@dataclass(frozen=True)
class BesselValue:
    value: float
    error_bound: float
    regime: str
    terms: int

    def __float__(self) -> float:
        return self.value


def _log_term(order: int, half_z: float, m: int) -> float:
    if half_z == 0.0:
        return -math.inf
    return (2 * m + order) * math.log(half_z) - math.lgamma(m + 1) - math.lgamma(m + order + 1)


def bessel_J_series(order: int, z: float, terms: int | None = None, tol: float = 1e-14) -> BesselValue:
    """sum_{m<N} (-1)^m (z/2)^{2m+order} / (m! (m+order)!) plus a bound on the rest."""
    if order < 0 or order > MAX_ORDER:
        raise ValueError(f"order must be in [0, {MAX_ORDER}]")
    if z < 0:
        raise ValueError("z must be >= 0")
    if z == 0:
        return BesselValue(1.0 if order == 0 else 0.0, 0.0, "series", 1)
    half = Fraction(z) / 2
    h = half * half
    half_f = z / 2.0
    term = half**order / math.factorial(order)
    total = Fraction(0)
    m = 0
    while True:
        total += term
        m += 1
        term = -term * h / (m * (m + order))
        # ratio of successive term magnitudes from index m on is <= r
        r = (half_f * half_f) / ((m + 1) * (m + order + 1))
        if terms is not None:
            if m >= terms:
                break
            continue
        if r < 0.5:
            bound = math.exp(_log_term(order, half_f, m)) / (1.0 - r)
            if bound <= tol * max(abs(float(total)), 1e-300) or bound < 1e-300:
                break
    r = (half_f * half_f) / ((m + 1) * (m + order + 1))
    if r < 1.0:
        rest = math.exp(_log_term(order, half_f, m)) / (1.0 - r)
    else:
        rest = math.inf
    value = float(total)
    return BesselValue(value, rest + abs(value) * 2.0**-53, "series", m)


def _hankel_coefficients(order: int, z: float, kmax: int = 400) -> list[float]:
    mu = 4.0 * order * order
    a = [1.0]
    for k in range(1, kmax):
        a.append(a[-1] * (mu - (2 * k - 1) ** 2) / (k * 8.0 * z))
        if a[-1] == 0.0 or abs(a[-1]) > 1e250:
            break
    return a


def bessel_J_asymptotic(order: int, z: float, first_order_only: bool = False) -> BesselValue:
    """sqrt(2/(pi z)) [P cos w - Q sin w], w = z - order pi/2 - pi/4.

    With ``first_order_only`` only the leading correction Q ~ (mu-1)/(8z) is
    kept; otherwise P and Q are summed up to the smallest term.
    """
    if z <= 0:
        raise ValueError("asymptotic form needs z > 0")
    a = _hankel_coefficients(order, z)
    if first_order_only:
        cut = 2
    else:
        cut = min(range(1, len(a)), key=lambda i: abs(a[i])) if len(a) > 1 else 1
        if a[-1] == 0.0:
            cut = len(a)  # half-integer style termination
    P = sum((-1) ** (k // 2) * a[k] for k in range(0, cut, 2))
    Q = sum((-1) ** ((k - 1) // 2) * a[k] for k in range(1, cut, 2))
    w = z - order * math.pi / 2 - math.pi / 4
    amp = math.sqrt(2.0 / (math.pi * z))
    nxt = abs(a[cut]) if cut < len(a) else 0.0
    # rounding: the a_k can grow before they shrink, and cos/sin of a large w
    eps = 2.0**-52
    mass = sum(abs(x) for x in a[:cut])
    err = amp * (nxt + 4 * eps * mass * cut + eps * abs(w) * (abs(P) + abs(Q)))
    return BesselValue(amp * (P * math.cos(w) - Q * math.sin(w)), err, "asymptotic", cut)


def bessel_J(order: int, z: float, config: BesselEvalConfig | None = None) -> BesselValue:
    """J_order(z) for integer order in [0, 200] and real z >= 0, with an error bound."""
    cfg = config or BesselEvalConfig()
    if order < 0 or order > MAX_ORDER:
        raise ValueError(f"order must be in [0, {MAX_ORDER}]")
    if z < 0:
        raise ValueError("z must be >= 0")
    if z >= cfg.crossover_for(order):
        val = bessel_J_asymptotic(order, z)
        if val.error_bound <= max(cfg.tol, 1e-15):
            return val
    val = bessel_J_series(order, z, cfg.series_terms, cfg.tol)
    if val.error_bound > max(cfg.tol * max(abs(val.value), 1.0), 1e-15) and cfg.series_terms is None:
        raise BesselToleranceError(f"J_{order}({z}): neither regime reached tolerance {cfg.tol}")
    return val


def j_discrete(d: int, x: float) -> float:
    """Bessel function of the discrete series pi_d for psi(x) = e^{2 pi i x}.

    (-1)^d 2 pi |x|^{1/2} J_{2d-1}(4 pi |x|^{1/2}) for x > 0 and 0 for x <= 0.
    """
    if d < 1:
        raise ValueError("d must be a positive integer")
    if x <= 0:
        return 0.0
    s = math.sqrt(x)
    return (-1) ** d * 2.0 * math.pi * s * bessel_J(2 * d - 1, 4.0 * math.pi * s).value


def _bessel_imaginary_order(nu: complex, z: float, sign: int, tol: float = 1e-15) -> tuple[complex, float]:
    """sum_m sign^m (z/2)^{2m+nu} / (m! Gamma(m+nu+1)) in complex double, with a rounding/tail bound."""
    half = z / 2.0
    h = half * half
    lead = cmath.exp(nu * math.log(half) - loggamma(1.0 + nu))
    term = lead
    total = 0j
    biggest = 0.0
    m = 0
    while True:
        total += term
        biggest = max(biggest, abs(term))
        m += 1
        term = term * (sign * h) / (m * (m + nu))
        if abs(term) <= tol * max(abs(total), 1e-300) and h / (m + 1) ** 2 < 0.5:
            break
        if m > 10_000:
            raise BesselToleranceError("imaginary-order series did not converge")
    return total, 2.0 * abs(term) + 4e-16 * biggest * m


def _bessel_K_imaginary_order(r2: float, z: float) -> float:
    """K_{i r2}(z) = int_0^inf exp(-z cosh t) cos(r2 t) dt by the trapezoid rule.

    The integrand is analytic in the strip |Im t| < pi/2 and decays doubly
    exponentially, so the trapezoid error is about exp(pi |r2| / 2 - pi^2 / h).
    """
    h = min(0.02, math.pi**2 / (40.0 + math.pi * abs(r2)))
    tmax = math.acosh(max(760.0 / z, 1.0)) + 1.0
    t = np.arange(0.0, tmax + h, h)
    f = np.exp(-z * np.cosh(t)) * np.cos(r2 * t)
    return float(h * (np.cumsum(f)[-1] - 0.5 * f[0]))


def j_principal(r: float, x: float) -> float:
    """Bessel function of the principal series pi_{0, ir}.

    x > 0: -pi |x|^{1/2} (J_{2ir} - J_{-2ir})(4 pi |x|^{1/2}) / sin(pi i r)
    x < 0: the same with I in place of J.  Since J_{-2ir} is the conjugate of
    J_{2ir} for real argument, the first is -2 pi |x|^{1/2} Im J_{2ir} / sinh(pi r).
    The I-combination cancels badly in floating point; it equals
    4 |x|^{1/2} cosh(pi r) K_{2ir}(4 pi |x|^{1/2}), which is what gets evaluated.
    """
    if abs(r) < R_MIN:
        raise ValueError(f"|r| must be >= {R_MIN} (removable singularity at r = 0 is excluded)")
    if x == 0:
        return 0.0
    s = math.sqrt(abs(x))
    z = 4.0 * math.pi * s
    if x < 0:
        return 4.0 * s * math.cosh(math.pi * r) * _bessel_K_imaginary_order(2.0 * r, z)
    if z <= SCHLAFLI_CROSSOVER:
        val, _ = _bessel_imaginary_order(2j * r, z, -1)
        return -2.0 * math.pi * s * val.imag / math.sinh(math.pi * r)
    return -2.0 * s * _schlafli_difference(2.0 * r, z) / math.sinh(math.pi * r)


# above this argument the complex power series for J_{2ir} cancels too much
SCHLAFLI_CROSSOVER = 8.0


def _schlafli_difference(r2: float, z: float) -> float:
    """(J_{i r2} - J_{-i r2})(z) / i from Schlafli's integral, both pieces real:

    int_0^pi sinh(r2 u) sin(z sin u) du - sinh(pi r2) int_0^inf exp(-z sinh t) cos(r2 t) dt.
    """
    n = int(1.5 * z + 2.0 * abs(r2) + 60)
    u, w = np.polynomial.legendre.leggauss(n)
    u = 0.5 * math.pi * (u + 1.0)
    finite = 0.5 * math.pi * float(np.dot(w, np.sinh(r2 * u) * np.sin(z * np.sin(u))))
    tmax = math.asinh(750.0 / z)  # exp(-750) is below every tolerance here
    tail, _ = quad(lambda t: math.exp(-z * math.sinh(t)) * math.cos(r2 * t), 0.0, tmax,
                   epsabs=0.0, epsrel=1e-13, limit=200)
    return finite - math.sinh(math.pi * r2) * tail
