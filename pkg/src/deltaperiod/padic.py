"""Finite character-sum evaluation of local integrals over Q_p.

Measures: dx with vol(Z_p) = 1 and d^x y = dy/|y|, so vol(Z_p^x) = 1 - 1/p.
psi is the standard additive character of conductor Z_p,
psi(x) = exp(2 pi i {x}_p).  Phases are kept as exact integers modulo a
power of p; exp is applied once per distinct phase after the counts are
accumulated.
"""

from __future__ import annotations

import cmath
import functools
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PAdicPoint",
    "LocallyConstantFn",
    "UnramCharacter",
    "PrecisionError",
    "StabilizationError",
    "additive_character",
    "frac_p",
    "bessel_j1_oracle",
    "bessel_j1_closed",
    "shell_contribution",
    "whittaker_to_hecke_kernel",
    "kirillov_compose_oracle",
    "basis_indicators",
]

VANISH_TOL = 1e-14


class PrecisionError(ValueError):
    pass


class StabilizationError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PAdicPoint:
    """x = p^v u with u a unit known modulo p^m."""

    p: int
    v: int
    u: int
    m: int

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("precision must be >= 0")
        mod = self.p**self.m
        if mod > 1 and self.u % self.p == 0:
            raise ValueError("u must be a unit")
        object.__setattr__(self, "u", self.u % mod if mod > 1 else self.u % self.p or 1)

    @property
    def abs(self) -> float:
        return float(self.p) ** (-self.v)


def frac_p(p: int, v: int, u: int, m: int) -> tuple[int, int]:
    """{p^v u}_p as numerator/denominator with denominator p^{-v} (0/1 if v >= 0)."""
    if v >= 0:
        return 0, 1
    if m < -v:
        raise PrecisionError(f"need precision >= {-v} digits, have {m}")
    den = p ** (-v)
    return u % den, den


def _phase(num: int, den: int) -> complex:
    return cmath.exp(2j * math.pi * num / den)


def additive_character(x: PAdicPoint) -> complex:
    num, den = frac_p(x.p, x.v, x.u, x.m)
    return _phase(num, den) if num else 1.0 + 0j


@dataclass(frozen=True)
class UnramCharacter:
    """chi(p^v u) = value_at_p^v."""

    value_at_p: complex

    def __call__(self, v: int) -> complex:
        return complex(self.value_at_p) ** v

    def inverse(self) -> "UnramCharacter":
        return UnramCharacter(1.0 / complex(self.value_at_p))


def _units(p: int, m: int) -> np.ndarray:
    r = np.arange(p**m, dtype=np.int64)
    return r[r % p != 0]


@functools.lru_cache(maxsize=64)
def _roots_of_unity(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def _phase_sum(nums: np.ndarray, den: int) -> complex:
    counts = Counter((nums % den).tolist())
    return sum(c * _phase(k, den) for k, c in sorted(counts.items()))


def shell_contribution(p: int, v: int) -> complex:
    """p^{-m} sum_{u mod p^m units} psi(x - 1/x) for x = p^v u: one shell of the j(1) integral.

    Multiplied by |x|^{-1} dx this is the shell's contribution without the
    character value b^v.  Shells with |v| >= 2 are complete Ramanujan sums.
    """
    m = max(abs(v), 1)
    units = _units(p, m)
    mod = p**m
    if v < 0:
        # x - 1/x has fractional part {p^v u}; 1/x is integral
        den = p ** (-v)
        nums = units % den
    elif v > 0:
        # fractional part of -1/x = -p^{-v} u^{-1}
        den = p**v
        inv = np.array([pow(int(u), -1, mod) for u in units], dtype=np.int64)
        nums = (-inv) % den
    else:
        return (len(units) / mod) + 0j
    return _phase_sum(nums, den) / mod


def bessel_j1_oracle(p: int, b: complex, N: int, guard: int = 2, max_shell: int = 12) -> dict:
    """j(1) = lim_N int_{|x| <= p^N} chi(x) psi(x - 1/x) |x|^{-1} dx, chi(p^v u) = b^v.

    Shells v = -N .. 0 are the ones inside the ball; shells v > 0 are
    summed until ``guard`` consecutive shells vanish (checked, not assumed).
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    contributions: dict[int, complex] = {}
    for v in range(-N, 1):
        contributions[v] = complex(b) ** v * shell_contribution(p, v)
    quiet = 0
    v = 1
    while quiet < guard:
        if v > max_shell:
            raise StabilizationError(f"inner shells still contribute at v={v}")
        c = complex(b) ** v * shell_contribution(p, v)
        contributions[v] = c
        quiet = quiet + 1 if abs(c) <= VANISH_TOL else 0
        v += 1
    total = sum(contributions[k] for k in sorted(contributions))
    return {
        "value": total,
        "shells": {k: contributions[k] for k in sorted(contributions)},
        "inner_cutoff": v - 1,
        "N": N,
    }


def bessel_j1_closed(p: int, b: complex) -> complex:
    """1 - (1 + b + 1/b)/p."""
    b = complex(b)
    return 1.0 - (1.0 + b + 1.0 / b) / p


@dataclass
class LocallyConstantFn:
    """Finite combination of indicators of cosets p^v u (1 + p^m Z_p)."""

    p: int
    m: int
    support: dict[tuple[int, int], complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("level m must be >= 1")
        mod = self.p**self.m
        clean = {}
        for (v, u), c in self.support.items():
            if u % self.p == 0:
                raise ValueError("coset representatives must be units")
            if c != 0:
                clean[(v, u % mod)] = complex(c)
        self.support = clean

    def __call__(self, x: PAdicPoint) -> complex:
        if x.m < self.m:
            raise PrecisionError("point precision is below the level of the function")
        return self.support.get((x.v, x.u % self.p**self.m), 0j)

    def at_one(self) -> complex:
        return self.support.get((0, 1 % self.p**self.m), 0j)

    @property
    def valuations(self) -> list[int]:
        return sorted({v for v, _ in self.support})


def basis_indicators(p: int, m: int, valuations: range) -> list[LocallyConstantFn]:
    return [LocallyConstantFn(p, m, {(v, int(u)): 1.0}) for v in valuations for u in _units(p, m)]


def whittaker_to_hecke_kernel(f: LocallyConstantFn, chi: UnramCharacter) -> complex:
    """int chi^{-1}(y) f(y) d^x y; each coset p^v u (1 + p^m Z_p) has d^x-volume p^-m."""
    inv = chi.inverse()
    return sum(inv(v) * c * float(f.p) ** (-f.m) for (v, _), c in sorted(f.support.items()))


def _compose_at_level(f: LocallyConstantFn, chi: UnramCharacter, l: int) -> complex:
    """Double sum over x in p^{-l} Z_p / p^K Z_p and y refined until psi(x y) is constant."""
    p, m = f.p, f.m
    if not f.support:
        return 0j
    # on x0 + p^K Z_p every factor of the x-integrand is constant
    K = max(0, -min(f.valuations))
    if l < -K:
        return 0j
    k = np.arange(p ** (l + K), dtype=np.int64)  # x = k p^{-l}
    inv_chi = chi.inverse()
    inner = np.zeros(len(k), dtype=complex)
    for (v, u), c in sorted(f.support.items()):
        e = l - v  # x y = k y' p^{v-l} has denominator p^e
        if e <= 0:
            inner += inv_chi(v) * c * float(p) ** (-m)
            continue
        M = max(m, e)  # y' = u + p^m j modulo p^M pins psi(x y) down
        den = p**e
        roots = _roots_of_unity(den)
        acc = np.zeros(len(k), dtype=complex)
        for j in range(p ** (M - m)):
            y = (u + p**m * j) % den
            acc += roots[(k * y) % den]
        inner += inv_chi(v) * c * float(p) ** (-M) * acc
    if l > 0:
        outer = np.conj(_roots_of_unity(p**l)[k % p**l])
    else:
        outer = np.ones(len(k), dtype=complex)
    # each x-coset has dx-volume p^-K
    return complex(np.sum(outer * inner)) * float(p) ** (-K)


def kirillov_compose_oracle(f: LocallyConstantFn, chi: UnramCharacter, l: int, check_levels: int = 1) -> dict:
    """int_{|x| <= p^l} psi^{-1}(x) [int chi^{-1}(y) psi(x y) f(y) d^x y] dx as a finite double sum.

    Also evaluated at l+1 .. l+check_levels; any change is a stabilization
    failure.  The expected value is f(1).
    """
    values = [_compose_at_level(f, chi, l + j) for j in range(check_levels + 1)]
    drift = max(abs(v - values[0]) for v in values)
    if drift > 1e-10:
        raise StabilizationError(f"composition changed by {drift:.3e} when the ball grew past l={l}")
    return {"value": values[0], "levels": list(range(l, l + check_levels + 1)), "drift": drift,
            "expected": f.at_one()}
