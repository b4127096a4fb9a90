"""The integer exponents m_{kl} with

    1 - x - a x - x/a = prod_{k>=1} prod_l p_l(a, x^k)^{m_{kl}},
    p_l(a, x) = prod_{i=-l}^{l} (1 - a^i x),

found by peeling one x-degree at a time in exact integer arithmetic, and
the numerical Euler-product experiment built on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .localfactors import SatakeData, lambda_p, sym_power_L_local

__all__ = [
    "SymLaurentPoly",
    "BivariateTruncSeries",
    "DecompositionError",
    "l_series",
    "p_l_series",
    "character",
    "solve_mkl",
    "reconstruct_check",
    "lambda_product_experiment",
    "ExperimentRow",
    "suggested_kmax",
    "REFERENCE_TABLE",
]


class DecompositionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class SymLaurentPoly:
    """c_0 + sum_{i>0} c_i (a^i + a^-i); only i >= 0 is stored."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def const(cls, c: int) -> "SymLaurentPoly":
        return cls((c,))

    @classmethod
    def from_laurent(cls, laurent: dict[int, int]) -> "SymLaurentPoly":
        deg = max((abs(k) for k, v in laurent.items() if v), default=-1)
        out = []
        for i in range(deg + 1):
            if laurent.get(i, 0) != laurent.get(-i, 0):
                raise ValueError("Laurent polynomial is not symmetric under a -> 1/a")
            out.append(laurent.get(i, 0))
        return cls(tuple(out))

    def to_laurent(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for i, c in enumerate(self.coeffs):
            if c:
                out[i] = c
                out[-i] = c
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "SymLaurentPoly") -> "SymLaurentPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return SymLaurentPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "SymLaurentPoly":
        return SymLaurentPoly(tuple(-x for x in self.coeffs))

    def __sub__(self, other: "SymLaurentPoly") -> "SymLaurentPoly":
        return self + (-other)

    def scale(self, k: int) -> "SymLaurentPoly":
        return SymLaurentPoly(tuple(k * x for x in self.coeffs))

    def __mul__(self, other: "SymLaurentPoly") -> "SymLaurentPoly":
        if isinstance(other, int):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            return SymLaurentPoly()
        a, b = self.to_laurent(), other.to_laurent()
        out: dict[int, int] = {}
        for i, x in a.items():
            for j, y in b.items():
                out[i + j] = out.get(i + j, 0) + x * y
        return SymLaurentPoly.from_laurent(out)

    __rmul__ = __mul__

    def __call__(self, a: complex) -> complex:
        return sum(c * (a**i + a**-i) if i else c for i, c in enumerate(self.coeffs))

    def to_characters(self) -> list[int]:
        """Integers n_l with self = sum_l n_l c_l(a), c_l = sum_{|i|<=l} a^i."""
        c = list(self.coeffs)
        n = [0] * len(c)
        # c_l contributes 1 to every monomial coefficient of degree <= l
        for l in range(len(c) - 1, -1, -1):
            n[l] = c[l]
            for i in range(l + 1):
                c[i] -= n[l]
        if any(c):
            raise DecompositionError("character decomposition left a remainder")
        return n

    @classmethod
    def from_characters(cls, n: list[int]) -> "SymLaurentPoly":
        out = SymLaurentPoly()
        for l, k in enumerate(n):
            if k:
                out = out + character(l).scale(k)
        return out


def character(l: int) -> SymLaurentPoly:
    """c_l(a) = sum_{i=-l}^{l} a^i."""
    return SymLaurentPoly((1,) * (l + 1))


ONE = SymLaurentPoly.const(1)
ZERO = SymLaurentPoly()


@dataclass(frozen=True)
class BivariateTruncSeries:
    """sum_{j<=K} terms[j](a) x^j with symmetric Laurent coefficients."""

    terms: tuple[SymLaurentPoly, ...]
    K: int

    def __post_init__(self):
        t = tuple(self.terms[: self.K + 1])
        t = t + (ZERO,) * (self.K + 1 - len(t))
        object.__setattr__(self, "terms", t)

    @classmethod
    def one(cls, K: int) -> "BivariateTruncSeries":
        return cls((ONE,), K)

    def __getitem__(self, j: int) -> SymLaurentPoly:
        return self.terms[j]

    def __mul__(self, other: "BivariateTruncSeries") -> "BivariateTruncSeries":
        K = min(self.K, other.K)
        out = [ZERO] * (K + 1)
        for i, u in enumerate(self.terms[: K + 1]):
            if u.is_zero():
                continue
            for j in range(K + 1 - i):
                v = other.terms[j]
                if not v.is_zero():
                    out[i + j] = out[i + j] + u * v
        return BivariateTruncSeries(tuple(out), K)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BivariateTruncSeries):
            return NotImplemented
        return self.K == other.K and self.terms == other.terms

    def __hash__(self):
        return hash((self.terms, self.K))

    def inverse(self) -> "BivariateTruncSeries":
        """1/self for a series with constant term 1, coefficient by coefficient."""
        if self.terms[0] != ONE:
            raise ValueError("only series with constant term 1 are inverted")
        inv = [ONE]
        for n in range(1, self.K + 1):
            acc = ZERO
            for j in range(1, n + 1):
                if not self.terms[j].is_zero():
                    acc = acc + self.terms[j] * inv[n - j]
            inv.append(-acc)
        return BivariateTruncSeries(tuple(inv), self.K)

    def __pow__(self, e: int) -> "BivariateTruncSeries":
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = BivariateTruncSeries.one(self.K)
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def evaluate(self, a: complex, x: complex) -> complex:
        return sum(t(a) * x**j for j, t in enumerate(self.terms))


def l_series(K: int) -> BivariateTruncSeries:
    """l(a, x) = 1 - x - a x - x/a = 1 - c_1(a) x."""
    if K < 1:
        raise ValueError("K must be >= 1")
    return BivariateTruncSeries((ONE, -character(1)), K)


def p_l_series(l: int, k: int, K: int) -> BivariateTruncSeries:
    """prod_{i=-l}^{l} (1 - a^i x^k), truncated at x^K."""
    if K < 1 or k < 1 or l < 0:
        raise ValueError("need l >= 0, k >= 1, K >= 1")
    out = BivariateTruncSeries.one(K)
    for i in range(-l, l + 1):
        if i < 0:
            continue
        if i == 0:
            factor = {k: {0: -1}}
        else:
            # (1 - a^i y)(1 - a^-i y) = 1 - (a^i + a^-i) y + y^2
            factor = {k: {i: -1, -i: -1}, 2 * k: {0: 1}}
        terms = [ONE] + [ZERO] * K
        for deg, laurent in factor.items():
            if deg <= K:
                terms[deg] = SymLaurentPoly.from_laurent(laurent)
        out = out * BivariateTruncSeries(tuple(terms), K)
    return out


@dataclass
class MklTable:
    K: int
    rows: dict[int, list[int]] = field(default_factory=dict)

    def __getitem__(self, k: int) -> list[int]:
        return self.rows[k]

    def negative_entries(self) -> list[tuple[int, int, int]]:
        return [(k, l, m) for k, row in self.rows.items() for l, m in enumerate(row) if m < 0]


def solve_mkl(K: int) -> MklTable:
    """m_{kl} for 1 <= k <= K by peeling the residual one x-degree at a time.

    Row k has entries l = 0 .. max(k-1, 1) (row 1 needs l = 1).
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    R = l_series(K)
    table = MklTable(K)
    for k in range(1, K + 1):
        for j in range(1, k):
            if not R[j].is_zero():
                raise DecompositionError(f"residual x^{j} coefficient nonzero before stage {k}")
        n = (-R[k]).to_characters()
        width = max(k, 2)
        if len(n) > width:
            raise DecompositionError(f"stage {k}: character degree {len(n) - 1} exceeds {width - 1}")
        row = n + [0] * (width - len(n))
        table.rows[k] = row
        for l, m in enumerate(row):
            if m:
                R = R * p_l_series(l, k, K) ** (-m)
        if not R[k].is_zero():
            raise DecompositionError(f"stage {k} did not clear x^{k}")
    return table


def product_from_table(table: MklTable, K: int) -> BivariateTruncSeries:
    out = BivariateTruncSeries.one(K)
    for k in range(1, K + 1):
        for l, m in enumerate(table[k]):
            if m:
                out = out * p_l_series(l, k, K) ** m
    return out


def reconstruct_check(K: int, table: MklTable | None = None) -> bool:
    """Multiply the p_l(a, x^k)^{m_kl} back together and compare with l(a, x)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    table = table if table is not None else solve_mkl(K)
    if table.K < K:
        raise ValueError("table is smaller than K")
    return product_from_table(table, K) == l_series(K)


# Reference rows k = 1..11; blank cells are 0.
REFERENCE_TABLE: dict[int, list[int]] = {
    1: [0, 1],
    2: [0, 1],
    3: [0, 1, 1],
    4: [0, 2, 1, 1],
    5: [1, 3, 3, 2, 1],
    6: [1, 7, 6, 5, 2, 1],
    7: [5, 13, 15, 12, 7, 3, 1],
    8: [9, 31, 33, 31, 18, 10, 3, 1],
    9: [25, 67, 84, 74, 52, 29, 12, 4, 1],
    10: [55, 163, 198, 192, 137, 85, 39, 16, 4, 1],
    11: [144, 383, 500, 483, 375, 240, 127, 55, 19, 5, 1],
}


@dataclass(frozen=True)
class ExperimentRow:
    K: int
    partial: float
    target: float
    residual: float
    tail_indicator: float


# exponents |m| (2l+1) p^-k beyond this are treated as overflow of the experiment
EXPONENT_CAP = 1e6


def lambda_product_experiment(d: SatakeData, Kmax: int, table: MklTable | None = None) -> list[ExperimentRow]:
    """Partial products prod_{k<=K} prod_l L(k, pi_p, Sym^{2l})^{-m_kl}, K = 1..Kmax.

    Exploratory: nothing is known about convergence.  ``tail_indicator`` is
    max_l |m_{K,l}| (2K-1) p^-K, the size of the last stage's contribution.
    """
    if not d.unitary:
        raise ValueError("the experiment needs unitary Satake data")
    if Kmax < 1:
        raise ValueError("Kmax must be >= 1")
    table = table if table is not None and table.K >= Kmax else solve_mkl(Kmax)
    target = lambda_p(d)
    log_partial = 0.0
    rows = []
    for K in range(1, Kmax + 1):
        for l, m in enumerate(table[K]):
            if not m:
                continue
            if abs(m) * (2 * l + 1) * d.p ** (-K) > EXPONENT_CAP:
                raise OverflowError(f"m_({K},{l}) = {m} too large for a numeric product")
            log_partial -= m * math.log(sym_power_L_local(d, l, K))
        partial = math.exp(log_partial)
        indicator = max(abs(m) for m in table[K]) * (2 * K - 1) * d.p ** (-K)
        rows.append(ExperimentRow(K, partial, target, abs(partial - target), indicator))
    return rows


def suggested_kmax(p: int, threshold: float = 1e-12, kcap: int = 30, table: MklTable | None = None) -> int | None:
    """Smallest K with max_l |m_{K,l}| (2K-1) p^-K < threshold, or None if K <= kcap never gets there.

    For p = 2 and 3 the m_{kl} grow too fast and the answer is None.
    """
    table = table if table is not None and table.K >= kcap else solve_mkl(kcap)
    for K in range(1, kcap + 1):
        if max(abs(m) for m in table[K]) * (2 * K - 1) * float(p) ** (-K) < threshold:
            return K
    return None
