"""Exact integer q-series and the Ramanujan tau function.

Products use Kronecker substitution: each series is packed into one big
integer (fixed-width slots, positive and negative parts kept separately) and
multiplied with GMP.  Slot widths come from the a-priori bound
``max|a| * sum|b|`` so no coefficient can spill into its neighbour.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import gmpy2

__all__ = [
    "IntPowerSeries",
    "eta_power_product",
    "pentagonal_series",
    "delta_qexpansion",
    "tau",
    "tau_table",
    "normalized_eigenvalue",
    "RamanujanBoundError",
]

# Above this truncation delta_qexpansion switches from the literal
# product to the pentagonal route (same coefficients, cross-checked in tests).
PRODUCT_MAX_TRUNC = 2048


class RamanujanBoundError(ArithmeticError):
    """|tau(p)| p^{-11/2} exceeded 2: the tau table is wrong."""


def _pack(values: Sequence[int], width: int) -> gmpy2.mpz:
    raw = b"".join(v.to_bytes(width, "little") for v in values)
    return gmpy2.mpz(int.from_bytes(raw, "little"))


def _unpack(z: gmpy2.mpz, width: int, count: int) -> list[int]:
    raw = int(z).to_bytes(max(width * count, (int(z).bit_length() + 7) // 8), "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(count)]


def _split_signs(c: Sequence[int]) -> tuple[list[int], list[int]]:
    return [x if x > 0 else 0 for x in c], [-x if x < 0 else 0 for x in c]


def _kronecker_mul(a: Sequence[int], b: Sequence[int], trunc: int) -> list[int]:
    a = list(a[:trunc])
    b = list(b[:trunc])
    if not any(a) or not any(b):
        return [0] * trunc
    bound = max(abs(x) for x in a) * sum(abs(x) for x in b)
    width = (bound.bit_length() + 8) // 8 + 1
    ap, an = _split_signs(a)
    bp, bn = _split_signs(b)
    Ap, An, Bp, Bn = (_pack(v, width) for v in (ap, an, bp, bn))
    pos = _unpack(Ap * Bp + An * Bn, width, trunc)
    neg = _unpack(Ap * Bn + An * Bp, width, trunc)
    return [x - y for x, y in zip(pos, neg)]


@dataclass(frozen=True)
class IntPowerSeries:
    """Power series sum c_i q^i known exactly for 0 <= i < trunc."""

    coeffs: tuple[int, ...]
    trunc: int

    def __post_init__(self):
        if self.trunc < 0:
            raise ValueError("truncation order must be non-negative")
        c = tuple(int(x) for x in self.coeffs[: self.trunc])
        c = c + (0,) * (self.trunc - len(c))
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_sparse(cls, terms: dict[int, int], trunc: int) -> "IntPowerSeries":
        c = [0] * trunc
        for k, v in terms.items():
            if 0 <= k < trunc:
                c[k] += v
        return cls(tuple(c), trunc)

    @classmethod
    def one(cls, trunc: int) -> "IntPowerSeries":
        return cls.from_sparse({0: 1}, trunc)

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __len__(self) -> int:
        return self.trunc

    def truncate(self, trunc: int) -> "IntPowerSeries":
        if trunc > self.trunc:
            raise ValueError("cannot extend a truncated series")
        return IntPowerSeries(self.coeffs[:trunc], trunc)

    def _common(self, other: "IntPowerSeries") -> int:
        if not isinstance(other, IntPowerSeries):
            return NotImplemented
        return min(self.trunc, other.trunc)

    def __add__(self, other):
        t = self._common(other)
        if t is NotImplemented:
            return t
        return IntPowerSeries(tuple(x + y for x, y in zip(self.coeffs[:t], other.coeffs[:t])), t)

    def __neg__(self):
        return IntPowerSeries(tuple(-x for x in self.coeffs), self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPowerSeries(tuple(other * x for x in self.coeffs), self.trunc)
        t = self._common(other)
        if t is NotImplemented:
            return t
        return IntPowerSeries(tuple(_kronecker_mul(self.coeffs, other.coeffs, t)), t)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntPowerSeries":
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = IntPowerSeries.one(self.trunc)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result


def _sparse_mul(a: dict[int, int], b: dict[int, int], trunc: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for i, x in a.items():
        for j, y in b.items():
            k = i + j
            if k < trunc:
                out[k] = out.get(k, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _binomial_power24(n: int, trunc: int) -> dict[int, int]:
    # (1 - q^n)^24 = ((((1-q^n)^2)^2)^2)^2 * (1-q^n)^8
    b = {0: 1, n: -1} if n < trunc else {0: 1}
    squares = [b]
    for _ in range(4):
        squares.append(_sparse_mul(squares[-1], squares[-1], trunc))
    return _sparse_mul(squares[4], squares[3], trunc)


def eta_power_product(trunc: int) -> IntPowerSeries:
    """prod_{n=1}^{trunc} (1 - q^n)^24 mod q^trunc by sequential multiplication.

    The running product stays packed in one signed big integer; multiplying
    by a sparse binomial is a handful of shifted additions.
    """
    if trunc < 1:
        raise ValueError("trunc must be positive")
    # |coeff of q^k in any partial product| <= p_24(k) <= exp(4 pi sqrt(k))
    width_bits = int(4 * math.pi * math.sqrt(trunc) / math.log(2)) + 4
    total_bits = width_bits * trunc
    mask = (gmpy2.mpz(1) << total_bits) - 1
    half = gmpy2.mpz(1) << (total_bits - 1)
    acc = gmpy2.mpz(1)
    for n in range(1, trunc):
        factor = _binomial_power24(n, trunc)
        new = gmpy2.mpz(0)
        for k, c in factor.items():
            new += c * (acc << (k * width_bits))
        new &= mask
        if new >= half:
            new -= mask + 1
        acc = new
    return IntPowerSeries(tuple(_unpack_signed(acc, width_bits, trunc)), trunc)


def _unpack_signed(z: gmpy2.mpz, width_bits: int, count: int) -> list[int]:
    out = []
    z = int(z)
    slot = 1 << width_bits
    for _ in range(count):
        d = z & (slot - 1)
        if d >= slot >> 1:
            d -= slot
        out.append(d)
        z = (z - d) >> width_bits
    return out


def pentagonal_series(trunc: int) -> IntPowerSeries:
    """Euler's prod (1 - q^n) = sum_k (-1)^k q^{k(3k-1)/2}, k over all integers."""
    terms: dict[int, int] = {0: 1}
    k = 1
    while k * (3 * k - 1) // 2 < trunc:
        sign = -1 if k % 2 else 1
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if g < trunc:
                terms[g] = terms.get(g, 0) + sign
        k += 1
    return IntPowerSeries.from_sparse(terms, trunc)


def delta_qexpansion(trunc: int, method: str = "auto") -> IntPowerSeries:
    """q * prod_{n>=1} (1 - q^n)^24 truncated at q^trunc; coefficient n is tau(n).

    ``method="product"`` multiplies the binomials out one by one (the
    brute-force reference); ``"pentagonal"`` raises Euler's sparse series to
    the 24th power by squaring.  ``"auto"`` picks the product for small
    truncations.
    """
    if trunc < 2:
        raise ValueError("delta_qexpansion needs trunc >= 2")
    if method == "auto":
        method = "product" if trunc <= PRODUCT_MAX_TRUNC else "pentagonal"
    if method == "product":
        eta24 = eta_power_product(trunc - 1)
    elif method == "pentagonal":
        e = pentagonal_series(trunc - 1)
        e8 = ((e * e) ** 2) ** 2
        eta24 = (e8 * e8) * e8
    else:
        raise ValueError(f"unknown method {method!r}")
    return IntPowerSeries((0,) + eta24.coeffs, trunc)


CACHE_ENV = "DELTAPERIOD_CACHE_DIR"


class _TauCache:
    """Growable table (0, tau(1), tau(2), ...), optionally mirrored on disk."""

    def __init__(self):
        self._lock = threading.Lock()
        self._values: tuple[int, ...] = (0,)

    @staticmethod
    def _disk_path() -> Path | None:
        root = os.environ.get(CACHE_ENV)
        return Path(root) / "tau_table.txt" if root else None

    def _load_disk(self, n: int) -> tuple[int, ...] | None:
        path = self._disk_path()
        if path is None or not path.exists():
            return None
        values = tuple(int(line) for line in path.read_text(encoding="utf-8").split())
        return values if len(values) > n else None

    def _save_disk(self) -> None:
        path = self._disk_path()
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text("\n".join(map(str, self._values)) + "\n", encoding="utf-8")
        tmp.replace(path)

    def upto(self, n: int) -> tuple[int, ...]:
        with self._lock:
            if len(self._values) <= n:
                cached = self._load_disk(n)
                if cached is not None:
                    self._values = cached
                else:
                    # grow geometrically so repeated requests stay cheap
                    trunc = max(n + 1, 2 * len(self._values), 64)
                    self._values = delta_qexpansion(trunc).coeffs
                    self._save_disk()
            return self._values


_CACHE = _TauCache()


def tau(n: int) -> int:
    if n < 1:
        raise ValueError("tau(n) is defined for n >= 1")
    return _CACHE.upto(n)[n]


def tau_table(max_n: int) -> list[int]:
    """[tau(1), ..., tau(max_n)]."""
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    return list(_CACHE.upto(max_n)[1 : max_n + 1])


def normalized_eigenvalue(p: int) -> float:
    """t_p = tau(p) p^{-11/2} = alpha_p + 1/alpha_p."""
    t = tau(p) / (p**5 * math.sqrt(p))
    if abs(t) > 2 + 1e-12:
        raise RamanujanBoundError(f"|t_{p}| = {abs(t)!r} > 2")
    return t
