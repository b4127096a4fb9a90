from __future__ import annotations

import math

import numpy as np


def primes_upto(n: int) -> np.ndarray:
    """Primes p <= n, ascending (sieve of Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.flatnonzero(sieve).astype(np.int64)


def first_primes(k: int) -> np.ndarray:
    if k < 1:
        return np.zeros(0, dtype=np.int64)
    # p_k < k (ln k + ln ln k) for k >= 6
    bound = 15 if k < 6 else int(k * (math.log(k) + math.log(math.log(k)))) + 1
    return primes_upto(bound)[:k]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))
