import math

import mpmath
import pytest

from deltaperiod import eulerprod as ep
from deltaperiod.localfactors import adjoint_L_local, delta_satake
from deltaperiod.primes import first_primes, primes_upto
from deltaperiod.qseries import tau


def mp_tilde(bound):
    # independent high-precision product straight from tau(p)
    with mpmath.workdps(40):
        out = mpmath.mpf(1)
        for p in primes_upto(bound):
            p = int(p)
            s2 = mpmath.mpf(tau(p)) ** 2 / mpmath.mpf(p) ** 11 - 2
            lam = 1 - (1 + s2) / p
            L = 1 / ((1 - mpmath.mpf(1) / p) * (1 - s2 / p + mpmath.mpf(1) / p**2))
            out *= lam * L
        return float(out)


def test_tilde_against_mpmath():
    for N in (2, 100, 2000):
        assert ep.tilde_lambda_partial(prime_bound=N) == pytest.approx(mp_tilde(N), rel=1e-12)


def test_first_k_primes_is_prime_bound_of_kth_prime():
    assert int(first_primes(100)[-1]) == 541
    assert ep.tilde_lambda_partial(first_k_primes=100) == ep.tilde_lambda_partial(prime_bound=541)


def test_determinism_and_threads():
    a = ep.tilde_lambda_partial(prime_bound=20_000)
    ep._CACHE.__init__()
    b = ep.tilde_lambda_partial(prime_bound=20_000, threads=4)
    assert a == b


def test_convergence_table_bitwise():
    assert ep.convergence_table([]) == []
    (row,) = ep.convergence_table([2])
    assert row[1] == ep.tilde_lambda_partial(prime_bound=2)
    for N, tilde, _ in ep.convergence_table([100, 1000, 5000]):
        assert tilde == ep.tilde_lambda_partial(prime_bound=N)
    with pytest.raises(ValueError):
        ep.convergence_table([1000, 100])


def test_cauchy_within_envelope():
    C = ep.envelope_constant()
    ps, logs, _, q = ep.prime_factor_logs(10_000)
    assert all(abs(q) * ps**1.5 <= C * (1 + 1e-12))
    for N1, N2 in ((1000, 3000), (1000, 10_000), (3000, 10_000)):
        ratio = math.log(ep.tilde_lambda_partial(prime_bound=N2) / ep.tilde_lambda_partial(prime_bound=N1))
        bound = sum(C * float(p) ** -1.5 for p in primes_upto(N2) if p > N1)
        assert abs(ratio) <= bound


def test_invariant_tail_self_consistency():
    a, b = ep.invariant_lambda(1000), ep.invariant_lambda(10_000)
    assert abs(math.log(b.value / a.value)) <= a.tail_estimate


def test_prime_tail_bound_is_an_upper_bound():
    ps = primes_upto(2_000_000).astype(float)
    for N in (100, 1000, 10_000):
        for e in (1.5, 2.0):
            # finite truncation of the true tail, so this direction is safe
            assert float(sum(ps[ps > N] ** -e)) <= ep.prime_tail_sum_bound(N, e)


def test_adjoint_accumulator():
    assert ep.partial_adjoint_L(2) == pytest.approx(adjoint_L_local(delta_satake(2)), rel=1e-15)
    seq = adjoint_L_local(delta_satake(2)) * adjoint_L_local(delta_satake(3))
    assert ep.partial_adjoint_L(3) == pytest.approx(seq, rel=1e-15)
    acc = ep.EulerAccumulator()
    acc.add(2, 0.5)
    with pytest.raises(ValueError):
        acc.add(2, 0.5)
    with pytest.raises(ArithmeticError):
        acc.add(3, 0.0)


def test_invariant_requires_100_and_tolerance():
    with pytest.raises(ValueError):
        ep.invariant_lambda(50)
    with pytest.raises(ep.TailToleranceError):
        ep.invariant_lambda(1000, tolerance=1e-9)


def test_archimedean_part():
    assert ep.invariant_lambda(100).archimedean_part == pytest.approx(1.8305, abs=1e-4)


def test_hundred_primes_convention():
    conv = ep.hundred_primes_convention()
    assert conv["matching_convention"] == "first_k_primes=100"
    assert conv["deviation_first_k"] < 5e-4
