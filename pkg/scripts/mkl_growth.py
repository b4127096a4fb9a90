"""Growth of the exponents m_kl for k <= KMAX, and where the Sym-power experiment could be truncated.

    python3 scripts/mkl_growth.py [KMAX]
"""

import math
import sys
import time

from deltaperiod.mcoeffs import solve_mkl, suggested_kmax

kmax = int(sys.argv[1]) if len(sys.argv) > 1 else 30
t0 = time.perf_counter()
table = solve_mkl(kmax)
print(f"solved k <= {kmax} in {time.perf_counter() - t0:.2f} s")
print(f"{'k':>3} {'max_l m_kl':>16} {'sum_l m_kl':>16} {'log3(max)/k':>12}")
for k in range(1, kmax + 1):
    row = table[k]
    big = max(abs(m) for m in row)
    print(f"{k:>3} {big:>16} {sum(row):>16} {math.log(big, 3) / k:>12.4f}")

neg = table.negative_entries()
print("negative entries:", neg if neg else "none")
for p in (2, 3, 5, 7, 11, 13):
    K = suggested_kmax(p, table=table, kcap=kmax)
    print(f"p={p:>2}: stage indicator below 1e-12 at K = {K if K else f'never for K <= {kmax}'}")
