"""Time the engine against plain summation at a few precisions.

Plain summation needs about tol**(-1/(q-1)) terms, so it is only run where
that count stays under the cap.
"""
import time

from eulersums.const_ring import Family, SumIndex
from eulersums.series_engine import (
    EvalContext,
    PrecisionUnreachable,
    eval_euler_sum,
    eval_euler_sum_direct,
    terms_needed,
)

CASES = [SumIndex(Family.T_SUM, 1, 2), SumIndex(Family.S_SUM, 2, 4), SumIndex(Family.R_SUM, 3, 6)]


def main():
    for digits in (30, 50, 100, 200):
        for idx in CASES:
            ctx = EvalContext(digits)
            start = time.perf_counter()
            v = eval_euler_sum(idx, ctx)
            fast = time.perf_counter() - start
            line = f"{digits:>4d} digits  {str(idx):<8s} engine {fast * 1e3:8.1f} ms"
            try:
                n = terms_needed(idx.family, idx.p, idx.q, 1e-12, cap=200_000)
                start = time.perf_counter()
                d = eval_euler_sum_direct(idx, EvalContext(30), n)
                slow = time.perf_counter() - start
                line += f"   plain to 1e-12: {n} terms {slow * 1e3:8.1f} ms, gap {float(v.value - d.value):.1e}"
            except PrecisionUnreachable:
                line += "   plain to 1e-12: over the term cap"
            print(line)


if __name__ == "__main__":
    main()
