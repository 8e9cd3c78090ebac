"""Cost of the symbolic Vandermonde-Jacobian identity: cofactor vs fraction-free elimination."""

import argparse
from time import perf_counter

from cuspcob.verify import elementary_symmetric_map, jacobian, vandermonde_product


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=6)
    args = ap.parse_args()
    print(f"{'k':>2} {'terms':>6} {'cofactor s':>11} {'bareiss s':>10} identity")
    for k in range(2, args.kmax + 1):
        J = jacobian(elementary_symmetric_map(k))
        t0 = perf_counter()
        c = J.det_cofactor()
        t1 = perf_counter()
        b = J.det_bareiss()
        t2 = perf_counter()
        same = c == b == vandermonde_product(k)
        print(f"{k:>2} {len(c.terms):>6} {t1 - t0:>11.3f} {t2 - t1:>10.3f} {same}")


if __name__ == "__main__":
    main()
