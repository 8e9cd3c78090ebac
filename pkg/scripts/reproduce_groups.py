"""Print the stems table, the low pages and every assembled group for n = 0..11."""

import argparse

from cuspcob.cli import render_stems
from cuspcob.fga import INTEGRAL, ODD
from cuspcob.ss_engine import THREE, cusp_cob_sequence, page, prim_cusp_3primary, prim_fold_group
from cuspcob.stems import default_table


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=11)
    args = ap.parse_args()
    table = default_table()

    print(render_stems(table), end="\n\n")
    for r in (1, 2, 3):
        print(page(r, 3 if r < 3 else 5, table, INTEGRAL).render(), end="\n\n")
    print(page(3, 13, table, THREE).render(), end="\n\n")

    print(f"{'n':>3}  {'fold (integral)':<24} {'fold (odd)':<12} {'cusp, 3-primary pieces':<26} cusp cob ends (odd)")
    for n in range(args.nmax + 1):
        fold = prim_fold_group(n, table)
        fi = fold.integral
        fold_int = str(fi.total) if fi.total is not None else fi.qualifier
        cusp = " | ".join(str(g) for g in prim_cusp_3primary(n, table).pieces)
        cob = cusp_cob_sequence(n, table)
        print(f"{n:>3}  {fold_int:<24} {str(fold.odd.total):<12} {cusp:<26} {cob.sub} → · → {cob.quotient}")


if __name__ == "__main__":
    main()
