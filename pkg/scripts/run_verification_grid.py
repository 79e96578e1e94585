#!/usr/bin/env python3
"""Run every identity over the standard verification grid and write one CSV.

Usage: python scripts/run_verification_grid.py [digits] [outfile]

This is the batch the acceptance suite checks case by case; running it
standalone is useful for timing studies and for regenerating the report
artifact after numerical changes.
"""

import sys
import time

from ztl import with_precision
from ztl import identities as idn
from ztl.identities import CSV_HEADER, IdentityParams


def main():
    digits = int(sys.argv[1]) if len(sys.argv) > 1 else 50
    out = sys.argv[2] if len(sys.argv) > 2 else "verification_grid.csv"
    ctx = with_precision(digits)
    rows = []
    t0 = time.perf_counter()

    for k in (1, 2, 3, 4):
        for m in (-2, -1, 1, 2):
            for th in ("0", "0.3", "1.0"):
                r = idn.verify_main(IdentityParams(k=k, m=m, theta=ctx.mpf(th)), ctx)
                print(r)
                rows.append(r)
    for m in (-2, -1, 1, 2, 3):
        for th in ("0", "0.5"):
            r = idn.verify_ramanujan_classical(m, ctx.mpf(th), ctx)
            print(r)
            rows.append(r)
    for m in (1, -1):
        for th in ("0", "0.3"):
            r = idn.verify_dixit(m, ctx.mpf(th), ctx)
            print(r)
            rows.append(r)
    for k in (1, 2, 3):
        for th in ("0.2", "0.7"):
            for fn in (lambda: idn.verify_eisenstein(k, 2, ctx.mpf(th), ctx),
                       lambda: idn.verify_quasimodular(k, ctx.mpf(th), ctx),
                       lambda: idn.verify_eta(k, ctx.mpf(th), ctx)):
                r = fn()
                print(r)
                rows.append(r)
    for k in (1, 2):
        for m in (1, 3, -1):
            r = idn.verify_lerch_general(k, m, ctx)
            print(r)
            rows.append(r)

    with open(out, "w") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(r.csv_row() + "\n")
    failed = [r for r in rows if not r.passed]
    print(f"{len(rows)} verifications in {time.perf_counter() - t0:.0f}s, "
          f"{len(failed)} failed, written to {out}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
