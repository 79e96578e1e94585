#!/usr/bin/env python3
"""Emit (x, Psi_{rho,k}(x)) rows for plotting the kernel decay.

Usage: python scripts/psi_decay_scan.py [k] [rho] [outfile]

The k=1 kernel decays like e^{-rho x}; k=2 oscillates under an
e^{-sqrt(2 rho x)} envelope; higher k decay like exp(-c (rho x)^{1/k}),
which is what makes the folded contour route indispensable there.
"""

import sys

from mpmath import mp

from ztl import with_precision
from ztl.psi import PsiRequest, psi


def main():
    k = int(sys.argv[1]) if len(sys.argv) > 1 else 2
    rho = sys.argv[2] if len(sys.argv) > 2 else "6.283185307179586476925286766559"
    out = sys.argv[3] if len(sys.argv) > 3 else f"psi_k{k}.csv"
    ctx = with_precision(30)
    with ctx.scoped():
        rho = ctx.mpf(rho)
        xs = [ctx.mpf(i) / 4 for i in range(1, 81)]
        with open(out, "w") as fh:
            fh.write("x,psi\n")
            for x in xs:
                v = psi(PsiRequest(rho=rho, k=k, x=x), ctx)
                fh.write(f"{mp.nstr(x, 10)},{mp.nstr(v.value, 25)}\n")
    print(f"wrote {len(xs)} rows to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
