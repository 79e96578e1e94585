"""Named property checks over every module, runnable from the CLI.

Each check returns (passed, detail). The default run uses digits=40; the
pass tolerance follows the digits-slack policy (10^-(digits-20) at
digits >= 40, 10^-(digits-10) below, so --digits 15 relaxes to 1e-5).
"""

from __future__ import annotations

import random
from fractions import Fraction

from mpmath import mp, mpf, mpc

from .hp import (const_euler_gamma, const_pi, real_from_str, real_to_str,
                 with_precision)
from . import special, mellin
from .psi import PsiRequest, SeriesRequest, psi, series_L
from . import identities

_SEED = 20240131


def _tol(ctx):
    slack = 20 if ctx.digits >= 40 else 10
    return ctx.tolerance(slack)


def check_hp_add_sub_roundtrip(ctx):
    rng = random.Random(_SEED)
    worst = mpf(0)
    with ctx.scoped():
        for _ in range(50):
            a = mpf(rng.uniform(-1, 1)) * mpf(10) ** rng.randint(-8, 8)
            b = mpf(rng.uniform(-1, 1)) * mpf(10) ** rng.randint(-8, 8)
            err = abs(((a + b) - b) - a) / max(abs(a), mpf(1) / 10 ** ctx.digits)
            worst = max(worst, err)
        ok = worst < ctx.tolerance(2)
    return ok, f"worst relative drift {mp.nstr(worst, 3)}"


def check_hp_constants_stable(ctx):
    wide = with_precision(2 * ctx.digits)
    with wide.scoped():
        ok = True
        for f in (const_pi, const_euler_gamma):
            a = mp.nstr(f(ctx), ctx.digits - 2)
            b = mp.nstr(f(wide), ctx.digits - 2)
            ok = ok and a == b
    return ok, "leading digits unchanged when doubling precision"


def check_hp_serialization(ctx):
    rng = random.Random(_SEED + 1)
    with ctx.scoped():
        for _ in range(30):
            x = mpf(rng.uniform(-1, 1)) * mpf(10) ** rng.randint(-20, 20)
            if real_from_str(real_to_str(x, ctx), ctx) != x:
                return False, f"round trip failed for {x}"
    return True, "30 random values round-trip exactly"


def check_gamma_reflection(ctx):
    rng = random.Random(_SEED + 2)
    tol = _tol(ctx)
    with ctx.scoped():
        worst = mpf(0)
        for _ in range(100):
            s = mpc(rng.uniform(-5, 5), rng.uniform(-5, 5))
            if abs(s.imag) < 0.05 and abs(s.real - mp.nint(s.real)) < 0.05:
                continue
            lhs = special.gamma(s, ctx) * special.gamma(1 - s, ctx) * mp.sinpi(s)
            worst = max(worst, abs(lhs - mp.pi) / abs(mp.pi))
        return worst < tol, f"worst residual {mp.nstr(worst, 3)}"


def check_gamma_duplication(ctx):
    rng = random.Random(_SEED + 3)
    tol = _tol(ctx)
    with ctx.scoped():
        worst = mpf(0)
        for _ in range(100):
            s = mpc(rng.uniform(-5, 5), rng.uniform(-5, 5))
            if abs(s.imag) < 0.05 and abs(2 * s.real - mp.nint(2 * s.real)) < 0.05:
                continue
            lhs = special.gamma(s, ctx) * special.gamma(s + mpf(1) / 2, ctx)
            rhs = 2 ** (1 - 2 * s) * mp.sqrt(mp.pi) * special.gamma(2 * s, ctx)
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
        return worst < tol, f"worst residual {mp.nstr(worst, 3)}"


def check_zeta_functional_equation(ctx):
    rng = random.Random(_SEED + 4)
    tol = _tol(ctx)
    with ctx.scoped():
        worst = mpf(0)
        for _ in range(40):
            s = mpc(rng.uniform(-3, -1), rng.uniform(-10, 10))
            lhs = special.zeta(s, ctx)
            rhs = (2 ** s * mp.pi ** (s - 1) * special.gamma(1 - s, ctx)
                   * special.zeta(1 - s, ctx) * mp.sinpi(s / 2))
            worst = max(worst, abs(lhs - rhs) / max(abs(rhs), mpf(10) ** (-ctx.digits)))
        return worst < tol, f"worst residual {mp.nstr(worst, 3)}"


def check_euler_even_zeta(ctx):
    tol = _tol(ctx)
    with ctx.scoped():
        worst = mpf(0)
        for m in range(1, 9):
            b = special.bernoulli_frac(2 * m)
            sgn = -1 if (m + 1) % 2 else 1
            rhs = (sgn * (2 * mp.pi) ** (2 * m) * mpf(b.numerator) / b.denominator
                   / (2 * mp.factorial(2 * m)))
            worst = max(worst, abs(special.zeta(2 * m, ctx) - rhs) / abs(rhs))
        return worst < tol, f"m=1..8, worst residual {mp.nstr(worst, 3)}"


def check_stirling_decay(ctx):
    with ctx.scoped():
        prev = None
        for i in range(10, 61):
            t = mpf(i) / 2
            g = abs(special.gamma(mpc(2, t), ctx))
            if prev is not None and g >= prev:
                return False, f"|Gamma(2+it)| not decreasing at t={t}"
            prev = g
    return True, "|Gamma(2+it)| strictly decreasing on t in [5, 30]"


def check_bernoulli_recurrence(ctx):
    tab = special.bernoulli(64)
    for m in range(1, 65):
        acc = Fraction(0)
        for j in range(m):
            acc += Fraction(_comb(m + 1, j)) * tab[j]
        if acc != -tab[m] * (m + 1):
            return False, f"recurrence fails at m={m}"
    if tab[0] != 1 or tab[1] != Fraction(-1, 2) or any(tab[2 * j + 1] != 0 for j in range(1, 31)):
        return False, "base values wrong"
    return True, "exact recurrence holds through B_64"


def _comb(n, k):
    import math
    return math.comb(n, k)


def check_divisor_multiplicative(ctx):
    tab3 = special.divisor_sieve(3, 500)
    import math
    for (p, e) in [(2, 3), (3, 2), (5, 2), (7, 1), (13, 1)]:
        n = p ** e
        if n <= 500 and tab3.d(n) != math.comb(e + 2, 2):
            return False, f"d_3({n}) != C({e}+2,2)"
    tab1 = special.divisor_sieve(1, 64)
    if any(tab1.d(n) != 1 for n in range(1, 65)):
        return False, "d_1 != 1"
    return True, "d_k(p^e) = C(e+k-1, k-1) on spot checks; d_1 == 1"


def check_lambert_two_forms(ctx):
    tol = _tol(ctx)
    with ctx.scoped():
        a = special.lambert_series(-1, 2 * mp.pi, ctx)
        b = special.lambert_series_sigma_form(-1, 2 * mp.pi, ctx)
        res = abs(a - b)
        return res < tol, f"|direct - sigma form| = {mp.nstr(res, 3)}"


def check_bessel_k_half(ctx):
    tol = _tol(ctx)
    with ctx.scoped():
        v = special.bessel_k_half(1, ctx)
        res = abs(v - mp.sqrt(mp.pi / 2) / mp.e)
        return res < tol, f"K_1/2(1) residual {mp.nstr(res, 3)}"


def check_line_conjugate_symmetry(ctx):
    with ctx.scoped():
        f = lambda s: special.gamma(s, ctx) * mpf(3) ** (-s)
        st = mellin.line_settings(ctx, 2, poly_power=1.5)
        v = mellin.line_integral(f, st, ctx)
        bound = ctx.tolerance(2)
        return abs(v.imag) < bound, f"|Im| = {mp.nstr(abs(v.imag), 3)}"


def check_mesh_refinement_geometric(ctx):
    with ctx.scoped():
        ok = True
        details = []
        for x in (1, 5):
            f = lambda s: special.gamma(s, ctx) * mpf(x) ** (-s)
            st = mellin.QuadratureSettings(c=mpf(2), h0=mpf(1) / 2,
                                           T=mellin.line_settings(ctx, 2).T)
            tr = []
            mellin.line_integral(f, st, ctx, conj_symmetric=True, trace=tr)
            discs = [t["discrepancy"] for t in tr if t["discrepancy"]]
            for i in range(1, len(discs)):
                if discs[i] != 0 and discs[i - 1] / discs[i] < 10:
                    ok = False
            details.append("x%d:%d levels" % (x, len(tr)))
        return ok, "successive discrepancies shrink >= 10x (" + ", ".join(details) + ")"


def check_cauchy_order_zero(ctx):
    with ctx.scoped():
        f = lambda s: special.zeta(2 + s, ctx)
        cs = mellin.circle_settings(ctx, 0)
        v = mellin.cauchy_derivative(f, 0, cs, ctx)
        res = abs(v - special.zeta(2, ctx))
        return res < ctx.tolerance(2), f"residual {mp.nstr(res, 3)}"


def check_truncation_bound(ctx):
    with ctx.scoped():
        st = mellin.line_settings(ctx, mpf(5) / 2, poly_power=8.0)
        lhs = mp.exp(-mp.pi * st.T / 2) * st.T ** 8
        ok = lhs < ctx.tolerance(-5)
        return ok, f"e^(-pi T/2) T^p = {mp.nstr(lhs, 3)} at T={st.T}"


def check_psi_strategy_agreement(ctx):
    tol = ctx.tolerance(8)
    with ctx.scoped():
        worst = mpf(0)
        for k in (1, 2):
            for rho in (mpf(1), 2 * mp.pi):
                for x in (mpf(1), mpf(10)):
                    a = psi(PsiRequest(rho=rho, k=k, x=x, strategy="closed_form"), ctx).value
                    b = psi(PsiRequest(rho=rho, k=k, x=x, strategy="inverse_mellin"), ctx).value
                    worst = max(worst, abs(a - b))
        return worst < tol, f"worst |closed - inverse_mellin| = {mp.nstr(worst, 3)}"


def check_psi_shape(ctx):
    with ctx.scoped():
        xs = [mpf(i) / 2 for i in range(1, 17)]
        v1 = [psi(PsiRequest(rho=1, k=1, x=x), ctx).value for x in xs]
        if any(v <= 0 for v in v1):
            return False, "k=1 not positive"
        if any(v1[i] <= v1[i + 1] for i in range(len(v1) - 1)):
            return False, "k=1 not strictly decreasing"
        # k=2 oscillates in sign; its magnitude must still die off
        a = abs(psi(PsiRequest(rho=1, k=2, x=mpf(2)), ctx).value)
        b = abs(psi(PsiRequest(rho=1, k=2, x=mpf(40)), ctx).value)
        return b < a, "k=1 positive decreasing; |k=2| decaying (sign oscillates)"


def check_psi_scaling(ctx):
    tol = ctx.tolerance(2)
    with ctx.scoped():
        worst = mpf(0)
        for (rho, x) in [(mpf(3), mpf(2)), (2 * mp.pi, mpf(1) / 2)]:
            a = psi(PsiRequest(rho=rho, k=2, x=x), ctx).value
            b = psi(PsiRequest(rho=rho * x, k=2, x=mpf(1)), ctx).value
            worst = max(worst, abs(a - b))
        return worst < tol, f"psi(rho,x) vs psi(rho x,1): {mp.nstr(worst, 3)}"


def check_series_tail(ctx):
    with ctx.scoped():
        a = series_L(SeriesRequest(rho=2 * mp.pi, k=1, m=1, N_max=50_000), ctx,
                     strategy="terms")
        b = series_L(SeriesRequest(rho=2 * mp.pi, k=1, m=1, N_max=100_000), ctx,
                     strategy="terms")
        res = abs(a.value - b.value)
        return res < ctx.tolerance(5), f"N_max doubling moved sum by {mp.nstr(res, 3)}"


def check_theta_reflection_duality(ctx):
    tol = _tol(ctx)
    with ctx.scoped():
        th = mpf(3) / 10
        k, m = 2, 1
        rp = identities.verify_main(identities.IdentityParams(k=k, m=m, theta=th), ctx)
        rm = identities.verify_main(identities.IdentityParams(k=k, m=m, theta=-th), ctx)
        if not (rp.passed and rm.passed):
            return False, "one of the mirrored runs failed"
        alpha = mp.pi * mp.exp(th)
        beta = mp.pi / mp.exp(th)
        # alpha-side bracket from the theta run vs from the mirrored run's rhs
        bracket_direct = rp.lhs * (alpha ** k) ** m
        blk = identities.bernoulli_block(k, m, beta, alpha, ctx)
        sgn = -1 if m % 2 else 1
        bracket_mirrored = (rm.rhs - blk) * sgn * (alpha ** k) ** m
        res = abs(bracket_direct - bracket_mirrored) / max(abs(bracket_direct), mpf(1))
        return res < tol, f"bracket relation residual {mp.nstr(res, 3)}"


def check_reindex_exact(ctx):
    for (k, m) in [(1, 1), (2, 1), (3, 2), (2, 3)]:
        coeffs = identities.bernoulli_block_coeffs(k, m)
        flipped = [(-1) ** (m + 1) * q for q in reversed(coeffs)]
        if coeffs != flipped:
            return False, f"reindex identity fails at k={k}, m={m}"
    return True, "j -> m+1-j reindex exact at the rational level"


def check_lerch_value(ctx):
    tol = _tol(ctx)
    with ctx.scoped():
        L = series_L(SeriesRequest(rho=2 * mp.pi, k=1, m=1), ctx).value
        res = abs(special.zeta(3, ctx) + 2 * L - 7 * mp.pi ** 3 / 180)
        return res < tol, f"zeta(3) + 2 sum vs 7 pi^3/180: {mp.nstr(res, 3)}"


def check_residue_assembly(ctx):
    tol = ctx.tolerance(8)
    with ctx.scoped():
        lhs, rhs = identities.residue_assembly_check(1, 1, (2 * mp.pi) ** 1, ctx)
        res = abs(lhs - rhs)
        return res < tol, f"contour-shift bookkeeping residual {mp.nstr(res, 3)}"


CHECKS = [
    ("hp", "add_sub_roundtrip", check_hp_add_sub_roundtrip),
    ("hp", "constants_stable", check_hp_constants_stable),
    ("hp", "serialization_roundtrip", check_hp_serialization),
    ("special", "gamma_reflection", check_gamma_reflection),
    ("special", "gamma_duplication", check_gamma_duplication),
    ("special", "zeta_functional_equation", check_zeta_functional_equation),
    ("special", "euler_even_zeta", check_euler_even_zeta),
    ("special", "stirling_decay", check_stirling_decay),
    ("special", "bernoulli_recurrence", check_bernoulli_recurrence),
    ("special", "divisor_multiplicative", check_divisor_multiplicative),
    ("special", "lambert_two_forms", check_lambert_two_forms),
    ("special", "bessel_k_half", check_bessel_k_half),
    ("mellin", "line_conjugate_symmetry", check_line_conjugate_symmetry),
    ("mellin", "mesh_refinement_geometric", check_mesh_refinement_geometric),
    ("mellin", "cauchy_order_zero", check_cauchy_order_zero),
    ("mellin", "truncation_bound", check_truncation_bound),
    ("psi", "strategy_agreement", check_psi_strategy_agreement),
    ("psi", "shape", check_psi_shape),
    ("psi", "scaling_symmetry", check_psi_scaling),
    ("psi", "series_tail", check_series_tail),
    ("identities", "theta_reflection_duality", check_theta_reflection_duality),
    ("identities", "reindex_exact", check_reindex_exact),
    ("identities", "lerch_value", check_lerch_value),
    ("identities", "residue_assembly", check_residue_assembly),
]


def run(digits: int = 40, name_filter: str = "", out=print) -> bool:
    ctx = with_precision(digits)
    all_ok = True
    ran = 0
    for module, name, fn in CHECKS:
        full = f"{module}.{name}"
        if name_filter and name_filter not in full:
            continue
        ran += 1
        try:
            ok, detail = fn(ctx)
        except Exception as exc:   # a crashed check is a failed check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        all_ok = all_ok and ok
        out(f"{'PASS' if ok else 'FAIL'}  {full:42s} {detail}")
    if ran == 0:
        out(f"no checks match filter {name_filter!r}")
        return False
    out(f"{'OK' if all_ok else 'FAILURES'}: {ran} checks at digits={digits}")
    return all_ok
