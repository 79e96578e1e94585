"""Left- and right-hand sides of every transformation identity, assembled
from the series, derivative and Bernoulli-block building blocks, with
verification reports.

Parameter convention: alpha = pi e^theta, beta = pi e^-theta, so the
constraint alpha*beta = pi^2 holds by construction and never drifts.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .hp import PrecisionContext
from . import special, mellin
from .psi import PsiRequest, SeriesRequest, VerticalProduct, psi, series_L, divisor_counts

__all__ = [
    "IdentityParams", "VerificationReport", "IDENTITY_NAMES",
    "pass_tolerance", "derivative_term", "bernoulli_block",
    "verify_main", "verify_ramanujan_classical", "verify_dixit",
    "verify_eisenstein", "verify_quasimodular", "verify_eta",
    "verify_lerch_general", "verify", "lambda_line_value",
    "self_duality_check", "residue_assembly_check",
]

IDENTITY_NAMES = ("main", "ramanujan", "dixit", "eisenstein",
                  "quasimodular", "eta", "lerch")

CSV_HEADER = "identity,k,m,theta,lhs,rhs,abs_res,rel_res,digits,seconds"


@dataclass(frozen=True)
class IdentityParams:
    k: int
    m: int
    theta: mpf

    def __post_init__(self):
        if self.k < 1:
            raise special.DomainError("k must be a positive integer")

    @classmethod
    def from_alpha(cls, k, m, alpha, ctx):
        with ctx.scoped():
            return cls(k=k, m=m, theta=mp.log(mpf(alpha) / mp.pi))

    def alpha_beta(self, ctx):
        with ctx.scoped():
            e = mp.exp(mpf(self.theta))
            return mp.pi * e, mp.pi / e


@dataclass(frozen=True)
class VerificationReport:
    identity: str
    k: int
    m: int | None
    theta: str
    digits: int
    lhs: mpf
    rhs: mpf
    abs_residual: mpf
    rel_residual: mpf
    tolerance: mpf
    passed: bool
    elapsed: float

    def csv_row(self, timing: bool = False) -> str:
        ndig = self.digits
        seconds = f"{self.elapsed:.3f}" if timing else "0"
        return ",".join([
            self.identity, str(self.k),
            "" if self.m is None else str(self.m), self.theta,
            mp.nstr(self.lhs, ndig), mp.nstr(self.rhs, ndig),
            mp.nstr(self.abs_residual, 3), mp.nstr(self.rel_residual, 3),
            str(ndig), seconds,
        ])

    def json_dict(self, timing: bool = False) -> dict:
        d = {
            "identity": self.identity, "k": self.k, "m": self.m,
            "theta": self.theta, "digits": self.digits,
            "lhs": mp.nstr(self.lhs, self.digits),
            "rhs": mp.nstr(self.rhs, self.digits),
            "abs_res": mp.nstr(self.abs_residual, 3),
            "rel_res": mp.nstr(self.rel_residual, 3),
            "passed": self.passed,
        }
        d["seconds"] = round(self.elapsed, 3) if timing else 0
        return d

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.identity} k={self.k} m={self.m} theta={self.theta}: "
                f"lhs={mp.nstr(self.lhs, 20)} rhs={mp.nstr(self.rhs, 20)} "
                f"rel_residual={mp.nstr(self.rel_residual, 3)} "
                f"(tol {mp.nstr(self.tolerance, 3)}, {self.elapsed:.2f}s)")


def pass_tolerance(ctx: PrecisionContext) -> mpf:
    """10^-(digits-20) at digits >= 40, 10^-(digits-10) below; covers
    quadrature truncation and derivative conditioning for k <= 4."""
    slack = 20 if ctx.digits >= 40 else 10
    return ctx.tolerance(slack)


def _report(identity, k, m, theta, ctx, lhs, rhs, t0) -> VerificationReport:
    with ctx.scoped():
        abs_res = abs(lhs - rhs)
        rel_res = abs_res / max(abs(lhs), abs(rhs), mpf(1))
        tol = pass_tolerance(ctx)
        return VerificationReport(
            identity=identity, k=k, m=m,
            theta="" if theta is None else mp.nstr(mpf(theta), 12),
            digits=ctx.digits, lhs=lhs, rhs=rhs,
            abs_residual=abs_res, rel_residual=rel_res, tolerance=tol,
            passed=bool(rel_res < tol), elapsed=time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# building blocks

def derivative_term(k: int, m: int, rho, ctx: PrecisionContext):
    """(1/(k-1)!) d^{k-1}/ds^{k-1} of
    zeta^k(2m+1+s) zeta^k(s) Gamma^k(s+1) cos^{k-1}(pi s/2) rho^{-s}  at s=0,
    with rho the same argument handed to the weighted series."""
    if m == 0:
        raise special.DomainError("m must be nonzero (s=0 would sit on a pole)")
    with ctx.scoped():
        rho = mpf(rho)
        if not rho > 0:
            raise special.DomainError("rho must be positive")
        lnr = mp.log(rho)

        def f(s):
            v = (special.zeta(2 * m + 1 + s, ctx) ** k * special.zeta(s, ctx) ** k
                 * special.gamma(s + 1, ctx) ** k * mp.exp(-s * lnr))
            if k > 1:
                v *= mp.cospi(s / 2) ** (k - 1)
            return v

        if k == 1:
            return mpf(f(mpf(0)))
        cs = mellin.circle_settings(ctx, k - 1)
        val = mellin.cauchy_derivative(f, k - 1, cs, ctx) / mp.factorial(k - 1)
        return val.real


def bernoulli_block_coeffs(k: int, m: int) -> list[Fraction]:
    """Exact rational coefficients Q_j = (-1)^j B_{2m-2j+2}^k B_{2j}^k /
    ((2m-2j+2)!^k (2j)!^k), j = 0..m+1; empty for m <= -2."""
    if m <= -2:
        return []
    out = []
    for j in range(0, m + 2):
        num = (special.bernoulli_frac(2 * m - 2 * j + 2) ** k
               * special.bernoulli_frac(2 * j) ** k)
        den = (Fraction(_fact_int(2 * m - 2 * j + 2)) ** k
               * Fraction(_fact_int(2 * j)) ** k)
        out.append((-1) ** j * num / den)
    return out


def _fact_int(n: int) -> int:
    r = 1
    for i in range(2, n + 1):
        r *= i
    return r


def bernoulli_block(k: int, m: int, alpha, beta, ctx: PrecisionContext):
    """(-1)^{km+k+m} (pi/2)^{k-1} 2^{2km} sum_j Q_j alpha^{k(m+1-j)} beta^{kj}.

    The rational inner sum is evaluated exactly (as a polynomial in
    (beta/alpha)^k) and scaled by real powers only at the end. Empty sum for
    m <= -2; the single j=0 term survives at m = -1.
    """
    coeffs = bernoulli_block_coeffs(k, m)
    if not coeffs:
        return ctx.mpf(0)
    with ctx.scoped():
        alpha = mpf(alpha)
        beta = mpf(beta)
        x = (beta / alpha) ** k
        acc = mpf(0)
        for q in reversed(coeffs):
            acc = acc * x + mpf(q.numerator) / q.denominator
        sign = -1 if (k * m + k + m) % 2 else 1
        return (sign * (mp.pi / 2) ** (k - 1) * mpf(2) ** (2 * k * m)
                * alpha ** (k * (m + 1)) * acc)


def _neg_pow(base, m: int):
    # (-base)^(-m) for real base > 0: sign (-1)^m times base^(-m)
    s = -1 if m % 2 else 1
    return s * base ** (-m)


# ---------------------------------------------------------------------------
# the seven verifications

def verify_main(params: IdentityParams, ctx: PrecisionContext) -> VerificationReport:
    """Transformation formula for the k-th power of odd zeta values."""
    if params.m == 0:
        raise special.DomainError("m must be nonzero")
    t0 = time.perf_counter()
    k, m = params.k, params.m
    with ctx.scoped():
        alpha, beta = params.alpha_beta(ctx)
        ra, rb = (2 * alpha) ** k, (2 * beta) ** k
        La = series_L(SeriesRequest(rho=ra, k=k, m=m), ctx).value
        Lb = series_L(SeriesRequest(rho=rb, k=k, m=m), ctx).value
        Da = derivative_term(k, m, ra, ctx)
        Db = derivative_term(k, m, rb, ctx)
        lhs = (alpha ** k) ** (-m) * (La - Da)
        rhs = (_neg_pow(beta ** k, m) * (Lb - Db)
               + bernoulli_block(k, m, alpha, beta, ctx))
    return _report("main", k, m, params.theta, ctx, lhs, rhs, t0)


def verify_ramanujan_classical(m: int, theta, ctx: PrecisionContext) -> VerificationReport:
    """The classical odd-zeta identity, evaluated through Lambert series
    only; fully independent of the Psi machinery."""
    if m == 0:
        raise special.DomainError("m must be nonzero")
    t0 = time.perf_counter()
    with ctx.scoped():
        alpha = mp.pi * mp.exp(mpf(theta))
        beta = mp.pi / mp.exp(mpf(theta))
        z = special.zeta(2 * m + 1, ctx)
        lhs = alpha ** (-m) * (z / 2 + special.lambert_series(-2 * m - 1, 2 * alpha, ctx))
        rhs = (_neg_pow(beta, m) * (z / 2 + special.lambert_series(-2 * m - 1, 2 * beta, ctx))
               + bernoulli_block(1, m, alpha, beta, ctx))
    return _report("ramanujan", 1, m, theta, ctx, lhs, rhs, t0)


def verify_dixit(m: int, theta, ctx: PrecisionContext) -> VerificationReport:
    """The squared-zeta transformation, evaluated literally: Bessel-pair sums
    for the Koshliakov function (leading factor 2), digamma-free log
    derivative of zeta from the circle operator, Euler's constant from the
    constants table."""
    if m == 0:
        raise special.DomainError("m must be nonzero")
    t0 = time.perf_counter()
    with ctx.scoped():
        alpha = mp.pi * mp.exp(mpf(theta))
        beta = mp.pi / mp.exp(mpf(theta))
        z = special.zeta(2 * m + 1, ctx)
        cs = mellin.circle_settings(ctx, 1, center=2 * m + 1)
        zp_over_z = mellin.cauchy_derivative(
            lambda s: special.zeta(s, ctx), 1, cs, ctx).real / z

        def bracket(r):
            # Omega_r(n) = 2 Psi_{(2r)^2, 2}(n), summed with weight n^-(2m+1)
            acc = mpf(0)
            consec = 0
            n = 1
            thresh = ctx.tolerance(-5)
            while True:
                om = 2 * psi(PsiRequest(rho=(2 * r) ** 2, k=2, x=mpf(n)), ctx).value
                term = divisor_counts(2, n).d(n) * om * mp.power(n, -(2 * m + 1))
                acc += term
                if abs(term) < thresh * max(1, abs(acc)):
                    consec += 1
                    if consec >= 5:
                        break
                else:
                    consec = 0
                n += 1
                if n > 10 ** 5:
                    raise ArithmeticError("Koshliakov series stalled")
            return z ** 2 * (mp.euler + mp.log(r / mp.pi) - zp_over_z) + acc

        lhs = alpha ** (-2 * m) * bracket(alpha)
        blk = mpf(0)
        for j in range(0, m + 2):
            q = ((-1) ** j * special.bernoulli_frac(2 * j) ** 2
                 * special.bernoulli_frac(2 * m + 2 - 2 * j) ** 2
                 / (Fraction(_fact_int(2 * j)) ** 2 * Fraction(_fact_int(2 * m + 2 - 2 * j)) ** 2))
            blk += mpf(q.numerator) / q.denominator * alpha ** (2 * j) * beta ** (2 * m + 2 - 2 * j)
        sgn = -1 if m % 2 else 1
        rhs = sgn * beta ** (-2 * m) * bracket(beta) - mpf(2) ** (4 * m) * mp.pi * blk
    return _report("dixit", 2, m, theta, ctx, lhs, rhs, t0)


def verify_eisenstein(k: int, m: int, theta, ctx: PrecisionContext) -> VerificationReport:
    """Weight-2m Eisenstein-type transformation (m > 1): no Bernoulli block
    survives on the right-hand side."""
    if m <= 1:
        raise special.DomainError("eisenstein requires m > 1")
    t0 = time.perf_counter()
    with ctx.scoped():
        alpha = mp.pi * mp.exp(mpf(theta))
        beta = mp.pi / mp.exp(mpf(theta))
        ra, rb = (2 * alpha) ** k, (2 * beta) ** k
        sa = (alpha ** k) ** m
        sb = _neg_pow(beta ** k, -m)
        lhs = (sa * series_L(SeriesRequest(rho=ra, k=k, m=-m), ctx).value
               - sb * series_L(SeriesRequest(rho=rb, k=k, m=-m), ctx).value)
        rhs = (sa * derivative_term(k, -m, ra, ctx)
               - sb * derivative_term(k, -m, rb, ctx))
    return _report("eisenstein", k, m, theta, ctx, lhs, rhs, t0)


def verify_quasimodular(k: int, theta, ctx: PrecisionContext) -> VerificationReport:
    """Weight-2 (quasi-modular) transformation: the m=-1 case, whose
    Bernoulli block collapses to the constant -(pi/2)^{k-1} 2^{-2k}."""
    t0 = time.perf_counter()
    with ctx.scoped():
        alpha = mp.pi * mp.exp(mpf(theta))
        beta = mp.pi / mp.exp(mpf(theta))
        ra, rb = (2 * alpha) ** k, (2 * beta) ** k
        lhs = (alpha ** k * series_L(SeriesRequest(rho=ra, k=k, m=-1), ctx).value
               + beta ** k * series_L(SeriesRequest(rho=rb, k=k, m=-1), ctx).value)
        rhs = (alpha ** k * derivative_term(k, -1, ra, ctx)
               + beta ** k * derivative_term(k, -1, rb, ctx)
               - (mp.pi / 2) ** (k - 1) * mpf(2) ** (-2 * k))
    return _report("quasimodular", k, None, theta, ctx, lhs, rhs, t0)


def eta_derivative_term(k: int, theta, ctx: PrecisionContext):
    """(1/(2k-1)!) d^{2k-1}/ds^{2k-1} of
    Gamma^k(1+s) Gamma^k(1-s) zeta^k(s) zeta^k(-s) cos^{2k-1}(pi s/2) e^{-k theta s}
    at s=0 (the ratio power (alpha/beta)^{-ks/2} equals e^{-k theta s})."""
    with ctx.scoped():
        kt = k * mpf(theta)

        def g(s):
            return (special.gamma(1 + s, ctx) ** k * special.gamma(1 - s, ctx) ** k
                    * special.zeta(s, ctx) ** k * special.zeta(-s, ctx) ** k
                    * mp.cospi(s / 2) ** (2 * k - 1) * mp.exp(-kt * s))

        cs = mellin.circle_settings(ctx, 2 * k - 1)
        val = mellin.cauchy_derivative(g, 2 * k - 1, cs, ctx) / mp.factorial(2 * k - 1)
        return val.real


def verify_eta(k: int, theta, ctx: PrecisionContext) -> VerificationReport:
    """Generalized Dedekind-eta transformation (weight n^-1 series)."""
    t0 = time.perf_counter()
    with ctx.scoped():
        alpha = mp.pi * mp.exp(mpf(theta))
        beta = mp.pi / mp.exp(mpf(theta))
        ra, rb = (2 * alpha) ** k, (2 * beta) ** k
        lhs = (series_L(SeriesRequest(rho=ra, k=k, m=0), ctx).value
               - series_L(SeriesRequest(rho=rb, k=k, m=0), ctx).value)
        sign = -1 if k % 2 else 1
        rhs = (sign * mpf(2) ** k * eta_derivative_term(k, theta, ctx)
               - sign * 2 * mp.pi ** (k - 1) * (beta ** k - alpha ** k) / mpf(24) ** k)
    return _report("eta", k, None, theta, ctx, lhs, rhs, t0)


def verify_lerch_general(k: int, m: int, ctx: PrecisionContext) -> VerificationReport:
    """Odd-m specialization at alpha = beta = pi: the weighted series at
    rho = (2 pi)^k against the derivative term plus an explicit Bernoulli sum."""
    if m == 0 or m % 2 == 0:
        raise special.DomainError("lerch requires odd nonzero m")
    t0 = time.perf_counter()
    with ctx.scoped():
        rho = (2 * mp.pi) ** k
        lhs = series_L(SeriesRequest(rho=rho, k=k, m=m), ctx).value
        bsum = Fraction(0)
        for j in range(0, m + 2):
            bsum += ((-1) ** (j + 1) * special.bernoulli_frac(2 * m - 2 * j + 2) ** k
                     * special.bernoulli_frac(2 * j) ** k
                     / (Fraction(_fact_int(2 * m - 2 * j + 2)) * _fact_int(2 * j)) ** k)
        rhs = (derivative_term(k, m, rho, ctx)
               + mpf(2) ** (2 * k * m - k) * mp.pi ** (2 * k * m + 2 * k - 1)
               * mpf(bsum.numerator) / bsum.denominator)
    return _report("lerch", k, m, None, ctx, lhs, rhs, t0)


def verify(identity: str, *, k: int = 1, m: int = 1, theta=0,
           ctx: PrecisionContext) -> VerificationReport:
    """Dispatch by identity name (the CLI surface)."""
    if identity == "main":
        return verify_main(IdentityParams(k=k, m=m, theta=ctx.mpf(theta)), ctx)
    if identity == "ramanujan":
        return verify_ramanujan_classical(m, theta, ctx)
    if identity == "dixit":
        return verify_dixit(m, theta, ctx)
    if identity == "eisenstein":
        return verify_eisenstein(k, m, theta, ctx)
    if identity == "quasimodular":
        return verify_quasimodular(k, theta, ctx)
    if identity == "eta":
        return verify_eta(k, theta, ctx)
    if identity == "lerch":
        return verify_lerch_general(k, m, ctx)
    raise special.DomainError(f"unknown identity {identity!r}")


# ---------------------------------------------------------------------------
# contour-shift cross checks (independent of the assembled identities)

def lambda_line_value(k: int, m: int, rho, ctx: PrecisionContext):
    """(1/2 pi i) integral over Re(s) = -2m - 5/2 of
    zeta^k(2m+1+s) zeta^k(1-s) cos^{-1}(pi s/2) (rho/(2pi)^k)^{-s}."""
    with ctx.scoped():
        rho = mpf(rho)
        lam = mpf(-2 * m) - mpf(5) / 2
        X = rho / (2 * mp.pi) ** k
        f = VerticalProduct(ctx, zeta_factors=[(2 * m + 1, 1, k), (1, -1, k)],
                            cos_power=-1, neg_s_base=X)
        settings = mellin.lambda_line_settings(ctx, lam, poly_power=2.0 * k + 1)
        return mellin.line_integral(f, settings, ctx, conj_symmetric=True)


def self_duality_check(k: int, m: int, rho, ctx: PrecisionContext):
    """Substituting s -> -2m-s maps the shifted line back to the weighted
    series at the reciprocal argument; returns (lambda-line value, expected)."""
    with ctx.scoped():
        rho = mpf(rho)
        lhs = lambda_line_value(k, m, rho, ctx)
        rho_dual = (4 * mp.pi ** 2) ** k / rho
        sgn = -1 if m % 2 else 1
        rhs = (sgn * mpf(2) ** k * (rho / (2 * mp.pi) ** k) ** (2 * m)
               * series_L(SeriesRequest(rho=rho_dual, k=k, m=m), ctx).value)
        return lhs, rhs


def cosine_pole_residues(k: int, m: int, rho, ctx: PrecisionContext):
    """Simple-pole residues at s = 1-2j, 0 <= j <= m+1, of the shifted-line
    integrand, in the zeta form (-1)^{j+1} (2/pi) zeta^k(2m+2-2j) zeta^k(2j) X^{2j-1};
    independent of the Bernoulli-block bookkeeping."""
    with ctx.scoped():
        X = mpf(rho) / (2 * mp.pi) ** k
        out = []
        for j in range(0, m + 2):
            sgn = 1 if (j + 1) % 2 == 0 else -1
            out.append(sgn * 2 / mp.pi * special.zeta(2 * m + 2 - 2 * j, ctx) ** k
                       * special.zeta(2 * j, ctx) ** k * X ** (2 * j - 1))
        return out


def residue_assembly_check(k: int, m: int, rho, ctx: PrecisionContext):
    """Contour-shift bookkeeping: 2^k L_m(rho) must equal the two
    derivative-type residues plus the cosine-pole residues plus the
    lambda-line integral. Returns (lhs, rhs)."""
    with ctx.scoped():
        rho = mpf(rho)
        lhs = mpf(2) ** k * series_L(SeriesRequest(rho=rho, k=k, m=m), ctx).value
        rho_dual = (4 * mp.pi ** 2) ** k / rho
        r0 = mpf(2) ** k * derivative_term(k, m, rho, ctx)
        sgn = 1 if (m + 1) % 2 == 0 else -1
        rneg2m = (sgn * mpf(2) ** k * (rho / (2 * mp.pi) ** k) ** (2 * m)
                  * derivative_term(k, m, rho_dual, ctx))
        rhs = r0 + rneg2m + mp.fsum(cosine_pole_residues(k, m, rho, ctx))
        rhs += lambda_line_value(k, m, rho, ctx)
        return lhs, rhs
