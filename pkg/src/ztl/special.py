"""Scalar special functions and integer sequences.

Complex Gamma (shifted Stirling + reflection), complex Riemann zeta
(Euler-Maclaurin + functional equation), exact rational Bernoulli numbers,
modified Bessel K0 / K_{1/2}, the Piltz divisor sieve, and Lambert series.

Two evaluation surfaces coexist:

* scalar ``gamma``/``zeta`` for arbitrary points (memoized, used for
  Cauchy-circle nodes and direct calls);
* ``zeta_vertical_run`` for equispaced nodes on a vertical line, where the
  Dirichlet powers n^{-s} advance by one complex multiplication per node.
  The quadrature engine spends nearly all its time here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp, mpf, mpc

from .hp import PrecisionContext

__all__ = [
    "PoleError", "DomainError", "BernoulliTable", "DivisorTable",
    "bernoulli", "gamma", "zeta", "bessel_k0", "bessel_k_half",
    "divisor_sieve", "lambert_series", "zeta_vertical_run", "clear_caches",
]


class PoleError(ZeroDivisionError):
    """Evaluation requested exactly at a pole."""


class DomainError(ValueError):
    """Argument outside the operation's domain."""


# ---------------------------------------------------------------------------
# Bernoulli numbers, exact rationals

_BERN: list[Fraction] = [Fraction(1)]          # B_0, B_1, ... grows on demand
_BERN_MPF: dict[tuple[int, int], mpf] = {}     # (index, prec) -> rounded value


def _extend_bernoulli(n: int) -> None:
    # recurrence sum_{j=0}^{m} C(m+1, j) B_j = 0
    while len(_BERN) <= n:
        m = len(_BERN)
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * _BERN[j]
        _BERN.append(-acc / (m + 1))


@dataclass(frozen=True)
class BernoulliTable:
    """Exact rationals B_0..B_N."""

    values: tuple[Fraction, ...]

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def to_csv(self) -> str:
        lines = ["m,numerator,denominator"]
        for m, b in enumerate(self.values):
            lines.append(f"{m},{b.numerator},{b.denominator}")
        return "\n".join(lines) + "\n"


def bernoulli(N: int) -> BernoulliTable:
    if N < 0:
        raise DomainError("Bernoulli order bound must be >= 0")
    _extend_bernoulli(N)
    return BernoulliTable(values=tuple(_BERN[: N + 1]))


def bernoulli_frac(n: int) -> Fraction:
    _extend_bernoulli(n)
    return _BERN[n]


def _bern_mpf(n: int, prec: int) -> mpf:
    key = (n, prec)
    v = _BERN_MPF.get(key)
    if v is None:
        b = bernoulli_frac(n)
        with mp.workprec(prec):
            v = mpf(b.numerator) / b.denominator
        _BERN_MPF[key] = v
    return v


# ---------------------------------------------------------------------------
# Gamma: argument-shifted Stirling for Re(s) >= 1/2, reflection below

_GAMMA_MEMO: dict = {}


def _stirling_threshold(prec: int) -> int:
    # minimal |s| where the asymptotic series bottoms out below 2^-prec
    return int(0.12 * prec) + 6


_STIRLING_COEF: dict[tuple[int, int], mpf] = {}


def _stirling_coef(j: int, prec: int) -> mpf:
    key = (j, prec)
    v = _STIRLING_COEF.get(key)
    if v is None:
        v = _bern_mpf(2 * j, prec) / ((2 * j) * (2 * j - 1))
        _STIRLING_COEF[key] = v
    return v


def _log_gamma_asymptotic(z: mpc, prec: int) -> mpc:
    # ln Gamma(z) = (z-1/2) ln z - z + ln(2pi)/2 + sum B_2j / (2j(2j-1) z^{2j-1})
    acc = (z - mpf(1) / 2) * mp.log(z) - z + mp.log(2 * mp.pi) / 2
    w = 1 / (z * z)
    zpow = 1 / z
    tol = mpf(2) ** (-prec - 5)
    j = 1
    while True:
        term = _stirling_coef(j, prec) * zpow
        acc += term
        if abs(term) < tol:
            break
        if j > prec:   # series must terminate long before this
            raise ArithmeticError("Stirling series failed to converge")
        zpow *= w
        j += 1
    return acc


def _gamma_raw(s: mpc, prec: int) -> mpc:
    if s.imag == 0:
        sr = s.real
        if sr == int(sr) and sr <= 0:
            raise PoleError(f"gamma pole at s={int(sr)}")
        if sr == int(sr) and sr > 0 and sr < 30:
            return mpc(mp.factorial(int(sr) - 1))
    if s.real < mpf(1) / 2:
        # reflection: Gamma(s) Gamma(1-s) = pi / sin(pi s)
        sp = mp.sinpi(s)
        if sp == 0:
            raise PoleError(f"gamma pole at s={s}")
        return mp.pi / (sp * _gamma_raw(1 - s, prec))
    sigma0 = _stirling_threshold(prec)
    shift = 0
    if abs(s) < sigma0:
        shift = int(mp.ceil(sigma0 - s.real)) + 1
    z = s + shift
    val = mp.exp(_log_gamma_asymptotic(z, prec))
    if shift:
        prod = s
        for r in range(1, shift):
            prod *= s + r
        val /= prod
    return val


def gamma(s, ctx: PrecisionContext):
    """Gamma(s) to working precision; PoleError at non-positive integers."""
    with ctx.scoped():
        s = mpc(s)
        v = _gamma_memoized(s, ctx.prec_bits)
        return v.real if s.imag == 0 else v


# ---------------------------------------------------------------------------
# zeta: Euler-Maclaurin for Re(s) >= 1/2, functional equation below

_ZETA_MEMO: dict = {}
_LN_CACHE: dict[tuple[int, int], mpf] = {}     # (n, prec) -> ln n


def _ln(n: int, prec: int) -> mpf:
    key = (n, prec)
    v = _LN_CACHE.get(key)
    if v is None:
        v = mp.log(n)
        _LN_CACHE[key] = v
    return v


def _em_sizes(abs_s: float, prec: int) -> tuple[int, int]:
    """Pick (N, J) so the Euler-Maclaurin remainder is below 2^-(prec+8).

    Remainder behaves like ((|s| + 2J) / (2 pi N))^(2J); minimize the cost
    N + 3.2 J over a small grid of J.
    """
    target = (prec + 8) * math.log(2)
    best = None
    for J in range(10, 260, 6):
        # q^(2J) = e^-target  ->  q = e^(-target/(2J))
        q = math.exp(-target / (2 * J))
        N = int((abs_s + 2 * J + 1) / (2 * math.pi * q)) + 1
        cost = N + 3.2 * J
        if best is None or cost < best[0]:
            best = (cost, N, J)
    return best[1], best[2]


def _powers_neg_s(ns: range, s: mpc, prec: int) -> list[mpc]:
    """n^{-s} for n in ns (must start at 2), exps on primes only."""
    top = ns.stop
    vals: list = [None] * top
    vals[1] = mpc(1)
    for n in range(2, top):
        if vals[n] is None:
            # n prime: direct exponential
            vals[n] = mp.exp(-s * _ln(n, prec))
        np_ = n + n
        f = 2
        while np_ < top:
            if vals[np_] is None and vals[f] is not None:
                vals[np_] = vals[n] * vals[f]
            np_ += n
            f += 1
    return vals


def _zeta_em(s: mpc, prec: int) -> mpc:
    """Euler-Maclaurin zeta; requires Re(s) >= 1/2, s != 1."""
    N, J = _em_sizes(abs(s), prec)
    if N < 2:
        N = 2
    acc = mpc(1)
    pw = _powers_neg_s(range(2, N), s, prec)
    for n in range(2, N):
        acc += pw[n]
    Npow = mp.exp(-s * _ln(N, prec))        # N^{-s}
    acc += Npow * N / (s - 1) + Npow / 2
    # correction sum: B_2j/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
    Nm2 = mp.exp(-2 * _ln(N, prec))
    poch = s
    tail_pow = Npow * N * Nm2               # N^{-s-1}
    tol = mpf(2) ** (-prec - 8)
    scale = abs(acc)
    for j in range(1, J + 1):
        term = _em_coef(j, prec) * poch * tail_pow
        acc += term
        if abs(term) < tol * scale:
            break
        poch *= (s + (2 * j - 1)) * (s + 2 * j)
        tail_pow *= Nm2
    return acc


_FACT_CACHE: dict[tuple[int, int], mpf] = {}


def _fact(n: int, prec: int) -> mpf:
    key = (n, prec)
    v = _FACT_CACHE.get(key)
    if v is None:
        v = mp.factorial(n)
        _FACT_CACHE[key] = v
    return v


_EM_COEF: dict[tuple[int, int], mpf] = {}


def _em_coef(j: int, prec: int) -> mpf:
    # B_2j / (2j)!
    key = (j, prec)
    v = _EM_COEF.get(key)
    if v is None:
        v = _bern_mpf(2 * j, prec) / _fact(2 * j, prec)
        _EM_COEF[key] = v
    return v


def _gamma_memoized(s: mpc, prec: int) -> mpc:
    key = (s.real._mpf_, s.imag._mpf_, prec)
    v = _GAMMA_MEMO.get(key)
    if v is None:
        v = _gamma_raw(s, prec)
        _GAMMA_MEMO[key] = v
    return v


def _chi(s: mpc, prec: int) -> mpc:
    # functional equation factor: zeta(s) = chi(s) zeta(1-s)
    return 2 ** s * mp.pi ** (s - 1) * mp.sinpi(s / 2) * _gamma_memoized(1 - s, prec)


def _zeta_raw(s: mpc, prec: int) -> mpc:
    if s == 1:
        raise PoleError("zeta pole at s=1")
    if s == 0:
        return mpc(-0.5)
    if s.real >= mpf(1) / 2:
        return _zeta_em(s, prec)
    if s.imag == 0 and s.real == int(s.real) and int(s.real) % 2 == 0:
        return mpc(0)   # trivial zeros
    return _chi(s, prec) * _zeta_em(1 - s, prec)


def zeta(s, ctx: PrecisionContext):
    """Riemann zeta(s) to working precision; PoleError at s=1."""
    with ctx.scoped():
        s = mpc(s)
        key = (s.real._mpf_, s.imag._mpf_, ctx.prec_bits)
        v = _ZETA_MEMO.get(key)
        if v is None:
            v = _zeta_raw(s, ctx.prec_bits)
            _ZETA_MEMO[key] = v
        return v.real if s.imag == 0 else v


# --------------------------------------------------------------------------
# zeta on equispaced vertical-line nodes
#
# For s_u = sigma + i(t0 + u*dt) the Dirichlet term n^{-s_u} equals
# n^{-s_0} * (n^{-i dt})^u, so a whole run costs one complex multiplication
# per (term, node) instead of one complex exponential. Runs are chunked so
# Euler-Maclaurin sizes track the local |t|.

_ZLINE_MEMO: dict = {}
_RUN_CHUNK = 96


def zeta_vertical_run(sigma, t0, dt, count: int, ctx: PrecisionContext) -> list:
    """[zeta(sigma + i(t0 + u*dt)) for u in range(count)], memoized per node."""
    with ctx.scoped():
        prec = ctx.prec_bits
        sigma = mpf(sigma)
        t0 = mpf(t0)
        dt = mpf(dt)
        skey = sigma._mpf_
        out: list = [None] * count
        missing: list[int] = []
        for u in range(count):
            t = t0 + u * dt
            v = _ZLINE_MEMO.get((skey, t._mpf_, prec))
            if v is None:
                missing.append(u)
            out[u] = v
        # group missing indices into runs of consecutive u
        i = 0
        while i < len(missing):
            j = i
            while j + 1 < len(missing) and missing[j + 1] == missing[j] + 1:
                j += 1
            for c0 in range(missing[i], missing[j] + 1, _RUN_CHUNK):
                c1 = min(c0 + _RUN_CHUNK - 1, missing[j])
                vals = _zeta_run_chunk(sigma, t0 + c0 * dt, dt, c1 - c0 + 1, prec)
                for u, v in zip(range(c0, c1 + 1), vals):
                    t = t0 + u * dt
                    _ZLINE_MEMO[(skey, t._mpf_, prec)] = v
                    out[u] = v
            i = j + 1
        return out


def _zeta_run_chunk(sigma: mpf, t0: mpf, dt: mpf, count: int, prec: int) -> list:
    if sigma >= mpf(1) / 2:
        return _zeta_em_run(sigma, t0, dt, count, prec)
    # functional equation branch, all factors advanced multiplicatively
    zvals = _zeta_em_run(1 - sigma, -t0, -dt, count, prec)
    s0 = mpc(sigma, t0)
    idt = mpc(0, dt)
    out = []
    for u in range(count):
        s = s0 + u * idt
        out.append(_chi(s, prec) * zvals[u])
    return out


def _zeta_em_run(sigma: mpf, t0: mpf, dt: mpf, count: int, prec: int) -> list:
    tmax = max(abs(t0), abs(t0 + (count - 1) * dt))
    abs_s = math.hypot(float(sigma), float(tmax))
    N, J = _em_sizes(abs_s, prec)
    if N < 2:
        N = 2
    s0 = mpc(sigma, t0)
    # base powers n^{-s_0} and step rotations n^{-i dt}
    base = _powers_neg_s(range(2, N + 1), s0, prec)
    step = _powers_neg_s(range(2, N + 1), mpc(0, dt), prec)
    acc = [mpc(1) for _ in range(count)]
    for n in range(2, N):
        b = base[n]
        st = step[n]
        for u in range(count):
            acc[u] += b
            b = b * st
    # tail + Euler-Maclaurin corrections per node
    bN = base[N]
    stN = step[N]
    Nm2 = mp.exp(-2 * _ln(N, prec))
    tol = mpf(2) ** (-prec - 8)
    idt = mpc(0, dt)
    out = []
    for u in range(count):
        s = s0 + u * idt
        a = acc[u] + bN * N / (s - 1) + bN / 2
        poch = s
        tail_pow = bN * N * Nm2
        scale = abs(a)
        for j in range(1, J + 1):
            term = _em_coef(j, prec) * poch * tail_pow
            a += term
            if abs(term) < tol * scale:
                break
            poch *= (s + (2 * j - 1)) * (s + 2 * j)
            tail_pow *= Nm2
        out.append(a)
        bN = bN * stN
    return out


# ---------------------------------------------------------------------------
# modified Bessel functions

def bessel_k_half(z, ctx: PrecisionContext):
    """K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}, Re(z) > 0."""
    with ctx.scoped():
        z = mpc(z)
        if z.real <= 0:
            raise DomainError("bessel_k_half requires Re(z) > 0")
        v = mp.sqrt(mp.pi / (2 * z)) * mp.exp(-z)
        return v.real if z.imag == 0 else v


def bessel_k0(z, ctx: PrecisionContext):
    """K_0(z), Re(z) > 0; series for small |z|, asymptotic for large |z|.

    The asymptotic branch is used only when its smallest term clears the
    working tolerance (roughly |z| > 1.2 * working digits); the series branch
    runs at raised precision to absorb the e^{2|z|} cancellation.
    """
    with ctx.scoped():
        z = mpc(z)
        if z.real <= 0:
            raise DomainError("bessel_k0 requires Re(z) > 0")
        prec = ctx.prec_bits
        az = abs(z)
        # asymptotic min-term ~ e^{-2|z|}
        if float(az) * 2 > (prec + 12) * math.log(2):
            v = _k0_asymptotic(z, prec)
        else:
            v = _k0_series(z, prec)
        return v.real if z.imag == 0 else v


def _k0_asymptotic(z: mpc, prec: int) -> mpc:
    # K0(z) ~ sqrt(pi/2z) e^-z sum_j a_j, a_j = -a_{j-1} (2j-1)^2/(8j z)
    tol = mpf(2) ** (-prec - 5)
    term = mpc(1)
    acc = mpc(1)
    j = 1
    while abs(term) > tol:
        term *= -mpf((2 * j - 1) ** 2) / (8 * j) / z
        acc += term
        j += 1
        if j > 4 * prec:
            raise ArithmeticError("K0 asymptotic series stalled")
    return mp.sqrt(mp.pi / (2 * z)) * mp.exp(-z) * acc


def _k0_series(z: mpc, prec: int) -> mpc:
    # K0 = -(ln(z/2)+gamma) I0(z) + sum_{j>=1} (z^2/4)^j / (j!)^2 * H_j
    bump = int(2 * float(abs(z)) * 1.4427) + 12   # cancellation allowance
    with mp.workprec(prec + bump):
        z = mpc(z)
        q = z * z / 4
        tol = mpf(2) ** (-(prec + bump))
        i0 = mpc(1)
        ksum = mpc(0)
        term = mpc(1)
        h = mpf(0)
        j = 1
        while True:
            term *= q / (j * j)
            h += mpf(1) / j
            i0 += term
            ksum += term * h
            if abs(term) * max(1, float(h)) < tol * abs(i0):
                break
            j += 1
        v = -(mp.log(z / 2) + mp.euler) * i0 + ksum
    return +v


# ---------------------------------------------------------------------------
# Piltz divisor sieve and Lambert series

@dataclass(frozen=True)
class DivisorTable:
    """d_k(1..N) by repeated Dirichlet convolution with the all-ones function."""

    k: int
    counts: tuple[int, ...]                      # counts[n-1] = d_k(n)
    sigma: dict = field(default_factory=dict)    # exponent -> tuple of sigma_a(n)

    def d(self, n: int) -> int:
        return self.counts[n - 1]

    def __len__(self) -> int:
        return len(self.counts)

    def to_csv(self) -> str:
        lines = [f"n,d_{self.k}(n)"]
        for n, c in enumerate(self.counts, start=1):
            lines.append(f"{n},{c}")
        return "\n".join(lines) + "\n"


def divisor_sieve(k: int, N: int, sigma_exponents=(), ctx: PrecisionContext | None = None) -> DivisorTable:
    if k < 1 or N < 1:
        raise DomainError("divisor_sieve requires k >= 1 and N >= 1")
    counts = [1] * (N + 1)
    for _ in range(k - 1):
        nxt = [0] * (N + 1)
        for d in range(1, N + 1):
            cd = counts[d]
            for n in range(d, N + 1, d):
                nxt[n] += cd
        counts = nxt
    sigma = {}
    for a in sigma_exponents:
        if ctx is None:
            raise DomainError("sigma exponents require a precision context")
        with ctx.scoped():
            av = mpf(a)
            vals = [mpf(0)] * (N + 1)
            for d in range(1, N + 1):
                da = mp.power(d, av)
                for n in range(d, N + 1, d):
                    vals[n] += da
        sigma[a] = tuple(vals[1:])
    return DivisorTable(k=k, counts=tuple(counts[1:]), sigma=sigma)


def lambert_series(a, y, ctx: PrecisionContext):
    """sum_{n>=1} n^a / (e^{ny} - 1) for y > 0.

    Equals sum sigma_a(n) e^{-ny}; truncated once the relative term size stays
    below 10^{-digits-5} for three consecutive terms.
    """
    with ctx.scoped():
        a = mpf(a)
        y = mpf(y)
        if y <= 0:
            raise DomainError("lambert_series requires y > 0")
        thresh = ctx.tolerance(-5)
        acc = mpf(0)
        consec = 0
        n = 1
        while True:
            term = mp.power(n, a) / mp.expm1(n * y)
            acc += term
            if abs(term) < thresh * max(1, abs(acc)):
                consec += 1
                if consec >= 3:
                    break
            else:
                consec = 0
            n += 1
            if n > 10 ** 7:
                raise ArithmeticError("lambert_series failed to converge")
        return +acc


def lambert_series_sigma_form(a, y, ctx: PrecisionContext):
    """Independent evaluation through sigma_a(n) e^{-ny}; cross-check route."""
    with ctx.scoped():
        a = mpf(a)
        y = mpf(y)
        if y <= 0:
            raise DomainError("lambert_series requires y > 0")
        thresh = ctx.tolerance(-5)
        acc = mpf(0)
        consec = 0
        n = 1
        while True:
            sig = mpf(0)
            for d in range(1, n + 1):
                if n % d == 0:
                    sig += mp.power(d, a)
            term = sig * mp.exp(-n * y)
            acc += term
            if abs(term) < thresh * max(1, abs(acc)):
                consec += 1
                if consec >= 3:
                    break
            else:
                consec = 0
            n += 1
            if n > 10 ** 5:
                raise ArithmeticError("sigma-form series failed to converge")
        return +acc


def clear_caches() -> None:
    """Drop memoized special-function values (constants tables persist)."""
    _GAMMA_MEMO.clear()
    _ZETA_MEMO.clear()
    _ZLINE_MEMO.clear()
    _LN_CACHE.clear()
