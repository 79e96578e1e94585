"""Vertical-line Mellin-Barnes quadrature and the Cauchy-circle derivative
operator.

Both use the plain trapezoid rule, which is spectrally accurate for analytic
integrands that decay exponentially (line) or are periodic (circle), and
refines by node doubling so earlier evaluations are never wasted. Refinement
stops when two successive values agree to 10^-digits relative to
max(|value|, abs_floor).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf, mpc

from .hp import PrecisionContext
from . import special

__all__ = [
    "QuadratureError", "QuadratureSettings", "CircleSettings",
    "line_settings", "lambda_line_settings", "circle_settings",
    "line_integral", "cauchy_derivative", "meijer_g_psi_kernel", "psi_kernel",
]

_CHUNK = 96

# optional diagnostics: when a list is installed here, every quadrature
# appends {"kind": ..., "steps": [...]} to it
_TRACE_SINK: list | None = None


def set_trace_sink(sink: list | None) -> None:
    global _TRACE_SINK
    _TRACE_SINK = sink


class QuadratureError(ArithmeticError):
    """Refinement limit exhausted before two successive values agreed."""

    def __init__(self, message, trace=None, last_two=None):
        super().__init__(message)
        self.trace = trace or []
        self.last_two = last_two


@dataclass(frozen=True)
class QuadratureSettings:
    """Trapezoid on the vertical line Re(s)=c, step h0 (halved on refinement),
    truncation cap T (grown 1.5x on refinement)."""

    c: mpf
    h0: mpf
    T: mpf
    refine_limit: int = 10
    abs_floor: mpf = mpf("1e-5")


@dataclass(frozen=True)
class CircleSettings:
    """M-point trapezoid on a circle; no singularity may lie within radius."""

    center: mpc
    radius: mpf
    nodes: int
    refine_limit: int = 7
    abs_floor: mpf = mpf("1e-5")


def _truncation_height(digits: int, poly_power: float) -> mpf:
    # smallest T with e^(-pi T/2) T^p < 10^-(digits+5)
    target = (digits + 5) * math.log(10)
    T = max(8.0, 2 * target / math.pi)
    for _ in range(6):
        T = (2 / math.pi) * (target + poly_power * math.log(T))
    return mpf(math.ceil(T))


def line_settings(ctx: PrecisionContext, c, poly_power: float = 2.0,
                  h0=None, refine_limit: int = 10) -> QuadratureSettings:
    """Settings for a production line integral; requires c > 1 (the strip in
    which every integrand here is analytic up to its leftmost kept pole)."""
    c = mpf(c)
    if not c > 1:
        raise special.DomainError(f"line abscissa must satisfy c > 1, got {c}")
    return QuadratureSettings(
        c=c, h0=mpf(h0) if h0 else mpf(1) / 8,
        T=_truncation_height(ctx.digits, poly_power), refine_limit=refine_limit)


def lambda_line_settings(ctx: PrecisionContext, lam, poly_power: float = 4.0) -> QuadratureSettings:
    """Settings for the negative-abscissa line used only by the self-duality
    cross-check; analyticity strip there is ~1/2 wide, so start at h=1/32."""
    return QuadratureSettings(
        c=mpf(lam), h0=mpf(1) / 32,
        T=_truncation_height(ctx.digits, poly_power), refine_limit=10)


def circle_settings(ctx: PrecisionContext, order: int, center=0,
                    radius=None, nodes: int | None = None) -> CircleSettings:
    min_nodes = max(64, 8 * (order + 1))
    if nodes is None:
        nodes = min_nodes
    if nodes < min_nodes:
        raise special.DomainError(f"circle needs at least {min_nodes} nodes")
    return CircleSettings(center=mpc(center),
                          radius=mpf(radius) if radius is not None else mpf(1) / 4,
                          nodes=nodes)


# ---------------------------------------------------------------------------
# line integral

class _CallableOnLine:
    """Adapter so plain callables share the run-evaluation interface."""

    def __init__(self, f):
        self.f = f

    def eval_vertical(self, c, t0, dt, count):
        f = self.f
        return [f(mpc(c, t0 + u * dt)) for u in range(count)]


def line_integral(f, settings: QuadratureSettings, ctx: PrecisionContext,
                  conj_symmetric: bool = False, trace: list | None = None):
    """(1/2 pi i) * integral of f over Re(s) = c.

    ``f`` is a callable of one complex argument or an object exposing
    ``eval_vertical(c, t0, dt, count)``. With ``conj_symmetric`` the lower
    half-line is folded onto the upper one and the result is real.
    Raises QuadratureError when refine_limit is exhausted.
    """
    ev = f if hasattr(f, "eval_vertical") else _CallableOnLine(f)
    if trace is None and _TRACE_SINK is not None:
        trace = []
        _TRACE_SINK.append({"kind": "line", "c": float(settings.c), "steps": trace})
    with ctx.scoped():
        c = settings.c
        digits = ctx.digits
        rel = mpf(10) ** (-digits)
        memo: dict = {}

        def values(t0, dt, count):
            out = [None] * count
            miss = []
            for u in range(count):
                v = memo.get((t0 + u * dt)._mpf_)
                if v is None:
                    miss.append(u)
                else:
                    out[u] = v
            # evaluate missing nodes in maximal equispaced runs; refinement
            # levels leave stride-2 gaps between already-known nodes
            i = 0
            while i < len(miss):
                stride = miss[i + 1] - miss[i] if i + 1 < len(miss) else 1
                j = i + 1
                while j < len(miss) and miss[j] - miss[j - 1] == stride:
                    j += 1
                n_run = j - i
                vs = ev.eval_vertical(c, t0 + miss[i] * dt, stride * dt, n_run)
                for idx, v in zip(range(i, j), vs):
                    u = miss[idx]
                    memo[(t0 + u * dt)._mpf_] = v
                    out[u] = v
                i = j
            return out

        def scan_side(h, T, eps, sign):
            vals = []
            consec = 0
            j = 1
            jmax = int(T / h)
            while j <= jmax:
                count = min(_CHUNK, jmax - j + 1)
                vs = values(sign * j * h, sign * h, count)
                for i, v in enumerate(vs):
                    vals.append(v)
                    if abs(v) < eps and (j + i) * h > 5:
                        consec += 1
                        if consec >= 5:
                            return vals
                    else:
                        consec = 0
                j += count
            return vals

        prev = None
        h = settings.h0
        T = settings.T
        f0 = values(mpf(0), h, 1)[0]
        for _level in range(settings.refine_limit + 1):
            eps = rel * max(settings.abs_floor, abs(prev) if prev is not None else settings.abs_floor) / 10
            up = scan_side(h, T, eps, 1)
            if conj_symmetric:
                val = (h / (2 * mp.pi)) * (f0.real + 2 * mp.fsum(v.real for v in up))
            else:
                down = scan_side(h, T, eps, -1)
                val = (h / (2 * mp.pi)) * (f0 + mp.fsum(up) + mp.fsum(down))
            if prev is not None:
                disc = abs(val - prev)
                if trace is not None:
                    trace.append({"h": float(h), "T": float(T),
                                  "value": str(val), "discrepancy": float(disc)})
                if disc <= rel * max(settings.abs_floor, abs(val)):
                    return val
            elif trace is not None:
                trace.append({"h": float(h), "T": float(T),
                              "value": str(val), "discrepancy": None})
            prev = val
            h = h / 2
            T = T * mpf(3) / 2
        raise QuadratureError(
            f"line integral did not converge within {settings.refine_limit} refinements "
            f"(last two values {prev} after halving h to {h})",
            trace=trace, last_two=(trace[-1]["value"] if trace else None, str(prev)))


# ---------------------------------------------------------------------------
# Cauchy-circle derivative

def cauchy_derivative(f, order: int, settings: CircleSettings,
                      ctx: PrecisionContext, trace: list | None = None):
    """f^(order)(center) = order!/(2 pi i) * contour integral of
    f(s)/(s-center)^(order+1) over the circle, via an M-point trapezoid with
    M doubled until two successive values agree."""
    if order < 0:
        raise special.DomainError("derivative order must be >= 0")
    if trace is None and _TRACE_SINK is not None:
        trace = []
        _TRACE_SINK.append({"kind": "circle", "order": order, "steps": trace})
    with ctx.scoped():
        a = settings.center
        r = settings.radius
        rel = mpf(10) ** (-ctx.digits)
        fac = mp.factorial(order) / r ** order
        memo: dict = {}

        def node(j, M):
            key = Fraction(j, M)
            v = memo.get(key)
            if v is None:
                w = mp.expjpi(mpf(2 * key.numerator) / key.denominator)
                v = (f(a + r * w), w)
                memo[key] = v
            return v

        prev = None
        M = settings.nodes
        for _level in range(settings.refine_limit + 1):
            terms = []
            for j in range(M):
                fv, w = node(j, M)
                terms.append(fv * w ** (-order))
            val = fac / M * mp.fsum(terms)
            if prev is not None:
                disc = abs(val - prev)
                if trace is not None:
                    trace.append({"M": M, "value": str(val), "discrepancy": float(disc)})
                if disc <= rel * max(settings.abs_floor, abs(val)):
                    return val
            elif trace is not None:
                trace.append({"M": M, "value": str(val), "discrepancy": None})
            prev = val
            M *= 2
        raise QuadratureError(
            f"circle derivative did not converge by M={M} "
            "(a singularity may lie inside the circle)",
            trace=trace)


# ---------------------------------------------------------------------------
# reduced Meijer G kernel for the generalized Koshliakov function

class _KernelIntegrand:
    """Gamma(s)^k cos^{k-1}(pi s/2) z^{-s} on a vertical line."""

    def __init__(self, k, z, ctx):
        self.k = k
        self.ctx = ctx
        self.lnz = mp.log(z)

    def eval_vertical(self, c, t0, dt, count):
        k, ctx = self.k, self.ctx
        out = []
        zp = mp.exp(-mpc(c, t0) * self.lnz)
        zstep = mp.exp(-mpc(0, dt) * self.lnz)
        for u in range(count):
            s = mpc(c, t0 + u * dt)
            v = special.gamma(s, ctx) ** k * zp
            if k > 1:
                v *= mp.cospi(s / 2) ** (k - 1)
            out.append(v)
            zp = zp * zstep
        return out


def psi_kernel(k: int, z, ctx: PrecisionContext):
    """(1/2 pi i) * integral of Gamma^k(s) cos^{k-1}(pi s/2) z^{-s} ds, z > 0.

    This is the per-term kernel of the generalized Koshliakov series:
    k=1 gives e^{-z}, k=2 gives K_0(2 e^{i pi/4} sqrt(z)) + conjugate.
    """
    with ctx.scoped():
        z = mpf(z)
        if not z > 0 or k < 1:
            raise special.DomainError("psi_kernel requires k >= 1 and z > 0")
        settings = line_settings(ctx, mpf(5) / 2, poly_power=2.0 * k)
        return line_integral(_KernelIntegrand(k, z, ctx), settings, ctx,
                             conj_symmetric=True)


def meijer_g_psi_kernel(k: int, z, ctx: PrecisionContext):
    """G^{k+1,0}_{0,2k}( (0)_k, 1/2; (1/2)_{k-1} | z^2 / 2^{2k} ) via the
    single-variable reduced line integral (never the raw 2k-factor form)."""
    with ctx.scoped():
        return 2 ** (k - 1) * mp.pi ** (1 - mpf(k) / 2) * psi_kernel(k, z, ctx)
