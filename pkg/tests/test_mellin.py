"""Quadrature engine: line integrals, circle derivatives, kernel reductions."""

import pytest
from mpmath import mp, mpf

from ztl import hp, mellin, special


def test_settings_truncation_bound(ctx50):
    st = mellin.line_settings(ctx50, mpf(5) / 2, poly_power=8.0)
    with ctx50.scoped():
        assert mp.exp(-mp.pi * st.T / 2) * st.T ** 8 < ctx50.tolerance(-5)


def test_settings_require_c_above_one(ctx50):
    with pytest.raises(special.DomainError):
        mellin.line_settings(ctx50, mpf(1) / 2)


def test_mellin_inversion_of_exp(ctx50):
    # (1/2 pi i) int Gamma(s) x^{-s} ds = e^{-x}
    with ctx50.scoped():
        st = mellin.line_settings(ctx50, 2, poly_power=1.5)
        for x in (1, 5):
            f = lambda s: special.gamma(s, ctx50) * mpf(x) ** (-s)
            v = mellin.line_integral(f, st, ctx50, conj_symmetric=True)
            assert abs(v - mp.exp(-x)) < ctx50.tolerance(2)


def test_conjugate_symmetric_integrand_has_tiny_imag(ctx50):
    with ctx50.scoped():
        st = mellin.line_settings(ctx50, 2, poly_power=1.5)
        f = lambda s: special.gamma(s, ctx50) * mpf(3) ** (-s)
        v = mellin.line_integral(f, st, ctx50)
        assert abs(v.imag) < ctx50.tolerance(2)
        assert abs(v.real - mp.exp(-3)) < ctx50.tolerance(2)


def test_refinement_discrepancies_shrink_geometrically(ctx30):
    with ctx30.scoped():
        for x in (1, 5, 3):
            f = lambda s: special.gamma(s, ctx30) * mpf(x) ** (-s)
            st = mellin.QuadratureSettings(
                c=mpf(2), h0=mpf(1) / 2, T=mellin.line_settings(ctx30, 2).T)
            tr = []
            mellin.line_integral(f, st, ctx30, conj_symmetric=True, trace=tr)
            discs = [t["discrepancy"] for t in tr if t["discrepancy"]]
            assert len(discs) >= 2
            for a, b in zip(discs, discs[1:]):
                if b != 0:
                    assert a / b >= 10


def test_non_convergence_raises_with_last_values(ctx50):
    with ctx50.scoped():
        f = lambda s: special.gamma(s, ctx50) * mpf(2) ** (-s)
        st = mellin.QuadratureSettings(c=mpf(2), h0=mpf(1) / 2, T=mpf(40),
                                       refine_limit=1)
        tr = []
        with pytest.raises(mellin.QuadratureError) as exc:
            mellin.line_integral(f, st, ctx50, conj_symmetric=True, trace=tr)
        assert exc.value.last_two is not None


def test_cauchy_polynomial(ctx50):
    with ctx50.scoped():
        cs = mellin.circle_settings(ctx50, 3)
        v = mellin.cauchy_derivative(lambda s: s ** 3, 3, cs, ctx50)
        assert abs(v - 6) < ctx50.tolerance(2)


def test_cauchy_exponential(ctx50):
    with ctx50.scoped():
        cs = mellin.circle_settings(ctx50, 4)
        v = mellin.cauchy_derivative(lambda s: mp.exp(2 * s), 4, cs, ctx50)
        assert abs(v - 16) < ctx50.tolerance(2)


def test_cauchy_zeta_prime_at_zero(ctx50):
    # zeta'(0) = -(1/2) log(2 pi); also checked by a finite-difference oracle
    with ctx50.scoped():
        cs = mellin.circle_settings(ctx50, 1)
        v = mellin.cauchy_derivative(lambda s: special.zeta(s, ctx50), 1, cs, ctx50)
        assert abs(v + mp.log(2 * mp.pi) / 2) < mpf(10) ** -45

    wide = hp.with_precision(70)
    with wide.scoped():
        h = mpf(10) ** -17
        d1 = (special.zeta(h, wide) - special.zeta(-h, wide)) / (2 * h)
        d2 = (special.zeta(h / 2, wide) - special.zeta(-h / 2, wide)) / h
        fd = (4 * d2 - d1) / 3          # one Richardson step
    with ctx50.scoped():
        assert abs(v - fd) < mpf(10) ** -45


def test_cauchy_order_zero_equals_value(ctx50):
    with ctx50.scoped():
        cs = mellin.circle_settings(ctx50, 0)
        v = mellin.cauchy_derivative(lambda s: special.zeta(2 + s, ctx50), 0, cs, ctx50)
        assert abs(v - special.zeta(2, ctx50)) < ctx50.tolerance(2)


def test_cauchy_detects_singularity_near_contour(ctx30):
    # a pole hugging the circle keeps successive estimates from agreeing
    with ctx30.scoped():
        cs = mellin.circle_settings(ctx30, 1, radius=mpf(1) / 4)
        with pytest.raises(mellin.QuadratureError):
            mellin.cauchy_derivative(lambda s: 1 / (s - mpf("0.2499")), 1, cs, ctx30)


def test_circle_settings_node_floor(ctx50):
    assert mellin.circle_settings(ctx50, 0).nodes == 64
    assert mellin.circle_settings(ctx50, 12).nodes == 104
    with pytest.raises(special.DomainError):
        mellin.circle_settings(ctx50, 12, nodes=32)


# ---------------------------------------------------------------------------
# kernel reductions


def test_kernel_k1_is_exponential(ctx50):
    with ctx50.scoped():
        z = mpf(7) / 3
        assert abs(mellin.psi_kernel(1, z, ctx50) - mp.exp(-z)) < ctx50.tolerance(5)


def test_kernel_k2_is_bessel_pair(ctx50):
    with ctx50.scoped():
        z = mpf(7) / 3
        pair = 2 * special.bessel_k0(2 * mp.expjpi(mpf(1) / 4) * mp.sqrt(z), ctx50).real
        assert abs(mellin.psi_kernel(2, z, ctx50) - pair) < ctx50.tolerance(5)


def test_kernel_k2_quarter_circle_argument(ctx50):
    # 2 Re K0(4 e^{i pi/4} sqrt(t)) at t=1 equals the k=2 kernel at z=4t
    with ctx50.scoped():
        pair = 2 * special.bessel_k0(4 * mp.expjpi(mpf(1) / 4), ctx50).real
        assert abs(mellin.psi_kernel(2, 4, ctx50) - pair) < ctx50.tolerance(5)


def test_meijer_g_normalization_k1(ctx50):
    with ctx50.scoped():
        z = mpf(2)
        g = mellin.meijer_g_psi_kernel(1, z, ctx50)
        assert abs(g - mp.sqrt(mp.pi) * mp.exp(-z)) < ctx50.tolerance(5)


def test_kernel_large_z_is_negligible(ctx30):
    with ctx30.scoped():
        for k in (1, 3):
            assert abs(mellin.psi_kernel(k, mpf(10) ** 5, ctx30)) < ctx30.tolerance()


def test_k0_complex_vs_mellin_barnes_oracle(ctx50):
    # G^{2,0}_{0,2}(-; 0,0 | z^2/4) = 2 K0(z): an asymmetric complex-line
    # integral, evaluated without the conjugate-symmetry shortcut
    with ctx50.scoped():
        z = 2 * mp.expjpi(mpf(1) / 4)
        w = z * z / 4
        lnw = mp.log(w)
        f = lambda s: special.gamma(s, ctx50) ** 2 * mp.exp(-s * lnw)
        st = mellin.line_settings(ctx50, 2, poly_power=3.0)
        v = mellin.line_integral(f, st, ctx50)
        ref = 2 * special.bessel_k0(z, ctx50)
        assert abs(v - ref) < ctx50.tolerance(8)
