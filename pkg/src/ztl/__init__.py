"""High-precision evaluation of the generalized Koshliakov function and
numerical verification of the transformation identities it satisfies."""

from .hp import (HpComplex, HpReal, PrecisionContext, PrecisionError,
                 const_euler_gamma, const_log_2pi, const_pi, with_precision)
from .special import (BernoulliTable, DivisorTable, DomainError, PoleError,
                      bernoulli, bessel_k0, bessel_k_half, divisor_sieve,
                      gamma, lambert_series, zeta)
from .mellin import (CircleSettings, QuadratureError, QuadratureSettings,
                     cauchy_derivative, line_integral, meijer_g_psi_kernel)
from .psi import PsiRequest, PsiValue, SeriesRequest, SeriesValue, psi, series_L
from .identities import (IdentityParams, VerificationReport, bernoulli_block,
                         derivative_term, verify, verify_dixit,
                         verify_eisenstein, verify_eta, verify_lerch_general,
                         verify_main, verify_quasimodular,
                         verify_ramanujan_classical)

__version__ = "0.1.0"
