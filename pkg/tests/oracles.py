"""Independent reference routes for the test suite.

These deliberately avoid the package's product-trapezoidal weights: the
fractional integral oracle uses Gauss-Jacobi quadrature (exact for
polynomial data against the weakly singular kernel), and the frozen
constants below were produced by multi-precision series / quadrature via
scripts/compute_frozen_constants.py.
"""

import numpy as np
from scipy.special import roots_jacobi

# mpmath series, dps=40
E_15_1_AT_M1 = 0.39662936531808808449      # E_{1.5,1}(-1)
E_05_1_AT_M1 = 0.42758357615580700441      # E_{0.5,1}(-1) = exp(1) erfc(1)

# |t^mu|^2 Slobodeckij seminorms on (0,1), mpmath adaptive quadrature
SLOB_T1_S025 = 0.53333333333333333333
SLOB_T15_S025 = 0.58558740615393126594
SLOB_T2_S035 = 0.76317346287012612334
SLOB_T1_S05 = 1.0

# inner products on (0,1)
IP_I03_T_ONE_MINUS_T = 0.11292616890111501435   # (I^0.3 t, 1-t)
IP_D15_T2_BUMP = 0.83366541638225460005         # <D^1.5 t^2, 16 t^2 (1-t)^2>

# projections of x(pi - x) onto sqrt(2/pi) sin(kx), mpmath quadrature
PROJ_PARABOLA_C1 = 3.1915382432114614235
PROJ_PARABOLA_C3 = 0.11820512011894301569


def jacobi_fractional_integral(f, beta: float, t: float, n: int = 60) -> float:
    """int_0^t (t-s)^(beta-1) f(s) ds / Gamma(beta) by Gauss-Jacobi."""
    from fracwave import gamma

    x, w = roots_jacobi(n, beta - 1.0, 0.0)
    s = t * (x + 1.0) / 2.0
    return (t / 2.0) ** beta * float(np.sum(w * f(s))) / gamma(beta)
