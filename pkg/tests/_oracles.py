"""Small independent reference implementations used only by the tests.

These deliberately avoid the package's own code paths: the Bessel oracle is
a plain compensated-sum power series, and the amplitude oracle integrates
the two no-jump ODEs with tiny fixed steps.  Slow and simple on purpose.
"""
import math

import numpy as np


def series_jn(n: int, x: float) -> float:
    """Ascending series for J_n, compensated summation, small |x| only."""
    terms = []
    half = 0.5 * x
    coeff = half**n / math.factorial(n)
    for m in range(0, 60):
        terms.append(coeff)
        coeff *= -(half * half) / ((m + 1) * (n + m + 1))
    return math.fsum(terms)


def amplitudes_by_ode(xi: float, tau: float, steps_per_unit: int = 200_000):
    """No-jump amplitudes by brute-force RK4 on the 2x2 effective system."""
    n = max(64, int(steps_per_unit * tau))
    h = tau / n
    y = np.array([1.0 + 0.0j, 0.0 + 0.0j])

    def f(v):
        return np.array([-1j * xi * v[1], -1j * xi * v[0] - 2.0 * v[1]])

    for _ in range(n):
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2 * (k2 + k3) + k4)
    return y[0], y[1]
