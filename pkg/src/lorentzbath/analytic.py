"""Closed-form no-jump dynamics and the concurrence optimum.

With ``xi = 4*lambda0/kappa`` and ``tau = kappa*t/4`` the no-jump amplitudes
are, writing ``w = sqrt(xi^2 - 1)``,

    c_e0(tau) = exp(-tau) * (cos(w*tau) + sin(w*tau)/w)        (xi > 1)
    c_g1(tau) = -i * exp(-tau) * (xi/w) * sin(w*tau)

with trigonometric functions replaced by hyperbolic ones (and
``w = sqrt(1 - xi^2)``) for xi < 1, and by their polynomial limit
``c_e0 = exp(-tau)*(1+tau)``, ``c_g1 = -i*xi*tau*exp(-tau)`` on the critical
line.  The extractable concurrence is ``C = <psi|psi> sin(2*theta)`` with
``tan(theta) = |c_g1|/|c_e0|``, identical to ``2*|c_e0|*|c_g1|``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchNotApplicable, DomainError
from .model import ModelParams, PureAmplitudes, RescaledTime, _as_tau

CRITICAL_WINDOW = 1e-6
ZERO_MAX_FLOOR = 1e-14

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_COARSE_POINTS = 4096
_GOLDEN_TOL = 1e-10


class Regime(enum.Enum):
    UNDERDAMPED = "underdamped"
    OVERDAMPED = "overdamped"
    CRITICAL = "critical"


def regime(params: ModelParams) -> Regime:
    """Branch selection, with a +-1e-6 window around xi=1 mapped to critical."""
    if abs(params.xi - 1.0) < CRITICAL_WINDOW:
        return Regime.CRITICAL
    return Regime.UNDERDAMPED if params.xi > 1.0 else Regime.OVERDAMPED


def _omega(xi: float) -> float:
    # (xi-1)(xi+1) avoids cancellation in xi**2 - 1 near the critical line
    return math.sqrt(abs((xi - 1.0) * (xi + 1.0)))


def _amplitude_arrays(xi: float, tau: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised (c_e0, c_g1) over an array of rescaled times.

    The overdamped branch is evaluated as a difference of decaying
    exponentials so it cannot overflow at large tau; the small-w*tau
    cancellation in that difference is routed through expm1.
    """
    tau = np.asarray(tau, dtype=float)
    if abs(xi - 1.0) < CRITICAL_WINDOW:
        env = np.exp(-tau)
        return env * (1.0 + tau), -1j * xi * tau * env
    w = _omega(xi)
    if xi > 1.0:
        x = w * tau
        env = np.exp(-tau)
        sinc = np.sin(x) / w
        return env * (np.cos(x) + sinc), -1j * xi * env * sinc
    ea = np.exp(-(1.0 - w) * tau)
    eb = np.exp(-(1.0 + w) * tau)
    x = 2.0 * w * tau
    diff = np.where(x < 1.0, eb * np.expm1(np.minimum(x, 1.0)), ea - eb)
    c_e0 = 0.5 * (ea + eb) + diff / (2.0 * w)
    c_g1 = -1j * xi * diff / (2.0 * w)
    return c_e0.astype(complex), c_g1


def amplitudes(params: ModelParams, tau: RescaledTime | float) -> PureAmplitudes:
    """No-jump amplitudes at a single rescaled time."""
    t = _as_tau(tau)
    if t < 0:
        raise DomainError(f"tau must be >= 0, got {t}")
    ce, cg = _amplitude_arrays(params.xi, np.asarray([t]))
    return PureAmplitudes(complex(ce[0]), complex(cg[0]))


def survival_probability(params: ModelParams, tau: RescaledTime | float) -> float:
    """Norm of the no-jump wavefunction, |c_e0|^2 + |c_g1|^2."""
    psi = amplitudes(params, tau)
    return psi.norm_sq


def _concurrence_arrays(xi: float, tau: np.ndarray) -> np.ndarray:
    ce, cg = _amplitude_arrays(xi, tau)
    return 2.0 * np.abs(ce) * np.abs(cg)


def concurrence(params: ModelParams, tau: RescaledTime | float) -> float:
    """Extractable concurrence C = <psi|psi> sin(2*theta) at one time.

    On the oscillatory branch this is evaluated through the survival/angle
    form; on the critical and overdamped branches through the equivalent
    amplitude product 2|c_e0||c_g1|.
    """
    t = _as_tau(tau)
    if t < 0:
        raise DomainError(f"tau must be >= 0, got {t}")
    xi = params.xi
    if regime(params) is Regime.UNDERDAMPED:
        w = _omega(xi)
        x = w * t
        theta = math.atan2(abs(xi * math.sin(x)), abs(w * math.cos(x) + math.sin(x)))
        psi = amplitudes(params, t)
        return psi.norm_sq * math.sin(2.0 * theta)
    return float(_concurrence_arrays(xi, np.asarray([t]))[0])


def t_opt_formula(params: ModelParams) -> RescaledTime:
    """Closed-form location of the first concurrence maximum (xi > 1 only).

    Evaluates tau* = |2*arctan(sqrt(16 + 12w^2 - 4 xi S)/w / 2)| / w with
    S = sqrt(16 + 8 w^2), written in the algebraically identical form
    2*arctan(2w / sqrt(16 + 12 w^2 + 4 xi S)) / w whose argument has no
    subtractive cancellation near the critical line.
    """
    if regime(params) is not Regime.UNDERDAMPED:
        raise BranchNotApplicable(
            f"closed-form optimum needs xi > 1, got xi={params.xi}"
        )
    xi = params.xi
    w2 = (xi - 1.0) * (xi + 1.0)
    w = math.sqrt(w2)
    s = math.sqrt(16.0 + 8.0 * w2)
    alpha = 2.0 * w / math.sqrt(16.0 + 12.0 * w2 + 4.0 * xi * s)
    return RescaledTime(abs(2.0 * math.atan(alpha) / w))


def _search_window(xi: float) -> float:
    if xi > 1.0 + CRITICAL_WINDOW:
        return max(10.0, 4.0 * math.pi / _omega(xi))
    return 10.0


def _golden_max(f, a: float, b: float, tol: float = _GOLDEN_TOL) -> float:
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def t_opt_numeric(params: ModelParams) -> RescaledTime:
    """Grid scan plus golden-section refinement of the concurrence maximum.

    Returns the earliest global maximiser; a concurrence below 1e-14 across
    the whole window is treated as degenerate and reported as tau=0.
    """
    xi = params.xi
    ub = _search_window(xi)
    grid = np.linspace(0.0, ub, _COARSE_POINTS)
    if xi > 1.0 + CRITICAL_WINDOW:
        # resolve the first two Rabi periods so the coarse argmax cannot
        # land in a lower lobe when the window is much longer than 2*pi/w
        head = np.linspace(0.0, min(ub, 2.0 * math.pi / _omega(xi)), _COARSE_POINTS)
        grid = np.unique(np.concatenate([grid, head]))
    values = _concurrence_arrays(xi, grid)
    i = int(values.argmax())
    if values[i] < ZERO_MAX_FLOOR:
        return RescaledTime(0.0)
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    f = lambda t: float(_concurrence_arrays(xi, np.asarray([t]))[0])
    return RescaledTime(_golden_max(f, lo, hi))


@dataclass(frozen=True)
class OptimumRecord:
    """Location and value of the concurrence maximum for one xi."""

    xi: float
    tau_opt: float
    c_max: float
    source: str
    degenerate: bool = False

    def __post_init__(self):
        if self.source not in ("formula", "numeric"):
            raise DomainError(f"unknown source {self.source!r}")
        if self.tau_opt < 0:
            raise DomainError("tau_opt must be >= 0")
        if not -1e-12 <= self.c_max <= 1.0 + 1e-12:
            raise DomainError(f"c_max {self.c_max} outside [0, 1]")


def c_max(params: ModelParams) -> OptimumRecord:
    """Maximum extractable concurrence over the evolution.

    Uses the closed-form optimum when it exists and agrees with the numeric
    search to 1e-6 in tau, otherwise the numeric result; the winning source
    is annotated on the record.
    """
    tn = t_opt_numeric(params)
    cn = concurrence(params, tn)
    if cn < ZERO_MAX_FLOOR:
        return OptimumRecord(params.xi, 0.0, 0.0, source="numeric", degenerate=True)
    if regime(params) is Regime.UNDERDAMPED:
        tf = t_opt_formula(params)
        if abs(tf.tau - tn.tau) < 1e-6:
            return OptimumRecord(params.xi, tf.tau, concurrence(params, tf), "formula")
    return OptimumRecord(params.xi, tn.tau, cn, "numeric")


def c_max_derivative(xi: float, h: float | None = None) -> float:
    """Central finite difference of c_max with respect to xi."""
    if h is None:
        h = 1e-4 * max(1.0, xi)
    if h <= 0:
        raise DomainError(f"h must be positive, got {h}")
    if xi - h <= 0:
        raise DomainError(f"xi - h = {xi - h} must stay positive")
    hi = c_max(ModelParams(xi=xi + h)).c_max
    lo = c_max(ModelParams(xi=xi - h)).c_max
    return (hi - lo) / (2.0 * h)
