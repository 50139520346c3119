"""Brute-force continuum oracle: discretized multimode Schrodinger dynamics.

The Lorentzian reservoir is sampled on a uniform frequency grid and the
single-excitation state (qubit amplitude plus one amplitude per mode) is
propagated with a fixed-step fourth-order Runge-Kutta scheme.  Nothing here
knows about the closed-form amplitudes or the lossy-mode picture; agreement
with them is what the oracle is for.

All quantities are rescaled: time by 4/kappa, detunings and couplings by
kappa/4, so the Lorentzian has half-width 2 and total coupling strength xi.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, IntegrationError
from .model import ModelParams, _as_tau

NORM_BUDGET = 1e-9          # state-type invariant
NORM_ABORT = 1e-6           # evolve gives up beyond this drift
STEP_RULE = 0.05            # dt <= STEP_RULE / fastest frequency
_SYMMETRY_TOL = 1e-9


def _lorentzian(delta: np.ndarray) -> np.ndarray:
    """Rescaled spectral density, unit mass, half-width 2."""
    return (2.0 / np.pi) / (delta * delta + 4.0)


@dataclass(frozen=True)
class DiscretizedBath:
    """A finite stand-in for the continuum: detunings and couplings per mode.

    ``window`` is the sampled half-width in units of kappa (so the rescaled
    detunings span [-4*window, 4*window]).  Hand-built baths with a single
    mode are allowed; ``sample_bath`` is the quadrature constructor.
    """

    detunings: np.ndarray
    couplings: np.ndarray
    window: float
    n_modes: int

    def __post_init__(self):
        d = np.asarray(self.detunings, dtype=float)
        g = np.asarray(self.couplings, dtype=float)
        object.__setattr__(self, "detunings", d)
        object.__setattr__(self, "couplings", g)
        if d.ndim != 1 or g.shape != d.shape:
            raise DomainError("detunings and couplings must be matching 1-d arrays")
        if self.n_modes != len(d) or self.n_modes < 1:
            raise DomainError(f"n_modes={self.n_modes} does not match {len(d)} modes")
        if not (np.isfinite(d).all() and np.isfinite(g).all()):
            raise DomainError("bath arrays must be finite")
        if (g < 0).any():
            raise DomainError("couplings must be non-negative")
        if self.window < 0 or not np.isfinite(self.window):
            raise DomainError(f"window must be non-negative, got {self.window}")
        # resonant qubit: the sampled interval is centred on the line
        if abs(np.sort(d)[::-1] + np.sort(d)).max() > _SYMMETRY_TOL:
            raise DomainError("detunings must be symmetric about zero")
        d.flags.writeable = False
        g.flags.writeable = False

    @property
    def coupling_mass(self) -> float:
        """Sum of g_k^2; tends to xi^2 as the grid refines and widens."""
        return float(np.dot(self.couplings, self.couplings))

    @property
    def recurrence_horizon(self) -> float:
        """Poincare recurrence estimate 2*pi / (smallest detuning spacing).

        The discrete bath mimics the continuum only well inside this time;
        accuracy claims past it are meaningless.  A single-mode bath never
        dephases, hence an infinite horizon.
        """
        if self.n_modes < 2:
            return float("inf")
        spacing = np.diff(np.sort(self.detunings)).min()
        return float(2.0 * np.pi / spacing)


def sample_bath(params: ModelParams, n_modes: int, window: float) -> DiscretizedBath:
    """Quadrature sampling of the truncated Lorentzian.

    Uniform, endpoint-inclusive grid of n_modes detunings over
    [-4*window, 4*window] with couplings g_k = xi * sqrt(J(delta_k) * h).
    The sampled mass sum(g^2) then approximates the truncated-line integral
    xi^2 * (2/pi) * arctan(2*window), which is checked here against the
    analytic tail bound.
    """
    if n_modes < 2:
        raise DomainError(f"sample_bath needs n_modes >= 2, got {n_modes}")
    if window <= 0 or not np.isfinite(window):
        raise DomainError(f"window must be positive, got {window}")
    xi = params.xi
    delta = np.linspace(-4.0 * window, 4.0 * window, n_modes)
    h = delta[1] - delta[0]
    g = xi * np.sqrt(_lorentzian(delta) * h)
    bath = DiscretizedBath(detunings=delta, couplings=g, window=float(window), n_modes=n_modes)
    mass = bath.coupling_mass
    lo = xi * xi * (1.0 - 1.0 / (np.pi * window))
    hi = xi * xi * (1.0 + 1e-9)
    if not lo <= mass <= hi:
        raise DomainError(
            f"sampled coupling mass {mass} outside [{lo}, {hi}]; grid too coarse"
        )
    return bath


@dataclass(frozen=True)
class MultimodeState:
    """Single-excitation amplitudes: qubit c_e plus one c_k per mode."""

    c_e: complex
    c_k: np.ndarray

    def __post_init__(self):
        ck = np.asarray(self.c_k, dtype=complex)
        object.__setattr__(self, "c_k", ck)
        if ck.ndim != 1 or len(ck) < 1:
            raise DomainError("c_k must be a 1-d array with at least one mode")
        if not (np.isfinite(ck).all() and np.isfinite(self.c_e)):
            raise DomainError("amplitudes must be finite")
        if abs(self.norm_sq - 1.0) > NORM_BUDGET:
            raise DomainError(f"norm {self.norm_sq} departs from 1 beyond {NORM_BUDGET}")
        ck.flags.writeable = False

    @property
    def norm_sq(self) -> float:
        return float(abs(self.c_e) ** 2 + np.vdot(self.c_k, self.c_k).real)


@dataclass(frozen=True)
class MultimodeTrajectory:
    """Sampled evolution: qubit amplitude and norm per sample time.

    Mode amplitudes are only retained for the final state (and per sample
    when ``evolve`` is asked to keep them), since N complex numbers per
    sample adds up fast at N in the thousands.
    """

    taus: np.ndarray
    c_e: np.ndarray
    norms: np.ndarray
    final: MultimodeState
    modes: list | None = field(default=None, repr=False)

    @property
    def p_e(self) -> np.ndarray:
        return np.abs(self.c_e) ** 2

    @property
    def concurrences(self) -> np.ndarray:
        a = np.abs(self.c_e)
        return 2.0 * a * np.sqrt(np.clip(1.0 - a * a, 0.0, None))


def _default_dt(bath: DiscretizedBath) -> float:
    fastest = max(
        float(np.abs(bath.detunings).max()),
        np.sqrt(bath.coupling_mass),
        1.0,
    )
    return STEP_RULE / fastest


def evolve(
    bath: DiscretizedBath,
    t_end,
    dt: float | None = None,
    sample_taus: np.ndarray | None = None,
    keep_modes: bool = False,
) -> MultimodeTrajectory:
    """Propagate |e, vac> under the discretized Hamiltonian.

    Classic RK4 with a fixed step bounded by 0.05 over the fastest frequency
    in the problem (largest detuning or the collective coupling), refined per
    sample interval so every requested time is hit exactly.  Norm drift is
    the error monitor: beyond 1e-6 the run aborts.
    """
    t_end = float(_as_tau(t_end))
    if dt is not None and (dt <= 0 or not np.isfinite(dt)):
        raise DomainError(f"dt must be positive, got {dt}")
    step_cap = min(dt, _default_dt(bath)) if dt is not None else _default_dt(bath)
    if sample_taus is None:
        sample_taus = np.linspace(0.0, t_end, 401) if t_end > 0 else np.zeros(1)
    samples = np.asarray(sample_taus, dtype=float)
    if samples.ndim != 1 or len(samples) == 0 or np.any(np.diff(samples) <= 0):
        raise DomainError("sample times must be strictly increasing")
    if samples[0] < 0 or samples[-1] > t_end + 1e-12 * max(1.0, t_end):
        raise DomainError("sample times must lie inside [0, t_end]")

    delta = bath.detunings
    g = bath.couplings
    n = bath.n_modes
    y = np.zeros(n + 1, dtype=complex)
    y[0] = 1.0

    def f(state):
        out = np.empty_like(state)
        out[0] = -1j * np.dot(g, state[1:])
        out[1:] = -1j * (delta * state[1:] + g * state[0])
        return out

    c_e = np.empty(len(samples), dtype=complex)
    norms = np.empty(len(samples))
    modes: list | None = [] if keep_modes else None

    def emit(i, tau):
        nrm = float(np.vdot(y, y).real)
        if abs(nrm - 1.0) > NORM_ABORT:
            raise IntegrationError(f"norm drift {abs(nrm - 1.0)} at tau={tau}")
        c_e[i] = y[0]
        norms[i] = nrm
        if modes is not None:
            modes.append(y[1:].copy())

    t = 0.0
    for i, tau in enumerate(samples):
        span = tau - t
        if span > 0:
            steps = max(1, int(np.ceil(span / step_cap - 1e-12)))
            h = span / steps
            for _ in range(steps):
                k1 = f(y)
                k2 = f(y + 0.5 * h * k1)
                k3 = f(y + 0.5 * h * k2)
                k4 = f(y + h * k3)
                y = y + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
            t = tau
        emit(i, tau)

    final = MultimodeState(c_e=complex(y[0]), c_k=y[1:].copy())
    return MultimodeTrajectory(
        taus=samples, c_e=c_e, norms=norms, final=final, modes=modes
    )


def reservoir_concurrence(state: MultimodeState) -> float:
    """Qubit-reservoir concurrence of the pure global state, 2|c_e|*sqrt(1-|c_e|^2).

    In the closed multimode picture nothing is ever irreversibly lost, so this
    counts all of the entanglement and upper-bounds the extractable part; the
    latter is recovered through :func:`collective_amplitude`.
    """
    a = abs(state.c_e)
    return float(2.0 * a * np.sqrt(max(0.0, 1.0 - a * a)))


def collective_amplitude(bath: DiscretizedBath, state: MultimodeState) -> complex:
    """Projection of the reservoir state onto the coupling-weighted mode.

    The normalized superposition sum(g_k |1_k>) / sqrt(sum g_k^2) is the
    discrete stand-in for the lossy mode of the equivalent damped picture, so
    2*|c_e|*|collective_amplitude| reconstructs the extractable concurrence
    from a multimode run; the remaining reservoir weight plays the role of
    the already-emitted radiation.
    """
    if len(state.c_k) != bath.n_modes:
        raise DomainError(
            f"state has {len(state.c_k)} modes but the bath has {bath.n_modes}"
        )
    return complex(np.dot(bath.couplings, state.c_k) / np.sqrt(bath.coupling_mass))
