"""Core state types for a qubit exchanging one excitation with a lossy mode.

Everything downstream works in dimensionless variables: the coupling ratio
``xi = 4*lambda0/kappa`` and the rescaled time ``tau = kappa*t/4``.  Physical
rates enter only through :func:`params_from_physical` / :func:`tau_from_time`;
their unit is an opaque tag that both rates must share.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InvariantError

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-9
EIGENVALUE_FLOOR = -1e-9
NORM_TOL = 1e-12
CONSISTENCY_TOL = 1e-12


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless coupling ratio, optionally tied to physical rates."""

    xi: float
    kappa: float | None = None
    lambda0: float | None = None
    units: str | None = None

    def __post_init__(self):
        if not (self.xi > 0.0) or not np.isfinite(self.xi):
            raise DomainError(f"xi must be a positive finite real, got {self.xi}")
        given = (self.kappa is not None, self.lambda0 is not None)
        if any(given) and not all(given):
            raise DomainError("kappa and lambda0 must be given together")
        if all(given):
            if self.units is None:
                raise DomainError("physical rates require a units tag")
            if self.kappa <= 0 or self.lambda0 <= 0:
                raise DomainError("kappa and lambda0 must be positive")
            implied = 4.0 * self.lambda0 / self.kappa
            if abs(implied - self.xi) > CONSISTENCY_TOL * max(abs(self.xi), 1.0):
                raise InvariantError(
                    f"xi={self.xi} inconsistent with 4*lambda0/kappa={implied}"
                )


def params_from_physical(kappa: float, lambda0: float, units: str) -> ModelParams:
    """Build :class:`ModelParams` from physical rates sharing one unit tag."""
    if kappa <= 0 or not np.isfinite(kappa):
        raise DomainError(f"kappa must be positive, got {kappa}")
    if lambda0 <= 0 or not np.isfinite(lambda0):
        raise DomainError(f"lambda0 must be positive, got {lambda0}")
    return ModelParams(xi=4.0 * lambda0 / kappa, kappa=kappa, lambda0=lambda0, units=units)


@dataclass(frozen=True)
class RescaledTime:
    """Dimensionless time tau = kappa*t/4."""

    tau: float

    def __post_init__(self):
        if not np.isfinite(self.tau) or self.tau < 0.0:
            raise DomainError(f"tau must be finite and >= 0, got {self.tau}")

    def __float__(self) -> float:
        return float(self.tau)


def tau_from_time(t: float, kappa: float) -> RescaledTime:
    """Rescale a physical time by kappa/4."""
    if kappa <= 0 or not np.isfinite(kappa):
        raise DomainError(f"kappa must be positive, got {kappa}")
    if t < 0 or not np.isfinite(t):
        raise DomainError(f"t must be finite and >= 0, got {t}")
    return RescaledTime(kappa * t / 4.0)


def _as_tau(tau: "RescaledTime | float") -> float:
    return tau.tau if isinstance(tau, RescaledTime) else float(tau)


@dataclass(frozen=True)
class PureAmplitudes:
    """No-jump amplitudes on {|e,0>, |g,1>}; the weight 1-<psi|psi> sits in |g,0>."""

    c_e0: complex
    c_g1: complex

    def __post_init__(self):
        n2 = self.norm_sq
        if not np.isfinite(n2) or n2 > 1.0 + NORM_TOL:
            raise InvariantError(f"|c_e0|^2+|c_g1|^2 = {n2} exceeds 1")

    @property
    def norm_sq(self) -> float:
        return abs(self.c_e0) ** 2 + abs(self.c_g1) ** 2


_BASIS_LABELS = ("|e,0>", "|g,1>", "|g,0>")


@dataclass(frozen=True)
class DensityMatrix3:
    """Validated density matrix on the basis (|e,0>, |g,1>, |g,0>)."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (3, 3):
            raise InvariantError(f"expected a 3x3 matrix, got shape {m.shape}")
        if np.abs(m - m.conj().T).max() > HERMITICITY_TOL:
            raise InvariantError("matrix is not Hermitian within 1e-10")
        tr = m.trace().real
        if abs(tr - 1.0) > TRACE_TOL:
            raise InvariantError(f"trace {tr} deviates from 1 beyond 1e-9")
        if np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min() < EIGENVALUE_FLOOR:
            raise InvariantError("matrix has an eigenvalue below -1e-9")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def p_e0(self) -> float:
        return self.matrix[0, 0].real

    @property
    def p_g1(self) -> float:
        return self.matrix[1, 1].real

    @property
    def p_g0(self) -> float:
        return self.matrix[2, 2].real

    @property
    def coherence(self) -> complex:
        """The |e,0><g,1| matrix element."""
        return self.matrix[0, 1]

    @property
    def survival(self) -> float:
        """Weight remaining in the no-jump sector."""
        return self.p_e0 + self.p_g1


def pure_to_density(psi: PureAmplitudes) -> DensityMatrix3:
    """Unconditional state: |psi><psi| plus the jump weight on |g,0><g,0|.

    The |g,0> row and column are exactly zero off the diagonal: the emitted
    photon carries no coherence back into the no-jump sector.
    """
    m = np.zeros((3, 3), dtype=complex)
    m[0, 0] = abs(psi.c_e0) ** 2
    m[1, 1] = abs(psi.c_g1) ** 2
    m[0, 1] = psi.c_e0 * np.conj(psi.c_g1)
    m[1, 0] = np.conj(m[0, 1])
    m[2, 2] = max(1.0 - (m[0, 0].real + m[1, 1].real), 0.0)
    return DensityMatrix3(m)
