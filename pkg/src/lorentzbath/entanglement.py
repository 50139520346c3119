"""Two-qubit concurrence of the qubit/single-photon-mode state.

The three-level state on (|e,0>, |g,1>, |g,0>) embeds into the two-qubit
space ordered (|e,1>, |e,0>, |g,1>, |g,0>) by padding the never-populated
|e,1> level with zeros.  For states of this X-like form the Wootters
concurrence collapses to twice the |e,0><g,1| coherence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EigensolverError, FormError, InvariantError
from .model import DensityMatrix3, HERMITICITY_TOL, TRACE_TOL, EIGENVALUE_FLOOR

X_FORM_TOL = 1e-8

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(_SIGMA_Y, _SIGMA_Y)


@dataclass(frozen=True)
class TwoQubitDensity:
    """Validated 4x4 density matrix on (|e,1>, |e,0>, |g,1>, |g,0>)."""

    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (4, 4):
            raise InvariantError(f"expected a 4x4 matrix, got shape {m.shape}")
        if np.abs(m - m.conj().T).max() > HERMITICITY_TOL:
            raise InvariantError("matrix is not Hermitian within 1e-10")
        if abs(m.trace().real - 1.0) > TRACE_TOL:
            raise InvariantError("trace deviates from 1 beyond 1e-9")
        if np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min() < EIGENVALUE_FLOOR:
            raise InvariantError("matrix has an eigenvalue below -1e-9")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


def embed(rho: DensityMatrix3) -> TwoQubitDensity:
    """Pad the empty |e,1> level; rho_{e0,g1} lands in the (2,3) block entry."""
    m = np.zeros((4, 4), dtype=complex)
    m[1:, 1:] = rho.matrix
    return TwoQubitDensity(m)


def wootters_concurrence(rho: TwoQubitDensity) -> float:
    """Concurrence from the Hermitian form R = sqrt(rho) rho~ sqrt(rho).

    rho~ is the spin-flipped state (sigma_y x sigma_y) rho* (sigma_y x sigma_y).
    With M = sqrt(rho) YY conj(sqrt(rho)) one has R = M M-dagger, so the
    Wootters lambdas (square roots of the eigenvalues of the Hermitian R) are
    exactly the singular values of M.  Taking them from an SVD instead of
    rooting eigvalsh(R) matters on the rank-deficient states this model
    produces: eigenvalue noise eps under a square root becomes sqrt(eps) and
    would swamp the 1e-10 agreement the closed form is held to.  Clipping of
    negative rho eigenvalues in [-1e-9, 0) happens before the matrix root;
    C = max(0, l1 - l2 - l3 - l4) with l descending.
    """
    m = rho.matrix
    try:
        evals, vecs = np.linalg.eigh(m)
        evals = np.where(evals < 0.0, 0.0, evals)
        sqrt_rho = (vecs * np.sqrt(evals)) @ vecs.conj().T
        flip_half = sqrt_rho @ _YY @ sqrt_rho.conj()
        lam = np.linalg.svd(flip_half, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failed on:\n{m!r}") from exc
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def xstate_concurrence(rho: DensityMatrix3) -> float:
    """Shortcut 2|rho_{e0,g1}| valid when |g,0> carries no coherence."""
    m = rho.matrix
    leak = max(abs(m[0, 2]), abs(m[1, 2]))
    if leak > X_FORM_TOL:
        raise FormError(
            f"|g,0> coherences of magnitude {leak} break the X form"
        )
    return 2.0 * abs(m[0, 1])
