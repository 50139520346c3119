import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lorentzbath.errors import DomainError, InvariantError
from lorentzbath.model import (
    DensityMatrix3,
    ModelParams,
    PureAmplitudes,
    RescaledTime,
    params_from_physical,
    pure_to_density,
    tau_from_time,
)


class TestModelParams:
    def test_xi_only(self):
        p = ModelParams(xi=2.0)
        assert p.xi == 2.0 and p.kappa is None

    @pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
    def test_bad_xi(self, bad):
        with pytest.raises(DomainError):
            ModelParams(xi=bad)

    def test_physical_pair_needs_units(self):
        with pytest.raises(DomainError):
            ModelParams(xi=2.0, kappa=5.0, lambda0=2.5)

    def test_physical_pair_must_be_complete(self):
        with pytest.raises(DomainError):
            ModelParams(xi=2.0, kappa=5.0, units="MHz")

    def test_consistency_enforced(self):
        with pytest.raises(InvariantError):
            ModelParams(xi=2.0, kappa=5.0, lambda0=1.0, units="MHz")

    def test_from_physical_experimental_values(self):
        assert params_from_physical(5.0, 1.25, units="MHz").xi == pytest.approx(1.0, abs=0)
        assert params_from_physical(5.0, 2.5, units="MHz").xi == pytest.approx(2.0, abs=0)

    def test_from_physical_rejects_zero_kappa(self):
        with pytest.raises(DomainError):
            params_from_physical(0.0, 1.0, units="MHz")


class TestRescaledTime:
    def test_zero_time(self):
        assert float(tau_from_time(0.0, 5.0)) == 0.0

    def test_definition_point(self):
        assert float(tau_from_time(4.0 / 5.0, 5.0)) == pytest.approx(1.0, rel=1e-15)

    def test_microsecond_example(self):
        assert float(tau_from_time(0.8, 5.0)) == pytest.approx(1.0, rel=1e-15)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            tau_from_time(-1.0, 5.0)
        with pytest.raises(DomainError):
            RescaledTime(-0.1)


class TestPureAmplitudes:
    def test_norm_cap(self):
        with pytest.raises((DomainError, InvariantError)):
            PureAmplitudes(c_e0=1.0, c_g1=0.5)

    def test_norm_property(self):
        psi = PureAmplitudes(c_e0=0.6, c_g1=0.8j)
        assert psi.norm_sq == pytest.approx(1.0, abs=1e-15)


class TestPureToDensity:
    def test_initial_state(self):
        rho = pure_to_density(PureAmplitudes(c_e0=1.0, c_g1=0.0))
        assert np.allclose(rho.matrix, np.diag([1.0, 0.0, 0.0]))

    def test_fully_decayed(self):
        rho = pure_to_density(PureAmplitudes(c_e0=0.0, c_g1=0.0))
        assert np.allclose(rho.matrix, np.diag([0.0, 0.0, 1.0]))

    def test_normalized_superposition_is_rank_one(self):
        s = 2.0**-0.5
        rho = pure_to_density(PureAmplitudes(c_e0=s, c_g1=-1j * s))
        evals = np.linalg.eigvalsh(rho.matrix)
        assert abs(rho.matrix[2, 2]) < 1e-15
        assert np.sort(evals)[-1] == pytest.approx(1.0, abs=1e-12)

    @given(
        st.floats(0.0, 1.0),
        st.floats(0.0, 2 * np.pi),
        st.floats(0.0, 2 * np.pi),
        st.floats(0.0, 1.0),
    )
    def test_spectrum_and_block(self, r, pha, phb, split):
        a = np.sqrt(r * split)
        b = np.sqrt(r * (1.0 - split))
        psi = PureAmplitudes(
            c_e0=a * np.exp(1j * pha), c_g1=b * np.exp(1j * phb)
        )
        rho = pure_to_density(psi)
        assert abs(np.trace(rho.matrix).real - 1.0) < 1e-12
        # spectrum {<psi|psi>, 0, 1 - <psi|psi>}
        evals = np.sort(np.linalg.eigvalsh(rho.matrix))
        expect = np.sort([psi.norm_sq, 0.0, 1.0 - psi.norm_sq])
        assert np.abs(evals - expect).max() < 1e-10
        # survival block is the bare outer product
        vec = np.array([psi.c_e0, psi.c_g1])
        assert np.abs(rho.matrix[:2, :2] - np.outer(vec, vec.conj())).max() < 1e-12
        # jump branch carries no coherence
        assert abs(rho.matrix[0, 2]) == 0.0 and abs(rho.matrix[1, 2]) == 0.0


class TestDensityMatrix3:
    def test_rejects_non_hermitian(self):
        m = np.diag([0.5, 0.3, 0.2]).astype(complex)
        m[0, 1] = 0.1
        with pytest.raises((DomainError, InvariantError)):
            DensityMatrix3(m)

    def test_rejects_bad_trace(self):
        with pytest.raises((DomainError, InvariantError)):
            DensityMatrix3(np.diag([0.5, 0.3, 0.1]).astype(complex))

    def test_rejects_negative_eigenvalue(self):
        m = np.diag([1.1, -0.1, 0.0]).astype(complex)
        with pytest.raises((DomainError, InvariantError)):
            DensityMatrix3(m)

    def test_properties(self):
        m = np.diag([0.4, 0.35, 0.25]).astype(complex)
        m[0, 1] = 0.2j
        m[1, 0] = -0.2j
        rho = DensityMatrix3(m)
        assert rho.p_e0 == pytest.approx(0.4)
        assert rho.p_g1 == pytest.approx(0.35)
        assert rho.p_g0 == pytest.approx(0.25)
        assert rho.coherence == pytest.approx(0.2j)
        assert rho.survival == pytest.approx(0.75)

    def test_matrix_is_frozen(self):
        rho = pure_to_density(PureAmplitudes(c_e0=1.0, c_g1=0.0))
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 0.0
