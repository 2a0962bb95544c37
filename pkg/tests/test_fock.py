import math
import warnings

import numpy as np
import pytest

from harmonic_quench import ChainSpec, DimensionGuardError, InvalidSpecError, fock
from harmonic_quench.symplectic import propagator_network, thermal_state
from harmonic_quench.work import chi_at, free_energy_change, log_partition_functions

D_REL_ORACLE = 0.45197950099601225
NBAR_ORACLE = 0.5819767068693265


def test_dimension_guard():
    with pytest.raises(DimensionGuardError):
        fock.build_system(ChainSpec(4, 1.0, 1.0), 8)
    with pytest.raises(DimensionGuardError):
        fock.build_system(ChainSpec(2, 1.0, 1.0), 0)
    with pytest.raises(InvalidSpecError):
        fock.build_system(ChainSpec(2, 1.0, 1.0), 5, model="H3")


def test_ground_energy_uncoupled():
    sys = fock.build_system(ChainSpec(2, 1.0, 0.0), 30)
    e, _ = sys.final_eigh
    assert e[0] == pytest.approx(1.0, abs=1e-12)


def test_h2_levels():
    sys = fock.build_system(ChainSpec(2, 1.0, 0.75), 30, model="H2")
    e, _ = sys.final_eigh
    np.testing.assert_allclose(e[:4], [1.0, 1.625, 2.25, 2.375], atol=1e-10)


def test_h2_unbounded_detection():
    assert fock.unbounded_below(ChainSpec(2, 1.0, 2.5))
    assert not fock.unbounded_below(ChainSpec(2, 1.0, 0.5))


def test_tpm_fourier_matches_oracle_chi(fock_factory):
    spec = ChainSpec(2, 1.0, 0.7, 1.0)
    sys = fock_factory(spec, 30)
    u = np.linspace(-3, 3, 13)
    dist = fock.tpm_distribution(sys, spec)
    np.testing.assert_allclose(dist.characteristic(u), fock.oracle_chi(sys, spec, u), atol=1e-10)
    assert np.sum(dist.prob) == pytest.approx(1.0, abs=1e-8)


def test_frozen_reference(spec_ref, fock_ref):
    assert fock.relative_entropy_lag(fock_ref, spec_ref, 0.7) == pytest.approx(D_REL_ORACLE, abs=1e-10)
    assert fock.oracle_free_energy_change(fock_ref, spec_ref) == pytest.approx(free_energy_change(spec_ref), abs=1e-8)
    lz0, lz = fock.oracle_log_partition(fock_ref, spec_ref.beta)
    assert (lz0, lz) == pytest.approx(log_partition_functions(spec_ref), abs=1e-8)


def test_thermal_occupation(fock_factory):
    spec = ChainSpec(2, 1.0, 0.0, 1.0)
    sys = fock_factory(spec, 60)
    cov = fock.oracle_covariance(sys, fock.gibbs_columns(sys, spec.beta))
    v = 1 / math.tanh(0.5)
    assert v == pytest.approx(2.163953413738653)
    np.testing.assert_allclose(np.diag(cov), v, atol=1e-10)
    assert (v - 1) / 2 == pytest.approx(NBAR_ORACLE, abs=1e-10)


def test_evolved_covariance_matches_network(fock_factory):
    spec = ChainSpec(2, 1.0, 0.4, 2.0)
    sys = fock_factory(spec, 30)
    t = 1.3
    oracle = fock.oracle_covariance(sys, fock._evolved_columns(sys, spec, t))
    gaussian = thermal_state(spec).transform(propagator_network(spec, t)).cov
    np.testing.assert_allclose(oracle, gaussian, atol=1e-6)


def test_oracle_chi_imaginary_axis(fock_factory):
    spec = ChainSpec(2, 1.0, 1.0, 1.0)
    sys = fock_factory(spec, 60)
    val = fock.oracle_chi(sys, spec, np.array([1j]))[0]
    assert val == pytest.approx(chi_at(spec, 1j), rel=1e-8)


def test_truncation_warning():
    spec = ChainSpec(2, 1.0, 0.5, 0.1)
    sys = fock.build_system(spec, 10)
    with pytest.warns(Warning):
        fock.tpm_distribution(sys, spec)


def test_gibbs_entropy_protocols():
    spec = ChainSpec(2, 1.0, 0.8, 2.0)
    sys = fock.build_system(spec, 20)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        assert fock.gibbs_entropy_change(sys, spec, 0.9) >= -1e-8
        assert abs(fock.gibbs_entropy_change(sys, spec, 0.9, protocol="adiabatic")) < 1e-10
        with pytest.raises(InvalidSpecError):
            fock.gibbs_entropy_change(sys, spec, 0.9, protocol="slow")


def test_oracle_record():
    rec = fock.OracleRecord("x", 1.0, 1.0 + 1e-9, 1e-9, 1e-9, 1e-6, 30, 0.0)
    assert rec.passed and rec.to_dict()["passed"]
