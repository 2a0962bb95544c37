import math

import numpy as np
import pytest

from harmonic_quench import ChainSpec, fock
from harmonic_quench.chain import normal_modes
from harmonic_quench.work import (
    average_work,
    characteristic_function,
    chi_at,
    chi_quadrature,
    classical_lag,
    free_energy_change,
    jarzynski_check,
    log_partition_functions,
    mode_chi_radicand,
    nonequilibrium_lag,
    partition_functions,
    rwa_statistics,
)

# Fock-space oracle values (two oscillators, omega = g0 = beta = 1, cutoff 60)
CHI_ORACLE = {
    1.0: 0.6253411228570535 + 0.4264945865830538j,
    3.0: 0.12735319638042372 + 0.4767528953802534j,
    7.0: -0.3749198296096461 + 0.551514799565428j,
}
Z_RATIO_ORACLE = 0.5325932891379436
DELTA_F_ORACLE = 0.6299972058733075
AVG_WORK_ORACLE = 1.0819767068693296


@pytest.mark.parametrize("u, expected", sorted(CHI_ORACLE.items()))
def test_chi_frozen_oracle(spec_ref, u, expected):
    assert chi_at(spec_ref, u) == pytest.approx(expected, abs=1e-9)


def test_thermo_frozen_oracle(spec_ref):
    z0, z = partition_functions(spec_ref)
    assert z / z0 == pytest.approx(Z_RATIO_ORACLE, abs=1e-10)
    assert free_energy_change(spec_ref) == pytest.approx(DELTA_F_ORACLE, abs=1e-10)
    assert average_work(spec_ref) == pytest.approx(AVG_WORK_ORACLE, abs=1e-10)


def test_chi_basic_properties():
    spec = ChainSpec(3, 1.0, 0.8, 0.7)
    u = np.linspace(-12, 12, 481)
    chi = chi_at(spec, u)
    assert chi_at(spec, 0.0) == pytest.approx(1.0, abs=1e-15)
    np.testing.assert_allclose(chi[::-1], np.conj(chi), atol=1e-13)
    assert np.all(np.abs(chi) <= 1 + 1e-12)


def test_chi_free_quench_is_one():
    chi = characteristic_function(ChainSpec(5, 1.0, 0.0, 2.0)).chi
    assert np.all(chi == 1.0)


def test_chi_is_continuous():
    spec = ChainSpec(2, 1.0, 10.0, 0.2)
    u = np.linspace(0, 10, 20001)
    chi = chi_at(spec, u)
    assert np.max(np.abs(np.diff(chi))) < 0.05


def test_radicand_unity_at_origin():
    assert mode_chi_radicand(0.0, 1.0, 2.3, 0.7) == pytest.approx(1.0)


@pytest.mark.parametrize("u", [0.4, 1.7, 4.2])
def test_quadrature_matches_closed_form(u):
    spec = ChainSpec(2, 1.0, 0.6, 1.2)
    assert chi_quadrature(spec, u, order=30) == pytest.approx(chi_at(spec, u), abs=1e-7)


def test_quadrature_zero_temperature():
    spec = ChainSpec(2, 1.0, 0.6, math.inf)
    assert chi_quadrature(spec, 2.0) == pytest.approx(chi_at(spec, 2.0), abs=1e-12)


@pytest.mark.parametrize("g", [0.1, 1.0, 3.0])
def test_chi_against_fock(fock_factory, g):
    spec = ChainSpec(2, 1.0, g, 1.0)
    u = np.linspace(0, 6, 25)
    oracle = fock.oracle_chi(fock_factory(spec, 60), spec, u)
    assert np.max(np.abs(chi_at(spec, u) - oracle)) < 1e-6


def test_chi_strong_coupling_against_quadrature():
    # strong squeezing outruns any affordable Fock cutoff; the phase-space
    # quadrature has no truncation
    spec = ChainSpec(2, 1.0, 10.0, 1.0)
    for u in (0.5, 2.75, 5.0):
        assert chi_quadrature(spec, u, order=40) == pytest.approx(chi_at(spec, u), abs=1e-7)


def test_average_work_law():
    for n in (2, 3, 9):
        spec = ChainSpec(n, 2.0, 0.3, 0.5)
        assert average_work(spec) == pytest.approx(0.3 * (n - 1) / 2 / math.tanh(0.5))


def test_free_energy_limits():
    spec = ChainSpec(4, 1.0, 0.7, 1e-4)
    mus = normal_modes(spec).mus
    # high temperature: ln(mu_j/omega)/beta
    assert free_energy_change(spec) == pytest.approx(np.sum(np.log(mus)) / 1e-4, rel=1e-6)
    cold = spec.replace(beta=200.0)
    assert free_energy_change(cold) == pytest.approx(np.sum(mus - 1.0) / 2, abs=1e-10)
    assert free_energy_change(spec.replace(beta=math.inf)) == pytest.approx(np.sum(mus - 1.0) / 2)
    assert free_energy_change(spec.replace(g0=0.0)) == 0.0


def test_log_partition_stable_at_low_temperature():
    lz0, lz = log_partition_functions(ChainSpec(8, 1.0, 1.0, 2000.0))
    assert math.isfinite(lz0) and math.isfinite(lz)


@pytest.mark.parametrize("n, g, b", [(2, 1.0, 1.0), (5, 0.1, 5.0), (17, 10.0, 0.2), (3, 2.0, 30.0)])
def test_lag_nonnegative_and_consistent(n, g, b):
    spec = ChainSpec(n, 1.0, g, b)
    rep = nonequilibrium_lag(spec)
    assert rep.lag >= 0.0
    assert rep.lag == pytest.approx(b * (rep.avg_work - rep.delta_f), abs=1e-10 * max(1, rep.lag))
    assert rep.lag_classical + rep.lag_quantum == pytest.approx(rep.lag)
    assert rep.jarzynski_residual < 1e-10


def test_classical_lag_is_high_temperature_limit():
    spec = ChainSpec(3, 1.0, 0.9, 1e-5)
    assert nonequilibrium_lag(spec).lag == pytest.approx(classical_lag(spec), rel=1e-6)


def test_quantum_lag_grows_linearly_at_low_temperature():
    spec = ChainSpec(2, 1.0, 1.0)
    lq = [nonequilibrium_lag(spec.replace(beta=b), with_jarzynski=False).lag_quantum for b in (40.0, 80.0)]
    mus = normal_modes(spec).mus
    slope = 0.5 * 1.0 - 0.5 * (mus[1] - 1.0)  # beta (<W> - Delta F) per unit beta as V -> 1
    assert (lq[1] - lq[0]) / 40.0 == pytest.approx(slope, rel=1e-9)


def test_zero_temperature_lag():
    rep = nonequilibrium_lag(ChainSpec(2, 1.0, 1.0, math.inf))
    assert rep.lag == math.inf and math.isnan(rep.jarzynski_residual)


def _lag_increment_limit(omega, g, beta):
    # per-site limit of L(N+1) - L(N): a Riemann integral over the band
    from scipy.integrate import quad

    v = 1 / math.tanh(0.5 * beta * omega)
    band = lambda q: math.log(math.sinh(0.5 * beta * math.sqrt(omega * (omega + 2 * g * (1 - math.cos(q))))))
    return 0.5 * beta * g * v + math.log(math.sinh(0.5 * beta * omega)) - quad(band, 0, math.pi, epsabs=1e-14)[0] / math.pi


def test_lag_increments_converge():
    lag = [nonequilibrium_lag(ChainSpec(n, 1.0, 1.0, 1.0), with_jarzynski=False).lag for n in range(2, 65)]
    inc = np.diff(lag)
    s_inf = _lag_increment_limit(1.0, 1.0, 1.0)
    assert np.all(np.abs(inc[14:] - s_inf) < 1e-9)
    # but not affine at small N
    assert abs(inc[0] - s_inf) > 1e-3


def test_jarzynski_n4_against_fock(fock_factory):
    for g in (0.1, 1.0):
        spec = ChainSpec(4, 1.0, g, 5.0)
        sys = fock_factory(spec, 7)
        oracle = fock.oracle_chi(sys, spec, np.array([1j * spec.beta]))[0]
        # cutoff 7 is the largest the dimension guard allows for four modes
        assert chi_at(spec, 1j * spec.beta) == pytest.approx(oracle, abs=1e-6)
        assert jarzynski_check(spec) < 1e-10


def test_rwa_statistics():
    spec = ChainSpec(2, 1.0, 0.5, 1.0)
    st = rwa_statistics(spec)
    assert st.avg_work == 0.0
    assert st.second_moment == pytest.approx(0.11508419927597383, rel=1e-10)
    assert st.chi_u2_coefficient == pytest.approx(-st.second_moment / 2)
