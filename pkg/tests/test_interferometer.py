import math

import numpy as np
import pytest
from scipy.stats import ortho_group

from harmonic_quench import ChainSpec, InvalidSpecError
from harmonic_quench.chain import normal_modes
from harmonic_quench.interferometer import NetworkPlan, complementary_angle, reck_decompose, reconstruct
from harmonic_quench.symplectic import BeamSplitter, Rotation, Squeezer, OpticalNetwork

FOUR_MODE_THETAS = [-0.9175, -0.5461, 1.8930, 0.2740, -0.7459, 1.9635]


def test_identity_needs_no_mixers():
    plan = reck_decompose(np.eye(5))
    assert plan.network.elements == ()


def test_two_mode_mixer():
    p = normal_modes(ChainSpec(2, 1.0, 1.0)).p_matrix
    plan = reck_decompose(p)
    assert len(plan.mixers) == 1
    np.testing.assert_allclose(reconstruct(plan), p, atol=1e-14)


def test_four_mode_angles():
    plan = reck_decompose(normal_modes(ChainSpec(4, 1.0, 1.0)).p_matrix)
    assert [m.theta for m in plan.mixers] == pytest.approx(FOUR_MODE_THETAS, abs=1e-4)
    assert [el for el in plan.network.elements if isinstance(el, Rotation)] == [Rotation(3, math.pi)]
    assert complementary_angle(0.3) == pytest.approx(math.pi / 2 - 0.3)


def test_round_trip_with_reflections():
    rng = np.random.default_rng(2)
    for n in (2, 3, 7):
        p = ortho_group.rvs(n, random_state=rng)
        p[:, 0] *= -1
        np.testing.assert_allclose(reconstruct(reck_decompose(p)), p, atol=1e-12)


def test_symplectic_of_plan_matches():
    p = ortho_group.rvs(4, random_state=9)
    s = reck_decompose(p).network.symplectic().matrix
    np.testing.assert_allclose(s[:4, :4], p, atol=1e-12)
    np.testing.assert_allclose(s[4:, 4:], p, atol=1e-12)


def test_rejects_non_orthogonal():
    with pytest.raises(InvalidSpecError):
        reck_decompose(np.array([[1.0, 0.2], [0.0, 1.0]]))
    with pytest.raises(InvalidSpecError):
        reck_decompose(np.array([[1.0, 0.0], [0.0, 1j]]))
    with pytest.raises(InvalidSpecError):
        reconstruct(OpticalNetwork(2, (Squeezer(0, 0.1),)))


def test_reconstruct_complex_phases():
    u = reconstruct(OpticalNetwork(2, (BeamSplitter(0, 1, 0.4, 0.3),)))
    assert np.iscomplexobj(u)
    np.testing.assert_allclose(u.conj().T @ u, np.eye(2), atol=1e-15)


def test_plan_serialisation_and_hash():
    plan = reck_decompose(ortho_group.rvs(3, random_state=1))
    d = plan.to_dict()
    back = NetworkPlan.from_dict(d)
    assert back.network == plan.network
    d["source_matrix"][0][0] += 1e-3
    with pytest.raises(InvalidSpecError):
        NetworkPlan.from_dict(d)
    assert len(plan.source_hash()) == 64
