import numpy as np
import pytest
from numpy.testing import assert_allclose

from metroStretch.gaussian_tools import (
    GaussianChannel,
    GaussianState,
    ResourceCM,
    apply_gaussian,
    bk_teleport_channel,
    choi_cm,
    coherent,
    displace,
    finite_resource,
    gaussian_fidelity,
    is_valid_channel,
    join_states,
    make_gaussian_channel,
    symplectic_eigenvalues,
    thermal,
    tmsv,
    vacuum,
)

I2 = np.eye(2)
Z2 = np.diag([1.0, -1.0])
ETAS = [0.2, 0.5, 0.8, 1.0, 1.5, 2.0]


def resource_grid():
    for eta in ETAS:
        for excess in (0.05, 0.5, 2.0):
            yield eta, abs(1 - eta) / 2 + excess


def test_state_validation():
    with pytest.raises(ValueError):
        GaussianState(0.1 * np.eye(2))
    with pytest.raises(ValueError):
        GaussianState(np.array([[1.0, 0.2], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        GaussianState(np.eye(3))
    with pytest.raises(ValueError):
        GaussianState(np.eye(2), mean=[0.0, 1.0, 2.0])


def test_state_utilities():
    assert_allclose(thermal(1.0).symplectic_eigenvalues(), [1.5])
    assert thermal(1.0).purity() == pytest.approx(1.0 / 3.0)
    assert vacuum(2).is_pure()
    assert not thermal(0.2).is_pure()
    assert coherent(1 + 1j).mean_photon_number() == pytest.approx(2.0)
    assert thermal(2.0).mean_photon_number() == pytest.approx(2.0)
    assert tmsv(0.7).mean_photon_number() == pytest.approx(2 * np.sinh(0.7) ** 2)


def test_displace_and_join():
    state = displace(thermal(0.5), 0.3 - 0.2j)
    assert_allclose(state.mean, np.sqrt(2) * np.array([0.3, -0.2]))
    joint = join_states(coherent(0.5), thermal(1.0))
    assert joint.modes == 2
    assert_allclose(joint.reduce(1).cm, thermal(1.0).cm)
    assert_allclose(joint.reduce(0).mean, coherent(0.5).mean)
    with pytest.raises(ValueError):
        displace(vacuum(), 1.0, mode=1)


def test_make_gaussian_channel_examples():
    ident = make_gaussian_channel("thermal_loss", eta=1.0, nbar=3.0)
    assert_allclose(ident.T, I2)
    assert_allclose(ident.N, np.zeros((2, 2)))
    loss = make_gaussian_channel("thermal-loss", eta=0.5, nbar=1.0)
    assert_allclose(loss.T, I2 / np.sqrt(2))
    assert_allclose(loss.N, 0.75 * I2)
    add = make_gaussian_channel("additive", nu=0.5)
    assert_allclose(add.T, I2)
    assert_allclose(add.N, 0.5 * I2)
    amp = make_gaussian_channel("amplifier", eta=2.0, nbar=0.0)
    assert_allclose(amp.N, 0.5 * I2)


def test_make_gaussian_channel_rejects_bad_parameters():
    with pytest.raises(ValueError):
        make_gaussian_channel("thermal_loss", eta=1.2)
    with pytest.raises(ValueError):
        make_gaussian_channel("amplifier", eta=0.8)
    with pytest.raises(ValueError):
        make_gaussian_channel("thermal_loss", eta=0.5, nbar=-1.0)
    with pytest.raises(ValueError):
        make_gaussian_channel("additive", nu=-0.1)
    with pytest.raises(ValueError):
        make_gaussian_channel("squeezer", eta=0.5)


def test_channel_constraint():
    assert is_valid_channel(I2, np.zeros((2, 2)))
    assert not is_valid_channel(np.sqrt(2) * I2, np.zeros((2, 2)))
    with pytest.raises(ValueError):
        GaussianChannel(np.sqrt(2) * I2, np.zeros((2, 2)))
    for kind, kwargs in [("thermal_loss", dict(eta=0.3, nbar=0.0)), ("amplifier", dict(eta=3.0, nbar=0.0)),
                         ("additive", dict(nu=0.0))]:
        ch = make_gaussian_channel(kind, **kwargs)
        assert np.linalg.det(ch.N) >= (np.linalg.det(ch.T) - 1) ** 2 / 4 - 1e-10


def test_apply_gaussian_examples():
    state = coherent(0.4 + 0.1j)
    out = apply_gaussian(make_gaussian_channel("identity"), state)
    assert_allclose(out.cm, state.cm)
    assert_allclose(out.mean, state.mean)

    out = apply_gaussian(make_gaussian_channel("additive", nu=0.3), vacuum())
    assert_allclose(out.cm, 0.8 * I2)

    out = apply_gaussian(make_gaussian_channel("thermal_loss", eta=0.0, nbar=2.0), state)
    assert_allclose(out.cm, 2.5 * I2)
    assert_allclose(out.mean, np.zeros(2), atol=1e-15)


def test_apply_gaussian_mode_out_of_range():
    with pytest.raises(ValueError):
        apply_gaussian(make_gaussian_channel("identity"), tmsv(0.5), mode=2)


def test_tmsv_examples():
    assert_allclose(tmsv(0.0).cm, np.eye(4) / 2)
    r = 0.8
    reduced = tmsv(r).reduce(1)
    assert_allclose(reduced.cm, (np.sinh(r) ** 2 + 0.5) * I2)
    cm = tmsv(np.log(2) / 2).cm
    assert cm[0, 0] == pytest.approx(0.625)
    assert cm[0, 2] == pytest.approx(0.375)
    assert cm[1, 3] == pytest.approx(-0.375)
    assert tmsv(1.3).is_pure()
    with pytest.raises(ValueError):
        tmsv(-0.1)


def test_choi_cm_examples():
    r = 1.2
    assert_allclose(choi_cm(make_gaussian_channel("identity"), r).cm, tmsv(r).cm)
    out = choi_cm(make_gaussian_channel("additive", nu=0.4), r).cm
    expected = tmsv(r).cm.copy()
    expected[:2, :2] += 0.4 * I2
    assert_allclose(out, expected)


def test_bk_teleport_examples():
    r = 0.9
    ch = bk_teleport_channel(tmsv(r), g=1.0)
    assert_allclose(ch.T, I2)
    assert_allclose(ch.N, np.exp(-2 * r) * I2, atol=1e-12)

    res = finite_resource(0.5, 0.75)
    zero_gain = bk_teleport_channel(res, g=0.0)
    assert_allclose(zero_gain.T, np.zeros((2, 2)))
    assert_allclose(zero_gain.N, res.B)
    with pytest.raises(ValueError):
        bk_teleport_channel(res, g=-1.0)


def test_bk_flags_invalid_resource():
    bogus = ResourceCM(0.5 * I2, 0.5 * I2, 0.6 * Z2, validate=False)
    with pytest.warns(UserWarning):
        ch = bk_teleport_channel(bogus, g=1.0)
    assert not ch.valid


def test_finite_resource_examples():
    res = finite_resource(1.0, 0.5)
    assert res.r == pytest.approx(np.log(2) / 2)
    assert_allclose(res.A, 0.625 * I2)
    assert_allclose(res.B, 0.625 * I2)
    assert_allclose(res.C, 0.375 * Z2)

    res = finite_resource(0.5, 0.75)
    a, b, c = res.A[0, 0], res.B[0, 0], res.C[0, 0]
    g = np.sqrt(0.5)
    assert a * g ** 2 - 2 * c * g + b == pytest.approx(0.75, abs=1e-12)

    eps = 1e-3
    assert finite_resource(1.0, 0.5 + eps).r < finite_resource(1.0, 0.5).r


def test_finite_resource_boundary():
    with pytest.raises(ValueError):
        finite_resource(0.5, 0.25)
    with pytest.raises(ValueError):
        finite_resource(0.0, 1.0)


def test_finite_resource_identity_over_grid():
    for eta, nu in resource_grid():
        res = finite_resource(eta, nu)
        g = np.sqrt(eta)
        ch = bk_teleport_channel(res, g)
        assert np.max(np.abs(ch.T - g * I2)) <= 1e-12
        assert np.max(np.abs(ch.N - nu * I2)) <= 1e-12
        a, b, c = res.A[0, 0], res.B[0, 0], res.C[0, 0]
        assert abs(a * g ** 2 - 2 * c * g + b - nu) <= 1e-12
        assert np.all(symplectic_eigenvalues(res.cm) >= 0.5 - 1e-10)


def test_negative_squeezing_resource_is_valid():
    res = finite_resource(0.6, 2.0)
    assert res.r < 0
    res.to_state().validate()


def test_resource_round_trip():
    res = ResourceCM.from_state(tmsv(0.4))
    assert_allclose(res.cm, tmsv(0.4).cm)
    with pytest.raises(ValueError):
        ResourceCM.from_state(vacuum())


def test_fidelity_examples():
    state = displace(thermal(0.3), 0.2j)
    assert gaussian_fidelity(state, state) == 1.0
    assert gaussian_fidelity(vacuum(), thermal(1.0)) == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    x0 = 1.1
    shifted = GaussianState(0.5 * I2, [x0, 0.0])
    assert gaussian_fidelity(shifted, vacuum()) == pytest.approx(np.exp(-x0 ** 2 / 4), abs=1e-12)


def test_fidelity_of_mixed_thermal_pair():
    n1, n2 = 0.5, 1.0
    expected = 1.0 / (np.sqrt((n1 + 1) * (n2 + 1)) - np.sqrt(n1 * n2))
    assert gaussian_fidelity(thermal(n1), thermal(n2)) == pytest.approx(expected, abs=1e-10)


def test_fidelity_symmetric():
    a = displace(thermal(0.4), 0.3 + 0.1j)
    b = displace(thermal(0.9), -0.2j)
    assert gaussian_fidelity(a, b) == pytest.approx(gaussian_fidelity(b, a), abs=1e-12)
    c = apply_gaussian(make_gaussian_channel("thermal_loss", eta=0.7, nbar=0.5), tmsv(0.6))
    d = apply_gaussian(make_gaussian_channel("thermal_loss", eta=0.6, nbar=0.3), tmsv(0.5))
    assert gaussian_fidelity(c, d) == pytest.approx(gaussian_fidelity(d, c), abs=1e-10)


def test_fidelity_with_one_pure_symplectic_mode():
    # thermal-loss resources at eta = 0.6 have symplectic spectrum (1/2, nu_2)
    nu = lambda nbar: 0.4 * (nbar + 0.5)
    state = lambda nbar: finite_resource(0.6, nu(nbar)).to_state()
    assert state(1.0).symplectic_eigenvalues()[0] == pytest.approx(0.5, abs=1e-9)
    assert not state(1.0).is_pure()
    for d in (2e-3, 1e-3, 5e-4, 2.5e-4):
        curvature = 8 * (1 - gaussian_fidelity(state(1.0 - d / 2), state(1.0 + d / 2))) / d ** 2
        assert curvature == pytest.approx(1.0, rel=1e-2)


def test_fidelity_mode_mismatch():
    with pytest.raises(ValueError):
        gaussian_fidelity(vacuum(1), vacuum(2))
