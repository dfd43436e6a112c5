import numpy as np
import pytest
from numpy.testing import assert_allclose

from metroStretch import ParamFamilyCV
from metroStretch.gaussian_tools import (
    ResourceCM,
    apply_gaussian,
    choi_cm,
    coherent,
    displace,
    gaussian_fidelity,
    make_gaussian_channel,
    thermal,
    tmsv,
)
from metroStretch.fock_tools import (
    FockState,
    beam_splitter_blocks,
    displacement_matrix,
    fock_product,
    fock_state,
    fock_thermal_loss,
    mean_photon_number,
    oracle_fidelity,
)


def test_simple_states():
    vac = fock_state("thermal", nbar=0.0)
    assert vac.data[0, 0] == pytest.approx(1.0)
    assert np.real(np.trace(vac.data)) == pytest.approx(1.0)

    pair = fock_state("tmsv", r=0.0)
    assert pair.ket[0] == pytest.approx(1.0)
    assert pair.tail == 0.0

    th = fock_state("thermal", nbar=1.0, cutoff=40)
    assert th.data[0, 0] == pytest.approx(0.5)
    assert th.data[1, 1] == pytest.approx(0.25)
    assert th.tail == pytest.approx(2.0 ** -40)


def test_tail_reported_and_checked():
    state = fock_state("coherent", alpha=1.0, cutoff=40)
    assert 1.0 - state.trace() == pytest.approx(state.tail, abs=1e-14)
    with pytest.raises(ValueError):
        fock_state("thermal", nbar=5.0, cutoff=10)
    with pytest.raises(ValueError):
        fock_state("coherent", cutoff=2)
    with pytest.raises(ValueError):
        fock_state("squeezed")


def test_fock_state_shapes():
    with pytest.raises(ValueError):
        FockState(np.eye(3), cutoff=4)
    with pytest.raises(ValueError):
        FockState(cutoff=4)
    pair = fock_product(fock_state("coherent", alpha=0.3, cutoff=8), fock_state("vacuum", cutoff=8))
    assert pair.modes == 2
    assert pair.ket.shape == (64,)


def test_displacement_matrix_is_nearly_unitary():
    D = displacement_matrix(0.4 - 0.3j, 30)
    # truncation only affects the highest levels
    assert_allclose((D.conj().T @ D)[:15, :15], np.eye(15), atol=1e-10)
    assert_allclose(D[:, 0], fock_state("coherent", alpha=0.4 - 0.3j, cutoff=30).ket, atol=1e-14)


def test_beam_splitter_blocks_are_orthogonal():
    for eta in (0.0, 0.3, 1.0):
        for block in beam_splitter_blocks(eta, 12):
            assert_allclose(block @ block.T, np.eye(block.shape[0]), atol=1e-12)
    assert_allclose(beam_splitter_blocks(1.0, 5)[4], np.eye(5), atol=1e-15)
    with pytest.raises(ValueError):
        beam_splitter_blocks(1.5, 5)


def test_thermal_loss_examples():
    rho = fock_state("coherent", alpha=0.5, cutoff=30)
    ident = fock_thermal_loss(1.0, 0.0, rho)
    assert_allclose(ident.data, rho.data, atol=1e-12)

    env = fock_thermal_loss(0.0, 0.5, rho)
    assert_allclose(env.data, fock_state("thermal", nbar=0.5, cutoff=30).data, atol=1e-10)

    out = fock_thermal_loss(0.5, 1.0, fock_state("vacuum", cutoff=40))
    assert mean_photon_number(out) == pytest.approx(0.5, abs=1e-9)


def test_thermal_loss_of_coherent_state_is_displaced_thermal():
    eta, nbar, alpha = 0.6, 0.5, 0.7
    out = fock_thermal_loss(eta, nbar, fock_state("coherent", alpha=alpha, cutoff=40))
    expected = fock_state("displaced_thermal", alpha=np.sqrt(eta) * alpha, nbar=(1 - eta) * nbar, cutoff=40)
    assert_allclose(out.data, expected.data, atol=1e-10)


def test_thermal_loss_mean_photon_number():
    for eta, nbar, alpha in [(0.3, 0.2, 0.5), (0.8, 1.0, 1.0), (0.5, 0.0, 0.9j)]:
        rho = fock_state("coherent", alpha=alpha, cutoff=40)
        out = fock_thermal_loss(eta, nbar, rho)
        expected = eta * abs(alpha) ** 2 + (1 - eta) * nbar
        assert mean_photon_number(out) == pytest.approx(expected, abs=1e-9)


def test_thermal_loss_leaves_ancilla_untouched():
    tmsv_state = fock_state("tmsv", r=0.3, cutoff=14)
    out = fock_thermal_loss(0.6, 0.2, tmsv_state)
    assert out.modes == 2
    assert mean_photon_number(out, mode=1) == pytest.approx(np.sinh(0.3) ** 2, abs=1e-9)
    assert mean_photon_number(out, mode=0) == pytest.approx(0.6 * np.sinh(0.3) ** 2 + 0.4 * 0.2, abs=1e-9)


def test_oracle_matches_gaussian_fidelity():
    pairs = [
        (fock_state("coherent", alpha=0.5), coherent(0.5), fock_state("coherent", alpha=-0.2j), coherent(-0.2j)),
        (fock_state("thermal", nbar=0.5), thermal(0.5), fock_state("thermal", nbar=1.0), thermal(1.0)),
        (fock_state("coherent", alpha=0.3), coherent(0.3),
         fock_state("displaced_thermal", alpha=0.1 + 0.2j, nbar=0.4), displace(thermal(0.4), 0.1 + 0.2j)),
        (fock_state("tmsv", r=0.5), tmsv(0.5), fock_state("tmsv", r=0.6), tmsv(0.6)),
    ]
    for fa, ga, fb, gb in pairs:
        assert oracle_fidelity(fa, fb) == pytest.approx(gaussian_fidelity(ga, gb), abs=1e-6)


def test_oracle_matches_channel_output():
    ch = make_gaussian_channel("thermal_loss", eta=0.7, nbar=0.3)
    gauss = apply_gaussian(ch, coherent(0.6))
    fock = fock_thermal_loss(0.7, 0.3, fock_state("coherent", alpha=0.6))
    probe_g, probe_f = coherent(0.4), fock_state("coherent", alpha=0.4)
    assert oracle_fidelity(probe_f, fock) == pytest.approx(gaussian_fidelity(probe_g, gauss), abs=1e-6)


def test_cutoff_doubling_is_stable():
    a = lambda c: fock_state("displaced_thermal", alpha=0.4, nbar=0.3, cutoff=c)
    b = lambda c: fock_state("thermal", nbar=0.6, cutoff=c)
    assert oracle_fidelity(a(25), b(25)) == pytest.approx(oracle_fidelity(a(50), b(50)), abs=1e-8)


def test_oracle_rejects_mismatch():
    with pytest.raises(ValueError):
        oracle_fidelity(fock_state("vacuum", cutoff=10), fock_state("vacuum", cutoff=12))


def test_tmsv_photon_number():
    r = 0.4
    assert mean_photon_number(fock_state("tmsv", r=r), mode=1) == pytest.approx(np.sinh(r) ** 2, abs=1e-9)
    with pytest.raises(ValueError):
        mean_photon_number(fock_state("vacuum"), mode=1)


@pytest.mark.slow
def test_oracle_on_random_pairs(rng):
    for _ in range(50):
        alphas = rng.uniform(-1, 1, 2) + 1j * rng.uniform(-1, 1, 2)
        nbars = rng.uniform(0.05, 1.0, 2)
        fock = [fock_state("displaced_thermal", alpha=a, nbar=n) for a, n in zip(alphas, nbars)]
        gauss = [displace(thermal(n), a) for a, n in zip(alphas, nbars)]
        assert oracle_fidelity(*fock) == pytest.approx(gaussian_fidelity(*gauss), abs=1e-6)


def test_oracle_matches_lossy_choi_states():
    tmsv_state = fock_state("tmsv", r=0.3, cutoff=14)
    pairs = [((0.7, 0.2), (0.7, 0.5)), ((0.5, 0.1), (0.8, 0.3)), ((0.6, 0.0), (0.6, 0.4))]
    for (eta1, n1), (eta2, n2) in pairs:
        fock = [fock_thermal_loss(eta, n, tmsv_state) for eta, n in ((eta1, n1), (eta2, n2))]
        gauss = [choi_cm(make_gaussian_channel("thermal_loss", eta=eta, nbar=n), 0.3) for eta, n in ((eta1, n1), (eta2, n2))]
        assert oracle_fidelity(*fock) == pytest.approx(gaussian_fidelity(*gauss), abs=1e-6)


def test_oracle_matches_finite_resource_pairs():
    # a thermal-loss resource with eta < 1 is tmsv(r) with pure loss on its output mode,
    # here applied to mode 0 of the Fock state, so the Gaussian blocks are swapped
    family = ParamFamilyCV("thermal_loss", eta=0.6)
    nbars = (0.8, 1.0, 1.2)
    fock, gauss = [], []
    for nbar in nbars:
        res = family.resource(nbar)
        fock.append(fock_thermal_loss(0.6, 0.0, fock_state("tmsv", r=res.r, cutoff=14)))
        gauss.append(ResourceCM(res.B, res.A, res.C.T).to_state())
    for i, j in [(0, 1), (1, 2), (0, 2)]:
        assert oracle_fidelity(fock[i], fock[j]) == pytest.approx(gaussian_fidelity(gauss[i], gauss[j]), abs=1e-6)
