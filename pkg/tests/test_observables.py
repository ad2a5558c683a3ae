import itertools
import math

import numpy as np
import pytest

from lmgsim import units
from lmgsim.hilbert import (
    HilbertSpace,
    QuantumState,
    basis_state,
    ghz_state,
    product_plus_state,
    with_vacuum,
)
from lmgsim.model import homogeneous_device, reference_device
from lmgsim.observables import (
    apply_readout_error,
    coherence_element,
    excitation_populations,
    fringe_fit,
    ghz_fidelity,
    longitudinal_correlation,
    transverse_correlation,
    wigner,
)

SQ3 = math.sqrt(3.0)


def mixture_of_extremes(n, alpha, coh, phase=0.0):
    """alpha |g..g><g..g| + (1-alpha) |e..e><e..e| + coherence coh e^{i phase}."""
    dim = 2 ** n
    rho = np.zeros((dim, dim), dtype=complex)
    rho[0, 0] = alpha
    rho[-1, -1] = 1 - alpha
    rho[-1, 0] = coh * np.exp(1j * phase)
    rho[0, -1] = coh * np.exp(-1j * phase)
    return QuantumState.density(HilbertSpace.full_spin(n), rho)


class TestExcitationPopulations:
    def test_x_state_binomial(self):
        x = product_plus_state(HilbertSpace.full_spin(6))
        p = excitation_populations(x)
        expected = np.array([math.comb(6, k) for k in range(7)]) / 64.0
        assert np.allclose(p, expected, atol=1e-12)
        assert p[0] == pytest.approx(1 / 64)

    def test_ghz(self):
        p = excitation_populations(ghz_state(HilbertSpace.full_spin(6)))
        assert p[0] == pytest.approx(0.5)
        assert p[6] == pytest.approx(0.5)
        assert np.allclose(p[1:6], 0.0)

    def test_dicke_state(self):
        x = product_plus_state(HilbertSpace.dicke(6))
        p = excitation_populations(x)
        expected = np.array([math.comb(6, k) for k in range(7)]) / 64.0
        assert np.allclose(p, expected, atol=1e-12)

    def test_resonator_traced_out(self):
        x = with_vacuum(product_plus_state(HilbertSpace.full_spin(3)), 2)
        p = excitation_populations(x)
        assert np.allclose(p, np.array([1, 3, 3, 1]) / 8.0, atol=1e-12)

    def test_normalization(self):
        rng = np.random.default_rng(5)
        vec = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        vec /= np.linalg.norm(vec)
        p = excitation_populations(
            QuantumState.pure(HilbertSpace.full_spin(4), vec))
        assert p.sum() == pytest.approx(1.0, abs=1e-8)


class TestLongitudinalCorrelation:
    def test_x_state_zero(self):
        x = product_plus_state(HilbertSpace.full_spin(6))
        assert longitudinal_correlation(x) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(10))
    def test_extremal_mixtures_give_one(self, seed):
        rng = np.random.default_rng(seed)
        alpha = rng.uniform(0.05, 0.95)
        coh = rng.uniform(0.0, min(alpha, 1 - alpha))
        phase = rng.uniform(0, 2 * math.pi)
        rho = mixture_of_extremes(6, alpha, coh, phase)
        assert longitudinal_correlation(rho) == pytest.approx(1.0, abs=1e-10)

    def test_balanced_dicke_state_brute_force(self):
        # |3,0>: average z_j z_k over all 20 balanced 3-excitation strings
        total, count = 0.0, 0
        strings = [s for s in itertools.product([-1, 1], repeat=6)
                   if sum(s) == 0]
        assert len(strings) == 20
        pair_sum = 0.0
        for s in strings:
            for j in range(6):
                for k in range(j + 1, 6):
                    pair_sum += s[j] * s[k]
        brute = pair_sum / len(strings) / 15
        state = basis_state(HilbertSpace.dicke(6), 3)  # m = 0
        assert longitudinal_correlation(state) == pytest.approx(brute,
                                                                abs=1e-12)
        assert brute == pytest.approx(-1 / 5)

    def test_dicke_matches_full(self):
        from lmgsim.hilbert import dicke_isometry
        n = 5
        state_d = product_plus_state(HilbertSpace.dicke(n))
        v = dicke_isometry(n)
        state_f = QuantumState.pure(HilbertSpace.full_spin(n),
                                    v @ state_d.data)
        assert longitudinal_correlation(state_d) == pytest.approx(
            longitudinal_correlation(state_f), abs=1e-12)

    def test_needs_two_qubits(self):
        with pytest.raises(ValueError):
            longitudinal_correlation(product_plus_state(HilbertSpace.dicke(1)))


class TestTransverseCorrelation:
    def test_ghz_beta_zero(self):
        g = ghz_state(HilbertSpace.full_spin(6))
        assert transverse_correlation(g, 0.0) == pytest.approx(1.0, abs=1e-12)

    def test_ghz_beta_pi_over_6(self):
        g = ghz_state(HilbertSpace.full_spin(6))
        assert transverse_correlation(g, math.pi / 6) == pytest.approx(
            -1.0, abs=1e-12)

    @pytest.mark.parametrize("beta", [0.0, 0.3, 1.1])
    def test_product_state_uncorrelated(self, beta):
        x = product_plus_state(HilbertSpace.full_spin(6))
        assert transverse_correlation(x, beta) == pytest.approx(0.0,
                                                                abs=1e-12)

    def test_fringe_identity_for_single_coherence_states(self):
        # C(beta) = 2 |rho| cos(N beta - gamma) for diagonal + extremal
        # coherence states
        rng = np.random.default_rng(11)
        n = 6
        for _ in range(3):
            alpha = rng.uniform(0.2, 0.8)
            coh = rng.uniform(0.05, min(alpha, 1 - alpha))
            gamma = rng.uniform(-math.pi, math.pi)
            rho = mixture_of_extremes(n, alpha, coh, gamma)
            for beta in np.linspace(0, math.pi, 50):
                expected = 2 * coh * math.cos(n * beta - gamma)
                assert transverse_correlation(rho, beta) == pytest.approx(
                    expected, abs=1e-10)

    def test_dicke_input_via_isometry(self):
        g = ghz_state(HilbertSpace.dicke(6))
        assert transverse_correlation(g, 0.0) == pytest.approx(1.0, abs=1e-12)


class TestCoherenceElement:
    def test_ghz(self):
        assert coherence_element(ghz_state(HilbertSpace.full_spin(6))) == \
            pytest.approx(0.5)

    def test_x_state(self):
        x = product_plus_state(HilbertSpace.full_spin(6))
        assert coherence_element(x) == pytest.approx(1 / 64)

    def test_classical_mixture(self):
        rho = mixture_of_extremes(6, 0.5, 0.0)
        assert coherence_element(rho) == pytest.approx(0.0)


class TestFringeFit:
    def test_exact_recovery(self):
        betas = np.linspace(0, math.pi, 25, endpoint=False)
        vals = 0.8 * np.cos(6 * betas - 1.0)
        fit = fringe_fit(betas, vals, 6)
        assert fit.amplitude == pytest.approx(0.8, abs=1e-6)
        assert fit.phase == pytest.approx(1.0, abs=1e-6)
        assert abs(fit.offset) < 1e-9

    def test_ghz_exact_values(self):
        g = ghz_state(HilbertSpace.full_spin(6))
        betas = np.linspace(0, math.pi, 25, endpoint=False)
        vals = [transverse_correlation(g, b) for b in betas]
        fit = fringe_fit(betas, vals, 6)
        assert fit.amplitude == pytest.approx(1.0, abs=1e-10)
        assert fit.residual_rms < 1e-10
        assert fit.coherence_magnitude == pytest.approx(0.5, abs=1e-10)

    def test_noisy_recovery_within_tolerance(self):
        rng = np.random.default_rng(1234)
        betas = np.linspace(0, math.pi, 25, endpoint=False)
        vals = 0.5 * np.cos(6 * betas - 0.4) + 0.01 * rng.standard_normal(25)
        fit = fringe_fit(betas, vals, 6)
        assert fit.amplitude == pytest.approx(0.5, abs=0.02)

    def test_amplitude_nonnegative_phase_wrapped(self):
        betas = np.linspace(0, math.pi, 25, endpoint=False)
        vals = -0.3 * np.cos(6 * betas)  # amplitude -0.3 == phase pi
        fit = fringe_fit(betas, vals, 6)
        assert fit.amplitude == pytest.approx(0.3, abs=1e-9)
        assert -math.pi <= fit.phase < math.pi
        assert abs(abs(fit.phase) - math.pi) < 1e-9

    def test_errors(self):
        with pytest.raises(ValueError):
            fringe_fit([0.0] * 25, [1.0] * 25, 6)  # no span
        with pytest.raises(ValueError):
            fringe_fit([0.0, 0.1], [1.0, 1.0], 6)  # too few


class TestWigner:
    def test_maximally_mixed_unnormalized(self):
        n = 3
        dim = 2 ** n
        rho = QuantumState.density(HilbertSpace.full_spin(n),
                                   np.eye(dim) / dim)
        grid = wigner(rho, np.linspace(0, math.pi, 5),
                      np.linspace(0, 2 * math.pi, 7, endpoint=False))
        assert np.max(np.abs(grid.values - 1.0)) < 1e-10

    def test_ground_state_pole(self):
        g = basis_state(HilbertSpace.full_spin(6), 0)
        grid = wigner(g, [0.0], [0.0])
        assert grid.values[0, 0] == pytest.approx((1 + SQ3) ** 6, rel=1e-12)
        assert grid.values[0, 0] == pytest.approx(415.85, abs=0.01)

    def test_normalized_kernel_scale(self):
        g = basis_state(HilbertSpace.full_spin(6), 0)
        grid = wigner(g, [0.0], [0.0], normalized=True)
        assert grid.values[0, 0] == pytest.approx((1 + SQ3) ** 6 / 64,
                                                  rel=1e-12)

    def test_ghz_equator_harmonic(self):
        g = ghz_state(HilbertSpace.full_spin(6))
        phis = np.linspace(0, 2 * math.pi, 64, endpoint=False)
        cut = wigner(g, [math.pi / 2], phis).values[0]
        spec = np.abs(np.fft.rfft(cut - cut.mean()))
        assert np.argmax(spec[1:]) + 1 == 6  # dominant harmonic k = 6
        assert cut.min() < -1e-3  # interference goes negative

    def test_mixture_linearity(self):
        n = 3
        a = ghz_state(HilbertSpace.full_spin(n)).to_density()
        b = product_plus_state(HilbertSpace.full_spin(n)).to_density()
        mix = QuantumState.density(HilbertSpace.full_spin(n),
                                   0.3 * a.data + 0.7 * b.data)
        thetas = np.linspace(0, math.pi, 4)
        phis = np.linspace(0, 2 * math.pi, 5, endpoint=False)
        wa = wigner(a, thetas, phis).values
        wb = wigner(b, thetas, phis).values
        wm = wigner(mix, thetas, phis).values
        assert np.max(np.abs(wm - 0.3 * wa - 0.7 * wb)) < 1e-10

    def test_rotational_covariance(self):
        from lmgsim.observables import _apply_on_qubit, _wigner_rotation
        n = 4
        psi = ghz_state(HilbertSpace.full_spin(n))
        theta0, phi0 = 0.9, 2.2
        u = _wigner_rotation(theta0, phi0)
        vec = psi.data
        for j in range(n):
            vec = _apply_on_qubit(u.conj().T, vec, j, n)
        rotated = QuantumState.pure(HilbertSpace.full_spin(n), vec)
        w_rot = wigner(rotated, [0.0], [0.0]).values[0, 0]
        w_orig = wigner(psi, [theta0], [phi0]).values[0, 0]
        assert w_rot == pytest.approx(w_orig, abs=1e-8)

    def test_dicke_input(self):
        gd = ghz_state(HilbertSpace.dicke(4))
        gf = ghz_state(HilbertSpace.full_spin(4))
        td = wigner(gd, [0.4], [1.0]).values
        tf = wigner(gf, [0.4], [1.0]).values
        assert np.allclose(td, tf, atol=1e-12)

    def test_empty_grid_error(self):
        with pytest.raises(ValueError):
            wigner(ghz_state(HilbertSpace.full_spin(2)), [], [0.0])


class TestGhzFidelity:
    def test_perfect_ghz(self):
        f = ghz_fidelity(ghz_state(HilbertSpace.full_spin(6)))
        assert f.overlap == pytest.approx(1.0, abs=1e-12)
        assert f.population_coherence == pytest.approx(1.0, abs=1e-12)

    def test_x_state(self):
        f = ghz_fidelity(product_plus_state(HilbertSpace.full_spin(6)))
        assert f.population_coherence == pytest.approx(0.03125, abs=1e-12)
        assert f.overlap == pytest.approx(0.03125, abs=1e-12)

    def test_population_plus_coherence_form(self):
        # endpoint populations 0.34 / 0.32 with coherence c -> F = 0.33 + c
        for c in (0.0, 0.1, 0.25):
            rho = np.zeros((64, 64), dtype=complex)
            rho[0, 0] = 0.34
            rho[-1, -1] = 0.32
            rest = (1 - 0.34 - 0.32) / 62
            for i in range(1, 63):
                rho[i, i] = rest
            rho[-1, 0] = rho[0, -1] = c
            state = QuantumState.density(HilbertSpace.full_spin(6), rho)
            f = ghz_fidelity(state)
            assert f.population_coherence == pytest.approx(0.33 + c,
                                                           abs=1e-12)

    def test_fixed_phase(self):
        g = ghz_state(HilbertSpace.full_spin(4), phase=1.1)
        f_opt = ghz_fidelity(g)
        assert f_opt.phase == pytest.approx(1.1, abs=1e-12)
        f_wrong = ghz_fidelity(g, phase=1.1 + math.pi)
        assert f_wrong.overlap == pytest.approx(0.0, abs=1e-12)


class TestReadoutError:
    def test_identity_when_perfect(self):
        dev = homogeneous_device(3, units.from_mhz(20.0),
                                 units.from_mhz(-106.5))
        p = np.zeros(8)
        p[5] = 1.0
        assert np.allclose(apply_readout_error(p, dev), p)

    def test_single_qubit_q2(self):
        dev = reference_device().subset([1])  # F_g = 0.93, F_e = 0.83
        p = np.array([0.0, 1.0])  # prepared |e>
        out = apply_readout_error(p, dev)
        assert out[1] == pytest.approx(0.83)
        assert out[0] == pytest.approx(0.17)

    def test_uniform_fixed_point_doubly_stochastic(self):
        dev = homogeneous_device(2, units.from_mhz(20.0),
                                 units.from_mhz(-106.5))
        dev = type(dev)(
            n_qubits=2, xi=dev.xi, omega_b=dev.omega_b, omega_o=dev.omega_o,
            omega_q=dev.omega_q, t1=dev.t1, t2=dev.t2,
            f_g=np.array([0.9, 0.8]), f_e=np.array([0.9, 0.8]),
            crosstalk_b=dev.crosstalk_b)
        p = np.full(4, 0.25)
        out = apply_readout_error(p, dev)
        assert np.allclose(out, p, atol=1e-12)

    def test_normalization_preserved(self):
        rng = np.random.default_rng(7)
        dev = reference_device()
        p = rng.random(64)
        p /= p.sum()
        out = apply_readout_error(p, dev)
        assert out.sum() == pytest.approx(1.0, abs=1e-10)
        assert np.all(out >= 0)
