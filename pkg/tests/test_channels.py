import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from transduction.channels import (AdditiveNoise, AdditiveReduction, Amplifier, Attenuator,
                                   apply_to_gaussian, apply_to_wigner, dc_channel, dc_efficiency,
                                   dc_threshold, gain_and_noise, reduce_to_additive, tp_channel,
                                   tp_noise, transmissivity)
from transduction.device import DeviceParams, EntanglementCM, entanglement_cm, tmsv
from transduction.errors import DomainError
from transduction.gaussian_core import (GaussianState, cat_wigner, coherent, gaussian_wigner,
                                        thermal, vacuum)


class TestDirectConversion:
    def test_impedance_matched(self):
        ch = dc_channel(DeviceParams(1.0))
        assert ch == Attenuator(1.0, 0.0)

    def test_realistic_c_one(self):
        ch = dc_channel(DeviceParams(1.0, 0.9, 0.95, 2.0))
        assert ch.eta == pytest.approx(0.855, abs=1e-12)
        assert (1 - ch.eta) * ch.n_th == pytest.approx(0.09, abs=1e-12)

    def test_no_coupling_is_depolarizing(self):
        ch = dc_channel(DeviceParams(0.0, 0.9, 0.95, 2.0))
        assert ch.depolarizing and ch.eta == 0.0

    def test_efficiency_symmetric_in_c(self):
        for C in (0.1, 0.3, 0.7):
            assert dc_efficiency(DeviceParams(C)) == pytest.approx(dc_efficiency(DeviceParams(1 / C)))

    def test_threshold_values(self):
        assert dc_threshold(1.0, 1.0) == pytest.approx(3 - 2 * math.sqrt(2), abs=1e-12)
        assert dc_threshold(0.9, 0.95) == pytest.approx(0.216, abs=1e-3)
        assert dc_threshold(0.7, 0.7) is None
        assert dc_threshold(0.5, 1.0) is None

    @given(z=st.floats(0.5001, 1.0))
    def test_threshold_gives_half(self, z):
        C = dc_threshold(z, 1.0)
        assert dc_efficiency(DeviceParams(C, z, 1.0)) == pytest.approx(0.5, abs=1e-9)
        assert 0 < C <= 1

    def test_threshold_bad_input(self):
        with pytest.raises(DomainError):
            dc_threshold(1.2, 1.0)


class TestTeleportationChannel:
    def test_tmsv_unit_gain(self):
        cm = tmsv(1.0)
        ch = tp_channel(cm, 1.0)
        assert isinstance(ch, AdditiveNoise)
        assert ch.n_add == pytest.approx(3 - 2 * math.sqrt(2), abs=1e-14)

    def test_attenuator_branch(self):
        cm = EntanglementCM(3.0, 2 * math.sqrt(2), 3.0)
        ch = tp_channel(cm, 0.5)
        assert isinstance(ch, Attenuator)
        assert ch.eta == 0.25
        assert ch.n_th == pytest.approx(0.5 * ((0.75 + 3 - 2 * math.sqrt(2)) / 0.75 - 1))

    def test_amplifier_branch(self):
        cm = entanglement_cm(DeviceParams(0.5))
        ch = tp_channel(cm, 2.0)
        assert isinstance(ch, Amplifier) and ch.gain == 4.0
        assert ch.n_th == pytest.approx(0.5 * (tp_noise(cm, 2.0) / 3.0 - 1.0))

    def test_added_noise_matches_reduction(self):
        cm = entanglement_cm(DeviceParams(0.3, 0.9, 0.95, 2.0))
        for k in (0.3, 0.9, 1.0, 1.4):
            g, noise = gain_and_noise(tp_channel(cm, k))
            assert g == pytest.approx(k)
            assert 2 * noise == pytest.approx(tp_noise(cm, k), rel=1e-12)

    @pytest.mark.parametrize("eps", [1e-4, 1e-5])
    def test_continuous_across_unit_gain(self, eps):
        cm = entanglement_cm(DeviceParams(0.4, 0.9, 0.95, 1.0))
        centre = gain_and_noise(tp_channel(cm, 1.0))[1]
        for k in (1 - eps, 1 + eps):
            assert gain_and_noise(tp_channel(cm, k))[1] == pytest.approx(centre, rel=1e-3)

    def test_weak_coupling_forgets_microwave(self):
        # C -> 0: no entanglement, so the output is pure noise from the optical mode
        cm = entanglement_cm(DeviceParams(1e-12))
        assert tp_noise(cm, 0.5) == pytest.approx(0.25 + 1.0, abs=1e-5)

    def test_strong_coupling_near_identity(self):
        cm = entanglement_cm(DeviceParams(1 - 1e-4))
        ch = tp_channel(cm, 1.0)
        assert ch.n_add < 1e-7

    def test_close_to_c_one_realistic_is_consistent(self):
        cm = entanglement_cm(DeviceParams(0.999, 0.9, 0.95, 2.0))
        for k in np.linspace(0.5, 2.0, 31):
            tp_channel(cm, k)

    def test_bad_kappa(self):
        with pytest.raises(DomainError):
            tp_channel(tmsv(1.0), 0.0)

    @given(C=st.floats(0.0, 0.99), zo=st.floats(0.0, 1.0), zm=st.floats(0.0, 1.0),
           n=st.floats(0.0, 5.0), k=st.floats(0.05, 3.0))
    def test_always_a_valid_channel(self, C, zo, zm, n, k):
        ch = tp_channel(entanglement_cm(DeviceParams(C, zo, zm, n)), k)
        assert transmissivity(ch) == pytest.approx(k * k if abs(k * k - 1) >= 1e-6 else 1.0)


class TestActionOnStates:
    def test_vacuum_through_quantum_limited_loss(self):
        out = apply_to_gaussian(Attenuator(0.3), vacuum(1))
        np.testing.assert_allclose(out.cov, 0.5 * np.eye(2))

    def test_thermal_loss(self):
        out = apply_to_gaussian(Attenuator(0.5, 2.0), coherent(2.0))
        np.testing.assert_allclose(out.mean, [2.0, 0.0])
        np.testing.assert_allclose(out.cov, 1.5 * np.eye(2))

    def test_amplifier(self):
        out = apply_to_gaussian(Amplifier(4.0), coherent(1.0))
        np.testing.assert_allclose(out.mean, [2 * math.sqrt(2), 0.0])
        np.testing.assert_allclose(out.cov, 3.5 * np.eye(2))

    def test_two_mode_rejected(self):
        with pytest.raises(DomainError):
            apply_to_gaussian(AdditiveNoise(0.1), vacuum(2))

    def test_identity_on_wigner(self):
        w = cat_wigner(1.5, -1, points=129)
        out = apply_to_wigner(Attenuator(1.0), w)
        np.testing.assert_array_equal(out.values, w.values)

    def test_vacuum_is_fixed_point_of_pure_loss(self):
        w = gaussian_wigner(vacuum(1), 8.0, 257)
        out = apply_to_wigner(Attenuator(0.4), w)
        np.testing.assert_allclose(out.values, w.values, atol=1e-10)

    def test_smoothed_cat(self):
        s2, alpha = 0.5, 2.0
        w = cat_wigner(alpha, +1, 14.0, 257)
        out = apply_to_wigner(AdditiveNoise(s2), w)
        Q, P = np.meshgrid(w.axis, w.axis, indexing="ij")
        b = 1 + 2 * s2
        q0, k = math.sqrt(2) * alpha, 2 * math.sqrt(2) * alpha
        lobes = (np.exp(-((Q - q0) ** 2 + P ** 2) / b) + np.exp(-((Q + q0) ** 2 + P ** 2) / b)) / b
        fringe = 2 * np.exp(-(Q * Q + P * P) / b) / b * np.cos(k * P / b) * math.exp(-k * k * s2 / (2 * b))
        n2 = 1 / (2 + 2 * math.exp(-2 * alpha ** 2))
        np.testing.assert_allclose(out.values, n2 / math.pi * (lobes + fringe), atol=1e-8)

    @pytest.mark.parametrize("ch", [Attenuator(0.6, 1.0), Amplifier(1.7, 0.5), AdditiveNoise(0.3)])
    def test_gaussian_and_wigner_agree(self, ch):
        s = GaussianState(np.array([1.0, -0.5]), np.array([[0.8, 0.1], [0.1, 0.6]]))
        w = gaussian_wigner(s, 12.0, 257)
        ref = gaussian_wigner(apply_to_gaussian(ch, s), 12.0, 257)
        np.testing.assert_allclose(apply_to_wigner(ch, w).values, ref.values, atol=1e-9)

    def test_depolarizing_outputs_thermal(self):
        w = gaussian_wigner(coherent(1.0), 8.0, 129)
        out = apply_to_wigner(Attenuator(0.0, 1.0, depolarizing=True), w)
        np.testing.assert_allclose(out.values, gaussian_wigner(thermal(1.0), 8.0, 129).values)

    def test_kernel_narrower_than_grid_rejected(self):
        w = gaussian_wigner(vacuum(1), 8.0, 65)
        with pytest.raises(DomainError):
            apply_to_wigner(AdditiveNoise(1e-4), w)


class TestReduction:
    def test_attenuator(self):
        r = reduce_to_additive(Attenuator(0.5, 1.0))
        assert r == AdditiveReduction(2.0, 1.0, 1.0)

    def test_pure_loss(self):
        assert reduce_to_additive(Attenuator(0.8)).sigma2 == pytest.approx(0.2)

    def test_amplifier(self):
        r = reduce_to_additive(Amplifier(2.0, 1.0))
        assert (r.pre_gain, r.post_loss, r.sigma2) == (1.0, 0.5, 1.0)

    def test_additive(self):
        assert reduce_to_additive(AdditiveNoise(0.3)) == AdditiveReduction(1.0, 1.0, 0.3)

    def test_depolarizing(self):
        with pytest.raises(DomainError):
            reduce_to_additive(Attenuator(0.0, depolarizing=True))

    @pytest.mark.parametrize("ch", [Attenuator(0.3, 2.0), Amplifier(2.5, 0.7)])
    def test_concatenation_is_additive(self, ch):
        # composing with the quantum-limited pre-gain / post-loss gives unit gain
        r = reduce_to_additive(ch)
        g1, n1 = gain_and_noise(Amplifier(r.pre_gain)) if r.pre_gain > 1 else (1.0, 0.0)
        g2, n2 = gain_and_noise(ch)
        g3, n3 = gain_and_noise(Attenuator(r.post_loss))
        assert g1 * g2 * g3 == pytest.approx(1.0)
        assert g3 ** 2 * (g2 ** 2 * n1 + n2) + n3 == pytest.approx(r.sigma2)

    def test_invalid_reduction(self):
        with pytest.raises(DomainError):
            AdditiveReduction(2.0, 0.5, 0.1)
