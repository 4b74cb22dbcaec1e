import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from transduction.channels import apply_to_wigner, dc_channel
from transduction.device import DeviceParams, EntanglementCM, entanglement_cm, tmsv
from transduction.errors import DomainError
from transduction.gaussian_core import (cat_wigner, coherent, gaussian_wigner, vacuum,
                                        wigner_overlap)
from transduction.teleport_sim import average_output
from transduction.transfer import (GkpSpec, SchemeNoiseParams, additive_sigma_dc,
                                   additive_sigma_tp, additive_sigma_tp_device, fidelity_cat,
                                   fidelity_coherent, fidelity_coherent_dc, fidelity_coherent_tp,
                                   gkp_success, squeezing_db, tp_fidelity_cat,
                                   tp_fidelity_coherent)

ZETAS = np.linspace(0.5, 1.0, 6)
REAL = dict(zeta_o=0.9, zeta_m=0.95, n_in=2.0)


class TestCoherent:
    def test_identity(self):
        assert fidelity_coherent_dc(DeviceParams(1.0), 3.0) == pytest.approx(1.0, abs=1e-15)

    def test_no_coupling_is_vacuum_overlap(self):
        # |<0|alpha>|^2 = exp(-|alpha|^2)
        assert fidelity_coherent_dc(DeviceParams(0.0, 0.7, 0.3, 1.0), 2.0) == pytest.approx(math.exp(-4.0), rel=1e-14)
        w_vac, w_coh = gaussian_wigner(vacuum(1), 10.0, 257), gaussian_wigner(coherent(2.0), 10.0, 257)
        assert wigner_overlap(w_vac, w_coh) == pytest.approx(math.exp(-4.0), abs=1e-10)

    def test_c_tenth_ideal(self):
        eta = 0.4 / 1.21
        expected = math.exp(-4.0 * (1 - math.sqrt(eta)) ** 2)
        assert fidelity_coherent_dc(DeviceParams(0.1), 2.0) == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(0.48547, abs=1e-5)
        w = gaussian_wigner(coherent(2.0), 12.0, 257)
        out = apply_to_wigner(dc_channel(DeviceParams(0.1)), w)
        assert wigner_overlap(w, out) == pytest.approx(expected, abs=1e-5)

    def test_dc_general_form_matches_ab(self):
        p = DeviceParams(0.3, **REAL)
        assert fidelity_coherent(SchemeNoiseParams.dc(p), 1.5) == pytest.approx(fidelity_coherent_dc(p, 1.5), rel=1e-13)

    def test_tp_tmsv(self):
        cm = EntanglementCM(3.0, 2 * math.sqrt(2), 3.0)
        assert fidelity_coherent_tp(cm, 1.0, 2.0) == pytest.approx(2 / (8 - 4 * math.sqrt(2)), rel=1e-14)

    def test_classical_teleportation_of_vacuum(self):
        assert fidelity_coherent_tp(EntanglementCM(1.0, 0.0, 1.0), 1.0, 0.0) == 0.5

    def test_near_epr(self):
        cm = EntanglementCM(60.0, math.sqrt(60 ** 2 - 1), 60.0)
        assert fidelity_coherent_tp(cm, 1.0, 2.0) > 0.98

    @given(alpha=st.floats(0.0, 10.0))
    def test_alpha_independent_at_unit_gain(self, alpha):
        cm = entanglement_cm(DeviceParams(0.2, **REAL))
        assert fidelity_coherent_tp(cm, 1.0, alpha) == fidelity_coherent_tp(cm, 1.0, 0.0)

    def test_tp_general_form_matches_ab(self):
        cm = entanglement_cm(DeviceParams(0.3, **REAL))
        for k in (0.4, 1.0, 1.3):
            got = fidelity_coherent(SchemeNoiseParams.tp(cm, k), 2.0)
            assert got == pytest.approx(fidelity_coherent_tp(cm, k, 2.0), rel=1e-13)

    def test_tp_quadrature(self):
        cm = EntanglementCM(3.0, 2 * math.sqrt(2), 3.0)
        w = gaussian_wigner(coherent(2.0), 14.0, 257)
        for k in (0.8, 1.0):
            out = average_output(cm, w, k)
            assert wigner_overlap(w, out) == pytest.approx(fidelity_coherent_tp(cm, k, 2.0), abs=1e-4)


class TestCat:
    def test_identity(self):
        for parity in (1, -1):
            assert fidelity_cat(SchemeNoiseParams(0.0, 1.0), 2.0, parity) == pytest.approx(1.0, abs=1e-12)

    def test_identity_symbolic(self):
        # with a = 0, b = 1 the six terms sum to 2 + 2 * parity * exp(-4 x)
        mp.mp.dps = 30
        for x in (mp.mpf("0.3"), mp.mpf(4)):
            for s in (1, -1):
                terms = 1 + mp.exp(-4 * x) + s * 2 * mp.exp(-2 * x) + s * 2 * mp.exp(-2 * x) + mp.exp(-4 * x) + 1
                n4 = 1 / (2 + 2 * s * mp.exp(-2 * x)) ** 2
                assert mp.almosteq(4 * n4 / 2 * terms, 1, 1e-25)

    @pytest.mark.parametrize("parity", [1, -1])
    def test_dc_quadrature(self, parity):
        p = DeviceParams(0.1)
        w = cat_wigner(2.0, parity, 14.0, 257)
        out = apply_to_wigner(dc_channel(p), w)
        assert wigner_overlap(w, out) == pytest.approx(fidelity_cat(SchemeNoiseParams.dc(p), 2.0, parity), abs=1e-5)

    @pytest.mark.parametrize("alpha,parity", [(1.0, 1), (1.0, -1), (2.0, 1)])
    def test_tp_quadrature(self, alpha, parity):
        cm = EntanglementCM(3.0, 2 * math.sqrt(2), 3.0)
        w = cat_wigner(alpha, parity, 14.0, 257)
        out = average_output(cm, w, 1.0)
        assert wigner_overlap(w, out) == pytest.approx(fidelity_cat(SchemeNoiseParams.tp(cm, 1.0), alpha, parity), abs=1e-4)

    def test_small_alpha_is_vacuum_fidelity(self):
        noise = SchemeNoiseParams(0.4, 0.8)
        assert fidelity_cat(noise, 1e-6, 1) == pytest.approx(fidelity_coherent(noise, 0.0), rel=1e-9)

    @given(a=st.floats(0.0, 10.0), b=st.floats(0.0, 3.0), alpha=st.floats(0.0, 5.0),
           parity=st.sampled_from([1, -1]))
    def test_in_unit_interval(self, a, b, alpha, parity):
        if parity == -1 and alpha < 1e-3:
            return
        # physical channels add at least |1 - b^2| (in these units)
        n = SchemeNoiseParams(a + abs(1 - b * b), b)
        assert 0.0 <= fidelity_cat(n, alpha, parity) <= 1 + 1e-9
        assert 0.0 <= fidelity_coherent(n, alpha) <= 1 + 1e-9

    def test_optimised_kappa_beats_unit_gain(self):
        cm = entanglement_cm(DeviceParams(0.1, **REAL))
        k, f = tp_fidelity_cat(cm, 2.0, 1)
        assert f >= fidelity_cat(SchemeNoiseParams.tp(cm, 1.0), 2.0, 1)
        ks = np.linspace(0.01, 3.0, 3001)
        assert f >= max(fidelity_cat(SchemeNoiseParams.tp(cm, x), 2.0, 1) for x in ks) - 1e-9

    def test_optimised_coherent_against_scan(self):
        cm = entanglement_cm(DeviceParams(0.9, **REAL))
        k, f = tp_fidelity_coherent(cm, 8.0)
        ks = np.linspace(0.5, 1.5, 20001)
        assert f >= max(fidelity_coherent_tp(cm, x, 8.0) for x in ks) - 1e-9


class TestAdditiveNoise:
    def test_dc_examples(self):
        assert additive_sigma_dc(DeviceParams(1.0)) == pytest.approx(0.0, abs=1e-15)
        assert additive_sigma_dc(DeviceParams(0.1, n_in=3.0)) == pytest.approx(1 - 0.4 / 1.21)
        assert additive_sigma_dc(DeviceParams(1.0, **REAL)) == pytest.approx(0.235, abs=1e-12)

    def test_dc_zero_efficiency(self):
        with pytest.raises(DomainError):
            additive_sigma_dc(DeviceParams(0.0))

    def test_tp_tmsv(self):
        C = 0.1
        s2, k = additive_sigma_tp(entanglement_cm(DeviceParams(C)))
        assert k == 1.0
        assert s2 == pytest.approx(((1 - math.sqrt(C)) / (1 + math.sqrt(C))) ** 2, rel=1e-12)
        assert s2 == pytest.approx(0.2699, abs=1e-4)

    def test_tp_no_entanglement(self):
        assert additive_sigma_tp(EntanglementCM(1.0, 0.0, 1.0)) == (1.0, 1.0)

    def test_tp_c_to_one(self):
        p = DeviceParams(1 - 1e-5, 1.0, 0.95, 2.0)
        assert additive_sigma_tp_device(p)[0] == pytest.approx(3 * 0.05 / 1.1, abs=1e-3)

    @pytest.mark.parametrize("C", [0.01, 0.1, 0.5, 0.9, 0.99])
    @pytest.mark.parametrize("zo,zm,n", [(1.0, 1.0, 0.0), (0.9, 0.95, 2.0), (0.5, 1.0, 1.0), (1.0, 0.5, 3.0)])
    def test_device_form_matches_cm_form(self, C, zo, zm, n):
        p = DeviceParams(C, zo, zm, n)
        a = additive_sigma_tp(entanglement_cm(p))
        b = additive_sigma_tp_device(p)
        assert b[0] == pytest.approx(a[0], abs=1e-9)
        assert b[1] == pytest.approx(a[1], rel=1e-9)

    @pytest.mark.parametrize("C", [1 - 1e-6, 0.1])
    def test_dominance(self, C):
        for zo in ZETAS:
            for zm in ZETAS:
                for n in (0.0, 2.0):
                    p = DeviceParams(C, zo, zm, n)
                    assert additive_sigma_tp_device(p)[0] <= additive_sigma_dc(p) + 1e-9


class TestGkp:
    def test_noiseless(self):
        assert gkp_success(0.0, GkpSpec(0.0)) == 1.0

    def test_erf_one(self):
        assert gkp_success(math.pi / 8, GkpSpec(0.0)) == pytest.approx(float(mp.erf(1) ** 2), abs=1e-15)
        assert gkp_success(math.pi / 16, GkpSpec(math.sqrt(math.pi / 32))) == pytest.approx(0.842700792949715 ** 2, abs=1e-12)
        assert 0.842700792949715 ** 2 == pytest.approx(0.7101446, abs=1e-7)

    def test_erf_reference_values(self):
        assert math.erf(1.0) == pytest.approx(0.842700792949715, abs=1e-15)
        assert math.erf(2.0) == pytest.approx(0.995322265018953, abs=1e-15)

    @given(x=st.floats(0.0, 6.0))
    def test_erf_against_mpmath(self, x):
        assert abs(math.erf(x) - float(mp.erf(x))) < 1e-12

    def test_tp_beats_dc_at_realistic_point(self):
        p = DeviceParams(0.1, **REAL)
        spec = GkpSpec(0.22)
        tp = gkp_success(additive_sigma_tp_device(p)[0], spec)
        dc = gkp_success(additive_sigma_dc(p), spec)
        assert 0 < dc < tp < 1

    def test_monotone(self):
        vals = [gkp_success(s, GkpSpec(0.22)) for s in np.linspace(0, 2, 50)]
        assert np.all(np.diff(vals) < 0)
        vals = [gkp_success(0.1, GkpSpec(s)) for s in np.linspace(0, 0.8, 50)]
        assert np.all(np.diff(vals) < 0)

    def test_negative_sigma(self):
        with pytest.raises(DomainError):
            gkp_success(-0.1, GkpSpec(0.1))
        with pytest.raises(DomainError):
            GkpSpec(-0.1)

    def test_squeezing(self):
        assert squeezing_db(GkpSpec(0.22)) == pytest.approx(10.1, abs=0.1)
        assert squeezing_db(GkpSpec(0.1)) == pytest.approx(17.0, abs=0.1)
        # the formula gives about 4.9 dB at 0.4
        assert squeezing_db(GkpSpec(0.4)) == pytest.approx(4.91, abs=0.01)

    @pytest.mark.filterwarnings("ignore:sigma_gkp")
    def test_squeezing_decreasing(self):
        vals = [squeezing_db(GkpSpec(s)) for s in np.linspace(0.05, 0.99, 40)]
        assert np.all(np.diff(vals) < 0)
        assert vals[-1] < 0

    def test_large_sigma_warns(self):
        with warnings.catch_warnings(record=True) as rec:
            warnings.simplefilter("always")
            GkpSpec(0.95)
        assert rec
