"""Transition matrix elements: selection channels, center-of-mass and
internal integrals, spin couplings, and the candidate-closed-form
comparisons."""

import math

import pytest

from twistkit import matrix_elements as me
from twistkit.errors import InvalidArgumentError
from twistkit.fields import ModeKind, ModeSpec
from twistkit.quadrature import integrate_finite

HYDROGEN_2P_1S_RADIAL = 1536.0 / (243.0 * math.sqrt(24.0))


class TestStates:
    def test_trapped_state_validation(self):
        with pytest.raises(InvalidArgumentError):
            me.CenterOfMassState.trapped(0, -1, 1.0)
        with pytest.raises(InvalidArgumentError):
            me.CenterOfMassState.trapped(0, 0, 0.0)

    def test_internal_state_validation(self):
        with pytest.raises(InvalidArgumentError):
            me.hydrogen_state(1, 0, m_r=1)
        with pytest.raises(InvalidArgumentError):
            me.hydrogen_state(3, 2)

    def test_hydrogen_radial_normalization(self):
        s1 = me.hydrogen_state(1, 0)
        p2 = me.hydrogen_state(2, 1)
        n1 = integrate_finite(lambda r: r * r * s1.radial(r) ** 2, 0, 40).value
        n2 = integrate_finite(lambda r: r * r * p2.radial(r) ** 2, 0, 80).value
        assert n1 == pytest.approx(1.0, abs=1e-12)
        assert n2 == pytest.approx(1.0, abs=1e-12)

    def test_axial_momentum_constraint(self):
        cm = me.CenterOfMassState.free(0, 1.0, 0.7)
        assert me.axial_momentum_constraint(cm, 0.3) == pytest.approx(0.4)


class TestSelectionChannels:
    def test_matches_azimuthal_oracle_spot_checks(self):
        orders = [me.TermOrder(n, v, s) for n in range(2)
                  for v in range(2 - n) for s in range(v + 1)]
        for m in (-2, 0, 1, 3):
            for kind in (ModeKind.TE, ModeKind.TM):
                cases = [("dipole", None), ("spin", None)]
                cases += [("general", o) for o in orders]
                for inter, o in cases:
                    sym = me.symbolic_channels(m, kind, inter, order=o)
                    got = {(c.delta_m_R, c.delta_m_r, c.delta_spin_e)
                           for c in sym}
                    want = set(me.azimuthal_channel_table(m, kind, inter,
                                                          order=o))
                    assert got == want, (m, kind, inter, o)

    def test_dipole_counts(self):
        assert len(me.symbolic_channels(2, ModeKind.TM, "dipole")) == 3
        assert len(me.symbolic_channels(0, ModeKind.TE, "dipole")) == 2

    def test_angular_momentum_conservation(self):
        for m in range(-4, 5):
            for kind in (ModeKind.TE, ModeKind.TM):
                for inter in ("dipole", "spin"):
                    for c in me.symbolic_channels(m, kind, inter):
                        assert (c.delta_m_R + c.delta_m_r
                                + c.delta_spin_e) == -m

    def test_exact_cancellation_at_m_zero(self):
        # The two transverse components of a TE mode at m = 0 carry equal
        # and opposite couplings into the same channel; the engine must
        # drop the cancelled channel, not report it.
        sym = me.symbolic_channels(0, ModeKind.TE, "general",
                                   order=me.TermOrder(1, 0, 0))
        got = {(c.delta_m_R, c.delta_m_r, c.delta_spin_e) for c in sym}
        want = set(me.azimuthal_channel_table(
            0, ModeKind.TE, "general", order=me.TermOrder(1, 0, 0)))
        assert got == want

    def test_multipole_enumeration_is_deduplicated(self):
        chs = me.symbolic_channels(1, ModeKind.TM, "general", max_multipole=2)
        keys = {(c.delta_m_R, c.delta_m_r, c.order) for c in chs}
        assert len(keys) == len(chs)


class TestTripleBessel:
    def test_matches_triangle_closed_form(self):
        # int_0^inf J_0(aR) J_0(bR) J_0(cR) R dR = 1 / (2 pi * area) when
        # a, b, c close a triangle with the given Heron area.
        a, b, c = 1.0, 0.7, 1.4
        s = 0.5 * (a + b + c)
        area = math.sqrt(s * (s - a) * (s - b) * (s - c))
        r = me.triple_bessel(a, b, c, 0, 0, 0)
        assert r.value == pytest.approx(1.0 / (2.0 * math.pi * area), abs=1e-8)

    def test_vanishes_outside_momentum_cone(self):
        r = me.triple_bessel(1.0, 0.5, 2.5, 1, 0, 0)
        assert abs(r.value) < 1e-7

    def test_rejects_divergent_power(self):
        with pytest.raises(InvalidArgumentError):
            me.triple_bessel(1.0, 1.0, 1.0, 0, 0, 2)

    @pytest.mark.xfail(
        reason="the bare integral is not monotonically suppressed in the "
               "axial-gradient index n; e.g. (0.9, 1.1, 1.3, m=2, m_R=1) "
               "gives |I(1)| > |I(0)|.  Suppression enters only through "
               "the multipole prefactors, not the integral itself.",
        strict=True)
    def test_monotone_suppression_in_n(self):
        vals = [abs(me.triple_bessel(0.9, 1.1, 1.3, 2, 1, n).value)
                for n in (0, 1, 2)]
        assert vals[0] >= vals[1] >= vals[2]


class TestCenterOfMassIntegrals:
    def test_trapped_diagonal_long_wavelength_limit(self):
        cm = me.CenterOfMassState.trapped(0, 0, 1.1)
        assert me.icm0(cm, cm, 1e-8, 1.0, 0) == pytest.approx(1.0, abs=1e-8)

    def test_trapped_diagonal_gaussian_suppression(self):
        alpha = 1.1
        cm = me.CenterOfMassState.trapped(0, 0, alpha)
        for k in (0.5, 1.5, 3.0):
            got = me.icm0(cm, cm, k, 1.0, 0).real
            assert got == pytest.approx(me.suppression_factor(k, alpha),
                                        abs=1e-10)

    def test_vortex_series_matches_quadrature(self):
        alpha = 1.3
        for z in (0.5, 1.0, 2.0):
            k = 2.0 * math.sqrt(z) / alpha
            for n_bar, m, n in [(0, 2, 1), (1, 3, 0), (2, 4, 2)]:
                q = me.ho_vortex_integral(n_bar, alpha, k, m, n)
                s = me.ho_vortex_series(n_bar, alpha, k, m, n).value
                assert complex(s).real == pytest.approx(q, rel=1e-9)

    def test_vortex_rejects_divergent_exponent(self):
        with pytest.raises(InvalidArgumentError):
            me.ho_vortex_integral(0, 1.0, 1.0, 2, 2)


class TestInternalIntegrals:
    def test_hydrogen_2p_1s_radial_value(self):
        got = me.radial_dipole_integral(me.hydrogen_state(2, 1),
                                        me.hydrogen_state(1, 0))
        assert got == pytest.approx(HYDROGEN_2P_1S_RADIAL, abs=1e-10)

    def test_same_parity_vanishes(self):
        p2 = me.hydrogen_state(2, 1, 0)
        for j in (-1, 0, 1):
            assert me.i_rel(p2, me.hydrogen_state(2, 1, 0), j) == 0.0

    def test_axial_component_value(self):
        got = me.i_rel(me.hydrogen_state(2, 1, 0), me.hydrogen_state(1, 0), 0)
        assert got == pytest.approx(HYDROGEN_2P_1S_RADIAL, abs=1e-10)


class TestDipoleAmplitude:
    def test_tm_axial_channel_present(self):
        mode = ModeSpec(ModeKind.TM, 0, 0.8, 1.2)
        cm = me.CenterOfMassState.trapped(1, 0, 1.0)
        amps = me.dipole_amplitude(mode, cm, cm,
                                   me.hydrogen_state(2, 1, 0),
                                   me.hydrogen_state(1, 0))
        assert len(amps) == 1
        assert amps[0].channel.delta_m_R == 0
        assert amps[0].channel.delta_m_r == 0
        assert abs(amps[0].amplitude) > 0.0

    def test_te_has_no_axial_channel(self):
        mode = ModeSpec(ModeKind.TE, 1, 0.8, 1.2)
        cm_in = me.CenterOfMassState.trapped(1, 0, 1.0)
        cm_out = me.CenterOfMassState.trapped(0, 0, 1.0)
        amps = me.dipole_amplitude(mode, cm_in, cm_out,
                                   me.hydrogen_state(2, 1, 0),
                                   me.hydrogen_state(1, 0))
        assert amps == []

    def test_conservation_violating_transition_is_absent(self):
        mode = ModeSpec(ModeKind.TM, 0, 0.8, 1.2)
        cm_in = me.CenterOfMassState.trapped(1, 0, 1.0)
        cm_bad = me.CenterOfMassState.trapped(5, 0, 1.0)
        amps = me.dipole_amplitude(mode, cm_in, cm_bad,
                                   me.hydrogen_state(2, 1, 0),
                                   me.hydrogen_state(1, 0))
        assert amps == []


class TestSpinMatrixElement:
    def setup_method(self):
        self.particle = me.SpinParticle(g=2.0, q=1.0, M=1836.0)
        self.s1 = me.hydrogen_state(1, 0)
        self.cm0 = me.CenterOfMassState.trapped(0, 0, 1.0)

    def test_tm_spin_flip_pairing(self):
        # A TM mode pairs a spin flip +1 with Delta m_R = -(m + 1).
        mode = ModeSpec(ModeKind.TM, 1, 0.8, 1.2)
        cm_out = me.CenterOfMassState.trapped(-2, 0, 1.0)
        r = me.spin_matrix_element(mode, self.particle, -0.5, 0.5,
                                   self.cm0, cm_out, self.s1, self.s1)
        assert r is not None
        assert abs(r.amplitude) > 0.0

    def test_wrong_recoil_for_flip_is_none(self):
        mode = ModeSpec(ModeKind.TM, 1, 0.8, 1.2)
        r = me.spin_matrix_element(mode, self.particle, -0.5, 0.5,
                                   self.cm0, self.cm0, self.s1, self.s1)
        assert r is None

    def test_spin_preserving_channel_is_te_only(self):
        cm_out = me.CenterOfMassState.trapped(-1, 0, 1.0)
        tm = ModeSpec(ModeKind.TM, 1, 0.8, 1.2)
        te = ModeSpec(ModeKind.TE, 1, 0.8, 1.2)
        args = (self.particle, 0.5, 0.5, self.cm0, cm_out, self.s1, self.s1)
        assert me.spin_matrix_element(tm, *args) is None
        assert me.spin_matrix_element(te, *args) is not None


class TestCandidateComparisons:
    def test_triple_series_runs_and_reports(self):
        val, converged = me.triple_bessel_candidate(1.0, 0.7, 1.4, 1, 0, 0)
        assert math.isfinite(val)
        assert isinstance(converged, bool)

    def test_gauss_bessel_candidate_reports_discrepancy(self):
        c = me.ho_gauss_bessel_candidate(2, 1, 1, 1, 1.0, 0.9)
        assert math.isfinite(c.discrepancy)
        assert c.oracle_error >= 0.0

    def test_vortex_candidate_matches_at_trivial_order(self):
        # With n_bar = 0, n = 0 both sides reduce to the same Gaussian
        # integral, so the printed form is correct there.
        c = me.ho_vortex_candidate(0, 1.0, 1.0, 1, 0)
        assert c.discrepancy < 1e-10
