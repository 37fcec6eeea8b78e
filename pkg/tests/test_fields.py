"""Bessel-mode potentials and fields: Maxwell structure, polarization
decompositions, and validation."""

import cmath
import math

import numpy as np
import pytest

from twistkit import fields, quadrature
from twistkit.errors import InvalidArgumentError, SingularNormalizationError
from twistkit.fields import CylPoint, FieldSample, ModeKind, ModeSpec


def _a_field(mode):
    def f(x, y, z):
        s = fields.vector_potential(mode, CylPoint.from_cartesian(x, y, z))
        return (s.x, s.y, s.z)
    return f


class TestGeometry:
    def test_cylpoint_roundtrip(self):
        p = CylPoint(1.3, 0.8, -0.4)
        x, y, z = p.to_cartesian()
        q = CylPoint.from_cartesian(x, y, z)
        assert q.rho == pytest.approx(p.rho)
        assert q.phi == pytest.approx(p.phi)
        assert q.z == p.z

    def test_rejects_negative_rho(self):
        with pytest.raises(InvalidArgumentError):
            CylPoint(-0.1, 0.0, 0.0)

    def test_field_sample_norm(self):
        s = FieldSample(3.0 + 4.0j, 0.0, 0.0)
        assert s.norm() == pytest.approx(5.0)

    def test_field_sample_rejects_nonfinite(self):
        with pytest.raises(InvalidArgumentError):
            FieldSample(math.inf, 0.0, 0.0)


class TestProfile:
    def test_psi_phase_winding(self):
        v1 = fields.psi(3, 1.2, 0.9, 0.4)
        v2 = fields.psi(3, 1.2, 0.9, 0.4 + 2.0 * math.pi / 3.0)
        assert v2 == pytest.approx(v1 * cmath.exp(2j * math.pi))

    def test_psi_vanishes_on_axis_for_nonzero_m(self):
        assert fields.psi(2, 1.0, 0.0, 0.0) == 0.0
        assert fields.psi(0, 1.0, 0.0, 0.0) == 1.0

    def test_negative_order_reflection(self):
        assert fields.bessel_j_any(-3, 2.0) == pytest.approx(
            -fields.bessel_j_any(3, 2.0))


class TestModeValidation:
    def test_rejects_nonpositive_kperp(self):
        with pytest.raises(InvalidArgumentError):
            ModeSpec(ModeKind.TM, 1, 0.0, 1.0)

    def test_rejects_kz_zero_for_elementary_modes(self):
        mode = ModeSpec(ModeKind.TM, 1, 1.0, 0.0)
        with pytest.raises(SingularNormalizationError):
            fields.vector_potential(mode, CylPoint(1.0, 0.0, 0.0))

    def test_omega_is_dispersion_relation(self):
        mode = ModeSpec(ModeKind.TE, 0, 0.3, 0.4)
        assert mode.omega() == pytest.approx(0.5)


class TestFieldStructure:
    def test_te_potential_is_transverse(self):
        mode = ModeSpec(ModeKind.TE, 2, 1.1, 0.9)
        s = fields.vector_potential(mode, CylPoint(1.4, 0.3, 0.2))
        assert s.z == 0.0

    def test_tm_magnetic_field_is_transverse(self):
        mode = ModeSpec(ModeKind.TM, 2, 1.1, 0.9)
        b = fields.magnetic_field(mode, CylPoint(1.4, 0.3, 0.2))
        assert b.z == 0.0

    def test_electric_field_is_iwA(self):
        mode = ModeSpec(ModeKind.TM, 1, 0.8, 1.2)
        p = CylPoint(0.9, 1.1, -0.3, 0.2)
        a = fields.vector_potential(mode, p)
        e = fields.electric_field(mode, p)
        w = mode.omega()
        for comp in "xyz":
            assert getattr(e, comp) == pytest.approx(1j * w * getattr(a, comp))

    def test_divergence_free(self):
        rng = np.random.RandomState(5)
        for kind in (ModeKind.TE, ModeKind.TM):
            mode = ModeSpec(kind, 2, 1.3, 0.7)
            f = _a_field(mode)
            for _ in range(5):
                x, y, z = rng.uniform(-1.5, 1.5, 3)
                s = fields.vector_potential(
                    mode, CylPoint.from_cartesian(x, y, z))
                div = quadrature.fd_divergence(f, x, y, z, 1e-4)
                assert abs(div) < 1e-8 * mode.omega() * max(s.norm(), 1e-3)

    def test_curl_of_A_matches_B(self):
        rng = np.random.RandomState(6)
        for kind in (ModeKind.TE, ModeKind.TM, ModeKind.L, ModeKind.R):
            mode = ModeSpec(kind, 1, 0.9, 1.4)
            f = _a_field(mode)
            for _ in range(4):
                x, y, z = rng.uniform(-1.5, 1.5, 3)
                b = fields.magnetic_field(
                    mode, CylPoint.from_cartesian(x, y, z))
                curl = quadrature.fd_curl(f, x, y, z, 1e-4)
                diff = math.sqrt(sum(
                    abs(c - g) ** 2
                    for c, g in zip(curl, (b.x, b.y, b.z))))
                assert diff < 1e-7 * max(b.norm(), 1e-3)

    def test_helmholtz_equation(self):
        mode = ModeSpec(ModeKind.TM, 3, 1.0, 1.0)
        f = _a_field(mode)
        w = mode.omega()
        x, y, z = 0.7, -0.4, 0.3
        s = fields.vector_potential(mode, CylPoint.from_cartesian(x, y, z))
        lap = quadrature.fd_laplacian(f, x, y, z, 1e-3)
        for l, a in zip(lap, (s.x, s.y, s.z)):
            assert abs(l + w * w * a) < 1e-6 * w * w * max(s.norm(), 1e-3)


class TestPolarizationDecomposition:
    def test_lr_base_orders(self):
        dl = fields.lr_decomposition(ModeKind.L, 2, 1.0, 1.0)
        dr = fields.lr_decomposition(ModeKind.R, 2, 1.0, 1.0)
        assert dl.base_m == 3
        assert dr.base_m == 1

    def test_rejects_elementary_kinds(self):
        with pytest.raises(InvalidArgumentError):
            fields.lr_decomposition(ModeKind.TM, 1, 1.0, 1.0)

    def test_cross_overlap_closed_form(self):
        for kp in (0.3, 1.0, 2.5):
            for kz in (0.2, 1.0, 3.0):
                w2 = kp * kp + kz * kz
                want = (1.0 - kz * kz / w2) / (1.0 + kz * kz / w2)
                got = fields.lr_cross_overlap(0, kp, kz)
                assert got == pytest.approx(want, abs=1e-15)

    def test_cross_overlap_limits(self):
        assert fields.lr_cross_overlap(1, 1.0, 0.0) == pytest.approx(1.0)
        assert fields.lr_cross_overlap(1, 1e-9, 1.0) == pytest.approx(
            0.0, abs=1e-15)
