"""TE/TM Bessel mode potentials and fields, plus the L/R polarized
combinations and their overlap.

Units: hbar = c = 1 throughout; k_perp and k_z carry inverse length in a
user-chosen scale and every amplitude is reported in the induced natural
units.

The closed-form magnetic fields implemented here are the analytic curl
of the vector potentials.  For the elementary modes,

    curl A_TM = (E0 w / 2 k_z) e^{i(k_z z - w t)}
                [psi_{m-1} (e_x + i e_y) + psi_{m+1} (e_x - i e_y)]
    curl A_TE = (i E0 / 2)   e^{i(k_z z - w t)}
                [psi_{m-1} (e_x + i e_y) - psi_{m+1} (e_x - i e_y)
                 - i (2 k_perp / k_z) psi_m e_z]

(derived from (d_x + i d_y) psi_m = -k_perp psi_{m+1} and
(d_x - i d_y) psi_m = +k_perp psi_{m-1}); the finite-difference curl
verification pins this form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from . import specfun
from .errors import InvalidArgumentError, SingularNormalizationError


class ModeKind(str, Enum):
    TE = "te"
    TM = "tm"
    L = "l"
    R = "r"


@dataclass(frozen=True)
class ModeSpec:
    """A Bessel photon mode: kind, azimuthal order m, and wavenumbers."""

    kind: ModeKind
    m: int
    k_perp: float
    k_z: float

    def __post_init__(self):
        if not (self.k_perp > 0.0 and math.isfinite(self.k_perp)):
            raise InvalidArgumentError("k_perp must be finite and > 0")
        if not math.isfinite(self.k_z):
            raise InvalidArgumentError("k_z must be finite")

    def omega(self) -> float:
        return math.hypot(self.k_perp, self.k_z)


@dataclass(frozen=True)
class CylPoint:
    rho: float
    phi: float
    z: float
    t: float = 0.0

    def __post_init__(self):
        if self.rho < 0.0:
            raise InvalidArgumentError("rho must be >= 0")

    def to_cartesian(self):
        return (self.rho * math.cos(self.phi),
                self.rho * math.sin(self.phi),
                self.z)

    @staticmethod
    def from_cartesian(x: float, y: float, z: float, t: float = 0.0):
        return CylPoint(math.hypot(x, y), math.atan2(y, x), z, t)


@dataclass(frozen=True)
class FieldSample:
    """Complex Cartesian components of A, E, or B at one point."""

    x: complex
    y: complex
    z: complex

    def __post_init__(self):
        for c in (self.x, self.y, self.z):
            c = complex(c)
            if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                raise InvalidArgumentError("field components must be finite")

    def scaled(self, factor: complex) -> "FieldSample":
        return FieldSample(factor * self.x, factor * self.y, factor * self.z)

    def __add__(self, other: "FieldSample") -> "FieldSample":
        return FieldSample(self.x + other.x, self.y + other.y, self.z + other.z)

    def norm(self) -> float:
        return math.sqrt(abs(self.x) ** 2 + abs(self.y) ** 2 + abs(self.z) ** 2)


@dataclass(frozen=True)
class TmTeDecomposition:
    """An L/R mode as coefficients over the TE/TM pair of order base_m."""

    c_tm: complex
    c_te: complex
    base_m: int

    def __post_init__(self):
        if abs(self.c_tm) ** 2 + abs(self.c_te) ** 2 <= 0.0:
            raise InvalidArgumentError("decomposition must be nonzero")

    def norm(self) -> float:
        return math.sqrt(abs(self.c_tm) ** 2 + abs(self.c_te) ** 2)


def bessel_j_any(order: int, x: float) -> float:
    """J_order(x) for any integer order via J_{-m} = (-1)^m J_m."""
    if order >= 0:
        return specfun.bessel_j(order, x)
    sign = -1.0 if (-order) % 2 else 1.0
    return sign * specfun.bessel_j(-order, x)


def psi(m: int, k_perp: float, rho: float, phi: float) -> complex:
    """Scalar mode profile J_m(k_perp rho) e^{i m phi}."""
    if k_perp <= 0.0:
        raise InvalidArgumentError("k_perp must be > 0")
    if rho < 0.0:
        raise InvalidArgumentError("rho must be >= 0")
    return bessel_j_any(m, k_perp * rho) * cmath.exp(1j * m * phi)


def normalization_e0(k_perp: float, k_z: float) -> float:
    """Mode normalization sqrt((k_perp / 2 pi) k_z^2 / w^2), hbar = c = 1."""
    w2 = k_perp * k_perp + k_z * k_z
    return math.sqrt((k_perp / (2.0 * math.pi)) * (k_z * k_z) / w2)


def _require_kz(mode: ModeSpec):
    if mode.k_z == 0.0:
        raise SingularNormalizationError(
            "TE/TM modes are undefined at k_z = 0 (normalization vanishes "
            "while the TM axial term diverges)")


def _phase(mode: ModeSpec, p: CylPoint) -> complex:
    return cmath.exp(1j * (mode.k_z * p.z - mode.omega() * p.t))


def _circular_sample(plus: complex, minus: complex, axial: complex) -> FieldSample:
    # plus multiplies (e_x + i e_y), minus multiplies (e_x - i e_y).
    return FieldSample(plus + minus, 1j * (plus - minus), axial)


def lr_decomposition(kind: ModeKind, m: int, k_perp: float,
                     k_z: float) -> TmTeDecomposition:
    """L/R polarized mode of index m as TE/TM coefficients of order m +/- 1."""
    if kind not in (ModeKind.L, ModeKind.R):
        raise InvalidArgumentError("kind must be L or R")
    w = math.hypot(k_perp, k_z)
    a0p = math.sqrt(1.0 + (k_z * k_z) / (w * w)) / 2.0
    if kind is ModeKind.L:
        return TmTeDecomposition(c_tm=a0p, c_te=-1j * (k_z / w) * a0p,
                                 base_m=m + 1)
    return TmTeDecomposition(c_tm=a0p, c_te=+1j * (k_z / w) * a0p,
                             base_m=m - 1)


def vector_potential(mode: ModeSpec, p: CylPoint) -> FieldSample:
    """Closed-form A of the requested mode kind, Cartesian components."""
    if mode.kind in (ModeKind.TE, ModeKind.TM):
        _require_kz(mode)
        e0 = normalization_e0(mode.k_perp, mode.k_z)
        w = mode.omega()
        g = _phase(mode, p)
        pm1 = psi(mode.m - 1, mode.k_perp, p.rho, p.phi)
        pp1 = psi(mode.m + 1, mode.k_perp, p.rho, p.phi)
        if mode.kind is ModeKind.TM:
            p0 = psi(mode.m, mode.k_perp, p.rho, p.phi)
            pref = g * e0 / (2.0 * w)
            return _circular_sample(
                pref * pm1, -pref * pp1,
                pref * (-1j) * (2.0 * mode.k_perp / mode.k_z) * p0)
        pref = g * 1j * e0 / (2.0 * mode.k_z)
        return _circular_sample(pref * pm1, pref * pp1, 0.0)
    dec = lr_decomposition(mode.kind, mode.m, mode.k_perp, mode.k_z)
    base_tm = ModeSpec(ModeKind.TM, dec.base_m, mode.k_perp, mode.k_z)
    base_te = ModeSpec(ModeKind.TE, dec.base_m, mode.k_perp, mode.k_z)
    _require_kz(base_tm)
    return (vector_potential(base_tm, p).scaled(dec.c_tm)
            + vector_potential(base_te, p).scaled(dec.c_te))


def electric_field(mode: ModeSpec, p: CylPoint) -> FieldSample:
    """E = i w A (hbar = c = 1)."""
    return vector_potential(mode, p).scaled(1j * mode.omega())


def _magnetic_field_elementary(mode: ModeSpec, p: CylPoint) -> FieldSample:
    _require_kz(mode)
    e0 = normalization_e0(mode.k_perp, mode.k_z)
    w = mode.omega()
    g = _phase(mode, p)
    pm1 = psi(mode.m - 1, mode.k_perp, p.rho, p.phi)
    pp1 = psi(mode.m + 1, mode.k_perp, p.rho, p.phi)
    if mode.kind is ModeKind.TM:
        pref = g * e0 * w / (2.0 * mode.k_z)
        return _circular_sample(pref * pm1, pref * pp1, 0.0)
    p0 = psi(mode.m, mode.k_perp, p.rho, p.phi)
    pref = g * 1j * e0 / 2.0
    return _circular_sample(
        pref * pm1, -pref * pp1,
        pref * (-1j) * (2.0 * mode.k_perp / mode.k_z) * p0)


def magnetic_field(mode: ModeSpec, p: CylPoint) -> FieldSample:
    """Closed-form B = curl A; for L/R composed via the decomposition."""
    if mode.kind in (ModeKind.TE, ModeKind.TM):
        return _magnetic_field_elementary(mode, p)
    dec = lr_decomposition(mode.kind, mode.m, mode.k_perp, mode.k_z)
    base_tm = ModeSpec(ModeKind.TM, dec.base_m, mode.k_perp, mode.k_z)
    base_te = ModeSpec(ModeKind.TE, dec.base_m, mode.k_perp, mode.k_z)
    return (_magnetic_field_elementary(base_tm, p).scaled(dec.c_tm)
            + _magnetic_field_elementary(base_te, p).scaled(dec.c_te))


def lr_cross_overlap(m: int, k_perp: float, k_z: float) -> float:
    """Normalized inner product <L_m, R_{m+2}> over the TE/TM basis,
    equal to (1 - k_z^2/w^2) / (1 + k_z^2/w^2)."""
    left = lr_decomposition(ModeKind.L, m, k_perp, k_z)
    right = lr_decomposition(ModeKind.R, m + 2, k_perp, k_z)
    assert left.base_m == right.base_m
    inner = (left.c_tm * right.c_tm.conjugate()
             + left.c_te * right.c_te.conjugate())
    return (inner / (left.norm() * right.norm())).real
