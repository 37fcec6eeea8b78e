"""Multipole machinery for Bessel profiles at displaced arguments.

The scalar profile psi_m evaluated at R - q (vector difference of two
transverse vectors) is expanded through the Gegenbauer addition theorem
combined with an exact binomial phase expansion.  The v = 0 truncation,
the small-argument ratio series, the first-order two-displacement
bracket, and the two-mode product expansion build on the same pieces.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Tuple

from . import specfun
from .errors import InvalidArgumentError, SingularConfigurationError
from .fields import bessel_j_any
from .specfun import SeriesResult


@dataclass(frozen=True)
class PlanarVec:
    """A transverse vector by magnitude and azimuth."""

    r: float
    phi: float

    def __post_init__(self):
        if self.r < 0.0:
            raise InvalidArgumentError("magnitude must be >= 0")

    def to_complex(self) -> complex:
        return self.r * cmath.exp(1j * self.phi)

    @staticmethod
    def from_complex(c: complex) -> "PlanarVec":
        return PlanarVec(abs(c), cmath.phase(c))


@dataclass(frozen=True)
class ExpansionTerm:
    """One (n, v, s) term of the combined displaced-profile series."""

    n: int
    v: int
    s: int
    value: complex


def default_v_max(k_perp: float, R: PlanarVec, q: PlanarVec) -> int:
    """Automatic truncation: Bessel orders decay uniformly once the order
    exceeds the argument, so k_perp * min(R, q) + 40 suffices."""
    return int(math.ceil(k_perp * min(R.r, q.r))) + 40


def gegenbauer_expand(l: int, k_perp: float, R: PlanarVec, q: PlanarVec,
                      v_max: int) -> SeriesResult:
    """Partial sum of the addition theorem for J_l(k rho) / (k rho)^l,
    rho = |R - q|:

        2^l (l-1)! sum_v (l+v) J_{l+v}(kR) J_{l+v}(kq)
                          / ((kR)^l (kq)^l) C_v^l(phi_R - phi_q).
    """
    if l < 1:
        raise InvalidArgumentError("l must be >= 1")
    if v_max < 0:
        raise InvalidArgumentError("v_max must be >= 0")
    if not (R.r > 0.0 and q.r > 0.0):
        raise InvalidArgumentError("the ratio form needs R.r > 0 and q.r > 0")
    xr = k_perp * R.r
    xq = k_perp * q.r
    dphi = R.phi - q.phi
    pref = 2.0 ** l * math.factorial(l - 1) / (xr ** l * xq ** l)
    total = 0.0
    last = 0.0
    for v in range(v_max + 1):
        last = (pref * (l + v) * specfun.bessel_j(l + v, xr)
                * specfun.bessel_j(l + v, xq)
                * specfun.gegenbauer_coeff(l, v, dphi))
        total += last
    return SeriesResult(value=total, terms_used=v_max + 1,
                        truncation_estimate=abs(last))


def phase_expand(m: int, k_perp: float, R: PlanarVec, q: PlanarVec) -> complex:
    """Exact finite binomial sum equal to e^{i m phi_rho}, where phi_rho
    is the azimuth of R - q."""
    if m < 0:
        raise InvalidArgumentError("m must be >= 0")
    rho = abs(R.to_complex() - q.to_complex())
    if rho == 0.0:
        raise SingularConfigurationError("phase undefined at rho = 0")
    total = 0.0 + 0.0j
    for n in range(m + 1):
        total += ((-1) ** n * math.comb(m, n)
                  * cmath.exp(1j * ((m - n) * R.phi + n * q.phi))
                  * (k_perp * R.r) ** (m - n) * (k_perp * q.r) ** n)
    return total / (k_perp * rho) ** m


def psi_shifted_terms(m: int, k_perp: float, R: PlanarVec, q: PlanarVec,
                      v_max: int) -> List[ExpansionTerm]:
    """Per-term breakdown of the displaced-profile series for m > 0.

    Term (n, v, s) value:

        2^m (m-1)! (m+v) J_{m+v}(kR) J_{m+v}(kq) / (kq)^m
        * G(m+s) G(m+v-s) / (s! (v-s)! G(m)^2) cos((v-2s)(phi_R - phi_q))
        * (-1)^n C(m,n) (q/R)^n e^{i(m-n)phi_R} e^{i n phi_q}

    The theorem's (l+v) weight is used; the printed (m-v) variant fails
    the direct-evaluation oracle.
    """
    if m < 1:
        raise InvalidArgumentError("m must be >= 1 for the term breakdown")
    if not (R.r > 0.0 and q.r > 0.0):
        raise InvalidArgumentError("need R.r > 0 and q.r > 0")
    xr = k_perp * R.r
    xq = k_perp * q.r
    dphi = R.phi - q.phi
    pref_m = 2.0 ** m * math.factorial(m - 1) / xq ** m
    terms: List[ExpansionTerm] = []
    for v in range(v_max + 1):
        radial = pref_m * (m + v) * specfun.bessel_j(m + v, xr) \
            * specfun.bessel_j(m + v, xq)
        # Gegenbauer coefficients c_s, built multiplicatively as in
        # specfun.gegenbauer_coeff.
        coeff = 1.0
        for k in range(v):
            coeff *= (m + k) / (k + 1)
        for s in range(v + 1):
            if s > 0:
                coeff *= (m + s - 1) * (v - s + 1) / (s * (m + v - s))
            ang = coeff * math.cos((v - 2 * s) * dphi)
            for n in range(m + 1):
                val = (radial * ang * (-1) ** n * math.comb(m, n)
                       * (q.r / R.r) ** n
                       * cmath.exp(1j * ((m - n) * R.phi + n * q.phi)))
                terms.append(ExpansionTerm(n=n, v=v, s=s, value=val))
    return terms


def psi_shifted(m: int, k_perp: float, R: PlanarVec, q: PlanarVec,
                v_max: int) -> SeriesResult:
    """Series value of psi_m at the displaced point R - q; converges to
    J_m(k rho) e^{i m phi_rho}."""
    if m < 0:
        raise InvalidArgumentError("m must be >= 0")
    if v_max < 0:
        raise InvalidArgumentError("v_max must be >= 0")
    if m == 0:
        # cosine series: J_0(k rho) = sum_v J_v(kR) J_v(kq) cos(v dphi)
        if not (R.r > 0.0 and q.r > 0.0):
            raise InvalidArgumentError("need R.r > 0 and q.r > 0")
        xr = k_perp * R.r
        xq = k_perp * q.r
        dphi = R.phi - q.phi
        total = specfun.bessel_j(0, xr) * specfun.bessel_j(0, xq)
        last = total
        for v in range(1, v_max + 1):
            last = (2.0 * specfun.bessel_j(v, xr) * specfun.bessel_j(v, xq)
                    * math.cos(v * dphi))
            total += last
        return SeriesResult(value=total, terms_used=v_max + 1,
                            truncation_estimate=abs(last))
    terms = psi_shifted_terms(m, k_perp, R, q, v_max)
    total = sum(t.value for t in terms)
    tail = sum(abs(t.value) for t in terms if t.v == v_max)
    return SeriesResult(value=total, terms_used=len(terms),
                        truncation_estimate=tail)


def psi_displaced_direct(m: int, k_perp: float, R: PlanarVec,
                         q: PlanarVec) -> complex:
    """Direct evaluation J_m(k rho) e^{i m phi_rho}, rho = R - q."""
    d = R.to_complex() - q.to_complex()
    rho = abs(d)
    phi = cmath.phase(d) if rho > 0.0 else 0.0
    return bessel_j_any(m, k_perp * rho) * cmath.exp(1j * m * phi)


def centered_cm_approx(m: int, k_perp: float, R: PlanarVec,
                       q: PlanarVec) -> complex:
    """v = 0 truncation (spatial part):

        J_m(kR) sum_n (-1)^n C(m,n) (q/R)^n e^{i(m-n)phi_R} e^{i n phi_q}.
    """
    if m < 0:
        raise InvalidArgumentError("m must be >= 0")
    if m == 0:
        return complex(specfun.bessel_j(0, k_perp * R.r))
    if R.r == 0.0:
        if q.r == 0.0:
            return 0.0 + 0.0j  # vortex: J_m(0) = 0 for m > 0
        raise SingularConfigurationError(
            "R = 0 with q > 0: the (q/R)^n factors are singular")
    jm = specfun.bessel_j(m, k_perp * R.r)
    total = 0.0 + 0.0j
    for n in range(m + 1):
        total += ((-1) ** n * math.comb(m, n) * (q.r / R.r) ** n
                  * cmath.exp(1j * ((m - n) * R.phi + n * q.phi)))
    return jm * total


def small_arg_ratio(m: int, v: int, x: float,
                    tol: float = specfun.DEFAULT_TOL) -> SeriesResult:
    """Power series for J_{m+v}(x) / x^m:

        (1/2^m) (x/2)^v sum_t (-1)^t x^{2t} / (2^{2t} t! (m+v+t)!).
    """
    if m < 0 or v < 0:
        raise InvalidArgumentError("m and v must be >= 0")
    if x < 0.0 or not math.isfinite(x):
        raise InvalidArgumentError("x must be finite and >= 0")
    pref = (0.5 ** m) * (0.5 * x) ** v
    term = pref / math.factorial(m + v)
    total = term
    for t in range(1, specfun.MAX_TERMS):
        term *= -(x * x) / (4.0 * t * (m + v + t))
        if abs(term) < tol * abs(total) + 1e-300:
            return SeriesResult(value=total, terms_used=t,
                                truncation_estimate=2.0 * abs(term))
        total += term
    raise specfun.ConvergenceError("small_arg_ratio exceeded the term cap",
                                   partial=total)


def _first_order_profile(m: int, k_perp: float, R: PlanarVec,
                         u: PlanarVec) -> complex:
    """psi_m at the displaced point R + u, accurate through O(|u|):

        [J_m(kR) - k u J_{m+1}(kR) cos(phi_R - phi_u)]
        * sum_n C(m,n) (u/R)^n e^{i(m-n)phi_R} e^{i n phi_u}.
    """
    if R.r == 0.0:
        if m == 0 and u.r == 0.0:
            return 1.0 + 0.0j
        raise SingularConfigurationError("R = 0 with displacement terms")
    xr = k_perp * R.r
    radial = (specfun.bessel_j(m, xr)
              - k_perp * u.r * specfun.bessel_j(m + 1, xr)
              * math.cos(R.phi - u.phi))
    total = 0.0 + 0.0j
    for n in range(m + 1):
        total += (math.comb(m, n) * (u.r / R.r) ** n
                  * cmath.exp(1j * ((m - n) * R.phi + n * u.phi)))
    return radial * total


def quadrupole_expand(m: int, k_perp: float, R: PlanarVec, r: PlanarVec,
                      mass_ratio_e: float, mass_ratio_N: float) -> complex:
    """First-order (in k_perp r) approximation of the two-displacement
    bracket

        a psi_m(R + a r) - b psi_m(R - b r),

    a = mu/M_e, b = mu/M_N; spatial part only.  The leading term is
    (a - b) psi_m(R), the first-order pieces carry (a^2 + b^2) times the
    gradient content (dipole k_perp*r piece plus the vortex n >= 1
    pieces)."""
    if not (0.0 < mass_ratio_e <= 1.0):
        raise InvalidArgumentError("mass_ratio_e must be in (0, 1]")
    if not (0.0 <= mass_ratio_N < 1.0):
        raise InvalidArgumentError("mass_ratio_N must be in [0, 1)")
    if m < 0:
        raise InvalidArgumentError("m must be >= 0")
    a, b = mass_ratio_e, mass_ratio_N
    ue = PlanarVec(a * r.r, r.phi)
    un = PlanarVec(b * r.r, r.phi + math.pi)  # displacement -b r
    out = a * _first_order_profile(m, k_perp, R, ue)
    if b > 0.0:
        out -= b * _first_order_profile(m, k_perp, R, un)
    elif R.r == 0.0 and not (m == 0 and r.r == 0.0):
        raise SingularConfigurationError("R = 0 with displacement terms")
    return out


def product_expand(m1: int, m2: int, k1: float, k2: float, R: PlanarVec,
                   r: PlanarVec, mass_ratio: float) -> complex:
    """Double-binomial truncation of psi_{m1} psi_{m2} at the displaced
    point R + mass_ratio * r (spatial part):

        J_{m1}(k1 R) J_{m2}(k2 R)
        sum_{n, n'} C(m1,n) C(m2,n') (u/R)^{n+n'}
        e^{i(m1+m2-n-n') phi_R} e^{i(n+n') phi_r},   u = mass_ratio * r.
    """
    if m1 < 0 or m2 < 0:
        raise InvalidArgumentError("orders must be >= 0")
    u = mass_ratio * r.r
    if R.r == 0.0:
        if u > 0.0 and (m1 > 0 or m2 > 0):
            raise SingularConfigurationError("R = 0 with n + n' >= 1 terms")
        return complex(specfun.bessel_j(m1, 0.0) * specfun.bessel_j(m2, 0.0))
    radial = specfun.bessel_j(m1, k1 * R.r) * specfun.bessel_j(m2, k2 * R.r)
    total = 0.0 + 0.0j
    for n in range(m1 + 1):
        for n2 in range(m2 + 1):
            total += (math.comb(m1, n) * math.comb(m2, n2)
                      * (u / R.r) ** (n + n2)
                      * cmath.exp(1j * ((m1 + m2 - n - n2) * R.phi
                                        + (n + n2) * r.phi)))
    return radial * total
