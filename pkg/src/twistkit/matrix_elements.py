"""Selection rules and transition matrix elements for Bessel-photon
emission by a hydrogen-like atom.

The selection engine does exact integer bookkeeping of the azimuthal
exponents carried by every term of the displaced-mode expansion: a
channel is allowed iff the phi_R and phi_r exponent sums both vanish.
Every emitted channel satisfies

    delta_m_R + delta_m_r + delta_spin = -m

(the photon carries total angular momentum m along z).  A brute-force
azimuthal double integral over the actual mode functions is provided as
the independent oracle for the zero/nonzero classification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from . import quadrature, specfun
from .errors import InvalidArgumentError
from .fields import ModeKind, ModeSpec, bessel_j_any, normalization_e0

# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

FREE_BESSEL = "free_bessel"
TRAPPED_HO = "trapped_ho"


@dataclass(frozen=True)
class CenterOfMassState:
    """Center-of-mass wavefunction parameters.

    Free atoms: a Bessel state J_{m_R}(k_perp_R R) e^{i k_z_R z}; trapped
    atoms: a 2-D harmonic-oscillator Laguerre-Gauss state of radial index
    n_bar and oscillator length alpha.
    """

    variant: str
    m_R: int
    k_z_R: float = 0.0
    k_perp_R: float = 0.0
    n_bar: int = 0
    alpha: float = 0.0

    def __post_init__(self):
        if self.variant == FREE_BESSEL:
            if not self.k_perp_R > 0.0:
                raise InvalidArgumentError("free states need k_perp_R > 0")
        elif self.variant == TRAPPED_HO:
            if not self.alpha > 0.0:
                raise InvalidArgumentError("trapped states need alpha > 0")
            if self.n_bar < 0:
                raise InvalidArgumentError("n_bar must be >= 0")
        else:
            raise InvalidArgumentError(f"unknown variant {self.variant!r}")

    @staticmethod
    def free(m_R: int, k_perp_R: float, k_z_R: float = 0.0):
        return CenterOfMassState(FREE_BESSEL, m_R, k_z_R=k_z_R,
                                 k_perp_R=k_perp_R)

    @staticmethod
    def trapped(m_R: int, n_bar: int, alpha: float, k_z_R: float = 0.0):
        return CenterOfMassState(TRAPPED_HO, m_R, k_z_R=k_z_R,
                                 n_bar=n_bar, alpha=alpha)


@dataclass(frozen=True)
class InternalState:
    """Internal hydrogenic state: (l_r, m_r) and a radial function handle
    normalized as int r^2 Theta(r)^2 dr = 1."""

    l_r: int
    m_r: int
    radial: Callable[[float], float]
    r_max: float = 60.0

    def __post_init__(self):
        if self.l_r < 0:
            raise InvalidArgumentError("l_r must be >= 0")
        if abs(self.m_r) > self.l_r:
            raise InvalidArgumentError("|m_r| must be <= l_r")


def hydrogen_radial_1s(a: float = 1.0) -> Callable[[float], float]:
    c = 2.0 * a ** -1.5
    return lambda r: c * math.exp(-r / a)


def hydrogen_radial_2p(a: float = 1.0) -> Callable[[float], float]:
    c = a ** -1.5 / math.sqrt(24.0)
    return lambda r: c * (r / a) * math.exp(-r / (2.0 * a))


def hydrogen_state(n: int, l: int, m_r: int = 0, a: float = 1.0) -> InternalState:
    """Built-in hydrogen states (1s and 2p ship as test defaults)."""
    if (n, l) == (1, 0):
        return InternalState(0, m_r, hydrogen_radial_1s(a), r_max=40.0 * a)
    if (n, l) == (2, 1):
        return InternalState(1, m_r, hydrogen_radial_2p(a), r_max=80.0 * a)
    raise InvalidArgumentError("built-in radial functions cover 1s and 2p only")


class TermOrder(NamedTuple):
    """Expansion indices of one multipole term."""

    n: int
    v: int
    s: int


DIPOLE = None  # dipole marker for Channel.order


@dataclass(frozen=True)
class Channel:
    """One allowed transition channel."""

    delta_m_R: int
    delta_m_r: int
    delta_spin_e: int
    mode_kind: ModeKind
    order: Optional[TermOrder]

    def __post_init__(self):
        if self.delta_spin_e not in (-1, 0, 1):
            raise InvalidArgumentError("delta_spin_e must be in {-1, 0, +1}")


@dataclass(frozen=True)
class ChannelAmplitude:
    """A channel plus its complex amplitude and factor provenance."""

    channel: Channel
    amplitude: complex
    cm_integral: complex
    rel_integral: float
    coupling: complex


@dataclass(frozen=True)
class DipoleCouplings:
    """Caller-supplied scalars entering the dipole amplitudes: the charge
    and the internal energy difference (a single real scale)."""

    q_e: float = 1.0
    energy_scale: float = 1.0


@dataclass(frozen=True)
class SpinParticle:
    g: float
    q: float
    M: float


@dataclass(frozen=True)
class CandidateComparison:
    """Oracle value vs a printed closed-form candidate."""

    oracle: complex
    oracle_error: float
    candidate: complex
    candidate_converged: bool

    @property
    def discrepancy(self) -> float:
        return abs(self.oracle - self.candidate)


# ---------------------------------------------------------------------------
# Mode components: conjugated (emission) coefficients of the brackets.
# ---------------------------------------------------------------------------

class _Component(NamedTuple):
    mu: int          # azimuthal order of the psi factor
    sigma: int       # phi_r exponent of the vector/spin factor
    coupling: complex


def _i1_components(mode_kind: ModeKind, m: int, k_ratio: float = 1.0):
    """Conjugated A* components dotted with r; k_ratio = k_perp / k_z."""
    if mode_kind is ModeKind.TM:
        return [
            _Component(m - 1, -1, 1.0),
            _Component(m + 1, +1, -1.0),
            _Component(m, 0, 2j * k_ratio),
        ]
    if mode_kind is ModeKind.TE:
        return [
            _Component(m - 1, -1, 1.0),
            _Component(m + 1, +1, 1.0),
        ]
    raise InvalidArgumentError("selection engine covers TE/TM modes")


def _i3_components(mode_kind: ModeKind, m: int, k_ratio: float = 1.0):
    """Conjugated B* components paired with spin ladder operators: the
    sigma slot carries delta_spin."""
    if mode_kind is ModeKind.TM:
        return [
            _Component(m - 1, -1, 1.0),
            _Component(m + 1, +1, 1.0),
        ]
    if mode_kind is ModeKind.TE:
        return [
            _Component(m - 1, -1, 1.0),
            _Component(m + 1, +1, -1.0),
            _Component(m, 0, 2j * k_ratio),
        ]
    raise InvalidArgumentError("selection engine covers TE/TM modes")


def _term_exponents(mu: int, order: TermOrder):
    """phi_R / phi_q exponent pairs of the conjugated psi_mu expansion
    term with indices (n, v, s), each with its sign relative to the
    |mu| = a reference weight (J_{-a} = (-1)^a J_a makes every term of
    conj(psi_{-a}) carry (-1)^a).  Returns [] if the term does not exist
    for this mu (n > |mu|, or n/s > 0 at mu = 0)."""
    n, v, s = order
    if n < 0 or v < 0 or not (0 <= s <= v):
        return []
    a = abs(mu)
    if a == 0:
        if n != 0 or s != 0:
            return []
        if v == 0:
            return [(0, 0, 1.0)]
        return [(v, -v, 1.0), (-v, v, 1.0)]
    if n > a:
        return []
    sgn = 1 if mu > 0 else -1
    parity = 1.0 if mu > 0 or a % 2 == 0 else -1.0
    base_r = -sgn * (a - n)
    base_q = -sgn * n
    w = v - 2 * s
    if w == 0:
        return [(base_r, base_q, parity)]
    return [(base_r + w, base_q - w, parity),
            (base_r - w, base_q + w, parity)]


def _enumerate_orders(max_multipole: int):
    orders = []
    for n in range(max_multipole + 1):
        for v in range(max_multipole - n + 1):
            for s in range(v + 1):
                orders.append(TermOrder(n, v, s))
    return orders


def symbolic_channels(m: int, mode_kind: ModeKind, interaction: str,
                      max_multipole: int = 0,
                      order: Optional[TermOrder] = None) -> List[Channel]:
    """Enumerate allowed channels by exact integer bookkeeping.

    ``interaction``: "dipole" (n = v = s = 0 terms of H_I1), "general"
    (H_I1 at explicit ``order`` indices, or all orders with
    n + v <= max_multipole when ``order`` is None), or "spin" (H_I3 at
    leading order; the internal spatial state is unchanged).
    """
    mode_kind = ModeKind(mode_kind)
    if interaction == "dipole":
        comps = _i1_components(mode_kind, m)
        orders = [TermOrder(0, 0, 0)]
        markers = {TermOrder(0, 0, 0): DIPOLE}
        spin = 0
    elif interaction == "general":
        comps = _i1_components(mode_kind, m)
        orders = [order] if order is not None else _enumerate_orders(max_multipole)
        markers = {}
        spin = 0
    elif interaction == "spin":
        comps = _i3_components(mode_kind, m)
        orders = [TermOrder(0, 0, 0)]
        markers = {TermOrder(0, 0, 0): DIPOLE}
        spin = None  # taken from the component sigma
    else:
        raise InvalidArgumentError(f"unknown interaction {interaction!r}")

    # Components sharing |mu| (only mu = -1/+1 at m = 0) carry identical
    # radial weights, so their contributions to one channel can cancel
    # exactly: accumulate signed couplings per (channel, |mu|) group and
    # keep a channel only if some group survives.
    sums: Dict[tuple, complex] = {}
    for o in orders:
        for comp in comps:
            for exp_r, exp_q, parity in _term_exponents(comp.mu, o):
                if interaction == "spin":
                    d_spin = comp.sigma
                    d_m_R = exp_r
                    d_m_r = exp_q
                else:
                    d_spin = 0
                    d_m_R = exp_r
                    d_m_r = comp.sigma + exp_q
                key = (d_m_R, d_m_r, d_spin, markers.get(o, o), abs(comp.mu))
                sums[key] = sums.get(key, 0.0) + parity * comp.coupling
    seen = set()
    out: List[Channel] = []
    for (d_m_R, d_m_r, d_spin, o, _a), total in sums.items():
        if abs(total) < 1e-12:
            continue
        ckey = (d_m_R, d_m_r, d_spin, o)
        if ckey in seen:
            continue
        seen.add(ckey)
        out.append(Channel(delta_m_R=d_m_R, delta_m_r=d_m_r,
                           delta_spin_e=d_spin, mode_kind=mode_kind,
                           order=o))
    out.sort(key=lambda c: (c.delta_m_R, c.delta_m_r, c.delta_spin_e,
                            c.order if c.order is not None else (-1, -1, -1)))
    return out


def azimuthal_channel_table(m: int, mode_kind: ModeKind, interaction: str,
                            order: Optional[TermOrder] = None,
                            n_phi: int = 256, kr_R: float = 1.3,
                            kr_q: float = 0.7,
                            rel_tol: float = 1e-9) -> Dict[Tuple[int, int, int], float]:
    """Brute-force azimuthal oracle.

    Builds the actual (conjugated) expansion-term integrand on an
    n_phi x n_phi trapezoid grid over (phi_R, phi_r) and extracts every
    double Fourier coefficient; the keys of the returned table are the
    (delta_m_R, delta_m_r, delta_spin) with coefficient magnitude above
    rel_tol times the largest one.
    """
    mode_kind = ModeKind(mode_kind)
    if interaction == "dipole":
        comps = _i1_components(mode_kind, m)
        o = TermOrder(0, 0, 0)
        spin_mode = False
    elif interaction == "general":
        comps = _i1_components(mode_kind, m)
        if order is None:
            raise InvalidArgumentError("the oracle needs explicit order indices")
        o = order
        spin_mode = False
    elif interaction == "spin":
        comps = _i3_components(mode_kind, m)
        o = TermOrder(0, 0, 0)
        spin_mode = True
    else:
        raise InvalidArgumentError(f"unknown interaction {interaction!r}")

    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    phi_R = phi[:, None]
    phi_r = phi[None, :]
    n, v, s = o
    grids: Dict[int, np.ndarray] = {}
    for comp in comps:
        a = abs(comp.mu)
        if a == 0:
            if n != 0 or s != 0:
                continue
            radial = (specfun.bessel_j(v, kr_R) * specfun.bessel_j(v, kr_q)
                      * (2.0 if v else 1.0))
            term = radial * np.cos(v * (phi_R - phi_r)) + 0j
        else:
            if n > a:
                continue
            sgn = 1 if comp.mu > 0 else -1
            parity = 1.0 if comp.mu > 0 or a % 2 == 0 else -1.0
            radial = (parity * specfun.bessel_j(a + v, kr_R)
                      * specfun.bessel_j(a + v, kr_q)
                      * math.comb(a, n) * (kr_q / kr_R) ** n)
            term = (radial * np.cos((v - 2 * s) * (phi_R - phi_r))
                    * np.exp(-1j * sgn * ((a - n) * phi_R + n * phi_r)))
        d_spin = comp.sigma if spin_mode else 0
        vec = 1.0 if spin_mode else np.exp(1j * comp.sigma * phi_r)
        contrib = comp.coupling * term * vec
        grids[d_spin] = grids.get(d_spin, 0) + contrib

    table: Dict[Tuple[int, int, int], float] = {}
    peak = 0.0
    raw: Dict[Tuple[int, int, int], float] = {}
    for d_spin, grid in grids.items():
        coeffs = np.fft.fft2(grid) / (n_phi * n_phi)
        mags = np.abs(coeffs)
        peak = max(peak, float(mags.max()))
        half = n_phi // 2
        for jR in range(n_phi):
            for jr in range(n_phi):
                if mags[jR, jr] > 0.0:
                    dR = jR if jR < half else jR - n_phi
                    dr = jr if jr < half else jr - n_phi
                    key = (dR, dr, d_spin)
                    raw[key] = max(raw.get(key, 0.0), float(mags[jR, jr]))
    if peak < 1e-13:
        return table  # everything cancelled: no allowed channels
    thresh = rel_tol * peak
    for key, mag in raw.items():
        if mag > thresh:
            table[key] = mag
    return table


# ---------------------------------------------------------------------------
# Center-of-mass and internal integrals
# ---------------------------------------------------------------------------

def suppression_factor(k_perp: float, alpha: float) -> float:
    """Gaussian suppression e^{-k_perp^2 alpha^2 / 4} of trapped-atom
    recoil matrix elements."""
    return math.exp(-0.25 * (k_perp * alpha) ** 2)


def _bessel_beats(*ks: float) -> List[float]:
    """Asymptotic beat frequencies of a product of Bessel factors:
    every combination sum(+-k_i)."""
    beats = {0.0}
    for k in ks:
        beats = {b + s * k for b in beats for s in (+1.0, -1.0)}
    return sorted({abs(b) for b in beats})


def triple_bessel(k_perp: float, k_perp_R: float, k_perp_Rp: float,
                  m: int, m_R: int, n: int,
                  tol: float = 1e-9) -> quadrature.QuadResult:
    """Semi-infinite triple-Bessel integral

        int_0^inf J_m(k R) R^{1-n} J_{m_R}(k^R R) J_{m_R+m-n}(k^R' R) dR

    by the dual-method oscillatory oracle.  Vanishes (transverse momentum
    conservation) whenever k^R' > k + k^R.
    """
    for k in (k_perp, k_perp_R, k_perp_Rp):
        if not k > 0.0:
            raise InvalidArgumentError("wavenumbers must be > 0")
    if n < 0:
        raise InvalidArgumentError("n must be >= 0")
    if n > m + m_R + 1:
        raise InvalidArgumentError(
            f"n = {n} > m + m_R + 1 = {m + m_R + 1}: integral not convergent")
    third = m_R + m - n

    def f(R: float) -> float:
        if R == 0.0:
            return 0.0
        return (bessel_j_any(m, k_perp * R) * R ** (1 - n)
                * bessel_j_any(m_R, k_perp_R * R)
                * bessel_j_any(third, k_perp_Rp * R))

    scale = k_perp + k_perp_R + k_perp_Rp
    return quadrature.integrate_bessel_semiinfinite(
        f, scale, tol=tol, frequencies=_bessel_beats(k_perp, k_perp_R, k_perp_Rp))


def triple_bessel_candidate(k_perp: float, k_perp_R: float, k_perp_Rp: float,
                            m: int, m_R: int, n: int,
                            max_terms: int = 4000) -> Tuple[float, bool]:
    """The printed double series for the triple-Bessel integral, evaluated
    verbatim (known to be dimensionally suspect; reported, not trusted):

        2^{-n+2} k^m (k^R)^{m_R} (k^R')^{m+m_R-2} G(3(m_R+m-n)/2 + 2)
        / (m! m_R!) * sum_{u,v} (m_R+m-n+1)_{u+v}
        / ((1+m)_u (1+m_R)_v u! v!) x^u y^v,

    x = (k/k^R')^2, y = (k^R/k^R')^2.  Returns (value, converged)."""
    x = (k_perp / k_perp_Rp) ** 2
    y = (k_perp_R / k_perp_Rp) ** 2
    c = m_R + m - n + 1
    pref = (2.0 ** (-n + 2) * k_perp ** m * k_perp_R ** m_R
            * k_perp_Rp ** (m + m_R - 2)
            * math.gamma(1.5 * (m_R + m - n) + 2.0)
            / (math.factorial(m) * math.factorial(m_R)))
    total = 0.0
    converged = False
    prev_shell = math.inf
    count = 0
    for shell in range(200):
        shell_sum = 0.0
        for u in range(shell + 1):
            w = shell - u
            term = (specfun.pochhammer(c, u + w)
                    / (specfun.pochhammer(1.0 + m, u)
                       * specfun.pochhammer(1.0 + m_R, w)
                       * math.factorial(u) * math.factorial(w))
                    * x ** u * y ** w)
            shell_sum += term
            count += 1
            if count > max_terms:
                return pref * total, False
        total += shell_sum
        if abs(shell_sum) < 1e-14 * abs(total) + 1e-300:
            converged = True
            break
        if shell > 5 and abs(shell_sum) > 4.0 * prev_shell:
            converged = False
            break
        prev_shell = abs(shell_sum) if shell_sum != 0.0 else prev_shell
    return pref * total, converged


def _ho_norm(n_bar: int, abs_m: int, alpha: float) -> float:
    # int_0^inf R |Upsilon|^2 dR = 1 for the radial Laguerre-Gauss profile
    return math.sqrt(2.0 * math.factorial(n_bar)
                     / (alpha * alpha * math.gamma(n_bar + abs_m + 1)))


def _ho_radial(state: CenterOfMassState, R: float) -> float:
    u = (R / state.alpha) ** 2
    am = abs(state.m_R)
    return (math.exp(-0.5 * u) * (R / state.alpha) ** am
            * specfun.laguerre(state.n_bar, am, u))


def axial_momentum_constraint(cm_in: CenterOfMassState, k_z: float) -> float:
    """Axial momentum conservation for free states: the final k_z^R the
    delta distribution enforces (k_z^R' = k_z^R - k_z).  Carried as a
    constraint, never discretized."""
    return cm_in.k_z_R - k_z


def icm0(cm_in: CenterOfMassState, cm_out: CenterOfMassState,
         k_perp: float, k_z: float, order: int,
         tol: float = 1e-9) -> complex:
    """Radial center-of-mass overlap I_CM^(0) against J_order(k_perp R).

    Free Bessel states: the conditionally convergent triple-Bessel radial
    integral (dual-method oracle); the axial delta is reported via
    axial_momentum_constraint, not folded into the value.  Trapped states:
    the normalized Laguerre-Gauss-Bessel overlap by finite quadrature.
    """
    if cm_in.variant != cm_out.variant:
        raise InvalidArgumentError("center-of-mass variants must match")
    if cm_in.variant == FREE_BESSEL:
        def f(R: float) -> float:
            if R == 0.0:
                return 0.0
            return (bessel_j_any(order, k_perp * R) * R
                    * bessel_j_any(cm_in.m_R, cm_in.k_perp_R * R)
                    * bessel_j_any(cm_out.m_R, cm_out.k_perp_R * R))

        scale = k_perp + cm_in.k_perp_R + cm_out.k_perp_R
        r = quadrature.integrate_bessel_semiinfinite(
            f, scale, tol=tol,
            frequencies=_bessel_beats(k_perp, cm_in.k_perp_R, cm_out.k_perp_R))
        return complex(r.value)
    if cm_in.alpha != cm_out.alpha:
        raise InvalidArgumentError("trapped states must share the trap alpha")
    alpha = cm_in.alpha
    norm = (_ho_norm(cm_in.n_bar, abs(cm_in.m_R), alpha)
            * _ho_norm(cm_out.n_bar, abs(cm_out.m_R), alpha))
    cut = alpha * (6.0 + math.sqrt(4.0 * (cm_in.n_bar + cm_out.n_bar
                                          + abs(cm_in.m_R) + abs(cm_out.m_R)) + 4.0))

    def g(R: float) -> float:
        return (R * _ho_radial(cm_in, R) * _ho_radial(cm_out, R)
                * bessel_j_any(order, k_perp * R))

    r = quadrature.integrate_finite(g, 0.0, cut, tol=max(tol * 1e-3, 1e-13))
    return complex(norm * r.value)


def ho_gauss_bessel_candidate(nu: int, lam: int, eta: int, sigma: int,
                              alpha: float, k: float) -> CandidateComparison:
    """Printed closed form for the Laguerre-Gauss-Bessel integral

        int_0^inf x^{nu+1} e^{-x^2/a^2} L_lam^{nu-sigma}(x^2/a^2)
                  L_eta^{sigma}(x^2/a^2) J_nu(k x) dx

    vs the quadrature oracle.  Only the Gaussian/Laguerre structure of
    the candidate is trustworthy; its prefactor is dimensionally off.
    """
    def f(x: float) -> float:
        u = (x / alpha) ** 2
        return (x ** (nu + 1) * math.exp(-u)
                * specfun.laguerre(lam, nu - sigma, u)
                * specfun.laguerre(eta, sigma, u)
                * bessel_j_any(nu, k * x))

    cut = alpha * (7.0 + math.sqrt(4.0 * (lam + eta + nu) + 4.0))
    r = quadrature.integrate_finite(f, 0.0, cut, tol=1e-13)
    z = 0.25 * (alpha * k) ** 2
    cand = ((-1.0) ** (lam + eta) * (2.0 / math.sqrt(alpha)) ** (-nu - 1)
            * k ** nu * math.exp(-z)
            * specfun.laguerre(eta, sigma - lam - eta, z)
            * specfun.laguerre(lam, nu - sigma + lam - eta, z))
    return CandidateComparison(oracle=r.value, oracle_error=r.abs_error_estimate,
                               candidate=cand, candidate_converged=True)


def ho_vortex_integral(n_bar: int, alpha: float, k_perp: float,
                       m: int, n: int, tol: float = 1e-12) -> float:
    """Vortex-overlap integral (decaying Gaussian; the printed growing
    exponential is unnormalizable):

        int_0^inf R^{m-2n+1} e^{-R^2/alpha^2} J_m(k R)
                  L_{n_bar}^{m-n}(R^2/alpha^2) dR.
    """
    if m < 0 or not (0 <= n <= m):
        raise InvalidArgumentError("need m >= 0 and 0 <= n <= m")
    if n_bar < 0:
        raise InvalidArgumentError("n_bar must be >= 0")
    if alpha <= 0.0:
        raise InvalidArgumentError("alpha must be > 0")
    if m - 2 * n + 1 <= -1:
        raise InvalidArgumentError("divergent exponent combination")

    def f(R: float) -> float:
        u = (R / alpha) ** 2
        return (R ** (m - 2 * n + 1) * math.exp(-u)
                * bessel_j_any(m, k_perp * R)
                * specfun.laguerre(n_bar, m - n, u))

    cut = alpha * (7.0 + math.sqrt(4.0 * (n_bar + m) + 4.0))
    return quadrature.integrate_finite(f, 0.0, cut, tol=tol).value


def ho_vortex_series(n_bar: int, alpha: float, k_perp: float,
                     m: int, n: int, tol: float = 1e-12) -> specfun.SeriesResult:
    """Closed-form series for ho_vortex_integral, rederived from the
    Bessel power series (the printed prefactor confuses n with n_bar and
    drops alpha powers; the inner sum is the printed one):

        alpha^{2(m-n+1)} (k/2)^m (k alpha / 2)^{2 n_bar} / (2 n_bar!)
        * sum_r (m + n_bar - n + r)! / ((m + n_bar + r)! r!)
                (-k^2 alpha^2 / 4)^r.

    Convergent for every k alpha (terms eventually decay factorially).
    """
    if m < 0 or not (0 <= n <= m):
        raise InvalidArgumentError("need m >= 0 and 0 <= n <= m")
    z = 0.25 * (k_perp * alpha) ** 2
    pref = (alpha ** (2 * (m - n + 1)) * (0.5 * k_perp) ** m
            * z ** n_bar / (2.0 * math.factorial(n_bar)))
    # term_r ratio: -(z) (m + n_bar - n + r + 1) / ((m + n_bar + r + 1)(r + 1))
    term = math.factorial(m + n_bar - n) / math.factorial(m + n_bar)
    total = term
    for r in range(specfun.MAX_TERMS):
        term *= -z * (m + n_bar - n + r + 1) / ((m + n_bar + r + 1) * (r + 1))
        if abs(term) < tol * abs(total) + 1e-300:
            return specfun.SeriesResult(value=pref * total, terms_used=r + 1,
                                        truncation_estimate=abs(pref * term) * 2.0)
        total += term
    raise specfun.ConvergenceError("ho_vortex_series exceeded the term cap",
                                   partial=pref * total)


def ho_vortex_candidate(n_bar: int, alpha: float, k_perp: float,
                        m: int, n: int) -> CandidateComparison:
    """Printed Eq-form candidate (verbatim prefactor) for the vortex
    integral, compared against the quadrature oracle scaled by the
    paper's (sqrt(alpha))^{n-m} definition factor."""
    z = 0.25 * (k_perp * alpha) ** 2
    pref = (k_perp ** (m + 2 * n)
            / (2.0 ** (m + 2 * n + 1) * math.factorial(n_bar)
               * math.sqrt(alpha) ** (-n_bar - 1)))
    term = math.factorial(m + n_bar - n) / math.factorial(m + n_bar)
    total = term
    converged = False
    for r in range(specfun.MAX_TERMS):
        term *= -z * (m + n_bar - n + r + 1) / ((m + n_bar + r + 1) * (r + 1))
        if abs(term) < 1e-14 * abs(total) + 1e-300:
            converged = True
            break
        total += term
    oracle = (math.sqrt(alpha) ** (n - m)
              * ho_vortex_integral(n_bar, alpha, k_perp, m, n))
    return CandidateComparison(oracle=oracle, oracle_error=1e-12,
                               candidate=pref * total,
                               candidate_converged=converged)


# ---------------------------------------------------------------------------
# Internal (relative-coordinate) integral
# ---------------------------------------------------------------------------

def radial_dipole_integral(int_in: InternalState, int_out: InternalState,
                           tol: float = 1e-12) -> float:
    """int r^3 Theta_F(r) Theta_0(r) dr by adaptive quadrature."""
    r_max = max(int_in.r_max, int_out.r_max)
    f = lambda r: r ** 3 * int_out.radial(r) * int_in.radial(r)
    return quadrature.integrate_finite(f, 0.0, r_max, tol=tol).value


def i_rel(int_in: InternalState, int_out: InternalState, j: int,
          tol: float = 1e-12) -> float:
    """Dipole internal matrix element: the printed angular selection
    factor (primed = final state; the parity-partner branch of the j = 0
    bracket carries the evidently omitted Kronecker delta) times the
    radial integral int r^3 Theta_F Theta_0 dr."""
    if j not in (-1, 0, 1):
        raise InvalidArgumentError("j must be in {-1, 0, +1}")
    l0, lf = int_in.l_r, int_out.l_r
    m0, mf = abs(int_in.m_r), abs(int_out.m_r)
    if j == 0:
        ang = 0.0
        if int_in.m_r == int_out.m_r:
            if l0 == lf + 1:
                ang += lf - m0 + 1.0
            if l0 == lf - 1:
                ang += lf - m0 - 1.0
    else:
        ang = 0.0
        if l0 == lf + 1 and m0 == mf - 1:
            ang += 1.0
        if l0 == lf - 1 and m0 == mf + 1:
            ang -= 1.0
    ang /= (2.0 * lf + 1.0)
    if ang == 0.0:
        return 0.0
    return ang * radial_dipole_integral(int_in, int_out, tol=tol)


# ---------------------------------------------------------------------------
# Amplitude assembly
# ---------------------------------------------------------------------------

def dipole_amplitude(mode: ModeSpec, cm_in: CenterOfMassState,
                     cm_out: CenterOfMassState, int_in: InternalState,
                     int_out: InternalState,
                     charges_masses: DipoleCouplings = DipoleCouplings(),
                     direction: str = "emission") -> List[ChannelAmplitude]:
    """Dipole-order H_I1 amplitudes for the channels compatible with the
    supplied state pair.  Channels violating
    delta_m_R + delta_m_r = -m (emission) are simply absent.
    """
    if mode.kind not in (ModeKind.TE, ModeKind.TM):
        raise InvalidArgumentError("dipole_amplitude covers TE/TM modes")
    if cm_in.variant != cm_out.variant:
        raise InvalidArgumentError("center-of-mass variants must match")
    if direction not in ("emission", "absorption"):
        raise InvalidArgumentError("direction must be emission or absorption")
    emit = direction == "emission"
    k_ratio = mode.k_perp / mode.k_z
    e0 = normalization_e0(mode.k_perp, mode.k_z)
    w = mode.omega()
    if mode.kind is ModeKind.TM:
        pref = e0 / (2.0 * w)
    else:
        pref = 1j * e0 / (2.0 * mode.k_z)
    # Emission matrix elements carry A*: conjugate the mode coefficients
    # and negate all azimuthal exponents.
    comps = _i1_components(mode.kind, mode.m, k_ratio)
    d_m_r = int_out.m_r - int_in.m_r
    d_m_R = cm_out.m_R - cm_in.m_R
    out: List[ChannelAmplitude] = []
    for comp in comps:
        sigma = -comp.sigma if not emit else comp.sigma
        mu_delta = -comp.mu if emit else comp.mu
        if d_m_r != sigma or d_m_R != mu_delta:
            continue
        coupling = comp.coupling if emit else comp.coupling.conjugate()
        coupling = coupling * (pref.conjugate() if emit else pref)
        coupling = coupling * (-1j) * charges_masses.q_e * charges_masses.energy_scale
        cm_val = icm0(cm_in, cm_out, mode.k_perp, mode.k_z, comp.mu)
        rel_val = i_rel(int_in, int_out, -d_m_r if emit else d_m_r)
        amp = coupling * cm_val * rel_val
        ch = Channel(delta_m_R=d_m_R, delta_m_r=d_m_r, delta_spin_e=0,
                     mode_kind=mode.kind, order=DIPOLE)
        out.append(ChannelAmplitude(channel=ch, amplitude=amp,
                                    cm_integral=cm_val, rel_integral=rel_val,
                                    coupling=coupling))
    return out


def spin_matrix_element(mode: ModeSpec, particle: SpinParticle,
                        spin_in: float, spin_out: float,
                        cm_in: CenterOfMassState, cm_out: CenterOfMassState,
                        int_in: InternalState, int_out: InternalState
                        ) -> Optional[ChannelAmplitude]:
    """H_I3 (spin) emission amplitude; None when the spin ladder or the
    azimuthal bookkeeping forbids the transition.  The internal spatial
    state must be unchanged at this order."""
    if mode.kind not in (ModeKind.TE, ModeKind.TM):
        raise InvalidArgumentError("spin_matrix_element covers TE/TM modes")
    d_spin = round(2 * (spin_out - spin_in)) / 2.0
    if d_spin not in (-1.0, 0.0, 1.0):
        return None
    if abs(spin_in) != 0.5 or abs(spin_out) != 0.5:
        raise InvalidArgumentError("spin-1/2 projections must be +/- 1/2")
    if (int_in.l_r, int_in.m_r) != (int_out.l_r, int_out.m_r):
        return None
    d_spin = int(d_spin)
    k_ratio = mode.k_perp / mode.k_z
    e0 = normalization_e0(mode.k_perp, mode.k_z)
    w = mode.omega()
    if mode.kind is ModeKind.TM:
        pref = particle.g * particle.q * w * e0 / (4.0 * particle.M * mode.k_z)
    else:
        pref = 1j * particle.g * particle.q * e0 / (4.0 * particle.M)
    comps = _i3_components(mode.kind, mode.m, k_ratio)
    d_m_R = cm_out.m_R - cm_in.m_R
    for comp in comps:
        if comp.sigma != d_spin:
            continue
        if d_m_R != -comp.mu:
            continue
        # spin ladder matrix element: S_+- flip = 1, S_z diagonal = s_z
        ladder = 1.0 if d_spin != 0 else spin_in
        coupling = comp.coupling.conjugate() * pref.conjugate() * ladder
        cm_val = icm0(cm_in, cm_out, mode.k_perp, mode.k_z, comp.mu)
        ch = Channel(delta_m_R=d_m_R, delta_m_r=0, delta_spin_e=d_spin,
                     mode_kind=mode.kind, order=DIPOLE)
        return ChannelAmplitude(channel=ch, amplitude=coupling * cm_val,
                                cm_integral=cm_val, rel_integral=1.0,
                                coupling=coupling)
    return None
