"""Independent numerical oracles.

Adaptive Gauss-Kronrod quadrature on finite intervals, two mutually
cross-checking schemes for semi-infinite oscillatory Bessel-product
integrals, and Richardson-extrapolated finite-difference operators used
to verify the closed-form fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import ConvergenceError, InvalidArgumentError, OracleInconsistencyError

DEFAULT_FINITE_TOL = 1e-12
DEFAULT_OSC_TOL = 1e-9

# 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
_XGK = (
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0,
)
_WGK = (
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
)
_WG = (
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469,
)


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    evaluations: int
    converged: bool

    def __post_init__(self):
        if not (self.abs_error_estimate >= 0.0):
            raise InvalidArgumentError("abs_error_estimate must be >= 0")


def _gauss_kronrod(f, a, b):
    """One G7/K15 panel; returns (kronrod, error_estimate)."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    fc = f(c)
    kron = _WGK[7] * fc
    gauss = _WG[3] * fc
    for i in range(7):
        x = h * _XGK[i]
        fsum = f(c - x) + f(c + x)
        kron += _WGK[i] * fsum
        if i % 2 == 1:
            gauss += _WG[i // 2] * fsum
    kron *= h
    gauss *= h
    err = abs(kron - gauss)
    # Standard QUADPACK-style sharpening of the raw difference.
    if err != 0.0:
        err = min(err, (200.0 * err) ** 1.5) if err < 1.0 else err
    return kron, err


def integrate_finite(f: Callable[[float], float], a: float, b: float,
                     tol: float = DEFAULT_FINITE_TOL,
                     max_evals: int = 200_000) -> QuadResult:
    """Adaptive bisection with an embedded G7/K15 error estimate."""
    if not (a < b):
        raise InvalidArgumentError("need a < b")
    if tol <= 0.0:
        raise InvalidArgumentError("tol must be > 0")
    value, err = _gauss_kronrod(f, a, b)
    intervals = [(err, a, b, value)]
    evals = 15
    total = value
    total_err = err
    while total_err > tol and evals < max_evals:
        intervals.sort(key=lambda it: it[0])
        worst = intervals.pop()
        _, wa, wb, wv = worst
        mid = 0.5 * (wa + wb)
        v1, e1 = _gauss_kronrod(f, wa, mid)
        v2, e2 = _gauss_kronrod(f, mid, wb)
        evals += 30
        intervals.append((e1, wa, mid, v1))
        intervals.append((e2, mid, wb, v2))
        total = sum(it[3] for it in intervals)
        total_err = sum(it[0] for it in intervals)
    if total_err > tol:
        raise ConvergenceError(
            f"integrate_finite exceeded {max_evals} evaluations "
            f"(err={total_err:.3e} > tol={tol:.3e})",
            partial=QuadResult(total, total_err, evals, False))
    return QuadResult(total, total_err, evals, True)


def _wynn_epsilon(partial: Sequence[float]):
    """Wynn epsilon acceleration of a partial-sum sequence.

    Returns (best_value, error_estimate) from the highest even column.
    """
    n = len(partial)
    cur = list(partial)
    prev = [0.0] * (n + 1)
    best = cur[-1]
    best_prev = cur[-2] if n > 1 else cur[-1]
    col = 0
    while len(cur) >= 2:
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            if d == 0.0:
                return cur[i + 1], 0.0
            nxt.append(prev[i + 1] + 1.0 / d)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0 and cur:
            best_prev, best = best, cur[-1]
    return best, abs(best - best_prev)


def _levin_u(seq, beta=1.0):
    """Levin u-transformation of a partial-sum sequence.

    Returns (best_value, error_estimate) from the most stable order.
    """
    n = len(seq)
    if n < 4:
        return seq[-1], math.inf
    num = []
    den = []
    for j in range(n - 1):
        w = (beta + j) * (seq[j + 1] - seq[j])
        if w == 0.0:
            w = 1e-300
        num.append(seq[j] / w)
        den.append(1.0 / w)
    best = seq[-1]
    best_err = math.inf
    prev = None
    k = 0
    while len(num) >= 2:
        k += 1
        new_num = []
        new_den = []
        for j in range(len(num) - 1):
            bj = beta + j
            if k == 1:
                b = bj / (bj + 1.0)
            else:
                b = bj * (bj + k - 1.0) ** (k - 2) / (bj + k) ** (k - 1)
            new_num.append(num[j + 1] - b * num[j])
            new_den.append(den[j + 1] - b * den[j])
        num, den = new_num, new_den
        if abs(den[0]) > 1e-250:
            est = num[0] / den[0]
            if prev is not None:
                err = abs(est - prev)
                if err < best_err:
                    best, best_err = est, err
            prev = est
    return best, best_err


def _filter_thetas(frequencies, scale):
    """Per-cell phase advances of the oscillation frequencies that the
    annihilation filters should remove."""
    width = math.pi / scale
    thetas = []
    for fr in (frequencies if frequencies else (scale,)):
        th = abs(fr) * width
        if th < 0.05 or th > math.pi + 1e-9:
            continue  # (near-)zero beats are algebraic, not oscillatory
        if all(abs(th - t) > 1e-3 for t in thetas):
            thetas.append(th)
    thetas.sort(reverse=True)
    return thetas


def _apply_oscillation_filters(sums, thetas, passes=2):
    """Annihilate e^{i theta j} components of a partial-sum sequence:
    the stencil (s_j - 2 cos(theta) s_{j+1} + s_{j+2}) / (2 - 2 cos(theta))
    preserves the limit and kills the oscillation at theta exactly."""
    seq = list(sums)
    for th in thetas:
        c = 2.0 * math.cos(th)
        den = 2.0 - c
        for _ in range(passes):
            if len(seq) < 3:
                return seq
            seq = [(seq[i] - c * seq[i + 1] + seq[i + 2]) / den
                   for i in range(len(seq) - 2)]
    return seq


def _panel_recursive(f, a, b, tol, depth=0):
    """One K15 panel, bisected only on estimate failure (cells are at
    most a half-period of the fastest oscillation, so this is rare)."""
    v, e = _gauss_kronrod(f, a, b)
    if e <= tol or depth >= 10:
        return v, e, 15
    m = 0.5 * (a + b)
    v1, e1, n1 = _panel_recursive(f, a, m, 0.5 * tol, depth + 1)
    v2, e2, n2 = _panel_recursive(f, m, b, 0.5 * tol, depth + 1)
    return v1 + v2, e1 + e2, n1 + n2 + 15


def _accelerate(sums, thetas, window=64):
    """Filter out the known oscillations, then Wynn-accelerate two tail
    windows (the filtered residue is a short sum of geometric
    components); their disagreement is the error estimate."""
    filt = _apply_oscillation_filters(sums, thetas)
    tail = filt[-min(len(filt), window):]
    wv, we = _wynn_epsilon(tail)
    short = filt[-min(len(filt), (window * 5) // 8):]
    wv2, _ = _wynn_epsilon(short)
    return wv, max(we, abs(wv - wv2))


def _zero_partition(f, scale, tol, frequencies=None, max_cells=288):
    """Uniform cells on the fastest oscillation half-period, with
    frequency-annihilation filters plus Levin/Wynn acceleration of the
    partial sums."""
    width = math.pi / scale
    thetas = _filter_thetas(frequencies, scale)
    sums = []
    total = 0.0
    evals = 0
    best = None
    best_err = math.inf
    cell_tol = max(tol * 1e-3, 1e-15)
    while len(sums) < max_cells:
        for _ in range(16):
            a = len(sums) * width
            v, _e, ev = _panel_recursive(f, a, a + width, cell_tol)
            total += v
            evals += ev
            sums.append(total)
        if len(sums) < 64:
            continue
        val, ierr = _accelerate(sums, thetas)
        err = ierr if best is None else max(ierr, abs(val - best))
        best, best_err = val, err
        if err < tol:
            return QuadResult(best, err, evals, True)
    return QuadResult(best if best is not None else total,
                      best_err if best is not None else math.inf,
                      evals, False)


def _eps_regularized(f, scale, tol, frequencies=None, n_cells=224):
    """Damp by exp(-eps x) on a geometric eps ladder kept inside the
    analyticity radius (the smallest beat frequency), accelerate each
    damped sum, and polynomially extrapolate eps -> 0 (Neville)."""
    width = math.pi / scale
    thetas = _filter_thetas(frequencies, scale)
    pos = [abs(x) for x in (frequencies or [scale]) if abs(x) > 1e-12]
    rho = min(pos) if pos else scale
    eps_ladder = [0.25 * rho * 2.0 ** (-j) for j in range(7)]
    values = []
    inner_err = 0.0
    evals = 0
    cell_tol = max(tol * 1e-3, 1e-15)
    for eps in eps_ladder:
        g = lambda x, e=eps: f(x) * math.exp(-e * x)
        sums = []
        total = 0.0
        for j in range(n_cells):
            a = j * width
            v, _e, ev = _panel_recursive(g, a, a + width, cell_tol)
            total += v
            evals += ev
            sums.append(total)
        val, err = _accelerate(sums, thetas)
        inner_err = max(inner_err, err)
        values.append(val)
    # Neville extrapolation to eps = 0; the error estimate combines the
    # last diagonal increment with the worst accelerated-sum estimate.
    n = len(eps_ladder)
    tab = list(values)
    diag = diag_prev = tab[0]
    for j in range(1, n):
        for i in range(n - j):
            tab[i] = tab[i] + (tab[i] - tab[i + 1]) * eps_ladder[i] / (
                eps_ladder[i + j] - eps_ladder[i])
        diag_prev, diag = diag, tab[0]
    err = 4.0 * abs(diag - diag_prev) + inner_err if n > 1 else math.inf
    converged = err < 10 * tol
    return QuadResult(tab[0], max(err, 1e-15), evals, converged)


def integrate_bessel_semiinfinite(f: Callable[[float], float],
                                  oscillation_scale: float,
                                  tol: float = DEFAULT_OSC_TOL,
                                  method: str = "zero_partition_accel",
                                  cross_check: bool = True,
                                  frequencies: Sequence[float] = None
                                  ) -> QuadResult:
    """Semi-infinite integral of an oscillatory Bessel-type integrand.

    ``oscillation_scale`` is the largest wavenumber present (the slowest
    zero spacing is pi/scale); ``frequencies`` may list every asymptotic
    oscillation frequency (e.g. the beat combinations of a Bessel
    product), which the accelerators then annihilate exactly.  ``method``
    picks the primary scheme; with ``cross_check`` both schemes run and
    must agree within 3x their combined error estimates, otherwise
    OracleInconsistencyError.
    """
    if oscillation_scale <= 0.0:
        raise InvalidArgumentError("oscillation_scale must be > 0")
    if method not in ("zero_partition_accel", "eps_regularized"):
        raise InvalidArgumentError(f"unknown method {method!r}")
    # Both schemes sample the same uniform-cell panel nodes: memoize the
    # (expensive) integrand across them.
    cache = {}

    def fc(x, _f=f, _c=cache):
        v = _c.get(x)
        if v is None:
            v = _f(x)
            _c[x] = v
        return v

    rz = _zero_partition(fc, oscillation_scale, tol, frequencies=frequencies)
    if not cross_check:
        if method == "zero_partition_accel":
            return rz
        return _eps_regularized(fc, oscillation_scale, tol,
                                frequencies=frequencies)
    re = _eps_regularized(fc, oscillation_scale, tol, frequencies=frequencies)
    combined = rz.abs_error_estimate + re.abs_error_estimate + 1e-14
    # Flag only gross disagreement (one method silently wrong), not the
    # last digit of two honest estimates: allow a small relative floor.
    floor = 1e-7 * (1.0 + abs(rz.value) + abs(re.value))
    if abs(rz.value - re.value) > 3.0 * combined + floor:
        raise OracleInconsistencyError(
            f"zero-partition ({rz.value:.6e}) and eps-regularized "
            f"({re.value:.6e}) disagree beyond 3x combined estimates "
            f"({combined:.3e})", value_a=rz.value, value_b=re.value)
    primary = rz if method == "zero_partition_accel" else re
    return QuadResult(primary.value,
                      max(primary.abs_error_estimate, abs(rz.value - re.value)),
                      rz.evaluations + re.evaluations,
                      rz.converged or re.converged)


# ---------------------------------------------------------------------------
# Finite-difference operators on Cartesian stencils.
# ---------------------------------------------------------------------------

def _central_diff(g, x, h):
    return (g(x + h) - g(x - h)) / (2.0 * h)


def _richardson_diff(g, x, h):
    d1 = _central_diff(g, x, h)
    d2 = _central_diff(g, x, 2.0 * h)
    return (4.0 * d1 - d2) / 3.0


def _second_diff(g, x, h):
    return (g(x + h) - 2.0 * g(x) + g(x - h)) / (h * h)


def _richardson_second(g, x, h):
    d1 = _second_diff(g, x, h)
    d2 = _second_diff(g, x, 2.0 * h)
    return (4.0 * d1 - d2) / 3.0


def fd_divergence(field, x, y, z, h):
    """div F at the Cartesian point (x, y, z); field returns (Fx, Fy, Fz)."""
    dx = _richardson_diff(lambda s: field(s, y, z)[0], x, h)
    dy = _richardson_diff(lambda s: field(x, s, z)[1], y, h)
    dz = _richardson_diff(lambda s: field(x, y, s)[2], z, h)
    return dx + dy + dz


def fd_curl(field, x, y, z, h):
    """curl F at (x, y, z) as a 3-tuple."""
    dFz_dy = _richardson_diff(lambda s: field(x, s, z)[2], y, h)
    dFy_dz = _richardson_diff(lambda s: field(x, y, s)[1], z, h)
    dFx_dz = _richardson_diff(lambda s: field(x, y, s)[0], z, h)
    dFz_dx = _richardson_diff(lambda s: field(s, y, z)[2], x, h)
    dFy_dx = _richardson_diff(lambda s: field(s, y, z)[1], x, h)
    dFx_dy = _richardson_diff(lambda s: field(x, s, z)[0], y, h)
    return (dFz_dy - dFy_dz, dFx_dz - dFz_dx, dFy_dx - dFx_dy)


def fd_laplacian(field, x, y, z, h):
    """Componentwise Laplacian of F at (x, y, z) as a 3-tuple."""
    out = []
    for i in range(3):
        lap = (_richardson_second(lambda s: field(s, y, z)[i], x, h)
               + _richardson_second(lambda s: field(x, s, z)[i], y, h)
               + _richardson_second(lambda s: field(x, y, s)[i], z, h))
        out.append(lap)
    return tuple(out)
