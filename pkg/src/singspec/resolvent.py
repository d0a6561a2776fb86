"""Resolvent kernels and traces, with three independent evaluation routes.

The closed forms follow from the Bessel basis solutions and their
Wronskian; the quadrature route integrates the diagonal kernel with an
analytic end correction at the singular endpoint; the spectral route sums
over computed eigenvalues with an Euler-Maclaurin tail.  The general
trace is evaluated in the single-denominator form

    Tr G = [J_{3/2-g} - rho mu^{1-2g} J_{g+1/2}] /
           (2 mu [J_{1/2-g} - rho mu^{1-2g} J_{g-1/2}])

whose denominator vanishes exactly on the spectrum, so no spurious
cancellation appears at the D- or N-extension eigenvalues.

At g = 1/2 the general closed trace carries the endpoint term
2 J_0(mu)/(pi mu) in its numerator, which the upstream derivation of the
numerator drops; spectral sums pin the corrected form (see the trace
tests for the triangulation).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import specfun, tails
from .errors import DomainError, NearEigenvalueError
from .extension import ExtensionParams, SpectralPoint, rho
from . import spectrum as spectrum_mod

_EPS_END = 1e-3  # analytic end-correction window (0, eps)


@dataclass(frozen=True)
class KernelEval:
    x: float
    y: float
    value: complex


@dataclass(frozen=True)
class TraceValue:
    point: SpectralPoint
    trace: complex
    method: str


# --------------------------------------------------------------------------
# Basis solutions

def basis_solutions(g: float, mu: complex, x: float):
    """(L_D, L_N, R) at x for the homogeneous equation at lambda = mu^2."""
    if not (0.5 < g < 1.5):
        raise DomainError("basis solutions need g in (1/2, 3/2)")
    if not (0.0 < x <= 1.0):
        raise DomainError("x must lie in (0, 1]")
    nu = g - 0.5
    mu = complex(mu)
    sq = math.sqrt(x)
    ld = sq * specfun.bessel_j(nu, mu * x)
    ln = sq * specfun.bessel_j(-nu, mu * x)
    r = specfun.bessel_j(-nu, mu) * ld - specfun.bessel_j(nu, mu) * ln
    return ld, ln, r


def wronskian_d(g: float, mu: complex) -> complex:
    """W[L_D, R] = (2 cos(pi g)/pi) J_{g-1/2}(mu), W[u,v] = u'v - uv'."""
    return 2.0 * math.cos(math.pi * g) / math.pi * specfun.bessel_j(g - 0.5, mu)


def wronskian_n(g: float, mu: complex) -> complex:
    """W[L_N, R] = (2 cos(pi g)/pi) J_{1/2-g}(mu)."""
    return 2.0 * math.cos(math.pi * g) / math.pi * specfun.bessel_j(0.5 - g, mu)


def _envelope(mu: complex) -> float:
    m = abs(mu)
    return math.sqrt(2.0 / (math.pi * max(m, 1e-10))) * math.exp(abs(mu.imag))


def _nearest_eigenvalue(ext: ExtensionParams, p: SpectralPoint):
    m = abs(p.mu)
    n_guess = max(1, round(m / math.pi))
    count = n_guess + 2
    try:
        table = spectrum_mod.eigenvalues(ext, count)
    except Exception:
        return None
    lams = table.lambdas
    return float(lams[np.argmin(np.abs(lams - p.lam))])


def _guard_eigenvalue(ext, p, den, scale):
    if abs(den) < 1e-12 * max(scale, 1e-300):
        nearest = _nearest_eigenvalue(ext, p)
        raise NearEigenvalueError(
            f"lambda={p.lam!r} is too close to the spectrum "
            f"(nearest eigenvalue ~ {nearest})", nearest=nearest)


# --------------------------------------------------------------------------
# Kernel and resolvent application

def _kernel_parts(ext: ExtensionParams, p: SpectralPoint):
    """Returns (left_function, prefactor) so G(x,y) = pref * left(x<) * R(x>)."""
    g = ext.g
    nu = g - 0.5
    mu = p.mu
    jp = specfun.bessel_j(nu, mu)
    jm = specfun.bessel_j(-nu, mu)
    cpref = math.pi / (2.0 * math.cos(math.pi * g))
    if ext.alpha == 0.0:
        _guard_eigenvalue(ext, p, jp, _envelope(mu))

        def left(x):
            return math.sqrt(x) * specfun.bessel_j(nu, mu * x)

        return left, cpref / jp
    if ext.beta == 0.0:
        _guard_eigenvalue(ext, p, jm, _envelope(mu))

        def left(x):
            return math.sqrt(x) * specfun.bessel_j(-nu, mu * x)

        return left, cpref / jm
    r = rho(ext)
    w = r * p.mu_pow(1.0 - 2.0 * g)
    den = jm - w * jp
    _guard_eigenvalue(ext, p, den, max(abs(jm), abs(w * jp)))

    def left(x):
        sq = math.sqrt(x)
        return (sq * specfun.bessel_j(-nu, mu * x)
                - w * sq * specfun.bessel_j(nu, mu * x))

    return left, cpref / den


def kernel(ext: ExtensionParams, p: SpectralPoint, x: float, y: float) -> KernelEval:
    """Resolvent kernel G(x, y; lambda); symmetric in (x, y)."""
    if ext.g == 0.5:
        return _kernel_half(ext, p, x, y)
    for v in (x, y):
        if not (0.0 < v <= 1.0):
            raise DomainError("kernel arguments must lie in (0, 1]")
    left, pref = _kernel_parts(ext, p)
    lo, hi = (x, y) if x <= y else (y, x)
    _, _, r_hi = basis_solutions(ext.g, p.mu, hi)
    return KernelEval(x=x, y=y, value=pref * left(lo) * r_hi)


def resolve(ext: ExtensionParams, p: SpectralPoint, f, x: float) -> complex:
    """(G(lambda) f)(x) = int_0^1 G(x, y; lambda) f(y) dy by quadrature."""
    if ext.g == 0.5:
        raise DomainError("resolve is implemented for g in (1/2, 3/2)")
    left, pref = _kernel_parts(ext, p)
    g = ext.g

    def rfun(y):
        _, _, r = basis_solutions(g, p.mu, y)
        return r

    lo = quad(lambda y: complex(left(y) * f(y)), 0.0, x,
              complex_func=True, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
    hi = quad(lambda y: complex(rfun(y) * f(y)), x, 1.0,
              complex_func=True, epsabs=1e-13, epsrel=1e-12, limit=200)[0]
    return pref * (rfun(x) * lo + left(x) * hi)


def _kernel_half(ext: ExtensionParams, p: SpectralPoint, x: float, y: float) -> KernelEval:
    for v in (x, y):
        if not (0.0 < v <= 1.0):
            raise DomainError("kernel arguments must lie in (0, 1]")
    mu = p.mu
    j0m = specfun.bessel_j(0.0, mu)
    y0m = specfun.bessel_y(0.0, mu)
    if ext.alpha == 0.0:
        den = (2.0 / math.pi) * j0m

        def left(t):
            return math.sqrt(t) * specfun.bessel_j(0.0, mu * t)
    else:
        th = ext.theta
        lg = cmath.log(mu)
        den = (2.0 / math.pi) * (th - lg) * j0m + y0m

        def left(t):
            return math.sqrt(t) * ((th - lg) * specfun.bessel_j(0.0, mu * t)
                                   + 0.5 * math.pi * specfun.bessel_y(0.0, mu * t))

    _guard_eigenvalue(ext, p, den, _envelope(mu))
    lo, hi = (x, y) if x <= y else (y, x)
    r_hi = math.sqrt(hi) * (y0m * specfun.bessel_j(0.0, mu * hi)
                            - j0m * specfun.bessel_y(0.0, mu * hi))
    return KernelEval(x=x, y=y, value=left(lo) * r_hi / den)


# --------------------------------------------------------------------------
# Closed-form traces

def trace_closed(ext: ExtensionParams, p: SpectralPoint) -> TraceValue:
    """Tr G(lambda) in closed Bessel form."""
    if ext.g == 0.5:
        return trace_half(ext, p)
    g = ext.g
    nu = g - 0.5
    mu = p.mu
    if ext.alpha == 0.0:
        den = specfun.bessel_j(nu, mu)
        _guard_eigenvalue(ext, p, den, _envelope(mu))
        val = specfun.bessel_j(g + 0.5, mu) / (2.0 * mu * den)
    elif ext.beta == 0.0:
        den = specfun.bessel_j(-nu, mu)
        _guard_eigenvalue(ext, p, den, _envelope(mu))
        val = specfun.bessel_j(1.5 - g, mu) / (2.0 * mu * den)
    else:
        w = rho(ext) * p.mu_pow(1.0 - 2.0 * g)
        jm = specfun.bessel_j(-nu, mu)
        jp = specfun.bessel_j(nu, mu)
        den = jm - w * jp
        _guard_eigenvalue(ext, p, den, max(abs(jm), abs(w * jp)))
        num = specfun.bessel_j(1.5 - g, mu) - w * specfun.bessel_j(g + 0.5, mu)
        val = num / (2.0 * mu * den)
    return TraceValue(point=p, trace=val, method="closed-form")


def trace_half(ext_or_theta, p: SpectralPoint) -> TraceValue:
    """Tr G(lambda) at g = 1/2 (theta family or the D-extension).

    Accepts an ExtensionParams with g = 1/2 or a float theta (None for D).
    """
    if isinstance(ext_or_theta, ExtensionParams):
        ext = ext_or_theta
        if ext.g != 0.5:
            raise DomainError("trace_half needs a g = 1/2 extension")
        theta = None if ext.alpha == 0.0 else ext.theta
    else:
        theta = ext_or_theta
        ext = ExtensionParams.make(0.5, alpha=0.0, beta=1.0) if theta is None \
            else ExtensionParams.make(0.5, theta=float(theta))
    mu = p.mu
    j0 = specfun.bessel_j(0.0, mu)
    j1 = specfun.bessel_j(1.0, mu)
    if theta is None:
        _guard_eigenvalue(ext, p, j0, _envelope(mu))
        val = j1 / (2.0 * mu * j0)
    else:
        y0 = specfun.bessel_y(0.0, mu)
        y1 = specfun.bessel_y(1.0, mu)
        t = theta - cmath.log(mu)
        den = (2.0 / math.pi) * t * j0 + y0
        _guard_eigenvalue(ext, p, den, max(abs(t * j0), abs(y0), 1e-300))
        num = (2.0 / math.pi) * t * j1 + y1 + 2.0 * j0 / (math.pi * mu)
        val = num / (2.0 * mu * den)
    return TraceValue(point=p, trace=val, method="closed-form")


# --------------------------------------------------------------------------
# Quadrature trace

def _ascending_coeffs(order: float, mu: complex, terms: int):
    """a_i of J_order(mu x) = sum_i a_i x^{order + 2i}."""
    out = []
    c = cmath.exp(order * cmath.log(mu / 2.0)) / math.gamma(order + 1.0)
    for i in range(terms):
        out.append(c)
        c = c * (-mu * mu / 4.0) / ((i + 1.0) * (order + i + 1.0))
    return out


def _pair_series(pv: float, qv: float, mu: complex, terms: int = 4):
    """(exponent, coeff) of x * J_pv(mu x) * J_qv(mu x) near x = 0."""
    a = _ascending_coeffs(pv, mu, terms)
    b = _ascending_coeffs(qv, mu, terms)
    out = []
    for j in range(terms):
        coeff = sum(a[i] * b[j - i] for i in range(j + 1))
        out.append((1.0 + pv + qv + 2.0 * j, coeff))
    return out


def _end_correction(coeff_pairs, eps: float) -> complex:
    """Integral over (0, eps) of sum c * x^e  (analytic)."""
    total = 0j
    for e, c in coeff_pairs:
        total += c * eps ** (e + 1.0) / (e + 1.0)
    return total


def trace_quadrature(ext: ExtensionParams, p: SpectralPoint,
                     eps: float = _EPS_END) -> TraceValue:
    """Tr G by adaptive quadrature of the diagonal kernel on (eps, 1).

    The window (0, eps) is integrated analytically from the small-x
    behaviour of the Bessel products (powers x^{2g}, x^{2-2g}, x and their
    x^2 companions), since the diagonal has unbounded derivatives at the
    singular endpoint.
    """
    if ext.g == 0.5:
        return _trace_quadrature_half(ext, p, eps)
    g = ext.g
    nu = g - 0.5
    mu = p.mu
    left, pref = _kernel_parts(ext, p)

    def diag(x):
        _, _, r = basis_solutions(g, p.mu, x)
        return complex(pref * left(x) * r)

    body = quad(diag, eps, 1.0, complex_func=True,
                epsabs=1e-13, epsrel=1e-11, limit=400)[0]
    # series of left(x) * R(x) * x weights in the (D, N) product basis
    jp = specfun.bessel_j(nu, mu)
    jm = specfun.bessel_j(-nu, mu)
    if ext.alpha == 0.0:
        cD, cN = 1.0 + 0j, 0j
    elif ext.beta == 0.0:
        cD, cN = 0j, 1.0 + 0j
    else:
        w = rho(ext) * p.mu_pow(1.0 - 2.0 * g)
        cD, cN = -w, 1.0 + 0j
    # left = cD * sqrt(x) J_nu + cN * sqrt(x) J_{-nu};  R = jm L_D - jp L_N
    pairs = []
    pairs += [(e, cD * jm * c) for e, c in _pair_series(nu, nu, mu)]
    pairs += [(e, (cN * jm - cD * jp) * c) for e, c in _pair_series(-nu, nu, mu)]
    pairs += [(e, -cN * jp * c) for e, c in _pair_series(-nu, -nu, mu)]
    head = pref * _end_correction(pairs, eps)
    return TraceValue(point=p, trace=body + head, method="quadrature")


def _log_end_correction(groups, eps: float) -> complex:
    """Integral over (0, eps) of sum c * x^e * log(x)^k for k = 0, 1, 2."""
    total = 0j
    le = math.log(eps)
    for e, k, c in groups:
        m1 = e + 1.0
        base = eps ** m1
        if k == 0:
            total += c * base / m1
        elif k == 1:
            total += c * base * (le / m1 - 1.0 / m1 ** 2)
        else:
            total += c * base * (le * le / m1 - 2.0 * le / m1 ** 2 + 2.0 / m1 ** 3)
    return total


def _trace_quadrature_half(ext: ExtensionParams, p: SpectralPoint,
                           eps: float) -> TraceValue:
    mu = p.mu
    theta = None if ext.alpha == 0.0 else ext.theta

    def diag(x):
        return complex(_kernel_half(ext, p, x, x).value)

    body = quad(diag, eps, 1.0, complex_func=True,
                epsabs=1e-13, epsrel=1e-11, limit=400)[0]
    # small-x structure: with c0 = log(mu/2) + gamma,
    #   J0(mu x) = sum a_i x^{2i}
    #   Y0(mu x) = (2/pi)(c0 + log x) J0(mu x) - (2/pi) T(mu x)
    terms = 4
    a = _ascending_coeffs(0.0, mu, terms)
    c0 = cmath.log(mu / 2.0) + 0.57721566490153286
    t = []  # T coefficients: T(mu x) = sum_{i>=1} H_i (-mu^2/4)^i x^{2i} / (i!)^2
    u = 1.0 + 0j
    h = 0.0
    for i in range(1, terms):
        u = u * (-mu * mu / 4.0) / (i * i)
        h += 1.0 / i
        t.append((2 * i, h * u))
    j0m = specfun.bessel_j(0.0, mu)
    y0m = specfun.bessel_y(0.0, mu)
    if theta is None:
        den = (2.0 / math.pi) * j0m
        lj, ly = 1.0 + 0j, 0j      # left = lj * sqrt(x) J0 + ly * sqrt(x) Y0
    else:
        tt = theta - cmath.log(mu)
        den = (2.0 / math.pi) * tt * j0m + y0m
        lj, ly = tt, 0.5 * math.pi + 0j
    rj, ry = y0m, -j0m             # R = sqrt(x) (rj J0 + ry Y0)
    # x * left * R = x * [ (lj J + ly Y)(rj J + ry Y) ]
    # expand Y0 = (2/pi)(c0 + log x) J0 - (2/pi) T
    # groups of (exponent, logpower, coeff)
    groups = []

    def add_poly(coeffs_x2, logk, scal):
        # coeffs_x2: list of (exp_in_x, coeff) for even powers
        for e, c in coeffs_x2:
            groups.append((1.0 + e, logk, scal * c))

    def conv(u1, u2):
        # convolution of two even-power series given as lists of (2i, c)
        d1 = dict(u1)
        d2 = dict(u2)
        out = {}
        for e1, c1 in d1.items():
            for e2, c2 in d2.items():
                if e1 + e2 < 2 * terms:
                    out[e1 + e2] = out.get(e1 + e2, 0j) + c1 * c2
        return sorted(out.items())

    jser = [(2 * i, a[i]) for i in range(terms)]
    tser = t
    two_pi = 2.0 / math.pi
    # J*J block
    jj = conv(jser, jser)
    # J*T and T*T blocks
    jt = conv(jser, tser)
    tt_ser = conv(tser, tser)
    # assemble (lj J + ly Y)(rj J + ry Y) with Y = two_pi (c0 + log x) J - two_pi T
    # coefficient of J*J: lj*rj + (lj*ry + ly*rj) * two_pi (c0 + L) + ly*ry*two_pi^2 (c0+L)^2
    # coefficient of J*T: -( (lj*ry + ly*rj) * two_pi + 2 ly*ry*two_pi^2 (c0+L) )
    # coefficient of T*T: ly*ry*two_pi^2
    cross = lj * ry + ly * rj
    add_poly(jj, 0, lj * rj + cross * two_pi * c0 + ly * ry * two_pi ** 2 * c0 * c0)
    add_poly(jj, 1, cross * two_pi + 2.0 * ly * ry * two_pi ** 2 * c0)
    add_poly(jj, 2, ly * ry * two_pi ** 2)
    add_poly(jt, 0, -(cross * two_pi + 2.0 * ly * ry * two_pi ** 2 * c0))
    add_poly(jt, 1, -2.0 * ly * ry * two_pi ** 2)
    add_poly(tt_ser, 0, ly * ry * two_pi ** 2)
    head = _log_end_correction(groups, eps) / den
    return TraceValue(point=p, trace=body + head, method="quadrature")


# --------------------------------------------------------------------------
# Spectral-sum trace

def trace_spectral(ext: ExtensionParams, p: SpectralPoint,
                   n_explicit: int = 2000) -> TraceValue:
    """Tr G as sum over eigenvalues 1/(lambda_n - lambda) plus an EM tail."""
    table = spectrum_mod.eigenvalues(ext, n_explicit)
    lam = p.lam
    lams = table.lambdas
    head = complex(np.sum(1.0 / (lams - lam)))
    if table.negative is not None:
        head += 1.0 / (table.negative - lam)
    if table.zero_mode:
        head += -1.0 / lam
    model = table.tail_model()

    def f(n):
        return 1.0 / (model.lam_of(n) - lam)

    tail = tails.em_tail(f, n_explicit + 1)
    return TraceValue(point=p, trace=head + tail, method="spectral-sum")
