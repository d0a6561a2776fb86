"""Real-order Bessel functions on the four rays the spectral problem uses.

Evaluation strategy
-------------------
Ascending series up to ``|z| = SWITCH_RADIUS``, the two-sided Hankel
asymptotic expansion beyond.  On the positive real axis the ascending
series cancels catastrophically (the partial sums grow like ``e^x`` while
the result stays O(1)), so the series is summed in double-double
arithmetic once ``|z|`` exceeds the plain-double window; on the diagonal
rays the result itself grows like ``e^{|z|/sqrt 2}`` and compensated
double summation is enough; on the positive imaginary axis every term has
the same phase and nothing cancels.

Supported arguments are ``z = m * u`` with ``m > 0`` and ``u`` one of
``1, e^{i pi/4}, i, e^{-i pi/4}``; orders are limited to ``|nu| <= 5/2``.
"""

from __future__ import annotations

import cmath
import math
from contextvars import ContextVar
from dataclasses import dataclass
from enum import Enum

from . import _ddouble as dd
from .errors import ConvergenceError, DomainError

SWITCH_RADIUS = 20.0
MAX_ORDER = 2.5
_DD_WINDOW_START = 6.0  # real-axis magnitude above which double-double kicks in
_MAX_HANKEL_TERMS = 45
_EULER = 0.57721566490153286060651209008240243

_precision_mode: ContextVar[str] = ContextVar("singspec_precision", default="double")


def set_precision(mode: str) -> None:
    """Select 'double' (default) or 'extended' series summation."""
    if mode not in ("double", "extended"):
        raise DomainError(f"unknown precision mode {mode!r}")
    _precision_mode.set(mode)


def get_precision() -> str:
    return _precision_mode.get()


class Ray(Enum):
    POSITIVE_REAL = 0.0
    UPPER_DIAGONAL = math.pi / 4
    POSITIVE_IMAGINARY = math.pi / 2
    LOWER_DIAGONAL = -math.pi / 4

    @property
    def unit(self) -> complex:
        return cmath.exp(1j * self.value)

    @property
    def sigma(self) -> int:
        """Half-plane sign of Im z on this ray (0 on the real axis)."""
        if self is Ray.POSITIVE_REAL:
            return 0
        return 1 if self.value > 0 else -1


@dataclass(frozen=True)
class RayPoint:
    """A point ``magnitude * exp(i * ray angle)`` on a supported ray."""

    ray: Ray
    magnitude: float

    def __post_init__(self):
        if not (self.magnitude >= 0.0 and math.isfinite(self.magnitude)):
            raise DomainError("ray magnitude must be finite and >= 0")

    @property
    def value(self) -> complex:
        return self.magnitude * self.ray.unit


_RAY_TOL = 1e-9


def classify_ray(z) -> RayPoint:
    """Snap a complex number to a supported ray, or raise DomainError."""
    if isinstance(z, RayPoint):
        return z
    z = complex(z)
    if z == 0:
        return RayPoint(Ray.POSITIVE_REAL, 0.0)
    if z.imag == 0.0:
        if z.real < 0:
            raise DomainError("negative real arguments are not supported")
        return RayPoint(Ray.POSITIVE_REAL, z.real)
    if z.real == 0.0:
        if z.imag < 0:
            raise DomainError("argument on the negative imaginary axis")
        return RayPoint(Ray.POSITIVE_IMAGINARY, z.imag)
    ang = cmath.phase(z)
    for ray in Ray:
        if abs(ang - ray.value) <= _RAY_TOL:
            return RayPoint(ray, abs(z))
    raise DomainError(f"argument {z!r} lies off the supported rays")


def _check_order(nu: float) -> float:
    nu = float(nu)
    if not math.isfinite(nu) or abs(nu) > MAX_ORDER:
        raise DomainError(f"order {nu!r} outside |nu| <= {MAX_ORDER}")
    return nu


# --------------------------------------------------------------------------
# Hankel symbols and coefficient series (Appendix-C machinery)

def hankel_symbol(nu: float, k: int) -> float:
    """<nu,k> via the even product form prod_j (4 nu^2 - (2j-1)^2) / (4^k k!).

    The product form is exactly even in nu and returns 0 whenever the
    reciprocal gamma in the conventional definition sits at a pole, so
    half-integer orders terminate cleanly.
    """
    if k < 0 or k != int(k):
        raise DomainError("k must be a non-negative integer")
    fournu2 = 4.0 * nu * nu
    out = 1.0
    for j in range(1, int(k) + 1):
        out *= (fournu2 - (2 * j - 1) ** 2) / (4.0 * j)
    return out


@dataclass(frozen=True)
class HankelSeries:
    """Coefficients c_k of an asymptotic series sum_k c_k z^{-k}."""

    nu: float
    kind: str  # "PQ", "RS" or "T"
    sigma: int
    coefficients: tuple

    def evaluate(self, z: complex) -> complex:
        acc = 0j
        zinv = 1.0 / complex(z)
        p = 1.0 + 0j
        for c in self.coefficients:
            acc += c * p
            p *= zinv
        return acc


def hankel_pq(nu: float, sigma: int, K: int) -> HankelSeries:
    """Series for P(nu,z) - i sigma Q(nu,z): c_k = <nu,k> (-i sigma / 2)^k."""
    nu = _check_order(nu)
    _check_K(K)
    w = -0.5j * sigma
    coeffs = tuple(hankel_symbol(nu, k) * w**k for k in range(K + 1))
    return HankelSeries(nu=nu, kind="PQ", sigma=sigma, coefficients=coeffs)


def hankel_t(nu: float, sigma: int, K: int) -> HankelSeries:
    """Series for the T combination paired with hankel_pq at the same sigma."""
    nu = _check_order(nu)
    _check_K(K)
    w = -0.5j * sigma
    coeffs = (0j,) + tuple(
        (2 * k - 1) * hankel_symbol(nu, k - 1) * w**k for k in range(1, K + 1)
    )
    return HankelSeries(nu=nu, kind="T", sigma=sigma, coefficients=coeffs)


def _check_K(K: int) -> None:
    if K < 0 or K > 40:
        raise DomainError("K must lie in [0, 40]; longer truncations are useless "
                          "in double precision")


# --------------------------------------------------------------------------
# Ascending series

# phase of -z^2/4 on each ray
_PH = {
    Ray.POSITIVE_REAL: -1,
    Ray.UPPER_DIAGONAL: -1j,
    Ray.POSITIVE_IMAGINARY: 1,
    Ray.LOWER_DIAGONAL: 1j,
}


def _use_dd(ray: Ray, m: float) -> bool:
    if _precision_mode.get() == "extended":
        return True
    return ray is Ray.POSITIVE_REAL and m > _DD_WINDOW_START


def _sum_phase_series(ray: Ray, coeff_iter, use_dd: bool) -> complex:
    """Sum b_k * ph^k where ph is the ray phase of -z^2/4.

    ``coeff_iter`` yields successive b_k (dd pairs or floats).  Terms are
    accumulated into four buckets by k mod 4; the sign-carrying
    combination happens at working precision so the huge partial sums on
    the real axis cancel without precision loss.
    """
    if use_dd:
        buckets = [(0.0, 0.0)] * 4
        for k, b in coeff_iter:
            i = k & 3
            buckets[i] = dd.add(buckets[i], b)
        b0, b1, b2, b3 = buckets
        ph = _PH[ray]
        if ph == 1:
            return complex(dd.to_float(dd.add(dd.add(b0, b1), dd.add(b2, b3))))
        if ph == -1:
            return complex(dd.to_float(dd.sub(dd.add(b0, b2), dd.add(b1, b3))))
        re = dd.to_float(dd.sub(b0, b2))
        im = dd.to_float(dd.sub(b3, b1)) if ph == -1j else dd.to_float(dd.sub(b1, b3))
        return complex(re, im)
    sums = [0.0] * 4
    comps = [0.0] * 4
    for k, b in coeff_iter:
        i = k & 3
        y = b - comps[i]
        t = sums[i] + y
        comps[i] = (t - sums[i]) - y
        sums[i] = t
    b0, b1, b2, b3 = (sums[i] + comps[i] for i in range(4))
    ph = _PH[ray]
    if ph == 1:
        return complex((b0 + b2) + (b1 + b3))
    if ph == -1:
        return complex((b0 + b2) - (b1 + b3))
    re = b0 - b2
    im = b3 - b1 if ph == -1j else b1 - b3
    return complex(re, im)


def _dd_coeff_gen(nu: float, m: float, ratio_den):
    """Double-double b_k with b_{k+1} = b_k * (m^2/4) / ratio_den(k)."""
    qdd = dd.mul_d(dd.two_prod(m, m), 0.25)
    q = m * m / 4.0
    b = (1.0, 0.0)
    k = 0
    peak = 1.0
    while True:
        yield k, b
        peak = max(peak, abs(b[0]))
        den, den_mag = ratio_den(k)
        b = dd.div(dd.mul(b, qdd), den)
        k += 1
        if abs(b[0]) < 1e-35 * peak and q < den_mag:
            return
        if k > 500:
            raise ConvergenceError("ascending series failed to converge")


def _double_coeff_gen(nu: float, m: float, ratio_den):
    q = m * m / 4.0
    b = 1.0
    k = 0
    peak = 1.0
    while True:
        yield k, b
        peak = max(peak, abs(b))
        den, den_mag = ratio_den(k)
        b = b * q / dd.to_float(den)
        k += 1
        if abs(b) < 1e-19 * peak and q < den_mag:
            return
        if k > 500:
            raise ConvergenceError("ascending series failed to converge")


def _j_series_sum(nu: float, ray: Ray, m: float, use_dd: bool) -> complex:
    """sum_k (-z^2/4)^k / (k! (nu+1)_k) for z = m * ray.unit."""

    def ratio_den(k):
        den = dd.mul_d(dd.two_sum(nu, k + 1.0), float(k + 1))
        return den, (k + 1) * abs(nu + k + 1)

    gen = _dd_coeff_gen if use_dd else _double_coeff_gen
    return _sum_phase_series(ray, gen(nu, m, ratio_den), use_dd)


def _j_ascending(nu: float, p: RayPoint) -> complex:
    m = p.magnitude
    ray = p.ray
    if m == 0.0:
        if nu < 0:
            raise DomainError("J_nu diverges at 0 for negative order")
        return 1.0 + 0j if nu == 0 else 0j
    if nu in (-1.0, -2.0):
        return (-1.0) ** int(-nu) * _j_ascending(-nu, p)
    s = _j_series_sum(nu, ray, m, _use_dd(ray, m))
    pref = (m / 2.0) ** nu / math.gamma(nu + 1.0) * cmath.exp(1j * ray.value * nu)
    return pref * s


# --------------------------------------------------------------------------
# Two-sided Hankel evaluation for |z| > SWITCH_RADIUS

def _exp_safe(w: complex) -> complex:
    # exp with graceful underflow to 0 for strongly negative real part
    if w.real < -745.0:
        return 0j
    return cmath.exp(w)


def _pq_value(nu: float, z: complex, sign: int) -> complex:
    """Optimally truncated sum of <nu,k> (sign * i / (2 z))^k."""
    w = sign * 0.5j / z
    fournu2 = 4.0 * nu * nu
    term = 1.0 + 0j
    total = term
    prev_mag = 1.0
    for k in range(1, _MAX_HANKEL_TERMS + 1):
        term = term * (fournu2 - (2 * k - 1) ** 2) / (4.0 * k) * w
        mag = abs(term)
        if mag > prev_mag:
            break  # past optimal truncation; stop before divergence
        total += term
        if mag < 1e-17 * abs(total):
            break
        prev_mag = mag
    return total


def _hankel_jy(nu: float, z: complex) -> tuple:
    """(J_nu, Y_nu) from both Hankel half-sums; valid for |z| > ~16."""
    if abs(z.imag) > 708.0:
        raise DomainError("Bessel value exceeds double range at this argument")
    chi = z - (nu / 2.0 + 0.25) * math.pi
    h_plus = _exp_safe(1j * chi) * _pq_value(nu, z, +1)
    h_minus = _exp_safe(-1j * chi) * _pq_value(nu, z, -1)
    pref = cmath.sqrt(2.0 / (math.pi * z))
    j = pref * (h_plus + h_minus) / 2.0
    y = pref * (h_plus - h_minus) / 2j
    return j, y


# --------------------------------------------------------------------------
# Y at integer orders 0 and 1 (logarithmic ascending series)

def _y0_ascending(p: RayPoint) -> complex:
    # Y0 = (2/pi) [(log(z/2) + gamma) J0 - T],  T = sum_{k>=1} H_k w^k / (k!)^2
    m, ray = p.magnitude, p.ray
    if m == 0.0:
        raise DomainError("Y_0 diverges at 0")
    use = _use_dd(ray, m)
    q = m * m / 4.0
    if use:
        qdd = dd.mul_d(dd.two_prod(m, m), 0.25)

        def gen():
            u = (1.0, 0.0)
            h = (0.0, 0.0)
            k = 0
            peak = 1.0
            while True:
                kk = k + 1
                u = dd.div(dd.mul(u, qdd), dd.two_prod(float(kk), float(kk)))
                h = dd.add(h, dd.div((1.0, 0.0), (float(kk), 0.0)))
                term = dd.mul(u, h)
                yield kk, term
                peak = max(peak, abs(term[0]))
                k = kk
                if abs(term[0]) < 1e-35 * peak and q < kk * kk:
                    return
                if k > 500:
                    raise ConvergenceError("Y0 series failed to converge")

        tail = _sum_phase_series(ray, gen(), True)
    else:

        def gen():
            u = 1.0
            h = 0.0
            k = 0
            peak = 1.0
            while True:
                kk = k + 1
                u = u * q / (kk * kk)
                h = h + 1.0 / kk
                term = u * h
                yield kk, term
                peak = max(peak, abs(term))
                k = kk
                if abs(term) < 1e-19 * peak and q < kk * kk:
                    return
                if k > 500:
                    raise ConvergenceError("Y0 series failed to converge")

        tail = _sum_phase_series(ray, gen(), False)
    z = p.value
    j0 = _j_ascending(0.0, p)
    return (2.0 / math.pi) * ((cmath.log(z / 2.0) + _EULER) * j0 - tail)


def _y1_ascending(p: RayPoint) -> complex:
    # Y1 = (2/pi)(log(z/2) + gamma) J1 - 2/(pi z) - (z/(2 pi)) S,
    # S = sum_{k>=0} (H_k + H_{k+1}) w^k / (k! (k+1)!)
    m, ray = p.magnitude, p.ray
    if m == 0.0:
        raise DomainError("Y_1 diverges at 0")
    use = _use_dd(ray, m)
    q = m * m / 4.0
    if use:
        qdd = dd.mul_d(dd.two_prod(m, m), 0.25)

        def gen():
            u = (1.0, 0.0)
            h = (0.0, 0.0)   # H_k
            h1 = (1.0, 0.0)  # H_{k+1}
            k = 0
            peak = 1.0
            while True:
                term = dd.mul(u, dd.add(h, h1))
                yield k, term
                peak = max(peak, abs(term[0]))
                kk = k + 1
                u = dd.div(dd.mul(u, qdd), dd.two_prod(float(kk), float(kk + 1)))
                h = h1
                h1 = dd.add(h1, dd.div((1.0, 0.0), (float(kk + 1), 0.0)))
                k = kk
                if abs(u[0]) * (abs(h[0]) + abs(h1[0])) < 1e-35 * peak and q < kk * (kk + 1):
                    return
                if k > 500:
                    raise ConvergenceError("Y1 series failed to converge")

        ssum = _sum_phase_series(ray, gen(), True)
    else:

        def gen():
            u = 1.0
            h = 0.0
            h1 = 1.0
            k = 0
            peak = 1.0
            while True:
                term = u * (h + h1)
                yield k, term
                peak = max(peak, abs(term))
                kk = k + 1
                u = u * q / (kk * (kk + 1))
                h = h1
                h1 = h1 + 1.0 / (kk + 1)
                k = kk
                if u * (h + h1) < 1e-19 * peak and q < kk * (kk + 1):
                    return
                if k > 500:
                    raise ConvergenceError("Y1 series failed to converge")

        ssum = _sum_phase_series(ray, gen(), False)
    z = p.value
    j1 = _j_ascending(1.0, p)
    return ((2.0 / math.pi) * (cmath.log(z / 2.0) + _EULER) * j1
            - 2.0 / (math.pi * z)
            - (z / (2.0 * math.pi)) * ssum)


# --------------------------------------------------------------------------
# Public evaluators

def bessel_j(nu: float, z) -> complex:
    """J_nu(z) for z on a supported ray.

    Relative accuracy is ~1e-12 away from zeros for |z| <= 1e3; near a zero
    the error is absolute on the scale of the local envelope.
    """
    nu = _check_order(nu)
    p = classify_ray(z)
    if p.magnitude > SWITCH_RADIUS:
        return _hankel_jy(nu, p.value)[0]
    return _j_ascending(nu, p)


def bessel_y(nu: float, z) -> complex:
    """Y_nu (= N_nu) on a supported ray.

    Non-integer orders use the reflection formula; nu = 0, 1 use dedicated
    logarithmic series.  Orders within 1e-6 of other integers are rejected.
    """
    nu = _check_order(nu)
    p = classify_ray(z)
    if p.magnitude > SWITCH_RADIUS:
        return _hankel_jy(nu, p.value)[1]
    if nu == 0.0:
        return _y0_ascending(p)
    if nu == 1.0:
        return _y1_ascending(p)
    if abs(nu - round(nu)) < 1e-6:
        raise DomainError(f"Y near integer order {nu!r} is not supported below "
                          "the asymptotic switch radius")
    s, c = math.sin(math.pi * nu), math.cos(math.pi * nu)
    return (bessel_j(nu, p) * c - bessel_j(-nu, p)) / s


def bessel_i(nu: float, x: float) -> float:
    """Modified Bessel I_nu for positive real argument (series, no cancellation)."""
    nu = _check_order(nu)
    x = float(x)
    if x < 0 or not math.isfinite(x):
        raise DomainError("bessel_i needs x >= 0")
    if x > 600.0:
        raise DomainError("bessel_i argument above supported range (600)")
    if x == 0.0:
        if nu < 0:
            raise DomainError("I_nu diverges at 0 for negative order")
        return 1.0 if nu == 0 else 0.0
    q = x * x / 4.0
    term = 1.0
    total = 0.0
    comp = 0.0
    k = 0
    while True:
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        term = term * q / ((k + 1) * (nu + k + 1))
        k += 1
        if abs(term) < 1e-18 * abs(total) and q < (k + 1) * abs(nu + k + 1):
            break
        if k > 4000:
            raise ConvergenceError("I series failed to converge")
    return (x / 2.0) ** nu / math.gamma(nu + 1.0) * total


def bessel_j_prime(nu: float, z) -> complex:
    """dJ_nu/dz via J'_nu = (nu/z) J_nu - J_{nu+1}."""
    nu = _check_order(nu)
    p = classify_ray(z)
    if p.magnitude == 0.0:
        raise DomainError("derivative at 0 not supported")
    z = p.value
    return (nu / z) * bessel_j(nu, p) - _bessel_j_shift(nu + 1.0, p)


def bessel_y_prime(nu: float, z) -> complex:
    """dY_nu/dz via Y'_nu = (nu/z) Y_nu - Y_{nu+1}."""
    nu = _check_order(nu)
    p = classify_ray(z)
    if p.magnitude == 0.0:
        raise DomainError("derivative at 0 not supported")
    z = p.value
    return (nu / z) * bessel_y(nu, p) - _bessel_y_shift(nu + 1.0, p)


def _bessel_j_shift(nu: float, p: RayPoint) -> complex:
    # internal: order may exceed MAX_ORDER by the recurrence shift
    if p.magnitude > SWITCH_RADIUS:
        return _hankel_jy(nu, p.value)[0]
    return _j_ascending(nu, p)


def _bessel_y_shift(nu: float, p: RayPoint) -> complex:
    if p.magnitude > SWITCH_RADIUS:
        return _hankel_jy(nu, p.value)[1]
    if nu == 0.0:
        return _y0_ascending(p)
    if nu == 1.0:
        return _y1_ascending(p)
    s, c = math.sin(math.pi * nu), math.cos(math.pi * nu)
    return (_bessel_j_shift(nu, p) * c - _bessel_j_shift(-nu, p)) / s


# exposed for the series/asymptotic handoff tests
def _ascending_value(nu: float, z) -> complex:
    return _j_ascending(nu, classify_ray(z))


def _asymptotic_value(nu: float, z) -> complex:
    return _hankel_jy(nu, classify_ray(z).value)[0]
