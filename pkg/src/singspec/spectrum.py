"""Eigenvalue computation for every extension of the singular operator.

Positive eigenvalues are mu^2 with mu a root of the transcendental
equation F(mu) = rho, where F(mu) = mu^{2g-1} J_{1/2-g}(mu)/J_{g-1/2}(mu).
F has one pole between consecutive zeros of J_{g-1/2} and sweeps the whole
real line there, so roots are bracketed by interval and refined with
brentq plus a Newton polish.  The scale-invariant D- and N-extensions
reduce to Bessel zeros; the g = 1/2 family has its own secular equation.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import runtime, specfun, tails
from .errors import ConvergenceError, DomainError
from .extension import ExtensionParams, THETA_STAR, rho, rho_crit

_XTOL = 1e-14


def _jnu(nu):
    return lambda m: specfun.bessel_j(nu, m).real


def bessel_zero(nu: float, n: int) -> float:
    """n-th positive zero of J_nu to ~1e-12 relative, |nu| <= 3/2.

    McMahon's two-term expansion seeds a safeguarded Newton refinement;
    small n at negative order falls back to a scan, where McMahon can
    miss the first zeros entirely.
    """
    if abs(nu) > 1.5:
        raise DomainError("bessel_zero supports |nu| <= 3/2")
    if n < 1 or n != int(n):
        raise DomainError("n must be a positive integer")
    f = _jnu(nu)
    if n <= 8:
        zeros = _scan_zeros(nu, n)
        lo, hi = zeros[n - 1]
    else:
        guess = tails.mcmahon_zero(nu, n)
        lo, hi = guess - 0.6, guess + 0.6
        if f(lo) * f(hi) > 0:  # should not happen for supported orders
            raise ConvergenceError(f"failed to bracket zero {n} of J_{nu}",
                                   bracket=(lo, hi))
    root = optimize.brentq(f, lo, hi, xtol=_XTOL, rtol=1e-15)
    # one Newton polish with the analytic derivative
    fp = (nu / root) * specfun.bessel_j(nu, root).real \
        - specfun.bessel_j(nu + 1.0, root).real
    if fp != 0.0:
        step = f(root) / fp
        if abs(step) < 1e-8 * root:
            root -= step
    return root


@functools.lru_cache(maxsize=256)
def _scan_zeros(nu: float, count: int):
    """Brackets of the first `count` positive zeros of J_nu by grid scan."""
    f = _jnu(nu)
    out = []
    upper = (count + 3) * math.pi + 4.0
    xs = np.arange(0.02, upper, 0.02)
    vals = np.array([f(x) for x in xs])
    sgn = np.sign(vals)
    flips = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    for i in flips[:count]:
        out.append((float(xs[i]), float(xs[i + 1])))
    if len(out) < count:
        raise ConvergenceError("zero scan exhausted its window")
    return out


# --------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenEntry:
    n: int
    lam: float
    bracket: tuple


@dataclass(frozen=True)
class EigenvalueTable:
    g: float
    ext: ExtensionParams
    entries: tuple
    negative: float | None
    zero_mode: bool

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([e.lam for e in self.entries])

    @property
    def mus(self) -> np.ndarray:
        return np.sqrt(self.lambdas)

    def tail_model(self) -> tails.TailModel:
        ext = self.ext
        if ext.g == 0.5:
            if ext.alpha == 0.0:
                return tails.TailModel.for_half(None, True)
            return tails.TailModel.for_half(ext.theta, ext.theta < THETA_STAR)
        if ext.alpha == 0.0:
            return tails.TailModel.for_d(ext.g)
        if ext.beta == 0.0:
            return tails.TailModel.for_n(ext.g)
        first = rho(ext) < rho_crit(ext.g)
        return tails.TailModel.for_general(ext.g, rho(ext), first)


def eigenvalues_d(g: float, count: int) -> EigenvalueTable:
    """Spectrum of the D-extension: squares of the zeros of J_{g-1/2}."""
    ext = ExtensionParams.make(g, alpha=0.0, beta=1.0)
    return _bessel_zero_table(ext, g - 0.5, count)


def eigenvalues_n(g: float, count: int) -> EigenvalueTable:
    """Spectrum of the N-extension: squares of the zeros of J_{1/2-g}."""
    if g == 0.5:
        raise DomainError("at g = 1/2 use eigenvalues_half")
    ext = ExtensionParams.make(g, alpha=1.0, beta=0.0)
    return _bessel_zero_table(ext, 0.5 - g, count)


def _bessel_zero_table(ext, nu, count) -> EigenvalueTable:
    def one(n):
        z = bessel_zero(nu, n)
        return EigenEntry(n=n, lam=z * z, bracket=(z - 1e-9, z + 1e-9))

    entries = runtime.pmap(one, range(1, count + 1))
    return EigenvalueTable(g=ext.g, ext=ext, entries=tuple(entries),
                           negative=None, zero_mode=False)


def spectral_function(g: float):
    """F(mu) = mu^{2g-1} J_{1/2-g}(mu) / J_{g-1/2}(mu) (real positive mu)."""
    nu = g - 0.5

    def F(m):
        return (m ** (2 * g - 1)
                * specfun.bessel_j(-nu, m).real / specfun.bessel_j(nu, m).real)

    return F


def spectral_function_imag(g: float):
    """F(i mu) = mu^{2g-1} I_{1/2-g}(mu) / I_{g-1/2}(mu), increasing in mu."""
    nu = g - 0.5

    def Fi(m):
        return (m ** (2 * g - 1)
                * specfun.bessel_i(-nu, m) / specfun.bessel_i(nu, m))

    return Fi


def eigenvalues_general(ext: ExtensionParams, count: int) -> EigenvalueTable:
    """Spectrum of a general (alpha != 0) extension, g in (1/2, 3/2).

    Returns `count` positive eigenvalues, the unique negative eigenvalue
    when beta/alpha > 1, and the zero-mode flag for alpha = beta.
    """
    if ext.g == 0.5:
        raise DomainError("use eigenvalues_half at g = 1/2")
    if ext.alpha == 0.0:
        return eigenvalues_d(ext.g, count)
    if ext.beta == 0.0:
        return eigenvalues_n(ext.g, count)
    return _general_table(ext, count, 1.0)


def _general_table(ext, count, length) -> EigenvalueTable:
    g = ext.g
    nu = g - 0.5
    r = rho(ext)
    rc = rho_crit(g)
    zero_mode = ext.has_zero_mode
    nu_zeros = [bessel_zero(nu, n) for n in range(1, count + 2)]

    def F(m):
        return (m ** (2 * g - 1)
                * specfun.bessel_j(-nu, m).real / specfun.bessel_j(nu, m).real)

    def Fprime(m):
        # F'/F = (2g-1)/mu + J'_{-nu}/J_{-nu} - J'_nu/J_nu
        jp = specfun.bessel_j(nu, m).real
        jm = specfun.bessel_j(-nu, m).real
        jpd = specfun.bessel_j_prime(nu, m).real
        jmd = specfun.bessel_j_prime(-nu, m).real
        return F(m) * ((2 * g - 1) / m + jmd / jm - jpd / jp)

    first_root = (not zero_mode) and r < rc
    intervals = []
    if first_root:
        intervals.append((1e-8, nu_zeros[0]))
    intervals.extend((nu_zeros[i], nu_zeros[i + 1]) for i in range(count))

    def solve(item):
        idx, (lo, hi) = item
        root = _root_in_interval(F, r, lo, hi)
        if root is None:
            raise ConvergenceError(
                f"no root of F(mu)=rho found in interval {idx}",
                bracket=(lo, hi))
        root = _newton_polish(F, Fprime, r, root, lo, hi)
        return EigenEntry(n=idx + 1, lam=(root / length) ** 2,
                          bracket=(lo / length, hi / length))

    entries = runtime.pmap(solve, list(enumerate(intervals)))[:count]
    negative = None
    if ext.beta_over_alpha > 1.0:
        negative = -(_negative_mu(g, r) / length) ** 2
    return EigenvalueTable(g=g, ext=ext, entries=tuple(entries),
                           negative=negative, zero_mode=zero_mode)


def _root_in_interval(F, r, lo, hi, grid=8):
    width = hi - lo
    a = lo + max(1e-12 * hi, 1e-9 * width)
    b = hi - max(1e-12 * hi, 1e-9 * width)
    for npts in (grid, 4 * grid, 16 * grid):
        xs = np.linspace(a, b, npts)
        vals = np.array([F(x) - r for x in xs])
        sgn = np.sign(vals)
        flips = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
        if len(flips):
            i = flips[0]
            return optimize.brentq(lambda m: F(m) - r, xs[i], xs[i + 1],
                                   xtol=_XTOL, rtol=1e-15)
    return None


def _newton_polish(F, Fprime, r, root, lo, hi, max_iter=100):
    for _ in range(max_iter):
        resid = F(root) - r
        if abs(resid) <= 1e-11 * (1.0 + abs(r)):
            return root
        fp = Fprime(root)
        if fp == 0.0:
            return root
        step = resid / fp
        nxt = root - step
        if not (lo < nxt < hi) or abs(step) <= 4.0 * np.finfo(float).eps * root:
            return root
        root = nxt
    return root


def _negative_mu(g: float, r: float) -> float:
    Fi = spectral_function_imag(g)
    hi = 1.0
    while Fi(hi) < r:
        hi *= 2.0
        if hi > 512.0:
            raise ConvergenceError("negative-eigenvalue bracket exceeded range")
    lo = hi / 2.0 if hi > 1.0 else 1e-8
    return optimize.brentq(lambda m: Fi(m) - r, lo, hi, xtol=_XTOL, rtol=1e-15)


def eigenvalues_half(theta: float | None, count: int) -> EigenvalueTable:
    """Spectrum at g = 1/2: roots of (theta - log mu) J0 + (pi/2) Y0, squared.

    theta=None selects the D-extension (zeros of J0).  There are never
    negative eigenvalues in this family.
    """
    if theta is None:
        ext = ExtensionParams.make(0.5, alpha=0.0, beta=1.0)
        return _bessel_zero_table(ext, 0.0, count)
    theta = float(theta)
    ext = ExtensionParams.make(0.5, theta=theta)

    def S(m):
        return ((theta - math.log(m)) * specfun.bessel_j(0.0, m).real
                + 0.5 * math.pi * specfun.bessel_y(0.0, m).real)

    j0_zeros = [bessel_zero(0.0, n) for n in range(1, count + 2)]
    zero_mode = ext.has_zero_mode
    first_root = (not zero_mode) and theta < THETA_STAR
    intervals = []
    if first_root:
        intervals.append((1e-9, j0_zeros[0]))
    intervals.extend((j0_zeros[i], j0_zeros[i + 1]) for i in range(count))

    def solve(item):
        idx, (lo, hi) = item
        root = _root_in_interval(lambda m: S(m), 0.0, lo, hi)
        if root is None:
            raise ConvergenceError(
                f"no root of the g=1/2 secular equation in interval {idx}",
                bracket=(lo, hi))
        return EigenEntry(n=idx + 1, lam=root * root, bracket=(lo, hi))

    entries = runtime.pmap(solve, list(enumerate(intervals)))[:count]
    return EigenvalueTable(g=0.5, ext=ext, entries=tuple(entries),
                           negative=None, zero_mode=zero_mode)


def eigenvalues(ext: ExtensionParams, count: int) -> EigenvalueTable:
    """Dispatch on the extension; cached, since tables are reused heavily."""
    return _eigenvalues_cached(ext, count)


@functools.lru_cache(maxsize=64)
def _eigenvalues_cached(ext: ExtensionParams, count: int) -> EigenvalueTable:
    if ext.g == 0.5:
        return eigenvalues_half(None if ext.alpha == 0.0 else ext.theta, count)
    return eigenvalues_general(ext, count)


def eigenvalues_scaled(ext: ExtensionParams, count: int,
                       length: float) -> EigenvalueTable:
    """Spectrum of the same differential expression on (0, length).

    Used by the scaling-isometry checks: the boundary data of `ext` is
    imposed at 0 and a Dirichlet condition at x = length.  Roots solve
    F(mu * length) = length^{2g-1} * rho(ext).
    """
    if ext.g == 0.5:
        raise DomainError("scaled spectra are implemented for g > 1/2")
    g = ext.g
    if ext.alpha == 0.0 or ext.beta == 0.0:
        nu = g - 0.5 if ext.alpha == 0.0 else 0.5 - g

        def one(n):
            z = bessel_zero(nu, n) / length
            return EigenEntry(n=n, lam=z * z, bracket=(z - 1e-9, z + 1e-9))

        entries = runtime.pmap(one, range(1, count + 1))
        return EigenvalueTable(g=g, ext=ext, entries=tuple(entries),
                               negative=None, zero_mode=False)
    # reduce to the unit-interval problem in the variable m = mu * length
    r_unit = length ** (2.0 * g - 1.0) * rho(ext)
    unit_ext = ExtensionParams.make(g, rho=r_unit)
    table = _general_table(unit_ext, count, length)
    neg = table.negative
    return EigenvalueTable(g=g, ext=ext, entries=table.entries,
                           negative=neg, zero_mode=table.zero_mode)
