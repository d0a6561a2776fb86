"""Boundary-condition data for the operator -d^2/dx^2 + g(g-1)/x^2 on (0,1).

An extension is a ray (alpha, beta) in the real projective line: functions
in its domain vanish at x = 1 and satisfy alpha*C1 + beta*C2 = 0, where
C1 and C2 weigh the x^g and x^{1-g} behaviours at the singular endpoint.
For g = 1/2 the second behaviour degenerates to sqrt(x) log x and the
family is parametrised by theta = -beta/alpha + log 2 - euler_gamma.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError, NearEigenvalueError

EULER_GAMMA = 0.57721566490153286060651209008240243
#: theta of the g = 1/2 extension owning a zero mode (beta = 0 there)
THETA_STAR = math.log(2.0) - EULER_GAMMA

_G_GAP = 1e-6  # g in (1/2, 1/2 + gap) is rejected: Lemma-1 constants degenerate


def _check_g(g: float) -> float:
    g = float(g)
    if not (0.5 <= g < 1.5):
        raise DomainError(f"g={g!r} outside [1/2, 3/2)")
    if 0.5 < g < 0.5 + _G_GAP:
        raise DomainError("g this close to 1/2 is not supported; "
                          "use exactly g = 1/2 for the logarithmic case")
    return g


@dataclass(frozen=True)
class ExtensionParams:
    """Canonical (g, alpha, beta) triple; alpha >= 0, alpha^2 + beta^2 = 1."""

    g: float
    alpha: float
    beta: float
    theta: float | None = None  # populated only for g = 1/2 with alpha != 0

    @staticmethod
    def make(g: float, alpha: float | None = None, beta: float | None = None,
             rho: float | None = None, theta: float | None = None) -> "ExtensionParams":
        """Build a canonical extension from one of (alpha, beta) | rho | theta."""
        g = _check_g(g)
        given = [alpha is not None or beta is not None, rho is not None,
                 theta is not None]
        if sum(given) != 1:
            raise DomainError("provide exactly one of (alpha, beta), rho, theta")
        if theta is not None:
            if g != 0.5:
                raise DomainError("theta parametrises only the g = 1/2 family")
            boa = THETA_STAR - float(theta)
            a, b = 1.0, boa
        elif rho is not None:
            if g == 0.5:
                raise DomainError("rho is undefined at g = 1/2; use theta")
            if math.isinf(rho):
                a, b = 0.0, 1.0
            else:
                a, b = 1.0, float(rho) / rho_crit(g)
        else:
            if alpha is None or beta is None:
                raise DomainError("alpha and beta must be given together")
            a, b = float(alpha), float(beta)
        return _canonical(g, a, b)

    @property
    def is_d_extension(self) -> bool:
        return self.alpha == 0.0

    @property
    def is_n_extension(self) -> bool:
        return self.beta == 0.0

    @property
    def beta_over_alpha(self) -> float:
        if self.alpha == 0.0:
            return math.inf if self.beta > 0 else -math.inf
        return self.beta / self.alpha

    @property
    def has_zero_mode(self) -> bool:
        if self.g == 0.5:
            if self.theta is None:
                return False
            return abs(self.theta - THETA_STAR) <= 1e-14 * max(1.0, abs(THETA_STAR))
        return abs(self.alpha - self.beta) <= 1e-14

    def canonical(self) -> "ExtensionParams":
        return _canonical(self.g, self.alpha, self.beta)


def _canonical(g: float, a: float, b: float) -> ExtensionParams:
    g = _check_g(g)
    n = math.hypot(a, b)
    if n == 0.0 or not math.isfinite(n):
        raise DomainError("(alpha, beta) must be a nonzero finite pair")
    a, b = a / n, b / n
    if a < 0.0 or (a == 0.0 and b < 0.0):
        a, b = -a, -b
    if a == 0.0:
        b = 1.0
    theta = None
    if g == 0.5 and a != 0.0:
        theta = -b / a + THETA_STAR
    return ExtensionParams(g=g, alpha=a, beta=b, theta=theta)


def rho_crit(g: float) -> float:
    """2^{2g-1} Gamma(1/2+g) / Gamma(3/2-g): the alpha = beta level of rho."""
    g = _check_g(g)
    if g == 0.5:
        raise DomainError("rho is undefined at g = 1/2")
    return 2.0 ** (2 * g - 1) * math.gamma(0.5 + g) / math.gamma(1.5 - g)


def rho(ext: ExtensionParams) -> float:
    """Boundary parameter (beta/alpha) * 2^{2g-1} Gamma(1/2+g)/Gamma(3/2-g).

    The D-extension (alpha = 0) maps to +inf, a legal sentinel.
    """
    if ext.g == 0.5:
        raise DomainError("rho is undefined at g = 1/2; the family uses theta")
    if ext.alpha == 0.0:
        return math.inf
    return ext.beta_over_alpha * rho_crit(ext.g)


# --------------------------------------------------------------------------
# Spectral points

@dataclass(frozen=True)
class SpectralPoint:
    """lambda with its principal square root mu and half-plane sign sigma."""

    lam: complex
    mu: complex
    sigma: int

    @staticmethod
    def from_lambda(lam: complex, sigma: int | None = None) -> "SpectralPoint":
        lam = complex(lam)
        mu = cmath.sqrt(lam)
        if mu.imag > 0:
            s = 1
        elif mu.imag < 0:
            s = -1
        else:
            # real positive lambda sits on the boundary of both half planes;
            # the caller owns the choice there (default +1)
            s = 1 if sigma is None else int(sigma)
        if sigma is not None and s != int(sigma) and mu.imag != 0:
            raise DomainError("sigma contradicts the half plane of mu")
        return SpectralPoint(lam=lam, mu=mu, sigma=s)

    @staticmethod
    def from_mu(mu: complex, sigma: int | None = None) -> "SpectralPoint":
        mu = complex(mu)
        if not (-math.pi / 2 < cmath.phase(mu) <= math.pi / 2) and mu != 0:
            raise DomainError("mu must satisfy -pi/2 < arg mu <= pi/2")
        return SpectralPoint.from_lambda(mu * mu, sigma)

    def mu_pow(self, e: float) -> complex:
        """Principal-branch power mu**e."""
        return cmath.exp(e * cmath.log(self.mu))


def tau(ext: ExtensionParams, p: SpectralPoint) -> complex:
    """Convex-combination weight of the N-resolvent in the general resolvent.

    tau = J_{1/2-g}(mu) / (J_{1/2-g}(mu) - rho mu^{1-2g} J_{g-1/2}(mu));
    its poles are exactly the eigenvalues of the extension.
    """
    g = ext.g
    if g == 0.5:
        raise DomainError("tau is defined for g in (1/2, 3/2)")
    if ext.alpha == 0.0:
        return 0.0 + 0j
    if ext.beta == 0.0:
        return 1.0 + 0j
    nu = g - 0.5
    jm = specfun.bessel_j(-nu, p.mu)
    jp = specfun.bessel_j(nu, p.mu)
    r = rho(ext)
    other = r * p.mu_pow(1.0 - 2.0 * g) * jp
    den = jm - other
    scale = max(abs(jm), abs(other), 1e-300)
    if abs(den) < 1e-10 * scale:
        raise NearEigenvalueError(
            f"lambda={p.lam!r} is within working precision of an eigenvalue")
    return jm / den


def scale_extension(ext: ExtensionParams, c: float) -> ExtensionParams:
    """Image of the extension under u(x) -> c^{1/2} u(c x).

    alpha scales by c^{-g} and beta by c^{g-1}, so rho picks up c^{2g-1}.
    """
    c = float(c)
    if not (c > 0 and math.isfinite(c)):
        raise DomainError("scaling factor must be positive and finite")
    return _canonical(ext.g, c ** (-ext.g) * ext.alpha, c ** (ext.g - 1.0) * ext.beta)


# --------------------------------------------------------------------------
# Boundary data

@dataclass(frozen=True)
class BoundaryData:
    c1: complex
    c2: complex


def boundary_coefficients(g: float, mu: complex, coeff_d: complex,
                          coeff_n: complex) -> BoundaryData:
    """(C1, C2) of coeff_d * sqrt(x) J_{g-1/2}(mu x) + coeff_n * sqrt(x) J_{1/2-g}(mu x).

    Normalisation matches phi ~ (C1 x^g + C2 x^{1-g}) / sqrt(2g-1) near 0.
    """
    g = _check_g(g)
    if g == 0.5:
        raise DomainError("boundary coefficients in this basis need g > 1/2")
    mu = complex(mu)
    root = math.sqrt(2.0 * g - 1.0)
    half = cmath.exp((g - 0.5) * cmath.log(mu / 2.0))
    c1 = root * complex(coeff_d) * half / math.gamma(g + 0.5)
    c2 = root * complex(coeff_n) / half / math.gamma(1.5 - g)
    return BoundaryData(c1=c1, c2=c2)


def fit_boundary_coefficients(g: float, phi, window=(1e-4, 1e-3),
                              npts: int = 24) -> BoundaryData:
    """Extract (C1, C2) from samples of phi on a small-x window.

    The fit basis carries the x^{g+2} and x^{3-g} companions of the leading
    powers; with the plain two-term basis the O(x^{3/2}) remainder biases
    the coefficients at the 1e-6 level, far above what eigenfunction
    closure tests need.
    """
    g = _check_g(g)
    if g == 0.5:
        raise DomainError("fit in the power basis needs g > 1/2")
    lo, hi = window
    xs = np.geomspace(lo, hi, npts)
    ys = np.array([complex(phi(float(x))) for x in xs])
    exps = [g, 1.0 - g, g + 2.0, 3.0 - g, g + 4.0, 5.0 - g]
    cols = [xs ** e for e in exps]
    norms = [np.linalg.norm(c) for c in cols]
    a = np.stack([c / n for c, n in zip(cols, norms)], axis=1)
    sol, *_ = np.linalg.lstsq(a, ys, rcond=None)
    resid = np.abs(a @ sol - ys)
    scale = np.max(np.abs(ys)) + 1e-300
    if np.max(resid) > 1e-4 * scale:
        raise DomainError("samples are not consistent with the boundary "
                          "behaviour of the operator domain")
    root = math.sqrt(2.0 * g - 1.0)
    c1 = root * sol[0] / norms[0]
    c2 = root * sol[1] / norms[1]
    return BoundaryData(c1=complex(c1), c2=complex(c2))
