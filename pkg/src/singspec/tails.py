"""Euler-Maclaurin tails over asymptotic eigenvalue models.

Spectral sums are evaluated as an explicit head over computed eigenvalues
plus a tail over a smooth model n -> mu(n).  The models combine the
two-term McMahon zero approximation with the first-order shift the
boundary condition induces on the large zeros; abbreviated derivations
sit next to each model.
"""

from __future__ import annotations

import math

from scipy.integrate import quad

from .errors import DomainError


def mcmahon_zero(nu: float, n) -> float:
    """Two-term McMahon approximation of the n-th positive zero of J_nu."""
    gam = (n + nu / 2.0 - 0.25) * math.pi
    return gam - (4.0 * nu * nu - 1.0) / (8.0 * gam)


class TailModel:
    """Smooth model mu(n) for the n-th eigenvalue root, n past the head."""

    def __init__(self, mu_of, label: str):
        self.mu_of = mu_of
        self.label = label

    def lam_of(self, n):
        m = self.mu_of(n)
        return m * m

    @staticmethod
    def for_d(g: float) -> "TailModel":
        nu = g - 0.5
        return TailModel(lambda n: mcmahon_zero(nu, n), "d-extension zeros")

    @staticmethod
    def for_n(g: float) -> "TailModel":
        nu = g - 0.5
        return TailModel(lambda n: mcmahon_zero(-nu, n), "n-extension zeros")

    @staticmethod
    def for_general(g: float, rho_val: float, first_interval_root: bool,
                    length: float = 1.0) -> "TailModel":
        # Large roots of mu^{2g-1} J_{1/2-g}(mu) = rho J_{g-1/2}(mu) approach
        # the zeros j of J_{1/2-g} with shift rho cos(pi g) j^{1-2g}
        # (linearise J_{1/2-g} about j and use the Wronskian at the zero).
        nu = g - 0.5
        shift = 0 if first_interval_root else 1
        c = rho_val * math.cos(math.pi * g)

        def mu_of(n):
            j = mcmahon_zero(-nu, n + shift)
            return (j + c * j ** (1.0 - 2.0 * g)) / length

        return TailModel(mu_of, "general-extension root model")

    @staticmethod
    def for_half(theta: float | None, first_interval_root: bool) -> "TailModel":
        if theta is None:
            return TailModel(lambda n: mcmahon_zero(0.0, n), "half-case d zeros")
        # Roots of (theta - log mu) J0 + (pi/2) Y0 sit near the zeros j of J0
        # with shift pi / (2 (theta - log j)) from the same linearisation.
        shift = 0 if first_interval_root else 1

        def mu_of(n):
            j = mcmahon_zero(0.0, n + shift)
            return j + math.pi / (2.0 * (theta - math.log(j)))

        return TailModel(mu_of, "half-case root model")


def em_tail(h, n_from: int, quad_limit: int = 200):
    """sum_{n >= n_from} h(n) by Euler-Maclaurin with three corrections.

    h must be smooth and absolutely integrable on [n_from, inf); complex
    values are handled componentwise.
    """
    a = float(n_from)
    probe = h(a)
    if isinstance(probe, complex):
        integral = (quad(lambda x: h(x).real, a, math.inf, limit=quad_limit,
                         epsabs=1e-13, epsrel=1e-11)[0]
                    + 1j * quad(lambda x: h(x).imag, a, math.inf, limit=quad_limit,
                                epsabs=1e-13, epsrel=1e-11)[0])
    else:
        integral = quad(h, a, math.inf, limit=quad_limit,
                        epsabs=1e-13, epsrel=1e-11)[0]
    step = 0.25
    d1 = (h(a + step) - h(a - step)) / (2 * step)
    d3 = (h(a + 2 * step) - 2 * h(a + step) + 2 * h(a - step)
          - h(a - 2 * step)) / (2 * step ** 3)
    return integral + probe / 2.0 - d1 / 12.0 + d3 / 720.0
