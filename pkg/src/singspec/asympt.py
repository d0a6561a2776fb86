"""Formal large-|mu| expansions of the resolvent traces.

The D-trace coefficients A_k come from exact rational series division of
the Hankel data (T against P - i sigma Q); the general trace appends the
geometric tau family, whose exponents (1-2g)k are the source of the
anomalous zeta poles.  Coefficients are carried as exact rational pairs
until the caller asks for floats, which keeps the parity statements
(A_even real, A_odd imaginary) exact rather than approximate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError
from .extension import ExtensionParams, rho

EXP_TOL = 1e-12  # exponents closer than this are the same formal term


@dataclass
class GenPowerSeries:
    """Finite formal sum of c_e * z^e with real exponents, plus a trunction order.

    All omitted exponents are <= truncation_order, i.e. the represented
    function is  sum + O(z^truncation_order)  as |z| -> infinity.
    """

    terms: dict = field(default_factory=dict)
    truncation_order: float = -math.inf

    def _merge_key(self, e: float):
        for k in self.terms:
            if abs(k - e) <= EXP_TOL:
                return k
        return e

    def add_term(self, e: float, c: complex) -> None:
        if e <= self.truncation_order:
            return
        c = complex(c)
        k = self._merge_key(e)
        if k not in self.terms and c == 0:
            return
        acc = self.terms.get(k, 0j) + c
        if acc == 0:
            self.terms.pop(k, None)
        else:
            self.terms[k] = acc

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: -kv[0])

    def __add__(self, other: "GenPowerSeries") -> "GenPowerSeries":
        out = GenPowerSeries(truncation_order=max(self.truncation_order,
                                                  other.truncation_order))
        for e, c in self.terms.items():
            out.add_term(e, c)
        for e, c in other.terms.items():
            out.add_term(e, c)
        return out

    def scale(self, c: complex) -> "GenPowerSeries":
        out = GenPowerSeries(truncation_order=self.truncation_order)
        for e, v in self.terms.items():
            out.add_term(e, c * v)
        return out

    def shift(self, de: float) -> "GenPowerSeries":
        """Multiply by the monomial z^de."""
        out = GenPowerSeries(truncation_order=self.truncation_order + de)
        for e, v in self.terms.items():
            out.add_term(e + de, v)
        return out

    def __mul__(self, other: "GenPowerSeries") -> "GenPowerSeries":
        if not self.terms or not other.terms:
            return GenPowerSeries(truncation_order=-math.inf)
        e1 = max(self.terms)
        e2 = max(other.terms)
        trunc = max(self.truncation_order + e2, other.truncation_order + e1,
                    self.truncation_order + other.truncation_order)
        out = GenPowerSeries(truncation_order=trunc)
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                out.add_term(ea + eb, ca * cb)
        return out

    def reciprocal(self) -> "GenPowerSeries":
        """1/series for a unit whose leading exponent is 0."""
        if not self.terms:
            raise DomainError("cannot invert the zero series")
        lead = max(self.terms)
        if abs(lead) > EXP_TOL:
            raise DomainError("reciprocal requires leading exponent 0")
        c0 = self.terms[lead]
        if c0 == 0:
            raise DomainError("reciprocal requires a unit leading coefficient")
        v = GenPowerSeries(truncation_order=self.truncation_order)
        for e, c in self.terms.items():
            if e != lead:
                v.add_term(e, -c / c0)
        out = GenPowerSeries(truncation_order=self.truncation_order)
        out.add_term(0.0, 1.0)
        power = GenPowerSeries(truncation_order=self.truncation_order)
        power.add_term(0.0, 1.0)
        if v.terms:
            top = max(v.terms)  # < 0
            n_max = int(math.ceil(self.truncation_order / top)) + 1
            for _ in range(n_max):
                power = power * v
                if not power.terms:
                    break
                out = out + power
        return out.scale(1.0 / c0)

    def evaluate(self, z: complex) -> complex:
        return sum(c * cmath.exp(e * cmath.log(z))
                   for e, c in self.terms.items())

    def to_json_obj(self):
        return [{"exponent": e, "re": c.real, "im": c.imag}
                for e, c in self.items()]


# --------------------------------------------------------------------------
# Exact rational machinery for the A_k

def _hankel_symbol_exact(nu: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for j in range(1, k + 1):
        out *= (4 * nu * nu - (2 * j - 1) ** 2)
        out /= 4 * j
    return out


def _quotient_coeffs(nu: Fraction, K: int):
    """q_n of 1 + T/(P - i sigma Q) = 1 + sum_{n>=1} q_n w^n, exact."""
    P = [_hankel_symbol_exact(nu, k) for k in range(K + 1)]
    T = [Fraction(0)] + [(2 * k - 1) * _hankel_symbol_exact(nu, k - 1)
                         for k in range(1, K + 1)]
    q = [Fraction(0)] * (K + 1)
    for n in range(1, K + 1):
        s = T[n]
        for m in range(1, n + 1):
            s -= P[m] * q[n - m]
        q[n] = s
    q[0] = Fraction(1)
    return q


@dataclass(frozen=True)
class TraceAsymptotics:
    """A_k of Tr G_D(mu^2) ~ sum_k A_k(g, sigma) mu^{-k}."""

    g: float
    sigma: int
    a_exact: tuple  # tuple of (re: Fraction, im: Fraction), k = 1..K

    @property
    def a(self) -> tuple:
        return tuple(complex(float(re), float(im)) for re, im in self.a_exact)

    def series(self) -> GenPowerSeries:
        out = GenPowerSeries(truncation_order=-(len(self.a_exact) + 1.0))
        for k, c in enumerate(self.a, start=1):
            out.add_term(-float(k), c)
        return out


def trace_d_coefficients(g, sigma: int, K: int) -> TraceAsymptotics:
    """Exact A_1..A_K for the D-extension trace.

    Pass g as Fraction (or an int/float convertible to one) for exact
    results; binary floats are converted exactly, so parity is exact for
    any input.
    """
    if K > 20:
        raise DomainError("K <= 20; beyond that double evaluation is noise")
    if sigma not in (1, -1):
        raise DomainError("sigma must be +1 or -1")
    gf = Fraction(g)
    q = _quotient_coeffs(gf - Fraction(1, 2), max(K - 1, 0))
    out = []
    for k in range(1, K + 1):
        n = k - 1
        # (i sigma / 2) * q_n * (-i sigma / 2)^n, plus (2g-1)/4 at k = 2
        mag = q[n] / Fraction(2) ** k
        if k % 2 == 1:
            re = Fraction(0)
            im = sigma * (-1) ** (n // 2) * mag
        else:
            re = (-1) ** ((n - 1) // 2) * mag
            im = Fraction(0)
        if k == 2:
            re += (2 * gf - 1) / 4
        out.append((re, im))
    return TraceAsymptotics(g=float(gf), sigma=sigma, a_exact=tuple(out))


def tau_series(ext: ExtensionParams, sigma: int, K: int) -> GenPowerSeries:
    """Geometric expansion of tau: sum_k (e^{sigma i pi (g-1/2)} rho)^k z^{(1-2g)k}."""
    g = ext.g
    if g == 0.5:
        raise DomainError("tau has no power expansion at g = 1/2")
    if ext.alpha == 0.0:
        raise DomainError("tau_series needs alpha != 0")
    if sigma not in (1, -1):
        raise DomainError("sigma must be +1 or -1")
    r = rho(ext)
    base = cmath.exp(1j * sigma * math.pi * (g - 0.5)) * r
    step = 1.0 - 2.0 * g
    out = GenPowerSeries(truncation_order=step * (K + 1))
    for k in range(K + 1):
        out.add_term(step * k, base ** k)
    return out


def general_trace_series(ext: ExtensionParams, sigma: int, K: int) -> GenPowerSeries:
    """Formal expansion of Tr G(z^2) on the sigma half plane.

    Exponents are {-k} from the D-trace plus {-2 + (1-2g)k} from
    tau times the trace difference; the difference itself contributes the
    single term (2g-1)/(2 z^2) because the Hankel data is even in nu.
    """
    g = ext.g
    if g == 0.5:
        # the extension dependence decays below every power; only A(1/2)
        return trace_d_coefficients(0.5, sigma, K).series()
    base = trace_d_coefficients(g, sigma, K).series()
    if ext.alpha == 0.0:
        return base
    step = 2.0 * g - 1.0
    k_tau = max(0, int(math.floor((K - 1.0) / step)))
    tau_part = tau_series(ext, sigma, k_tau)
    diff = GenPowerSeries(truncation_order=-math.inf)
    diff.add_term(-2.0, (2.0 * g - 1.0) / 2.0)
    prod = (tau_part * diff).scale(-1.0)
    prod.truncation_order = max(prod.truncation_order, -(K + 1.0))
    out = base + prod
    return out
