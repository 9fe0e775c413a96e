"""Berezin volumes, divergence, the BV Laplacian and Berezin integration."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .cartan import (HAMILTONIAN_SIGN, ConormalSpec, SuperForm, SuperVectorField,
                     hamiltonian_field, odd_symplectic, restrict)
from .charts import ChartError, SuperChart, cotangent_chart
from .coefficients import Coefficient, CoefficientError, coerce
from .grassmann import EVEN, Superfunction


class VolumeError(ValueError):
    pass


def perm_sign(seq) -> int:
    seq = list(seq)
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv & 1 else 1


def _as_atom(alpha: Coefficient) -> Coefficient:
    # keep a non-constant polynomial alpha as an atom so rho and 1/rho cancel exactly
    if alpha.is_polynomial() and not alpha.is_constant() and len(alpha.num) > 1:
        return Coefficient.atom(alpha.num)
    return alpha


@dataclass(frozen=True, eq=False)
class BerezinVolume:
    """``rho * D(dx, dpsi)`` in the chart's coordinate order."""

    chart: SuperChart
    rho: Superfunction
    alpha: Coefficient | None = None

    def __post_init__(self):
        if self.rho.chart != self.chart:
            raise ChartError("density lives on a different chart")
        if self.rho.parity() != EVEN:
            raise VolumeError("density must be even")
        try:
            self.rho.body().inverse()
        except (ZeroDivisionError, CoefficientError) as exc:
            raise VolumeError(f"density is not a unit: {exc}") from None

    def inverse_density(self) -> Superfunction:
        if self.alpha is not None and not self.rho.odd_degree():
            return Superfunction.const(self.chart, self.alpha.inverse() ** 2)
        return self.rho.inverse()

    def to_json(self) -> dict:
        out = {"chart": self.chart.to_json(), "rho": self.rho.to_json()}
        if self.alpha is not None:
            out["alpha"] = self.alpha.to_json()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def volume_from_top_form(alpha, cY: SuperChart) -> BerezinVolume:
    """Volume ``alpha^2 D(dx, dpsi)`` induced from ``alpha dx^1...dx^n``."""
    alpha = _as_atom(coerce(alpha))
    try:
        alpha.inverse()
    except (ZeroDivisionError, CoefficientError) as exc:
        raise VolumeError(f"alpha is not a unit: {exc}") from None
    for v in range(cY.p, 6):
        if alpha.depends_on_coordinate(v):
            raise VolumeError("alpha depends on a coordinate outside the chart")
    return BerezinVolume(cY, Superfunction.const(cY, alpha * alpha), alpha)


def flat_volume(cY: SuperChart) -> BerezinVolume:
    return volume_from_top_form(1, cY)


def divergence(V: SuperVectorField, mu: BerezinVolume) -> Superfunction:
    """div V = (1/rho) sum_c (-1)^{c(1+V)} d_c(V^c rho), c over all coordinates."""
    pv = V.parity()
    if pv is None:
        raise ValueError("divergence needs a homogeneous vector field")
    ch = V.chart
    if ch != mu.chart:
        raise ChartError("vector field and volume live on different charts")
    acc = Superfunction.zero(ch)
    for name, comp in V.comps.items():
        vr = comp * mu.rho
        if name in ch.odd:
            term = vr.partial_odd(ch.odd_index(name))
            if (1 + pv) & 1:
                term = -term
        else:
            term = vr.partial_even(ch.even_index(name))
        acc = acc + term
    return mu.inverse_density() * acc


def bv_delta(f: Superfunction, mu: BerezinVolume, eta: SuperForm | None = None,
             sign: int = HAMILTONIAN_SIGN) -> Superfunction:
    """Delta f = 1/2 div V_f, applied parity part by parity part."""
    eta = eta if eta is not None else odd_symplectic(f.chart)
    out = Superfunction.zero(f.chart)
    for part in f.parts():
        if part:
            out = out + divergence(hamiltonian_field(part, eta, sign), mu) * Coefficient.const("1/2")
    return out


# ---------------------------------------------------------------------------
# forms on Y  <->  superfunctions on Pi Omega^1 Y


def f_map_sign(I: tuple, n: int) -> int:
    """Sign of psi_J in F(dx^I): (-1)^{k(k-1)/2} eps(I, J), J the increasing complement.

    Equivalently F(dx^I) = d/dpsi_{i_1}( ... d/dpsi_{i_k}(psi_1...psi_n)).
    """
    J = tuple(a for a in range(n) if a not in I)
    k = len(I)
    return perm_sign(I + J) * (-1 if (k * (k - 1) // 2) & 1 else 1)


def F_map(w: SuperForm, alpha=1, cY: SuperChart | None = None) -> Superfunction:
    """F(w) = alpha^{-1} w(dx^a -> d/dpsi_a) applied to psi_1...psi_n."""
    Y = w.chart
    cY = cY or cotangent_chart(Y)
    n = Y.p
    a_inv = _as_atom(coerce(alpha)).inverse()
    out = Superfunction.zero(cY)
    for I, c in w.even_components().items():
        if any(not 0 <= a < n for a in I):
            raise IndexError("component index out of range")
        J = tuple(a for a in range(n) if a not in I)
        out = out + Superfunction(cY, {J: c * a_inv * f_map_sign(I, n)})
    return out


def F_inverse(phi: Superfunction, alpha=1, Y: SuperChart | None = None) -> SuperForm:
    cY = phi.chart
    n = cY.p
    Y = Y or SuperChart(cY.even, (), "base")
    a = _as_atom(coerce(alpha))
    comps = {}
    for J, c in phi.terms.items():
        I = tuple(b for b in range(n) if b not in J)
        comps[I] = c * a * f_map_sign(I, n)
    return SuperForm(Y, {(I, ()): c for I, c in comps.items()})


def check_F_chain(w: SuperForm, alpha=1, sign: int = HAMILTONIAN_SIGN) -> bool:
    """Exact test of F(dw) = Delta F(w)."""
    cY = cotangent_chart(w.chart)
    mu = volume_from_top_form(alpha, cY)
    eta = odd_symplectic(cY)
    lhs = F_map(w.d(), alpha, cY)
    rhs = bv_delta(F_map(w, alpha, cY), mu, eta, sign)
    return lhs == rhs


# ---------------------------------------------------------------------------
# integration


def _torus_average(c: Coefficient, chart: SuperChart) -> Coefficient:
    if not chart.is_torus():
        raise ChartError("Berezin integration is only defined over torus charts")
    return c.zero_mode(range(chart.p))


def berezin_integral(f: Superfunction, mu: BerezinVolume) -> Coefficient:
    """Coefficient of psi_1...psi_q in f*rho averaged over the torus."""
    if f.chart != mu.chart:
        raise ChartError("function and volume live on different charts")
    top = (f * mu.rho).coefficient(range(f.chart.q))
    return _torus_average(top, f.chart)


@dataclass(frozen=True, eq=False)
class HalfDensity:
    """Square root of a restricted volume, on a conormal chart."""

    spec: ConormalSpec
    alpha: Coefficient
    parent: BerezinVolume

    @property
    def chart(self) -> SuperChart:
        return self.spec.subchart()

    def squared(self) -> Coefficient:
        return self.alpha * self.alpha

    def integrate(self, phi: Superfunction) -> Coefficient:
        """Integral over the conormal, oriented so that F(vol_X) integrates to +1."""
        sub = self.chart
        if phi.chart != sub:
            raise ChartError("function does not live on the conormal chart")
        top = (phi * self.alpha).coefficient(range(sub.q))
        return _torus_average(top, sub) * f_map_sign(self.spec.tangent, self.spec.n)


def half_density(mu: BerezinVolume, C: ConormalSpec) -> HalfDensity:
    if mu.alpha is None or mu.rho.odd_degree():
        raise VolumeError("half densities need a density given as alpha^2")
    if C.chart != mu.chart:
        raise ChartError("conormal lives on a different chart")
    sub = C.subchart()
    a = Superfunction.const(C.chart, mu.alpha).substitute(C.inclusion(), sub).body()
    try:
        a.inverse()
    except (ZeroDivisionError, CoefficientError):
        raise VolumeError("alpha vanishes on the conormal") from None
    return HalfDensity(C, a, mu)


def integrate_over_submanifold(w: SuperForm, normal) -> Coefficient:
    """Integral of w over the coordinate sub-torus {x^a = 0 : a in normal}."""
    Y = w.chart
    T = tuple(a for a in range(Y.p) if a not in set(normal))
    sub = SuperChart(tuple(Y.even[a] for a in T), ())
    zero = {Y.even[a].name: 0 for a in normal}
    c = w.even_components().get(T)
    if c is None:
        return Coefficient.const(0)
    restricted = Superfunction.const(Y, c).substitute(zero, sub).body()
    return _torus_average(restricted, sub)


def schwarz_integral(w: SuperForm, C: ConormalSpec, alpha=1) -> tuple[Coefficient, Coefficient]:
    """(integral of F(w) over the conormal against the half density, integral of w over X)."""
    mu = volume_from_top_form(alpha, C.chart)
    phi = restrict(F_map(w, alpha, C.chart), C)
    lhs = half_density(mu, C).integrate(phi)
    rhs = integrate_over_submanifold(w, C.normal)
    return lhs, rhs


def conormal_integrals(phi: Superfunction, alpha=1) -> dict[tuple, Coefficient]:
    """Integrals of phi over every coordinate conormal, keyed by the normal set."""
    cY = phi.chart
    mu = volume_from_top_form(alpha, cY)
    out = {}
    for r in range(cY.p + 1):
        for S in combinations(range(cY.p), r):
            C = ConormalSpec(cY, frozenset(S))
            out[S] = half_density(mu, C).integrate(restrict(phi, C))
    return out
