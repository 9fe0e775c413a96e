"""Tangent-space dimension counts and the real-slice linearisation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, permutations, product

from .bv import BerezinVolume, bv_delta, divergence, perm_sign
from .cartan import ConormalSpec, hamiltonian_field, odd_symplectic
from .charts import PI_OMEGA1, ChartError, SuperChart, base_chart, cotangent_chart
from .coefficients import IMAG, TPARAM, Coefficient, coerce
from .grassmann import EVEN, ODD, GrassmannError, Superfunction
from .hodge import MAX_M, RangeError, betti, build_complex, mclean_operator_kernel


@dataclass
class ModuliReport:
    target: str
    mclean_dim: int | None
    even_dim: int
    odd_dim: int
    contributions: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    @property
    def extended_total(self) -> int:
        return self.even_dim + self.odd_dim

    def to_json(self) -> dict:
        out = {"target": self.target, "even": self.even_dim, "odd": self.odd_dim,
               "extended": self.extended_total,
               "contributions": self.contributions, "provenance": self.provenance}
        if self.mclean_dim is not None:
            out["mclean"] = self.mclean_dim
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def torus_moduli(m: int, K: int = 1) -> ModuliReport:
    """McLean and extended tangent dimensions for a flat special Lagrangian torus."""
    if not 1 <= m <= MAX_M:
        raise RangeError(f"m must lie in 1..{MAX_M}, got {m}")
    c = build_complex(m, K)
    rep = betti(c)
    kernel = mclean_operator_kernel(c)
    if kernel != rep.total:
        raise ArithmeticError(f"Betti sum {rep.total} != ker(d, *d*) {kernel}")
    # the parity shift puts odd-degree classes in even degree
    even = sum(b for k, b in enumerate(rep.betti) if k % 2)
    odd = sum(b for k, b in enumerate(rep.betti) if not k % 2)
    return ModuliReport(
        target=f"torus m={m}",
        mclean_dim=rep.betti[1],
        even_dim=even,
        odd_dim=odd,
        contributions={f"H{k}": b for k, b in enumerate(rep.betti)},
        provenance={"mclean": "hodge.betti degree 1",
                    "extended": "hodge.betti total, cross-checked by hodge.mclean_operator_kernel"},
    )


def special_legendrian_tangent_dim(m: int, K: int = 1) -> int:
    """Closed and coclosed forms in the truncated complex."""
    return mclean_operator_kernel(build_complex(m, K))


# ---------------------------------------------------------------------------
# rational curves in projective space


@dataclass(frozen=True)
class BundleSpec:
    """Normal bundle O(d_1) + ... + O(d_r) over CP^1."""

    degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if not self.degrees:
            raise ValueError("need at least one line bundle")

    @property
    def rank(self) -> int:
        return len(self.degrees)


def h0_line_bundle(d: int) -> int:
    return d + 1 if d >= 0 else 0


def exact_lagrangian_zariski_dim(b: BundleSpec) -> ModuliReport:
    """Graded h^0(CP^1, Lambda^k N): odd k count as even, even k >= 2 as odd."""
    contrib = {}
    even = odd = 0
    for k in range(1, b.rank + 1):
        h = sum(h0_line_bundle(sum(sub)) for sub in combinations(b.degrees, k))
        contrib[f"Lambda{k}"] = h
        if k % 2:
            even += h
        else:
            odd += h
    return ModuliReport(
        target="p1 degrees=" + ",".join(str(d) for d in b.degrees),
        mclean_dim=None, even_dim=even, odd_dim=odd, contributions=contrib,
        provenance={"graded": "h0(O(d)) = d+1 on wedge powers of the normal bundle"},
    )


def _section_count(C: ConormalSpec, K: int) -> int:
    sub = C.subchart()
    if not sub.is_torus():
        raise ChartError("global sections are counted on torus conormals only")
    if K < 0:
        raise RangeError("cutoff must be non-negative")
    freqs = sum(1 for _ in product(range(-K, K + 1), repeat=sub.p))
    return freqs * 2 ** sub.q


def exact_lagrangian_tangent_dim(C: ConormalSpec, K: int = 0) -> int:
    """dim of truncated global functions on the conormal, modulo constants."""
    return _section_count(C, K) - 1


def legendrian_tangent_dim(C: ConormalSpec, K: int = 0) -> int:
    """Same count with the constants restored by the contact direction."""
    return exact_lagrangian_tangent_dim(C, K) + 1


# ---------------------------------------------------------------------------
# linearisation of the imaginary part of the volume along the real slice


def _det(M):
    n = len(M)
    out = None
    for perm in permutations(range(n)):
        term = None
        for i, j in enumerate(perm):
            term = M[i][j] if term is None else _trunc(term * M[i][j])
        term = term * perm_sign(perm)
        out = term if out is None else out + term
    return out


def _trunc(f: Superfunction) -> Superfunction:
    """Drop t^2 and higher; I^2 = -1 applied on the way."""
    def cut(c):
        c = c.reduce_imag()
        return c.part(TPARAM, 0) + c.part(TPARAM, 1) * Coefficient.var("t")
    return f.map_coefficients(cut)


def _tinv(f: Superfunction) -> Superfunction:
    """Inverse modulo t^2 of an even f = f0 + t f1 with f0 invertible."""
    f0 = f.map_coefficients(lambda c: c.part(TPARAM, 0))
    f1 = f.map_coefficients(lambda c: c.part(TPARAM, 1))
    g0 = f0.inverse()
    return _trunc(g0 - g0 * f1 * g0 * Coefficient.var("t"))


def berezinian(A, B, Cm, D, chart):
    """Ber [[A, B], [C, D]] = det(A - B D^{-1} C) / det D, modulo t^2."""
    n = len(A)
    if not n:
        return Superfunction.const(chart)
    inv_det_d = _tinv(_det(D))
    Dinv = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[D[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            cof = _det(minor) if minor else Superfunction.const(chart)
            Dinv[i][j] = _trunc(cof * inv_det_d) * (1 if not (i + j) % 2 else -1)
    S = [[A[i][j] - sum((_trunc(B[i][k] * Dinv[k][l] * Cm[l][j]) for k in range(n) for l in range(n)),
                        Superfunction.zero(chart))
          for j in range(n)] for i in range(n)]
    return _trunc(_det(S) * inv_det_d)


def real_slice_chart(m: int) -> SuperChart:
    """Chart (x^alpha ; psi-dot_alpha) of the real slice, alpha = 1..m."""
    if not 1 <= m <= 3:
        raise RangeError("real slice model supports m = 1, 2, 3")
    return cotangent_chart(base_chart(m))


def real_slice_linearization(Psi: Superfunction, rho, m: int | None = None):
    """First-order variation of Im of the restricted volume, over Re.

    The deformed slice is z^alpha = x^alpha + i t dPsi/dpsi-dot_alpha,
    zeta_alpha = psi-dot_alpha - i t dPsi/dx^alpha.  The restricted volume is
    rho(z, zeta) Ber(d(z, zeta)/d(x, psi-dot)); its t-linear imaginary part
    divided by rho_0 = rho(x, psi-dot) is returned together with div V_Psi
    for the volume rho_0.
    """
    ch = Psi.chart
    m = ch.p if m is None else m
    if ch.p != m or ch.provenance != PI_OMEGA1:
        raise ChartError("Psi must live on the (m|m) real slice chart")
    if Psi and Psi.parity() != ODD:
        raise GrassmannError("Psi must be odd so that the graph is a super map")
    rho = rho if isinstance(rho, Superfunction) else Superfunction.const(ch, coerce(rho))
    if rho.parity() != EVEN:
        raise GrassmannError("rho must be even")
    it = Superfunction.const(ch, Coefficient.var("I") * Coefficient.var("t"))
    images = {}
    for a in range(m):
        images[ch.even_names[a]] = Superfunction.x(ch, a) + it * Psi.partial_odd(a)
        images[ch.odd[a]] = Superfunction.psi(ch, a) - it * Psi.partial_even(a)
    z = [images[ch.even_names[a]] for a in range(m)]
    zeta = [images[ch.odd[a]] for a in range(m)]
    A = [[z[i].partial_even(j) for j in range(m)] for i in range(m)]
    B = [[z[i].partial_odd(j) for j in range(m)] for i in range(m)]
    Cm = [[zeta[i].partial_even(j) for j in range(m)] for i in range(m)]
    D = [[zeta[i].partial_odd(j) for j in range(m)] for i in range(m)]
    vol = _trunc(_trunc(rho.substitute(images, ch)) * berezinian(A, B, Cm, D, ch))

    def take(f, var, power):
        return f.map_coefficients(lambda c: c.reduce_imag().part(var, power))

    first = take(vol, TPARAM, 1)
    im = take(first, IMAG, 1)
    lhs = im * rho.inverse()
    mu = BerezinVolume(ch, rho)
    rhs = divergence(hamiltonian_field(Psi, odd_symplectic(ch)), mu) if Psi else Superfunction.zero(ch)
    return lhs, rhs


def real_slice_delta(Psi: Superfunction, rho) -> Superfunction:
    """Delta Psi for the volume rho on the real slice chart."""
    ch = Psi.chart
    rho = rho if isinstance(rho, Superfunction) else Superfunction.const(ch, coerce(rho))
    return bv_delta(Psi, BerezinVolume(ch, rho))
