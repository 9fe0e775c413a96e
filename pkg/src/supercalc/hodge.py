"""Truncated Fourier de Rham complex of the flat torus T^m.

Basis elements are ``e_k dx^I`` with ``e_k = exp(2 pi i <k, x>)``,
``|k|_inf <= K`` and ``I`` an increasing index tuple.  Since
``d e_k = tau * sum k_a e_k dx^a`` with ``tau = 2 pi i``, every matrix below
is an integer matrix times a power of tau, and rank computations are exact
over the rationals.  Both d and the Hodge star preserve the frequency k, so
all linear algebra is done one frequency block at a time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, product

from . import linalg
from .bv import bv_delta, flat_volume, perm_sign
from .cartan import ConormalSpec, SuperForm
from .charts import PI_OMEGA1, SuperChart, cotangent_chart, torus
from .coefficients import Coefficient, frac_str
from .grassmann import Superfunction

MAX_M = 4


class RangeError(ValueError):
    pass


def star_sign(I: tuple, m: int) -> tuple[int, tuple]:
    """*dx^I = eps(I, J) dx^J with J the increasing complement."""
    J = tuple(a for a in range(m) if a not in I)
    return perm_sign(I + J), J


def wedge_sign(a: int, I: tuple) -> tuple[int, tuple] | None:
    """dx^a dx^I = sign * dx^{sorted(a, I)}."""
    if a in I:
        return None
    pos = sum(1 for b in I if b < a)
    return (-1 if pos & 1 else 1), tuple(sorted(I + (a,)))


@dataclass(frozen=True)
class FourierComplex:
    m: int
    K: int

    def __post_init__(self):
        if not 1 <= self.m <= MAX_M:
            raise RangeError(f"m must lie in 1..{MAX_M}, got {self.m}")
        if self.K < 1:
            raise RangeError(f"K must be at least 1, got {self.K}")

    @cached_property
    def frequencies(self) -> tuple[tuple[int, ...], ...]:
        return tuple(product(range(-self.K, self.K + 1), repeat=self.m))

    def multi_indices(self, p: int) -> tuple[tuple[int, ...], ...]:
        return tuple(combinations(range(self.m), p)) if 0 <= p <= self.m else ()

    def basis(self, p: int) -> list[tuple[tuple, tuple]]:
        return [(k, I) for k in self.frequencies for I in self.multi_indices(p)]

    @property
    def size(self) -> int:
        return len(self.frequencies) * 2 ** self.m

    # maps on a single basis element; images are {(k, J): integer}, tau factored out
    def d_image(self, k: tuple, I: tuple) -> dict:
        out = {}
        for a in range(self.m):
            if k[a]:
                r = wedge_sign(a, I)
                if r is not None:
                    s, J = r
                    out[(k, J)] = out.get((k, J), 0) + s * k[a]
        return {key: v for key, v in out.items() if v}

    def star_image(self, k: tuple, I: tuple) -> dict:
        s, J = star_sign(I, self.m)
        return {(k, J): s}

    def codiff_image(self, k: tuple, I: tuple) -> dict:
        """*d* on e_k dx^I (one power of tau factored out)."""
        out = {}
        for key1, s1 in self.star_image(k, I).items():
            for key2, s2 in self.d_image(*key1).items():
                for key3, s3 in self.star_image(*key2).items():
                    out[key3] = out.get(key3, 0) + s1 * s2 * s3
        return {key: v for key, v in out.items() if v}

    # block matrices for one frequency
    def block(self, op: str, k: tuple, p: int) -> tuple[dict, int, int]:
        src = self.multi_indices(p)
        tgt_deg = p + 1 if op == "d" else p - 1 if op == "codiff" else self.m - p
        tgt = {J: i for i, J in enumerate(self.multi_indices(tgt_deg))}
        fn = {"d": self.d_image, "codiff": self.codiff_image, "star": self.star_image}[op]
        M = {}
        for j, I in enumerate(src):
            for (_, J), v in fn(k, I).items():
                M[(tgt[J], j)] = v
        return M, len(tgt), len(src)

    def rank_d(self, p: int) -> int:
        if not 0 <= p < self.m:
            return 0
        return sum(linalg.rank(*self.block("d", k, p)) for k in self.frequencies)

    def dim(self, p: int) -> int:
        return len(self.basis(p))

    def kernel_d_codiff(self, p: int) -> list[tuple[tuple, dict]]:
        """Basis of ker d cap ker *d* in degree p, as (k, {I: coefficient})."""
        out = []
        src = self.multi_indices(p)
        for k in self.frequencies:
            D, nd, nc = self.block("d", k, p)
            S, ns, _ = self.block("codiff", k, p)
            for v in linalg.kernel(linalg.vstack(D, S, nd), nd + ns, nc):
                out.append((k, {src[j]: c for j, c in v.items()}))
        return out

    def form(self, k: tuple, I: tuple, coeff=1) -> SuperForm:
        return SuperForm.from_components(torus(self.m), {I: Coefficient.mode(k, coeff)})

    def d_matrix_check(self) -> bool:
        """The integer matrices agree with the symbolic exterior derivative."""
        tau = Coefficient.tau()
        for p in range(self.m + 1):
            for k, I in self.basis(p):
                img = SuperForm.zero(torus(self.m))
                for (kk, J), v in self.d_image(k, I).items():
                    img = img + self.form(kk, J, v) * tau
                if img != self.form(k, I).d():
                    return False
        return True

    def dd_zero(self) -> bool:
        for p in range(self.m + 1):
            for k, I in self.basis(p):
                acc = {}
                for key, v in self.d_image(k, I).items():
                    for key2, v2 in self.d_image(*key).items():
                        acc[key2] = acc.get(key2, 0) + v * v2
                if any(acc.values()):
                    return False
        return True

    def star_star_sign(self, p: int) -> set[int]:
        signs = set()
        for k, I in self.basis(p):
            ((key, s1),) = self.star_image(k, I).items()
            ((key2, s2),) = self.star_image(*key).items()
            assert key2 == (k, I)
            signs.add(s1 * s2)
        return signs

    def adjoint_sign(self, p: int) -> int | None:
        """s with d_p^dagger = s * (*d*) on degree p+1 under the L2 product.

        The basis is orthonormal and tau-bar = -tau, so d^dagger is -A^T when
        d = tau * A.  None when no single sign works.
        """
        signs = set()
        for k in self.frequencies:
            A, _, _ = self.block("d", k, p)
            B, _, _ = self.block("codiff", k, p + 1)
            neg_at = {key: -v for key, v in linalg.transpose(A).items()}
            if not neg_at and not B:
                continue
            for s in (1, -1):
                if {key: s * v for key, v in B.items()} == neg_at:
                    signs.add(s)
                    break
            else:
                return None
        if len(signs) > 1:
            return None
        return signs.pop() if signs else 1


@dataclass
class HarmonicReport:
    m: int
    K: int
    betti: list[int]
    kernel_per_degree: list[int]
    harmonic_basis: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return sum(self.betti)

    @property
    def kernel_d_stard(self) -> int:
        return sum(self.kernel_per_degree)

    @property
    def harmonic_is_constant(self) -> bool:
        return all(not any(k) for k, _ in self.harmonic_basis)

    def to_json(self) -> dict:
        return {"m": self.m, "K": self.K, "betti": self.betti, "total": self.total,
                "kernel_d_stard": self.kernel_d_stard}


def build_complex(m: int, K: int) -> FourierComplex:
    return FourierComplex(m, K)


def betti(c: FourierComplex) -> HarmonicReport:
    b, ker = [], []
    basis = []
    for p in range(c.m + 1):
        bp = c.dim(p) - c.rank_d(p) - c.rank_d(p - 1)
        h = c.kernel_d_codiff(p)
        if len(h) != bp:
            raise ArithmeticError(f"degree {p}: betti {bp} but harmonic kernel {len(h)}")
        b.append(bp)
        ker.append(len(h))
        basis.extend(h)
    return HarmonicReport(c.m, c.K, b, ker, basis)


def mclean_operator_kernel(c: FourierComplex) -> int:
    """dim ker of the stacked operator (d, *d*) on all of the complex."""
    return sum(len(c.kernel_d_codiff(p)) for p in range(c.m + 1))


# ---------------------------------------------------------------------------
# comparison of Delta with *d* on the conormal of a flat torus


def identification_sign(m: int, p: int) -> int:
    if m % 2 == 0:
        return 1
    return -1 if (p * (p - 1) // 2) & 1 else 1


def fiber_chart(m: int, C: ConormalSpec | None = None) -> SuperChart:
    """Chart (x^alpha ; psi-dot_alpha) of the conormal, with x^alpha paired to psi-dot_alpha."""
    if C is None:
        return cotangent_chart(torus(m))
    sub = C.subchart()
    if sub.p != m or sub.q != m:
        raise RangeError("conormal is not a Lagrangian torus fibre of the right dimension")
    return SuperChart(sub.even, sub.odd, PI_OMEGA1)


def identify(c: FourierComplex, k: tuple, I: tuple, coeff: Coefficient, chart: SuperChart) -> Superfunction:
    """e_k dx^I -> sigma_p e_k psi-dot_I."""
    return Superfunction(chart, {I: Coefficient.mode(k) * coeff * identification_sign(c.m, len(I))})


def _ratio(a: Superfunction, b: Superfunction) -> Fraction | None:
    # both sides are monomials times tau**j; compare the rational parts
    mono, cb = next(iter(b.terms.items()))
    ca = a.coefficient(mono)
    if len(ca.num) != 1 or len(cb.num) != 1 or ca.atoms or cb.atoms:
        return None
    (ea, va), = ca.num.items()
    (eb, vb), = cb.num.items()
    if ea != eb:
        return None
    return Fraction(str(va / vb))


@dataclass
class BridgeReport:
    constant: Fraction | None
    cases: int
    deviations: list

    @property
    def max_deviation(self) -> str:
        return "0" if not self.deviations else "nonzero"

    def to_json(self) -> dict:
        return {"constant": None if self.constant is None else frac_str(self.constant),
                "cases": self.cases, "max_deviation": self.max_deviation,
                "failures": [list(d) for d in self.deviations]}


def delta_hodge_bridge(c: FourierComplex, C: ConormalSpec | None = None) -> BridgeReport:
    """Sweep the basis: Delta(iota w) against iota(2 *d* w).

    The single constant with Delta iota = const * iota(2 *d*) is measured on
    the first case where both sides are nonzero and then required everywhere.
    """
    chart = fiber_chart(c.m, C)
    mu = flat_volume(chart)
    tau = Coefficient.tau()
    const = None
    dev = []
    cases = 0
    for p in range(c.m + 1):
        for k, I in c.basis(p):
            cases += 1
            lhs = bv_delta(identify(c, k, I, Coefficient.const(1), chart), mu)
            rhs = Superfunction.zero(chart)
            for (kk, J), v in c.codiff_image(k, I).items():
                rhs = rhs + identify(c, kk, J, tau * (2 * v), chart)
            if const is None and lhs and rhs:
                const = _ratio(lhs, rhs)
            scaled = rhs * Coefficient.const(const) if const is not None else rhs
            if lhs != scaled:
                dev.append((list(k), list(I)))
    return BridgeReport(const, cases, dev)


def hodge_report(m: int, K: int, bridge: bool = True) -> dict:
    c = build_complex(m, K)
    rep = betti(c)
    out = rep.to_json()
    if mclean_operator_kernel(c) != rep.total:
        raise ArithmeticError("kernel of (d, *d*) disagrees with the Betti sum")
    if bridge:
        out["bridge"] = delta_hodge_bridge(c).to_json()
    return out


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True)
