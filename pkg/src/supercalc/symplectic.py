"""Even symplectic structures, the function omega-hat and its odd vector field Q."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .cartan import (ConormalSpec, SuperForm, SuperVectorField, hamiltonian_field,
                     odd_symplectic, restrict)
from .bv import perm_sign
from .charts import BASE, ChartError, SuperChart, base_chart, cotangent_chart
from .coefficients import ONE, ZERO, Coefficient, coerce
from .grassmann import ODD, GrassmannError, Superfunction


class SymplecticError(ValueError):
    pass


def determinant(M: list[list[Coefficient]]) -> Coefficient:
    n = len(M)
    out = ZERO
    for perm in permutations(range(n)):
        term = Coefficient.const(perm_sign(perm))
        for i, j in enumerate(perm):
            term = term * M[i][j]
            if not term:
                break
        out = out + term
    return out


def inverse_matrix(M: list[list[Coefficient]]) -> list[list[Coefficient]]:
    """Exact inverse via the adjugate; the determinant becomes an atom."""
    n = len(M)
    det = determinant(M)
    if not det:
        raise SymplecticError("matrix is degenerate")
    if det.is_polynomial() and len(det.num) > 1:
        det = Coefficient.atom(det.expanded())
    det_inv = det.inverse()
    inv = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [[M[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            cof = determinant(minor) if minor else ONE
            inv[i][j] = cof * det_inv if not (i + j) & 1 else -(cof * det_inv)
    return inv


@dataclass(frozen=True, eq=False)
class EvenSymplectic:
    """omega = sum_{a<b} omega_ab dx^a dx^b on a purely even 2m-chart."""

    chart: SuperChart
    matrix: tuple
    check_closed: bool = True

    def __post_init__(self):
        n = self.chart.p
        M = tuple(tuple(coerce(c) for c in row) for row in self.matrix)
        object.__setattr__(self, "matrix", M)
        if self.chart.q:
            raise ChartError("symplectic forms live on purely even charts")
        if len(M) != n or any(len(r) != n for r in M):
            raise SymplecticError("matrix shape does not match the chart")
        if n % 2:
            raise SymplecticError("odd-dimensional chart cannot be symplectic")
        for a in range(n):
            for b in range(n):
                if M[a][b] != -M[b][a]:
                    raise SymplecticError("omega is not antisymmetric")
        if self.check_closed and not self.form().d().is_zero():
            raise SymplecticError("omega is not closed")
        object.__setattr__(self, "_inverse", inverse_matrix([list(r) for r in M]) if n else [])

    @property
    def m(self) -> int:
        return self.chart.p // 2

    @property
    def inverse(self) -> list[list[Coefficient]]:
        return self._inverse

    @classmethod
    def from_form(cls, w: SuperForm, check_closed: bool = True) -> "EvenSymplectic":
        n = w.chart.p
        M = [[ZERO] * n for _ in range(n)]
        for I, c in w.even_components().items():
            if len(I) != 2:
                raise SymplecticError("not a 2-form")
            a, b = I
            M[a][b] = M[a][b] + c
            M[b][a] = M[b][a] - c
        return cls(w.chart, tuple(tuple(r) for r in M), check_closed)

    def form(self) -> SuperForm:
        n = self.chart.p
        comps = {(a, b): self.matrix[a][b] for a in range(n) for b in range(a + 1, n)
                 if self.matrix[a][b]}
        return SuperForm.from_components(self.chart, comps)

    def is_closed(self) -> bool:
        return self.form().d().is_zero()


def darboux(m: int, chart: SuperChart | None = None) -> EvenSymplectic:
    """sum_i dx^i dx^{m+i}; the planes {x^{m+i} = 0} are Lagrangian."""
    chart = chart or base_chart(2 * m)
    n = 2 * m
    M = [[ZERO] * n for _ in range(n)]
    for i in range(m):
        M[i][m + i] = ONE
        M[m + i][i] = -ONE
    return EvenSymplectic(chart, tuple(tuple(r) for r in M))


def perturbed(beta: SuperForm, base: EvenSymplectic | None = None) -> EvenSymplectic:
    """omega_0 + d(beta) for a polynomial 1-form beta; closed by construction."""
    base = base or darboux(beta.chart.p // 2, beta.chart)
    return EvenSymplectic.from_form(base.form() + beta.d())


def omega_hat(w: EvenSymplectic, cY: SuperChart | None = None) -> Superfunction:
    """sum_{a,b} omega^{ab} psi_a psi_b."""
    cY = cY or cotangent_chart(w.chart)
    out = Superfunction.zero(cY)
    n = w.chart.p
    for a in range(n):
        for b in range(n):
            c = w.inverse[a][b]
            if c:
                out = out + Superfunction.psi(cY, a) * Superfunction.psi(cY, b) * c
    return out


def q_field(w: EvenSymplectic, cY: SuperChart | None = None) -> SuperVectorField:
    """Q with iota_Q eta = -d(omega-hat), the Hamiltonian field of omega-hat."""
    cY = cY or cotangent_chart(w.chart)
    return hamiltonian_field(omega_hat(w, cY), odd_symplectic(cY))


def isotropy_check(C: ConormalSpec, w: EvenSymplectic) -> bool:
    return restrict(omega_hat(w, C.chart), C).is_zero()


def is_coisotropic_plane(w: EvenSymplectic, normal) -> bool:
    """Direct test on {x^a = 0, a in normal}: omega^{-1} vanishes on its conormal directions."""
    normal = sorted(normal)
    zero = {w.chart.even[a].name: 0 for a in normal}
    for a in normal:
        for b in normal:
            c = Superfunction.const(w.chart, w.inverse[a][b]).substitute(zero)
            if c:
                return False
    return True


def is_lagrangian_plane(w: EvenSymplectic, normal) -> bool:
    """omega restricted to the plane vanishes and the plane has half dimension."""
    normal = set(normal)
    tangent = [a for a in range(w.chart.p) if a not in normal]
    if len(tangent) != w.m:
        return False
    zero = {w.chart.even[a].name: 0 for a in normal}
    return all(not Superfunction.const(w.chart, w.matrix[a][b]).substitute(zero)
               for a in tangent for b in tangent)


# ---------------------------------------------------------------------------
# Q restricted to a Lagrangian conormal


@dataclass(frozen=True)
class DeRhamTable:
    """Rows (w, iota(w), Q|(iota w), iota(dw)) for a basis of forms on X."""

    generators: dict
    rows: tuple

    @property
    def holds(self) -> bool:
        return all(qf == dw for _, _, qf, dw in self.rows)


def _iota(w: SuperForm, images: dict[int, Superfunction], sub: SuperChart):
    out = Superfunction.zero(sub)
    for I, c in w.even_components().items():
        term = Superfunction.const(sub, c)
        for a in I:
            term = term * images[a]
        out = out + term
    return out


def q_restriction_as_derham(C: ConormalSpec, w: EvenSymplectic, degree: int = 2) -> DeRhamTable:
    """Compare Q|_X with d under iota(dx^alpha) := Q|_X(x^alpha).

    The basis runs over monomial (or Fourier) coefficients up to ``degree``
    times every dx^I on X.
    """
    from itertools import combinations, product
    if not isotropy_check(C, w):
        raise SymplecticError("conormal is not isotropic for omega")
    Q = q_field(w, C.chart).restrict_tangent(C)
    sub = C.subchart()
    Xchart = SuperChart(sub.even, (), BASE)
    r = Xchart.p
    images = {a: Q.apply(Superfunction.x(sub, a)) for a in range(r)}
    if Xchart.is_torus():
        coeffs = [Coefficient.mode(k) for k in product(range(-1, 2), repeat=r)]
    else:
        coeffs = [ONE]
        for a in range(r):
            coeffs = [c * Coefficient.x(a, e) for c in coeffs for e in range(degree + 1)]
        coeffs = [c for c in coeffs if sum(next(iter(c.num))[:r]) <= degree]
    rows = []
    for k in range(r + 1):
        for I in combinations(range(r), k):
            for c in coeffs:
                form = SuperForm.from_components(Xchart, {I: c})
                f = _iota(form, images, sub)
                rows.append((form, f, Q.apply(f), _iota(form.d(), images, sub)))
    return DeRhamTable({Xchart.even_names[a]: images[a] for a in range(r)}, tuple(rows))


# ---------------------------------------------------------------------------
# deformations of the conormal by graphs of odd functions


def lagrangian_conormal(m: int, chart: SuperChart | None = None) -> ConormalSpec:
    """Conormal of {x^{m+i} = 0} in the 2m-dimensional Darboux model."""
    Y = chart or base_chart(2 * m)
    return ConormalSpec(cotangent_chart(Y), frozenset(range(m, 2 * m)))


def graph_map(f: Superfunction, C: ConormalSpec) -> dict[str, Superfunction]:
    """x^adot -> df/dpsi_adot and psi_alpha -> -df/dx^alpha, other coordinates fixed."""
    sub = C.subchart()
    if f.chart != sub:
        raise ChartError("f must live on the conormal chart")
    if f and f.parity() != ODD:
        raise GrassmannError("the generating function must be odd")
    ch = C.chart
    out = {}
    for a in C.normal:
        out[ch.even_names[a]] = f.partial_odd(sub.odd_index(ch.odd[a]))
    for a in C.tangent:
        out[ch.odd[a]] = -f.partial_even(sub.even_index(ch.even_names[a]))
    return out


def deformed_isotropy_closedness(f: Superfunction, w: EvenSymplectic,
                                 C: ConormalSpec | None = None) -> Superfunction:
    """omega-hat pulled back to X along the graph of df."""
    C = C or lagrangian_conormal(w.m, w.chart)
    return omega_hat(w, C.chart).substitute(graph_map(f, C), C.subchart())


def q0_on_conormal(w: EvenSymplectic, C: ConormalSpec | None = None) -> SuperVectorField:
    C = C or lagrangian_conormal(w.m, w.chart)
    return q_field(w, C.chart).restrict_tangent(C)
