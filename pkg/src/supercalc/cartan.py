"""Cartan calculus on super charts.

Sign table: the form algebra on a chart is the supercommutative algebra
generated by ``x`` (even), ``psi`` (odd), ``dx`` (odd) and ``dpsi`` (even),
with a single total parity.  ``d`` is the odd derivation with ``d(x) = dx``,
``d(psi) = dpsi``; this gives ``d(sum dx^a psi_a) = -sum dx^a dpsi_a``.

Storage of a form term: ``coeff(x) * g_M * dpsi^E`` where ``M`` is a sorted
tuple over the combined odd generators (``psi_0 .. psi_{q-1}`` then
``dx^0 .. dx^{p-1}``) and ``E`` the exponents of the commuting ``dpsi``.

Contraction ``iota_V`` is the derivation of parity ``p(V) + 1`` acting from the
left with ``iota_V(dc) = V^c``; a vector field acts on functions as
``V(f) = sum V^c * d_c f`` with left derivatives, so ``iota_V(df) = V(f)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .charts import (CONTACT, PI_OMEGA1, ChartError, EvenCoord, SuperChart)
from .coefficients import ONE, Coefficient, coerce
from .grassmann import EVEN, ODD, Superfunction, merge, remove_left

# V_f is normalised by  iota_{V_f} eta = HAMILTONIAN_SIGN * df.  The value is
# pinned by F(dw) = Delta F(w) and by the real-slice linearisation; flipping it
# breaks both (see tests).
HAMILTONIAN_SIGN = -1


class DegenerateFormError(ValueError):
    pass


def _fmerge(k1: tuple, k2: tuple):
    r = merge(k1[0], k2[0])
    if r is None:
        return None
    s, m = r
    e = k1[1] if not any(k2[1]) else tuple(a + b for a, b in zip(k1[1], k2[1]))
    return s, (m, e)


class SuperForm:
    """Immutable differential form on a super chart."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart: SuperChart, terms: Mapping | None = None):
        self.chart = chart
        self.terms: dict[tuple, Coefficient] = {k: c for k, c in (terms or {}).items() if c}

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, chart: SuperChart) -> "SuperForm":
        return cls(chart)

    @classmethod
    def from_function(cls, f: Superfunction) -> "SuperForm":
        zero_e = (0,) * f.chart.q
        return cls(f.chart, {(m, zero_e): c for m, c in f.terms.items()})

    @classmethod
    def dx(cls, chart: SuperChart, a: int) -> "SuperForm":
        if not 0 <= a < chart.p:
            raise ChartError(f"even index {a} out of range")
        return cls(chart, {((chart.q + a,), (0,) * chart.q): ONE})

    @classmethod
    def dpsi(cls, chart: SuperChart, j: int) -> "SuperForm":
        if not 0 <= j < chart.q:
            raise ChartError(f"odd index {j} out of range")
        e = [0] * chart.q
        e[j] = 1
        return cls(chart, {((), tuple(e)): ONE})

    @classmethod
    def from_components(cls, chart: SuperChart, comps: Mapping[tuple, Coefficient]) -> "SuperForm":
        """Purely even-differential form ``sum w_I dx^I`` from increasing index tuples."""
        out = cls.zero(chart)
        for idx, c in comps.items():
            term = cls.from_function(Superfunction.const(chart, coerce(c)))
            for a in idx:
                term = term * cls.dx(chart, a)
            out = out + term
        return out

    # -- structure -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _term_degree(self, key) -> int:
        m, e = key
        q = self.chart.q
        return sum(1 for g in m if g >= q) + sum(e)

    def degrees(self) -> set[int]:
        return {self._term_degree(k) for k in self.terms}

    def component(self, k: int) -> "SuperForm":
        return SuperForm(self.chart, {key: c for key, c in self.terms.items()
                                      if self._term_degree(key) == k})

    def parity(self) -> int | None:
        ps = {len(m) & 1 for m, _ in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else EVEN

    def to_function(self) -> Superfunction:
        if self.degrees() - {0}:
            raise ValueError("form has positive degree")
        return Superfunction(self.chart, {m: c for (m, _), c in self.terms.items()})

    def even_components(self) -> dict[tuple, Coefficient]:
        """Components ``w_I`` of a form on a purely even chart, I increasing."""
        if self.chart.q:
            raise ChartError("components are only defined on purely even charts")
        return {m: c for (m, _), c in self.terms.items()}

    # -- arithmetic ------------------------------------------------------------
    def _lift(self, other) -> "SuperForm":
        if isinstance(other, SuperForm):
            if other.chart != self.chart:
                raise ChartError("forms live on different charts")
            return other
        if isinstance(other, Superfunction):
            if other.chart != self.chart:
                raise ChartError("forms live on different charts")
            return SuperForm.from_function(other)
        return SuperForm.from_function(Superfunction.const(self.chart, coerce(other)))

    def __add__(self, other) -> "SuperForm":
        other = self._lift(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return SuperForm(self.chart, terms)

    __radd__ = __add__

    def __neg__(self) -> "SuperForm":
        return SuperForm(self.chart, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "SuperForm":
        return self + (-self._lift(other))

    def __mul__(self, other) -> "SuperForm":
        if not isinstance(other, (SuperForm, Superfunction)):
            c = coerce(other)
            return SuperForm(self.chart, {k: v * c for k, v in self.terms.items()})
        other = self._lift(other)
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                r = _fmerge(k1, k2)
                if r is None:
                    continue
                s, k = r
                v = c1 * c2 if s > 0 else -(c1 * c2)
                out[k] = out[k] + v if k in out else v
        return SuperForm(self.chart, out)

    def __rmul__(self, other) -> "SuperForm":
        return self._lift(other) * self

    def __eq__(self, other) -> bool:
        return (self - other).is_zero()

    __hash__ = None

    # -- calculus ----------------------------------------------------------------
    def _partial_even(self, a: int) -> "SuperForm":
        return SuperForm(self.chart, {k: c.deriv(a) for k, c in self.terms.items()})

    def _partial_odd(self, j: int) -> "SuperForm":
        out = {}
        for (m, e), c in self.terms.items():
            r = remove_left(m, j)
            if r is not None:
                s, mm = r
                out[(mm, e)] = c if s > 0 else -c
        return SuperForm(self.chart, out)

    def d(self) -> "SuperForm":
        ch = self.chart
        out = SuperForm.zero(ch)
        for a in range(ch.p):
            pa = self._partial_even(a)
            if pa:
                out = out + SuperForm.dx(ch, a) * pa
        for j in range(ch.q):
            pj = self._partial_odd(j)
            if pj:
                out = out + SuperForm.dpsi(ch, j) * pj
        return out

    def pullback(self, mapping: Mapping[str, Superfunction], target: SuperChart) -> "SuperForm":
        """Pull back along the coordinate map ``name -> image`` (images on ``target``)."""
        src = self.chart
        images = {}
        for c in src.even_names:
            images[c] = mapping.get(c) if c in mapping else Superfunction.x(target, target.even_index(c))
        for c in src.odd:
            images[c] = mapping.get(c) if c in mapping else Superfunction.psi(target, target.odd_index(c))
        dimg = {}

        def d_of(name):
            if name not in dimg:
                img = images[name]
                if not isinstance(img, Superfunction):
                    img = Superfunction.const(target, coerce(img))
                dimg[name] = SuperForm.from_function(img).d()
            return dimg[name]

        out = SuperForm.zero(target)
        q = src.q
        for (m, e), c in self.terms.items():
            psis = tuple(g for g in m if g < q)
            dxs = [g - q for g in m if g >= q]
            base = Superfunction(src, {psis: c}).substitute(
                {k: v for k, v in mapping.items()}, target)
            term = SuperForm.from_function(base)
            for a in dxs:
                term = term * d_of(src.even_names[a])
            for j, k in enumerate(e):
                for _ in range(k):
                    term = term * d_of(src.odd[j])
            out = out + term
        return out

    def restrict(self, C: "ConormalSpec") -> "SuperForm":
        if C.chart != self.chart:
            raise ChartError("conormal spec lives on a different chart")
        return self.pullback(C.inclusion(), C.subchart())

    # -- presentation ------------------------------------------------------------
    def __repr__(self) -> str:
        return f"SuperForm({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        ch = self.chart
        names = list(ch.odd) + [f"d{n}" for n in ch.even_names]
        parts = []
        for (m, e) in sorted(self.terms):
            gens = "".join(names[g] for g in m)
            gens += "".join(f"d{ch.odd[j]}" + (f"^{k}" if k > 1 else "") for j, k in enumerate(e) if k)
            parts.append(f"({self.terms[(m, e)]})" + (f"*{gens}" if gens else ""))
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "chart": self.chart.to_json(),
            "terms": [{"odd": [g + 1 for g in m], "dpsi": list(e), "coeff": self.terms[(m, e)].to_json()}
                      for (m, e) in sorted(self.terms)],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "SuperForm":
        chart = SuperChart.from_json(data["chart"])
        terms = {(tuple(g - 1 for g in t["odd"]), tuple(t["dpsi"])): Coefficient.from_json(t["coeff"])
                 for t in data["terms"]}
        return cls(chart, terms)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def exterior_d(w) -> SuperForm:
    if isinstance(w, Superfunction):
        w = SuperForm.from_function(w)
    return w.d()


# ---------------------------------------------------------------------------
# vector fields


class SuperVectorField:
    """``V = sum V^c d/dc`` with components keyed by coordinate name."""

    __slots__ = ("chart", "comps")

    def __init__(self, chart: SuperChart, comps: Mapping[str, Superfunction] | None = None):
        self.chart = chart
        names = set(chart.even_names) | set(chart.odd)
        self.comps: dict[str, Superfunction] = {}
        for name, v in (comps or {}).items():
            if name not in names:
                raise ChartError(f"unknown coordinate {name!r}")
            if v:
                self.comps[name] = v

    @classmethod
    def coordinate(cls, chart: SuperChart, name: str, coeff=1) -> "SuperVectorField":
        """``coeff * d/d(name)``."""
        if not isinstance(coeff, Superfunction):
            coeff = Superfunction.const(chart, coerce(coeff))
        return cls(chart, {name: coeff})

    def _coord_parity(self, name: str) -> int:
        return ODD if name in self.chart.odd else EVEN

    def parity(self) -> int | None:
        ps = set()
        for name, v in self.comps.items():
            pv = v.parity()
            if pv is None:
                return None
            ps.add(pv ^ self._coord_parity(name))
        if len(ps) > 1:
            return None
        return ps.pop() if ps else EVEN

    def parts(self) -> tuple["SuperVectorField", "SuperVectorField"]:
        ev, od = {}, {}
        for name, v in self.comps.items():
            a, b = v.parts()
            if self._coord_parity(name) == ODD:
                a, b = b, a
            ev[name], od[name] = a, b
        return SuperVectorField(self.chart, ev), SuperVectorField(self.chart, od)

    def is_zero(self) -> bool:
        return not self.comps

    def component(self, name: str) -> Superfunction:
        return self.comps.get(name, Superfunction.zero(self.chart))

    def __add__(self, other: "SuperVectorField") -> "SuperVectorField":
        comps = dict(self.comps)
        for k, v in other.comps.items():
            comps[k] = comps[k] + v if k in comps else v
        return SuperVectorField(self.chart, comps)

    def __neg__(self) -> "SuperVectorField":
        return SuperVectorField(self.chart, {k: -v for k, v in self.comps.items()})

    def __sub__(self, other) -> "SuperVectorField":
        return self + (-other)

    def scale(self, c) -> "SuperVectorField":
        return SuperVectorField(self.chart, {k: v * c for k, v in self.comps.items()})

    def __eq__(self, other) -> bool:
        return (self - other).is_zero()

    __hash__ = None

    def apply(self, f: Superfunction) -> Superfunction:
        ch = self.chart
        out = Superfunction.zero(ch)
        for name, v in self.comps.items():
            if name in ch.odd:
                df = f.partial_odd(ch.odd_index(name))
            else:
                df = f.partial_even(ch.even_index(name))
            if df:
                out = out + v * df
        return out

    __call__ = apply

    def restrict_tangent(self, C: "ConormalSpec") -> "SuperVectorField":
        """Restriction to the conormal; normal components must vanish there."""
        sub = C.subchart()
        inc = C.inclusion()
        comps = {}
        for name, v in self.comps.items():
            rv = v.substitute(inc, sub)
            if name in inc:
                if rv:
                    raise ValueError(f"vector field is not tangent: component {name} survives")
                continue
            comps[name] = rv
        return SuperVectorField(sub, comps)

    def __repr__(self) -> str:
        return "SuperVectorField(" + " + ".join(f"({v})*d/d{k}" for k, v in sorted(self.comps.items())) + ")"


def _coord_form(chart: SuperChart, name: str) -> SuperForm:
    if name in chart.odd:
        return SuperForm.dpsi(chart, chart.odd_index(name))
    return SuperForm.dx(chart, chart.even_index(name))


def contract(V: SuperVectorField, w) -> SuperForm:
    """Interior product, an anti-derivation of parity ``p(V) + 1``."""
    if isinstance(w, Superfunction):
        w = SuperForm.from_function(w)
    if V.chart != w.chart:
        raise ChartError("vector field and form live on different charts")
    pv = V.parity()
    if pv is None:
        a, b = V.parts()
        return contract(a, w) + contract(b, w)
    ch = w.chart
    q = ch.q
    zero_e = (0,) * q
    comps = {name: SuperForm.from_function(v) for name, v in V.comps.items()}
    out = SuperForm.zero(ch)
    for (m, e), c in w.terms.items():
        for pos, g in enumerate(m):
            if g < q:
                continue
            name = ch.even_names[g - q]
            if name not in comps:
                continue
            left = SuperForm(ch, {(m[:pos], zero_e): c})
            right = SuperForm(ch, {(m[pos + 1:], e): ONE})
            piece = left * comps[name] * right
            out = out + (piece if not ((pv + 1) * pos) & 1 else -piece)
        for j, k in enumerate(e):
            name = ch.odd[j]
            if not k or name not in comps:
                continue
            le = list(e)
            le[j] -= 1
            piece = SuperForm(ch, {(m, zero_e): c * k}) * comps[name] * SuperForm(ch, {((), tuple(le)): ONE})
            out = out + (piece if not ((pv + 1) * len(m)) & 1 else -piece)
    return out


def lie_derivative(V: SuperVectorField, w) -> SuperForm:
    """Lie derivative as the derivation of parity p(V) commuting with d."""
    if isinstance(w, Superfunction):
        w = SuperForm.from_function(w)
    pv = V.parity()
    if pv is None:
        a, b = V.parts()
        return lie_derivative(a, w) + lie_derivative(b, w)
    ch = w.chart
    q = ch.q
    zero_e = (0,) * q
    sign = -1 if pv else 1
    gen_image = {}
    for j, name in enumerate(ch.odd):
        gen_image[j] = SuperForm.from_function(V.component(name))
    for a, name in enumerate(ch.even_names):
        gen_image[q + a] = SuperForm.from_function(V.component(name)).d() * sign
    dpsi_image = {j: SuperForm.from_function(V.component(name)).d() * sign
                  for j, name in enumerate(ch.odd)}
    out = SuperForm.zero(ch)
    for (m, e), c in w.terms.items():
        vc = V.apply(Superfunction.const(ch, c)) if c else None
        if vc:
            out = out + SuperForm.from_function(vc) * SuperForm(ch, {(m, e): ONE})
        for pos, g in enumerate(m):
            left = SuperForm(ch, {(m[:pos], zero_e): c})
            right = SuperForm(ch, {(m[pos + 1:], e): ONE})
            piece = left * gen_image[g] * right
            out = out + (piece if not (pv * pos) & 1 else -piece)
        for j, k in enumerate(e):
            if not k:
                continue
            le = list(e)
            le[j] -= 1
            piece = SuperForm(ch, {(m, zero_e): c * k}) * dpsi_image[j] * SuperForm(ch, {((), tuple(le)): ONE})
            out = out + (piece if not (pv * len(m)) & 1 else -piece)
    return out


# ---------------------------------------------------------------------------
# canonical structures


def liouville(cY: SuperChart) -> SuperForm:
    """theta = sum_a dx^a psi_a on a cotangent chart."""
    if cY.provenance not in (PI_OMEGA1, CONTACT):
        raise ChartError("liouville form needs a cotangent chart")
    out = SuperForm.zero(cY)
    for a in range(cY.p):
        out = out + SuperForm.dx(cY, a) * Superfunction.psi(cY, a)
    return out


def odd_symplectic(cY: SuperChart) -> SuperForm:
    """eta = d theta = -sum_a dx^a dpsi_a."""
    return liouville(cY).d()


def contact_form(cYhat: SuperChart) -> SuperForm:
    """theta-hat = d eps + theta on a contact chart."""
    if cYhat.provenance != CONTACT:
        raise ChartError("contact form needs a contact chart")
    return SuperForm.dpsi(cYhat, cYhat.q - 1) + liouville(cYhat)


def _darboux_pairing(eta: SuperForm) -> dict[int, tuple[int, Coefficient]]:
    """Read eta = sum kappa_a dx^a dpsi_{j(a)} with constant kappa; a -> (j, kappa)."""
    ch = eta.chart
    q = ch.q
    pairs: dict[int, tuple[int, Coefficient]] = {}
    used = set()
    for (m, e), c in eta.terms.items():
        if len(m) != 1 or m[0] < q or sum(e) != 1 or not c.is_constant():
            raise DegenerateFormError("only constant Darboux-type odd symplectic forms are supported")
        a = m[0] - q
        j = e.index(1)
        if a in pairs or j in used:
            raise DegenerateFormError("odd symplectic form is not in Darboux block form")
        pairs[a] = (j, c)
        used.add(j)
    if len(pairs) != ch.p or len(used) != ch.q:
        raise DegenerateFormError(f"odd 2-form is degenerate on a {ch.dim} chart")
    return pairs


def hamiltonian_field(f: Superfunction, eta: SuperForm, sign: int = HAMILTONIAN_SIGN) -> SuperVectorField:
    """Unique V_f with iota_{V_f} eta = sign * df; parity(V_f) = parity(f) + 1."""
    if f.chart != eta.chart:
        raise ChartError("function and form live on different charts")
    pairs = _darboux_pairing(eta)
    ch = f.chart
    pf = f.parity()
    if pf is None:
        a, b = f.parts()
        return hamiltonian_field(a, eta, sign) + hamiltonian_field(b, eta, sign)
    pv = pf ^ 1
    comps = {}
    for a, (j, kappa) in pairs.items():
        k_inv = 1 / kappa.constant_value()
        comps[ch.even_names[a]] = f.partial_odd(j) * (sign * k_inv)
        s_b = -sign * (-1 if pv else 1)
        comps[ch.odd[j]] = f.partial_even(a) * (s_b * k_inv)
    return SuperVectorField(ch, comps)


# ---------------------------------------------------------------------------
# conormals and the normal exponential map


@dataclass(frozen=True)
class ConormalSpec:
    """Conormal Pi N^* of the coordinate submanifold {x^a = 0 : a in normal}.

    Inside the cotangent chart it is cut out by x^a = 0 (a normal) and
    psi_b = 0 (b tangent).  On a contact chart the eps = 0 section is used.
    """

    chart: SuperChart
    normal: frozenset

    def __post_init__(self):
        object.__setattr__(self, "normal", frozenset(self.normal))
        if self.chart.provenance not in (PI_OMEGA1, CONTACT):
            raise ChartError("conormals live in cotangent or contact charts")
        n = self.chart.p
        if not all(0 <= a < n for a in self.normal):
            raise ChartError("normal index out of range")

    @property
    def n(self) -> int:
        return self.chart.p

    @property
    def tangent(self) -> tuple[int, ...]:
        return tuple(a for a in range(self.n) if a not in self.normal)

    @property
    def normal_sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.normal))

    @property
    def dim(self) -> tuple[int, int]:
        return (len(self.tangent), len(self.normal))

    def subchart(self) -> SuperChart:
        ch = self.chart
        return SuperChart(tuple(ch.even[a] for a in self.tangent),
                          tuple(ch.odd[a] for a in self.normal_sorted))

    def inclusion(self) -> dict[str, int]:
        """Coordinates set to zero on the conormal."""
        ch = self.chart
        out = {ch.even[a].name: 0 for a in self.normal}
        out.update({ch.odd[a]: 0 for a in self.tangent})
        if ch.provenance == CONTACT:
            out[ch.odd[-1]] = 0
        return out



def restrict(obj, C: ConormalSpec):
    """Restrict a superfunction or form to the conormal (result on ``C.subchart()``)."""
    if isinstance(obj, SuperForm):
        return obj.restrict(C)
    if obj.chart != C.chart:
        raise ChartError("conormal spec lives on a different chart")
    return obj.substitute(C.inclusion(), C.subchart())


def all_conormals(cY: SuperChart):
    from itertools import combinations
    n = cY.p
    for r in range(n + 1):
        for S in combinations(range(n), r):
            yield ConormalSpec(cY, frozenset(S))


def normal_exp_chart(C: ConormalSpec) -> SuperChart:
    """Chart of Pi Omega^1 X: base (x^alpha, psi_adot), fibres (psi_alpha, y_adot).

    Slots follow the ambient chart, with the even normal slot ``adot`` holding
    the fibre coordinate ``y_adot = Pi d/dpsi_adot``.
    """
    ch = C.chart
    even = []
    for a, c in enumerate(ch.even):
        if a in C.normal:
            even.append(EvenCoord("y" + c.name.lstrip("x"), c.topology))
        else:
            even.append(c)
    return SuperChart(tuple(even), ch.odd[:ch.p])


def exp_map(C: ConormalSpec) -> dict[str, Superfunction]:
    """Local normal exponential: x^adot = -y_adot, everything else unchanged."""
    tgt = normal_exp_chart(C)
    return {C.chart.even[a].name: -Superfunction.x(tgt, a) for a in C.normal}


def exp_liouville_difference(C: ConormalSpec) -> SuperForm:
    """exp^* theta - theta_0 on Pi Omega^1 X."""
    if C.chart.provenance != PI_OMEGA1:
        raise ChartError("normal exponential is defined on cotangent charts")
    tgt = normal_exp_chart(C)
    pulled = liouville(C.chart).pullback(exp_map(C), tgt)
    theta0 = SuperForm.zero(tgt)
    for a in C.tangent:
        theta0 = theta0 + SuperForm.dx(tgt, a) * Superfunction.psi(tgt, a)
    for a in C.normal:
        theta0 = theta0 + SuperForm.dpsi(tgt, a) * Superfunction.x(tgt, a)
    return pulled - theta0


def exp_primitive(C: ConormalSpec) -> Superfunction:
    """exp^*(sum_adot psi_adot x^adot), the claimed primitive."""
    ch = C.chart
    f = Superfunction.zero(ch)
    for a in C.normal:
        f = f + Superfunction.psi(ch, a) * Superfunction.x(ch, a)
    return f.substitute(exp_map(C), normal_exp_chart(C))


def normal_exp_identity(C: ConormalSpec) -> SuperForm:
    """exp^* theta - theta_0, to be compared with d(exp_primitive(C))."""
    return exp_liouville_difference(C)
