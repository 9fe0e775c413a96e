"""Superfunctions: elements of the Grassmann algebra over exact coefficients.

Odd monomials are strictly increasing tuples of generator indices; every sign
comes from sorting a concatenation and counting inversions.  Odd derivatives
are LEFT derivatives: ``d/dpsi_a`` first moves ``psi_a`` to the front of the
monomial, picking up ``(-1)**(number of generators before it)``.
"""

from __future__ import annotations

import itertools
import json
from functools import lru_cache
from math import factorial
from typing import Iterable, Mapping

from .charts import SuperChart
from .coefficients import MAX_EVEN, ONE, ZERO, Coefficient, coerce

EVEN, ODD = 0, 1


class GrassmannError(ValueError):
    pass


@lru_cache(maxsize=1 << 16)
def merge(a: tuple, b: tuple) -> tuple[int, tuple] | None:
    """Product of sorted odd monomials: (sign, monomial) or None if it vanishes."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    sa = set(a)
    if any(j in sa for j in b):
        return None
    inv = 0
    for j in b:
        inv += sum(1 for i in a if i > j)
    return (-1 if inv & 1 else 1), tuple(sorted(a + b))


@lru_cache(maxsize=1 << 16)
def remove_left(m: tuple, j: int) -> tuple[int, tuple] | None:
    """Left derivative of a monomial by generator j."""
    if j not in m:
        return None
    pos = m.index(j)
    return (-1 if pos & 1 else 1), m[:pos] + m[pos + 1:]


class Superfunction:
    """Immutable finite sum ``sum coeff(x) * psi_M`` on a chart."""

    __slots__ = ("chart", "terms")

    def __init__(self, chart: SuperChart, terms: Mapping[tuple, Coefficient] | None = None):
        self.chart = chart
        self.terms: dict[tuple, Coefficient] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    if m and m[-1] >= chart.q:
                        raise GrassmannError(f"odd index {m[-1]} outside chart of dimension {chart.dim}")
                    self.terms[m] = c

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, chart: SuperChart) -> "Superfunction":
        return cls(chart)

    @classmethod
    def const(cls, chart: SuperChart, c=1) -> "Superfunction":
        return cls(chart, {(): coerce(c)})

    @classmethod
    def from_coeff(cls, chart: SuperChart, c: Coefficient, odd: Iterable[int] = ()) -> "Superfunction":
        odd = tuple(odd)
        if list(odd) != sorted(set(odd)):
            sign_mono = cls.odd_product(chart, odd)
            return sign_mono * c
        return cls(chart, {odd: c})

    @classmethod
    def x(cls, chart: SuperChart, a: int) -> "Superfunction":
        return cls(chart, {(): Coefficient.x(a)})

    @classmethod
    def psi(cls, chart: SuperChart, j: int) -> "Superfunction":
        return cls(chart, {(j,): ONE})

    @classmethod
    def odd_product(cls, chart: SuperChart, idx: Iterable[int]) -> "Superfunction":
        out = cls.const(chart)
        for j in idx:
            out = out * cls.psi(chart, j)
        return out

    # -- structure -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def parity(self) -> int | None:
        """0 (even), 1 (odd), or None when inhomogeneous.  Zero counts as even."""
        ps = {len(m) & 1 for m in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else EVEN

    def parts(self) -> tuple["Superfunction", "Superfunction"]:
        ev = {m: c for m, c in self.terms.items() if not len(m) & 1}
        od = {m: c for m, c in self.terms.items() if len(m) & 1}
        return Superfunction(self.chart, ev), Superfunction(self.chart, od)

    def body(self) -> Coefficient:
        return self.terms.get((), ZERO)

    def coefficient(self, odd: Iterable[int]) -> Coefficient:
        return self.terms.get(tuple(odd), ZERO)

    def odd_degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def _check(self, other: "Superfunction") -> None:
        if other.chart is not self.chart and other.chart != self.chart:
            raise GrassmannError("superfunctions live on different charts")

    # -- ring operations -------------------------------------------------------
    def _lift(self, other) -> "Superfunction":
        if isinstance(other, Superfunction):
            self._check(other)
            return other
        return Superfunction.const(self.chart, coerce(other))

    def __add__(self, other) -> "Superfunction":
        other = self._lift(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return Superfunction(self.chart, terms)

    __radd__ = __add__

    def __neg__(self) -> "Superfunction":
        return Superfunction(self.chart, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Superfunction":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Superfunction":
        return self._lift(other) - self

    def __mul__(self, other) -> "Superfunction":
        if not isinstance(other, Superfunction):
            c = coerce(other)
            return Superfunction(self.chart, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        out: dict[tuple, Coefficient] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                r = merge(m1, m2)
                if r is None:
                    continue
                s, m = r
                v = c1 * c2 if s > 0 else -(c1 * c2)
                out[m] = out[m] + v if m in out else v
        return Superfunction(self.chart, out)

    def __rmul__(self, other) -> "Superfunction":
        # scalars and coefficients are even, so they commute
        return self * other

    def __pow__(self, n: int) -> "Superfunction":
        out = Superfunction.const(self.chart)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, Superfunction):
            return (self - other).is_zero()
        try:
            return (self - other).is_zero()
        except TypeError:
            return NotImplemented

    __hash__ = None

    def map_coefficients(self, fn) -> "Superfunction":
        return Superfunction(self.chart, {m: fn(c) for m, c in self.terms.items()})

    def inverse(self) -> "Superfunction":
        """Inverse of an even superfunction with invertible body."""
        if self.parity() != EVEN:
            raise GrassmannError("only even superfunctions are inverted")
        b = self.body()
        if not b:
            raise GrassmannError("body is zero: not a unit")
        binv = b.inverse()
        nil = (self - Superfunction.const(self.chart, b)) * binv
        out = Superfunction.const(self.chart)
        power = Superfunction.const(self.chart)
        while True:
            power = -(power * nil)
            if not power:
                break
            out = out + power
        return out * binv

    # -- derivatives -----------------------------------------------------------
    def partial_even(self, a: int) -> "Superfunction":
        if not 0 <= a < self.chart.p:
            raise GrassmannError(f"even index {a} out of range")
        return Superfunction(self.chart, {m: c.deriv(a) for m, c in self.terms.items()})

    def partial_odd(self, j: int) -> "Superfunction":
        if not 0 <= j < self.chart.q:
            raise GrassmannError(f"odd index {j} out of range")
        out = {}
        for m, c in self.terms.items():
            r = remove_left(m, j)
            if r is not None:
                s, mm = r
                out[mm] = c if s > 0 else -c
        return Superfunction(self.chart, out)

    # -- substitution ------------------------------------------------------------
    def substitute(self, mapping: Mapping[str, "Superfunction"],
                   target: SuperChart | None = None) -> "Superfunction":
        """Pull back along a coordinate map given by coordinate name -> image.

        Unmapped coordinates go to the coordinate of the same name in the
        target chart.  Even images are split into body + nilpotent soul and
        the coefficients are expanded in a finite Taylor series in the soul.
        """
        src = self.chart
        target = target or src
        even_img: list[Superfunction] = []
        for c in src.even:
            img = mapping.get(c.name)
            if img is None:
                if c.name not in target.even_names:
                    raise GrassmannError(f"no image for {c.name}")
                img = Superfunction.x(target, target.even_index(c.name))
            elif not isinstance(img, Superfunction):
                img = Superfunction.const(target, coerce(img))
            if img.chart != target:
                raise GrassmannError("image on the wrong chart")
            if img.parity() != EVEN:
                raise GrassmannError(f"even coordinate {c.name} mapped to a non-even function")
            even_img.append(img)
        odd_img: list[Superfunction] = []
        for name in src.odd:
            img = mapping.get(name)
            if img is None:
                if name not in target.odd:
                    raise GrassmannError(f"no image for {name}")
                img = Superfunction.psi(target, target.odd_index(name))
            elif not isinstance(img, Superfunction):
                img = Superfunction.const(target, coerce(img))
            if img.chart != target:
                raise GrassmannError("image on the wrong chart")
            if img and img.parity() != ODD:
                raise GrassmannError(f"odd coordinate {name} mapped to a non-odd function")
            odd_img.append(img)

        bodies = {a: img.body() for a, img in enumerate(even_img)}
        souls = {a: img - Superfunction.const(target, img.body()) for a, img in enumerate(even_img)}
        souls = {a: s for a, s in souls.items() if s}
        q_images: dict[int, Coefficient] = {}
        for a, b in bodies.items():
            q_images[a] = _q_image(b)

        def evaluate(c: Coefficient) -> Coefficient:
            for a in range(src.p):
                if q_images[a] is None and c.depends_on(MAX_EVEN + a):
                    raise GrassmannError("Fourier coefficients admit only shifts x -> x' + nilpotent")
            return c.compose(bodies, {a: v for a, v in q_images.items() if v is not None})

        max_order = target.q // 2
        soul_keys = sorted(souls)
        multi = [()]
        if soul_keys:
            multi = [beta for k in range(max_order + 1)
                     for beta in itertools.combinations_with_replacement(soul_keys, k)]
        soul_powers = {}
        for beta in multi:
            prod = Superfunction.const(target)
            for a in beta:
                prod = prod * souls[a]
            if prod:
                weight = 1
                for a in set(beta):
                    weight *= factorial(beta.count(a))
                soul_powers[beta] = (prod, weight)

        out = Superfunction.zero(target)
        odd_cache: dict[tuple, Superfunction] = {}
        for m, c in self.terms.items():
            if m not in odd_cache:
                prod = Superfunction.const(target)
                for j in m:
                    prod = prod * odd_img[j]
                odd_cache[m] = prod
            oprod = odd_cache[m]
            if not oprod:
                continue
            expansion = Superfunction.zero(target)
            for beta, (sp, weight) in soul_powers.items():
                d = c
                for a in beta:
                    d = d.deriv(a)
                if not d:
                    continue
                expansion = expansion + sp * (evaluate(d) / weight)
            out = out + expansion * oprod
        return out

    # -- presentation ----------------------------------------------------------------
    def __repr__(self) -> str:
        return f"Superfunction({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda t: (len(t), t)):
            mono = "".join(self.chart.odd[j] for j in m)
            parts.append(f"({self.terms[m]})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "chart": self.chart.to_json(),
            "terms": [{"odd": [j + 1 for j in m], "coeff": self.terms[m].to_json()}
                      for m in sorted(self.terms, key=lambda t: (len(t), t))],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: Mapping, chart: SuperChart | None = None) -> "Superfunction":
        chart = chart or SuperChart.from_json(data["chart"])
        terms = {}
        for t in data["terms"]:
            m = tuple(j - 1 for j in t["odd"])
            if list(m) != sorted(set(m)):
                raise GrassmannError("odd indices must be strictly increasing")
            terms[m] = Coefficient.from_json(t["coeff"])
        return cls(chart, terms)

    @classmethod
    def loads(cls, s: str) -> "Superfunction":
        return cls.from_json(json.loads(s))


def _q_image(body: Coefficient) -> Coefficient | None:
    """Image of exp(2 pi i x_a) when x_a maps to ``body`` (None if not expressible)."""
    if body.is_zero():
        return ONE
    if body.atoms or len(body.num) != 1:
        return None
    ((e, c),) = body.num.items()
    if c not in (1, -1):
        return None
    nz = [i for i, v in enumerate(e) if v]
    if len(nz) == 1 and nz[0] < MAX_EVEN and e[nz[0]] == 1:
        k = int(c)
        return Coefficient.mode([k if i == nz[0] else 0 for i in range(nz[0] + 1)])
    return None


def mul(f: Superfunction, g: Superfunction) -> Superfunction:
    return f * g


def partial_even(f: Superfunction, a: int) -> Superfunction:
    return f.partial_even(a)


def partial_odd(f: Superfunction, j: int) -> Superfunction:
    return f.partial_odd(j)


def parity(f: Superfunction) -> int | None:
    return f.parity()


def substitute(f: Superfunction, mapping: Mapping[str, Superfunction],
               target: SuperChart | None = None) -> Superfunction:
    return f.substitute(mapping, target)
