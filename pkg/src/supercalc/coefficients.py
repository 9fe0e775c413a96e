"""Exact coefficient ring for superfunction terms.

A coefficient is a Laurent polynomial with rational coefficients in a fixed
pool of commuting variables, multiplied by integer powers of irreducible-ish
polynomial "atoms" (used for inverses such as ``1/alpha``)::

    value = num * prod(atom_i ** e_i)

Variables (by slot):

* ``x0 .. x5``  even coordinates (polynomial dependence, exponent >= 0)
* ``q0 .. q5``  Fourier modes ``q_a = exp(2 pi i x_a)`` (any integer exponent)
* ``tau``       the symbol ``2 pi i``
* ``I``         the imaginary unit, reduced with :meth:`Coefficient.reduce_imag`
* ``t``         a deformation parameter, used by the real-slice computation

The derivative along ``x_a`` acts on both the polynomial and the Fourier
dependence: ``d/dx_a q_a**k = k * tau * q_a**k``.  No floating point appears
anywhere; zero testing only inspects the numerator, so no gcd is ever needed.
"""

from __future__ import annotations

import operator
from typing import Iterable, Mapping

from gmpy2 import mpq

MAX_EVEN = 6
NVARS = 2 * MAX_EVEN + 3
TAU = 2 * MAX_EVEN
IMAG = TAU + 1
TPARAM = TAU + 2

VAR_NAMES = (
    tuple(f"x{i}" for i in range(MAX_EVEN))
    + tuple(f"q{i}" for i in range(MAX_EVEN))
    + ("tau", "I", "t")
)
_VAR_INDEX = {name: i for i, name in enumerate(VAR_NAMES)}

ZERO_EXP = (0,) * NVARS

Poly = dict  # exponent tuple -> mpq


class CoefficientError(ValueError):
    pass


def _unit_exp(var: int, power: int = 1) -> tuple:
    e = [0] * NVARS
    e[var] = power
    return tuple(e)


def _add_exp(a: tuple, b: tuple) -> tuple:
    return tuple(map(operator.add, a, b))


# ---------------------------------------------------------------------------
# raw polynomial helpers (dict exponent -> mpq, zero terms never stored)


def padd(p: Poly, q: Poly, scale=1) -> Poly:
    out = dict(p)
    for e, c in q.items():
        v = out.get(e, 0) + scale * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def pmul(p: Poly, q: Poly) -> Poly:
    if len(p) > len(q):
        p, q = q, p
    out: Poly = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = _add_exp(e1, e2)
            v = out.get(e, 0) + c1 * c2
            if v:
                out[e] = v
            else:
                del out[e]
    return out


def ppow(p: Poly, n: int) -> Poly:
    out: Poly = {ZERO_EXP: mpq(1)}
    for _ in range(n):
        out = pmul(out, p)
    return out


def pscale(p: Poly, c) -> Poly:
    if not c:
        return {}
    return {e: v * c for e, v in p.items()}


def pderiv(p: Poly, a: int) -> Poly:
    """Derivative along the even coordinate ``x_a`` (polynomial and Fourier parts)."""
    out: Poly = {}
    qa = MAX_EVEN + a
    for e, c in p.items():
        if e[a]:
            le = list(e)
            le[a] -= 1
            k = tuple(le)
            v = out.get(k, 0) + c * e[a]
            if v:
                out[k] = v
            else:
                del out[k]
        if e[qa]:
            le = list(e)
            le[TAU] += 1
            k = tuple(le)
            v = out.get(k, 0) + c * e[qa]
            if v:
                out[k] = v
            else:
                del out[k]
    return out


def pdepends(p: Poly, var: int) -> bool:
    return any(e[var] for e in p)


def _is_monomial_unit(p: Poly) -> bool:
    """Single term with no polynomial x-dependence: c * q^k * tau^j * ..."""
    if len(p) != 1:
        return False
    (e,) = p
    return all(v == 0 for v in e[:MAX_EVEN]) and e[IMAG] == 0 and e[TPARAM] == 0


def _atom_key(p: Poly) -> tuple:
    return tuple(sorted(p.items()))


def _normalize_atom(p: Poly) -> tuple[mpq, Poly]:
    """Split p = c * monic(p); monic means the largest exponent has coefficient 1."""
    lead = max(p)
    c = p[lead]
    return c, {e: v / c for e, v in p.items()}


# ---------------------------------------------------------------------------


class Coefficient:
    """Immutable exact coefficient ``num * prod(atom ** power)``."""

    __slots__ = ("num", "atoms")

    def __init__(self, num: Mapping | None = None, atoms: Iterable = ()):
        self.num: Poly = dict(num) if num else {}
        if not self.num:
            self.atoms: tuple = ()
            return
        atoms = {k: e for k, e in atoms if e}
        if atoms and min(atoms.values()) < 0:
            # cancel a numerator that is literally one of the denominator atoms
            for k, e in list(atoms.items()):
                if e < 0 and len(k) == len(self.num):
                    c, mp = _normalize_atom(self.num)
                    if _atom_key(mp) == k:
                        self.num = {ZERO_EXP: c}
                        atoms[k] = e + 1
                        break
        self.atoms = tuple(sorted((k, e) for k, e in atoms.items() if e))

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "Coefficient":
        c = mpq(c)
        return cls({ZERO_EXP: c} if c else {})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "Coefficient":
        return cls({_unit_exp(_VAR_INDEX[name], power): mpq(1)})

    @classmethod
    def x(cls, a: int, power: int = 1) -> "Coefficient":
        _check_slot(a)
        return cls({_unit_exp(a, power): mpq(1)})

    @classmethod
    def mode(cls, freqs: Iterable[int], c=1) -> "Coefficient":
        """``c * exp(2 pi i <k, x>)`` for an integer frequency vector k."""
        e = [0] * NVARS
        for a, k in enumerate(freqs):
            _check_slot(a)
            e[MAX_EVEN + a] = int(k)
        c = mpq(c)
        return cls({tuple(e): c} if c else {})

    @classmethod
    def tau(cls, power: int = 1) -> "Coefficient":
        return cls({_unit_exp(TAU, power): mpq(1)})

    @classmethod
    def atom(cls, p: Poly, power: int = 1) -> "Coefficient":
        """Wrap a polynomial as an atom so that its inverse is exact."""
        if not p:
            raise CoefficientError("zero atom")
        if _is_monomial_unit(p) or len(p) == 1 and next(iter(p)) == ZERO_EXP:
            base = Coefficient(p)
            return base ** power if power >= 0 else base.inverse() ** (-power)
        c, mp = _normalize_atom(p)
        return cls({ZERO_EXP: c**power if power >= 0 else 1 / c ** (-power)},
                   [(_atom_key(mp), power)])

    # -- basic predicates --------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def __bool__(self) -> bool:
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return not self.atoms

    def is_constant(self) -> bool:
        return not self.atoms and all(e == ZERO_EXP for e in self.num)

    def constant_value(self) -> mpq:
        if not self.is_constant():
            raise CoefficientError(f"not a constant: {self}")
        return self.num.get(ZERO_EXP, mpq(0))

    def depends_on(self, var: int) -> bool:
        if pdepends(self.num, var):
            return True
        return any(pdepends(dict(k), var) for k, _ in self.atoms)

    def depends_on_coordinate(self, a: int) -> bool:
        return self.depends_on(a) or self.depends_on(MAX_EVEN + a)

    def expanded(self) -> Poly:
        """Multiply out the atoms; only valid when every atom power is >= 0."""
        out = dict(self.num)
        for k, e in self.atoms:
            if e < 0:
                raise CoefficientError("coefficient has a genuine denominator")
            out = pmul(out, ppow(dict(k), e))
        return out

    # -- arithmetic --------------------------------------------------------
    def _align(self, other: "Coefficient") -> tuple[Poly, Poly, tuple]:
        if self.atoms == other.atoms:
            return self.num, other.num, self.atoms
        a1 = dict(self.atoms)
        a2 = dict(other.atoms)
        common = {}
        n1, n2 = self.num, other.num
        for k in set(a1) | set(a2):
            e1, e2 = a1.get(k, 0), a2.get(k, 0)
            lo = min(e1, e2)
            common[k] = lo
            if e1 > lo:
                n1 = pmul(n1, ppow(dict(k), e1 - lo))
            if e2 > lo:
                n2 = pmul(n2, ppow(dict(k), e2 - lo))
        return n1, n2, tuple(common.items())

    def __add__(self, other) -> "Coefficient":
        other = _coerce(other)
        if not other.num:
            return self
        if not self.num:
            return other
        n1, n2, atoms = self._align(other)
        return Coefficient(padd(n1, n2), atoms)

    __radd__ = __add__

    def __sub__(self, other) -> "Coefficient":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Coefficient":
        return _coerce(other) - self

    def __neg__(self) -> "Coefficient":
        return Coefficient({e: -c for e, c in self.num.items()}, self.atoms)

    def __mul__(self, other) -> "Coefficient":
        if not isinstance(other, Coefficient):
            c = mpq(other)
            return Coefficient(pscale(self.num, c), self.atoms)
        if not self.num or not other.num:
            return ZERO
        atoms = dict(self.atoms)
        for k, e in other.atoms:
            atoms[k] = atoms.get(k, 0) + e
        return Coefficient(pmul(self.num, other.num), atoms.items())

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Coefficient":
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "Coefficient":
        if not self.num:
            raise ZeroDivisionError("inverse of zero coefficient")
        inv_atoms = [(k, -e) for k, e in self.atoms]
        if _is_monomial_unit(self.num):
            ((e, c),) = self.num.items()
            if e[TAU]:
                raise CoefficientError("tau is not invertible in this ring")
            ne = tuple(-v for v in e)
            return Coefficient({ne: 1 / c}, inv_atoms)
        c, mp = _normalize_atom(self.num)
        key = _atom_key(mp)
        atoms = dict(inv_atoms)
        atoms[key] = atoms.get(key, 0) - 1
        return Coefficient({ZERO_EXP: 1 / c}, atoms.items())

    def __truediv__(self, other) -> "Coefficient":
        if not isinstance(other, Coefficient):
            return self * (1 / mpq(other))
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Coefficient):
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # equality is semantic, not structural

    def same_representation(self, other: "Coefficient") -> bool:
        return self.num == other.num and self.atoms == other.atoms

    # -- calculus -------------------------------------------------------------
    def deriv(self, a: int) -> "Coefficient":
        """``d/dx_a`` (Fourier modes pick up ``k_a * tau``)."""
        dep = [(k, e) for k, e in self.atoms
               if pdepends(dict(k), a) or pdepends(dict(k), MAX_EVEN + a)]
        if not dep:
            return Coefficient(pderiv(self.num, a), self.atoms)
        polys = [dict(k) for k, _ in dep]
        prod_all: Poly = {ZERO_EXP: mpq(1)}
        for p in polys:
            prod_all = pmul(prod_all, p)
        num = pmul(pderiv(self.num, a), prod_all)
        for i, (p, (_, e)) in enumerate(zip(polys, dep)):
            rest: Poly = {ZERO_EXP: mpq(e)}
            for j, pj in enumerate(polys):
                if j != i:
                    rest = pmul(rest, pj)
            num = padd(num, pmul(pmul(self.num, pderiv(p, a)), rest))
        atoms = dict(self.atoms)
        for k, _ in dep:
            atoms[k] -= 1
        return Coefficient(num, atoms.items())

    # -- evaluation / substitution --------------------------------------------
    def compose(self, images: Mapping[int, "Coefficient"],
                q_images: Mapping[int, "Coefficient"] | None = None) -> "Coefficient":
        """Substitute x-slots by coefficients (and q-slots by invertible ones)."""
        q_images = q_images or {}

        def comp_poly(p: Poly) -> Coefficient:
            out = ZERO
            for e, c in p.items():
                term = Coefficient({_strip(e, images, q_images): c})
                for v, img in images.items():
                    if e[v]:
                        term = term * img ** e[v]
                for v, img in q_images.items():
                    k = e[MAX_EVEN + v]
                    if k:
                        term = term * img ** k
                out = out + term
            return out

        out = comp_poly(self.num)
        for k, e in self.atoms:
            base = comp_poly(dict(k))
            if base.is_zero():
                raise ZeroDivisionError("substitution annihilates a denominator")
            if base.atoms or len(base.num) == 1:
                out = out * base ** e
            else:
                out = out * Coefficient.atom(base.num, e)
        return out

    def reduce_imag(self) -> "Coefficient":
        """Apply ``I**2 = -1`` to the numerator (atoms must be I-free)."""
        if any(pdepends(dict(k), IMAG) for k, _ in self.atoms):
            raise CoefficientError("imaginary unit inside a denominator")
        out: Poly = {}
        for e, c in self.num.items():
            k = e[IMAG]
            if k > 1:
                le = list(e)
                le[IMAG] = k % 2
                e = tuple(le)
                if (k // 2) % 2:
                    c = -c
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Coefficient(out, self.atoms)

    def part(self, var: int, power: int) -> "Coefficient":
        """Coefficient of ``var**power`` in the numerator (atoms must not involve var)."""
        if any(pdepends(dict(k), var) for k, _ in self.atoms):
            raise CoefficientError(f"{VAR_NAMES[var]} inside a denominator")
        out: Poly = {}
        for e, c in self.num.items():
            if e[var] == power:
                le = list(e)
                le[var] = 0
                out[tuple(le)] = c
        return Coefficient(out, self.atoms)

    def zero_mode(self, slots: Iterable[int]) -> "Coefficient":
        """Average over the torus directions ``slots`` (volume normalised to 1)."""
        slots = list(slots)
        num = self.expanded() if self.atoms else self.num
        out: Poly = {}
        for e, c in num.items():
            if any(e[a] for a in slots):
                raise CoefficientError("polynomial dependence on a circle coordinate")
            if all(e[MAX_EVEN + a] == 0 for a in slots):
                out[e] = c
        return Coefficient(out)

    # -- presentation ------------------------------------------------------------
    def __repr__(self) -> str:
        return f"Coefficient({self})"

    def __str__(self) -> str:
        s = _poly_str(self.num)
        for k, e in self.atoms:
            s = f"({s})*({_poly_str(dict(k))})^{e}"
        return s

    def to_json(self) -> dict:
        out = {"num": _poly_json(self.num)}
        if self.atoms:
            out["atoms"] = [{"poly": _poly_json(dict(k)), "pow": e} for k, e in self.atoms]
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "Coefficient":
        num = _poly_from_json(data["num"])
        atoms = [(_atom_key(_poly_from_json(a["poly"])), int(a["pow"]))
                 for a in data.get("atoms", [])]
        return cls(num, atoms)


def _strip(e: tuple, images, q_images) -> tuple:
    le = list(e)
    for v in images:
        le[v] = 0
    for v in q_images:
        le[MAX_EVEN + v] = 0
    return tuple(le)


def _check_slot(a: int) -> None:
    if not 0 <= a < MAX_EVEN:
        raise CoefficientError(f"even slot {a} outside 0..{MAX_EVEN - 1}")


def _coerce(v) -> Coefficient:
    if isinstance(v, Coefficient):
        return v
    if isinstance(v, (int, mpq)) or type(v).__name__ in ("Fraction", "mpz"):
        return Coefficient.const(v)
    raise TypeError(f"cannot use {type(v).__name__} as a coefficient")


def coerce(v) -> Coefficient:
    return _coerce(v)


def frac_str(c) -> str:
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def parse_frac(s: str) -> mpq:
    return mpq(s)


def _poly_str(p: Poly) -> str:
    if not p:
        return "0"
    parts = []
    for e in sorted(p, reverse=True):
        c = p[e]
        mono = "*".join(
            (VAR_NAMES[i] if v == 1 else f"{VAR_NAMES[i]}^{v}")
            for i, v in enumerate(e) if v
        )
        cs = frac_str(c)
        if not mono:
            parts.append(cs)
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{cs}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def _poly_json(p: Poly) -> list:
    terms = []
    for e in sorted(p):
        terms.append({
            "x": list(e[:MAX_EVEN]),
            "k": list(e[MAX_EVEN:TAU]),
            "tau": e[TAU],
            "I": e[IMAG],
            "t": e[TPARAM],
            "c": frac_str(p[e]),
        })
    return terms


def _poly_from_json(terms: list) -> Poly:
    out: Poly = {}
    for t in terms:
        xs = list(t.get("x", []))
        ks = list(t.get("k", []))
        xs += [0] * (MAX_EVEN - len(xs))
        ks += [0] * (MAX_EVEN - len(ks))
        e = tuple(int(v) for v in xs + ks) + (int(t.get("tau", 0)), int(t.get("I", 0)),
                                              int(t.get("t", 0)))
        c = parse_frac(t["c"])
        if c:
            out[e] = c
    return out


ZERO = Coefficient()
ONE = Coefficient.const(1)
