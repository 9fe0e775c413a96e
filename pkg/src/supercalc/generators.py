"""Seeded random generators for exact test objects.

A ``Gen`` wraps a numpy ``Generator``; ``spawn`` hands out independent
children so every case of a suite gets its own stream and results do not
depend on evaluation order.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .cartan import SuperForm
from .charts import SuperChart
from .coefficients import Coefficient
from .grassmann import ODD, EVEN, Superfunction


class Gen:
    def __init__(self, seed: int | np.random.SeedSequence = 0):
        self.seq = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
        self.rng = np.random.default_rng(self.seq)

    def spawn(self, n: int) -> list["Gen"]:
        return [Gen(s) for s in self.seq.spawn(n)]

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]."""
        return int(self.rng.integers(lo, hi + 1))

    def nonzero(self, bound: int = 3) -> int:
        v = self.integer(1, bound)
        return v if self.rng.random() < 0.5 else -v

    def chance(self, p: float) -> bool:
        return bool(self.rng.random() < p)

    # -- coefficients ---------------------------------------------------------
    def polynomial(self, n: int, degree: int = 3, terms: int = 3, bound: int = 3) -> Coefficient:
        out = Coefficient.const(0)
        for _ in range(self.integer(1, terms)):
            mono = Coefficient.const(self.nonzero(bound))
            for _ in range(self.integer(0, degree)):
                mono = mono * Coefficient.x(self.integer(0, n - 1))
            out = out + mono
        return out

    def fourier(self, n: int, K: int = 1, terms: int = 3, bound: int = 3) -> Coefficient:
        out = Coefficient.const(0)
        for _ in range(self.integer(1, terms)):
            k = [self.integer(-K, K) for _ in range(n)]
            out = out + Coefficient.mode(k, self.nonzero(bound))
        return out

    def coefficient(self, chart: SuperChart, **kw) -> Coefficient:
        if chart.p == 0:
            return Coefficient.const(self.nonzero())
        if chart.is_torus():
            return self.fourier(chart.p, kw.get("K", 1), kw.get("terms", 3))
        return self.polynomial(chart.p, kw.get("degree", 3), kw.get("terms", 3))

    def unit(self, chart: SuperChart, degree: int = 2) -> Coefficient:
        """Polynomial (or Fourier polynomial) with a nonzero constant term."""
        c0 = Coefficient.const(self.nonzero())
        if chart.p == 0 or self.chance(0.2):
            return c0
        if chart.is_torus():
            k = [self.integer(-1, 1) for _ in range(chart.p)]
            if not any(k):
                k[0] = 1
            return c0 * 2 + Coefficient.mode(k, self.nonzero(1))
        mono = Coefficient.const(self.nonzero())
        for _ in range(self.integer(1, degree)):
            mono = mono * Coefficient.x(self.integer(0, chart.p - 1))
        return c0 + mono

    # -- superfunctions and forms --------------------------------------------
    def superfunction(self, chart: SuperChart, parity: int | None = None,
                      density: float = 0.5, **kw) -> Superfunction:
        terms = {}
        for k in range(chart.q + 1):
            if parity is not None and k % 2 != parity:
                continue
            for J in combinations(range(chart.q), k):
                if self.chance(density):
                    terms[J] = self.coefficient(chart, **kw)
        return Superfunction(chart, terms)

    def odd(self, chart: SuperChart, **kw) -> Superfunction:
        return self.superfunction(chart, ODD, **kw)

    def even(self, chart: SuperChart, **kw) -> Superfunction:
        return self.superfunction(chart, EVEN, **kw)

    def even_form(self, Y: SuperChart, max_degree: int = 3, density: float = 0.5, **kw) -> SuperForm:
        comps = {}
        for k in range(min(max_degree, Y.p) + 1):
            for I in combinations(range(Y.p), k):
                if self.chance(density):
                    comps[I] = self.coefficient(Y, **kw)
        return SuperForm.from_components(Y, comps)

    def one_form(self, Y: SuperChart, min_degree: int = 2, **kw) -> SuperForm:
        """1-form whose coefficients vanish to order ``min_degree`` at the origin."""
        comps = {}
        for a in range(Y.p):
            if self.chance(0.6):
                c = Coefficient.const(self.nonzero(2))
                for _ in range(self.integer(min_degree, min_degree + 1)):
                    c = c * Coefficient.x(self.integer(0, Y.p - 1))
                comps[(a,)] = c
        return SuperForm.from_components(Y, comps)
