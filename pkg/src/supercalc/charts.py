"""Coordinate charts of supermanifolds.

Even coordinate ``i`` of every chart lives in coefficient slot ``i``; odd
coordinate ``j`` is Grassmann generator ``j``.  Derived charts (cotangent,
contact extension) keep the slots of the chart they come from, which is what
lets restrictions and normal-exponential pullbacks work without reindexing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .coefficients import MAX_EVEN

AFFINE = "affine"
CIRCLE = "circle"

BASE = "base"
PI_OMEGA1 = "pi-omega1"
PI_T = "pi-t"
CONTACT = "contact"
ABSTRACT = "abstract"

PROVENANCES = (BASE, PI_OMEGA1, PI_T, CONTACT, ABSTRACT)


class ChartError(ValueError):
    pass


@dataclass(frozen=True)
class EvenCoord:
    name: str
    topology: str = AFFINE

    def __post_init__(self):
        if self.topology not in (AFFINE, CIRCLE):
            raise ChartError(f"unknown topology {self.topology!r}")


@dataclass(frozen=True)
class SuperChart:
    """Named even/odd coordinates of a (p|q) chart."""

    even: tuple[EvenCoord, ...]
    odd: tuple[str, ...] = ()
    provenance: str = ABSTRACT

    def __post_init__(self):
        names = [c.name for c in self.even] + list(self.odd)
        if len(set(names)) != len(names):
            raise ChartError(f"coordinate names not distinct: {names}")
        if len(self.even) > MAX_EVEN:
            raise ChartError(f"at most {MAX_EVEN} even coordinates supported")
        if self.provenance not in PROVENANCES:
            raise ChartError(f"unknown provenance {self.provenance!r}")
        if self.provenance == PI_OMEGA1 and len(self.odd) != len(self.even):
            raise ChartError("a cotangent chart pairs every x^a with one psi_a")
        if self.provenance == CONTACT and len(self.odd) != len(self.even) + 1:
            raise ChartError("a contact chart carries exactly one extra odd coordinate")

    @property
    def p(self) -> int:
        return len(self.even)

    @property
    def q(self) -> int:
        return len(self.odd)

    @property
    def dim(self) -> tuple[int, int]:
        return (self.p, self.q)

    @property
    def even_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.even)

    def is_torus(self) -> bool:
        return all(c.topology == CIRCLE for c in self.even)

    def even_index(self, name: str) -> int:
        return self.even_names.index(name)

    def odd_index(self, name: str) -> int:
        return self.odd.index(name)

    def to_json(self) -> dict:
        return {
            "even": [{"name": c.name, "topology": c.topology} for c in self.even],
            "odd": list(self.odd),
            "provenance": self.provenance,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "SuperChart":
        even = tuple(EvenCoord(e["name"], e.get("topology", AFFINE)) for e in data["even"])
        return cls(even, tuple(data.get("odd", [])), data.get("provenance", ABSTRACT))


def base_chart(n: int, topology: str = AFFINE, prefix: str = "x") -> SuperChart:
    """Purely even chart ``(x1, ..., xn)``."""
    return SuperChart(tuple(EvenCoord(f"{prefix}{a + 1}", topology) for a in range(n)),
                      (), BASE)


def torus(n: int) -> SuperChart:
    return base_chart(n, CIRCLE)


def cotangent_chart(Y: SuperChart) -> SuperChart:
    """The (n|n) chart of Pi Omega^1 Y with psi_a paired to x^a."""
    if Y.q:
        raise ChartError("cotangent_chart expects a purely even chart")
    odd = tuple(f"psi{c.name[1:] if c.name.startswith('x') else '_' + c.name}"
                for c in Y.even)
    return SuperChart(Y.even, odd, PI_OMEGA1)


def tangent_chart(Y: SuperChart) -> SuperChart:
    """Pi T Y: odd coordinates dx^a, so functions are differential forms."""
    if Y.q:
        raise ChartError("tangent_chart expects a purely even chart")
    return SuperChart(Y.even, tuple(f"d{c.name}" for c in Y.even), PI_T)


def contact_chart(cY: SuperChart) -> SuperChart:
    """Y-hat = Y x R^{0|1}; the extra odd coordinate is the last one."""
    if cY.provenance != PI_OMEGA1:
        raise ChartError("contact extension needs a cotangent chart")
    return SuperChart(cY.even, cY.odd + ("eps",), CONTACT)


def flat_cotangent(n: int, topology: str = AFFINE) -> SuperChart:
    return cotangent_chart(base_chart(n, topology))
