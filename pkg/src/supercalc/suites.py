"""Seeded verification suites driven by the command line and the acceptance gate."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from .bv import (berezin_integral, bv_delta, check_F_chain, divergence, schwarz_integral,
                 volume_from_top_form)
from .cartan import (ConormalSpec, SuperForm, SuperVectorField, all_conormals, contact_form,
                     exp_primitive, liouville, normal_exp_identity, odd_symplectic, restrict)
from .charts import AFFINE, CIRCLE, base_chart, contact_chart, cotangent_chart, flat_cotangent, torus
from .coefficients import Coefficient
from .generators import Gen
from .grassmann import Superfunction
from .moduli import real_slice_chart, real_slice_delta, real_slice_linearization
from .symplectic import (darboux, deformed_isotropy_closedness, lagrangian_conormal, omega_hat,
                         perturbed, q0_on_conormal, q_field)


class SuiteError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int = 2
    m: int = 1
    K: int = 1
    cases: int = 20
    seed: int = 0


@dataclass
class VerificationReport:
    suite: str
    anchor: str
    cases: int
    failures: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"suite": self.suite, "anchor": self.anchor, "cases": self.cases,
                "passed": self.cases - len(self.failures), "ok": self.ok,
                "failures": sorted(self.failures, key=lambda f: f["case"]),
                "config": self.config}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _fail(case: int, **objs) -> dict:
    out = {"case": case}
    for k, v in objs.items():
        out[k] = v.to_json() if hasattr(v, "to_json") else v
    return out


def _check_range(name: str, value: int, lo: int, hi: int) -> None:
    if not lo <= value <= hi:
        raise SuiteError(f"{name} must lie in {lo}..{hi}, got {value}")


# ---------------------------------------------------------------------------


def suite_liouville(cfg: RunConfig):
    _check_range("n", cfg.n, 1, 4)
    cases, fails = 0, []
    for n in range(1, cfg.n + 1):
        for top in (AFFINE, CIRCLE):
            cY = flat_cotangent(n, top)
            th, eta = liouville(cY), odd_symplectic(cY)
            hat = contact_chart(cY)
            th_hat = contact_form(hat)
            for C in all_conormals(cY):
                checks = {"theta": restrict(th, C), "eta": restrict(eta, C),
                          "contact": restrict(th_hat, ConormalSpec(hat, C.normal))}
                for name, val in checks.items():
                    if not val.is_zero():
                        fails.append(_fail(cases, n=n, normal=sorted(C.normal), form=name, value=val))
                    cases += 1
    return cases, fails


def suite_delta_squared(cfg: RunConfig):
    _check_range("n", cfg.n, 1, 3)
    cY = flat_cotangent(cfg.n)
    fails = []
    for i, g in enumerate(Gen(cfg.seed).spawn(cfg.cases)):
        alpha = g.unit(cY)
        mu = volume_from_top_form(alpha, cY)
        f = g.superfunction(cY)
        val = bv_delta(bv_delta(f, mu), mu)
        if not val.is_zero():
            fails.append(_fail(i, f=f, alpha=alpha, value=val))
    return cfg.cases, fails


def suite_f_chain(cfg: RunConfig):
    _check_range("n", cfg.n, 1, 3)
    Y = base_chart(cfg.n)
    fails = []
    for i, g in enumerate(Gen(cfg.seed).spawn(cfg.cases)):
        if i == 0 and cfg.n == 1:
            # hand example: w = x^1, F(dx^1) = 1 = Delta(x^1 psi_1)
            w, alpha = SuperForm.from_components(Y, {(): Coefficient.x(0)}), Coefficient.const(1)
        else:
            w, alpha = g.even_form(Y), g.unit(Y)
        if not check_F_chain(w, alpha):
            fails.append(_fail(i, w=w, alpha=alpha))
    return cfg.cases, fails


def suite_q_nilpotent(cfg: RunConfig):
    _check_range("m", cfg.m, 1, 2)
    Y = base_chart(2 * cfg.m)
    fails = []
    for i, g in enumerate(Gen(cfg.seed).spawn(cfg.cases)):
        w = darboux(cfg.m) if i == 0 else perturbed(g.one_form(Y))
        Q = q_field(w)
        cY = Q.chart
        if not Q(omega_hat(w, cY)).is_zero():
            fails.append(_fail(i, omega=w.form(), check="Q(omega_hat)"))
            continue
        f = g.superfunction(cY, degree=2, terms=2)
        if not Q(Q(f)).is_zero():
            fails.append(_fail(i, omega=w.form(), f=f, check="Q(Q(f))"))
    return cfg.cases, fails


def suite_exp_identity(cfg: RunConfig):
    _check_range("n", cfg.n, 1, 4)
    cases, fails = 0, []
    for n in range(1, cfg.n + 1):
        for C in all_conormals(flat_cotangent(n)):
            diff = normal_exp_identity(C) - exp_primitive_d(C)
            if not diff.is_zero():
                fails.append(_fail(cases, n=n, normal=sorted(C.normal), value=diff))
            cases += 1
    return cases, fails


def exp_primitive_d(C: ConormalSpec) -> SuperForm:
    return SuperForm.from_function(exp_primitive(C)).d()


def suite_schwarz(cfg: RunConfig):
    _check_range("n", cfg.n, 2, 3)
    T = torus(cfg.n)
    cY = cotangent_chart(T)
    cases, fails = 0, []
    for i, g in enumerate(Gen(cfg.seed).spawn(cfg.cases)):
        if i % 3 == 2:
            w = g.even_form(T, max_degree=cfg.n - 1).d()  # exact: both sides must vanish
        else:
            w = g.even_form(T)
        alpha = g.unit(T)
        for C in all_conormals(cY):
            lhs, rhs = schwarz_integral(w, C, alpha)
            if lhs != rhs or (i % 3 == 2 and lhs):
                fails.append(_fail(cases, w=w, alpha=alpha, normal=sorted(C.normal),
                                   lhs=str(lhs), rhs=str(rhs)))
            cases += 1
    return cases, fails


def suite_graph_closedness(cfg: RunConfig):
    _check_range("m", cfg.m, 1, 2)
    w = darboux(cfg.m)
    C = lagrangian_conormal(cfg.m)
    Q0 = q0_on_conormal(w, C)
    sub = C.subchart()
    fails = []
    for i, g in enumerate(Gen(cfg.seed).spawn(cfg.cases)):
        f = g.odd(sub, density=0.8)
        val = Q0(deformed_isotropy_closedness(f, w, C))
        if not val.is_zero():
            fails.append(_fail(i, f=f, value=val))
    return cfg.cases, fails


def suite_real_slice(cfg: RunConfig):
    _check_range("m", cfg.m, 1, 2)
    ch = real_slice_chart(cfg.m)
    fails = []
    for i, g in enumerate(Gen(cfg.seed).spawn(cfg.cases)):
        psi = g.odd(ch, degree=2, density=0.7)
        rho = Superfunction.const(ch, g.unit(ch))
        if ch.q >= 2 and g.chance(0.5):
            soul = g.even(ch, degree=1, terms=1)
            rho = rho + soul - Superfunction.const(ch, soul.body())
        lhs, rhs = real_slice_linearization(psi, rho)
        if lhs != rhs or rhs != real_slice_delta(psi, rho) * 2:
            fails.append(_fail(i, Psi=psi, rho=rho, lhs=lhs, rhs=rhs))
    return cfg.cases, fails


def random_field(g: Gen, chart, parity: int) -> SuperVectorField:
    comps = {name: g.superfunction(chart, parity) for name in chart.even_names}
    comps.update({name: g.superfunction(chart, parity ^ 1) for name in chart.odd})
    return SuperVectorField(chart, comps)


def suite_integration_by_parts(cfg: RunConfig):
    _check_range("n", cfg.n, 1, 3)
    cY = cotangent_chart(torus(cfg.n))
    fails = []
    for i, g in enumerate(Gen(cfg.seed).spawn(cfg.cases)):
        V = random_field(g, cY, g.integer(0, 1))
        f = g.superfunction(cY, g.integer(0, 1))
        mu = volume_from_top_form(g.unit(cY), cY)
        lhs = berezin_integral(divergence(V, mu) * f, mu)
        rhs = -berezin_integral(V(f), mu)
        if lhs != rhs:
            fails.append(_fail(i, f=f, lhs=str(lhs), rhs=str(rhs)))
    return cfg.cases, fails


SUITES: dict[str, tuple[str, Callable]] = {
    "liouville-restriction": ("theta, eta and the contact form vanish on every coordinate conormal",
                              suite_liouville),
    "delta-squared": ("Delta^2 = 0 for volumes alpha^2", suite_delta_squared),
    "f-chain": ("F(dw) = Delta F(w)", suite_f_chain),
    "q-nilpotent": ("Q^2 = 0 and Q(omega-hat) = 0 for closed omega", suite_q_nilpotent),
    "exp-identity": ("exp* theta - theta_0 = d(sum psi_adot x^adot)", suite_exp_identity),
    "schwarz": ("integral over the conormal of F(w) against the half density = integral of w over X",
                suite_schwarz),
    "graph-closedness": ("omega-hat pulled back along the graph of df is Q_0-closed",
                         suite_graph_closedness),
    "real-slice": ("t-linear Im of the restricted volume over Re = div V_Psi = 2 Delta Psi",
                   suite_real_slice),
    "integration-by-parts": ("int (div V) f mu = -int V(f) mu", suite_integration_by_parts),
}


def run_suite(name: str, cfg: RunConfig) -> VerificationReport:
    if name not in SUITES:
        raise SuiteError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
    if cfg.cases < 1:
        raise SuiteError("cases must be positive")
    anchor, fn = SUITES[name]
    cases, fails = fn(cfg)
    return VerificationReport(name, anchor, cases, fails,
                              {"n": cfg.n, "m": cfg.m, "K": cfg.K, "cases": cfg.cases, "seed": cfg.seed})
