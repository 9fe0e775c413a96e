from itertools import combinations

import pytest
from hypothesis import given, settings

from supercalc.cartan import ConormalSpec, SuperForm, contract, odd_symplectic
from supercalc.charts import base_chart, cotangent_chart, torus
from supercalc.coefficients import Coefficient
from supercalc.grassmann import Superfunction
from supercalc.symplectic import (EvenSymplectic, SymplecticError, darboux, deformed_isotropy_closedness,
                                  inverse_matrix, is_coisotropic_plane, is_lagrangian_plane,
                                  isotropy_check, lagrangian_conormal, omega_hat, perturbed,
                                  q0_on_conormal, q_field, q_restriction_as_derham)

from helpers import gen, seeds

S = settings(max_examples=15, deadline=None)


def P(ch, j):
    return Superfunction.psi(ch, j)


def test_omega_hat_darboux():
    w1 = darboux(1)
    cY = cotangent_chart(w1.chart)
    assert omega_hat(w1) == P(cY, 0) * P(cY, 1) * -2
    w2 = darboux(2)
    cY2 = cotangent_chart(w2.chart)
    assert omega_hat(w2) == (P(cY2, 0) * P(cY2, 2) + P(cY2, 1) * P(cY2, 3)) * -2


def test_q_darboux():
    Q = q_field(darboux(1))
    cY = Q.chart
    assert Q.component("x1") == P(cY, 1) * -2
    assert Q.component("x2") == P(cY, 0) * 2
    assert Q.component("psi1").is_zero() and Q.component("psi2").is_zero()
    # defining relation iota_Q eta = -d(omega-hat)
    assert contract(Q, odd_symplectic(cY)) == -SuperForm.from_function(omega_hat(darboux(1))).d()


def test_invalid_forms_rejected():
    Y = base_chart(2)
    with pytest.raises(SymplecticError):
        EvenSymplectic(Y, ((0, 1), (1, 0)))
    with pytest.raises(SymplecticError):
        EvenSymplectic(Y, ((0, 0), (0, 0)))
    with pytest.raises(SymplecticError):
        EvenSymplectic(base_chart(3), ((0,) * 3,) * 3)
    Y4 = base_chart(4)
    bad = SuperForm.from_components(Y4, {(0, 1): Coefficient.x(2) + 1, (2, 3): 1})
    with pytest.raises(SymplecticError):
        EvenSymplectic.from_form(bad)


def test_inverse_matrix():
    x = Coefficient.x(0)
    M = [[Coefficient.const(0), 1 + x], [-(1 + x), Coefficient.const(0)]]
    inv = inverse_matrix(M)
    for i in range(2):
        for j in range(2):
            assert sum((M[i][k] * inv[k][j] for k in range(2)), Coefficient.const(0)) == (1 if i == j else 0)


def _q_identities(w):
    Q = q_field(w)
    cY = Q.chart
    if not Q(omega_hat(w, cY)).is_zero():
        return False
    coords = [Superfunction.x(cY, a) for a in range(cY.p)] + [P(cY, j) for j in range(cY.q)]
    return all(Q(Q(f)).is_zero() for f in coords)


def test_q_nilpotent_darboux():
    assert _q_identities(darboux(1)) and _q_identities(darboux(2))


@S
@given(seeds)
def test_q_nilpotent_perturbed(s):
    g = gen(s)
    for m in (1, 2):
        w = perturbed(g.one_form(base_chart(2 * m)))
        assert w.is_closed()
        assert _q_identities(w)
        Q = q_field(w)
        f = g.superfunction(Q.chart, degree=2, terms=2)
        assert Q(Q(f)).is_zero()


def test_q_nilpotency_fails_for_non_closed_form():
    Y4 = base_chart(4)
    bad = SuperForm.from_components(Y4, {(0, 1): Coefficient.x(2) + 1, (2, 3): 1})
    w = EvenSymplectic.from_form(bad, check_closed=False)
    assert not w.is_closed()
    assert not _q_identities(w)


# -- isotropy ---------------------------------------------------------------

def test_isotropy_examples():
    w = darboux(2)
    cY = cotangent_chart(w.chart)
    assert isotropy_check(lagrangian_conormal(2), w)
    assert is_lagrangian_plane(w, {2, 3})
    # X = {x2 = x4 = 0} keeps the conjugate pair (x1, x3): symplectic, not isotropic
    C = ConormalSpec(cY, frozenset({1, 3}))
    assert not isotropy_check(C, w)
    assert not is_lagrangian_plane(w, {1, 3})
    # m = 0 degenerate
    w0 = EvenSymplectic(base_chart(0), ())
    assert isotropy_check(ConormalSpec(cotangent_chart(base_chart(0)), frozenset()), w0)


def test_isotropy_matches_plane_tests_darboux():
    for m in (1, 2):
        w = darboux(m)
        cY = cotangent_chart(w.chart)
        for r in range(2 * m + 1):
            for N in combinations(range(2 * m), r):
                iso = isotropy_check(ConormalSpec(cY, frozenset(N)), w)
                assert iso == is_coisotropic_plane(w, N)
                if r == m:
                    assert iso == is_lagrangian_plane(w, N)


@S
@given(seeds)
def test_isotropy_matches_plane_tests_perturbed(s):
    w = perturbed(gen(s).one_form(base_chart(4)))
    cY = cotangent_chart(w.chart)
    for N in combinations(range(4), 2):
        iso = isotropy_check(ConormalSpec(cY, frozenset(N)), w)
        assert iso == is_coisotropic_plane(w, N) == is_lagrangian_plane(w, N)


# -- Q on the conormal as the de Rham differential --------------------------

def test_q_restriction_is_de_rham():
    for m, Y in ((1, base_chart(2)), (1, torus(2)), (2, base_chart(4))):
        w = darboux(m, Y)
        table = q_restriction_as_derham(lagrangian_conormal(m, Y), w)
        assert table.holds and table.rows
    table = q_restriction_as_derham(lagrangian_conormal(1), darboux(1))
    sub = lagrangian_conormal(1).subchart()
    assert table.generators["x1"] == Superfunction.psi(sub, 0) * -2
    with pytest.raises(SymplecticError):
        q_restriction_as_derham(ConormalSpec(cotangent_chart(base_chart(4)), frozenset({1, 3})), darboux(2))


# -- graphs of odd functions ------------------------------------------------

def test_graph_closedness_examples():
    for m in (1, 2):
        w = darboux(m)
        C = lagrangian_conormal(m)
        sub = C.subchart()
        Q0 = q0_on_conormal(w, C)
        assert deformed_isotropy_closedness(Superfunction.zero(sub), w, C).is_zero()
        f = Superfunction.x(sub, 0) * Superfunction.psi(sub, 0)
        assert Q0(deformed_isotropy_closedness(f, w, C)).is_zero()


@S
@given(seeds)
def test_graph_closedness_random(s):
    g = gen(s)
    for m in (1, 2):
        w = darboux(m)
        C = lagrangian_conormal(m)
        f = g.odd(C.subchart(), density=0.8)
        assert q0_on_conormal(w, C)(deformed_isotropy_closedness(f, w, C)).is_zero()
