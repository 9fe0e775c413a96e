from fractions import Fraction
from math import comb

import pytest

from supercalc.bv import bv_delta, flat_volume
from supercalc.charts import cotangent_chart, torus
from supercalc.coefficients import Coefficient
from supercalc.grassmann import Superfunction
from supercalc.hodge import (RangeError, betti, build_complex, delta_hodge_bridge,
                             fiber_chart, hodge_report, identification_sign, mclean_operator_kernel,
                             star_sign)
from supercalc.cartan import ConormalSpec


def test_basis_sizes_and_ranges():
    c = build_complex(1, 1)
    assert c.size == 6 and len(c.basis(0)) == 3 and len(c.basis(1)) == 3
    assert build_complex(2, 1).size == 36
    for bad in ((0, 1), (5, 1), (2, 0)):
        with pytest.raises(RangeError):
            build_complex(*bad)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_betti_numbers_are_binomial(m):
    rep = betti(build_complex(m, 1))
    assert rep.betti == [comb(m, k) for k in range(m + 1)]
    assert rep.total == 2 ** m == mclean_operator_kernel(build_complex(m, 1))
    assert rep.kernel_per_degree == rep.betti
    assert rep.harmonic_is_constant


@pytest.mark.parametrize("m,K", [(1, 2), (1, 3), (2, 2)])
def test_betti_independent_of_cutoff(m, K):
    assert betti(build_complex(m, K)).betti == [comb(m, k) for k in range(m + 1)]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_complex_sanity(m):
    c = build_complex(m, 1)
    assert c.dd_zero()
    assert c.d_matrix_check()


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_star_signs(m):
    c = build_complex(m, 1)
    for p in range(m + 1):
        assert c.star_star_sign(p) == {(-1) ** (p * (m - p))}
    for p in range(m):
        assert c.adjoint_sign(p) == (-1) ** (m * p + 1)


def test_star_examples():
    assert star_sign((), 2) == (1, (0, 1))
    assert star_sign((0,), 2) == (1, (1,))
    assert star_sign((1,), 2) == (-1, (0,))


def test_bridge_single_example():
    # e^{2 pi i x} dx on T^1: *d* gives tau e, and Delta of its image is tau e
    chart = fiber_chart(1)
    e = Coefficient.mode([1])
    lhs = bv_delta(Superfunction(chart, {(0,): e}), flat_volume(chart))
    assert lhs == Superfunction.const(chart, Coefficient.tau() * e)
    c = build_complex(1, 1)
    assert c.codiff_image((1,), (0,)) == {((1,), ()): 1}


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_bridge_constant_uniform(m):
    rep = delta_hodge_bridge(build_complex(m, 1))
    assert rep.constant == Fraction(1, 2)
    assert rep.deviations == [] and rep.max_deviation == "0"
    assert rep.cases == build_complex(m, 1).size


def test_bridge_on_conormal_chart():
    T4 = cotangent_chart(torus(4))
    C = ConormalSpec(T4, frozenset({2, 3}))
    with pytest.raises(RangeError):
        delta_hodge_bridge(build_complex(1, 1), C)
    assert delta_hodge_bridge(build_complex(2, 1), C).constant == Fraction(1, 2)
    T2 = cotangent_chart(torus(2))
    rep = delta_hodge_bridge(build_complex(1, 1), ConormalSpec(T2, frozenset({1})))
    assert rep.constant == Fraction(1, 2) and not rep.deviations


def test_constant_forms_are_harmonic_on_both_sides():
    c = build_complex(2, 1)
    for I in c.multi_indices(1):
        assert c.codiff_image((0, 0), I) == {} and c.d_image((0, 0), I) == {}


def test_identification_signs():
    assert [identification_sign(2, p) for p in range(3)] == [1, 1, 1]
    assert [identification_sign(3, p) for p in range(4)] == [1, 1, -1, -1]


def test_report_shape():
    rep = hodge_report(2, 1)
    assert rep["betti"] == [1, 2, 1] and rep["total"] == 4 and rep["kernel_d_stard"] == 4
    assert rep["bridge"]["max_deviation"] == "0" and rep["bridge"]["constant"] == "1/2"
    assert "bridge" not in hodge_report(1, 2, bridge=False)
