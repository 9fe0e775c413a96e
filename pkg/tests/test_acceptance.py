"""Acceptance gate: fourteen criteria, each printing one PASS/FAIL line with its runtime.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``.
"""

import json
import subprocess
import sys
import time

import pytest

from supercalc.bv import check_F_chain
from supercalc.cartan import (ConormalSpec, SuperForm, all_conormals, contact_form, liouville,
                              odd_symplectic, restrict)
from supercalc.charts import AFFINE, CIRCLE, base_chart, contact_chart, flat_cotangent
from supercalc.coefficients import Coefficient
from supercalc.generators import Gen
from supercalc.grassmann import Superfunction
from supercalc.hodge import build_complex, delta_hodge_bridge
from supercalc.moduli import torus_moduli
from supercalc.suites import RunConfig, run_suite
from supercalc.symplectic import EvenSymplectic, omega_hat, q_field

# value of c in Delta(iota w) = c * iota(2 *d* w) under the naive identification
BRIDGE_CONSTANT = "1/2"


def _sweep(check):
    bad = 0
    for n in (1, 2, 3):
        for top in (AFFINE, CIRCLE):
            for C in all_conormals(flat_cotangent(n, top)):
                bad += not check(C)
    return bad == 0, "all conormals, n <= 3, affine and circle"


def c1():
    return _sweep(lambda C: restrict(liouville(C.chart), C).is_zero()
                  and restrict(odd_symplectic(C.chart), C).is_zero())


def c2():
    def check(C):
        hat = contact_chart(C.chart)
        return restrict(contact_form(hat), ConormalSpec(hat, C.normal)).is_zero()
    return _sweep(check)


def _suite(name, cases, **kw):
    reps = []
    for key, values in kw.items():
        for v in values:
            reps.append(run_suite(name, RunConfig(cases=cases, seed=2024, **{key: v})))
    ok = all(r.ok for r in reps)
    return ok, ", ".join(f"{r.cases - len(r.failures)}/{r.cases}" for r in reps)


def c3():
    return _suite("delta-squared", 200, n=(1, 2, 3))


def c4():
    ok, detail = _suite("f-chain", 200, n=(1, 2, 3))
    # negative control: the opposite Hamiltonian sign must break the chain
    g = Gen(99)
    flipped = sum(not check_F_chain(g.even_form(base_chart(2)), 1, sign=1) for _ in range(50))
    return ok and flipped > 0, detail + f"; flipped sign fails {flipped}/50"


def c5():
    ok, detail = _suite("q-nilpotent", 51, m=(1, 2))
    Y4 = base_chart(4)
    bad = SuperForm.from_components(Y4, {(0, 1): Coefficient.x(2) + 1, (2, 3): 1})
    w = EvenSymplectic.from_form(bad, check_closed=False)
    Q = q_field(w)
    cY = Q.chart
    coords = [Superfunction.x(cY, a) for a in range(4)] + [Superfunction.psi(cY, j) for j in range(4)]
    broken = (not Q(omega_hat(w, cY)).is_zero()) or any(not Q(Q(f)).is_zero() for f in coords)
    return ok and broken, detail + f"; non-closed control detected: {broken}"


def c6():
    return _suite("exp-identity", 1, n=(4,))


def c7():
    return _suite("graph-closedness", 50, m=(1, 2))


def c8():
    return _suite("schwarz", 30, n=(2, 3))


def c9():
    return _suite("integration-by-parts", 100, n=(1, 2, 3))


def c10():
    return _suite("real-slice", 50, m=(1, 2))


def c11():
    reps = [delta_hodge_bridge(build_complex(m, 1)) for m in (1, 2)]
    ok = all(r.to_json()["constant"] == BRIDGE_CONSTANT and not r.deviations for r in reps)
    return ok, "; ".join(f"m={m}: {r.cases} basis elements, constant {r.to_json()['constant']}"
                         for m, r in zip((1, 2), reps))


def c12():
    got = [(r.mclean_dim, r.extended_total) for r in map(torus_moduli, (1, 2, 3))]
    return got == [(1, 2), (2, 4), (3, 8)], f"{got}"


def _cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "supercalc.cli", *argv],
                          capture_output=True, check=False)
    return proc.returncode, proc.stdout


def c13():
    code, out = _cli("moduli", "p1", "--degrees", "1,1")
    rep = json.loads(out)
    return code == 0 and (rep["even"], rep["odd"]) == (4, 3), f"({rep['even']}|{rep['odd']})"


def c14():
    runs = [("verify", "delta-squared", "--n", "2", "--cases", "20", "--seed", "5"),
            ("verify", "schwarz", "--n", "2", "--cases", "6", "--seed", "5"),
            ("verify", "real-slice", "--m", "2", "--cases", "10", "--seed", "5"),
            ("hodge", "--m", "2", "--K", "1")]
    same = all(_cli(*r) == _cli(*r) for r in runs)
    return same, f"{len(runs)} commands run twice in fresh processes"


CRITERIA = [
    (1, "Liouville and odd symplectic forms vanish on conormals", c1, 1),
    (2, "contact form vanishes on conormals", c2, 1),
    (3, "Delta^2 = 0, 200 cases per n = 1, 2, 3", c3, 30),
    (4, "F(dw) = Delta F(w), 200 forms per n, with sign control", c4, 30),
    (5, "Q^2 = 0 and Q(omega-hat) = 0, Darboux plus 50 closed perturbations, m <= 2", c5, 30),
    (6, "normal exponential primitive, n <= 4", c6, 1),
    (7, "graph of df keeps omega-hat Q_0-closed, 50 cases, m = 1, 2", c7, 30),
    (8, "Schwarz integral identity on T^2, T^3", c8, 10),
    (9, "integration by parts, 100 cases per torus", c9, 10),
    (10, "real-slice linearisation = div V_Psi = 2 Delta Psi, 50 cases, m = 1, 2", c10, 30),
    (11, f"Delta <-> *d* bridge, uniform constant {BRIDGE_CONSTANT}, m <= 2, K = 1", c11, 30),
    (12, "torus moduli (mclean, extended) for m = 1, 2, 3", c12, 30),
    (13, "p1 with normal degrees 1,1 gives (4|3)", c13, 1),
    (14, "byte-identical reports for identical seeds", c14, 60),
]


def evaluate(number, title, fn, budget):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    fast = dt < budget
    status = "PASS" if ok and fast else "FAIL"
    line = f"{status} [{number:2d}] {title} ({dt:.2f} s, budget {budget} s) :: {detail}"
    return ok and fast, line


@pytest.mark.parametrize("number,title,fn,budget", CRITERIA, ids=[f"criterion{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, title, fn, budget, capsys):
    ok, line = evaluate(number, title, fn, budget)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
