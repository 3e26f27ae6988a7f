from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dofcount.catalog import (
    koszul_pair,
    massive_spin2,
    maxwell_potential,
    maxwell_strength,
    proca_kg,
    proca_raw,
    trivial,
)
from dofcount.dof import (
    NOT_APPLICABLE,
    conjugation_check,
    dof_ext,
    dof_graded,
    dof_pipeline,
    equivalence_variant,
)
from dofcount.errors import InternalError, InvalidSystem
from dofcount.jets import jet_count
from dofcount.resolution import two_sided_complex
from dofcount.ring import LaurentPolynomial, Polynomial
from dofcount.system import DiffSystem, conjugate, symbol

from randsys import random_homogeneous_system

CORPUS = [
    (maxwell_strength, 4),
    (maxwell_potential, 4),
    (massive_spin2, 10),
    (proca_kg, 6),
    (koszul_pair, 0),
]


def lp(*coeffs):
    return LaurentPolynomial(dict(enumerate(coeffs)))


def test_dof_ext_examples():
    assert dof_ext(maxwell_strength())[0] == 4
    assert dof_ext(massive_spin2(1))[0] == 10
    assert dof_ext(proca_kg(4, 1))[0] == 6


def test_dof_graded_examples():
    n, qf, (ident, sym), _ = dof_graded(maxwell_strength())
    assert (n, qf, ident, sym) == (4, lp(6, -8, 2), [[2, 2]], [])
    assert dof_graded(symbol(proca_kg(4, 1)))[0] == 6
    assert dof_graded(symbol(massive_spin2(1)))[0] == 10
    with pytest.raises(InvalidSystem):
        dof_graded(proca_kg(4, 1))


def test_pipeline_raw_proca():
    rep = dof_pipeline(proca_raw(4, 1), methods=("ext", "graded", "brst"))
    assert rep.dof == 6
    assert not rep.flags["weakly_involutive"]
    assert any("completion" in n for n in rep.notes)
    assert rep.method_results == {"ext": 6, "graded": 6, "brst": 6}


def test_pipeline_maxwell():
    rep = dof_pipeline(maxwell_strength(), with_conjugate=True, methods=("ext", "graded", "brst"))
    assert rep.method_results == {"ext": 4, "graded": 4, "brst": 4}
    assert rep.flags["homogeneous"] and not rep.flags["gauge_invariant"]
    assert rep.conjugate_dof == 4


def test_trivial_system_has_no_dof():
    rep = dof_pipeline(trivial(4, 1), methods=("ext", "graded", "brst"))
    assert rep.dof == 0
    assert rep.u_data.is_zero


def test_dwi_without_completion_keeps_graded_not_applicable():
    # Ext only when only ext is requested
    rep = dof_pipeline(proca_kg(4, 1), methods=("ext",))
    assert rep.method_results["graded"] == NOT_APPLICABLE


def test_conjugation_check_examples():
    assert conjugation_check(proca_kg(4, 1)) == (6, 6, True)
    assert conjugation_check(maxwell_strength()) == (4, 4, True)
    lag = DiffSystem(2, ["a", "b"], [[Polynomial.var(2, 0) ** 2, Polynomial.var(2, 1)],
                                     [-Polynomial.var(2, 1), Polynomial.var(2, 1) ** 2]])
    assert conjugate(lag).matrix == lag.matrix
    assert conjugation_check(lag)[2]


def test_equivalence_variant_examples():
    mx = maxwell_strength()
    padded = [equivalence_variant(mx, s, keep_padding=True) for s in range(30)]
    assert any(v.n > 8 and v.m > 6 for v in padded)
    for v in padded[:8]:
        assert dof_ext(v)[0] == 4
    for s in range(5):
        assert dof_ext(equivalence_variant(proca_kg(4, 1), s))[0] == 6
    same = equivalence_variant(mx, 0, moves=0)
    assert same.matrix == mx.matrix


def test_no_gauge_shortcut():
    _, data = dof_ext(maxwell_strength())
    assert data.q_poly == lp(6, -8, 2)
    _, data = dof_ext(massive_spin2(1))
    assert data.q_poly == two_sided_complex(symbol(massive_spin2(1))).qf


def test_corpus_method_agreement():
    for make, n in CORPUS:
        rep = dof_pipeline(make(), with_conjugate=True, methods=("ext", "graded", "brst"))
        assert rep.dof == n
        assert rep.method_results == {"ext": n, "graded": n, "brst": n}
        assert rep.conjugate_dof == n


def test_disagreement_is_loud(monkeypatch):
    import dofcount.dof as dof

    real = dof.dof_graded

    def wrong(sys):
        n, qf, orders, cx = real(sys)
        return n + 1, qf, orders, cx

    monkeypatch.setattr(dof, "dof_graded", wrong)
    with pytest.raises(InternalError):
        dof.dof_pipeline(maxwell_strength())


def free_count(degs, d, N):
    return sum(comb(N - j + d - 1, d - 1) for j in degs if N >= j)


@pytest.mark.parametrize("make", [maxwell_strength, maxwell_potential, proca_kg, koszul_pair])
def test_complex_minus_homology_has_lower_degree(make):
    sys = make()
    rep = dof_pipeline(sys)
    cx, d = rep.complex, sys.dimension
    t = max(rep.u_data.stabilization_threshold, 1)
    top = max(2 * t, d + 4)
    jc = jet_count(sys, top + d, R=rep.gauge_generators)
    cum, diff = 0, []
    for N in range(top + d + 1):
        chi = sum((-1) ** i * free_count(cx.betti.degrees_at(i), d, N) for i in cx.betti.indices())
        cum += chi - jc.h_u[N]
        diff.append(cum)
    # cumulative degree <= d - 2 means the (d-1)-th difference vanishes from the threshold on
    for _ in range(d - 1):
        diff = [b - a for a, b in zip(diff, diff[1:])]
    assert all(x == 0 for x in diff[t:])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_random_method_agreement(seed):
    sys = random_homogeneous_system(seed)
    rep = dof_pipeline(sys, with_conjugate=True, methods=("ext", "graded", "brst"))
    assert rep.method_results["ext"] == rep.method_results["graded"] == rep.method_results["brst"]
    assert rep.conjugate_dof == rep.dof
    assert rep.u_data.is_zero or rep.u_data.dimension <= sys.dimension - 1
    assert dof_ext(equivalence_variant(sys, seed))[0] == rep.dof
